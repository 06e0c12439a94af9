import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vlloop import core
from vlloop.fnspace import FunctionTable, build_transversal, f_rbar
from vlloop.termlang import (ZERO, Add, FApp, LoopMul, Neg, TermSyntaxError, UnboundVariableError, Var,
                             build_fr_term, build_gk_term, build_t_term, evaluate, fr_matrix, linear_term,
                             parse, random_term, table, to_text)


def _scalar_table(k, fn):
    vals = [0] * 12 ** k
    for x in itertools.product(range(12), repeat=k):
        vals[sum(v * 12 ** i for i, v in enumerate(x))] = fn(x)
    return FunctionTable(k, vals)


def test_parse_examples():
    assert parse("(f x1 (+ x2 x2))") == FApp(Var(1), Add(Var(2), Var(2)))
    assert parse("(ldot x1 x2)") == LoopMul(Var(1), Var(2))
    assert parse(" ( + x1 x2 x3 ) ") == Add(Add(Var(1), Var(2)), Var(3))
    assert parse("(neg 0)") == Neg(ZERO)


@pytest.mark.parametrize("text, pos", [("(+ x1", 0), ("(g x1 x2)", 1), ("(+ x1 y)", 6),
                                       ("x0", 0), (")", 0), ("(f x1)", 1), ("x1 x2", 3), ("", 0)])
def test_parse_errors(text, pos):
    with pytest.raises(TermSyntaxError) as err:
        parse(text)
    assert err.value.position == pos


def test_print_parse_roundtrip():
    rng = random.Random(7)
    for _ in range(1000):
        t = random_term(rng, 4, depth=5)
        assert parse(to_text(t)) == t


@settings(max_examples=100)
@given(st.lists(st.sampled_from(["x1", "x2", "0", "(neg x1)", "(f x2 x1)"]), min_size=2, max_size=5))
def test_text_roundtrip_on_flat_sums(parts):
    text = "(+ " + " ".join(parts) + ")"
    assert to_text(parse(text)) == text


def test_evaluate_examples():
    assert evaluate(FApp(Var(1), ZERO), [1]) == 4
    assert evaluate(LoopMul(Var(1), Var(2)), [1, 3]) == 8
    assert evaluate(Neg(Var(1)), [5]) == 7
    with pytest.raises(UnboundVariableError):
        evaluate(Var(3), [1, 2])


def test_table_examples():
    assert table(Var(1), 1) == FunctionTable.linear([1])
    assert table(FApp(Var(1), Var(2)), 2) == _scalar_table(2, lambda x: core.f_map(*x))
    assert table(ZERO, 2) == FunctionTable.zero(2)
    with pytest.raises(UnboundVariableError):
        table(Var(2), 1)


def test_t_term():
    t = build_t_term()
    assert evaluate(t, [1, 3]) == 4
    assert evaluate(t, [0, 0]) == 0
    assert table(t, 2) == _scalar_table(2, lambda x: core.t_map(*x))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_gk_term(k):
    assert table(build_gk_term(k), k) == _scalar_table(k, lambda x: core.g_map(k, x))


def test_gk3_point():
    assert evaluate(build_gk_term(3), [1, 0, 0]) == 4


def test_gk_recursion_has_ten_summands():
    t = build_gk_term(3)
    count = 0
    node = t
    while isinstance(node, Add):
        count += 1
        node = node.left
    assert count + 1 == 10


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fr_matrix_maps_rep_to_e1(k):
    for r in build_transversal(k):
        m = fr_matrix(r)
        image = [sum(a * b for a, b in zip(row, r)) % 4 for row in m]
        assert image == [1] + [0] * (k - 1)
        # invertible mod 4: odd determinant
        assert round(np.linalg.det(np.array(m))) % 2 == 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fr_term(k):
    for r in build_transversal(k):
        assert table(build_fr_term(k, r), k) == f_rbar(k, r)


def test_fr_term_examples():
    assert table(build_fr_term(1, (1,)), 1) == _scalar_table(1, lambda x: core.g_map(1, x))
    assert table(build_fr_term(2, (1, 0)), 2) == _scalar_table(2, lambda x: core.f_map(*x))
    with pytest.raises(ValueError):
        build_fr_term(2, (3, 0))


def test_loop_mul_desugaring():
    a, b = Var(1), Var(2)
    assert table(LoopMul(a, b), 2) == table(Add(Add(a, b), FApp(a, Add(a, b))), 2)


def test_linear_term():
    assert linear_term([0, 0]) == ZERO
    assert table(linear_term([3, 11]), 2) == FunctionTable.linear([3, 11])
