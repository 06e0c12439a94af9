import random

import pytest
from hypothesis import given, settings, strategies as st

from vlloop.fnspace import ResourceLimitError, decompose
from vlloop.rewriter import (Identity, RewriteError, TermNormalForm, f_identities, identity_basis, nf_monomial_count,
                             normalize, reconstruct, s_keys, t_keys, terms_equal, to_function_normal_form,
                             verify_identity, verify_nf_independence)
from vlloop import rewriter
from vlloop.termlang import ZERO, FApp, Var, parse, random_term, table


def test_basis_shape():
    ids = f_identities()
    assert len(ids) == 9
    assert ids[3].lhs == parse("(f 0 x1)") and ids[3].rhs == ZERO
    assert ids[4].lhs == parse("(f x1 (+ x2 x2 x2))") and ids[4].rhs == parse("(f x1 x2)")
    assert ids[0].nvars == 6
    assert len(identity_basis()) == 14


@pytest.mark.parametrize("ident", identity_basis(), ids=lambda i: i.name)
def test_identities_hold(ident):
    assert verify_identity(ident) is None


def test_mutated_identity_fails():
    bad = Identity("mut", parse("(f x1 (+ x2 x2 x2))"), parse("(f x1 (+ x2 x2))"), 2)
    cex = verify_identity(bad)
    assert cex is not None
    x, y = cex
    from vlloop.core import f_map
    assert f_map(x, 3 * y % 12) != f_map(x, 2 * y % 12)


@pytest.mark.parametrize("k, count", [(1, 1), (2, 6), (3, 28), (4, 120), (5, 496), (6, 2016)])
def test_monomial_count(k, count):
    assert nf_monomial_count(k) == count == 2 ** (k - 1) * (2 ** k - 1) == (4 ** k - 2 ** k) // 2


def test_per_index_count():
    for k in range(1, 6):
        for i in range(1, k + 1):
            n = sum(1 for key in s_keys(k) if key[0] == i) + sum(1 for key in t_keys(k) if key[0] == i)
            assert n == 2 ** (i - 1) * 4 ** (k - i)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_independence(k):
    assert verify_nf_independence(k) == nf_monomial_count(k)


@pytest.mark.parametrize("text, k", [("(f x1 x1)", 1), ("(f (+ x1 x1) x2)", 2), ("(f x1 x1)", 2)])
def test_normalize_to_zero(text, k):
    nf = normalize(text, k)
    assert nf == TermNormalForm(k, (0,) * k)


def test_normalize_f_3y():
    assert normalize("(f x1 (+ x2 x2 x2))", 2) == normalize("(f x1 x2)", 2)
    assert normalize("(f x1 x2)", 2).v == {(1, (), (1,)): 1}


def test_reconstruct_examples():
    assert reconstruct(TermNormalForm(2, (0, 0))) == ZERO
    assert reconstruct(TermNormalForm(2, (1, 0))) == Var(1)
    assert reconstruct(TermNormalForm(2, (0, 0), {(1, (), (1,)): 1})) == FApp(Var(1), Var(2))


def test_terms_equal_examples():
    assert terms_equal("(f x1 x2)", "(f x1 (+ x2 x2 x2))", 2)
    assert not terms_equal("(f x1 x2)", "(f x2 x1)", 2)
    assert terms_equal("(+ x1 (+ x1 x1 x1 x1 x1 x1 x1 x1 x1 x1 x1 x1))", "x1", 1)


def test_nf_text_roundtrip():
    rng = random.Random(2)
    for _ in range(50):
        nf = normalize(random_term(rng, 3, 5), 3)
        assert TermNormalForm.from_text(nf.to_text()) == nf


def test_nf_text_rejects_bad_keys():
    with pytest.raises(ValueError):
        TermNormalForm.from_text("u: 0 0\ns 1 - 3 1\n")
    with pytest.raises(ValueError):
        TermNormalForm.from_text("s 1 - 1 1\n")


@pytest.mark.parametrize("k", [1, 2, 3])
def test_roundtrip_with_step_checks(k):
    rng = random.Random(100 + k)
    for _ in range(150):
        t = random_term(rng, k, depth=6)
        nf = normalize(t, k, check=True)
        assert table(reconstruct(nf), k) == table(t, k)


def test_idempotent_on_sampled_normal_forms():
    rng = random.Random(4)
    for k in (1, 2, 3):
        s, t = list(s_keys(k)), list(t_keys(k))
        for _ in range(40):
            nf = TermNormalForm(k, tuple(rng.randrange(12) for _ in range(k)),
                                {key: c for key in rng.sample(s, min(3, len(s))) if (c := rng.randrange(3))},
                                {key: c for key in rng.sample(t, min(3, len(t))) if (c := rng.randrange(3))})
            assert normalize(reconstruct(nf), k) == nf


def test_step_check_catches_bad_rule(monkeypatch):
    orig = rewriter._rule_diag

    def broken(i, second):
        name, out = orig(i, second)
        return name, out[:1]

    monkeypatch.setattr(rewriter, "_rule_diag", broken)
    with pytest.raises(RewriteError):
        normalize("(f x1 (+ x1 x1 x2))", 2, check=True)


def test_budget():
    with pytest.raises(ResourceLimitError):
        normalize("(f (+ x1 x2 x3) (+ x1 x2 x3))", 3, budget=1)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 2), st.randoms(use_true_random=False))
def test_equality_matches_tables(k, rnd):
    t1 = random_term(rnd, k, depth=3)
    t2 = random_term(rnd, k, depth=3)
    assert terms_equal(t1, t2, k) == (table(t1, k) == table(t2, k))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_matches_function_decomposition(k):
    rng = random.Random(k)
    for _ in range(100):
        t = random_term(rng, k, depth=5)
        fnf = decompose(table(t, k))
        nf = normalize(t, k)
        assert fnf is not None
        assert nf.u == fnf.linear
        assert to_function_normal_form(nf).key() == fnf.key()
