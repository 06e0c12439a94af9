import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from vlloop.linalg import Span12, crt_combine, rank_mod3, solve_mod12


def _brute_span(gens, n):
    gens = np.asarray(gens, dtype=np.int64).reshape(len(gens), n)
    return {tuple(int(v) for v in (np.array(c) @ gens) % 12)
            for c in itertools.product(range(12), repeat=len(gens))}


systems = st.integers(1, 3).flatmap(
    lambda m: st.integers(1, 3).flatmap(
        lambda n: st.tuples(
            st.lists(st.lists(st.sampled_from([0, 1, 2, 3, 4, 6, 8, 9, 10]), min_size=n, max_size=n),
                     min_size=m, max_size=m),
            st.lists(st.integers(0, 11), min_size=n, max_size=n))))


@settings(max_examples=300, deadline=None)
@given(systems)
def test_solve_matches_enumeration(system):
    gens, target = system
    span = _brute_span(gens, len(target))
    sol = solve_mod12(gens, target)
    assert (sol is not None) == (tuple(target) in span)
    if sol is not None:
        assert tuple(int(v) for v in (sol @ np.array(gens)) % 12) == tuple(target)


@settings(max_examples=200, deadline=None)
@given(systems)
def test_span_size_and_membership(system):
    gens, target = system
    span = _brute_span(gens, len(target))
    s = Span12(len(target), [np.array(g) for g in gens])
    assert s.size == len(span)
    assert s.contains(target) == (tuple(target) in span)


def test_crt():
    for x in range(12):
        assert crt_combine(x % 3, x % 4) == x


def test_empty_generators():
    assert solve_mod12([], [0, 0]).size == 0
    assert solve_mod12([], [1, 0]) is None


def test_parity_obstruction():
    assert solve_mod12([[2, 0]], [1, 0]) is None
    (c,) = solve_mod12([[4]], [8])
    assert (4 * c) % 12 == 8
    c = solve_mod12([[2, 0], [0, 3]], [2, 3])
    assert [(2 * c[0]) % 12, (3 * c[1]) % 12] == [2, 3]


def test_rank_mod3():
    assert rank_mod3([[1, 2], [2, 1]]) == 1
    assert rank_mod3([[1, 0], [0, 1], [1, 1]]) == 2
