import itertools

import pytest
from hypothesis import given, strategies as st

from vlloop import core
from vlloop.core import C, loop_div, loop_mul, power_sq, t_map, f_map, g_map

res = st.integers(min_value=0, max_value=11)
PAIRS = list(itertools.product(range(12), repeat=2))


@pytest.mark.parametrize("x, y, want", [(1, 3, 4), (0, 5, 0), (5, 11, 4), (3, 1, 4), (1, 1, 0)])
def test_t_map(x, y, want):
    assert t_map(x, y) == want


@pytest.mark.parametrize("x, y, want", [(1, 3, 8), (2, 2, 4), (7, 0, 7)])
def test_loop_mul(x, y, want):
    assert loop_mul(x, y) == want


@pytest.mark.parametrize("a, b, want", [(0, 7, 7), (1, 8, 3), (4, 0, 8)])
def test_loop_div(a, b, want):
    assert loop_div(a, b) == want


def test_loop_div_inverts_mul():
    for a, b in PAIRS:
        assert loop_mul(a, loop_div(a, b)) == b


def test_corrupt_table_detected(monkeypatch):
    monkeypatch.setattr(core, "loop_mul", lambda x, y: 0)
    with pytest.raises(core.CorruptTableError):
        core.loop_div(1, 1)


@pytest.mark.parametrize("x, y, want", [(1, 0, 4), (2, 0, 0), (3, 8, 4), (3, 2, 0)])
def test_f_map(x, y, want):
    assert f_map(x, y) == want


@pytest.mark.parametrize("k, x, want", [(1, (5,), 4), (2, (1, 4), 4), (3, (1, 0, 2), 0), (3, (2, 0, 0), 0)])
def test_g_map(k, x, want):
    assert g_map(k, x) == want


def test_g_map_arity_mismatch():
    with pytest.raises(ValueError):
        g_map(3, (1, 0))


def test_f_is_g2():
    assert all(f_map(x, y) == g_map(2, (x, y)) for x, y in PAIRS)


def test_power_sq_values():
    assert power_sq(1, 4) == 4
    assert power_sq(1, 8) == 8
    left = loop_mul(loop_mul(loop_mul(1, 1), 1), 1)
    assert left == 8 != power_sq(1, 4)
    with pytest.raises(ValueError):
        power_sq(1, 3)


def test_square_is_doubling():
    assert all(power_sq(x, 2) == (2 * x) % 12 for x in range(12))


def test_lemma_t_pointwise():
    for x, y in PAIRS:
        lhs = loop_mul(loop_mul(power_sq(loop_mul(x, y), 4), power_sq(x, 8)), power_sq(y, 8))
        assert lhs == t_map(x, y)


def test_f_and_t_interdefinable():
    for x, y in PAIRS:
        assert t_map(x, y) == f_map(x, (x + y) % 12)
        assert f_map(x, y) == t_map(x, (3 * x + y) % 12)


@given(res, res)
def test_commutative_with_identity(x, y):
    assert loop_mul(x, y) == loop_mul(y, x)
    assert loop_mul(x, 0) == x


def test_mul_is_add_on_even():
    for x in core.D:
        for y in core.D:
            assert loop_mul(x, y) == (x + y) % 12


@given(res, res, res)
def test_center_translations(c_idx, x, y):
    # elements of C commute and associate with everything
    c = sorted(C)[c_idx % 3]
    assert loop_mul(loop_mul(c, x), y) == loop_mul(c, loop_mul(x, y))
    assert loop_mul(loop_mul(x, c), y) == loop_mul(x, loop_mul(c, y))
    assert loop_mul(loop_mul(x, y), c) == loop_mul(x, loop_mul(y, c))


def test_not_associative():
    assert any(loop_mul(loop_mul(x, y), z) != loop_mul(x, loop_mul(y, z))
               for x, y, z in itertools.product(range(12), repeat=3))


def test_congruences():
    found = core.enumerate_congruences()
    assert len(found) == 4
    want = [core.coset_partition(s) for s in ({0}, C, core.D, range(12))]
    assert found == want
    assert all(core.refines(found[i], found[i + 1]) for i in range(3))


def test_coset_partition_of_C_is_congruence():
    assert core.is_congruence(core.coset_partition(C))


def test_cosets_of_0_6_not_congruence():
    part = core.coset_partition({0, 6})
    assert not core.is_congruence(part)
    # 1 ~ 7 but 1.3 = 8 and 7.3 = 10 lie in different cosets
    assert loop_mul(1, 3) == 8 and loop_mul(7, 3) == 10
    assert (10 - 8) % 12 not in {0, 6}


def test_congruence_generated_by_pair():
    assert core.congruence_generated([(0, 4)]) == core.coset_partition(C)
    assert core.congruence_generated([(0, 1)]) == core.coset_partition(range(12))
