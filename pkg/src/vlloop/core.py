"""Arithmetic of Vaughan-Lee's 12-element loop L = (Z12, .).

Elements are plain ints in ``range(12)``.  Scalar functions work on ints;
the ``*_vec`` variants accept numpy arrays and are used for tabulation.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import FrozenSet, Iterable, Sequence, Tuple

import numpy as np

N = 12
ELEMENTS = tuple(range(N))
C = frozenset({0, 4, 8})
D = frozenset({0, 2, 4, 6, 8, 10})

Partition = FrozenSet[FrozenSet[int]]


class CorruptTableError(RuntimeError):
    """The loop operation table violates the loop axioms."""


def residue(x: int) -> int:
    return int(x) % N


def neg(x: Sequence[int]) -> Tuple[int, ...]:
    """Componentwise additive inverse of a tuple."""
    return tuple((-v) % N for v in x)


def t_map(x: int, y: int) -> int:
    """4 if (x, y) lies in (1+C)x(3+C) or (3+C)x(1+C), else 0."""
    if (x % 4, y % 4) in ((1, 3), (3, 1)):
        return 4
    return 0


def loop_mul(x: int, y: int) -> int:
    return (x + y + t_map(x, y)) % N


def f_map(x: int, y: int) -> int:
    """4 if x is odd and y is in C, else 0."""
    return 4 if x % 2 == 1 and y % 4 == 0 else 0


def g_map(k: int, x: Sequence[int]) -> int:
    """4 if x_1 is odd and x_2..x_k all lie in C, else 0."""
    if len(x) != k or k < 1:
        raise ValueError(f"g_map expects a tuple of length {k}, got {len(x)}")
    if x[0] % 2 == 1 and all(v % 4 == 0 for v in x[1:]):
        return 4
    return 0


@lru_cache(maxsize=None)
def _mul_table() -> np.ndarray:
    table = np.array([[loop_mul(x, y) for y in ELEMENTS] for x in ELEMENTS], dtype=np.int64)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _div_table() -> np.ndarray:
    """div[a, b] is the z with a.z = b."""
    mul = _mul_table()
    div = np.empty((N, N), dtype=np.int64)
    for a in ELEMENTS:
        for b in ELEMENTS:
            sols = [z for z in ELEMENTS if mul[a, z] == b]
            if len(sols) != 1:
                raise CorruptTableError(f"{a}\\{b} has {len(sols)} solutions")
            div[a, b] = sols[0]
    div.setflags(write=False)
    return div


def loop_div(a: int, b: int) -> int:
    """The unique z with a.z = b.

    L is commutative, so this is both the left and the right division.
    """
    sols = [z for z in ELEMENTS if loop_mul(a, z) == b % N]
    if len(sols) != 1:
        raise CorruptTableError(f"{a}\\{b} has {len(sols)} solutions")
    return sols[0]


def power_sq(x: int, e: int) -> int:
    """x^e for e in {2, 4, 8}, bracketed as repeated squaring."""
    if e not in (2, 4, 8):
        raise ValueError(f"unsupported exponent {e}; expected 2, 4 or 8")
    while e > 1:
        x = loop_mul(x, x)
        e //= 2
    return x


# vectorized forms

def t_vec(x, y):
    x = np.asarray(x) % 4
    y = np.asarray(y) % 4
    hit = ((x == 1) & (y == 3)) | ((x == 3) & (y == 1))
    return np.where(hit, 4, 0).astype(np.int64)


def f_vec(x, y):
    hit = (np.asarray(x) % 2 == 1) & (np.asarray(y) % 4 == 0)
    return np.where(hit, 4, 0).astype(np.int64)


def mul_vec(x, y):
    return (np.asarray(x) + np.asarray(y) + t_vec(x, y)) % N


def div_vec(a, b):
    return _div_table()[np.asarray(a) % N, np.asarray(b) % N]


# congruences

def _classes(parent: list) -> Partition:
    blocks: dict = {}
    for x in ELEMENTS:
        blocks.setdefault(_find(parent, x), set()).add(x)
    return frozenset(frozenset(b) for b in blocks.values())


def _find(parent: list, x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def congruence_generated(pairs: Iterable[Tuple[int, int]]) -> Partition:
    """Smallest congruence of L containing ``pairs``.

    Closes under translations by multiplication and both divisions; since
    union-find already gives transitivity, one compatibility pass per new
    merge suffices until nothing changes.
    """
    mul = _mul_table()
    div = _div_table()
    parent = list(ELEMENTS)

    def union(a: int, b: int) -> bool:
        ra, rb = _find(parent, a), _find(parent, b)
        if ra == rb:
            return False
        parent[max(ra, rb)] = min(ra, rb)
        return True

    for a, b in pairs:
        union(a % N, b % N)
    changed = True
    while changed:
        changed = False
        blocks = _classes(parent)
        for block in blocks:
            members = sorted(block)
            x0 = members[0]
            for x in members[1:]:
                for z in ELEMENTS:
                    changed |= union(int(mul[x0, z]), int(mul[x, z]))
                    changed |= union(int(div[z, x0]), int(div[z, x]))
                    changed |= union(int(div[x0, z]), int(div[x, z]))
    return _classes(parent)


def is_congruence(partition: Partition) -> bool:
    """Check compatibility of an equivalence relation with ., \\ and /."""
    mul = _mul_table()
    div = _div_table()
    block_of = {x: block for block in partition for x in block}
    if set(block_of) != set(ELEMENTS):
        raise ValueError("not a partition of Z12")
    for block in partition:
        for x, y in itertools.combinations(sorted(block), 2):
            for z in ELEMENTS:
                if int(mul[y, z]) not in block_of[int(mul[x, z])]:
                    return False
                if int(div[z, y]) not in block_of[int(div[z, x])]:
                    return False
                if int(div[y, z]) not in block_of[int(div[x, z])]:
                    return False
    return True


def coset_partition(subgroup: Iterable[int]) -> Partition:
    """Partition of Z12 into additive cosets of ``subgroup``."""
    sub = frozenset(s % N for s in subgroup)
    return frozenset(frozenset((x + s) % N for s in sub) for x in ELEMENTS)


def enumerate_congruences() -> list:
    """All congruences of L, ordered from finest to coarsest block count."""
    found = {congruence_generated([])}
    for a, b in itertools.combinations(ELEMENTS, 2):
        found.add(congruence_generated([(a, b)]))
    # close under join
    while True:
        joins = set()
        for p, q in itertools.combinations(found, 2):
            pairs = [(min(b), x) for part in (p, q) for b in part for x in b]
            joins.add(congruence_generated(pairs))
        if joins <= found:
            break
        found |= joins
    return sorted(found, key=lambda p: -len(p))


def refines(p: Partition, q: Partition) -> bool:
    """True if every block of p lies inside a block of q."""
    return all(any(b <= c for c in q) for b in p)
