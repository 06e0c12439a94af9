"""Linear algebra over Z12 by splitting into Z3 x Z4.

Mod 3 is a field and gets ordinary Gaussian elimination.  Mod 4 pivots on
units when a column has one; a column whose entries are all in {0, 2}
takes a 2-pivot, and the doubled pivot row (which carries the parity
constraint on the remaining unknowns) is pushed back into the pool.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

_INV3 = {1: 1, 2: 2}


def crt_combine(x3, x4):
    """The residue mod 12 congruent to x3 mod 3 and x4 mod 4."""
    return (4 * np.asarray(x3) + 9 * np.asarray(x4)) % 12


def rank_mod3(matrix) -> int:
    a = np.array(matrix, dtype=np.int64) % 3
    rank = 0
    rows, cols = a.shape
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        p = rank + nz[0]
        a[[rank, p]] = a[[p, rank]]
        a[rank] = (a[rank] * _INV3[int(a[rank, c])]) % 3
        below = a[rank + 1:, c]
        hit = np.nonzero(below)[0] + rank + 1
        if hit.size:
            a[hit] = (a[hit] - np.outer(a[hit, c], a[rank])) % 3
        rank += 1
    return rank


def solve_mod3(a, t) -> Optional[np.ndarray]:
    """Solve a @ x = t over F3; return one solution or None."""
    a = np.array(a, dtype=np.int64) % 3
    rows, cols = a.shape
    aug = np.concatenate([a, (np.asarray(t, dtype=np.int64) % 3)[:, None]], axis=1)
    pivots: List[Tuple[int, int]] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(aug[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            aug[[r, p]] = aug[[p, r]]
        aug[r] = (aug[r] * _INV3[int(aug[r, c])]) % 3
        hit = np.nonzero(aug[r + 1:, c])[0] + r + 1
        if hit.size:
            aug[hit] = (aug[hit] - np.outer(aug[hit, c], aug[r])) % 3
        pivots.append((r, c))
        r += 1
    if np.any(aug[r:, cols] != 0):
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, c in reversed(pivots):
        rest = int(aug[row, c + 1:cols] @ x[c + 1:]) % 3
        x[c] = (int(aug[row, cols]) - rest) % 3
    return x


def solve_mod4(a, t) -> Optional[np.ndarray]:
    """Solve a @ x = t over Z4; return one solution or None."""
    a = np.array(a, dtype=np.int64) % 4
    rows, cols = a.shape
    pool = np.concatenate([a, (np.asarray(t, dtype=np.int64) % 4)[:, None]], axis=1)
    pivots: List[Tuple[np.ndarray, int]] = []
    for c in range(cols):
        if pool.shape[0] == 0:
            break
        col = pool[:, c]
        units = np.nonzero(col % 2 == 1)[0]
        if units.size:
            p = units[0]
            row = (pool[p] * int(col[p])) % 4  # 1*1 = 3*3 = 1 mod 4
            pool = np.delete(pool, p, axis=0)
            hit = np.nonzero(pool[:, c])[0]
            if hit.size:
                pool[hit] = (pool[hit] - np.outer(pool[hit, c], row)) % 4
            pivots.append((row, c))
            continue
        twos = np.nonzero(col)[0]
        if twos.size == 0:
            continue
        p = twos[0]
        row = pool[p].copy()
        pool = np.delete(pool, p, axis=0)
        hit = np.nonzero(pool[:, c])[0]
        if hit.size:
            pool[hit] = (pool[hit] - row) % 4
        doubled = (2 * row) % 4
        if np.any(doubled):
            pool = np.concatenate([pool, doubled[None, :]], axis=0)
        pivots.append((row, c))
    if np.any(pool[:, cols] != 0):
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, c in reversed(pivots):
        rhs = (int(row[cols]) - int(row[c + 1:cols] @ x[c + 1:])) % 4
        if row[c] == 1:
            x[c] = rhs
        else:
            if rhs % 2:
                # a consistent system never reaches this; the doubled rows rule it out
                raise ArithmeticError("mod 4 back substitution hit an odd right-hand side")
            x[c] = rhs // 2
    return x


def solve_mod12(gens: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[np.ndarray]:
    """Coefficients c in [12]^m with sum_j c_j gens[j] = target, or None."""
    target = np.asarray(target, dtype=np.int64) % 12
    n = target.shape[0]
    if len(gens) == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(target) else None
    g = np.asarray(gens, dtype=np.int64).reshape(len(gens), n) % 12
    a = g.T
    x3 = solve_mod3(a, target)
    if x3 is None:
        return None
    x4 = solve_mod4(a, target)
    if x4 is None:
        return None
    return crt_combine(x3, x4)


class Span12:
    """The additive subgroup of Z12^n spanned by a list of vectors.

    Keeps a row-echelon basis mod 3 and a Howell-style basis mod 4 so that
    membership and the order of the subgroup are cheap.
    """

    def __init__(self, n: int, vectors: Sequence[np.ndarray] = ()):
        self.n = n
        self.generators: List[np.ndarray] = []
        self._basis3: List[Tuple[int, np.ndarray]] = []
        self._basis4: List[Tuple[int, np.ndarray]] = []
        for v in vectors:
            self.add(v)

    def _reduce3(self, v: np.ndarray) -> np.ndarray:
        v = v % 3
        for c, row in self._basis3:
            if v[c]:
                v = (v - v[c] * row) % 3
        return v

    def _reduce4(self, v: np.ndarray) -> Optional[np.ndarray]:
        v = v % 4
        for c, row in self._basis4:
            if not v[c]:
                continue
            if row[c] == 1:
                v = (v - v[c] * row) % 4
            elif v[c] % 2:
                return None
            else:
                v = (v - row) % 4
        return v

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64)
        if np.any(self._reduce3(v)):
            return False
        r4 = self._reduce4(v)
        return r4 is not None and not np.any(r4)

    def add(self, v) -> bool:
        """Add a generator; return False if it was already in the span."""
        v = np.asarray(v, dtype=np.int64) % 12
        if self.contains(v):
            return False
        self.generators.append(v)
        r3 = self._reduce3(v)
        if np.any(r3):
            self._insert3(r3)
        self._basis4 = _howell_mod4([row for _, row in self._basis4] + [v % 4])
        return True

    def _insert3(self, r: np.ndarray) -> None:
        c = int(np.nonzero(r)[0][0])
        r = (r * _INV3[int(r[c])]) % 3
        # keep reduced so that _reduce3 is order independent
        basis = []
        for c2, row in self._basis3:
            if row[c]:
                row = (row - row[c] * r) % 3
            basis.append((c2, row))
        basis.append((c, r))
        basis.sort(key=lambda item: item[0])
        self._basis3 = basis

    @property
    def divisors(self) -> List[int]:
        """Orders of cyclic factors: 3 per mod-3 pivot, 4 or 2 per mod-4 pivot."""
        return [3] * len(self._basis3) + [4 if row[c] == 1 else 2 for c, row in self._basis4]

    @property
    def size(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out


def _howell_mod4(rows: List[np.ndarray]) -> List[Tuple[int, np.ndarray]]:
    pool = [r % 4 for r in rows if np.any(r % 4)]
    basis: List[Tuple[int, np.ndarray]] = []
    if not pool:
        return basis
    n = pool[0].shape[0]
    for c in range(n):
        if not pool:
            break
        unit = next((i for i, r in enumerate(pool) if r[c] % 2), None)
        if unit is not None:
            row = pool.pop(unit)
            row = (int(row[c]) * row) % 4
            pool = [(r - r[c] * row) % 4 for r in pool]
            basis.append((c, row))
        else:
            two = next((i for i, r in enumerate(pool) if r[c]), None)
            if two is None:
                continue
            row = pool.pop(two)
            pool = [(r - row) % 4 if r[c] else r for r in pool]
            pool.append((2 * row) % 4)
            basis.append((c, row))
        pool = [r for r in pool if np.any(r)]
    return basis
