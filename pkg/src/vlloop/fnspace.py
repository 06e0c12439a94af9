"""Dense k-ary function tables on Z12 and the clone of L.

Every k-ary term function of L splits uniquely as a linear part
``sum a_i x_i`` plus a member of W_k, the functions into C that vanish on
2Z12^k and are invariant under x -> -x.  W_k has the basis f_r indexed by
the transversal R_k of +/- pairs of order-4 elements in (Z4)^k.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .core import N, f_vec, t_vec
from .linalg import Span12, rank_mod3

MAX_TABLE_ARITY = 6
MAX_CLOSURE_ARITY = 3


class ResourceLimitError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def grid(k: int) -> Tuple[np.ndarray, ...]:
    """Coordinate arrays of all points of Z12^k, x_1 varying fastest."""
    if k > MAX_TABLE_ARITY:
        raise ResourceLimitError(f"arity {k} exceeds the table cap {MAX_TABLE_ARITY}")
    idx = np.arange(N ** k, dtype=np.int64)
    out = []
    for i in range(k):
        col = (idx // N ** i) % N
        col.setflags(write=False)
        out.append(col)
    return tuple(out)


def point_index(x) -> int:
    return sum(int(v) % N * N ** i for i, v in enumerate(x))


@lru_cache(maxsize=None)
def _neg_index(k: int) -> np.ndarray:
    return sum(((-c) % N) * N ** i for i, c in enumerate(grid(k)))


@lru_cache(maxsize=None)
def _even_mask(k: int) -> np.ndarray:
    mask = np.ones(N ** k, dtype=bool)
    for c in grid(k):
        mask &= c % 2 == 0
    return mask


class FunctionTable:
    """A function Z12^k -> Z12 stored as its value table.

    Instances are treated as immutable; arithmetic returns new tables.
    """

    __slots__ = ("arity", "values")

    def __init__(self, arity: int, values):
        values = np.asarray(values, dtype=np.int64) % N
        if arity < 1:
            raise ValueError("arity must be at least 1")
        if values.shape != (N ** arity,):
            raise ValueError(f"expected {N ** arity} values for arity {arity}, got {values.shape}")
        values.setflags(write=False)
        self.arity = arity
        self.values = values

    @classmethod
    def from_function(cls, k: int, fn) -> "FunctionTable":
        """Tabulate ``fn`` called with the k coordinate arrays."""
        return cls(k, fn(*grid(k)))

    @classmethod
    def linear(cls, coeffs) -> "FunctionTable":
        k = len(coeffs)
        return cls(k, sum(int(a) * x for a, x in zip(coeffs, grid(k))))

    @classmethod
    def zero(cls, k: int) -> "FunctionTable":
        return cls(k, np.zeros(N ** k, dtype=np.int64))

    def __call__(self, *x: int) -> int:
        return int(self.values[point_index(x)])

    def __add__(self, other: "FunctionTable") -> "FunctionTable":
        self._check(other)
        return FunctionTable(self.arity, self.values + other.values)

    def __sub__(self, other: "FunctionTable") -> "FunctionTable":
        self._check(other)
        return FunctionTable(self.arity, self.values - other.values)

    def __neg__(self) -> "FunctionTable":
        return FunctionTable(self.arity, -self.values)

    def __rmul__(self, scalar: int) -> "FunctionTable":
        return FunctionTable(self.arity, int(scalar) * self.values)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FunctionTable) and self.arity == other.arity
                and bool(np.array_equal(self.values, other.values)))

    def __hash__(self) -> int:
        return hash((self.arity, self.values.tobytes()))

    def __repr__(self) -> str:
        head = " ".join(str(v) for v in self.values[:12])
        return f"FunctionTable(arity={self.arity}, values=[{head}{' ...' if self.values.size > 12 else ''}])"

    def _check(self, other: "FunctionTable") -> None:
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def to_text(self) -> str:
        body = []
        vals = [str(int(v)) for v in self.values]
        for start in range(0, len(vals), N):
            body.append(" ".join(vals[start:start + N]))
        return f"k {self.arity}\n" + "\n".join(body) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FunctionTable":
        lines = text.strip().splitlines()
        if not lines:
            raise ValueError("empty table file")
        head = lines[0].split()
        if len(head) != 2 or head[0] != "k" or not head[1].isdigit():
            raise ValueError(f"bad header line {lines[0]!r}; expected 'k <arity>'")
        k = int(head[1])
        if not 1 <= k <= MAX_TABLE_ARITY:
            raise ValueError(f"arity {k} outside 1..{MAX_TABLE_ARITY}")
        tokens = " ".join(lines[1:]).split()
        if len(tokens) != N ** k:
            raise ValueError(f"expected {N ** k} values, found {len(tokens)}")
        values = []
        for tok in tokens:
            if not tok.isdigit() or int(tok) >= N:
                raise ValueError(f"bad table entry {tok!r}")
            values.append(int(tok))
        return cls(k, values)


def apply_f(u: FunctionTable, v: FunctionTable) -> FunctionTable:
    u._check(v)
    return FunctionTable(u.arity, f_vec(u.values, v.values))


def apply_t(u: FunctionTable, v: FunctionTable) -> FunctionTable:
    u._check(v)
    return FunctionTable(u.arity, t_vec(u.values, v.values))


def is_in_Wk(h: FunctionTable) -> bool:
    vals = h.values
    if np.any(vals % 4 != 0):
        return False
    if np.any(vals[_even_mask(h.arity)] != 0):
        return False
    return bool(np.array_equal(vals, vals[_neg_index(h.arity)]))


# transversal

def canonical_rep(c) -> Tuple[int, ...]:
    """Lexicographic minimum of {c, -c} mod 4."""
    c = tuple(int(v) % 4 for v in c)
    m = tuple((-v) % 4 for v in c)
    return min(c, m)


@dataclass(frozen=True)
class Transversal:
    ell: int
    reps: Tuple[Tuple[int, ...], ...]

    def __contains__(self, r) -> bool:
        return tuple(r) in self._index

    def __len__(self) -> int:
        return len(self.reps)

    def __iter__(self):
        return iter(self.reps)

    @property
    def _index(self) -> Dict[Tuple[int, ...], int]:
        return _rep_index(self.ell)

    def index(self, r) -> int:
        return self._index[tuple(r)]


@lru_cache(maxsize=None)
def _rep_index(ell: int) -> Dict[Tuple[int, ...], int]:
    return {r: i for i, r in enumerate(build_transversal(ell).reps)}


@lru_cache(maxsize=None)
def build_transversal(ell: int) -> Transversal:
    if ell < 0:
        raise ValueError("ell must be non-negative")
    reps = []
    for c in itertools.product(range(4), repeat=ell):
        if any(v % 2 for v in c) and canonical_rep(c) == c:
            reps.append(c)
    return Transversal(ell, tuple(reps))


def f_rbar(k: int, r) -> FunctionTable:
    r = tuple(int(v) for v in r)
    if len(r) != k or r not in build_transversal(k):
        raise ValueError(f"{r} is not in the transversal R_{k}")
    return FunctionTable(k, _f_rbar_values(k, r))


@lru_cache(maxsize=None)
def _f_rbar_values(k: int, r: Tuple[int, ...]) -> np.ndarray:
    plus = np.ones(N ** k, dtype=bool)
    minus = np.ones(N ** k, dtype=bool)
    for x, ri in zip(grid(k), r):
        plus &= x % 4 == ri
        minus &= x % 4 == (-ri) % 4
    vals = np.where(plus | minus, 4, 0)
    vals.setflags(write=False)
    return vals


def wk_basis(k: int) -> List[FunctionTable]:
    if k > MAX_TABLE_ARITY:
        raise ResourceLimitError(f"arity {k} exceeds the table cap {MAX_TABLE_ARITY}")
    return [f_rbar(k, r) for r in build_transversal(k)]


# normal forms

@dataclass(frozen=True)
class FunctionNormalForm:
    """h = sum linear[i] x_i + sum wcoeffs[r] f_r."""

    arity: int
    linear: Tuple[int, ...]
    wcoeffs: Dict[Tuple[int, ...], int] = field(hash=False)

    def to_table(self) -> FunctionTable:
        out = FunctionTable.linear(self.linear)
        vals = out.values.copy()
        for r, b in self.wcoeffs.items():
            if b:
                vals = vals + b * _f_rbar_values(self.arity, r)
        return FunctionTable(self.arity, vals)

    def to_text(self) -> str:
        lines = ["linear: " + " ".join(str(a) for a in self.linear)]
        for r in build_transversal(self.arity):
            b = self.wcoeffs.get(r, 0)
            if b:
                lines.append(f"f {''.join(str(d) for d in r)} {b}")
        return "\n".join(lines) + "\n"

    def key(self) -> Tuple:
        """Hashable identity of the function."""
        return (self.linear, tuple(self.wcoeffs.get(r, 0) for r in build_transversal(self.arity)))


def decompose(h: FunctionTable) -> Optional[FunctionNormalForm]:
    """Normal form of h if h is a term function of L, else None."""
    k = h.arity
    lin = []
    for i in range(k):
        e = [0] * k
        e[i] = 2
        two_a = h(*e)
        if two_a % 2:
            return None
        a = two_a // 2
        e[i] = 1
        hit = [cand for cand in (a, a + 6) if (h(*e) - cand) % 4 == 0]
        if not hit:
            return None
        lin.append(hit[0] % N)
    linear = FunctionTable.linear(lin)
    mask = _even_mask(k)
    if not np.array_equal(h.values[mask], linear.values[mask]):
        return None
    w = h - linear
    if not is_in_Wk(w):
        return None
    coeffs = {r: w(*r) // 4 for r in build_transversal(k)}
    nf = FunctionNormalForm(k, tuple(lin), coeffs)
    if nf.to_table() != h:
        return None
    return nf


@lru_cache(maxsize=None)
def _basis_matrix(k: int) -> np.ndarray:
    m = np.stack([_f_rbar_values(k, r) for r in build_transversal(k)])
    m.setflags(write=False)
    return m


def random_wk(k: int, rng: random.Random) -> FunctionTable:
    coeffs = np.array([rng.randrange(3) for _ in build_transversal(k)], dtype=np.int64)
    return FunctionTable(k, coeffs @ _basis_matrix(k))


def verify_direct_sum(k: int) -> bool:
    """Only the zero linear function lies in W_k."""
    if k > MAX_CLOSURE_ARITY:
        raise ResourceLimitError(f"direct sum sweep is capped at k <= {MAX_CLOSURE_ARITY}")
    for coeffs in itertools.product(range(N), repeat=k):
        if any(coeffs) and is_in_Wk(FunctionTable.linear(coeffs)):
            return False
    return True


def verify_f_closure(k: int, mode: str = "exhaustive", samples: int = 10_000,
                     seed: int = 0, op: str = "f") -> bool:
    """Applying ``op`` to (linear + W_k, linear + W_k) lands in W_k and ignores the W_k parts."""
    if mode == "exhaustive" and k > 2:
        raise ResourceLimitError("exhaustive f-closure sweep is capped at k <= 2")
    apply = {"f": f_vec, "t": t_vec}[op]
    rng = random.Random(seed)
    xs = grid(k)
    if mode == "exhaustive":
        vecs = list(itertools.product(range(N), repeat=k))
        pairs = itertools.product(vecs, vecs)
    elif mode == "sampled":
        pairs = ((tuple(rng.randrange(N) for _ in range(k)), tuple(rng.randrange(N) for _ in range(k)))
                 for _ in range(samples))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    lin = {}

    def linear(c):
        if c not in lin:
            lin[c] = sum(a * x for a, x in zip(c, xs)) % N
        return lin[c]

    mask = _even_mask(k)
    negi = _neg_index(k)
    for a, b in pairs:
        w = random_wk(k, rng).values
        v = random_wk(k, rng).values
        la, lb = linear(a), linear(b)
        base = apply(la, lb)
        if not np.array_equal(apply((la + w) % N, (lb + v) % N), base):
            return False
        if np.any(base % 4) or np.any(base[mask]) or not np.array_equal(base, base[negi]):
            return False
    return True


# clone closure oracles

@dataclass
class CloneClosure:
    arity: int
    span: Span12

    @property
    def size(self) -> int:
        return self.span.size

    @property
    def divisors(self) -> List[int]:
        return self.span.divisors

    @property
    def generators(self) -> List[FunctionTable]:
        return [FunctionTable(self.arity, g) for g in self.span.generators]

    def contains(self, h: FunctionTable) -> bool:
        return h.arity == self.arity and self.span.contains(h.values)


def _image_reps(span: Span12, modulus: int) -> List[np.ndarray]:
    """One element of the span per element of its image mod ``modulus``."""
    zero = np.zeros(span.n, dtype=np.int64)
    seen = {zero.tobytes(): zero}
    frontier = [zero]
    gens = [g % N for g in span.generators]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = (v + g) % N
                key = (w % modulus).astype(np.int8).tobytes()
                if key not in seen:
                    seen[key] = w
                    nxt.append(w)
        frontier = nxt
    return list(seen.values())


def clone_closure(k: int) -> CloneClosure:
    """Smallest set of k-ary tables with the projections, closed under + and f.

    f(u, v) only depends on u mod 2 and v mod 4, so each round applies f to
    one representative per pair of images instead of every pair of elements.
    """
    if k > MAX_CLOSURE_ARITY:
        raise ResourceLimitError(f"clone closure is capped at k <= {MAX_CLOSURE_ARITY}")
    span = Span12(N ** k, [x for x in grid(k)])
    while True:
        reps2 = _image_reps(span, 2)
        reps4 = _image_reps(span, 4)
        grew = False
        for u in reps2:
            for v in reps4:
                grew |= span.add(f_vec(u, v))
        if not grew:
            return CloneClosure(k, span)


def naive_clone_closure(k: int, limit: int = 100_000) -> set:
    """Pairwise BFS closure under + and f; feasible only for k = 1."""
    elems = {FunctionTable(k, x) for x in grid(k)}
    frontier = set(elems)
    while frontier:
        new = set()
        for a in frontier:
            for b in list(elems):
                for c in (a + b, apply_f(a, b), apply_f(b, a)):
                    if c not in elems and c not in new:
                        new.add(c)
        elems |= new
        frontier = new
        if len(elems) > limit:
            raise ResourceLimitError(f"naive closure exceeded {limit} elements")
    return elems


def wk_basis_rank(k: int) -> int:
    """F3 rank of the matrix of basis values divided by 4."""
    m = np.stack([b.values // 4 for b in wk_basis(k)], axis=1)
    return rank_mod3(m)
