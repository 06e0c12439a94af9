"""Subpower membership for L.

The subloop of L^n generated by a_1..a_k equals the additive subgroup of
Z12^n generated by the a_j together with one vector per +/- class of odd
columns, so membership reduces to a linear system over Z12.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import N, div_vec, mul_vec
from .fnspace import ResourceLimitError, canonical_rep
from .linalg import solve_mod12
from .termlang import Term, Var, build_fr_term, evaluate_vec, scaled, term_sum

Vec = Tuple[int, ...]


class WitnessError(AssertionError):
    """A constructed witness term failed to evaluate to the target."""


@dataclass(frozen=True)
class SmpInstance:
    n: int
    generators: Tuple[Vec, ...]
    target: Vec

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        for g in self.generators + (self.target,):
            if len(g) != self.n:
                raise ValueError(f"tuple {g} does not have length {self.n}")

    @classmethod
    def make(cls, generators: Sequence[Sequence[int]], target: Sequence[int]) -> "SmpInstance":
        gens = tuple(tuple(int(x) % N for x in g) for g in generators)
        return cls(len(target), gens, tuple(int(x) % N for x in target))

    @property
    def k(self) -> int:
        return len(self.generators)

    def column(self, j: int) -> Vec:
        return tuple(g[j] for g in self.generators)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.k}"]
        lines += [",".join(str(x) for x in g) for g in self.generators]
        lines.append(",".join(str(x) for x in self.target))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SmpInstance":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty instance")
        head = lines[0].split()
        if len(head) != 2 or not all(h.isdigit() for h in head):
            raise ValueError(f"bad header {lines[0]!r}; expected 'n k'")
        n, k = int(head[0]), int(head[1])
        if len(lines) != k + 2:
            raise ValueError(f"expected {k + 2} lines, found {len(lines)}")
        rows = []
        for ln in lines[1:]:
            vals = [v.strip() for v in ln.split(",")]
            if len(vals) != n or not all(v.isdigit() and int(v) < N for v in vals):
                raise ValueError(f"bad tuple line {ln!r}")
            rows.append(tuple(int(v) for v in vals))
        return cls(n, tuple(rows[:-1]), rows[-1])


@dataclass
class SimPartition:
    """Odd columns grouped by +/- equality mod 4; indices are 0-based."""

    classes: List[Tuple[int, ...]]
    reps: List[Vec]
    even: Tuple[int, ...]


def sim_partition(inst: SmpInstance) -> SimPartition:
    groups: dict = {}
    even = []
    for j in range(inst.n):
        col = inst.column(j)
        if all(x % 2 == 0 for x in col):
            even.append(j)
            continue
        groups.setdefault(canonical_rep(col), []).append(j)
    reps = sorted(groups)
    return SimPartition([tuple(groups[r]) for r in reps], reps, tuple(even))


def derived_generators(inst: SmpInstance, partition: Optional[SimPartition] = None) -> List[Vec]:
    part = partition or sim_partition(inst)
    out = []
    for cls in part.classes:
        b = [0] * inst.n
        for j in cls:
            b[j] = 4
        out.append(tuple(b))
    return out


def group_membership(gens: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[List[int]]:
    """Coefficients in [12] expressing target as a Z-combination of gens, or None."""
    sol = solve_mod12(gens, target)
    return None if sol is None else [int(x) for x in sol]


@dataclass
class SmpResult:
    member: bool
    coefficients: Optional[List[int]] = None
    derived_coefficients: Optional[List[int]] = None
    partition: Optional[SimPartition] = field(default=None, repr=False)

    def __bool__(self) -> bool:
        return self.member


def smp_decide(inst: SmpInstance) -> SmpResult:
    if inst.k == 0:
        # the only element generated by nothing is the constant 0
        member = not any(inst.target)
        return SmpResult(member, [] if member else None, [] if member else None, sim_partition(inst))
    part = sim_partition(inst)
    derived = derived_generators(inst, part)
    sol = group_membership(list(inst.generators) + derived, inst.target)
    if sol is None:
        return SmpResult(False, partition=part)
    return SmpResult(True, sol[:inst.k], sol[inst.k:], part)


def witness_term(inst: SmpInstance, result: SmpResult) -> Term:
    """A term t with t(a_1, ..., a_k) = target, checked by evaluation."""
    if not result.member:
        raise ValueError("no witness for a non-member")
    parts: List[Term] = []
    for j, c in enumerate(result.coefficients):
        parts.extend(scaled(c, Var(j + 1)))
    for rep, d in zip(result.partition.reps, result.derived_coefficients):
        if d % 3:
            # f_r only takes values in C, so d matters mod 3
            parts.extend(scaled(d % 3, build_fr_term(inst.k, rep)))
    term = term_sum(parts)
    cols = [np.array(g) for g in inst.generators]
    got = evaluate_vec(term, cols) if cols else np.zeros(inst.n, dtype=np.int64)
    got = np.broadcast_to(got, (inst.n,))
    if tuple(int(x) for x in got) != inst.target:
        raise WitnessError(f"witness evaluates to {tuple(got)} instead of {inst.target}")
    return term


def subpower_closure(generators: Sequence[Sequence[int]], n: int, cap: int = 12 ** 3) -> set:
    """Subloop of L^n generated by ``generators`` (the identity is always included)."""
    if N ** n > cap:
        raise ResourceLimitError(f"12^{n} exceeds the closure cap {cap}")
    powers = N ** np.arange(n, dtype=np.int64)

    def encode(rows: np.ndarray) -> np.ndarray:
        return rows @ powers

    def decode(codes: np.ndarray) -> np.ndarray:
        return (codes[:, None] // powers[None, :]) % N

    seen = np.zeros(N ** n, dtype=bool)
    seen[0] = True
    frontier = [0]
    for g in generators:
        code = int(encode(np.asarray(g, dtype=np.int64) % N))
        if not seen[code]:
            seen[code] = True
            frontier.append(code)
    while frontier:
        known = decode(np.nonzero(seen)[0])
        new = decode(np.array(frontier, dtype=np.int64))
        fresh = []
        for e in new:
            e = np.broadcast_to(e, known.shape)
            for out in (mul_vec(e, known), div_vec(e, known), div_vec(known, e)):
                codes = np.unique(encode(out))
                codes = codes[~seen[codes]]
                seen[codes] = True
                fresh.extend(int(c) for c in codes)
        frontier = fresh
    return {tuple(int(x) for x in row) for row in decode(np.nonzero(seen)[0])}
