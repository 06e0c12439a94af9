"""Equational basis for (Z12, +, -, 0, f) and normalization of terms.

A term is flattened into a linear part and a multiset of monomials
``f(first, second)`` with ``first`` in [2]^k and ``second`` in [4]^k.
Monomials are then rewritten one at a time by the basis identities until
each is one of the canonical

    s(i, a, c) = f(x_i, sum_{j<i} a_j x_j + sum_{j>i} c_j x_j)
    t(i, a, c) = f(x_i, sum_{j<i} a_j x_j + x_i + sum_{j>i} c_j x_j)

with a in [2]^(i-1) and c either the transversal representative of its
+/- class or (s only) in {0, 2}^(k-i).  Coefficients are kept mod 3 and
the linear part mod 12.
"""

from __future__ import annotations

import heapq
import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .core import N, f_vec
from .fnspace import (FunctionNormalForm, FunctionTable, ResourceLimitError, build_transversal,
                      canonical_rep, decompose, grid)
from .linalg import rank_mod3
from .termlang import (ZERO, Add, FApp, LoopMul, Neg, Term, Var, Zero, as_term, evaluate_vec,
                       linear_term, parse, scaled, table, term_sum)

Vec = Tuple[int, ...]
Mono = Tuple[Vec, Vec]
Key = Tuple[int, Vec, Vec]

DEFAULT_STEP_BUDGET = 2_000_000


class RewriteError(AssertionError):
    """A rewrite step changed the induced function."""


# identities

@dataclass(frozen=True)
class Identity:
    name: str
    lhs: Term
    rhs: Term
    nvars: int


def _identity(name: str, lhs: str, rhs: str) -> Identity:
    names: List[str] = []
    for tok in re.findall(r"[a-z]\w*", lhs + " " + rhs):
        if tok not in ("f", "neg") and tok not in names:
            names.append(tok)
    rename = {n: f"x{i + 1}" for i, n in enumerate(names)}

    def conv(s: str) -> Term:
        return parse(re.sub(r"[a-z]\w*", lambda m: rename.get(m.group(0), m.group(0)), s))

    return Identity(name, conv(lhs), conv(rhs), len(names))


_F_IDENTITIES = [
    ("(1)", "(f (+ x (f u v)) (+ y (f r s)))", "(f x y)"),
    ("(2)", "(f (+ x u u) (+ y v v v v))", "(f x y)"),
    ("(3)", "(+ (f x y) (f x y) (f x y))", "0"),
    ("(4)", "(f 0 y)", "0"),
    ("(5)", "(f x (+ y y y))", "(f x y)"),
    ("(6)", "(f (+ x y) y)", "(f x y)"),
    ("(7)", "(f (+ x y) z)",
     "(+ (f x (+ x x y y z z)) (f x (+ y y z)) (neg (f x (+ y y))) (f x (+ z z)) (f y z))"),
    ("(8)", "(f x (+ x x y))", "(+ (f x (+ y y)) (neg (f x y)))"),
    ("(9)", "(f x (+ y y z))", "(+ (f x z) (neg (f y z)) (f y (+ x x z)))"),
]

_GROUP_AXIOMS = [
    ("assoc", "(+ (+ x y) z)", "(+ x (+ y z))"),
    ("comm", "(+ x y)", "(+ y x)"),
    ("unit", "(+ x 0)", "x"),
    ("inverse", "(+ x (neg x))", "0"),
    ("exponent", "(+ " + " ".join(["x"] * 12) + ")", "0"),
]


def f_identities() -> List[Identity]:
    return [_identity(*spec) for spec in _F_IDENTITIES]


def identity_basis() -> List[Identity]:
    """The nine f-identities followed by the abelian group axioms and 12x = 0."""
    return f_identities() + [_identity(*spec) for spec in _GROUP_AXIOMS]


def verify_identity(identity: Identity, chunk_arity: int = 5) -> Optional[Tuple[int, ...]]:
    """First assignment where the two sides differ, or None if the identity holds."""
    v = identity.nvars
    if v == 0:
        a = evaluate_vec(identity.lhs, [])
        b = evaluate_vec(identity.rhs, [])
        return None if int(a) == int(b) else ()
    inner = min(v, chunk_arity)
    cols = list(grid(inner))
    size = N ** inner
    for outer in itertools.product(range(N), repeat=v - inner):
        # x_1 fastest, so the outer block covers the trailing variables
        full = cols + [np.full(size, o, dtype=np.int64) for o in reversed(outer)]
        lhs = evaluate_vec(identity.lhs, full)
        rhs = evaluate_vec(identity.rhs, full)
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            j = int(bad[0])
            return tuple(int(c[j]) if np.ndim(c) else int(c) for c in full)
    return None


# normal form

@dataclass(frozen=True)
class TermNormalForm:
    """u: coefficients of x_1..x_k; v, w: nonzero s- and t-monomial coefficients."""

    arity: int
    u: Vec
    v: Dict[Key, int] = field(default_factory=dict, hash=False)
    w: Dict[Key, int] = field(default_factory=dict, hash=False)

    def key(self) -> Tuple:
        return (self.arity, self.u, tuple(sorted(self.v.items())), tuple(sorted(self.w.items())))

    def __hash__(self) -> int:
        return hash(self.key())

    def to_text(self) -> str:
        lines = ["u: " + " ".join(str(x) for x in self.u)]
        for tag, coeffs in (("s", self.v), ("t", self.w)):
            for (i, a, c), b in sorted(coeffs.items()):
                lines.append(f"{tag} {i} {_digits(a)} {_digits(c)} {b}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TermNormalForm":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("u:"):
            raise ValueError("normal form must start with a 'u:' line")
        u = tuple(int(x) % N for x in lines[0][2:].split())
        k = len(u)
        v: Dict[Key, int] = {}
        w: Dict[Key, int] = {}
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 5 or parts[0] not in ("s", "t"):
                raise ValueError(f"bad monomial line {ln!r}")
            key = (int(parts[1]), _undigits(parts[2]), _undigits(parts[3]))
            coef = int(parts[4]) % 3
            if (key not in set(s_keys(k))) if parts[0] == "s" else (key not in set(t_keys(k))):
                raise ValueError(f"{parts[0]}-monomial key {key} is outside the arity-{k} domain")
            if coef:
                (v if parts[0] == "s" else w)[key] = coef
        return cls(k, u, v, w)


def _digits(x: Vec) -> str:
    return "".join(str(d) for d in x) or "-"


def _undigits(s: str) -> Vec:
    return () if s == "-" else tuple(int(ch) for ch in s)


def s_keys(k: int) -> Iterator[Key]:
    for i in range(1, k + 1):
        tail = list(build_transversal(k - i)) + list(itertools.product((0, 2), repeat=k - i))
        for a in itertools.product(range(2), repeat=i - 1):
            for c in tail:
                yield (i, a, tuple(c))


def t_keys(k: int) -> Iterator[Key]:
    for i in range(1, k + 1):
        for a in itertools.product(range(2), repeat=i - 1):
            for c in build_transversal(k - i):
                yield (i, a, c)


def nf_monomial_count(k: int) -> int:
    if k < 1:
        raise ValueError("k must be at least 1")
    return sum(1 for _ in s_keys(k)) + sum(1 for _ in t_keys(k))


def monomial_second(k: int, key: Key, b: int) -> Vec:
    i, a, c = key
    return tuple(a) + (b,) + tuple(c)


def monomial_term(k: int, key: Key, b: int) -> Term:
    i = key[0]
    return FApp(Var(i), linear_term(monomial_second(k, key, b)))


def reconstruct(nf: TermNormalForm) -> Term:
    k = nf.arity
    parts: List[Term] = []
    for i, coef in enumerate(nf.u):
        parts.extend(scaled(coef, Var(i + 1)))
    for key, coef in sorted(nf.v.items()):
        parts.extend([monomial_term(k, key, 0)] * coef)
    for key, coef in sorted(nf.w.items()):
        parts.extend([monomial_term(k, key, 1)] * coef)
    return term_sum(parts)


# flattening

def _mono(first: Sequence[int], second: Sequence[int]) -> Optional[Mono]:
    """Reduce arguments by (2); None when the first argument vanishes, by (4)."""
    a = tuple(int(x) % 2 for x in first)
    if not any(a):
        return None
    return a, tuple(int(x) % 4 for x in second)


def _flatten(t: Term, k: int) -> Tuple[List[int], Counter]:
    memo: Dict[int, Tuple[Tuple[int, ...], Counter]] = {}

    def fl(node: Term):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Var):
            if node.index > k:
                raise ValueError(f"x{node.index} exceeds arity {k}")
            lin = [0] * k
            lin[node.index - 1] = 1
            out = (tuple(lin), Counter())
        elif isinstance(node, Zero):
            out = ((0,) * k, Counter())
        elif isinstance(node, Neg):
            lin, mons = fl(node.child)
            out = (tuple((-x) % N for x in lin), Counter({m: (-c) % 3 for m, c in mons.items()}))
        elif isinstance(node, Add):
            l1, m1 = fl(node.left)
            l2, m2 = fl(node.right)
            mons = Counter(m1)
            for m, c in m2.items():
                mons[m] = (mons[m] + c) % 3
            out = (tuple((x + y) % N for x, y in zip(l1, l2)), mons)
        elif isinstance(node, FApp):
            # (1) drops f-monomials inside arguments
            l1, _ = fl(node.left)
            l2, _ = fl(node.right)
            m = _mono(l1, l2)
            out = ((0,) * k, Counter({m: 1}) if m else Counter())
        elif isinstance(node, LoopMul):
            # a.b = a + b + t(a, b) = a + b + f(a, a + b)
            l1, m1 = fl(node.left)
            l2, m2 = fl(node.right)
            mons = Counter(m1)
            for m, c in m2.items():
                mons[m] = (mons[m] + c) % 3
            s = tuple((x + y) % N for x, y in zip(l1, l2))
            m = _mono(l1, s)
            if m:
                mons[m] = (mons[m] + 1) % 3
            out = (s, mons)
        else:
            raise TypeError(f"not a term: {node!r}")
        memo[key] = out
        return out

    lin, mons = fl(t)
    return list(lin), Counter({m: c for m, c in mons.items() if c})


# rewrite rules; each returns (rule name, [(coefficient, first, second), ...])

def _unit(k: int, i: int, scale: int = 1) -> List[int]:
    v = [0] * k
    v[i] = scale
    return v


def _comb(*terms) -> List[int]:
    """Integer combination of vectors: _comb((2, x), (1, z)) = 2x + z."""
    out = [0] * len(terms[0][1])
    for s, v in terms:
        for j, x in enumerate(v):
            out[j] += s * x
    return out


def _rule_split(first: Vec, second: Vec):
    # (7) f(x+y, z) with x the lowest variable of the first argument
    k = len(first)
    j = first.index(1)
    x = _unit(k, j)
    y = list(first)
    y[j] = 0
    z = list(second)
    return "(7)", [
        (1, x, _comb((2, x), (2, y), (2, z))),
        (1, x, _comb((2, y), (1, z))),
        (-1, x, _comb((2, y))),
        (1, x, _comb((2, z))),
        (1, y, z),
    ]


def _rule_diag(i: int, second: Vec):
    # (8) f(x, 2x + y) = f(x, 2y) - f(x, y)
    k = len(second)
    x = _unit(k, i)
    y = list(second)
    y[i] -= 2
    return "(8)", [(1, x, _comb((2, y))), (-1, x, y)]


def _rule_lower(i: int, r: int, second: Vec):
    # (9) f(x, 2y + z) = f(x, z) - f(y, z) + f(y, 2x + z) with y = x_r
    k = len(second)
    x = _unit(k, i)
    y = _unit(k, r)
    z = list(second)
    z[r] -= 2
    return "(9)", [(1, x, z), (-1, y, z), (1, y, _comb((2, x), (1, z)))]


def _split_parts(i: int, second: Vec, rep: Vec):
    k = len(second)
    x = _unit(k, i)
    y = list(second[:i]) + [0] * (k - i)
    z = [0] * (i + 1) + list(rep)
    return x, y, z


def _rule_tail_b0(i: int, second: Vec, rep: Vec):
    # f(x, y + 3z) = f(x, y + z) - f(y, y + z) + f(y, 2x + y + z), via (5), (9)
    x, y, z = _split_parts(i, second, rep)
    return "b=0", [
        (1, x, _comb((1, y), (1, z))),
        (-1, y, _comb((1, y), (1, z))),
        (1, y, _comb((2, x), (1, y), (1, z))),
    ]


def _rule_tail_b1(i: int, second: Vec, rep: Vec):
    # f(x, x+y+3z) expanded via (5), (8), (9)
    x, y, z = _split_parts(i, second, rep)
    return "b=1", [
        (1, x, [0] * len(x)),
        (-1, x, _comb((2, z))),
        (1, y, _comb((2, z))),
        (-1, y, _comb((2, x), (2, z))),
        (-1, x, _comb((1, x), (1, y), (1, z))),
        (1, y, _comb((1, x), (1, y), (1, z))),
        (-1, y, _comb((3, x), (1, y), (1, z))),
    ]


def _rule_even_tail(i: int, second: Vec):
    # f(x_i, y + x_i + 2w) = f(y, y + x_i + 2w) by (6) and (2)
    k = len(second)
    y = list(second[:i]) + [0] * (k - i)
    return "(6)", [(1, y, list(second))]


def classify(mono: Mono):
    """Return ('s'|'t', key) for a canonical monomial, or (None, rewrite)."""
    first, second = mono
    if sum(first) > 1:
        return None, _rule_split(first, second)
    i = first.index(1)
    if second[i] >= 2:
        return None, _rule_diag(i, second)
    for r in range(i):
        if second[r] >= 2:
            return None, _rule_lower(i, r, second)
    b = second[i]
    a, c = second[:i], second[i + 1:]
    key = (i + 1, a, c)
    if all(x % 2 == 0 for x in c):
        if b == 0:
            return "s", key
        return None, _rule_even_tail(i, second)
    rep = canonical_rep(c)
    if rep == c:
        return ("s" if b == 0 else "t"), key
    if b == 0:
        return None, _rule_tail_b0(i, second, rep)
    return None, _rule_tail_b1(i, second, rep)


def _mono_values(k: int, first: Sequence[int], second: Sequence[int]) -> np.ndarray:
    xs = grid(k)
    u = sum(int(a) * x for a, x in zip(first, xs)) % N
    v = sum(int(b) * x for b, x in zip(second, xs)) % N
    return f_vec(u, v)


def normalize(t, k: int, check: bool = False, budget: int = DEFAULT_STEP_BUDGET) -> TermNormalForm:
    """Normal form of the k-ary term t.

    With ``check`` every rewrite step is tabulated on both sides (k <= 3).
    """
    t = as_term(t)
    lin, mons = _flatten(t, k)
    done: Counter = Counter()
    pending: Dict[Mono, int] = {}
    heap: List = []

    def priority(m: Mono):
        first = m[0]
        if sum(first) > 1:
            return (0, m)
        return (1, -first.index(1), m)

    def push(m: Mono, c: int) -> None:
        c %= 3
        if not c:
            return
        kind, _ = classify(m)
        if kind is not None:
            done[m] = (done[m] + c) % 3
            return
        if m not in pending:
            heapq.heappush(heap, priority(m))
            pending[m] = 0
        pending[m] = (pending[m] + c) % 3

    for m, c in mons.items():
        push(m, c)
    steps = 0
    while heap:
        m = heapq.heappop(heap)[-1]
        c = pending.pop(m)
        if not c:
            continue
        steps += 1
        if steps > budget:
            raise ResourceLimitError(f"normalization exceeded {budget} rewrite steps")
        _, (rule, out) = classify(m)
        if check:
            before = _mono_values(k, *m)
            after = sum(coef * _mono_values(k, fst, snd) for coef, fst, snd in out) % N
            if not np.array_equal(before, after):
                raise RewriteError(f"rule {rule} is unsound on f{m}")
        for coef, fst, snd in out:
            nm = _mono(fst, snd)
            if nm is not None:
                push(nm, coef * c)
    v: Dict[Key, int] = {}
    w: Dict[Key, int] = {}
    for m, c in done.items():
        if c:
            kind, key = classify(m)
            (v if kind == "s" else w)[key] = c
    return TermNormalForm(k, tuple(x % N for x in lin), v, w)


def terms_equal(t1, t2, k: int) -> bool:
    return normalize(t1, k) == normalize(t2, k)


# independence and change of basis

def monomial_tables(k: int) -> List[FunctionTable]:
    out = [FunctionTable(k, _mono_values(k, _unit(k, key[0] - 1), monomial_second(k, key, 0)))
           for key in s_keys(k)]
    out += [FunctionTable(k, _mono_values(k, _unit(k, key[0] - 1), monomial_second(k, key, 1)))
            for key in t_keys(k)]
    return out


def verify_nf_independence(k: int) -> int:
    """F3 rank of the monomial value/4 matrix (equals the monomial count iff independent)."""
    if k > 3:
        raise ResourceLimitError("independence check is capped at k <= 3")
    m = np.stack([tab.values // 4 for tab in monomial_tables(k)], axis=1)
    return rank_mod3(m)


@lru_cache(maxsize=None)
def _change_of_basis(k: int) -> Dict[Tuple[str, Key], Tuple[int, ...]]:
    reps = build_transversal(k).reps
    out = {}
    for tag, keys, b in (("s", s_keys(k), 0), ("t", t_keys(k), 1)):
        for key in keys:
            tab = FunctionTable(k, _mono_values(k, _unit(k, key[0] - 1), monomial_second(k, key, b)))
            fnf = decompose(tab)
            out[(tag, key)] = tuple(fnf.wcoeffs[r] for r in reps)
    return out


def to_function_normal_form(nf: TermNormalForm) -> FunctionNormalForm:
    """Rewrite the s/t coefficients in the f_r basis of W_k."""
    k = nf.arity
    reps = build_transversal(k).reps
    basis = _change_of_basis(k)
    acc = [0] * len(reps)
    for tag, coeffs in (("s", nf.v), ("t", nf.w)):
        for key, c in coeffs.items():
            for j, x in enumerate(basis[(tag, key)]):
                acc[j] = (acc[j] + c * x) % 3
    return FunctionNormalForm(k, nf.u, dict(zip(reps, acc)))
