"""Terms over {+, neg, 0, f} plus loop multiplication, as s-expressions.

Grammar::

    term := "0" | "x<i>" | "(" op term* ")"
    op   := "+" (two or more args, folded left) | "neg" | "f" | "ldot"

Evaluation is vectorized: variables are bound to numpy arrays, so the same
evaluator serves single points, whole tables and SMP coordinate columns.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Union

import numpy as np

from . import core
from .fnspace import FunctionTable, build_transversal, grid


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Var(Term):
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"variable index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Neg(Term):
    child: Term


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class FApp(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class LoopMul(Term):
    left: Term
    right: Term


ZERO = Zero()


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundVariableError(ValueError):
    pass


# parsing / printing

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")
_VAR = re.compile(r"x([1-9][0-9]*)\Z")
_ARITY = {"neg": (1, 1), "f": (2, 2), "ldot": (2, 2), "+": (2, None)}


def _tokenize(text: str):
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        yield m.group(m.lastindex), start
        pos = m.end()


def parse(text: str) -> Term:
    tokens = list(_tokenize(text))
    if not tokens:
        raise TermSyntaxError("empty term", 0)
    term, pos = _parse_at(tokens, 0, len(text))
    if pos != len(tokens):
        raise TermSyntaxError("trailing input", tokens[pos][1])
    return term


def _parse_at(tokens, i: int, end: int):
    if i >= len(tokens):
        raise TermSyntaxError("unexpected end of input", end)
    tok, at = tokens[i]
    if tok == ")":
        raise TermSyntaxError("unexpected ')'", at)
    if tok != "(":
        return _atom(tok, at), i + 1
    if i + 1 >= len(tokens):
        raise TermSyntaxError("unexpected end of input", end)
    op, op_at = tokens[i + 1]
    if op not in _ARITY:
        raise TermSyntaxError(f"unknown operator {op!r}", op_at)
    args = []
    j = i + 2
    while True:
        if j >= len(tokens):
            raise TermSyntaxError("unbalanced '('", at)
        if tokens[j][0] == ")":
            break
        arg, j = _parse_at(tokens, j, end)
        args.append(arg)
    lo, hi = _ARITY[op]
    if len(args) < lo or (hi is not None and len(args) > hi):
        raise TermSyntaxError(f"operator {op!r} got {len(args)} arguments", op_at)
    if op == "neg":
        node = Neg(args[0])
    elif op == "f":
        node = FApp(args[0], args[1])
    elif op == "ldot":
        node = LoopMul(args[0], args[1])
    else:
        node = args[0]
        for a in args[1:]:
            node = Add(node, a)
    return node, j + 1


def _atom(tok: str, at: int) -> Term:
    if tok == "0":
        return ZERO
    m = _VAR.match(tok)
    if not m:
        raise TermSyntaxError(f"bad variable token {tok!r}", at)
    return Var(int(m.group(1)))


def to_text(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Neg):
        return f"(neg {to_text(t.child)})"
    if isinstance(t, FApp):
        return f"(f {to_text(t.left)} {to_text(t.right)})"
    if isinstance(t, LoopMul):
        return f"(ldot {to_text(t.left)} {to_text(t.right)})"
    if isinstance(t, Add):
        # left-nested sums print as one variadic +
        parts = []
        node = t
        while isinstance(node, Add):
            parts.append(node.right)
            node = node.left
        parts.append(node)
        return "(+ " + " ".join(to_text(p) for p in reversed(parts)) + ")"
    raise TypeError(f"not a term: {t!r}")


# evaluation

def max_var(t: Term) -> int:
    seen: Dict[int, int] = {}

    def walk(node: Term) -> int:
        key = id(node)
        if key in seen:
            return seen[key]
        if isinstance(node, Var):
            out = node.index
        elif isinstance(node, Zero):
            out = 0
        elif isinstance(node, Neg):
            out = walk(node.child)
        else:
            out = max(walk(node.left), walk(node.right))
        seen[key] = out
        return out

    return walk(t)


def evaluate_vec(t: Term, columns: Sequence) -> np.ndarray:
    """Evaluate t with x_i bound to ``columns[i-1]`` (arrays of equal shape)."""
    cols = [np.asarray(c, dtype=np.int64) % core.N for c in columns]
    shape = cols[0].shape if cols else ()
    cache: Dict[int, np.ndarray] = {}

    def ev(node: Term) -> np.ndarray:
        key = id(node)
        if key in cache:
            return cache[key]
        if isinstance(node, Var):
            if node.index > len(cols):
                raise UnboundVariableError(f"x{node.index} is unbound (only {len(cols)} values given)")
            out = cols[node.index - 1]
        elif isinstance(node, Zero):
            out = np.zeros(shape, dtype=np.int64)
        elif isinstance(node, Neg):
            out = (-ev(node.child)) % core.N
        elif isinstance(node, Add):
            out = (ev(node.left) + ev(node.right)) % core.N
        elif isinstance(node, FApp):
            out = core.f_vec(ev(node.left), ev(node.right))
        elif isinstance(node, LoopMul):
            out = core.mul_vec(ev(node.left), ev(node.right))
        else:
            raise TypeError(f"not a term: {node!r}")
        cache[key] = out
        return out

    return ev(t)


def evaluate(t: Term, assignment: Sequence[int]) -> int:
    return int(evaluate_vec(t, [np.array([a]) for a in assignment])[0])


def table(t: Term, k: int) -> FunctionTable:
    if max_var(t) > k:
        raise UnboundVariableError(f"term uses x{max_var(t)} but arity is {k}")
    return FunctionTable(k, evaluate_vec(t, grid(k)))


# construction helpers

def term_sum(parts: Sequence[Term]) -> Term:
    parts = list(parts)
    if not parts:
        return ZERO
    node = parts[0]
    for p in parts[1:]:
        node = Add(node, p)
    return node


def scaled(coeff: int, t: Term) -> List[Term]:
    """``coeff`` copies of t, for coeff in [12]."""
    return [t] * (coeff % core.N)


def linear_term(coeffs: Sequence[int]) -> Term:
    """sum_i coeffs[i] x_{i+1} as repeated additions; Zero if empty."""
    parts: List[Term] = []
    for i, a in enumerate(coeffs):
        parts.extend(scaled(a, Var(i + 1)))
    return term_sum(parts)


def substitute(t: Term, mapping: Mapping[int, Term]) -> Term:
    """Replace each Var(i) by mapping[i]; shared subterms stay shared."""
    memo: Dict[int, Term] = {}

    def sub(node: Term) -> Term:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Var):
            out = mapping.get(node.index, node)
        elif isinstance(node, Zero):
            out = node
        elif isinstance(node, Neg):
            out = Neg(sub(node.child))
        else:
            out = type(node)(sub(node.left), sub(node.right))
        memo[key] = out
        return out

    return sub(t)


def _square(t: Term) -> Term:
    return LoopMul(t, t)


def build_t_term() -> Term:
    """((x1.x2)^4 . x1^8) . x2^8 with powers taken by repeated squaring."""
    x, y = Var(1), Var(2)
    p4 = _square(_square(LoopMul(x, y)))
    x8 = _square(_square(_square(x)))
    y8 = _square(_square(_square(y)))
    return LoopMul(LoopMul(p4, x8), y8)


def build_gk_term(k: int) -> Term:
    """A {+, f} term whose function is g_k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return FApp(Var(1), ZERO)
    if k == 2:
        return FApp(Var(1), Var(2))
    h = build_gk_term(k - 1)
    tail = {j: Var(j + 1) for j in range(3, k)}
    second_args = ([(1, b) for b in range(4)]
                   + [(a, 1) for a in (0, 2)]
                   + [(a, b) for a in (0, 2) for b in (0, 2)])
    summands = []
    for a, b in second_args:
        arg = term_sum(scaled(a, Var(2)) + scaled(b, Var(3)))
        summands.append(substitute(h, {1: Var(1), 2: arg, **tail}))
    return term_sum(summands)


def fr_matrix(r: Sequence[int]) -> List[List[int]]:
    """An invertible matrix M over Z4 with M r = (1, 0, ..., 0) mod 4.

    Pivot on the first odd coordinate j, swap it to the front, scale by its
    inverse and clear the rest.
    """
    k = len(r)
    j = next((i for i, v in enumerate(r) if v % 2), None)
    if j is None:
        raise ValueError(f"{tuple(r)} has no odd coordinate")
    inv = r[j] % 4  # units of Z4 are self-inverse
    perm = list(range(k))
    perm[0], perm[j] = perm[j], perm[0]
    rows = []
    first = [0] * k
    first[j] = inv
    rows.append(first)
    for i in range(1, k):
        src = perm[i]
        row = [0] * k
        row[src] = 1
        row[j] = (row[j] - r[src] * inv) % 4
        rows.append(row)
    return rows


def build_fr_term(k: int, r: Sequence[int]) -> Term:
    r = tuple(int(v) for v in r)
    if len(r) != k or r not in build_transversal(k):
        raise ValueError(f"{r} is not in the transversal R_{k}")
    m = fr_matrix(r)
    return substitute(build_gk_term(k), {i + 1: linear_term(row) for i, row in enumerate(m)})


def random_term(rng: random.Random, k: int, depth: int = 4, loop_mul: bool = True) -> Term:
    """A random term in x1..xk; LoopMul nodes only if ``loop_mul``."""
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.1:
            return ZERO
        return Var(rng.randint(1, k))
    kinds = ["add", "add", "neg", "f", "f"] + (["ldot"] if loop_mul else [])
    kind = rng.choice(kinds)
    if kind == "neg":
        return Neg(random_term(rng, k, depth - 1, loop_mul))
    left = random_term(rng, k, depth - 1, loop_mul)
    right = random_term(rng, k, depth - 1, loop_mul)
    return {"add": Add, "f": FApp, "ldot": LoopMul}[kind](left, right)


TermLike = Union[Term, str]


def as_term(t: TermLike) -> Term:
    return parse(t) if isinstance(t, str) else t
