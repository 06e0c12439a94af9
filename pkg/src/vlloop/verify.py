"""Verification suites run by ``vlloop verify`` and the acceptance tests.

Every suite returns a list of :class:`Check`.  Randomized suites draw from
``random.Random(seed)`` only, so a fixed seed reproduces a report exactly.
"""

from __future__ import annotations

import itertools
import random
import statistics
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from . import core, fnspace, rewriter, smp, termlang
from .fnspace import FunctionTable
from .termlang import Add, FApp, Neg, Term, Var, ZERO


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self, fmt: str = "plain") -> str:
        status = "PASS" if self.passed else "FAIL"
        if fmt == "lines":
            return f"check={self.name} status={status.lower()} detail={self.detail!r}"
        return f"[{status}] {self.name}: {self.detail}"


def _g_table(k: int) -> FunctionTable:
    def g(*xs):
        hit = xs[0] % 2 == 1
        for x in xs[1:]:
            hit = hit & (x % 4 == 0)
        return np.where(hit, 4, 0)
    return FunctionTable.from_function(k, g)


def suite_identities(**_) -> List[Check]:
    checks = []
    start = time.perf_counter()
    for ident in rewriter.identity_basis():
        cex = rewriter.verify_identity(ident)
        label = ident.name if ident.name.startswith("(") else "." + ident.name
        checks.append(Check(f"identity{label}", cex is None,
                            f"{12 ** ident.nvars} assignments" if cex is None else f"counterexample {cex}"))
    elapsed = time.perf_counter() - start
    nine = sum(c.passed for c in checks[:9])
    checks.append(Check("identities.count", nine == 9, f"{nine}/9 f-identities hold"))
    checks.append(Check("identities.runtime", elapsed < 60, f"{elapsed:.2f}s"))
    return checks


def suite_theorem1(k: Optional[int] = None, samples: Optional[int] = None, seed: int = 0, **_) -> List[Check]:
    kmax = 3 if k is None else k
    samples = 10_000 if samples is None else samples
    checks = []
    naive = fnspace.naive_clone_closure(1)
    checks.append(Check("theorem1.naive_k1", len(naive) == 36, f"naive BFS size {len(naive)}"))
    for kk in range(1, min(kmax, fnspace.MAX_CLOSURE_ARITY) + 1):
        expected = 12 ** kk * 3 ** ((4 ** kk - 2 ** kk) // 2)
        cl = fnspace.clone_closure(kk)
        checks.append(Check(f"theorem1.closure_k{kk}", cl.size == expected,
                            f"size {cl.size}, predicted {expected}"))
        checks.append(Check(f"theorem1.direct_sum_k{kk}", fnspace.verify_direct_sum(kk),
                            f"{12 ** kk} linear tables"))
        if kk == 1:
            same = {h for h in naive} == {h for h in naive if cl.contains(h)} and len(naive) == cl.size
            checks.append(Check("theorem1.naive_matches_subgroup", same, "k=1 element sets agree"))
    for kk in range(1, min(kmax, 2) + 1):
        for op in ("f", "t"):
            ok = fnspace.verify_f_closure(kk, "exhaustive", seed=seed, op=op)
            checks.append(Check(f"theorem1.{op}_closure_k{kk}", ok, f"{12 ** (2 * kk)} linear pairs"))
    if kmax >= 3:
        ok = fnspace.verify_f_closure(3, "sampled", samples=samples, seed=seed)
        checks.append(Check("theorem1.f_closure_k3", ok, f"{samples} sampled pairs"))
    return checks


def suite_lemma_t(**_) -> List[Check]:
    got = termlang.table(termlang.build_t_term(), 2)
    want = FunctionTable.from_function(2, core.t_vec)
    lemma1 = all(core.loop_mul(core.loop_mul(core.power_sq(core.loop_mul(x, y), 4), core.power_sq(x, 8)),
                               core.power_sq(y, 8)) == core.t_map(x, y)
                 for x in range(12) for y in range(12))
    lemma3 = all(core.t_map(x, y) == core.f_map(x, (x + y) % 12)
                 and core.f_map(x, y) == core.t_map(x, (3 * x + y) % 12)
                 for x in range(12) for y in range(12))
    return [
        Check("lemma_t.term_table", got == want, "144 inputs"),
        Check("lemma_t.pointwise", lemma1, "(xy)^4 x^8 y^8 = t(x,y) on 144 pairs"),
        Check("lemma_t.f_t_interdefinable", lemma3, "144 pairs"),
    ]


def suite_gk(k: Optional[int] = None, **_) -> List[Check]:
    kmax = 4 if k is None else k
    checks = []
    for kk in range(1, kmax + 1):
        ok = termlang.table(termlang.build_gk_term(kk), kk) == _g_table(kk)
        checks.append(Check(f"gk.k{kk}", ok, f"{12 ** kk} inputs"))
    return checks


def suite_fr(k: Optional[int] = None, **_) -> List[Check]:
    kmax = 3 if k is None else k
    checks = []
    for kk in range(1, kmax + 1):
        reps = fnspace.build_transversal(kk).reps
        bad = [r for r in reps if termlang.table(termlang.build_fr_term(kk, r), kk) != fnspace.f_rbar(kk, r)]
        checks.append(Check(f"fr.k{kk}", not bad, f"{len(reps) - len(bad)}/{len(reps)} representatives"))
    return checks


def suite_congruences(**_) -> List[Check]:
    found = core.enumerate_congruences()
    expected = {core.coset_partition(s) for s in ({0}, core.C, core.D, range(12))}
    chain = all(core.refines(found[i], found[i + 1]) for i in range(len(found) - 1))
    return [
        Check("congruences.count", len(found) == 4, f"{len(found)} congruences"),
        Check("congruences.cosets", set(found) == expected, "cosets of 0, C, 2Z12, Z12"),
        Check("congruences.chain", chain, "ordered by refinement"),
    ]


def suite_independence(k: Optional[int] = None, **_) -> List[Check]:
    kmax = 3 if k is None else k
    checks = []
    for kk in range(1, 7):
        count = rewriter.nf_monomial_count(kk)
        want = 2 ** (kk - 1) * (2 ** kk - 1)
        ok = count == want == (4 ** kk - 2 ** kk) // 2
        checks.append(Check(f"independence.count_k{kk}", ok, f"{count} monomials"))
    for kk in range(1, min(kmax, 3) + 1):
        rank = rewriter.verify_nf_independence(kk)
        want = rewriter.nf_monomial_count(kk)
        checks.append(Check(f"independence.rank_k{kk}", rank == want, f"F3 rank {rank} of {want}"))
        wrank = fnspace.wk_basis_rank(kk)
        checks.append(Check(f"independence.wk_basis_k{kk}", wrank == want, f"F3 rank {wrank}"))
    return checks


# random term helpers

def equivalent_variant(t: Term, rng: random.Random) -> Term:
    """A syntactically different term with the same function."""
    choice = rng.randrange(5)
    if choice == 0:
        return Neg(Neg(t))
    if choice == 1:
        return Add(ZERO, t)
    if isinstance(t, Add):
        return Add(t.right, t.left)
    if isinstance(t, FApp):
        if rng.random() < 0.5:
            return FApp(t.left, Add(Add(t.right, t.right), t.right))
        return FApp(Add(Add(t.left, t.left), t.left), t.right)
    return Add(t, FApp(t, t))  # f(x, x) = 0


def _random_pair(rng: random.Random, k: int):
    t1 = termlang.random_term(rng, k, depth=4)
    roll = rng.random()
    if roll < 1 / 3:
        return t1, termlang.random_term(rng, k, depth=4)
    t2 = equivalent_variant(t1, rng)
    if roll < 2 / 3:
        return t1, t2
    i, j = rng.randint(1, k), rng.randint(1, k)
    return t1, Add(t2, FApp(Var(i), Var(j)) if rng.random() < 0.5 else Var(i))


def suite_rewriter(samples: Optional[int] = None, seed: int = 0, check_steps: bool = False, **_) -> List[Check]:
    samples = 1000 if samples is None else samples
    rng = random.Random(seed)
    checks = []
    for k in (1, 2, 3):
        fails = 0
        for _ in range(samples):
            t = termlang.random_term(rng, k, depth=5)
            nf = rewriter.normalize(t, k, check=check_steps)
            if termlang.table(rewriter.reconstruct(nf), k) != termlang.table(t, k):
                fails += 1
            elif rewriter.normalize(rewriter.reconstruct(nf), k) != nf:
                fails += 1
        checks.append(Check(f"rewriter.roundtrip_k{k}", fails == 0, f"{fails} failures in {samples} terms"))
    disagree = equal = 0
    for _ in range(samples):
        k = rng.randint(1, 2)
        t1, t2 = _random_pair(rng, k)
        by_tables = termlang.table(t1, k) == termlang.table(t2, k)
        equal += by_tables
        if rewriter.terms_equal(t1, t2, k) != by_tables:
            disagree += 1
    checks.append(Check("rewriter.equality", disagree == 0,
                        f"{disagree} disagreements in {samples} pairs ({equal} equal by tables)"))
    return checks


def _classes(keys) -> set:
    groups: Dict = {}
    for idx, key in enumerate(keys):
        groups.setdefault(key, []).append(idx)
    return {frozenset(g) for g in groups.values()}


def suite_coherence(samples: Optional[int] = None, seed: int = 0, **_) -> List[Check]:
    samples = 500 if samples is None else samples
    rng = random.Random(seed)
    terms = []
    for _ in range(samples):
        k = rng.randint(1, 3)
        if terms and rng.random() < 0.3:
            k0, prev = terms[rng.randrange(len(terms))]
            terms.append((k0, equivalent_variant(prev, rng)))
        else:
            terms.append((k, termlang.random_term(rng, k, depth=3)))
    by_fn, by_nf = [], []
    basis_ok = True
    for k, t in terms:
        fnf = fnspace.decompose(termlang.table(t, k))
        nf = rewriter.normalize(t, k)
        if fnf is None:
            basis_ok = False
            by_fn.append((k, "non-member", id(t)))
        else:
            by_fn.append((k,) + fnf.key())
            basis_ok &= rewriter.to_function_normal_form(nf).key() == fnf.key()
        by_nf.append(nf.key())
    same = _classes(by_fn) == _classes(by_nf)
    n_classes = len(_classes(by_fn))
    return [
        Check("coherence.partition", same, f"{samples} terms, {n_classes} classes"),
        Check("coherence.change_of_basis", basis_ok, "rewriter coefficients map onto decompose output"),
    ]


def _time_decide(inst: smp.SmpInstance, repeats: int = 3) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        smp.smp_decide(inst)
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def suite_smp_oracle(samples: Optional[int] = None, seed: int = 0, **_) -> List[Check]:
    samples = 1000 if samples is None else samples
    rng = random.Random(seed)
    checks = []
    disagree = members = 0
    for _ in range(samples):
        n, k = rng.randint(1, 2), rng.randint(1, 2)
        gens = [tuple(rng.randrange(12) for _ in range(n)) for _ in range(k)]
        closure = smp.subpower_closure(gens, n)
        if rng.random() < 0.5:
            target = rng.choice(sorted(closure))
        else:
            target = tuple(rng.randrange(12) for _ in range(n))
        inst = smp.SmpInstance.make(gens, target)
        res = smp.smp_decide(inst)
        members += res.member
        if res.member != (target in closure):
            disagree += 1
        elif res.member:
            smp.witness_term(inst, res)
        derived = smp.derived_generators(inst)
        if _group_span(gens + derived, n) != closure:
            disagree += 1
    checks.append(Check("smp.random", disagree == 0,
                        f"{disagree} disagreements in {samples} instances ({members} members)"))
    disagree = total = 0
    for n in (1, 2):
        targets = list(itertools.product(range(12), repeat=n))
        for g in targets:
            closure = smp.subpower_closure([g], n)
            for tgt in targets:
                total += 1
                if smp.smp_decide(smp.SmpInstance.make([g], tgt)).member != (tgt in closure):
                    disagree += 1
    checks.append(Check("smp.single_generator_sweep", disagree == 0,
                        f"{disagree} disagreements in {total} instances"))
    return checks


def _group_span(gens, n: int) -> set:
    span = {(0,) * n}
    frontier = list(span)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % 12 for a, b in zip(v, g))
                if w not in span:
                    span.add(w)
                    nxt.append(w)
        frontier = nxt
    return span


def suite_smp_scaling(seed: int = 0, **_) -> List[Check]:
    rng = random.Random(seed)
    sizes = (10, 100, 1000)
    times = []
    for n in sizes:
        gens = [tuple(rng.randrange(12) for _ in range(n)) for _ in range(10)]
        target = tuple(rng.randrange(12) for _ in range(n))
        times.append(_time_decide(smp.SmpInstance.make(gens, target)))
    checks = [Check(f"smp.time_n{n}", t < 5, f"{t:.4f}s") for n, t in zip(sizes, times)]
    slope = np.polyfit(np.log(sizes), np.log(times), 1)[0]
    ok = all(times[i + 1] <= 4 * times[i] * (sizes[i + 1] / sizes[i]) ** 3 for i in range(len(sizes) - 1))
    checks.append(Check("smp.cubic_trend", ok, f"fitted exponent {slope:.2f}"))
    return checks


SUITES: Dict[str, Callable[..., List[Check]]] = {
    "identities": suite_identities,
    "theorem1": suite_theorem1,
    "gk": suite_gk,
    "fr": suite_fr,
    "lemma-t": suite_lemma_t,
    "congruences": suite_congruences,
    "independence": suite_independence,
    "rewriter": suite_rewriter,
    "coherence": suite_coherence,
    "smp-oracle": suite_smp_oracle,
    "smp-scaling": suite_smp_scaling,
}


def run_suite(name: str, **kwargs) -> List[Check]:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](**kwargs)
