"""The acceptance suite, shared by ``hn selftest`` and the test-suite.

Each ``criterion_*`` function runs one check end-to-end and returns a
:class:`CriterionResult`; nothing here raises on a failed check.
"""
from __future__ import annotations

import itertools
import math
import random
import time
import traceback
from dataclasses import dataclass, field

from .charp import vc_charp
from .corpus import (gen_block_pair, gen_random_spec, load_corpus, random_homogeneous,
                     random_hn_poly, random_poly)
from .harmonic import build_graph, disjointness, hes_product_vanishes, trace_identity_check
from .hn import beta_slice, grad_pairing, is_hn_direct, is_hn_powers
from .inversion import (additivity_check, full_sigma_order, qpair, qpair_closed_hn,
                        qpair_recursive, sigma_functions, sigma_functions_hn)
from .notation import format_poly, parse_poly
from .poly import Poly, evaluate_matrix, hessian, laplacian
from .radius import factorial_sum_check, qm_bound_check, sup_norm
from .scalars import GF, QQ, QQI
from .series import compose, invert_map, symmetric_map
from .trees import TREE_CAP, q_tree_term, q_tree_term_restricted, trees_of_size

__all__ = ["CriterionResult", "CRITERIA", "run_all", "UNLABELED_TREE_COUNTS"]

SEED = 20240601
UNLABELED_TREE_COUNTS = [1, 1, 1, 2, 3, 6, 11, 23, 47]
INVERSION_ORDER = 5
COMPOSITION_DEGREE = 11


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:>2} {self.title}: {self.detail} ({self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3),
                "failures": [str(f) for f in self.failures[:20]]}


def _timed(number, title):
    def wrap(fn):
        def run(**kw):
            t0 = time.perf_counter()
            try:
                passed, detail, failures = fn(**kw)
            except Exception as exc:  # a crash is a failed criterion, reported with its trace
                passed, detail = False, f"crashed: {type(exc).__name__}: {exc}"
                failures = [traceback.format_exc()]
            return CriterionResult(number, title, passed, detail, time.perf_counter() - t0, failures)
        run.number, run.title = number, title
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


# ---------------------------------------------------------------------------

@_timed(1, "inversion agreement")
def criterion_inversion(corpus=None, budget: float = 120.0):
    """Four routes to Q_[1..5] agree exactly on every corpus entry (closed form on HN ones)."""
    corpus = load_corpus() if corpus is None else corpus
    t0 = time.perf_counter()
    bad, hn_count = [], 0
    for e in corpus:
        P = e.spec.assemble()
        ref = qpair_recursive(P, INVERSION_ORDER).Q
        others = {"tree": qpair(P, INVERSION_ORDER, "tree", spec=e.spec).Q,
                  "map": qpair(P, INVERSION_ORDER, "map").Q}
        if is_hn_direct(P):
            hn_count += 1
            others["closed"] = qpair_closed_hn(P, INVERSION_ORDER).Q
        for name, Q in others.items():
            if Q != ref:
                bad.append(f"{e.name}: {name} differs from recursion")
    elapsed = time.perf_counter() - t0
    slow = elapsed > budget
    detail = (f"{len(corpus)} entries ({hn_count} HN), {len(bad)} mismatches, "
              f"{elapsed:.1f}s of {budget:.0f}s budget")
    return not bad and not slow, detail, bad + ([f"over budget: {elapsed:.1f}s"] if slow else [])


@_timed(2, "composition identity")
def criterion_composition(corpus=None, N: int = COMPOSITION_DEGREE):
    """F_t o G_t and G_t o F_t are the identity through z-degree N, all t-powers kept."""
    corpus = load_corpus() if corpus is None else corpus
    bad = []
    for e in corpus:
        F = symmetric_map(e.spec.assemble(), N, deformed=True)
        G = invert_map(F)
        if not compose(F, G).is_identity():
            bad.append(f"{e.name}: F o G != id")
        if not compose(G, F).is_identity():
            bad.append(f"{e.name}: G o F != id")
    return not bad, f"{len(corpus)} entries through z-degree {N}, {len(bad)} failures", bad


@_timed(3, "HN equivalence")
def criterion_hn_equivalence(count: int = 500, seed: int = SEED):
    """Nilpotent Hessian iff Delta^m P^m = 0 for m = 1..n, on random inputs (a third HN by construction)."""
    rng = random.Random(seed)
    bad, hn = [], 0
    for idx in range(count):
        n = rng.randint(1, 4)
        s = rng.randrange(1 << 30)
        kind = idx % 3
        if kind == 0 or n == 1:
            P = random_poly(n, 4, s, rng.choice((QQ, QQI)), min_degree=2)
        else:
            P = random_hn_poly(n, s)
            if kind == 2:
                # a small perturbation usually destroys nilpotency
                P = P + random_poly(n, 4, s + 1, QQI, terms=1, min_degree=2)
        if not P:
            P = parse_poly("z1^2", n)
        direct = is_hn_direct(P)
        powers = is_hn_powers(P, with_direct=False).verdict
        hn += direct
        if direct != powers:
            bad.append(format_poly(P))
    return not bad, f"{count} polynomials ({hn} HN), {len(bad)} mismatches", bad


def _random_isotropic_spec(rng):
    n = rng.randint(2, 4)
    d = rng.choice((3, 4))
    k = rng.randint(1, 2 if n == 2 else 3)
    return gen_random_spec(n, d, k, rng.randrange(1 << 30))


@_timed(4, "trace identity")
def criterion_trace(count: int = 50, seed: int = SEED, m_max: int = 4):
    """Tr Hes^m P = (d(d-1))^m Tr Psi^m, and the same for each shifted Psi_j."""
    rng = random.Random(seed)
    bad = []
    for _ in range(count):
        spec = _random_isotropic_spec(rng)
        chk = trace_identity_check(spec, m_max)
        if not chk.ok:
            bad.append(f"{spec.to_dict()}: {chk.witness}")
    return not bad, f"{count} specs, m <= {m_max}, every shift j, {len(bad)} failures", bad


@_timed(5, "beta slices")
def criterion_beta_slice(count: int = 100, seed: int = SEED):
    """Hes of the (d-2)-fold directional derivative equals (d-2)! times Hes P at beta."""
    rng = random.Random(seed)
    bad = []
    for _ in range(count):
        d = rng.choice((2, 3, 4, 5))
        n = rng.randint(1, 4)
        ring = rng.choice((QQ, QQI))
        P = random_homogeneous(n, d, rng.randrange(1 << 30), ring)
        beta = [ring.coerce(rng.randint(-3, 3)) for _ in range(n)]
        if ring is QQI:
            beta = [b + QQI.i * rng.randint(-2, 2) for b in beta]
        try:
            Pb = beta_slice(P, beta)
        except AssertionError as exc:
            bad.append(f"{format_poly(P)} at {beta}: {exc}")
            continue
        lhs = hessian(Pb)
        rhs = evaluate_matrix(hessian(P), beta)
        f = math.factorial(d - 2)
        for i, j in itertools.product(range(n), repeat=2):
            if lhs[i, j] != Poly.constant(n, ring, rhs[i][j] * f):
                bad.append(f"{format_poly(P)} at {beta}: entry ({i}, {j})")
                break
    return not bad, f"{count} (P, beta) pairs, d in 2..5, {len(bad)} failures", bad


@_timed(6, "disjoint additivity")
def criterion_disjoint(count: int = 20, seed: int = SEED, M: int = INVERSION_ORDER):
    """Orthogonal blocks: Hessians annihilate, Q adds up, HN splits, and so do the VC terms."""
    rng = random.Random(seed)
    bad, hn = [], 0
    for idx in range(count):
        n = rng.randint(4, 6)
        d = rng.choice((3, 4))
        kind = "isotropic" if idx % 2 else "generic"
        S, T = gen_block_pair(n, d, rng.randrange(1 << 30), kind=kind)
        PS, PT = S.assemble(), T.assemble()
        tag = f"pair {idx} (n={n}, d={d}, {kind})"
        if not disjointness(PS, PT):
            bad.append(f"{tag}: not disjoint")
            continue
        if not hes_product_vanishes(PS, PT):
            bad.append(f"{tag}: Hessian products do not vanish")
        if not additivity_check(PS, PT, M):
            bad.append(f"{tag}: Q_[m] not additive")
        P = PS + PT
        whole, parts = is_hn_direct(P), (is_hn_direct(PS), is_hn_direct(PT))
        if whole != all(parts):
            bad.append(f"{tag}: HN of the sum is not HN of both parts")
        if whole:
            hn += 1
            powS, powT, powP = PS, PT, P
            for m in range(M + 1):
                if m:
                    powS, powT, powP = powS * PS, powT * PT, powP * P
                if laplacian(powP, times=m) != laplacian(powS, times=m) + laplacian(powT, times=m):
                    bad.append(f"{tag}: Delta^{m} P^{m + 1} does not split")
                    break
    return not bad, f"{count} block pairs ({hn} HN), M={M}, {len(bad)} failures", bad


@_timed(7, "self-inverting")
def criterion_self_inverting(corpus=None):
    """Self-inverting entries have Q_[m] = 0 for 2 <= m <= 6; the others show some Q_[m] != 0, m <= 3."""
    corpus = load_corpus() if corpus is None else corpus
    bad, si = [], 0
    for e in corpus:
        P = e.spec.assemble()
        if not grad_pairing(P):
            si += 1
            Q = qpair_recursive(P, 6).Q
            if any(Q[m - 1] for m in range(2, 7)):
                bad.append(f"{e.name}: self-inverting but some Q_[m] != 0")
            if Q[0] != P:
                bad.append(f"{e.name}: Q_[1] != P")
        else:
            Q = qpair_recursive(P, 3).Q
            if not any(Q[m - 1] for m in (2, 3)):
                bad.append(f"{e.name}: not self-inverting yet Q_[2] = Q_[3] = 0")
    return not bad, f"{si} self-inverting, {len(corpus) - si} not, {len(bad)} failures", bad


@_timed(8, "functional equations")
def criterion_sigma(corpus=None, N: int = COMPOSITION_DEGREE):
    """U(F_t) = P, V(F_t) = f_t, W(F_t) = sigma2 through degree N; W = 2V + 2tU; explicit HN series agree."""
    corpus = load_corpus() if corpus is None else corpus
    bad, hn = [], 0
    for e in corpus:
        P = e.spec.assemble()
        M = full_sigma_order(P, N)
        try:
            S = sigma_functions(P, M, N=N, verify=True)
        except AssertionError as exc:
            bad.append(f"{e.name}: {exc}")
            continue
        if not S.relation_holds():
            bad.append(f"{e.name}: W != 2V + 2tU")
        if is_hn_direct(P):
            hn += 1
            try:
                if sigma_functions_hn(P, M, compare=False) != S:
                    bad.append(f"{e.name}: explicit HN series differ")
            except AssertionError as exc:
                bad.append(f"{e.name}: {exc}")
    return not bad, f"{len(corpus)} entries ({hn} HN) through z-degree {N}, {len(bad)} failures", bad


@_timed(9, "char-p vanishing")
def criterion_charp(count: int = 200, seed: int = SEED, primes=(2, 3, 5), budget: float = 60.0):
    """Delta^m P^(m+1) = 0 over GF(p) once m >= d(p-1)/2."""
    rng = random.Random(seed)
    t0 = time.perf_counter()
    bad, total, strict_bad = [], 0, 0
    for p in primes:
        ring = GF(p)
        done = 0
        while done < count:
            n = rng.randint(1, 3)
            P = random_poly(n, 4, rng.randrange(1 << 30), ring, min_degree=0)
            if not P or P.degree < 1:
                continue
            done += 1
            rep = vc_charp(P)
            strict_bad += not rep.strict_ok
            if not rep.ok:
                bad.append(f"p={p}: {format_poly(P)} ({'; '.join(rep.notes)})")
        total += done
    elapsed = time.perf_counter() - t0
    slow = elapsed > budget
    detail = (f"{total} polynomials over p in {list(primes)}, {len(bad)} failures at m >= d(p-1)/2 "
              f"({strict_bad} at 2m > d(p-1)), {elapsed:.1f}s of {budget:.0f}s")
    return not bad and not slow, detail, bad + ([f"over budget: {elapsed:.1f}s"] if slow else [])


def _brute_aut(T) -> int:
    es = {frozenset(e) for e in T.edges}
    return sum(all(frozenset((p[a], p[b])) in es for a, b in T.edges)
               for p in itertools.permutations(range(T.m)))


@_timed(10, "tree machinery")
def criterion_trees(pairs: int = 30, seed: int = SEED, aut_max: int = 7):
    """Tree counts, automorphism orders against a permutation search, restricted vs full tree terms."""
    bad = []
    counts = [len(trees_of_size(m)) for m in range(1, TREE_CAP + 1)]
    if counts != UNLABELED_TREE_COUNTS:
        bad.append(f"counts {counts}")
    for m in range(1, aut_max + 1):
        for T in trees_of_size(m):
            if _brute_aut(T) != T.aut_order:
                bad.append(f"aut of {T.edges}")
    rng = random.Random(seed)
    for _ in range(pairs):
        spec = _random_isotropic_spec(rng)
        m = rng.randint(1, 4)
        T = rng.choice(trees_of_size(m))
        full = q_tree_term(T, spec.assemble())
        restricted = q_tree_term_restricted(T, spec, build_graph(spec), check=False)
        if full != restricted:
            bad.append(f"restricted sum differs: tree {T.edges}, spec {spec.to_dict()}")
    return not bad, f"counts {counts}, aut up to m={aut_max}, {pairs} spec/tree pairs, {len(bad)} failures", bad


@_timed(11, "numeric bounds")
def criterion_numeric(corpus=None, samples: int = 1000, seed: int = SEED, m_max: int = INVERSION_ORDER):
    """Sampled |Q_[m]| against the ball bound, the factorial-sum inequality, and two known sup-norms."""
    corpus = load_corpus() if corpus is None else corpus
    bad, worst = [], 0.0
    for e in corpus:
        rep = qm_bound_check(e.spec.assemble(), 1.0, m_max, samples=samples, seed=seed)
        worst = max(worst, max(rep.worst_ratio))
        if rep.violations:
            bad.append(f"{e.name}: {rep.violations[:2]}")
    if not factorial_sum_check(8, 8):
        bad.append("factorial-sum inequality fails for some m, n <= 8")
    for text, n, want in (("(z1+i*z2)^4", 2, 4.0), ("z1^2+z2^2+z3^2", 3, 1.0)):
        got = sup_norm(parse_poly(text, n), seed=seed).value
        if abs(got - want) > 0.01 * want:
            bad.append(f"sup-norm of {text}: {got} vs {want}")
    detail = (f"{len(corpus)} entries x {samples} points, m <= {m_max}, worst ratio {worst:.3g}; "
              f"{len(bad)} failures")
    return not bad, detail, bad


@_timed(12, "round-trip I/O")
def criterion_roundtrip(count: int = 1000, seed: int = SEED):
    """parse(format(P)) == P over QQ, QQ(i) and GF(p)."""
    rng = random.Random(seed)
    rings = [QQ, QQI, GF(5), GF(7), GF(3)]
    bad = []
    for _ in range(count):
        ring = rng.choice(rings)
        n = rng.randint(1, 5)
        P = random_poly(n, rng.randint(0, 6), rng.randrange(1 << 30), ring, coeff_range=20)
        text = format_poly(P)
        back = parse_poly(text, n, ring)
        if back != P:
            bad.append(f"{ring}: {text}")
    return not bad, f"{count} polynomials over {len(rings)} rings, {len(bad)} failures", bad


CRITERIA = [criterion_inversion, criterion_composition, criterion_hn_equivalence, criterion_trace,
            criterion_beta_slice, criterion_disjoint, criterion_self_inverting, criterion_sigma,
            criterion_charp, criterion_trees, criterion_numeric, criterion_roundtrip]


def run_all(only=None, echo=None) -> list[CriterionResult]:
    """Runs the selected criteria (all by default), calling ``echo(result)`` after each."""
    out = []
    for fn in CRITERIA:
        if only and fn.number not in only:
            continue
        res = fn()
        if echo is not None:
            echo(res)
        out.append(res)
    return out
