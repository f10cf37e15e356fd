"""Floating-point estimates: sup norm on the unit sphere, convergence radii, term bounds.

``|P|`` is the maximum of ``|P(z)|`` over the unit sphere of C^n.  For
homogeneous P of degree d the inversion pair converges on the ball of radius

* ``(n 2^(d-1) |P|)^(1/(2-d))`` for d >= 3, and
* ``(2^(d+1) |P|)^(1/(2-d))`` for HN P with d >= 4.

Every check here is one-sided; a violation beyond ``TOL`` fails.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .poly import Poly

__all__ = [
    "TOL", "NumericPoly", "SupNorm", "sup_norm", "radius_general", "radius_hn",
    "radius_general_formula", "radius_hn_formula", "qm_bound", "qm_bound_check",
    "factorial_sum_pair", "factorial_sum_check", "convergence_probe", "sample_ball",
]

TOL = 1e-9
DEFAULT_SEED = 20240601


class NumericPoly:
    """Complex-double mirror of an exact polynomial."""

    def __init__(self, P: Poly):
        to_c = getattr(P.ring, "to_complex", None)
        if to_c is None:
            raise TypeError(f"ring {P.ring} has no complex embedding")
        self.n = P.n
        self.d = int(P.degree) if P else -1
        items = list(P.terms.items())
        self.exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), P.n)
        self.coeffs = np.array([to_c(c) for _, c in items], dtype=np.complex128)
        self._grad = None

    @classmethod
    def _raw(cls, n, d, exps, coeffs):
        obj = cls.__new__(cls)
        obj.n, obj.d, obj.exps, obj.coeffs, obj._grad = n, d, exps, coeffs, None
        return obj

    def __call__(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=np.complex128))
        if not len(self.coeffs):
            return np.zeros(len(pts), dtype=np.complex128)
        # (S, 1, n) ** (1, T, n) -> monomial values (S, T)
        mon = np.prod(pts[:, None, :] ** self.exps[None, :, :], axis=2)
        return mon @ self.coeffs

    def grad(self) -> list["NumericPoly"]:
        if self._grad is None:
            out = []
            for i in range(self.n):
                keep = self.exps[:, i] > 0
                e = self.exps[keep].copy()
                c = self.coeffs[keep] * e[:, i]
                e[:, i] -= 1
                out.append(NumericPoly._raw(self.n, self.d - 1, e, c))
            self._grad = out
        return self._grad

    def scaled(self, s: float) -> "NumericPoly":
        """``z -> P(s z)``."""
        deg = self.exps.sum(axis=1)
        return NumericPoly._raw(self.n, self.d, self.exps, self.coeffs * s ** deg)


def _unit_sphere(rng, count, n) -> np.ndarray:
    x = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def sample_ball(rng, count: int, n: int, r: float) -> np.ndarray:
    """Uniform samples from the open ball of radius r in C^n (= R^(2n))."""
    u = rng.random(count) ** (1.0 / (2 * n))
    return _unit_sphere(rng, count, n) * (r * u)[:, None]


@dataclass
class SupNorm:
    value: float
    witness: np.ndarray
    samples: int
    seed: int
    refine_iters: int

    def __float__(self):
        return self.value


def sup_norm(P, samples: int = 4000, refine_iters: int = 200, seed: int = DEFAULT_SEED,
             starts: int = 16) -> SupNorm:
    """Lower bound on ``max |P|`` over the unit sphere, with the point attaining it.

    Random sphere samples seed a projected gradient ascent on ``|P|^2``; the
    ascent direction is ``P * conj(grad P)``, renormalised onto the sphere.
    """
    NP = P if isinstance(P, NumericPoly) else NumericPoly(P)
    if not len(NP.coeffs):
        raise ValueError("sup norm of the zero polynomial")
    if NP.d == 0:
        raise ValueError("constant polynomial: the sup norm is not informative")
    rng = np.random.default_rng(seed)
    pts = _unit_sphere(rng, samples, NP.n)
    vals = np.abs(NP(pts))
    order = np.argsort(vals)[::-1][:starts]
    z = pts[order]
    best = np.abs(NP(z))
    step = np.full(len(z), 0.5)
    grads = NP.grad()
    for _ in range(refine_iters):
        pv = NP(z)
        g = np.stack([gi(z) for gi in grads], axis=1)
        direction = pv[:, None] * np.conj(g)
        norm = np.linalg.norm(direction, axis=1, keepdims=True)
        norm[norm == 0] = 1.0
        cand = z + step[:, None] * direction / norm
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        cv = np.abs(NP(cand))
        better = cv > best
        z[better] = cand[better]
        best[better] = cv[better]
        step[~better] *= 0.5
        step[better] *= 1.2
        if np.all(step < 1e-12):
            break
    k = int(np.argmax(best))
    witness = z[k].copy()
    value = float(abs(NP(witness[None, :])[0]))
    return SupNorm(value, witness, samples, seed, refine_iters)


def radius_general_formula(n: int, d: int, norm: float) -> float:
    return (n * 2 ** (d - 1) * norm) ** (1.0 / (2 - d))


def radius_hn_formula(d: int, norm: float) -> float:
    return (2 ** (d + 1) * norm) ** (1.0 / (2 - d))


def _require_homogeneous(P: Poly, dmin: int):
    if not P or not P.is_homogeneous:
        raise ValueError("radius estimates need a nonzero homogeneous polynomial")
    if P.degree < dmin:
        raise ValueError(f"radius estimate needs degree >= {dmin}, got {P.degree}")


def radius_general(P: Poly, norm: float | None = None, **kw) -> float:
    _require_homogeneous(P, 3)
    if norm is None:
        norm = sup_norm(P, **kw).value
    return radius_general_formula(P.n, int(P.degree), norm)


def radius_hn(P: Poly, norm: float | None = None, **kw) -> float:
    from .hn import is_hn_direct
    _require_homogeneous(P, 4)
    if not is_hn_direct(P):
        raise ValueError("the HN radius applies to Hessian nilpotent P only")
    if norm is None:
        norm = sup_norm(P, **kw).value
    return radius_hn_formula(int(P.degree), norm)


def qm_bound(n: int, m: int, r: float, norm_2r: float) -> float:
    """``n^(m-1) |P|_{S(0,2r)}^m / (2^(m-1) r^(2m-2))``."""
    return n ** (m - 1) * norm_2r ** m / (2 ** (m - 1) * r ** (2 * m - 2))


@dataclass
class BoundReport:
    r: float
    norm: float
    norm_2r: float
    samples: int
    seed: int
    worst_ratio: list             # per m: max |Q_[m](a)| / bound
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def qm_bound_check(P: Poly, r: float, m_max: int, samples: int = 1000, seed: int = DEFAULT_SEED,
                   Q: Sequence[Poly] | None = None, norm: float | None = None) -> BoundReport:
    """Samples ``a`` in ``B(0, r)`` and compares ``|Q_[m](a)|`` with :func:`qm_bound`.

    For homogeneous P the sphere norm scales as ``(2r)^d |P|``; otherwise the
    norm on ``S(0, 2r)`` is estimated directly.
    """
    from .inversion import qpair_recursive
    if Q is None:
        Q = qpair_recursive(P, m_max).Q
    NP = NumericPoly(P)
    if P.is_homogeneous and P:
        if norm is None:
            norm = sup_norm(NP, seed=seed).value
        norm_2r = (2 * r) ** int(P.degree) * norm
    else:
        norm_2r = sup_norm(NP.scaled(2 * r), seed=seed).value
        norm = norm_2r if norm is None else norm
    rng = np.random.default_rng(seed)
    pts = sample_ball(rng, samples, P.n, r)
    worst, bad = [], []
    for m in range(1, m_max + 1):
        vals = np.abs(NumericPoly(Q[m - 1])(pts))
        b = qm_bound(P.n, m, r, norm_2r)
        worst.append(float(vals.max() / b) if b > 0 else (0.0 if vals.max() == 0 else math.inf))
        over = vals - b
        if over.max() > TOL:
            k = int(np.argmax(over))
            bad.append((m, float(vals[k]), b, pts[k].tolist()))
    return BoundReport(r, norm, norm_2r, samples, seed, worst, bad)


def factorial_sum_pair(m: int, n: int) -> tuple[int, int]:
    """``(sum_{|alpha| = m} alpha!, m! * C(m+n-1, m))`` by exact enumeration."""
    total = 0
    for combo in combinations_with_replacement(range(n), m):
        counts = [0] * n
        for i in combo:
            counts[i] += 1
        f = 1
        for c in counts:
            f *= math.factorial(c)
        total += f
    return total, math.factorial(m) * math.comb(m + n - 1, m)


def factorial_sum_check(m_max: int = 8, n_max: int = 8) -> bool:
    return all(lhs <= rhs for m in range(1, m_max + 1) for n in range(1, n_max + 1)
               for lhs, rhs in [factorial_sum_pair(m, n)])


@dataclass
class ProbeRow:
    m: int
    term: complex
    partial: complex
    ratio: float | None
    majorant: float | None


@dataclass
class ProbeReport:
    point: list
    radius: float | None
    inside: bool
    rows: list
    ok: bool
    notes: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["m", "term_re", "term_im", "abs_term", "partial_re", "partial_im", "ratio", "majorant"])
        for r in self.rows:
            w.writerow([r.m, f"{r.term.real:.12g}", f"{r.term.imag:.12g}", f"{abs(r.term):.12g}",
                        f"{r.partial.real:.12g}", f"{r.partial.imag:.12g}",
                        "" if r.ratio is None else f"{r.ratio:.12g}",
                        "" if r.majorant is None else f"{r.majorant:.12g}"])
        return buf.getvalue()


def convergence_probe(P: Poly, point: Sequence[complex], M: int, Q: Sequence[Poly] | None = None,
                      norm: float | None = None, seed: int = DEFAULT_SEED) -> ProbeReport:
    """Partial sums of ``Q = sum_m Q_[m]`` at one point.

    Inside the convergence radius each term must sit under the geometric
    majorant ``2^((d-1)m+1) n^(m-1) r^((d-2)m+2) |P|^m`` at ``r = |point|``,
    whose ratio is below 1 there.  Outside, the table is informational.
    """
    from .inversion import qpair_recursive
    if not P or not P.is_homogeneous:
        raise ValueError("the probe needs a nonzero homogeneous polynomial")
    if Q is None:
        Q = qpair_recursive(P, M).Q
    a = np.asarray(point, dtype=np.complex128)
    rnorm = float(np.linalg.norm(a))
    d, n = int(P.degree), P.n
    radius = None
    if d >= 3:
        if norm is None:
            norm = sup_norm(P, seed=seed).value
        radius = radius_general_formula(n, d, norm)
    inside = radius is not None and rnorm < radius
    rows, partial, prev = [], 0j, None
    ok = True
    notes = []
    for m in range(1, M + 1):
        term = complex(NumericPoly(Q[m - 1])(a[None, :])[0])
        partial += term
        ratio = None if prev is None or abs(prev) == 0 else abs(term) / abs(prev)
        major = None
        if radius is not None:
            # the bound needs a in an open ball, so use a radius a hair above |a|
            rr = rnorm * (1 + 1e-12) + 1e-300
            major = 2.0 ** ((d - 1) * m + 1) * n ** (m - 1) * rr ** ((d - 2) * m + 2) * norm ** m
            if inside and abs(term) > major + TOL:
                ok = False
                notes.append(f"m={m}: |term| {abs(term):.3e} above majorant {major:.3e}")
        rows.append(ProbeRow(m, term, partial, ratio, major))
        prev = term
    return ProbeReport(a.tolist(), radius, inside, rows, ok, notes)
