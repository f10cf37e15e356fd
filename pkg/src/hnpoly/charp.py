"""Vanishing checks over prime fields.

Over a field of characteristic p a polynomial P of degree d >= 1 has
``Delta^m P^(m+1) = 0`` once ``2m > d(p-1)``.  The boundary case
``2m = d(p-1)`` is checked as well and can fail: ``Delta z1^2 = 2`` over
GF(3).  A series with
``Delta^m P^m = 0`` for all m >= 1 has ``Delta^m P^(m+1) = 0`` once
``m >= p - 1``.  Both rest on ``L(u^(mp) v) = u^(mp) L v`` for any
constant-coefficient differential operator L.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .poly import Poly, diff, laplacian
from .scalars import GF, GFI, Ring
from .series import TruncSeries

__all__ = [
    "CharPError", "DiffOperator", "CharPReport", "vc_charp", "vc_charp_hn_series",
    "frobenius_commutation_check", "general_lambda_vc", "isotropic_ring", "charp_threshold",
    "charp_strict_threshold",
]


class CharPError(ValueError):
    pass


def _char(ring: Ring) -> int:
    p = ring.characteristic
    if not p:
        raise CharPError("a prime-field ring is required")
    return p


def isotropic_ring(p: int) -> Ring:
    """GF(p) when -1 is a square mod p, else GF(p)[i] with i^2 = -1."""
    R = GF(p)
    return R if R.i is not None else GFI(p)


def charp_threshold(d: int, p: int) -> int:
    """Smallest integer m with ``m >= d(p-1)/2``."""
    return -(-d * (p - 1) // 2)


def charp_strict_threshold(d: int, p: int) -> int:
    """Smallest integer m with ``2m > d(p-1)``, the bound that ``deg P^r < 2m`` needs."""
    return d * (p - 1) // 2 + 1


@dataclass
class CharPReport:
    p: int
    d: int
    threshold: int
    scanned: int
    vanished: list                      # flag per m = 0..scanned
    first_vanishing: int | None
    empirical_tail: int | None          # start of the trailing run of zeros
    ok: bool
    up_to_degree: int | None = None
    notes: list = field(default_factory=list)
    strict_threshold: int | None = None   # smallest m with 2m > d(p-1)
    strict_ok: bool | None = None

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        tail = f" (through z-degree {self.up_to_degree})" if self.up_to_degree is not None else ""
        return (f"p={self.p} d={self.d}: bound m >= {self.threshold}, first vanishing at "
                f"m={self.first_vanishing}, vanishing from m={self.empirical_tail}{tail}; "
                f"{'PASS' if self.ok else 'FAIL'}")


def _tail_start(flags):
    start = None
    for m in range(len(flags) - 1, -1, -1):
        if not flags[m]:
            break
        start = m
    return start


def vc_charp(P: Poly, margin: int = 2) -> CharPReport:
    """Scans ``Delta^m P^(m+1)`` for ``0 <= m <= threshold + margin``."""
    p = _char(P.ring)
    if not P:
        raise CharPError("zero polynomial")
    d = int(P.degree)
    if d < 1:
        raise CharPError("needs degree >= 1")
    thr = charp_threshold(d, p)
    strict = charp_strict_threshold(d, p)
    top = max(thr, strict) + margin
    flags = []
    power = P
    for m in range(top + 1):
        if m:
            power = power * P
        flags.append(not laplacian(power, times=m))
    first = next((m for m, f in enumerate(flags) if f), None)
    ok = all(flags[thr:])
    rep = CharPReport(p, d, thr, top, flags, first, _tail_start(flags), ok,
                      strict_threshold=strict, strict_ok=all(flags[strict:]))
    if not ok:
        bad = [m for m in range(thr, top + 1) if not flags[m]]
        rep.notes.append(f"nonzero at m = {bad}")
    return rep


def vc_charp_hn_series(P: TruncSeries, p: int | None = None, margin: int = 2) -> CharPReport:
    """The series statement, certified through z-degree N.

    ``Delta^m P^(m+1)`` is exact through degree N from the truncation; the HN
    hypothesis ``Delta^m P^m = 0`` (m = 1 .. max(n, p-1)) is checked through
    degree ``N - 2``, and failure there is reported as an error.
    """
    if P.has_t:
        raise CharPError("series in z only")
    body, N = P.body, P.N
    pr = _char(body.ring)
    if p is not None and p != pr:
        raise CharPError(f"ring characteristic {pr} differs from p={p}")
    p = pr
    if body and body.order < 2:
        raise CharPError("need o(P) >= 2")
    n = body.n
    power = Poly.constant(n, body.ring, 1)
    for m in range(1, max(n, p - 1) + 1):
        power = power.mul(body, N + 2 * m - 2)
        if laplacian(power, times=m).truncate(N - 2):
            raise CharPError(f"not HN within truncation: Delta^{m} P^{m} != 0")
    thr = p - 1
    top = thr + margin
    flags = []
    power = body
    for m in range(top + 1):
        if m:
            power = power.mul(body, N + 2 * m)
        flags.append(not laplacian(power, times=m).truncate(N))
    first = next((m for m, f in enumerate(flags) if f), None)
    d = int(body.degree) if body else 0
    return CharPReport(p, d, thr, top, flags, first, _tail_start(flags), all(flags[thr:]), N)


class DiffOperator:
    """Constant-coefficient operator ``sum_beta c_beta D^beta``, stored as its symbol in xi."""

    __slots__ = ("symbol",)

    def __init__(self, symbol: Poly):
        self.symbol = symbol

    @classmethod
    def laplace(cls, n: int, ring: Ring) -> "DiffOperator":
        from .poly import sigma2
        return cls(sigma2(n, ring))

    @classmethod
    def partial(cls, n: int, ring: Ring, i: int) -> "DiffOperator":
        return cls(Poly.var(n, ring, i))

    @property
    def order(self) -> int:
        return int(self.symbol.degree) if self.symbol else 0

    @property
    def lowers_degree(self) -> bool:
        """No zeroth-order part, so every term strictly lowers degree."""
        return bool(self.symbol) and self.symbol.order >= 1

    @property
    def min_order(self) -> int:
        return int(self.symbol.order)

    def __call__(self, P: Poly) -> Poly:
        acc = Poly(P.n, P.ring)
        for beta, c in self.symbol.terms.items():
            Q = P
            for i, b in enumerate(beta):
                if b:
                    Q = diff(Q, i, b)
                    if not Q:
                        break
            if Q:
                acc = acc + Q.scale(c)
        return acc

    def power(self, P: Poly, m: int) -> Poly:
        for _ in range(m):
            if not P:
                break
            P = self(P)
        return P

    def __repr__(self):
        return f"DiffOperator({self.symbol})"


def frobenius_commutation_check(u: Poly, v: Poly, op: DiffOperator, m: int = 1) -> bool:
    """``L(u^(mp) v) == u^(mp) L(v)``."""
    p = _char(u.ring)
    w = u ** (m * p)
    return op(w * v) == w * op(v)


@dataclass
class LambdaReport:
    p: int
    bound: int
    scanned: int
    vanished: list
    first_vanishing: int | None
    hypothesis: list     # (m, N_m) with L^(N_m) f^m = 0 found, m = 1..p-1
    ok: bool

    def __bool__(self):
        return self.ok


def general_lambda_vc(op: DiffOperator, f: Poly, margin: int = 2) -> LambdaReport:
    """Scans ``L^m f^(m+1)`` for a degree-lowering operator L.

    Writing ``m + 1 = qp + r`` gives ``L^m f^(m+1) = f^(qp) L^m f^r``; with L
    lowering degree by at least k, this vanishes once ``mk > (p-1) deg f``,
    which fixes the scan bound.
    """
    p = _char(f.ring)
    if not op.lowers_degree:
        raise CharPError("operator must strictly lower degree")
    d = int(f.degree) if f else 0
    k = op.min_order
    bound = d * (p - 1) // k + 1
    hyp = []
    for m in range(1, p):
        g = f ** m
        Nm = 0
        while g:
            g = op(g)
            Nm += 1
        hyp.append((m, Nm))
    top = bound + margin
    flags = []
    power = f
    for m in range(top + 1):
        if m:
            power = power * f
        flags.append(not op.power(power, m))
    first = next((m for m, x in enumerate(flags) if x), None)
    return LambdaReport(p, bound, top, flags, first, hyp, all(flags[bound:]))
