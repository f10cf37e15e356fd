"""Hessian-nilpotency and self-inverting criteria, each cross-checkable against the others."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence, Union

from .poly import (Poly, directional_power, evaluate_matrix, gradient, hessian,
                   laplacian, matrix_is_nilpotent)
from .series import TruncSeries

__all__ = [
    "HNError", "OrderError", "HessianAtZeroError", "NotHarmonic", "NotHomogeneous",
    "NotSelfInverting", "HNReport", "VCRow", "SeriesVerdict", "PowersReport",
    "is_hn_direct", "is_hn_powers", "vc_scan", "is_self_inverting",
    "self_inverting_harmonic_check", "beta_slice", "powers_self_inverting",
    "grad_pairing", "hessian_at_zero_nilpotent",
]

PolyLike = Union[Poly, TruncSeries]


class HNError(ValueError):
    pass


class OrderError(HNError):
    """Input has a constant or linear term where o(P) >= 2 is required."""


class HessianAtZeroError(HNError):
    """(Hes P)(0) is not nilpotent."""


class NotHarmonic(HNError):
    pass


class NotHomogeneous(HNError):
    pass


class NotSelfInverting(HNError):
    pass


def _unwrap(P: PolyLike):
    if isinstance(P, TruncSeries):
        if P.has_t:
            raise HNError("criteria apply to series in z only")
        return P.body, P.N
    return P, None


def _require_order2(P: Poly):
    if P.order < 2:
        raise OrderError(f"need o(P) >= 2, got o(P) = {P.order}")


def hessian_at_zero_nilpotent(P: Poly) -> bool:
    # second-degree coefficients give (Hes P)(0) without differentiating everything
    n, ring = P.n, P.ring
    H = [[ring.zero] * n for _ in range(n)]
    for e, c in P.terms.items():
        if sum(e) == 2:
            idx = [i for i, a in enumerate(e) for _ in range(a)]
            i, j = idx
            if i == j:
                H[i][i] = c * 2
            else:
                H[i][j] = H[j][i] = c
    return scalar_matrix_nilpotent(H, ring)


def scalar_matrix_nilpotent(H, ring) -> bool:
    n = len(H)
    M = H
    for _ in range(n - 1):
        M = [[sum((M[i][k] * H[k][j] for k in range(n)), ring.zero) for j in range(n)]
             for i in range(n)]
    return all(not x for row in M for x in row)


def grad_pairing(P: Poly) -> Poly:
    """``<grad P, grad P>`` with the bilinear (not Hermitian) form."""
    g = gradient(P)
    acc = Poly(P.n, P.ring)
    for gi in g:
        if gi:
            acc = acc + gi * gi
    return acc


def is_hn_direct(P: Poly) -> bool:
    return matrix_is_nilpotent(hessian(P))


@dataclass
class HNReport:
    direct: bool | None
    powers: list
    verdict: bool
    witnesses: dict = field(default_factory=dict)
    # for series input: vanishing is only certified up to this z-degree
    up_to_degree: int | None = None
    self_inverting: bool | None = None

    def __bool__(self):
        return self.verdict

    def to_json(self) -> str:
        return json.dumps(asdict(self), default=str)

    def summary(self) -> str:
        lines = []
        if self.direct is not None:
            lines.append(f"Hessian nilpotent (matrix power): {self.direct}")
        for m, flag in self.powers:
            lines.append(f"  Delta^{m} P^{m} == 0: {flag}")
        tail = f" (vanishes up to degree {self.up_to_degree})" if self.up_to_degree is not None else ""
        lines.append(f"HN: {self.verdict}{tail}")
        if self.self_inverting is not None:
            lines.append(f"self-inverting: {self.self_inverting}")
        for k, v in self.witnesses.items():
            lines.append(f"  witness {k}: {v}")
        return "\n".join(lines)


def is_hn_powers(P: PolyLike, with_direct: bool = True) -> HNReport:
    """Power criterion ``Delta^m P^m = 0`` for ``1 <= m <= n``.

    For polynomials, the matrix criterion is also computed and the two are
    required to agree (an ``AssertionError`` means a bug).  For truncated
    series, ``Delta^m P^m`` is exact only through z-degree ``N - 2``, so that is
    all the verdict claims.
    """
    body, N = _unwrap(P)
    _require_order2(body)
    n = body.n
    flags, witnesses = [], {}
    power = Poly.constant(n, body.ring, 1)
    for m in range(1, n + 1):
        if N is None:
            power = power * body
            v = laplacian(power, times=m)
        else:
            power = power.mul(body, N + 2 * m - 2)
            v = laplacian(power, times=m).truncate(N - 2)
        flags.append((m, not v))
        if v and "powers" not in witnesses:
            from .notation import format_poly
            witnesses["powers"] = f"m={m}: {format_poly(v)[:200]}"
    verdict = all(f for _, f in flags)
    direct = None
    if with_direct and N is None:
        direct = is_hn_direct(body)
        if direct != verdict:
            raise AssertionError("matrix and power criteria disagree on " + str(body))
    return HNReport(direct, flags, verdict, witnesses, N - 2 if N is not None else None)


@dataclass
class VCRow:
    m: int
    value: Poly
    vanished: bool
    expected_degree: int | None

    @property
    def degree(self):
        return self.value.degree


def vc_scan(P: Poly, m_max: int) -> list[VCRow]:
    """``Delta^m P^(m+1)`` for ``0 <= m <= m_max``.

    ``expected_degree`` is ``d(m+1) - 2m``, filled in for homogeneous input.
    """
    d = P.degree if P and P.is_homogeneous else None
    rows = []
    power = P
    for m in range(m_max + 1):
        if m:
            power = power * P
        v = laplacian(power, times=m)
        rows.append(VCRow(m, v, not v, None if d is None else d * (m + 1) - 2 * m))
    return rows


@dataclass(frozen=True)
class SeriesVerdict:
    """A boolean that is certified only through z-degree ``up_to_degree``."""

    value: bool
    up_to_degree: int

    def __bool__(self):
        return self.value

    def __str__(self):
        state = "vanishes" if self.value else "does not vanish"
        return f"{state} up to degree {self.up_to_degree}"


def _check_preconditions(P: Poly):
    _require_order2(P)
    if not hessian_at_zero_nilpotent(P):
        raise HessianAtZeroError("(Hes P)(0) is not nilpotent")


def is_self_inverting(P: PolyLike):
    """``<grad P, grad P> == 0``; for series, certified through degree N."""
    body, N = _unwrap(P)
    _check_preconditions(body)
    pairing = grad_pairing(body)
    if N is None:
        return not pairing
    # grad of the dropped tail has order >= N, the other factor order >= 1
    return SeriesVerdict(not pairing.truncate(N), N)


def self_inverting_harmonic_check(P: Poly) -> bool:
    """For harmonic P, self-inverting iff ``Delta P^2 == 0``.

    Harmonic P gives ``Delta P^2 = 2 <grad P, grad P>``, so the verdict is
    cross-checked against the gradient pairing when the order and ``Hes P(0)``
    conditions hold and returned unchecked otherwise.
    """
    if laplacian(P):
        raise NotHarmonic("Delta P != 0")
    verdict = not laplacian(P * P)
    try:
        _check_preconditions(P)
    except HNError:
        return verdict
    if verdict != bool(is_self_inverting(P)):
        raise AssertionError("harmonic shortcut disagrees with the gradient pairing")
    return verdict


def beta_slice(P: Poly, beta: Sequence) -> Poly:
    """``P_beta = (beta . D)^(d-2) P``, after asserting ``Hes P_beta = (d-2)! (Hes P)(beta)``."""
    if not P or not P.is_homogeneous:
        raise NotHomogeneous("beta_slice needs a nonzero homogeneous polynomial")
    d = P.degree
    if d < 2:
        raise NotHomogeneous(f"beta_slice needs degree >= 2, got {d}")
    Pb = directional_power(P, beta, d - 2)
    lhs = hessian(Pb)
    at_beta = evaluate_matrix(hessian(P), list(beta))
    f = math.factorial(d - 2)
    for i in range(P.n):
        for j in range(P.n):
            got = lhs[i, j]
            if got.degree > 0 or got.constant_term() != at_beta[i][j] * f:
                raise AssertionError(f"slice Hessian mismatch at ({i}, {j})")
    return Pb


@dataclass
class PowersReport:
    m: int
    self_inverting: bool
    harmonic: bool
    power_harmonic: bool | None
    power_hn: bool | None


def powers_self_inverting(P: Poly, m: int) -> PowersReport:
    """Consequences for ``P^m`` of P being self-inverting.

    ``<grad P^m, grad P^m> = m^2 P^(2m-2) <grad P, grad P>`` gives that P^m is
    self-inverting; if also ``Delta P = 0`` then every power is harmonic and HN.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not is_self_inverting(P):
        raise NotSelfInverting("P is not self-inverting")
    Pm = P ** m
    si = not grad_pairing(Pm)
    harmonic = not laplacian(P)
    ph = phn = None
    if harmonic:
        ph = not laplacian(Pm)
        phn = is_hn_direct(Pm)
    return PowersReport(m, si, harmonic, ph, phn)
