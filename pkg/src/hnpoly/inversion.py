"""Inversion pairs ``Q_[m]`` by four independent routes, and the series U_t, V_t, W_t.

With ``F_t = z - t grad P`` and inverse ``G_t = z + t grad Q_t`` where
``Q_t = sum_{m >= 1} t^(m-1) Q_[m]``:

* recursion: ``Q_[1] = P``, ``Q_[m] = 1/(2(m-1)) sum_{k+l=m} <grad Q_[k], grad Q_[l]>``;
* closed form, HN input only: ``Q_[m+1] = Delta^m P^(m+1) / (2^m m! (m+1)!)``;
* tree sums (see :mod:`hnpoly.trees`);
* direct formal inversion of F_t followed by integration of the gradient.

With ``f_t = sigma2/2 - tP`` the series ``U_t = P(G_t)``, ``V_t = f_t(G_t)``
and ``W_t = sigma2(G_t)`` are read off Q_t as ``U_t = Q_t + t dQ_t/dt``,
``V_t = sigma2/2 + t(E - 1)Q_t`` and ``W_t = sigma2 + 2tEQ_t + 2t^2 dQ_t/dt``,
E being the Euler operator ``sum z_i D_i``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from .hn import HessianAtZeroError, OrderError, hessian_at_zero_nilpotent, is_hn_direct
from .poly import Poly, euler, gradient, laplacian, sigma2
from .series import (FormalMap, TruncSeries, extract_Q, invert_map, substitute,
                     symmetric_map)
from .trees import tree_sum, tree_sum_spec

__all__ = [
    "InversionPair", "SigmaFunctions", "NotHN", "NotDisjoint", "DEFAULT_ORDER",
    "qpair_recursive", "qpair_closed_hn", "qpair_trees", "qpair_map", "qpair",
    "additivity_check", "sigma_functions", "sigma_functions_hn", "vc_equivalence_report",
    "VCEquivalence", "map_truncation",
]

DEFAULT_ORDER = 5
METHODS = ("recursion", "closed", "tree", "map")


class NotHN(ValueError):
    pass


class NotDisjoint(ValueError):
    pass


@dataclass
class InversionPair:
    P: Poly
    Q: list  # Q[0] is Q_[1]
    method: str
    M: int

    def __getitem__(self, m: int) -> Poly:
        """``Q_[m]`` for ``1 <= m <= M``."""
        if not 1 <= m <= self.M:
            raise IndexError(f"order {m} outside 1..{self.M}")
        return self.Q[m - 1]

    def to_dict(self) -> dict:
        from .notation import poly_to_json
        return {"method": self.method, "M": self.M, "P": poly_to_json(self.P),
                "Q": [poly_to_json(q) for q in self.Q]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _require_order2(P: Poly):
    if P.order < 2:
        raise OrderError(f"need o(P) >= 2, got o(P) = {P.order}")


def _pair(u: list[Poly], w: list[Poly], n, ring) -> Poly:
    acc = Poly(n, ring)
    for a, b in zip(u, w):
        if a and b:
            acc = acc + a * b
    return acc


def qpair_recursive(P: Poly, M: int = DEFAULT_ORDER) -> InversionPair:
    _require_order2(P)
    n, ring = P.n, P.ring
    Q = [P]
    grads = [gradient(P)]
    for m in range(2, M + 1):
        acc = Poly(n, ring)
        for k in range(1, m // 2 + 1):
            l = m - k
            term = _pair(grads[k - 1], grads[l - 1], n, ring)
            acc = acc + (term if k == l else term.scale(2))
        q = acc / ring.coerce(2 * (m - 1))
        Q.append(q)
        grads.append(gradient(q))
    return InversionPair(P, Q, "recursion", M)


def _closed_coeff(m: int):
    return mpq(1, 2 ** m * math.factorial(m) * math.factorial(m + 1))


def qpair_closed_hn(P: Poly, M: int = DEFAULT_ORDER, *, checked: bool = False) -> InversionPair:
    """Closed form; refuses input whose Hessian is not nilpotent."""
    _require_order2(P)
    if not checked and not is_hn_direct(P):
        raise NotHN("closed form applies to Hessian nilpotent P only")
    ring = P.ring
    Q = []
    power = Poly.constant(P.n, ring, 1)
    for m in range(M):
        power = power * P
        Q.append(laplacian(power, times=m).scale(ring.coerce(_closed_coeff(m))))
    return InversionPair(P, Q, "closed", M)


def qpair_trees(P: Poly, M: int = DEFAULT_ORDER, spec=None) -> InversionPair:
    """Tree sums; with ``spec`` the vertex terms are built from the linear forms."""
    _require_order2(P)
    if spec is None:
        return InversionPair(P, [tree_sum(P, m) for m in range(1, M + 1)], "tree", M)
    if spec.assemble() != P:
        raise ValueError("spec does not assemble to P")
    from .harmonic import build_graph
    G = build_graph(spec)
    return InversionPair(P, [tree_sum_spec(spec, m, G) for m in range(1, M + 1)], "tree", M)


def map_truncation(P: Poly, M: int) -> int:
    """z-degree that makes Q_[1..M] exact when read off the inverse map."""
    d = int(P.degree) if P else 2
    return max(M * (d - 2) + 1, 1)


def qpair_map(P: Poly, M: int = DEFAULT_ORDER) -> InversionPair:
    """Inverts F_t degree by degree (powers of t above M dropped) and integrates."""
    _require_order2(P)
    N = map_truncation(P, M)
    G = invert_map(symmetric_map(P, N, deformed=True, t_order=M))
    return InversionPair(P, extract_Q(G, M), "map", M)


def qpair(P: Poly, M: int = DEFAULT_ORDER, method: str = "recursion", spec=None) -> InversionPair:
    fn = {"recursion": qpair_recursive, "closed": qpair_closed_hn,
          "tree": qpair_trees, "map": qpair_map}.get(method)
    if fn is None:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if method == "tree":
        return fn(P, M, spec=spec)
    return fn(P, M)


def additivity_check(S: Poly, T: Poly, M: int = DEFAULT_ORDER) -> bool:
    """For disjoint S and T, the pair of ``S + T`` is the sum of the pairs, termwise up to M."""
    from .harmonic import disjointness
    if not disjointness(S, T):
        raise NotDisjoint("inputs are not disjoint")
    whole = qpair_recursive(S + T, M).Q
    a, b = qpair_recursive(S, M).Q, qpair_recursive(T, M).Q
    return all(w == x + y for w, x, y in zip(whole, a, b))


# --------------------------------------------------------------------------
# U_t, V_t, W_t

@dataclass
class SigmaFunctions:
    """t-graded coefficients; ``U[j]`` is the coefficient of t^j."""

    U: list  # j = 0..M-1
    V: list  # j = 0..M
    W: list  # j = 0..M
    M: int
    checked_degree: int | None = None

    def relation_holds(self) -> bool:
        """``W_t = 2 V_t + 2 t U_t`` coefficientwise."""
        if self.W[0] != self.V[0].scale(2):
            return False
        return all(self.W[j] == (self.V[j] + self.U[j - 1]).scale(2) for j in range(1, self.M + 1))

    def to_dict(self) -> dict:
        from .notation import poly_to_json
        return {"M": self.M, "U": [poly_to_json(p) for p in self.U],
                "V": [poly_to_json(p) for p in self.V], "W": [poly_to_json(p) for p in self.W]}

    def __eq__(self, o):
        return isinstance(o, SigmaFunctions) and (self.U, self.V, self.W) == (o.U, o.V, o.W)


def _as_t_series(coeffs: list[Poly], nz: int, N: int, K: int) -> TruncSeries:
    body = Poly(nz + 1, coeffs[0].ring)
    for j, c in enumerate(coeffs):
        if c:
            body = body + Poly(nz + 1, c.ring, {e + (j,): x for e, x in c.terms.items()}, check=False)
    return TruncSeries(body, nz, N, K)


def _compose_check(coeffs: list[Poly], F: FormalMap, target: list[Poly], N: int) -> bool:
    K = len(coeffs) - 1
    nz = F.nz
    lhs = substitute(_as_t_series(coeffs, nz, N, K), F, N=N, t_order=K)
    rhs = _as_t_series(target + [Poly(nz, coeffs[0].ring)] * (len(coeffs) - len(target)), nz, N, K)
    return lhs == rhs


def full_sigma_order(P: Poly, N: int) -> int:
    """Smallest M for which the t-truncation drops nothing through z-degree N.

    For homogeneous P of degree d the coefficient of t^m in U has z-degree
    ``d + m(d - 2)``; U keeps t-powers below M, so M must exceed every m
    with ``d + m(d - 2) <= N``.
    """
    if not P or not P.is_homogeneous or P.degree < 3:
        raise ValueError("needs homogeneous P of degree >= 3")
    d = int(P.degree)
    return max((N - d) // (d - 2) + 1, 1)


def sigma_functions(P: Poly, M: int = DEFAULT_ORDER, N: int = 11, verify: bool = True) -> SigmaFunctions:
    """U, V, W from the recursion; with ``verify`` the defining identities
    ``U_t(F_t) = P``, ``V_t(F_t) = f_t`` and ``W_t(F_t) = sigma2`` are checked
    modulo z-degree ``N + 1`` (and the t-powers each series carries).
    """
    _require_order2(P)
    if not hessian_at_zero_nilpotent(P):
        raise HessianAtZeroError("(Hes P)(0) is not nilpotent")
    n, ring = P.n, P.ring
    Q = qpair_recursive(P, M).Q
    s2 = sigma2(n, ring)
    U = [Q[j].scale(j + 1) for j in range(M)]
    V = [s2 / ring.coerce(2)] + [euler(Q[j - 1]) - Q[j - 1] for j in range(1, M + 1)]
    W = [s2] + [(euler(Q[j - 1]) + Q[j - 1].scale(j - 1)).scale(2) for j in range(1, M + 1)]
    out = SigmaFunctions(U, V, W, M)
    if verify:
        F = symmetric_map(P, N, deformed=True)
        checks = [
            _compose_check(U, F, [P], N),
            _compose_check(V, F, [s2 / ring.coerce(2), -P], N),
            _compose_check(W, F, [s2], N),
        ]
        if not all(checks):
            names = [nm for nm, ok in zip("UVW", checks) if not ok]
            raise AssertionError(f"functional identity failed for {', '.join(names)}")
        out.checked_degree = N
    return out


def sigma_functions_hn(P: Poly, M: int = DEFAULT_ORDER, compare: bool = True) -> SigmaFunctions:
    """Explicit series for homogeneous HN P of degree d, with ``d_m = d(m+1) - 2m``::

        [t^m] U     = Delta^m P^(m+1) / (2^m (m!)^2)
        [t^(m+1)] V = (d_m - 1) / (2^m m! (m+1)!) Delta^m P^(m+1)
        [t^(m+1)] W = (d_m + m) / (2^(m-1) m! (m+1)!) Delta^m P^(m+1)

    With ``compare`` the result must equal :func:`sigma_functions`.
    """
    if not P or not P.is_homogeneous:
        raise ValueError("explicit series need a nonzero homogeneous polynomial")
    d = int(P.degree)
    if d < 2:
        raise ValueError("explicit series need degree >= 2")
    if not is_hn_direct(P):
        raise NotHN("explicit series apply to Hessian nilpotent P only")
    n, ring = P.n, P.ring
    s2 = sigma2(n, ring)
    U, V, W = [], [s2 / ring.coerce(2)], [s2]
    power = Poly.constant(n, ring, 1)
    for m in range(M):
        power = power * P
        L = laplacian(power, times=m)
        fm, fm1 = math.factorial(m), math.factorial(m + 1)
        dm = d * (m + 1) - 2 * m
        U.append(L.scale(ring.coerce(mpq(1, 2 ** m * fm * fm))))
        V.append(L.scale(ring.coerce(mpq(dm - 1, 2 ** m * fm * fm1))))
        W.append(L.scale(ring.coerce(mpq(2 * (dm + m), 2 ** m * fm * fm1))))
    out = SigmaFunctions(U, V, W, M)
    if compare and out != sigma_functions(P, M, verify=False):
        raise AssertionError("explicit series differ from the general construction")
    return out


@dataclass
class VCEquivalence:
    M: int
    vc: list      # Delta^m P^(m+1) == 0, m = 0..M
    U: list       # [t^m] U == 0, m = 0..M
    V: list       # [t^(m+1)] V == 0, m = 0..M
    W: list       # [t^(m+1)] W == 0, m = 0..M
    m0: int | None
    agree: bool
    decided: bool
    notes: list = field(default_factory=list)

    def summary(self) -> str:
        if self.m0 is None:
            state = f"no vanishing up to m = {self.M}"
        else:
            state = f"all four series terminate from m0 = {self.m0}"
        return f"{state}; patterns agree: {self.agree}"


def _first_tail(flags: list) -> int | None:
    m0 = None
    for m in range(len(flags) - 1, -1, -1):
        if flags[m]:
            m0 = m
        else:
            break
    return m0


def vc_equivalence_report(P: Poly, M: int = DEFAULT_ORDER) -> VCEquivalence:
    """Vanishing patterns of ``Delta^m P^(m+1)`` and of the t-coefficients of U, V, W.

    Coefficients used (valid for HN P)::

        [t^m] U     = Delta^m P^(m+1) / (2^m (m!)^2)
        [t^m] V     = (E - 1) Delta^(m-1) P^m / (2^(m-1) (m-1)! m!)
        [t^m] W     = (E + m - 1) Delta^(m-1) P^m / (2^(m-2) (m-1)! m!)

    On an HN polynomial the four patterns must coincide; ``m0`` is the start of
    the trailing run of zeros (None if the last scanned term is nonzero, in
    which case nothing is decided at this order).
    """
    _require_order2(P)
    if not is_hn_direct(P):
        raise NotHN("the equivalences are stated for HN P")
    n, ring = P.n, P.ring
    vc, fu, fv, fw = [], [], [], []
    power = Poly.constant(n, ring, 1)
    for m in range(M + 1):
        power = power * P
        L = laplacian(power, times=m)   # Delta^m P^(m+1)
        fm, fm1 = math.factorial(m), math.factorial(m + 1)
        vc.append(not L)
        fu.append(not L.scale(ring.coerce(mpq(1, 2 ** m * fm * fm))))
        # [t^(m+1)] of V and W, from the general formulas at index m+1
        v = (euler(L) - L).scale(ring.coerce(mpq(1, 2 ** m * fm * fm1)))
        w = (euler(L) + L.scale(m)).scale(ring.coerce(mpq(2, 2 ** m * fm * fm1)))
        fv.append(not v)
        fw.append(not w)
    agree = vc == fu == fv == fw
    m0 = _first_tail(vc) if agree else None
    return VCEquivalence(M, vc, fu, fv, fw, m0, agree, bool(vc[-1]))
