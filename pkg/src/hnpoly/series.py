"""Truncated power series in z (polynomial in an optional parameter t) and formal maps.

A :class:`TruncSeries` stores a :class:`~hnpoly.poly.Poly` whose first ``nz``
variables are z and, when ``has_t`` is set, whose last variable is t.  Terms
of z-degree above ``N`` are discarded.  t is kept exactly unless a
``t_order`` is given, in which case powers of t above it are dropped too.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import Packed, Poly, diff, gradient, packable, packed_mul, packed_sum_of_products, sum_of_products
from .scalars import Ring, solve

__all__ = [
    "TruncSeries", "FormalMap", "SeriesError", "NonInvertibleLinearPart", "NotAGradient",
    "truncate", "symmetric_map", "identity_map", "compose", "invert_map", "extract_Q",
    "integrate_gradient", "substitute",
]


class SeriesError(ValueError):
    pass


class NonInvertibleLinearPart(SeriesError):
    pass


class NotAGradient(SeriesError):
    pass


def _zdeg(e, nz):
    return sum(e[:nz])


def _clip(P: Poly, nz: int, N: int, K: int | None) -> Poly:
    """Drop terms of z-degree > N and (if K is set and t present) t-degree > K."""
    if K is None or P.n == nz:
        if all(_zdeg(e, nz) <= N for e in P.terms):
            return P
        return P.truncate(N, nz)
    return Poly(P.n, P.ring, {e: c for e, c in P.terms.items()
                              if e[nz] <= K and _zdeg(e, nz) <= N}, check=False)


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class TruncSeries:
    body: Poly
    nz: int
    N: int
    t_order: int | None = None

    def __post_init__(self):
        if self.body.n not in (self.nz, self.nz + 1):
            raise SeriesError("series body must have nz or nz+1 variables")
        object.__setattr__(self, "body", _clip(self.body, self.nz, self.N, self.t_order))

    @property
    def has_t(self) -> bool:
        return self.body.n == self.nz + 1

    @property
    def ring(self) -> Ring:
        return self.body.ring

    @property
    def order(self) -> float:
        """Lowest z-degree of a nonzero term (``inf`` for zero)."""
        if not self.body.terms:
            return float("inf")
        return min(_zdeg(e, self.nz) for e in self.body.terms)

    def zpart(self, k: int) -> Poly:
        return self.body.homogeneous_part(k, self.nz)

    def with_t(self) -> "TruncSeries":
        if self.has_t:
            return self
        return TruncSeries(self.body.extend(self.nz + 1), self.nz, self.N, self.t_order)

    def t_coefficient(self, k: int) -> Poly:
        """Coefficient of t**k as a polynomial in z alone."""
        if not self.has_t:
            return self.body if k == 0 else Poly(self.nz, self.ring)
        return self.body.coeff_in(self.nz, k).restrict(self.nz)

    def t_degree(self) -> int:
        return self.body.max_exponent(self.nz) if self.has_t else 0

    def __add__(self, o: "TruncSeries") -> "TruncSeries":
        a, b = _align(self, o)
        return TruncSeries(a.body + b.body, a.nz, min(a.N, b.N), _min_order(a.t_order, b.t_order))

    def __sub__(self, o: "TruncSeries") -> "TruncSeries":
        a, b = _align(self, o)
        return TruncSeries(a.body - b.body, a.nz, min(a.N, b.N), _min_order(a.t_order, b.t_order))

    def __neg__(self):
        return TruncSeries(-self.body, self.nz, self.N, self.t_order)

    def __mul__(self, o):
        if not isinstance(o, TruncSeries):
            return TruncSeries(self.body.scale(o), self.nz, self.N, self.t_order)
        a, b = _align(self, o)
        N, K = min(a.N, b.N), _min_order(a.t_order, b.t_order)
        return TruncSeries(_clip(a.body.mul(b.body, N, a.nz), a.nz, N, K), a.nz, N, K)

    def __eq__(self, o):
        if not isinstance(o, TruncSeries):
            return NotImplemented
        a, b = _align(self, o)
        N, K = min(a.N, b.N), _min_order(a.t_order, b.t_order)
        return _clip(a.body, a.nz, N, K) == _clip(b.body, b.nz, N, K)

    def __hash__(self):
        return hash((self.body, self.nz, self.N, self.t_order))

    def __str__(self):
        from .notation import format_poly
        names = [f"z{i + 1}" for i in range(self.nz)] + (["t"] if self.has_t else [])
        return f"{format_poly(self.body, names)} + O(z^{self.N + 1})"


def _align(a: TruncSeries, b: TruncSeries):
    if a.nz != b.nz:
        raise SeriesError(f"dimension mismatch: {a.nz} vs {b.nz}")
    if a.has_t != b.has_t:
        a, b = a.with_t(), b.with_t()
    return a, b


@dataclass(frozen=True)
class FormalMap:
    """An n-tuple of truncated series sharing nz, ring, N and t handling."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise SeriesError("empty formal map")
        if any(c.has_t for c in comps):
            comps = tuple(c.with_t() for c in comps)
        nz = {c.nz for c in comps}
        if len(nz) != 1 or len({c.N for c in comps}) != 1 or len({c.ring for c in comps}) != 1:
            raise SeriesError("formal map components must share nz, N and ring")
        object.__setattr__(self, "components", comps)

    @property
    def nz(self) -> int:
        return self.components[0].nz

    @property
    def N(self) -> int:
        return self.components[0].N

    @property
    def ring(self) -> Ring:
        return self.components[0].ring

    @property
    def has_t(self) -> bool:
        return self.components[0].has_t

    @property
    def t_order(self):
        out = None
        for c in self.components:
            out = _min_order(out, c.t_order)
        return out

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i) -> TruncSeries:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, o):
        return isinstance(o, FormalMap) and len(o) == len(self) and all(
            a == b for a, b in zip(self.components, o.components))

    def __hash__(self):
        return hash(self.components)

    def __sub__(self, o: "FormalMap") -> "FormalMap":
        return FormalMap(tuple(a - b for a, b in zip(self, o)))

    def __add__(self, o: "FormalMap") -> "FormalMap":
        return FormalMap(tuple(a + b for a, b in zip(self, o)))

    def is_identity(self) -> bool:
        return self == identity_map(self.nz, self.ring, self.N, self.has_t, self.t_order)

    def __str__(self):
        return "(" + ",\n ".join(str(c) for c in self.components) + ")"


def truncate(P: Poly, N: int, t_order: int | None = None) -> TruncSeries:
    return TruncSeries(P, P.n, N, t_order)


def identity_map(nz: int, ring: Ring, N: int, has_t: bool = False,
                 t_order: int | None = None) -> FormalMap:
    n = nz + (1 if has_t else 0)
    return FormalMap(tuple(TruncSeries(Poly.var(n, ring, i), nz, N, t_order) for i in range(nz)))


def symmetric_map(P: Poly, N: int, deformed: bool = True, t_order: int | None = None) -> FormalMap:
    """``F(z) = z - grad P`` (or ``F_t = z - t grad P`` when ``deformed``)."""
    if P.order < 2:
        raise SeriesError(f"symmetric map needs o(P) >= 2, got {P.order}")
    nz = P.n
    comps = []
    for i, g in enumerate(gradient(P)):
        if deformed:
            body = Poly.var(nz + 1, P.ring, i) - _times_t(g.extend(nz + 1), nz, 1)
        else:
            body = Poly.var(nz, P.ring, i) - g
        comps.append(TruncSeries(body, nz, N, t_order))
    return FormalMap(tuple(comps))


def _times_t(P: Poly, nz: int, k: int) -> Poly:
    if k == 0:
        return P
    return Poly(P.n, P.ring, {e[:nz] + (e[nz] + k,): c for e, c in P.terms.items()}, check=False)


class _Substitution:
    """Caches monomials in the images ``G_j`` so one pass serves every component.

    Over QQ and QQ(i) the cache holds packed integer images and never leaves
    that form until the result is assembled.
    """

    def __init__(self, images: Sequence[Poly], nz: int, N: int, K: int | None):
        self.images = list(images)
        self.nz, self.N, self.K = nz, N, K
        self.n = n = images[0].n
        self.ring = ring = images[0].ring
        self.packed = packable(ring)
        one = Poly.constant(n, ring, 1)
        if self.packed:
            self.pimages = [Packed.from_poly(g, nz) for g in self.images]
            self.cache = {(0,) * nz: Packed.from_poly(one, nz)}
        else:
            self.cache = {(0,) * nz: one}

    def _tcap(self):
        return self.K if self.n > self.nz else None

    def monomial(self, e: tuple):
        hit = self.cache.get(e)
        if hit is not None:
            return hit
        j = max(i for i, x in enumerate(e) if x)
        prev = e[:j] + (e[j] - 1,) + e[j + 1:]
        if self.packed:
            out = packed_mul(self.monomial(prev), self.pimages[j], self.N, self._tcap())
        else:
            out = _clip(self.monomial(prev).mul(self.images[j], self.N, self.nz),
                        self.nz, self.N, self.K)
        self.cache[e] = out
        return out

    def apply(self, P: Poly, has_t: bool) -> Poly:
        nz, N, K, n = self.nz, self.N, self.K, self.n
        # group the terms of P by z-exponent; each group is a polynomial in t
        groups: dict = {}
        for e, c in P.terms.items():
            ez = e[:nz]
            if sum(ez) > N:
                continue
            et = e[nz] if has_t else 0
            if K is not None and et > K:
                continue
            texp = (0,) * nz + (et,) if n > nz else (0,) * nz
            groups.setdefault(ez, {})[texp] = c
        if self.packed:
            pairs = [(self.monomial(ez), Packed.from_poly(Poly(n, P.ring, tp, check=False), nz))
                     for ez, tp in groups.items()]
            return packed_sum_of_products(pairs, n, nz, N, self._tcap()).to_poly(P.ring)
        pairs = [(self.monomial(ez), Poly(n, P.ring, tp, check=False)) for ez, tp in groups.items()]
        filt = None
        if K is not None and n > nz:
            filt = lambda e: e[nz] <= K
        return sum_of_products(pairs, n, P.ring, filt)


def compose(F: FormalMap, G: FormalMap, N: int | None = None) -> FormalMap:
    """``F o G`` truncated at z-degree ``N`` (default: the smaller truncation)."""
    if F.nz != G.nz or len(F) != F.nz or len(G) != G.nz:
        raise SeriesError("compose needs square maps of equal dimension")
    if F.ring != G.ring:
        raise SeriesError("ring mismatch in compose")
    for g in G:
        if any(_zdeg(e, g.nz) == 0 for e in g.body.terms):
            raise SeriesError("inner map has a constant term")
    has_t = F.has_t or G.has_t
    nz = F.nz
    N = min(F.N, G.N) if N is None else N
    K = _min_order(F.t_order, G.t_order)
    images = [(g.with_t() if has_t else g).body for g in G]
    sub = _Substitution(images, nz, N, K)
    comps = []
    for f in F:
        body = sub.apply(f.body, f.has_t)
        comps.append(TruncSeries(body, nz, N, K))
    return FormalMap(tuple(comps))


def _linear_matrix(F: FormalMap) -> list[list[Poly]]:
    """Matrix of t-polynomials L with F(z) = L z + (higher order in z)."""
    nz, n = F.nz, F[0].body.n
    ring = F.ring
    L = [[Poly(n, ring) for _ in range(nz)] for _ in range(nz)]
    for i, f in enumerate(F):
        for e, c in f.body.terms.items():
            if _zdeg(e, nz) == 1:
                j = next(k for k in range(nz) if e[k])
                tpart = (0,) * nz + e[nz:]
                L[i][j] = L[i][j] + Poly(n, ring, {tpart: c}, check=False)
    return L


def _matmul(A, B, nz, K):
    size = len(A)
    out = []
    for i in range(size):
        row = []
        for j in range(len(B[0])):
            acc = Poly(A[0][0].n, A[0][0].ring)
            for k in range(len(B)):
                if A[i][k] and B[k][j]:
                    acc = acc + A[i][k] * B[k][j]
            row.append(_clip(acc, nz, 0, K))
        out.append(row)
    return out


def _linear_inverse(L, nz: int, K: int | None, ring: Ring):
    n = L[0][0].n
    L0 = [[x.constant_term() for x in row] for row in L]
    try:
        L0inv = solve(L0, ring)
    except ZeroDivisionError:
        raise NonInvertibleLinearPart("linear part of the map is singular at t = 0") from None
    L0inv_p = [[Poly.constant(n, ring, x) for x in row] for row in L0inv]
    # E = I - L0^{-1} L is divisible by t, so sum E^j converges t-adically
    prod = _matmul(L0inv_p, L, nz, K)
    E = [[(Poly.constant(n, ring, 1) if i == j else Poly(n, ring)) - prod[i][j] for j in range(nz)]
         for i in range(nz)]
    ident = [[Poly.constant(n, ring, 1 if i == j else 0) for j in range(nz)] for i in range(nz)]
    S, term = ident, ident
    steps = 0
    while True:
        term = _matmul(term, E, nz, K)
        steps += 1
        if all(not x for row in term for x in row):
            break
        if K is None and steps >= nz:
            raise NonInvertibleLinearPart(
                "inverse of the linear part is not polynomial in t; pass t_order")
        S = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(S, term)]
    return _matmul(S, L0inv_p, nz, K)


def invert_map(F: FormalMap, t_order: int | None = None) -> FormalMap:
    """Formal inverse ``G`` with ``F o G = G o F = id`` modulo z-degree ``N + 1``.

    Solved degree by degree: with ``F = L z + H``, the degree-k part of G is
    ``-L^{-1} [H(G_{<k})]_k``.
    """
    K = _min_order(F.t_order, t_order)
    nz, N, ring = F.nz, F.N, F.ring
    if len(F) != nz:
        raise SeriesError("only square maps can be inverted")
    for f in F:
        if any(_zdeg(e, nz) == 0 for e in f.body.terms):
            raise SeriesError("map has a constant term; its inverse is not a formal map at 0")
    L = _linear_matrix(F)
    Linv = _linear_inverse(L, nz, K, ring)
    n = F[0].body.n
    zs = [Poly.var(n, ring, j) for j in range(nz)]

    def apply_lin(vec):
        out = []
        for row in Linv:
            acc = Poly(n, ring)
            for a, v in zip(row, vec):
                if a and v:
                    acc = acc + a.mul(v)
            out.append(_clip(acc, nz, N, K))
        return out

    G = apply_lin(zs)
    if packable(ring):
        return _invert_graded(F, G, Linv, K)
    for k in range(2, N + 1):
        current = FormalMap(tuple(TruncSeries(g, nz, k, K) for g in G))
        Fk = FormalMap(tuple(TruncSeries(f.body, nz, k, K) for f in F))
        R = compose(Fk, current, N=k)
        resid = [r.zpart(k) for r in R]
        if all(not r for r in resid):
            continue
        corr = apply_lin(resid)
        G = [g - c for g, c in zip(G, corr)]
    return FormalMap(tuple(TruncSeries(g, nz, N, K) for g in G))


def _invert_graded(F: FormalMap, G1: list[Poly], Linv, K) -> FormalMap:
    """Degree-by-degree inversion over QQ / QQ(i) with graded monomial caches.

    For a monomial of z-degree >= 2 in the components of G, its degree-k part
    involves only the parts of G below degree k, so each graded piece is
    computed once and reused by every later degree.
    """
    nz, N, ring = F.nz, F.N, F.ring
    n = F[0].body.n
    tcap = K if n > nz else None
    one = Packed.from_poly(Poly.constant(n, ring, 1), nz)
    # parts[j][k]: homogeneous z-degree k piece of G_j
    parts = [[None, Packed.from_poly(g, nz)] for g in G1]
    lin = [[Packed.from_poly(x, nz) for x in row] for row in Linv]
    # nonlinear terms of F, grouped per component by z-exponent
    groups = []
    for f in F:
        grp: dict = {}
        for e, c in f.body.terms.items():
            ez = e[:nz]
            if sum(ez) < 2:
                continue
            rest = (0,) * nz + e[nz:]
            grp.setdefault(ez, {})[rest] = c
        groups.append({ez: Packed.from_poly(Poly(n, ring, tp, check=False), nz)
                       for ez, tp in grp.items()})
    memo: dict = {}

    def mono(e, k):
        """Degree-k piece of ``prod_j G_j^(e_j)``."""
        key = (e, k)
        hit = memo.get(key)
        if hit is not None:
            return hit
        deg = sum(e)
        if k < deg:
            out = Packed(n, nz, [], 1)
        elif deg == 1:
            j = e.index(1)
            out = parts[j][k] if k < len(parts[j]) else Packed(n, nz, [], 1)
        else:
            j = max(i for i, x in enumerate(e) if x)
            prev = e[:j] + (e[j] - 1,) + e[j + 1:]
            pairs = [(mono(prev, a), parts[j][k - a]) for a in range(deg - 1, k)]
            out = packed_sum_of_products(pairs, n, nz, None, tcap)
        memo[key] = out
        return out

    for k in range(2, N + 1):
        resid = [packed_sum_of_products([(mono(ez, k), c) for ez, c in grp.items()], n, nz, None, tcap)
                 for grp in groups]
        for i in range(nz):
            corr = packed_sum_of_products([(lin[i][j], resid[j]) for j in range(nz)], n, nz, None, tcap)
            neg = Packed(n, nz, [(kk, dg, -r, -im) for kk, dg, r, im in corr.rows], corr.den)
            parts[i].append(neg)
    comps = []
    for i in range(nz):
        acc = packed_sum_of_products([(p, one) for p in parts[i][1:]], n, nz, None, tcap)
        comps.append(TruncSeries(acc.to_poly(ring), nz, N, K))
    return FormalMap(tuple(comps))


def integrate_gradient(g: Sequence[Poly]) -> Poly:
    """The unique Q with ``grad Q = g`` and ``Q(0) = 0``; raises if g is not a gradient."""
    nz = len(g)
    n, ring = g[0].n, g[0].ring
    for i in range(nz):
        for j in range(i + 1, nz):
            if diff(g[i], j) != diff(g[j], i):
                raise NotAGradient(f"components {i} and {j} have non-symmetric Jacobian")
    acc: dict = {}
    for i, gi in enumerate(g):
        for e, c in gi.terms.items():
            ne = e[:i] + (e[i] + 1,) + e[i + 1:]
            v = c / ring.coerce(sum(e[:nz]) + 1)
            old = acc.get(ne)
            acc[ne] = v if old is None else old + v
    # sum_i z_i g_i^{[k]} counts each degree-(k+1) term of Q exactly (k+1) times
    Q = Poly(n, ring, {e: c for e, c in acc.items() if c}, check=False)
    if [diff(Q, i) for i in range(nz)] != list(g):
        raise NotAGradient("integration check failed")
    return Q


def extract_Q(G: FormalMap, M: int | None = None) -> list[Poly]:
    """Recover ``Q_[1..M]`` from ``G_t = z + t grad Q_t`` with ``Q_t = sum t^(m-1) Q_[m]``.

    Each Q_[m] is exact up to z-degree ``N + 1``.
    """
    if not G.has_t:
        raise SeriesError("extract_Q needs a deformed map carrying t")
    nz = G.nz
    H = G - identity_map(nz, G.ring, G.N, True, G.t_order)
    top = max(h.t_degree() for h in H)
    if M is None:
        M = top
    for h in H:
        if h.t_coefficient(0):
            raise SeriesError("G - id is not divisible by t")
    out = []
    for m in range(1, M + 1):
        g = [h.t_coefficient(m) for h in H]
        for gi in g:
            if gi.constant_term():
                raise SeriesError(f"t^{m} gradient has a constant term; o(Q) >= 2 violated")
        out.append(integrate_gradient(g))
    return out


def substitute(f, G: FormalMap, N: int | None = None, t_order: int | None = None) -> TruncSeries:
    """``f(G)`` for a single series or polynomial f in the variables of G."""
    if isinstance(f, Poly):
        f = TruncSeries(f, G.nz, G.N if N is None else max(N, G.N), None)
    if f.nz != G.nz:
        raise SeriesError("dimension mismatch in substitution")
    N = min(f.N, G.N) if N is None else N
    K = _min_order(_min_order(f.t_order, G.t_order), t_order)
    has_t = f.has_t or G.has_t
    images = [(g.with_t() if has_t else g).body for g in G]
    for g in G:
        if any(_zdeg(e, g.nz) == 0 for e in g.body.terms):
            raise SeriesError("inner map has a constant term")
    body = _Substitution(images, G.nz, N, K).apply(f.body, f.has_t)
    return TruncSeries(body, G.nz, N, K)
