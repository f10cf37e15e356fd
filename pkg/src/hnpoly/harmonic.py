"""Harmonic polynomials given as sums of isotropic powers, and the graph on their forms.

A :class:`HarmonicSpec` describes ``P = sum_i c_i <alpha_i, z>^d`` with every
``alpha_i`` isotropic.  The graph joins i and j when ``<alpha_i, alpha_j> != 0``.

Coefficients are kept explicit instead of being absorbed into the vectors
(that would need d-th roots outside QQ(i)); the matrices below carry them as
a diagonal factor ``C = diag(c_i)`` so that, for ``m >= 1``::

    Tr Hes(P)^m = (d(d-1))^m Tr (A C B^(d-2))^m

with ``A = (<alpha_i, alpha_j>)`` and ``B = diag(h_i)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .poly import Poly, PolyMatrix, diff, gradient, hessian, laplacian, linear_form, matrix_is_nilpotent, trace_power
from .scalars import QQI, Ring, bilinear, format_scalar, parse_scalar, rank

__all__ = [
    "SpecError", "NotIsotropic", "DependentForms", "NotHN", "HarmonicSpec", "Graph",
    "SpecMatrices", "assemble", "matrices", "trace_identity_check", "build_graph", "components",
    "span_dim", "split_by_components", "reduction_check", "disjointness",
    "willems_structure_check", "spec_from_json", "spec_to_json", "hes_product_vanishes",
]


class SpecError(ValueError):
    pass


class NotIsotropic(SpecError):
    pass


class DependentForms(SpecError):
    """The powers ``h_i^d`` are linearly dependent (or a vector/coefficient is zero)."""


class NotHN(SpecError):
    pass


@dataclass(frozen=True)
class HarmonicSpec:
    n: int
    d: int
    forms: tuple  # ((c, alpha), ...) with alpha a tuple of scalars
    ring: Ring = QQI
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        ring = self.ring
        forms = tuple((ring.coerce(c), tuple(ring.coerce(a) for a in alpha)) for c, alpha in self.forms)
        object.__setattr__(self, "forms", forms)
        self.validate()

    @property
    def k(self) -> int:
        return len(self.forms)

    @property
    def alphas(self) -> list:
        return [a for _, a in self.forms]

    @property
    def coefficients(self) -> list:
        return [c for c, _ in self.forms]

    def validate(self):
        if self.d < 2:
            raise SpecError(f"degree must be >= 2, got {self.d}")
        for idx, (c, alpha) in enumerate(self.forms):
            if len(alpha) != self.n:
                raise SpecError(f"form {idx}: vector has length {len(alpha)}, expected {self.n}")
            if not c:
                raise DependentForms(f"form {idx}: zero coefficient")
            if not any(alpha):
                raise DependentForms(f"form {idx}: zero vector")
            if bilinear(alpha, alpha):
                raise NotIsotropic(f"form {idx}: <alpha, alpha> != 0")
        if self.forms:
            pw = self.powers()
            monos = sorted({e for p in pw for e in p.terms})
            rows = [[p.terms.get(e, self.ring.zero) for e in monos] for p in pw]
            if rank(rows, self.ring) < self.k:
                raise DependentForms("the powers h_i^d are linearly dependent")

    def linear_forms(self) -> list[Poly]:
        if "h" not in self._cache:
            self._cache["h"] = [linear_form(a, self.ring) for a in self.alphas]
        return self._cache["h"]

    def powers(self) -> list[Poly]:
        if "pw" not in self._cache:
            self._cache["pw"] = [h ** self.d for h in self.linear_forms()]
        return self._cache["pw"]

    def term(self, i: int) -> Poly:
        """``c_i h_i^d``."""
        return self.powers()[i].scale(self.forms[i][0])

    def assemble(self) -> Poly:
        if "P" not in self._cache:
            P = Poly(self.n, self.ring)
            for i in range(self.k):
                P = P + self.term(i)
            if laplacian(P):
                raise AssertionError("assembled spec is not harmonic")
            self._cache["P"] = P
        return self._cache["P"]

    def subspec(self, indices: Iterable[int]) -> "HarmonicSpec":
        return HarmonicSpec(self.n, self.d, tuple(self.forms[i] for i in indices), self.ring)

    def to_dict(self) -> dict:
        from .notation import ring_to_json
        out = {"n": self.n, "d": self.d}
        if self.ring != QQI:
            out.update(ring_to_json(self.ring))
        out["forms"] = [{"c": self.ring.format(c), "alpha": [self.ring.format(a) for a in alpha]}
                        for c, alpha in self.forms]
        return out

    def __str__(self):
        parts = []
        for c, alpha in self.forms:
            vec = ", ".join(self.ring.format(a) for a in alpha)
            parts.append(f"{self.ring.format(c)}*<({vec}), z>^{self.d}")
        return " + ".join(parts) if parts else "0"


def spec_to_json(spec: HarmonicSpec) -> str:
    return json.dumps(spec.to_dict())


def spec_from_json(obj) -> HarmonicSpec:
    """Accepts a JSON string or an already-decoded dict."""
    from .notation import ring_from_json
    if isinstance(obj, str):
        obj = json.loads(obj)
    ring = ring_from_json(obj) if "ring" in obj else QQI
    forms = []
    for f in obj.get("forms", []):
        c = parse_scalar(str(f.get("c", "1")), ring)
        alpha = tuple(parse_scalar(str(a), ring) for a in f["alpha"])
        forms.append((c, alpha))
    return HarmonicSpec(int(obj["n"]), int(obj["d"]), tuple(forms), ring)


def assemble(spec: HarmonicSpec) -> Poly:
    return spec.assemble()


@dataclass
class SpecMatrices:
    A: PolyMatrix
    B: PolyMatrix
    C: PolyMatrix
    Psi: PolyMatrix
    Psi_j: PolyMatrix | None
    j: int | None


def _diag(entries: Sequence[Poly], n, ring) -> PolyMatrix:
    k = len(entries)
    return PolyMatrix([[entries[i] if i == j else Poly(n, ring) for j in range(k)] for i in range(k)], n, ring)


def matrices(spec: HarmonicSpec, j: int | None = None) -> SpecMatrices:
    """``A``, ``B``, ``C``, ``Psi = A C B^(d-2)`` and ``Psi_j = B^j A C B^(d-2-j)``."""
    n, ring, k, d = spec.n, spec.ring, spec.k, spec.d
    if j is not None and not 0 <= j <= d - 2:
        raise ValueError(f"j must lie in 0..{d - 2}, got {j}")
    al = spec.alphas
    A = PolyMatrix([[Poly.constant(n, ring, bilinear(al[a], al[b])) for b in range(k)] for a in range(k)], n, ring)
    h = spec.linear_forms()
    B = _diag(h, n, ring)
    C = _diag([Poly.constant(n, ring, c) for c in spec.coefficients], n, ring)
    Bp = _diag([x ** (d - 2) for x in h], n, ring)
    Psi = A @ C @ Bp
    Psi_j = None
    if j is not None:
        Psi_j = _diag([x ** j for x in h], n, ring) @ A @ C @ _diag([x ** (d - 2 - j) for x in h], n, ring)
    return SpecMatrices(A, B, C, Psi, Psi_j, j)


@dataclass
class TraceCheck:
    ok: bool
    m_max: int
    witness: str | None = None
    hn_agrees: bool | None = None

    def __bool__(self):
        return self.ok


def trace_identity_check(spec: HarmonicSpec, m_max: int) -> TraceCheck:
    """Compares ``Tr Hes^m P`` with ``(d(d-1))^m Tr Psi^m`` and every ``Psi_j`` variant."""
    if spec.k == 0:
        return TraceCheck(True, m_max, None, True)
    P = spec.assemble()
    d = spec.d
    H = hessian(P)
    mats = [matrices(spec).Psi] + [matrices(spec, j).Psi_j for j in range(d - 1)]
    labels = ["Psi"] + [f"Psi_{j}" for j in range(d - 1)]
    Hm = None
    powers = [None] * len(mats)
    for m in range(1, m_max + 1):
        Hm = H if Hm is None else Hm @ H
        lhs = Hm.trace()
        scale = (d * (d - 1)) ** m
        for idx, M in enumerate(mats):
            powers[idx] = M if powers[idx] is None else powers[idx] @ M
            rhs = powers[idx].trace().scale(scale)
            if lhs != rhs:
                return TraceCheck(False, m_max, f"m={m}, {labels[idx]}: {lhs} != {rhs}")
    hn = matrix_is_nilpotent(H)
    agrees = hn == matrix_is_nilpotent(mats[0])
    return TraceCheck(agrees, m_max, None if agrees else "HN verdicts differ", agrees)


@dataclass(frozen=True)
class Graph:
    k: int
    edges: frozenset  # of (i, j) with i < j
    labels: dict = field(default_factory=dict, compare=False, hash=False)

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, i: int) -> list[int]:
        return [j for j in range(self.k) if j != i and self.adjacent(i, j)]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def components(self) -> list[list[int]]:
        seen, out = set(), []
        for s in range(self.k):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.neighbors(v):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out

    @property
    def is_connected(self) -> bool:
        return self.k > 0 and len(self.components()) == 1

    def is_path(self) -> bool:
        """Connected path with at least one edge."""
        return (self.k >= 2 and self.is_connected and len(self.edges) == self.k - 1
                and all(self.degree(v) <= 2 for v in range(self.k)))

    def is_cycle(self) -> bool:
        return (self.k >= 3 and self.is_connected and len(self.edges) == self.k
                and all(self.degree(v) == 2 for v in range(self.k)))

    def is_complete_bipartite(self, a: int, b: int) -> bool:
        if a + b != self.k or len(self.edges) != a * b or not self.is_connected:
            return False
        # 2-colour then compare part sizes and completeness
        colour = {0: 0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if w not in colour:
                    colour[w] = 1 - colour[v]
                    stack.append(w)
                elif colour[w] == colour[v]:
                    return False
        sizes = sorted([sum(1 for c in colour.values() if c == 0), sum(1 for c in colour.values() if c == 1)])
        return sizes == sorted([a, b])

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.k):
            lines.append(f"  {v + 1};")
        for i, j in sorted(self.edges):
            lab = self.labels.get((i, j))
            attr = f' [label="{lab}"]' if lab is not None else ""
            lines.append(f"  {i + 1} -- {j + 1}{attr};")
        lines.append("}")
        return "\n".join(lines)


def build_graph(spec: HarmonicSpec) -> Graph:
    al = spec.alphas
    edges, labels = set(), {}
    for i in range(spec.k):
        for j in range(i + 1, spec.k):
            b = bilinear(al[i], al[j])
            if b:
                edges.add((i, j))
                labels[(i, j)] = format_scalar(b)
    return Graph(spec.k, frozenset(edges), labels)


def components(G: Graph) -> list[list[int]]:
    return G.components()


def span_dim(spec: HarmonicSpec) -> int:
    """l(P): dimension of the span of the vectors alpha_i."""
    if not spec.forms:
        return 0
    return rank([list(a) for a in spec.alphas], spec.ring)


def split_by_components(spec: HarmonicSpec) -> list[HarmonicSpec]:
    return [spec.subspec(c) for c in build_graph(spec).components()]


# --------------------------------------------------------------------------
# disjointness

class _Span:
    """Incremental row-echelon basis of polynomials (as coefficient dicts)."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.rows: list[tuple] = []  # (pivot monomial, dict)
        self.polys: list[Poly] = []

    def add(self, P: Poly) -> bool:
        v = dict(P.terms)
        for piv, row in self.rows:
            c = v.get(piv)
            if c:
                for e, x in row.items():
                    nv = v.get(e, self.ring.zero) - c * x
                    if nv:
                        v[e] = nv
                    else:
                        v.pop(e, None)
        if not v:
            return False
        piv = max(v)
        inv = self.ring.one / v[piv]
        row = {e: x * inv for e, x in v.items()}
        # keep earlier rows reduced against the new pivot
        for idx, (p2, r2) in enumerate(self.rows):
            c = r2.get(piv)
            if c:
                for e, x in row.items():
                    nv = r2.get(e, self.ring.zero) - c * x
                    if nv:
                        r2[e] = nv
                    else:
                        r2.pop(e, None)
        self.rows.append((piv, row))
        self.polys.append(P)
        return True


def _partials_basis(S: Poly, order_bound: int) -> list[Poly]:
    span = _Span(S.ring)
    frontier = [S] if S else []
    for P in frontier:
        span.add(P)
    for _ in range(order_bound):
        nxt = []
        for P in frontier:
            for i in range(P.n):
                Q = diff(P, i)
                if Q and span.add(Q):
                    nxt.append(Q)
        frontier = nxt
        if not frontier:
            break
    return span.polys


def _pairing(u: list[Poly], w: list[Poly]) -> Poly:
    acc = Poly(u[0].n, u[0].ring)
    for a, b in zip(u, w):
        if a and b:
            acc = acc + a * b
    return acc


def disjointness(S: Poly, T: Poly, order_bound: int | None = None) -> bool:
    """``<grad D^a S, grad D^b T> = 0`` for all multi-indices with ``|a|, |b| <= order_bound``.

    The default bound is the larger degree, which makes the check complete for
    polynomials.  Partials are reduced to a basis of their span first; the
    condition is bilinear so checking basis pairs suffices.
    """
    if S.n != T.n:
        raise ValueError("disjointness needs a common variable count")
    if order_bound is None:
        order_bound = int(max(S.degree, T.degree, 0))
    bs = [gradient(p) for p in _partials_basis(S, order_bound)]
    bt = [gradient(p) for p in _partials_basis(T, order_bound)]
    for gs in bs:
        for gt in bt:
            if _pairing(gs, gt):
                return False
    return True


def hes_product_vanishes(S: Poly, T: Poly) -> bool:
    HS, HT = hessian(S), hessian(T)
    return (HS @ HT).is_zero() and (HT @ HS).is_zero()


@dataclass
class ReductionReport:
    components: list
    hes_orthogonal: bool
    hn_matches: bool
    vc_additive: bool
    pair_additive: bool
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.hes_orthogonal and self.hn_matches and self.vc_additive and self.pair_additive

    def __bool__(self):
        return self.ok


def reduction_check(spec: HarmonicSpec, M: int) -> ReductionReport:
    """Checks the splitting of P along the components of its graph.

    (a) Hessians of distinct components multiply to zero; (b) P is HN iff every
    piece is; (c) ``Delta^m P^(m+1)`` is the sum over pieces for ``m <= M``;
    (d) inversion pairs add up to order M.
    """
    from .hn import is_hn_direct
    from .inversion import qpair_recursive

    comps = build_graph(spec).components() if spec.k else []
    pieces = [spec.subspec(c).assemble() for c in comps]
    P = spec.assemble()
    hes_ok = all(hes_product_vanishes(pieces[a], pieces[b])
                 for a in range(len(pieces)) for b in range(a + 1, len(pieces)))
    hn_ok = is_hn_direct(P) == all(is_hn_direct(p) for p in pieces)
    vc_ok = True
    power = P
    piece_powers = list(pieces)
    for m in range(M + 1):
        if m:
            power = power * P
            piece_powers = [q * p for q, p in zip(piece_powers, pieces)]
        lhs = laplacian(power, times=m)
        rhs = Poly(spec.n, spec.ring)
        for q in piece_powers:
            rhs = rhs + laplacian(q, times=m)
        if lhs != rhs:
            vc_ok = False
            break
    if P:
        whole = qpair_recursive(P, M).Q
        parts = [qpair_recursive(p, M).Q for p in pieces]
        pair_ok = all(whole[i] == sum((q[i] for q in parts[1:]), parts[0][i]) for i in range(M))
    else:
        pair_ok = True
    return ReductionReport(comps, hes_ok, hn_ok, vc_ok, pair_ok)


@dataclass
class WillemsReport:
    k: int
    l: int
    edges: int
    components: int
    case: str
    consistent: bool
    is_path: bool
    is_cycle: bool

    def __bool__(self):
        return self.consistent


def willems_structure_check(spec: HarmonicSpec) -> WillemsReport:
    """Compares the graph of an HN spec of degree >= 4 with the known structure results.

    Span dimension in {1, 2, k-1, k} forces an edgeless graph; span dimension
    k-2 together with connectedness forces K(4, k-4); the graph is never a
    path or a cycle.
    """
    from .hn import is_hn_direct
    if spec.d < 4:
        raise SpecError("structure check needs d >= 4")
    if not is_hn_direct(spec.assemble()):
        raise NotHN("structure check needs an HN spec")
    G = build_graph(spec)
    k, l = spec.k, span_dim(spec)
    path, cyc = G.is_path(), G.is_cycle()
    if l in (1, 2, k - 1, k):
        case, ok = "edgeless forced", not G.edges
    elif l == k - 2 and G.is_connected:
        case, ok = "K(4, k-4) forced", G.is_complete_bipartite(4, k - 4)
    else:
        case, ok = "no constraint", True
    return WillemsReport(k, l, len(G.edges), len(G.components()), case,
                         ok and not path and not cyc, path, cyc)
