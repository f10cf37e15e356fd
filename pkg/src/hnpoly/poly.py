"""Sparse multivariate polynomials over an exact ring, with differential operators.

Variables are indexed from 0 in the Python API and printed as ``z1 .. zn``.
A :class:`Poly` is treated as immutable once built.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from typing import Iterable, Sequence

from gmpy2 import lcm, mpq

from .scalars import QQ, QQI, GaussianRational, Ring, RingMismatch, ring_of

__all__ = [
    "Poly", "PolyMatrix", "diff", "gradient", "laplacian", "hessian",
    "directional_power", "euler", "matrix_is_nilpotent", "trace_power",
    "evaluate", "evaluate_matrix", "sigma2", "linear_form", "sum_of_products", "Packed",
    "packed_mul", "packed_sum_of_products", "packable",
]


class Poly:
    """Polynomial in ``n`` variables: a map exponent-tuple -> nonzero scalar."""

    __slots__ = ("n", "ring", "terms")

    def __init__(self, n: int, ring: Ring = QQ, terms: dict | None = None, *, check: bool = True):
        self.n = n
        self.ring = ring
        if terms is None:
            self.terms = {}
        elif check:
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} has length {len(e)}, expected {n}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                c = ring.coerce(c)
                if c:
                    clean[e] = clean[e] + c if e in clean else c
            self.terms = {e: c for e, c in clean.items() if c}
        else:
            self.terms = terms

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n: int, ring: Ring = QQ) -> "Poly":
        return cls(n, ring)

    @classmethod
    def constant(cls, n: int, ring: Ring, c) -> "Poly":
        c = ring.coerce(c)
        return cls(n, ring, {(0,) * n: c} if c else {}, check=False)

    @classmethod
    def var(cls, n: int, ring: Ring, i: int) -> "Poly":
        if not 0 <= i < n:
            raise IndexError(f"variable index {i} out of range for n={n}")
        e = [0] * n
        e[i] = 1
        return cls(n, ring, {tuple(e): ring.one}, check=False)

    @classmethod
    def monomial(cls, ring: Ring, exp: Sequence[int], c=1) -> "Poly":
        return cls(len(exp), ring, {tuple(exp): c})

    # -- basic properties -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def degree(self) -> float:
        """Total degree; ``-inf`` for the zero polynomial."""
        if not self.terms:
            return -math.inf
        return max(sum(e) for e in self.terms)

    @property
    def order(self) -> float:
        """Lowest total degree of a term; ``+inf`` for the zero polynomial."""
        if not self.terms:
            return math.inf
        return min(sum(e) for e in self.terms)

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, k: int, nz: int | None = None) -> "Poly":
        nz = self.n if nz is None else nz
        return Poly(self.n, self.ring,
                    {e: c for e, c in self.terms.items() if sum(e[:nz]) == k}, check=False)

    def truncate(self, N: int, nz: int | None = None) -> "Poly":
        """Drop terms of total degree (in the first ``nz`` variables) above ``N``."""
        nz = self.n if nz is None else nz
        return Poly(self.n, self.ring,
                    {e: c for e, c in self.terms.items() if sum(e[:nz]) <= N}, check=False)

    def coefficient(self, exp: Sequence[int]):
        return self.terms.get(tuple(exp), self.ring.zero)

    def constant_term(self):
        return self.terms.get((0,) * self.n, self.ring.zero)

    def _same(self, other: "Poly"):
        if other.n != self.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")
        if other.ring != self.ring:
            raise RingMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._same(other)
            return other
        return Poly.constant(self.n, self.ring, other)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return Poly(self.n, self.ring, out, check=False)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.n, self.ring, {e: -c for e, c in self.terms.items()}, check=False)

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def scale(self, c) -> "Poly":
        c = self.ring.coerce(c)
        if not c:
            return Poly(self.n, self.ring)
        return Poly(self.n, self.ring, {e: x * c for e, x in self.terms.items()}, check=False)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        return self.mul(other)

    def __rmul__(self, other) -> "Poly":
        return self.scale(other)

    def __truediv__(self, c) -> "Poly":
        c = self.ring.coerce(c)
        return self.scale(self.ring.one / c)

    def mul(self, other: "Poly", N: int | None = None, nz: int | None = None) -> "Poly":
        """Product, optionally truncated above z-degree ``N`` (first ``nz`` variables)."""
        self._same(other)
        if not self.terms or not other.terms:
            return Poly(self.n, self.ring)
        nz = self.n if nz is None else nz
        return Poly(self.n, self.ring, _product(self.terms, other.terms, self.ring, self.n, N, nz),
                    check=False)

    def __pow__(self, k: int) -> "Poly":
        return self.power(k)

    def power(self, k: int, N: int | None = None, nz: int | None = None) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.constant(self.n, self.ring, 1)
        base = self
        while k:
            if k & 1:
                out = out.mul(base, N, nz)
            k >>= 1
            if k:
                base = base.mul(base, N, nz)
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.ring == other.ring and self.terms == other.terms
        if not self.terms:
            return other == 0
        if set(self.terms) == {(0,) * self.n}:
            return self.constant_term() == other
        return False

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # -- structural helpers ----------------------------------------------
    def extend(self, n_new: int) -> "Poly":
        """Append ``n_new - n`` dummy variables (used to add the parameter t)."""
        pad = (0,) * (n_new - self.n)
        return Poly(n_new, self.ring, {e + pad: c for e, c in self.terms.items()}, check=False)

    def restrict(self, n_new: int) -> "Poly":
        """Drop trailing variables that do not occur."""
        out = {}
        for e, c in self.terms.items():
            if any(e[n_new:]):
                raise ValueError("cannot drop a variable that occurs")
            out[e[:n_new]] = c
        return Poly(n_new, self.ring, out, check=False)

    def coeff_in(self, var: int, k: int) -> "Poly":
        """Coefficient of ``var**k``, as a polynomial in the same variable set."""
        return Poly(self.n, self.ring,
                    {e[:var] + (0,) + e[var + 1:]: c for e, c in self.terms.items() if e[var] == k},
                    check=False)

    def max_exponent(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=0)

    def map_coefficients(self, f, ring: Ring | None = None) -> "Poly":
        ring = self.ring if ring is None else ring
        return Poly(self.n, ring, {e: f(c) for e, c in self.terms.items()})

    def change_ring(self, ring: Ring) -> "Poly":
        return Poly(self.n, ring, {e: ring.coerce(c) for e, c in self.terms.items()})

    def sorted_terms(self):
        """Terms in canonical print order: degree descending, then exponents descending."""
        return sorted(self.terms.items(), key=lambda it: (-sum(it[0]), tuple(-x for x in it[0])))

    def __str__(self):
        from .notation import format_poly
        return format_poly(self)

    def __repr__(self):
        return f"Poly({self.n}, {self.ring!r}, '{self}')"


# --------------------------------------------------------------------------
# differential operators

def diff(P: Poly, i: int, k: int = 1) -> Poly:
    """``k``-th partial derivative with respect to variable ``i`` (0-based)."""
    if not 0 <= i < P.n:
        raise IndexError(f"variable index {i} out of range for n={P.n}")
    out = {}
    for e, c in P.terms.items():
        a = e[i]
        if a < k:
            continue
        f = math.perm(a, k)
        ne = e[:i] + (a - k,) + e[i + 1:]
        out[ne] = c * f
    return Poly(P.n, P.ring, {e: c for e, c in out.items() if c}, check=False)


def gradient(P: Poly, nz: int | None = None) -> list[Poly]:
    nz = P.n if nz is None else nz
    return [diff(P, i) for i in range(nz)]


def laplacian(P: Poly, nz: int | None = None, times: int = 1) -> Poly:
    """``Delta**times P`` where Delta sums second derivatives in the first ``nz`` variables."""
    nz = P.n if nz is None else nz
    terms = P.terms
    for _ in range(times):
        if not terms:
            break
        out: dict = {}
        get = out.get
        for e, c in terms.items():
            for i in range(nz):
                a = e[i]
                if a >= 2:
                    ne = e[:i] + (a - 2,) + e[i + 1:]
                    v = c * (a * (a - 1))
                    old = get(ne)
                    out[ne] = v if old is None else old + v
        terms = {e: c for e, c in out.items() if c}
    return Poly(P.n, P.ring, terms, check=False)


def euler(P: Poly, nz: int | None = None) -> Poly:
    """``sum_i z_i D_i P``: multiplies each term by its z-degree."""
    nz = P.n if nz is None else nz
    out = {}
    for e, c in P.terms.items():
        v = c * sum(e[:nz])
        if v:
            out[e] = v
    return Poly(P.n, P.ring, out, check=False)


def hessian(P: Poly, nz: int | None = None) -> "PolyMatrix":
    nz = P.n if nz is None else nz
    first = [diff(P, i) for i in range(nz)]
    rows = [[None] * nz for _ in range(nz)]
    for i in range(nz):
        for j in range(i, nz):
            h = diff(first[i], j)
            rows[i][j] = rows[j][i] = h
    return PolyMatrix(rows, P.n, P.ring)


def directional_power(P: Poly, beta: Sequence, k: int) -> Poly:
    """``(sum_i beta_i D_i)**k P``."""
    if len(beta) != P.n:
        raise ValueError(f"direction has length {len(beta)}, expected {P.n}")
    beta = [P.ring.coerce(b) for b in beta]
    out = P
    for _ in range(k):
        acc = Poly(P.n, P.ring)
        for i, b in enumerate(beta):
            if b:
                acc = acc + diff(out, i).scale(b)
        out = acc
        if not out:
            break
    return out


def evaluate(P: Poly, a: Sequence):
    """Exact value of ``P`` at the point ``a``."""
    if len(a) != P.n:
        raise ValueError(f"point has length {len(a)}, expected {P.n}")
    a = [P.ring.coerce(x) for x in a]
    pw = [[P.ring.one] for _ in a]
    acc = P.ring.zero
    for e, c in P.terms.items():
        v = c
        for i, k in enumerate(e):
            if k:
                col = pw[i]
                while len(col) <= k:
                    col.append(col[-1] * a[i])
                v = v * col[k]
        acc = acc + v
    return acc


def sigma2(n: int, ring: Ring = QQ) -> Poly:
    """``sum z_i**2``."""
    terms = {}
    for i in range(n):
        e = [0] * n
        e[i] = 2
        terms[tuple(e)] = ring.one
    return Poly(n, ring, terms, check=False)


def linear_form(alpha: Sequence, ring: Ring) -> Poly:
    """``h_alpha(z) = <alpha, z>``."""
    n = len(alpha)
    terms = {}
    for i, a in enumerate(alpha):
        e = [0] * n
        e[i] = 1
        terms[tuple(e)] = a
    return Poly(n, ring, terms)


# --------------------------------------------------------------------------
# matrices of polynomials

class PolyMatrix:
    """Rectangular matrix of polynomials sharing variable count and ring."""

    __slots__ = ("rows", "n", "ring")

    def __init__(self, rows: Sequence[Sequence], n: int, ring: Ring):
        self.n = n
        self.ring = ring
        width = len(rows[0]) if rows else 0
        self.rows = []
        for row in rows:
            if len(row) != width:
                raise ValueError("ragged matrix")
            self.rows.append([x if isinstance(x, Poly) else Poly.constant(n, ring, x) for x in row])
        for row in self.rows:
            for x in row:
                if x.n != n or x.ring != ring:
                    raise RingMismatch("matrix entries must share n and ring")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @classmethod
    def identity(cls, size: int, n: int, ring: Ring) -> "PolyMatrix":
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)], n, ring)

    @classmethod
    def zeros(cls, r: int, c: int, n: int, ring: Ring) -> "PolyMatrix":
        return cls([[0] * c for _ in range(r)], n, ring)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        r, k = self.shape
        k2, c = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for i in range(r):
            row = []
            for j in range(c):
                acc = Poly(self.n, self.ring)
                for l in range(k):
                    a, b = self.rows[i][l], other.rows[l][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, self.n, self.ring)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
                          self.n, self.ring)

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix([[x.scale(c) for x in row] for row in self.rows], self.n, self.ring)

    def __pow__(self, m: int) -> "PolyMatrix":
        size, c = self.shape
        if size != c:
            raise ValueError("power of a non-square matrix")
        out = PolyMatrix.identity(size, self.n, self.ring)
        base = self
        while m:
            if m & 1:
                out = out @ base
            m >>= 1
            if m:
                base = base @ base
        return out

    def trace(self) -> Poly:
        size, c = self.shape
        if size != c:
            raise ValueError("trace of a non-square matrix")
        acc = Poly(self.n, self.ring)
        for i in range(size):
            acc = acc + self.rows[i][i]
        return acc

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(col) for col in zip(*self.rows)], self.n, self.ring)

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def apply(self, vec: Sequence[Poly]) -> list[Poly]:
        out = []
        for row in self.rows:
            acc = Poly(self.n, self.ring)
            for a, v in zip(row, vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.shape == other.shape and all(
            a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2))

    def __repr__(self):
        return "PolyMatrix([" + ", ".join("[" + ", ".join(str(x) for x in row) + "]"
                                          for row in self.rows) + "])"


def matrix_is_nilpotent(M: PolyMatrix) -> bool:
    """True iff ``M**size == 0``; entries live in a domain so this is exact."""
    size, c = M.shape
    if size != c:
        raise ValueError("nilpotency of a non-square matrix")
    if size == 0:
        return True
    return (M ** size).is_zero()


def trace_power(M: PolyMatrix, m: int) -> Poly:
    """``Tr M**m``; with ``M = hessian(P)`` this is u_m(P)."""
    if m < 1:
        raise ValueError("trace_power needs m >= 1")
    return (M ** m).trace()


def evaluate_matrix(M: PolyMatrix, a: Sequence) -> list[list]:
    return [[evaluate(x, a) for x in row] for row in M.rows]


def polys_from(items: Iterable, n: int, ring: Ring) -> list[Poly]:
    return [x if isinstance(x, Poly) else Poly.constant(n, ring, x) for x in items]


# --------------------------------------------------------------------------
# multiplication kernel
#
# Exponent tuples are packed into one int (fixed-width fields) so that adding
# exponents is a single int addition.  Over QQ and QQ(i) coefficients are
# scaled to integers over a common denominator before the double loop.

_SHIFT = 24
_MASK = (1 << _SHIFT) - 1


def _pack(e) -> int:
    k = 0
    for i, x in enumerate(e):
        k |= x << (_SHIFT * i)
    return k


def _unpack(k: int, n: int) -> tuple:
    return tuple((k >> (_SHIFT * i)) & _MASK for i in range(n))


class Packed:
    """Integer image of a QQ or QQ(i) polynomial.

    ``rows`` holds ``(key, zdeg, re, im)`` with the true coefficient
    ``(re + i im) / den``; ``zdeg`` is the degree in the first ``nz`` variables.
    """

    __slots__ = ("n", "nz", "rows", "den")

    def __init__(self, n, nz, rows, den):
        self.n, self.nz, self.rows, self.den = n, nz, rows, den

    @classmethod
    def from_poly(cls, P: "Poly", nz: int | None = None) -> "Packed":
        nz = P.n if nz is None else nz
        gaussian = P.ring is QQI
        den = 1
        for c in P.terms.values():
            if gaussian:
                den = lcm(lcm(den, c.re.denominator), c.im.denominator)
            else:
                den = lcm(den, c.denominator)
        rows = []
        for e, c in P.terms.items():
            if gaussian:
                rows.append((_pack(e), sum(e[:nz]), int(c.re * den), int(c.im * den)))
            else:
                rows.append((_pack(e), sum(e[:nz]), int(c * den), 0))
        return cls(P.n, nz, rows, int(den))

    def to_poly(self, ring) -> "Poly":
        n, den = self.n, self.den
        if ring is QQI:
            terms = {_unpack(k, n): GaussianRational(mpq(r, den), mpq(i, den))
                     for k, _, r, i in self.rows}
        else:
            terms = {_unpack(k, n): mpq(r, den) for k, _, r, i in self.rows}
        return Poly(n, ring, terms, check=False)

    def __bool__(self):
        return bool(self.rows)

    def __len__(self):
        return len(self.rows)


def _accumulate(re_acc, im_acc, deg_acc, ra, rb, N, scale=1):
    """Adds ``scale * A * B`` (both as row lists) into the accumulators."""
    if N is not None:
        rb = sorted(rb, key=lambda r: r[1])
        degs = [r[1] for r in rb]
    rget, iget = re_acc.get, im_acc.get
    for ka, dga, ar, ai in ra:
        if scale != 1:
            ar, ai = ar * scale, ai * scale
        if N is None:
            block = rb
        else:
            block = rb[:bisect_right(degs, N - dga)]
            if not block:
                continue
        for kb, dgb, br, bi in block:
            k = ka + kb
            if k not in deg_acc:
                deg_acc[k] = dga + dgb
            if ar:
                if br:
                    re_acc[k] = rget(k, 0) + ar * br
                if bi:
                    im_acc[k] = iget(k, 0) + ar * bi
            if ai:
                if bi:
                    re_acc[k] = rget(k, 0) - ai * bi
                if br:
                    im_acc[k] = iget(k, 0) + ai * br


def _finish(n, nz, re_acc, im_acc, deg_acc, den, t_cap=None) -> Packed:
    rows = []
    shift = _SHIFT * nz
    for k, dg in deg_acc.items():
        r, i = re_acc.get(k, 0), im_acc.get(k, 0)
        if not (r or i):
            continue
        if t_cap is not None and ((k >> shift) & _MASK) > t_cap:
            continue
        rows.append((k, dg, r, i))
    if rows:
        g = math.gcd(den, *(r for _, _, r, _ in rows), *(i for _, _, _, i in rows))
        if g > 1:
            den //= g
            rows = [(k, dg, r // g, i // g) for k, dg, r, i in rows]
    return Packed(n, nz, rows, den)


def packed_mul(A: Packed, B: Packed, N: int | None = None, t_cap: int | None = None) -> Packed:
    """``A * B`` keeping z-degree ``<= N`` and (when the (nz+1)-th variable is t) t-degree ``<= t_cap``."""
    ra, rb = A.rows, B.rows
    if len(ra) > len(rb):
        ra, rb = rb, ra
    re_acc, im_acc, deg_acc = {}, {}, {}
    _accumulate(re_acc, im_acc, deg_acc, ra, rb, N)
    return _finish(A.n, A.nz, re_acc, im_acc, deg_acc, A.den * B.den, t_cap)


def packed_sum_of_products(pairs, n: int, nz: int, N: int | None = None,
                           t_cap: int | None = None) -> Packed:
    pairs = [(a, b) for a, b in pairs if a.rows and b.rows]
    total = 1
    for a, b in pairs:
        total = lcm(total, a.den * b.den)
    total = int(total)
    re_acc, im_acc, deg_acc = {}, {}, {}
    for a, b in pairs:
        ra, rb = a.rows, b.rows
        if len(ra) > len(rb):
            ra, rb = rb, ra
        _accumulate(re_acc, im_acc, deg_acc, ra, rb, N, total // (a.den * b.den))
    return _finish(n, nz, re_acc, im_acc, deg_acc, total, t_cap)


def packable(ring) -> bool:
    return ring is QQ or ring is QQI


def sum_of_products(pairs, n: int, ring, filt=None) -> "Poly":
    """``sum A_j * B_j`` accumulated in one pass; ``filt(exp)`` may drop output terms."""
    pairs = [(a, b) for a, b in pairs if a.terms and b.terms]
    if not pairs:
        return Poly(n, ring)
    if packable(ring):
        acc = packed_sum_of_products([(Packed.from_poly(a), Packed.from_poly(b)) for a, b in pairs],
                                     n, n).to_poly(ring)
    else:
        acc = Poly(n, ring)
        for a, b in pairs:
            acc = acc + a * b
    if filt is None:
        return acc
    return Poly(n, ring, {e: c for e, c in acc.terms.items() if filt(e)}, check=False)


def _product(a: dict, b: dict, ring, n: int, N, nz: int) -> dict:
    if packable(ring):
        A = Packed.from_poly(Poly(n, ring, a, check=False), nz)
        B = Packed.from_poly(Poly(n, ring, b, check=False), nz)
        return packed_mul(A, B, N).to_poly(ring).terms
    ra = [(_pack(e), sum(e[:nz]), c) for e, c in a.items()]
    rb = [(_pack(e), sum(e[:nz]), c) for e, c in b.items()]
    if len(ra) > len(rb):
        ra, rb = rb, ra
    if N is not None:
        rb.sort(key=lambda r: r[1])
        degs = [r[1] for r in rb]
    out: dict = {}
    get = out.get
    for ka, dga, ca in ra:
        block = rb if N is None else rb[:bisect_right(degs, N - dga)]
        for kb, _, cb in block:
            k = ka + kb
            c = get(k)
            out[k] = ca * cb if c is None else c + ca * cb
    return {_unpack(k, n): c for k, c in out.items() if c}
