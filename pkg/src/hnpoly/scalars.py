"""Exact coefficient rings: rationals, Gaussian rationals and prime fields.

Every polynomial carries a :class:`Ring`.  Elements are plain immutable
values: ``gmpy2.mpq`` for QQ, :class:`GaussianRational` for QQ(i),
:class:`FpElement` for GF(p) and :class:`FpIElement` for GF(p)[i] when -1 is
not a square mod p.  Python ints mix freely with every ring; mixing two
different rings raises :class:`RingMismatch`.
"""
from __future__ import annotations

import functools
import re
from typing import Iterable, Sequence

from gmpy2 import is_prime, isqrt, mpq, mpz

__all__ = [
    "RingError", "RingMismatch", "Ring", "QQ", "QQI", "GF", "GFI",
    "GaussianRational", "FpElement", "FpIElement", "ring_of", "bilinear",
    "parse_scalar", "format_scalar", "qi_sqrt", "rank", "solve",
]


class RingError(ValueError):
    """Invalid ring construction or unsupported ring operation."""


class RingMismatch(RingError, TypeError):
    """Raised when values from two different coefficient rings meet."""


def _mismatch(a, b):
    raise RingMismatch(f"cannot combine {type(a).__name__} and {type(b).__name__}")


# --------------------------------------------------------------------------
# Gaussian rationals

class GaussianRational:
    """``re + im*i`` with ``re``, ``im`` reduced rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    def __add__(self, o):
        if type(o) is GaussianRational:
            return GaussianRational(self.re + o.re, self.im + o.im)
        if isinstance(o, int):
            return GaussianRational(self.re + o, self.im)
        _mismatch(self, o)

    __radd__ = __add__

    def __sub__(self, o):
        if type(o) is GaussianRational:
            return GaussianRational(self.re - o.re, self.im - o.im)
        if isinstance(o, int):
            return GaussianRational(self.re - o, self.im)
        _mismatch(self, o)

    def __rsub__(self, o):
        if isinstance(o, int):
            return GaussianRational(o - self.re, -self.im)
        _mismatch(o, self)

    def __mul__(self, o):
        if type(o) is GaussianRational:
            a, b, c, d = self.re, self.im, o.re, o.im
            return GaussianRational(a * c - b * d, a * d + b * c)
        if isinstance(o, int):
            return GaussianRational(self.re * o, self.im * o)
        _mismatch(self, o)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def inverse(self):
        nrm = self.norm()
        if not nrm:
            raise ZeroDivisionError("division by zero in QQ(i)")
        return GaussianRational(self.re / nrm, -self.im / nrm)

    def __truediv__(self, o):
        if isinstance(o, int):
            if o == 0:
                raise ZeroDivisionError("division by zero in QQ(i)")
            return GaussianRational(self.re / o, self.im / o)
        if type(o) is GaussianRational:
            return self * o.inverse()
        _mismatch(self, o)

    def __rtruediv__(self, o):
        if isinstance(o, int):
            return self.inverse() * o
        _mismatch(o, self)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = GaussianRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if type(o) is GaussianRational:
            return self.re == o.re and self.im == o.im
        if isinstance(o, int):
            return not self.im and self.re == o
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return QQI.format(self)


# --------------------------------------------------------------------------
# Prime fields

class FpElement:
    """Residue class ``v mod p`` with ``0 <= v < p``."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = int(v) % p
        self.p = p

    def _other(self, o):
        if type(o) is FpElement:
            if o.p != self.p:
                _mismatch(self, o)
            return o.v
        if isinstance(o, int):
            return o
        _mismatch(self, o)

    def __add__(self, o):
        return FpElement(self.v + self._other(o), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return FpElement(self.v - self._other(o), self.p)

    def __rsub__(self, o):
        return FpElement(self._other(o) - self.v, self.p)

    def __mul__(self, o):
        return FpElement(self.v * self._other(o), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def inverse(self):
        if not self.v:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElement(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, o):
        w = self._other(o) % self.p
        if not w:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return FpElement(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpElement(pow(self.v, k, self.p), self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, o):
        if type(o) is FpElement:
            return self.p == o.p and self.v == o.v
        if isinstance(o, int):
            return self.v == o % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"FpElement({self.v}, {self.p})"

    def __str__(self):
        return f"{self.v} mod {self.p}"


class FpIElement:
    """``a + b*i`` in GF(p)[i] = GF(p^2), used when -1 is not a square mod p."""

    __slots__ = ("a", "b", "p")

    def __init__(self, a, b, p):
        self.a = int(a) % p
        self.b = int(b) % p
        self.p = p

    def _other(self, o):
        if type(o) is FpIElement:
            if o.p != self.p:
                _mismatch(self, o)
            return o.a, o.b
        if isinstance(o, int):
            return o, 0
        _mismatch(self, o)

    def __add__(self, o):
        c, d = self._other(o)
        return FpIElement(self.a + c, self.b + d, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        c, d = self._other(o)
        return FpIElement(self.a - c, self.b - d, self.p)

    def __rsub__(self, o):
        c, d = self._other(o)
        return FpIElement(c - self.a, d - self.b, self.p)

    def __mul__(self, o):
        c, d = self._other(o)
        return FpIElement(self.a * c - self.b * d, self.a * d + self.b * c, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpIElement(-self.a, -self.b, self.p)

    def inverse(self):
        nrm = (self.a * self.a + self.b * self.b) % self.p
        if not nrm:
            raise ZeroDivisionError(f"division by zero in GF({self.p})[i]")
        inv = pow(nrm, -1, self.p)
        return FpIElement(self.a * inv, -self.b * inv, self.p)

    def __truediv__(self, o):
        c, d = self._other(o)
        return self * FpIElement(c, d, self.p).inverse()

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = FpIElement(1, 0, self.p), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, o):
        if type(o) is FpIElement:
            return self.p == o.p and self.a == o.a and self.b == o.b
        if isinstance(o, int):
            return self.b == 0 and self.a == o % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.p))

    def __repr__(self):
        return f"FpIElement({self.a}, {self.b}, {self.p})"

    def __str__(self):
        return GFI(self.p).format(self)


# --------------------------------------------------------------------------
# Ring objects

_RAT = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*")


def _parse_rational(text: str) -> mpq:
    m = _RAT.fullmatch(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return mpq(int(m.group(1)), den)


def _split_complex(text: str) -> tuple[str, str | None]:
    """Split ``"a+bi"`` into real and imaginary literal parts."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if not s.endswith("i"):
        return s, None
    body = s[:-1].rstrip().rstrip("*").rstrip()
    # last sign not at position 0 separates the two parts
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut > 0:
        re_part, im_part = body[:cut], body[cut:]
    else:
        re_part, im_part = "0", body
    im_part = im_part.replace(" ", "")
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return re_part, im_part


def _fmt_rational(q) -> str:
    return str(mpq(q))


class Ring:
    """Base class for the coefficient rings.  Subclasses are singletons."""

    tag = "?"
    characteristic = 0

    def __call__(self, x):
        return self.coerce(x)

    def coerce(self, x):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    @property
    def i(self):
        """A square root of -1, or None when the ring has none."""
        return None

    def from_fraction(self, num: int, den: int = 1):
        return self.coerce(num) / self.coerce(den)

    def __repr__(self):
        return self.tag


class _RationalField(Ring):
    tag = "Q"

    def coerce(self, x):
        if type(x) is GaussianRational:
            if x.im:
                raise RingMismatch("non-real Gaussian rational in QQ")
            return x.re
        if isinstance(x, (FpElement, FpIElement)):
            _mismatch(self, x)
        if isinstance(x, str):
            return self.parse(x)
        return mpq(x)

    def contains(self, x):
        return type(x) is type(mpq(0))

    def parse(self, text: str):
        return _parse_rational(text)

    def format(self, x) -> str:
        return _fmt_rational(x)

    def to_complex(self, x) -> complex:
        return complex(float(x))


class _GaussianRationalField(Ring):
    tag = "QI"

    def coerce(self, x):
        if type(x) is GaussianRational:
            return x
        if isinstance(x, (FpElement, FpIElement)):
            _mismatch(self, x)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, complex):
            raise RingError("floating-point scalars are not exact")
        return GaussianRational(mpq(x), 0)

    def contains(self, x):
        return type(x) is GaussianRational

    @property
    def i(self):
        return GaussianRational(0, 1)

    def parse(self, text: str):
        re_part, im_part = _split_complex(text)
        im = _parse_rational(im_part) if im_part is not None else mpq(0)
        re_val = _parse_rational(re_part) if re_part.strip() else mpq(0)
        return GaussianRational(re_val, im)

    def format(self, x) -> str:
        a, b = x.re, x.im
        if not b:
            return _fmt_rational(a)
        im = "i" if b == 1 else "-i" if b == -1 else f"{_fmt_rational(b)}i"
        if not a:
            return im
        sign = "" if im.startswith("-") else "+"
        return f"{_fmt_rational(a)}{sign}{im}"

    def to_complex(self, x) -> complex:
        return complex(float(x.re), float(x.im))


QQ = _RationalField()
QQI = _GaussianRationalField()


class _PrimeField(Ring):
    def __init__(self, p: int):
        if p < 2 or not is_prime(p):
            raise RingError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.tag = f"Fp({p})"

    def coerce(self, x):
        if type(x) is FpElement:
            if x.p != self.p:
                _mismatch(self, x)
            return x
        if isinstance(x, FpIElement) or type(x) is GaussianRational:
            if type(x) is GaussianRational and not x.im:
                x = x.re
            else:
                _mismatch(self, x)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, int):
            return FpElement(x, self.p)
        q = mpq(x)
        return FpElement(int(q.numerator), self.p) / FpElement(int(q.denominator), self.p)

    def contains(self, x):
        return type(x) is FpElement and x.p == self.p

    @property
    def i(self):
        r = _sqrt_minus_one(self.p)
        return None if r is None else FpElement(r, self.p)

    def parse(self, text: str):
        s = text.strip()
        m = re.fullmatch(r"(.*?)\s*mod\s*(\d+)", s)
        if m:
            if int(m.group(2)) != self.p:
                raise RingMismatch(f"residue mod {m.group(2)} in GF({self.p})")
            s = m.group(1)
        re_part, im_part = _split_complex(s)
        val = self.coerce(_parse_rational(re_part)) if re_part.strip() else self.zero
        if im_part is not None:
            if self.i is None:
                raise RingError(f"GF({self.p}) has no square root of -1; use GFI({self.p})")
            val = val + self.coerce(_parse_rational(im_part)) * self.i
        return val

    def format(self, x) -> str:
        return str(x.v)

    def format_scalar(self, x) -> str:
        return f"{x.v} mod {self.p}"

    def __eq__(self, o):
        return isinstance(o, _PrimeField) and o.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


class _PrimeFieldI(Ring):
    def __init__(self, p: int):
        if p < 2 or not is_prime(p):
            raise RingError(f"{p} is not prime")
        if _sqrt_minus_one(p) is not None:
            raise RingError(f"-1 is a square mod {p}; use GF({p}) whose i is a residue")
        self.p = p
        self.characteristic = p
        self.tag = f"FpI({p})"

    def coerce(self, x):
        if type(x) is FpIElement:
            if x.p != self.p:
                _mismatch(self, x)
            return x
        if type(x) is FpElement:
            if x.p != self.p:
                _mismatch(self, x)
            return FpIElement(x.v, 0, self.p)
        if type(x) is GaussianRational:
            return self.coerce(x.re) + self.coerce(x.im) * self.i
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, int):
            return FpIElement(x, 0, self.p)
        q = mpq(x)
        return FpIElement(int(q.numerator), 0, self.p) / FpIElement(int(q.denominator), 0, self.p)

    def contains(self, x):
        return type(x) is FpIElement and x.p == self.p

    @property
    def i(self):
        return FpIElement(0, 1, self.p)

    def parse(self, text: str):
        s = text.strip()
        m = re.fullmatch(r"(.*?)\s*mod\s*(\d+)", s)
        if m:
            if int(m.group(2)) != self.p:
                raise RingMismatch(f"residue mod {m.group(2)} in GF({self.p})[i]")
            s = m.group(1)
        re_part, im_part = _split_complex(s)
        val = self.coerce(_parse_rational(re_part)) if re_part.strip() else self.zero
        if im_part is not None:
            val = val + self.coerce(_parse_rational(im_part)) * self.i
        return val

    def format(self, x) -> str:
        if not x.b:
            return str(x.a)
        im = "i" if x.b == 1 else f"{x.b}i"
        return im if not x.a else f"{x.a}+{im}"

    def format_scalar(self, x) -> str:
        return f"{self.format(x)} mod {self.p}"

    def __eq__(self, o):
        return isinstance(o, _PrimeFieldI) and o.p == self.p

    def __hash__(self):
        return hash(("FpI", self.p))


def _sqrt_minus_one(p: int):
    if p == 2:
        return 1
    if p % 4 == 3:
        return None
    # i = g^((p-1)/4) for any non-residue g
    for g in range(2, p):
        if pow(g, (p - 1) // 2, p) == p - 1:
            r = pow(g, (p - 1) // 4, p)
            return min(r, p - r)
    return None


@functools.lru_cache(maxsize=None)
def GF(p: int) -> Ring:
    """The prime field with ``p`` elements."""
    return _PrimeField(p)


@functools.lru_cache(maxsize=None)
def GFI(p: int) -> Ring:
    """GF(p)[i] for p = 3 mod 4, i.e. GF(p^2) presented with i^2 = -1."""
    return _PrimeFieldI(p)


def ring_of(x) -> Ring:
    t = type(x)
    if t is GaussianRational:
        return QQI
    if t is FpElement:
        return GF(x.p)
    if t is FpIElement:
        return GFI(x.p)
    if t is type(mpq(0)) or isinstance(x, int):
        return QQ
    raise RingError(f"not an exact scalar: {x!r}")


def parse_scalar(text: str, ring: Ring | None = None):
    """Parse ``3/2``, ``3/2+1/2i`` or ``4 mod 7``; the ring is inferred if omitted."""
    if ring is not None:
        return ring.parse(text)
    m = re.fullmatch(r"(.*?)\s*mod\s*(\d+)", text.strip())
    if m:
        return GF(int(m.group(2))).parse(text)
    if text.strip().rstrip(")").endswith("i"):
        return QQI.parse(text)
    return QQ.parse(text)


def format_scalar(x) -> str:
    ring = ring_of(x)
    if hasattr(ring, "format_scalar"):
        return ring.format_scalar(x)
    return ring.format(x)


def bilinear(u: Sequence, v: Sequence):
    """The symmetric bilinear form ``sum(u_i * v_i)`` (no conjugation)."""
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    if not u:
        return 0
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        acc = acc + a * b
    return acc


def qi_sqrt(w) -> GaussianRational | None:
    """Exact square root in QQ(i), or None if ``w`` is not a square there."""
    w = QQI.coerce(w)
    a, b = w.re, w.im
    if not a and not b:
        return GaussianRational(0, 0)
    mod = _rational_sqrt(a * a + b * b)
    if mod is None:
        return None
    x2 = (a + mod) / 2
    x = _rational_sqrt(x2)
    if x is not None and x:
        return GaussianRational(x, b / (2 * x))
    y = _rational_sqrt((mod - a) / 2)
    if y is None or not y:
        return None
    return GaussianRational(b / (2 * y), y)


def _rational_sqrt(q):
    q = mpq(q)
    if q < 0:
        return None
    num, den = mpz(q.numerator), mpz(q.denominator)
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return mpq(rn, rd)
    return None


# --------------------------------------------------------------------------
# Exact linear algebra over field scalars

def _echelon(rows: Iterable[Sequence], ring: Ring):
    mat = [[ring.coerce(x) for x in row] for row in rows]
    if not mat:
        return mat, []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = ring.one / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def rank(rows: Iterable[Sequence], ring: Ring) -> int:
    """Exact rank of a scalar matrix over a field ring."""
    return len(_echelon(rows, ring)[1])


def solve(mat: Sequence[Sequence], ring: Ring) -> list[list]:
    """Inverse of a square scalar matrix; raises ZeroDivisionError if singular."""
    n = len(mat)
    aug = [list(row) + [ring.one if i == j else ring.zero for j in range(n)]
           for i, row in enumerate(mat)]
    red, pivots = _echelon(aug, ring)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red[:n]]
