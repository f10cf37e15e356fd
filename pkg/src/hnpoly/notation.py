"""Text and JSON forms of scalars and polynomials.

Polynomial grammar (whitespace is ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := ('+'|'-') unary | power
    power  := atom [('^'|'**') INT]
    atom   := NUMBER ['i'] | 'i' | 'z' INT | 't' | '(' expr ')'
    NUMBER := INT ['/' INT]

``3/2i`` is the single literal ``(3/2)*i``; the right operand of ``/`` must be
constant.  Variables are ``z1 .. zn`` (1-based); ``t`` is accepted when
``t_var=True`` and becomes an extra last variable.  Examples::

    (3/2+1/2i)*z1^2*z2 + z3
    (z1+i*z2)^3
    4*z1^2 + 3*z2          (with ring=GF(7))
"""
from __future__ import annotations

from typing import Any

from gmpy2 import mpq

from .poly import Poly
from .scalars import GF, GFI, QQ, QQI, Ring, format_scalar, parse_scalar

__all__ = [
    "PolyParseError", "parse_poly", "format_poly", "poly_to_json", "poly_from_json",
    "ring_to_json", "ring_from_json", "parse_scalar", "format_scalar",
]


class PolyParseError(ValueError):
    """Syntax error in polynomial text; ``pos`` is the 0-based offset."""

    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos}: {text[:pos]}<<>>{text[pos:]}")
        self.pos = pos


class _Parser:
    def __init__(self, text: str, n: int, ring: Ring, t_var: bool):
        self.s = text
        self.k = 0
        self.n = n + (1 if t_var else 0)
        self.nz = n
        self.ring = ring
        self.t_var = t_var

    def error(self, msg):
        raise PolyParseError(msg, self.s, self.k)

    def skip(self):
        while self.k < len(self.s) and self.s[self.k].isspace():
            self.k += 1

    def peek(self, tok: str) -> bool:
        self.skip()
        return self.s.startswith(tok, self.k)

    def take(self, tok: str) -> bool:
        if self.peek(tok):
            self.k += len(tok)
            return True
        return False

    def integer(self) -> int:
        self.skip()
        j = self.k
        while j < len(self.s) and self.s[j].isdigit():
            j += 1
        if j == self.k:
            self.error("expected integer")
        val = int(self.s[self.k:j])
        self.k = j
        return val

    def parse(self) -> Poly:
        out = self.expr()
        self.skip()
        if self.k != len(self.s):
            self.error("unexpected input")
        return out

    def expr(self) -> Poly:
        neg = False
        if self.take("-"):
            neg = True
        elif self.take("+"):
            pass
        acc = self.term()
        if neg:
            acc = -acc
        while True:
            if self.take("+"):
                acc = acc + self.term()
            elif self.peek("-"):
                self.k += 1
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> Poly:
        acc = self.unary()
        while True:
            if self.peek("**"):
                self.error("misplaced power")
            if self.take("*"):
                acc = acc * self.unary()
            elif self.peek("/"):
                pos = self.k
                self.k += 1
                rhs = self.unary()
                if rhs.degree > 0:
                    self.k = pos
                    self.error("division by a non-constant")
                c = rhs.constant_term()
                if not c:
                    self.k = pos
                    self.error("division by zero")
                acc = acc / c
            else:
                return acc

    def unary(self) -> Poly:
        if self.take("-"):
            return -self.unary()
        if self.take("+"):
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.take("**") or self.take("^"):
            return base ** self.integer()
        return base

    def atom(self) -> Poly:
        self.skip()
        if self.k >= len(self.s):
            self.error("unexpected end of input")
        ch = self.s[self.k]
        if ch == "(":
            self.k += 1
            inner = self.expr()
            if not self.take(")"):
                self.error("expected ')'")
            return inner
        if ch.isdigit():
            num = self.integer()
            den = 1
            j = self.k
            if j < len(self.s) and self.s[j] == "/" and j + 1 < len(self.s) and self.s[j + 1].isdigit():
                self.k += 1
                den = self.integer()
                if den == 0:
                    self.error("zero denominator")
            c = self.ring.from_fraction(num, den)
            if self.k < len(self.s) and self.s[self.k] == "i" and not self._ident_follows():
                self.k += 1
                c = c * self.imag()
            return Poly.constant(self.n, self.ring, c)
        if ch == "i" and not self._ident_follows():
            self.k += 1
            return Poly.constant(self.n, self.ring, self.imag())
        if ch == "z":
            self.k += 1
            if self.k >= len(self.s) or not self.s[self.k].isdigit():
                self.error("expected variable index")
            j = self.integer()
            if not 1 <= j <= self.nz:
                self.k -= len(str(j))
                self.error(f"variable z{j} outside 1..{self.nz}")
            return Poly.var(self.n, self.ring, j - 1)
        if ch == "t" and self.t_var:
            self.k += 1
            return Poly.var(self.n, self.ring, self.n - 1)
        self.error(f"unexpected character {ch!r}")

    def _ident_follows(self) -> bool:
        j = self.k + 1
        return j < len(self.s) and (self.s[j].isalnum() or self.s[j] == "_")

    def imag(self):
        i = self.ring.i
        if i is None:
            self.error(f"ring {self.ring} has no square root of -1")
        return i


def _scan_max_var(text: str) -> int:
    best, j = 0, 0
    while j < len(text):
        if text[j] == "z" and j + 1 < len(text) and text[j + 1].isdigit():
            k = j + 1
            while k < len(text) and text[k].isdigit():
                k += 1
            best = max(best, int(text[j + 1:k]))
            j = k
        else:
            j += 1
    return best


def _mentions_i(text: str) -> bool:
    for j, ch in enumerate(text):
        if ch == "i" and not (j + 1 < len(text) and (text[j + 1].isalnum() or text[j + 1] == "_")):
            return True
    return False


def parse_poly(text: str, n: int | None = None, ring: Ring | None = None, *, t_var: bool = False) -> Poly:
    """Parse polynomial text.

    ``n`` defaults to the largest variable index that appears; ``ring``
    defaults to QQ(i) if ``i`` appears and QQ otherwise.
    """
    max_var = _scan_max_var(text)
    if n is None:
        n = max(max_var, 1)
    if ring is None:
        ring = QQI if _mentions_i(text) else QQ
    return _Parser(text, n, ring, t_var).parse()


def _var_name(names, idx):
    return names[idx] if names is not None else f"z{idx + 1}"


def format_poly(P: Poly, names: list[str] | None = None) -> str:
    """Canonical text form; ``parse_poly(format_poly(P), P.n, P.ring) == P``."""
    if not P.terms:
        return "0"
    pieces = []
    for exp, c in P.sorted_terms():
        mono = "*".join(
            _var_name(names, i) + (f"^{k}" if k > 1 else "")
            for i, k in enumerate(exp) if k)
        cs = P.ring.format(c)
        compound = ("+" in cs or "-" in cs[1:]) and not cs.startswith("(")
        if compound:
            cs = f"({cs})"
        if not mono:
            piece = cs
        elif cs == "1":
            piece = mono
        elif cs == "-1":
            piece = "-" + mono
        else:
            piece = f"{cs}*{mono}"
        pieces.append(piece)
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


# --------------------------------------------------------------------------
# JSON

def ring_to_json(ring: Ring) -> dict:
    if ring == QQ:
        return {"ring": "Q"}
    if ring == QQI:
        return {"ring": "QI"}
    if ring.tag.startswith("FpI"):
        return {"ring": "FpI", "p": ring.p}
    return {"ring": "Fp", "p": ring.p}


def ring_from_json(obj: dict) -> Ring:
    tag = obj.get("ring", "Q")
    if tag == "Q":
        return QQ
    if tag == "QI":
        return QQI
    if tag == "Fp":
        return GF(int(obj["p"]))
    if tag == "FpI":
        return GFI(int(obj["p"]))
    raise ValueError(f"unknown ring tag {tag!r}")


def _scalar_to_json(ring: Ring, c) -> dict:
    if ring == QQ:
        return {"c": str(mpq(c))}
    if ring == QQI:
        return {"re": str(c.re), "im": str(c.im)}
    if ring.tag.startswith("FpI"):
        return {"re": str(c.a), "im": str(c.b)}
    return {"c": str(c.v)}


def _scalar_from_json(ring: Ring, obj: dict):
    if "c" in obj:
        return ring.parse(str(obj["c"]))
    re_val = ring.parse(str(obj.get("re", "0")))
    im = str(obj.get("im", "0"))
    if not QQ.parse(im):
        return re_val
    i = ring.i
    if i is None:
        raise ValueError(f"ring {ring} has no imaginary unit")
    return re_val + ring.parse(im) * i


def poly_to_json(P: Poly) -> dict[str, Any]:
    out = {"n": P.n, **ring_to_json(P.ring)}
    out["terms"] = [{"exp": list(e), **_scalar_to_json(P.ring, c)} for e, c in P.sorted_terms()]
    return out


def poly_from_json(obj: dict) -> Poly:
    ring = ring_from_json(obj)
    n = int(obj["n"])
    terms: dict = {}
    for t in obj.get("terms", []):
        e = tuple(int(x) for x in t["exp"])
        c = _scalar_from_json(ring, t)
        terms[e] = terms[e] + c if e in terms else c
    return Poly(n, ring, terms)
