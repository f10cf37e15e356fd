"""Seeded example generators and the built-in corpus of harmonic specs.

Families:

* ``isotropic``: forms drawn from a totally isotropic subspace (pairwise
  orthogonal isotropic vectors).  Every such P is HN and self-inverting.
* ``star``: d = 3 specs ``a h_v^3 + b[(h_u + s h_w)^3 - (h_u - s h_w)^3 - 2 s^3 h_w^3]``
  with u, w spanning a totally isotropic plane and ``<v, w> != 0``.  Found by
  a random search over coefficients filtered with :func:`is_hn_direct`; the
  survivors are HN but not self-inverting.
* ``generic``: random isotropic vectors and coefficients (usually not HN).

Coordinates are mixed with rational rotations built from Pythagorean triples,
which preserve the bilinear form and hence every property above.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources

from gmpy2 import mpq

from .harmonic import DependentForms, HarmonicSpec, build_graph, spec_from_json
from .hn import grad_pairing, is_hn_direct
from .poly import Poly
from .scalars import QQ, QQI, Ring, bilinear, qi_sqrt

__all__ = [
    "CorpusEntry", "gen_isotropic", "gen_orthogonal", "rotate", "gen_hn_spec", "gen_random_spec",
    "gen_block_pair", "random_poly", "random_homogeneous", "random_hn_poly", "compose_linear",
    "builtin_corpus", "load_corpus",
    "corpus_to_json",
]

_TRIPLES = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25))


def _gauss(rng: random.Random, lo: int = -3, hi: int = 3, imag: bool = True):
    re = rng.randint(lo, hi)
    im = rng.randint(lo, hi) if imag else 0
    return QQI.coerce(re) + (QQI.i * im if im else 0)


def gen_isotropic(n: int, seed: int = 0, attempts: int = 60) -> tuple:
    """A nonzero vector with ``<alpha, alpha> = 0`` over QQ(i)."""
    if n < 2:
        raise ValueError("the only isotropic vector in dimension 1 is zero")
    rng = random.Random(seed)
    i = QQI.i
    if n == 2:
        a = _gauss(rng, 1, 3, imag=False)
        return (a, a * i if rng.random() < 0.5 else -a * i)
    for _ in range(attempts):
        head = [_gauss(rng, imag=rng.random() < 0.5) for _ in range(n - 1)]
        s = sum((x * x for x in head), QQI.zero)
        root = qi_sqrt(-s)
        if root is not None and (any(head) or root):
            vec = tuple(head) + (root if rng.random() < 0.5 else -root,)
            if any(vec) and not bilinear(vec, vec):
                return vec
    # structured fallback: (a, +-i a) on random coordinate pairs
    vec = [QQI.zero] * n
    idx = list(range(n))
    rng.shuffle(idx)
    for j in range(0, n - 1, 2):
        if j == 0 or rng.random() < 0.5:
            a = _gauss(rng, 1, 3, imag=False)
            vec[idx[j]] = a
            vec[idx[j + 1]] = a * i if rng.random() < 0.5 else -a * i
    return tuple(vec)


def gen_orthogonal(n: int, seed: int = 0, planes: int = 2) -> list[list]:
    """Rational orthogonal matrix: a product of plane rotations with Pythagorean entries."""
    rng = random.Random(seed)
    M = [[QQ.coerce(1 if r == c else 0) for c in range(n)] for r in range(n)]
    if n < 2:
        return M
    for _ in range(planes):
        a, b, c = rng.choice(_TRIPLES)
        p, q = rng.sample(range(n), 2)
        cs, sn = mpq(a, c), mpq(b, c) * rng.choice((1, -1))
        for r in range(n):
            x, y = M[r][p], M[r][q]
            M[r][p], M[r][q] = cs * x - sn * y, sn * x + cs * y
    return M


def rotate(vec, O) -> tuple:
    return tuple(sum((QQI.coerce(O[r][c]) * vec[c] for c in range(len(vec))), QQI.zero)
                 for r in range(len(vec)))


def _unit(n, j, ring=QQI):
    return tuple(ring.one if k == j else ring.zero for k in range(n))


def _comb(coeffs, vecs):
    n = len(vecs[0])
    return tuple(sum((c * v[k] for c, v in zip(coeffs, vecs)), QQI.zero) for k in range(n))


def _isotropic_basis(n: int) -> list[tuple]:
    """``e_{2j} + i e_{2j+1}``: a maximal totally isotropic family."""
    i = QQI.i
    out = []
    for j in range(n // 2):
        v = [QQI.zero] * n
        v[2 * j], v[2 * j + 1] = QQI.one, i
        out.append(tuple(v))
    return out


def _coefficient(rng):
    return QQI.coerce(mpq(rng.choice((1, -1, 2, -2, 3)), rng.choice((1, 1, 2))))


def _spec_or_none(n, d, forms):
    try:
        return HarmonicSpec(n, d, tuple(forms))
    except DependentForms:
        return None


def gen_hn_spec(n: int, d: int, k: int, seed: int = 0, kind: str = "isotropic",
                max_tries: int = 400) -> HarmonicSpec:
    """An HN spec; ``kind`` is ``isotropic`` (self-inverting) or ``star`` (d = 3, n >= 4, k = 4)."""
    rng = random.Random(seed)
    O = gen_orthogonal(n, seed + 7919, planes=rng.randint(1, 3))
    if kind == "isotropic":
        basis = _isotropic_basis(n)
        if not basis:
            raise ValueError("no isotropic vectors in dimension 1")
        if len(basis) == 1 and k > 1:
            raise ValueError("one isotropic direction carries a single independent d-th power")
        for _ in range(max_tries):
            forms = []
            for _ in range(k):
                coeffs = [QQI.coerce(rng.randint(-2, 2)) for _ in basis]
                if not any(coeffs):
                    coeffs[0] = QQI.one
                forms.append((_coefficient(rng), rotate(_comb(coeffs, basis), O)))
            spec = _spec_or_none(n, d, forms)
            if spec is not None:
                _validate_hn(spec, want_self_inverting=True)
                return spec
        raise RuntimeError("could not draw independent isotropic forms")
    if kind == "star":
        if d != 3 or n < 4 or k != 4:
            raise ValueError("star family needs d = 3, n >= 4, k = 4")
        i = QQI.i
        e = [_unit(n, j) for j in range(4)]
        u = _comb([1, i], e[:2])
        w = _comb([1, -i], e[2:])
        v = _comb([1, i], e[2:])
        s_choices = (QQI.one, QQI.coerce(2), QQI.coerce(-1), QQI.coerce(mpq(1, 2)))
        for _ in range(max_tries):
            s = rng.choice(s_choices)
            vecs = [v, w, _comb([1, s], [u, w]), _comb([1, -s], [u, w])]
            cs = [_coefficient(rng) for _ in range(3)]
            # the w-coefficient is drawn from a short list; HN survives only for one value
            cw = rng.choice([-2 * s ** 3 * cs[1], 2 * s ** 3 * cs[1], cs[1], -cs[1], 2 * cs[0]])
            forms = [(cs[0], v), (cw, w), (cs[1], vecs[2]), (cs[2], vecs[3])]
            forms = [(c, rotate(a, O)) for c, a in forms]
            spec = _spec_or_none(n, d, forms)
            if spec is None:
                continue
            P = spec.assemble()
            if is_hn_direct(P) and grad_pairing(P) and build_graph(spec).edges:
                return spec
        raise RuntimeError("filtered search found no HN star spec")
    raise ValueError(f"unknown family {kind!r}")


def _validate_hn(spec: HarmonicSpec, want_self_inverting: bool):
    P = spec.assemble()
    if not is_hn_direct(P):
        raise AssertionError("generated spec is not HN")
    if want_self_inverting and grad_pairing(P):
        raise AssertionError("generated spec is not self-inverting")


def gen_random_spec(n: int, d: int, k: int, seed: int = 0, max_tries: int = 200) -> HarmonicSpec:
    """Random isotropic forms with random coefficients (no HN requirement)."""
    if n == 2 and k > 2:
        raise ValueError("the plane has only two isotropic directions, so k <= 2")
    rng = random.Random(seed)
    for _ in range(max_tries):
        forms = [(_coefficient(rng), gen_isotropic(n, rng.randrange(1 << 30))) for _ in range(k)]
        spec = _spec_or_none(n, d, forms)
        if spec is not None:
            return spec
    raise RuntimeError("could not draw an independent spec")


def gen_block_pair(n: int, d: int, seed: int = 0, sizes: tuple | None = None,
                   kind: str = "generic"):
    """Two specs on complementary coordinate blocks, then rotated together.

    Every vector of one block is orthogonal to every vector of the other, so
    the two assembled polynomials are disjoint.  ``kind="isotropic"`` draws
    HN blocks, ``generic`` draws arbitrary isotropic forms.
    """
    rng = random.Random(seed)
    if sizes is None:
        a = rng.randint(2, n - 2)
        sizes = (a, n - a)
    a, b = sizes
    if a < 2 or b < 2 or a + b > n:
        raise ValueError("each block needs at least two coordinates")
    O = gen_orthogonal(n, seed + 104729, planes=rng.randint(1, 3))

    def block(offset, size):
        k = rng.randint(1, 2) if (size >= 4 or kind != "isotropic") else 1
        sub_seed = rng.randrange(1 << 30)
        if kind == "isotropic":
            sub = gen_hn_spec(size, d, k, sub_seed, "isotropic")
        else:
            try:
                sub = gen_random_spec(size, d, k, sub_seed)
            except RuntimeError:
                sub = gen_random_spec(size, d, 1, sub_seed)
        forms = []
        for c, alpha in sub.forms:
            full = [QQI.zero] * n
            full[offset:offset + size] = alpha
            forms.append((c, rotate(tuple(full), O)))
        return HarmonicSpec(n, d, tuple(forms))

    return block(0, a), block(a, b)


def random_poly(n: int, d: int, seed: int = 0, ring: Ring = QQ, terms: int | None = None,
                min_degree: int = 0, coeff_range: int = 3) -> Poly:
    """Sparse random polynomial with small coefficients and degrees in ``min_degree..d``."""
    rng = random.Random(seed)
    if terms is None:
        terms = rng.randint(1, 6)
    out = {}
    for _ in range(terms):
        deg = rng.randint(min_degree, d)
        e = [0] * n
        for _ in range(deg):
            e[rng.randrange(n)] += 1
        if ring is QQI:
            c = _gauss(rng, -coeff_range, coeff_range, imag=rng.random() < 0.5)
        elif ring is QQ:
            c = QQ.coerce(mpq(rng.randint(-coeff_range, coeff_range), rng.choice((1, 1, 2, 3))))
        else:
            c = ring.coerce(rng.randint(-coeff_range, coeff_range))
        out[tuple(e)] = out.get(tuple(e), ring.zero) + c
    return Poly(n, ring, {e: c for e, c in out.items() if c})


def random_homogeneous(n: int, d: int, seed: int = 0, ring: Ring = QQ, terms: int | None = None) -> Poly:
    rng = random.Random(seed)
    P = Poly(n, ring)
    while not P:
        P = random_poly(n, d, rng.randrange(1 << 30), ring, terms, min_degree=d)
    return P


def compose_linear(f: Poly, forms: list[Poly]) -> Poly:
    """``f(h_1, ..., h_r)`` for linear forms ``h_j`` in a common set of variables."""
    n, ring = forms[0].n, forms[0].ring
    acc = Poly(n, ring)
    pw: dict = {}
    for e, c in f.terms.items():
        term = Poly.constant(n, ring, c)
        for j, x in enumerate(e):
            if x:
                if (j, x) not in pw:
                    pw[(j, x)] = forms[j] ** x
                term = term * pw[(j, x)]
        acc = acc + term
    return acc


def random_hn_poly(n: int, seed: int = 0, max_degree: int = 4) -> Poly:
    """A random polynomial in pairwise-orthogonal isotropic linear forms (hence HN), o(P) >= 2."""
    from .poly import linear_form
    if n < 2:
        raise ValueError("needs n >= 2")
    rng = random.Random(seed)
    O = gen_orthogonal(n, seed + 31, planes=rng.randint(0, 2))
    basis = [rotate(v, O) for v in _isotropic_basis(n)]
    r = rng.randint(1, len(basis))
    forms = [linear_form(v, QQI) for v in rng.sample(basis, r)]
    f = Poly(r, QQI)
    while not f:
        f = random_poly(r, max_degree, rng.randrange(1 << 30), QQI, min_degree=2)
    return compose_linear(f, forms)


# --------------------------------------------------------------------------
# built-in corpus

@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str
    seed: int
    spec: HarmonicSpec

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, "seed": self.seed, "spec": self.spec.to_dict()}


# (name, kind, n, d, k, seed)
_CORPUS_PLAN = [
    ("iso-n2-d3-k1", "isotropic", 2, 3, 1, 1),
    ("iso-n2-d4-k1", "isotropic", 2, 4, 1, 2),
    ("iso-n3-d3-k1", "isotropic", 3, 3, 1, 3),
    ("iso-n4-d3-k2", "isotropic", 4, 3, 2, 4),
    ("iso-n4-d4-k2", "isotropic", 4, 4, 2, 5),
    ("iso-n4-d4-k3", "isotropic", 4, 4, 3, 6),
    ("iso-n5-d3-k3", "isotropic", 5, 3, 3, 7),
    ("iso-n6-d3-k4", "isotropic", 6, 3, 4, 8),
    ("iso-n6-d4-k3", "isotropic", 6, 4, 3, 9),
    ("iso-n6-d4-k4", "isotropic", 6, 4, 4, 10),
    ("star-n4-d3-a", "star", 4, 3, 4, 11),
    ("star-n4-d3-b", "star", 4, 3, 4, 12),
    ("star-n5-d3", "star", 5, 3, 4, 13),
    ("star-n6-d3", "star", 6, 3, 4, 14),
    ("gen-n3-d3-k2", "generic", 3, 3, 2, 15),
    ("gen-n3-d3-k3", "generic", 3, 3, 3, 16),
    ("gen-n3-d4-k2", "generic", 3, 4, 2, 17),
    ("gen-n4-d3-k3", "generic", 4, 3, 3, 18),
    ("gen-n4-d4-k2", "generic", 4, 4, 2, 19),
    ("gen-n5-d3-k2", "generic", 5, 3, 2, 20),
]


def builtin_corpus() -> list[CorpusEntry]:
    """Regenerates the shipped corpus from its seeds."""
    out = []
    for name, kind, n, d, k, seed in _CORPUS_PLAN:
        if kind == "generic":
            spec = gen_random_spec(n, d, k, seed)
        else:
            spec = gen_hn_spec(n, d, k, seed, kind)
        out.append(CorpusEntry(name, kind, seed, spec))
    return out


def corpus_to_json(entries) -> str:
    return json.dumps([e.to_dict() for e in entries], indent=1)


def load_corpus() -> list[CorpusEntry]:
    """The fixed corpus shipped with the package."""
    text = resources.files("hnpoly").joinpath("data/corpus.json").read_text()
    return [CorpusEntry(o["name"], o["kind"], int(o["seed"]), spec_from_json(o["spec"]))
            for o in json.loads(text)]
