"""
Inverting z + t grad P for a harmonic cubic
===========================================

Q_[m] comes out the same from the recursion, the closed form, the tree
sum and direct inversion of the map.
"""
import time

from hnpoly.corpus import load_corpus
from hnpoly.notation import parse_poly
from hnpoly.hn import is_hn_powers
from hnpoly.inversion import qpair

# (z1 + i z2)^3 squares to a harmonic polynomial, so Q_[m] = 0 past m = 1
P = parse_poly("(z1 + i*z2)^3")
print("P =", P, " HN:", bool(is_hn_powers(P)))
print("Q_[1..3] =", [str(q) for q in qpair(P, 3).Q])
print()

# a star-shaped cubic in four variables has a genuinely nonzero tail
P = next(e.spec for e in load_corpus() if e.name == "star-n4-d3-b").assemble()
print("P has", len(P.terms), "terms; HN:", bool(is_hn_powers(P)))

M = 3
pairs = {}
for method in ("recursion", "closed", "tree", "map"):
    t0 = time.perf_counter()
    pairs[method] = qpair(P, M, method=method)
    print(f"  {method:>9}: {time.perf_counter() - t0:.2f}s")
for m in range(1, M + 1):
    q = pairs["recursion"][m]
    print(f"Q_[{m}]: degree {q.degree}, {len(q.terms)} terms")

same = all(pairs["recursion"].Q == pairs[k].Q for k in pairs)
print("all four methods agree:", same)

# a non-HN cubic still has a recursion, but the closed form no longer applies
R = parse_poly("z1^3 + z2^3")
print()
print("R =", R, " HN:", bool(is_hn_powers(R)))
rec, tree = qpair(R, M, "recursion"), qpair(R, M, "tree")
print("recursion == trees for R:", rec.Q == tree.Q)
