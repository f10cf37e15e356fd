"""
Prime characteristic: the boundary of the vanishing bound
=========================================================

Over GF(p), Delta^m P^(m+1) = 0 once the degree of the surviving factor
P^r (r <= p-1) is below 2m.  At the boundary 2m = d(p-1) this can fail.
The smallest case is a linear form over GF(3): Delta z1^2 = 2.
"""
from hnpoly.charp import charp_strict_threshold, charp_threshold, vc_charp
from hnpoly.notation import parse_poly
from hnpoly.poly import laplacian
from hnpoly.scalars import GF

for p in (3, 5, 7):
    P = parse_poly("z1 + 2*z2", n=2, ring=GF(p))
    rep = vc_charp(P)
    flags = "".join("0" if f else "x" for f in rep.vanished)
    print(f"p={p} d=1  m>=d(p-1)/2 gives {charp_threshold(1, p)}, "
          f"2m>d(p-1) gives {charp_strict_threshold(1, p)}  "
          f"flags by m: {flags}  boundary ok: {rep.ok}  strict ok: {rep.strict_ok}")

print()
P = parse_poly("z1", n=1, ring=GF(3))
print("over GF(3): Delta z1^2 =", laplacian(P * P))

# higher degree at the same prime: the boundary may hold or fail
for text in ("z1^2 + z2^2", "z1^3", "z1^2*z2"):
    P = parse_poly(text, n=2, ring=GF(3))
    rep = vc_charp(P)
    print(f"{text:>12} over GF(3): {rep.summary()}  strict ok: {rep.strict_ok}")
