"""
Where the termwise bound on Q_[m] breaks
========================================

For a homogeneous P we compare |Q_[m](a)| on B(0, r) with

    n^(m-1) |P|_{S(0,2r)}^m / (2^(m-1) r^(2m-2)).

In two variables the factor n^(m-1) leaves plenty of room.  In one
variable it is gone, and a plain power z1^3 crosses the bound at m = 6,
with z1^4 following at m = 7.
"""
import numpy as np

from hnpoly.notation import parse_poly
from hnpoly.inversion import qpair_recursive
from hnpoly.radius import qm_bound_check

M = 8
for text, n in (("(z1 + i*z2)^3", 2), ("z1^3", 2), ("z1^3", 1), ("z1^4", 1)):
    P = parse_poly(text, n=n)
    Q = qpair_recursive(P, M).Q
    rep = qm_bound_check(P, r=1.0, m_max=M, samples=2000, Q=Q)
    ratios = np.array(rep.worst_ratio)
    print(f"{text:>14} n={n}: worst ratio per m = {np.round(ratios, 3)}")
    if rep.violations:
        m, val, bound, pt = rep.violations[0]
        print(f"{'':>18}  first violation at m={m}: |Q| = {val:.4g} > {bound:.4g}")
    else:
        print(f"{'':>18}  bound holds through m={M}")

# in one variable Q_[m] for z1^3 is a single monomial c_m z1^(m+2); compare c_m with 2 * 4^m
P = parse_poly("z1^3", n=1)
Q = qpair_recursive(P, M).Q
print()
for m in range(1, M + 1):
    print(f"Q_[{m}] for z1^3: {Q[m - 1]}   bound at |a| = 1: {2 * 4 ** m}")
