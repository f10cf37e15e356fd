"""
A star-shaped HN cubic that is not self-inverting
=================================================

Four isotropic forms whose pairing graph is a star: the centre pairs with
each leaf and the leaves are mutually orthogonal.  The sum of cubes is HN
because every path in a star returns through the centre, yet P^2 is not
harmonic, so the inverse map is not just z - t grad P.
"""
from hnpoly.corpus import load_corpus
from hnpoly.harmonic import build_graph, components
from hnpoly.hn import is_hn_powers, self_inverting_harmonic_check
from hnpoly.poly import laplacian

stars = [e for e in load_corpus() if e.kind == "star"]
for entry in stars:
    spec = entry.spec
    P = spec.assemble()
    G = build_graph(spec)
    print(entry.name)
    print("  forms:", spec)
    print("  edges:", sorted(G.edges))
    print("  components:", components(G))
    print("  HN:", bool(is_hn_powers(P)))
    print("  Delta P^2 == 0:", not laplacian(P * P))
    print("  self-inverting:", self_inverting_harmonic_check(P))
