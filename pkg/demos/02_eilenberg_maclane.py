"""The representing objects L(M, n) and K(M, n).

Simplicial maps X -> L(M, n) are n-cochains on X, and maps into K(M, n)
are n-cocycles.  The script checks both statements on small examples.
"""

from etalecob.cochains import cohomology
from etalecob.em import build_K, build_L, differential_map, representability_check
from etalecob.simplicial import boundary_simplex, moore_space, sphere

L = build_L(3, 1, 2)
print("L(Z/3, 1) level sizes:", L.carrier.sizes)
K = build_K(2, 1, 4)
print("K(Z/2, 1) level sizes:", K.carrier.sizes)

# K(Z/2, 1) is a model of BZ/2, so every degree carries one Z/2.
tab = cohomology(K.carrier, 2)
print("H^*(K(Z/2,1); Z/2) up to degree 3:", [str(tab.group(n)) for n in range(4)])

# delta: L(M, n) -> K(M, n+1) is a simplicial map
f = differential_map(3, 0, 3)
f.validate()
print("delta: L(Z/3,0) -> K(Z/3,1) is simplicial; image sizes per level:",
      [len(set(m.tolist())) for m in f.level_maps])

for name, X, M, n in [("S^1", sphere(1, 2), 2, 1), ("boundary of Delta[2]", boundary_simplex(2, 2), 3, 1),
                      ("Moore(2)", moore_space(2, 2), 2, 2)]:
    ok = representability_check(X, M, n)
    print(f"maps {name} -> L(Z/{M},{n}) match C^{n}(X; Z/{M}): {ok}")
