"""Free modules over a base, Chern classes and the Thom class relation."""

from etalecob.catalog import (Coefficient, base_ring_data, catalog, chern_classes, chern_relation, etale_theory,
                              projective_bundle_module, thom_class)
from etalecob.coefficients import GradedCoefficients
from etalecob.finab import FinAb

# Over a point the module for a rank-3 bundle has the orders of P^2.
C = GradedCoefficients("MU", 3)
point = base_ring_data(etale_theory(catalog("strict_henselian"), C, (-14, 6)))
M = projective_bundle_module(point, 3)
P2 = etale_theory(catalog("Pn(2)", ell=3), C, (-4, 4))
for m in range(-4, 5):
    print(f"degree {m:2d}: module order {M.order(m):6d}   P^2 order {P2.order(m)}")

# A toy base with classes in positive degrees, so Chern classes can be nonzero.
base = {0: FinAb.cyclic(5), 2: FinAb.cyclic(5), 4: FinAb.free(5, 2)}
N = projective_bundle_module(base, 2, [(3,), (1, 4)])  # xi^2 = 3 xi + (1, 4)
c1, c2 = chern_classes(N)
print("c_1 =", c1.coords, " c_2 =", c2.coords)
print("relation sum (-1)^i c_i xi^(n-i) reduces to zero:", chern_relation(N, [c1, c2]).is_zero())

x, image = thom_class(2, [Coefficient(2, base[2], (1,)), Coefficient(4, base[4], (2, 3))], base)
print("Thom element:", x)
print("its image in the rank-2 module is zero:", image.is_zero())
