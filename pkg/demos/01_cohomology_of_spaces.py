"""Cohomology of small simplicial sets with finite coefficients.

Run with ``python demos/01_cohomology_of_spaces.py``.
"""

from etalecob.cochains import cohomology, les_check, relative_cohomology
from etalecob.finab import FinAb
from etalecob.simplicial import moore_space, product, skeleton, sphere, standard_simplex


def show(title, tab, top):
    groups = ", ".join(f"H^{n} = {tab.group(n)}" for n in range(top + 1))
    print(f"{title:28s} {groups}")


# Spheres: one generator in degree 0 and one in the top degree.
for m in (2, 5):
    show(f"S^1 with Z/{m}", cohomology(sphere(1, 4), m), 3)
    show(f"S^2 with Z/{m}", cohomology(sphere(2, 4), m), 3)

# The Moore space S^1 with a 2-cell attached by degree 2 sees Z/2 torsion.
# With Z/4 coefficients the torsion shows up as Z/2 in degrees 1 and 2.
X = moore_space(2, 4)
show("Moore(2) with Z/4", cohomology(X, 4), 3)
show("Moore(2) with Z/3", cohomology(X, 3), 3)

# Coefficients need not be cyclic.
show("Moore(2) with Z/2+Z/4", cohomology(X, FinAb.parse("Z/2+Z/4")), 2)

# The torus built as a product of two circles.
T = product(sphere(1, 3), sphere(1, 3))
show("S^1 x S^1 with Z/3", cohomology(T, 3), 2)

# Reduced cohomology is taken relative to the basepoint.
show("S^2 reduced, Z/7", cohomology(sphere(2, 4), 7, reduced=True), 3)

# Relative cohomology of (Delta[1], its endpoints) is a suspension class.
D1 = standard_simplex(1, 4)
_, ends = skeleton(D1, 0)
show("(Delta[1], endpoints), Z/5", relative_cohomology(D1, ends, 5), 2)

# The long exact sequence of a pair is checked numerically, map by map.
_, inc = skeleton(T, 1)
print("LES exact for (torus, 1-skeleton) with Z/6:", bool(les_check(T, inc, 6)))
