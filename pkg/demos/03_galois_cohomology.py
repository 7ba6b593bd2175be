"""Group cohomology from two models, and the Galois groups behind the catalog.

The bar complex works for any finite group; the periodic resolution of a
metacyclic group scales to the larger quotients used for local fields.
"""

from etalecob.catalog import catalog
from etalecob.groups import (FiniteGroup, MetacyclicGroup, bar_cohomology, h1_local_brute_force,
                             local_field_cohomology, resolution_cohomology)

for M in (2, 3):
    # S_3 as <tau> x| <sigma> with sigma tau sigma^-1 = tau^-1.  The resolution
    # needs a lift r of -1 with r^2 = 1 modulo 3 * M, so r = 3M - 1.
    S3 = MetacyclicGroup(3, 2, 3 * M - 1)
    bar = bar_cohomology(S3.group(), M, 3)
    res = resolution_cohomology(S3, M, 3)
    print(f"S_3 with Z/{M}: bar {[str(bar.group(i)) for i in range(4)]}  "
          f"resolution {[str(res.group(i)) for i in range(4)]}")

V = FiniteGroup.product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))
print("Klein four group, Z/2:", [str(bar_cohomology(V, 2, 3).group(i)) for i in range(4)])

# Local fields: the tame quotient tower stabilizes after a few stages.
for q, ell, nu in [(5, 2, 2), (7, 3, 1), (2, 3, 1)]:
    tab = local_field_cohomology(q, ell, nu)
    print(f"local field, residue F_{q}, Z/{ell ** nu}: "
          f"{[str(tab.group(i)) for i in range(4)]}  brute-force H^1 = {h1_local_brute_force(q, ell, nu)}")

# G_m is modeled by the tower K(Z/ell^t, 1); the colimit forgets the higher classes.
tab = catalog("Gm", ell=2, nu=1).cohomology(2)
print("G_m tower, Z/2:", {n: str(g) for n, g in tab.groups.items()}, "stabilized:", tab.stabilized)
