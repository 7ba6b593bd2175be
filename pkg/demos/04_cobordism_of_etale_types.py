"""Cobordism and related theories of the catalog entries via the spectral sequence."""

from etalecob.catalog import catalog, etale_theory
from etalecob.coefficients import GradedCoefficients


def show(title, report, lo, hi):
    print(f"== {title}: {report.status}; certificates {report.certificates}")
    for n in range(lo, hi + 1):
        d = report[n]
        shown = str(d.group) if d.status == "RESOLVED" else d.status
        print(f"   degree {n:3d}: {shown}")
    for note in report.notes:
        print("   note:", note)


MU = GradedCoefficients("MU", 2, 2)
show("point, MU mod 4", etale_theory(catalog("strict_henselian"), MU, (-8, 0)), -8, 0)
show("finite field F_7, reduced MU mod 4",
     etale_theory(catalog("finite_field(7)", ell=2), MU, (-7, 1), reduced=True), -7, 1)

# For P^n with Z/ell coefficients the splitting flag comes from the projective bundle formula.
show("P^2, MU mod 3", etale_theory(catalog("Pn(2)", ell=3), GradedCoefficients("MU", 3), (-6, 0)), -6, 0)

show("local field, q = 5, reduced MU mod 4",
     etale_theory(catalog("local_field(5)", ell=2, nu=2), MU, (-5, 2), reduced=True), -5, 2)

K1 = GradedCoefficients.parse("MoravaK(1)", 3)
show("finite field F_7, K(1) at 3", etale_theory(catalog("finite_field(7)", ell=3), K1, (-4, 4)), -4, 4)

# A truncated tower leaves the high degrees undetermined instead of guessing.
# With MU every degree can receive classes from the missing columns; HZ cannot.
show("G_m, HZ mod 2", etale_theory(catalog("Gm", ell=2), GradedCoefficients("HZ", 2), (0, 3)), 0, 3)
show("G_m, MU mod 2", etale_theory(catalog("Gm", ell=2), GradedCoefficients("MU", 2), (-2, 3)), -2, 3)
