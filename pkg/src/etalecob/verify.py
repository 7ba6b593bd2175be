"""Self-check suites run by ``etalecob verify``.

Each suite is a list of named checks; a check is a zero-argument callable
returning a bool.  Everything is seeded, so a run is reproducible.
"""

from __future__ import annotations

import random

import numpy as np

from .coefficients import GradedCoefficients, mu_rank, partitions
from .complexes import brute_force_cohomology, cohomology_of_complex
from .finab import FinAb


def _simplicial():
    from .simplicial import count_maps, moore_space, product, smash, sphere, standard_simplex

    def identities():
        objs = [sphere(1, 4), sphere(2, 4), moore_space(2, 4), standard_simplex(2, 4),
                product(sphere(1, 3), sphere(1, 3)), smash(sphere(1, 3), sphere(1, 3))]
        for X in objs:
            X.validate()
        return True

    return [
        ("simplicial identities on sample objects", identities),
        ("census of S^1 smash S^1", lambda: smash(sphere(1, 3), sphere(1, 3)).census()[:3] == [1, 1, 2]),
        ("pointed maps S^1 -> Moore(2)", lambda: count_maps(sphere(1, 3), moore_space(2, 3), pointed=True) == 3),
    ]


def _algebra():
    from .snf import integer_snf, local_snf, matmul

    def random_snf():
        rng = random.Random(0)
        for _ in range(200):
            r, c = rng.randint(1, 6), rng.randint(1, 6)
            A = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
            res = integer_snf(A)
            if matmul(matmul(res.U, A), res.V) != res.D():
                return False
            d = res.diagonal
            if any(x <= 0 for x in d) or any(d[i + 1] % d[i] for i in range(len(d) - 1)):
                return False
        return True

    def local_vs_integer():
        rng = random.Random(1)
        for _ in range(100):
            r, c = rng.randint(1, 5), rng.randint(1, 5)
            A = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
            for p, e in ((2, 3), (3, 2)):
                got = sorted(p ** v for v in local_snf(A, p, e).valuations)
                want = sorted(np.gcd(x, p ** e) for x in integer_snf(A, transforms=False).diagonal
                              if np.gcd(x, p ** e) < p ** e)
                if got != want:
                    return False
        return True

    def routes_agree():
        from .cochains import differential
        from .simplicial import moore_space, sphere, standard_simplex
        for X in (sphere(1, 3), moore_space(2, 3), standard_simplex(1, 3)):
            deltas = [differential(X, 0), differential(X, 1)]
            for m in (4, 6, 9):
                local = cohomology_of_complex(deltas, m)
                if local != cohomology_of_complex(deltas, m, "integer"):
                    return False
                if local[1] != brute_force_cohomology(deltas, m, 1):
                    return False
        return True

    return [
        ("randomized SNF: U A V = D, divisibility chain", random_snf),
        ("local SNF agrees with integer SNF", local_vs_integer),
        ("local, integer and brute-force cohomology agree", routes_agree),
    ]


def _cochain():
    from .cochains import cohomology, les_check
    from .simplicial import basepoint_subobject, skeleton, sphere, standard_simplex

    def acyclic():
        for n in range(5):
            for m in (2, 3, 4, 6, 9):
                tab = cohomology(standard_simplex(n, n + 2), m)
                if tab.group(0) != FinAb.cyclic(m) or any(not tab.group(k).is_trivial()
                                                          for k in range(1, tab.top_degree + 1)):
                    return False
        return True

    def les():
        X = standard_simplex(2, 4)
        _, inc = skeleton(X, 1)
        _, vertices = skeleton(X, 0)
        S = sphere(2, 4)
        return les_check(X, inc, 6) and les_check(S, basepoint_subobject(S), 4) and les_check(X, vertices, 2)

    return [
        ("S^1 and S^2 tables", lambda: cohomology(sphere(1, 4), 5).groups == {0: FinAb.cyclic(5), 1: FinAb.cyclic(5),
                                                                              2: FinAb(), 3: FinAb()}
         and cohomology(sphere(2, 4), 5).groups == {0: FinAb.cyclic(5), 1: FinAb(), 2: FinAb.cyclic(5), 3: FinAb()}),
        ("simplices are acyclic", acyclic),
        ("long exact sequence of a pair", les),
    ]


def _em():
    from .cochains import cohomology
    from .em import build_K, representability_check
    from .simplicial import sphere, standard_simplex

    return [
        ("maps S^1 -> L(Z/2, 1) are cochains", lambda: representability_check(sphere(1, 2), 2, 1)),
        ("maps Delta[1] -> L(Z/3, 1) are cochains", lambda: representability_check(standard_simplex(1, 2), 3, 1)),
        ("H^*(K(Z/2, 1); Z/2)", lambda: all(g == FinAb.cyclic(2) for g in cohomology(build_K(2, 1, 4).carrier, 2).groups.values())),
    ]


def _galois():
    from .groups import MetacyclicGroup, bar_cohomology, h1_local_brute_force, local_field_cohomology, resolution_cohomology

    def bar_vs_resolution():
        for M in (2, 3, 6):
            # S_3, with r = -1 mod 3 chosen so that r^2 = 1 mod 3M
            G = MetacyclicGroup(3, 2, 3 * M - 1)
            a = bar_cohomology(G.group(), M, 3).groups
            b = resolution_cohomology(G, M, 3).groups
            if a != b:
                return False
        return True

    def local_h2():
        for q, ell, nu in ((5, 2, 2), (7, 3, 1)):
            tab = local_field_cohomology(q, ell, nu)
            if tab.group(2) != FinAb.cyclic(np.gcd(q - 1, ell ** nu)):
                return False
            if tab.group(1) != h1_local_brute_force(q, ell, nu):
                return False
        return True

    return [
        ("bar and periodic resolution agree on S_3", bar_vs_resolution),
        ("local fields: H^2 and brute-force H^1", local_h2),
    ]


def _ahss():
    from .catalog import catalog, identity_oracle
    from .simplicial import moore_space, product, sphere, standard_simplex
    from .ahss import run_ahss
    from .cochains import cohomology

    def em_oracle():
        spaces = [sphere(1, 4), sphere(2, 4), moore_space(2, 4), moore_space(3, 4),
                  standard_simplex(2, 4), product(sphere(1, 3), sphere(1, 3))]
        for X in spaces:
            for ell, nu in ((2, 1), (2, 2), (3, 1)):
                tab = cohomology(X, ell ** nu)
                top = tab.top_degree
                rep = run_ahss(tab, GradedCoefficients("HZ", ell, nu), (0, top))
                if any(rep.group(n) != tab.group(n) for n in range(top + 1)):
                    return False
        return all(identity_oracle(catalog(n, D=4), 2, 2) for n in ("point", "P1", "finite_field(3)"))

    def mu_point():
        tab = cohomology(standard_simplex(0, 3), 4)
        rep = run_ahss(tab, GradedCoefficients("MU", 2, 2), (-10, 0))
        return all(rep.group(n) == FinAb.free(4, mu_rank(n)) for n in range(-10, 1))

    def ranks():
        return all(mu_rank(-2 * i) == sum(1 for _ in partitions(i)) for i in range(21))

    return [
        ("HZ reproduces the input table", em_oracle),
        ("MU over a point", mu_point),
        ("MU ranks: pentagonal recurrence vs enumeration", ranks),
    ]


def _catalog():
    from .catalog import catalog, etale_theory, projective_bundle_module

    def two_paths():
        for ell in (2, 3):
            C = GradedCoefficients("MU", ell, 1)
            pt = etale_theory(catalog("point", D=2), C, (-12, 6))
            for n in (1, 2, 3):
                rep = etale_theory(catalog("Pn", n=n, ell=ell), C, (-2 * n, 2 * n))
                mod = projective_bundle_module(pt, n + 1)
                if any(rep.order(m) != mod.order(m) for m in range(-2 * n, 2 * n + 1)):
                    return False
        return True

    def torsion():
        ok = all(catalog(n, D=4).no_ell_torsion(ell, 2) for n in ("point", "P1") for ell in (2, 3))
        ok = ok and all(catalog("Pn", n=2, ell=ell, nu=2).no_ell_torsion(ell, 2) for ell in (2, 3))
        w = catalog("moore", ell=2, D=4).no_ell_torsion(2, 2)
        return ok and not w and w.witness == 1

    return [
        ("P^n: spectral sequence vs projective bundle module", two_paths),
        ("no ell-torsion on point, P^1, P^n; fails on Moore space", torsion),
    ]


SUITES = {
    "simplicial": _simplicial,
    "algebra": _algebra,
    "cochain": _cochain,
    "em": _em,
    "galois": _galois,
    "ahss": _ahss,
    "catalog": _catalog,
}


def run_suite(name: str) -> list[tuple[str, bool, str]]:
    """``[(check, passed, error message)]`` for one suite."""
    if name not in SUITES:
        raise KeyError(name)
    out = []
    for label, check in SUITES[name]():
        try:
            out.append((label, bool(check()), ""))
        except Exception as exc:  # a crashing check is a failing check
            out.append((label, False, f"{type(exc).__name__}: {exc}"))
    return out
