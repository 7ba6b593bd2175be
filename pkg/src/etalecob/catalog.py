"""Pinned étale homotopy types and the theories computed from them.

No scheme-to-space functor is implemented.  Each entry carries a model that
stands in for the étale type: a finite simplicial set, a tower of them, or
a bare cohomology table when only cohomology is known.  ``etale_theory``
runs such an entry through the spectral sequence.

The projective bundle algebra lives here too: free modules on ``1, xi, ...,
xi^{n-1}`` over given coefficient groups, Chern classes read off from the
relation for ``xi^n``, and the Thom element.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from . import config
from .ahss import AbutmentReport, analyze_differentials, assemble_abutment, build_e2, convergence_check
from .cochains import CohomologyTable, GroupHom, cohomology, no_ell_torsion, tower_cohomology
from .coefficients import GradedCoefficients
from .em import build_K
from .errors import ParameterError
from .finab import FinAb, is_prime, prime_power
from .groups import h1_local_brute_force, local_field_cohomology, nu0
from .simplicial import FinSimpSet, SimplicialMap, Tower, moore_space, point, sphere

NAMES = ("strict_henselian", "point", "Gm", "P1", "Pn", "finite_field", "local_field", "moore")

# largest level of K(Z/ell^t, 1) the Gm tower builds at D = 3
GM_LEVEL_CAP = 5000


@dataclass
class CatalogEntry:
    """An étale type stand-in.

    ``model`` is a :class:`FinSimpSet`, a :class:`Tower` or a
    :class:`CohomologyTable`.  Table entries are tied to one coefficient
    group and keep their reduction maps for the torsion test.
    """

    name: str
    params: dict
    model: object
    pointed: bool
    source: str
    reductions: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def kind(self) -> str:
        if isinstance(self.model, FinSimpSet):
            return "simplicial"
        if isinstance(self.model, Tower):
            return "tower"
        return "table"

    @property
    def label(self) -> str:
        shown = {k: v for k, v in self.params.items() if k not in ("ell", "nu", "D")}
        if not shown:
            return self.name
        return self.name + "(" + ", ".join(f"{k}={v}" for k, v in sorted(shown.items())) + ")"

    def cohomology(self, M, reduced: bool = False) -> CohomologyTable:
        """Cohomology of the model with coefficients ``M``."""
        if reduced and not self.pointed:
            raise ParameterError(f"{self.label} has no basepoint")
        if self.kind == "simplicial":
            return cohomology(self.model, M, reduced)
        if self.kind == "tower":
            return tower_cohomology(self.model, M, reduced)
        return _table_cohomology(self, M, reduced)

    def no_ell_torsion(self, ell: int, nu: int):
        if self.kind == "simplicial":
            return no_ell_torsion(self.model, ell, nu)
        if self.kind == "table" and self.reductions is not None:
            if self.model.coefficient != FinAb.cyclic(ell ** nu):
                raise ParameterError("table was built for a different modulus")
            return no_ell_torsion(self.reductions, ell, nu)
        raise ParameterError(f"no torsion test available for {self.label}")

    def to_json(self) -> dict:
        out = {"schema": 1, "name": self.name, "params": dict(self.params), "kind": self.kind,
               "pointed": self.pointed, "source": self.source}
        if self.kind == "simplicial":
            out["model"] = self.model.to_json()
        elif self.kind == "table":
            out["model"] = self.model.to_json()
        return out


def _table_cohomology(entry: CatalogEntry, M, reduced: bool) -> CohomologyTable:
    tab = entry.model
    M = M if isinstance(M, FinAb) else FinAb.cyclic(int(M))
    if M != tab.coefficient:
        raise ParameterError(f"{entry.label} is tabulated for {tab.coefficient}, not {M}")
    groups = dict(tab.groups)
    if reduced:
        # drop the summand of H^0 coming from the basepoint
        k = groups[0].rank
        groups[0] = FinAb.free(tab.coefficient.exponent, k - 1)
    return CohomologyTable(tab.coefficient, groups, reduced, tab.provenance, tab.top_degree,
                           tab.vanishes_above, tab.stabilized, list(tab.notes))


def _check_ell(ell, nu):
    if ell is None or not is_prime(ell):
        raise ParameterError(f"ell must be a prime, got {ell}")
    if nu is None or nu < 1:
        raise ParameterError("nu must be >= 1")


def _check_q(q, ell):
    try:
        p, _ = prime_power(q)
    except (ValueError, ParameterError):
        raise ParameterError(f"q = {q} is not a prime power") from None
    if ell is not None and p == ell:
        raise ParameterError(f"ell = {ell} divides q = {q}")


def projective_space_table(n: int, ell: int, nu: int) -> tuple[CohomologyTable, dict]:
    """``H^{2i} = Z/ell^nu`` for ``0 <= i <= n`` and the reduction maps to ``Z/ell``."""
    if n < 0:
        raise ParameterError("n must be >= 0")
    G = FinAb.cyclic(ell ** nu)
    groups = {d: (G if d % 2 == 0 else FinAb.trivial()) for d in range(2 * n + 1)}
    tab = CohomologyTable(G, groups, False, "projective bundle formula over a point", 2 * n, 2 * n)
    red = {}
    for d in range(2 * n + 1):
        if d % 2 == 0:
            red[d] = GroupHom([ell ** nu], [ell], np.ones((1, 1), dtype=np.int64))
        else:
            red[d] = GroupHom([], [], np.zeros((0, 0), dtype=np.int64))
    return tab, red


def gm_tower(ell: int, nu: int, depth: int = 3, D: int | None = None) -> Tower:
    """``K(Z/ell^t, 1)`` for ``t = nu .. nu + depth - 1`` with reduction bonds."""
    ts = list(range(nu, nu + depth))
    if D is None:
        D = 3 if (ell ** ts[-1]) ** 3 <= GM_LEVEL_CAP else 2
    Ks = [build_K(ell ** t, 1, D) for t in ts]
    bonds = []
    for small, big in zip(Ks[:-1], Ks[1:]):
        maps = [small.index(k, small.encode(k, big.digits(k) % small.size)) for k in range(D + 1)]
        bonds.append(SimplicialMap(big.carrier, small.carrier, maps))
    return Tower([K.carrier for K in Ks], bonds)


def _parse_name(name: str, params: dict) -> tuple[str, dict]:
    m = re.fullmatch(r"\s*(\w+)\s*\(\s*(\d+)\s*\)\s*", name)
    if m:
        key = {"Pn": "n", "finite_field": "q", "local_field": "q", "moore": "ell"}.get(m.group(1))
        if key is None:
            raise ParameterError(f"{m.group(1)} takes no argument")
        params = dict(params)
        params.setdefault(key, int(m.group(2)))
        return m.group(1), params
    return name.strip(), dict(params)


def catalog(name: str, **params) -> CatalogEntry:
    """Look up an entry by name.

    Accepted names: ``strict_henselian`` (alias ``point``), ``Gm``, ``P1``,
    ``Pn(n)``, ``finite_field(q)``, ``local_field(q)`` and ``moore(ell)``
    (the test space ``S^1`` with a 2-cell attached by degree ``ell``).
    ``ell``/``nu`` are needed by ``Gm``, ``Pn`` and ``local_field``;
    ``D`` sets the truncation of simplicial models.
    """
    name, params = _parse_name(name, params)
    D = params.get("D", config.DEFAULT_TRUNCATION)
    ell, nu = params.get("ell"), params.get("nu", 1)
    if name in ("strict_henselian", "point"):
        return CatalogEntry("strict_henselian", params, point(D), True,
                            "étale type of a strictly henselian local ring: contractible")
    if name == "P1":
        return CatalogEntry("P1", params, sphere(2, D), True,
                            "étale type of the projective line over a separably closed field: S^2")
    if name == "finite_field":
        q = params.get("q")
        if q is None:
            raise ParameterError("finite_field needs q")
        _check_q(q, ell)
        return CatalogEntry("finite_field", params, sphere(1, D), True,
                            f"étale type of F_{q}: S^1 (Galois group Z-hat)")
    if name == "Gm":
        _check_ell(ell, nu)
        depth = params.get("depth", 3)
        T = gm_tower(ell, nu, depth, params.get("D_tower"))
        return CatalogEntry("Gm", params, T, True,
                            f"étale type of G_m: K(Z_{ell}, 1) through the tower K(Z/{ell}^t, 1)")
    if name == "Pn":
        _check_ell(ell, nu)
        n = params.get("n")
        if n is None:
            raise ParameterError("Pn needs n")
        tab, red = projective_space_table(n, ell, nu)
        return CatalogEntry("Pn", params, tab, True,
                            f"cohomology of P^{n} over a separably closed field", red)
    if name == "local_field":
        _check_ell(ell, nu)
        q = params.get("q")
        if q is None:
            raise ParameterError("local_field needs q")
        _check_q(q, ell)
        tab = local_field_cohomology(q, ell, nu, params.get("top_degree", 3), params.get("depth", 4))
        # the Galois group of a local field has cohomological dimension 2
        tab.vanishes_above = 2
        return CatalogEntry("local_field", params, tab, True,
                            f"Galois cohomology of a local field with residue field F_{q}")
    if name == "moore":
        m = params.get("ell", 2)
        if not is_prime(m):
            raise ParameterError(f"moore needs a prime, got {m}")
        return CatalogEntry("moore", params, moore_space(m, D), True,
                            f"test space S^1 with a cell attached by degree {m}")
    raise ParameterError(f"unknown catalog entry {name!r}; expected one of {NAMES}")


# ---------------------------------------------------------------------------
# theories


def etale_theory(entry: CatalogEntry, C: GradedCoefficients, degrees: tuple[int, int],
                 reduced: bool = False, splitting: str | None = None,
                 ell: int | None = None, nu: int | None = None) -> AbutmentReport:
    """``E^n`` of an entry for ``n`` in ``degrees`` through the spectral sequence.

    ``ell``/``nu`` default to those of ``C`` and must agree with them when given.
    """
    if (ell is not None and ell != C.ell) or (nu is not None and nu != C.nu):
        raise ParameterError(f"ell = {ell}, nu = {nu} disagree with {C.label} mod {C.modulus}")
    if degrees[0] > degrees[1]:
        raise ParameterError("empty degree range")
    notes = []
    if entry.name == "Pn" and C.nu == 1 and splitting is None:
        splitting = "projective bundle formula (free module, Z/ell coefficients)"
    base = entry.cohomology(C.modulus, reduced)
    page = build_e2(base, C, degrees)
    cert = analyze_differentials(page, degrees)
    report = assemble_abutment(page, cert, degrees, splitting, convergence_check(base, C))
    report.notes = notes + [f"base: {entry.label} ({base.provenance})"] + report.notes
    if base.stabilized is not None and not all(base.stabilized.values()):
        report.notes.append("tower cohomology did not stabilize in degrees "
                            + ", ".join(str(n) for n, v in sorted(base.stabilized.items()) if not v))
    if entry.name == "Pn":
        n = entry.params["n"]
        report.notes.append(f"indexing: the sum runs over i = 0..{n} ({n + 1} summands, one per class "
                            f"in H^0..H^{2 * n}); the reference statement writes i = 0..{n - 1}")
    if entry.name == "local_field":
        report.notes.extend(_local_field_notes(entry, C, report, reduced))
    return report


def _local_field_notes(entry, C, report, reduced) -> list[str]:
    q, ell, nu = entry.params["q"], C.ell, C.nu
    v0 = nu0(q, ell, nu)
    h1 = h1_local_brute_force(q, ell, nu)
    out = [f"brute-force H^1 = {h1}; nu0 = {v0}"]
    for n, d in sorted(report.degrees.items()):
        k = C.rank(n - 1)
        if n % 2 == 0 or k == 0:
            continue
        stated = FinAb.cyclic(ell ** v0).power(k)
        got = d.group if d.group is not None else None
        out.append(f"degree {n}: computed {got if got is not None else d.status} "
                   f"= H^1 (x) MU^{n - 1} with H^1 = {h1}; reference value {stated}")
    return out


def identity_oracle(entry: CatalogEntry, ell: int, nu: int, reduced: bool = False,
                    degrees: tuple[int, int] | None = None) -> bool:
    """``HZ`` mod ``ell^nu`` must reproduce the entry's own cohomology."""
    C = GradedCoefficients("HZ", ell, nu)
    base = entry.cohomology(C.modulus, reduced)
    if degrees is None:
        degrees = (0, max(base.groups))
    report = etale_theory(entry, C, degrees, reduced)
    for n in range(degrees[0], degrees[1] + 1):
        if not base.supported(n):
            if report[n].status != "UNDETERMINED":
                return False
            continue
        if report[n].status != "RESOLVED" or report.group(n) != base.group(n):
            return False
    return True


# ---------------------------------------------------------------------------
# projective bundle algebra


@dataclass(frozen=True)
class Coefficient:
    """An element of the coefficient group in ``degree``."""

    degree: int
    group: FinAb
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", self.group.normalize(self.coords))

    def __add__(self, other: "Coefficient") -> "Coefficient":
        if other.degree != self.degree or other.group != self.group:
            raise ParameterError(f"cannot add coefficients of degrees {self.degree} and {other.degree}")
        return Coefficient(self.degree, self.group, self.group.add(self.coords, other.coords))

    def __neg__(self) -> "Coefficient":
        return Coefficient(self.degree, self.group, self.group.neg(self.coords))

    def __mul__(self, k: int) -> "Coefficient":
        return Coefficient(self.degree, self.group, self.group.scale(int(k), self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


@dataclass
class ModuleElement:
    """``sum_i a_i xi^i`` with ``a_i`` in degree ``degree - 2i``."""

    degree: int
    terms: dict

    def coefficient(self, i: int) -> Coefficient | None:
        return self.terms.get(i)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.terms.values())

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        if other.degree != self.degree:
            raise ParameterError("elements of different degrees")
        terms = dict(self.terms)
        for i, c in other.terms.items():
            terms[i] = terms[i] + c if i in terms else c
        return ModuleElement(self.degree, terms)

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def __repr__(self) -> str:
        parts = [f"{c.coords}*xi^{i}" for i, c in sorted(self.terms.items(), reverse=True) if not c.is_zero()]
        return f"<deg {self.degree}: " + (" + ".join(parts) or "0") + ">"


class FreeModulePresentation:
    """Free module on ``1, xi, ..., xi^{rank-1}`` (``deg xi^i = 2i``) over ``base``.

    ``base`` maps degrees to groups; degrees it does not list are unknown
    and asking for them raises.  ``relation`` optionally expresses
    ``xi^rank`` as ``sum_{i=1}^{rank} a_i xi^{rank-i}`` with ``a_i`` of degree ``2i``.
    """

    def __init__(self, base: dict, rank: int, relation: list | None = None):
        if rank < 1:
            raise ParameterError("rank must be >= 1")
        self.base = dict(base)
        self.rank = rank
        self.relation = None
        if relation is not None:
            self.set_relation(relation)

    @property
    def basis(self) -> list[tuple[str, int]]:
        return [("1" if i == 0 else ("xi" if i == 1 else f"xi^{i}"), 2 * i) for i in range(self.rank)]

    def base_group(self, d: int) -> FinAb:
        if d not in self.base:
            raise ParameterError(f"base ring data missing degree {d}")
        return self.base[d]

    def group(self, m: int) -> FinAb:
        """``sum_{i<rank} base(m - 2i)``."""
        return FinAb.trivial().direct_sum(*[self.base_group(m - 2 * i) for i in range(self.rank)])

    def order(self, m: int) -> int:
        out = 1
        for i in range(self.rank):
            out *= self.base_group(m - 2 * i).order
        return out

    def coefficient(self, d: int, coords=None) -> Coefficient:
        G = self.base_group(d)
        return Coefficient(d, G, G.zero() if coords is None else tuple(coords))

    def element(self, m: int, terms: dict) -> ModuleElement:
        """Homogeneous element of degree ``m`` from ``{i: coords}``."""
        out = {}
        for i, c in terms.items():
            if not 0 <= i <= self.rank:
                raise ParameterError(f"no basis element xi^{i}")
            out[i] = c if isinstance(c, Coefficient) else self.coefficient(m - 2 * i, c)
            if out[i].degree != m - 2 * i:
                raise ParameterError(f"term xi^{i} has coefficient of degree {out[i].degree}, "
                                     f"expected {m - 2 * i}")
        return ModuleElement(m, out)

    def set_relation(self, relation: list) -> None:
        if len(relation) != self.rank:
            raise ParameterError(f"relation needs {self.rank} coefficients")
        rel = []
        for i, a in enumerate(relation, start=1):
            c = a if isinstance(a, Coefficient) else self.coefficient(2 * i, a)
            if c.degree != 2 * i:
                raise ParameterError(f"relation is not homogeneous: a_{i} has degree {c.degree}, expected {2 * i}")
            rel.append(c)
        self.relation = rel

    def reduce(self, x: ModuleElement) -> ModuleElement:
        """Rewrite ``xi^rank`` by the relation; higher powers are not allowed."""
        terms = {i: c for i, c in x.terms.items() if i < self.rank}
        if any(i > self.rank for i in x.terms):
            raise ParameterError("element has powers above the rank")
        top = x.terms.get(self.rank)
        if top is not None and not top.is_zero():
            if self.relation is None:
                raise ParameterError("reducing xi^rank needs a relation")
            if top.degree != 0:
                raise ParameterError("only degree-0 multiples of xi^rank are supported")
            k = top.coords[0] if top.coords else 0
            for i, a in enumerate(self.relation, start=1):
                j = self.rank - i
                add = a * k
                terms[j] = terms[j] + add if j in terms else add
        return ModuleElement(x.degree, terms)

    def __repr__(self) -> str:
        return f"FreeModulePresentation(rank={self.rank}, degrees={sorted(self.base)})"


def base_ring_data(report) -> dict:
    """Degree -> group from a resolved report or a plain mapping."""
    if isinstance(report, AbutmentReport):
        out = {}
        for n, d in report.degrees.items():
            if d.status == "RESOLVED":
                out[n] = d.group
        return out
    return {int(k): (v if isinstance(v, FinAb) else FinAb(tuple(v))) for k, v in dict(report).items()}


def projective_bundle_module(base, rank: int, relation: list | None = None) -> FreeModulePresentation:
    """Module of a rank-``rank`` projective bundle over the base ring data."""
    return FreeModulePresentation(base_ring_data(base), rank, relation)


def chern_classes(module: FreeModulePresentation, relation: list | None = None) -> list[Coefficient]:
    """``c_1..c_n`` with ``sum_i (-1)^i c_i xi^{n-i} = 0`` and ``c_0 = 1``.

    With ``xi^n = sum a_i xi^{n-i}`` the unique solution is ``c_i = (-1)^{i+1} a_i``.
    """
    if relation is not None:
        module.set_relation(relation)
    if module.relation is None:
        raise ParameterError("chern classes need the relation for xi^n")
    return [a if i % 2 else -a for i, a in enumerate(module.relation, start=1)]


def chern_relation(module: FreeModulePresentation, chern: list[Coefficient]) -> ModuleElement:
    """``sum_{i=0}^n (-1)^i c_i xi^{n-i}`` reduced in ``module``; zero for the true classes."""
    n = module.rank
    G0 = module.base_group(0)
    one = Coefficient(0, G0, (1,) + (0,) * (G0.rank - 1))
    terms = {n: one}
    for i, c in enumerate(chern, start=1):
        terms[n - i] = c if i % 2 == 0 else -c
    return module.reduce(module.element(2 * n, terms))


def thom_class(d: int, chern: list[Coefficient], base) -> tuple[ModuleElement, ModuleElement]:
    """``x = u^d - c_1 u^{d-1} + ... + (-1)^d c_d`` and its image in the rank-``d`` module.

    ``x`` lives in the rank-``d+1`` presentation (``u`` the tautological
    class of ``P(V + O)``).  Its image under ``u -> xi`` is reduced with
    the relation of ``P(V)``; the image is zero.
    """
    if len(chern) != d:
        raise ParameterError(f"need {d} chern classes, got {len(chern)}")
    for i, c in enumerate(chern, start=1):
        if c.degree != 2 * i:
            raise ParameterError(f"c_{i} has degree {c.degree}, expected {2 * i}")
    data = base_ring_data(base)
    big = FreeModulePresentation(data, d + 1)
    G0 = big.base_group(0)
    terms = {d: Coefficient(0, G0, (1,) + (0,) * (G0.rank - 1))}
    for i, c in enumerate(chern, start=1):
        terms[d - i] = -c if i % 2 else c
    x = big.element(2 * d, terms)
    small = FreeModulePresentation(data, d, [c if i % 2 else -c for i, c in enumerate(chern, start=1)])
    image = small.reduce(small.element(2 * d, dict(x.terms)))
    return x, image


def dumps(obj) -> str:
    return json.dumps(obj.to_json(), sort_keys=True)
