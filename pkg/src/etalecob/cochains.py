"""Cochains of truncated simplicial sets with finite abelian coefficients.

For ``M = Z/n_1 + ... + Z/n_r`` the cochain complex splits as a direct sum
of the complexes with cyclic coefficients, and each of those splits again
over the primes dividing ``n_j``.  Everything below therefore works one
*component* ``Z/p^e`` at a time, on top of :class:`CyclicCohomology`, and
concatenates the component bases.

Degrees ``0 .. D-1`` are computable from a truncation at ``D``.  Degrees
above a known dimension vanish (the normalized complex is zero there).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .complexes import CyclicCohomology, image_group
from .errors import ComplexError, StructuralError
from .finab import FinAb, factorize
from .simplicial import FinSimpSet, SimplicialMap, Tower, quotient_map, subobject, _subsets


def as_finab(M) -> FinAb:
    if isinstance(M, FinAb):
        return M
    if isinstance(M, int):
        return FinAb.cyclic(M)
    if isinstance(M, str):
        return FinAb.parse(M)
    return FinAb(tuple(M))


def components(M: FinAb) -> list[tuple[int, int, int]]:
    """``(summand index, p, e)`` for every prime-power piece of ``M``."""
    out = []
    for j, n in enumerate(M.invariant_factors):
        for p, e in sorted(factorize(n).items()):
            out.append((j, p, e))
    return out


def differential(X: FinSimpSet, n: int, rows=None, cols=None) -> np.ndarray:
    """Integer matrix of ``delta^n = sum_i (-1)^i d_i^*`` from ``C^n`` to ``C^{n+1}``.

    ``rows``/``cols`` restrict to subsets of ``X_{n+1}``/``X_n`` (for reduced
    and relative complexes); cochains vanish off those subsets.
    """
    if n + 1 > X.D:
        raise ValueError(f"delta^{n} needs level {n + 1}, truncation is {X.D}")
    rows = np.arange(X.sizes[n + 1]) if rows is None else np.asarray(rows)
    cols = np.arange(X.sizes[n]) if cols is None else np.asarray(cols)
    col_pos = np.full(X.sizes[n], -1, dtype=np.int64)
    col_pos[cols] = np.arange(len(cols))
    out = np.zeros((len(rows), len(cols)), dtype=np.int64)
    r = np.arange(len(rows))
    for i in range(n + 2):
        c = col_pos[X.faces[n + 1][i][rows]]
        ok = c >= 0
        np.add.at(out, (r[ok], c[ok]), (-1) ** i)
    return out


@dataclass
class CochainComplex:
    """``C^*(X; M)`` with explicit integer differentials.

    ``base[n]`` is the differential for a single cyclic summand; the full
    matrix on ``C^n = M^{X_n}`` is ``kron(I_r, base[n])`` (see :meth:`matrix`).
    ``support[n]`` lists the simplices indexing ``C^n`` (all of ``X_n``,
    or those off the basepoint when reduced).
    """

    space: FinSimpSet
    coefficient: FinAb
    base: list
    support: list
    reduced: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dims(self) -> list[int]:
        return [len(s) for s in self.support]

    @property
    def top_degree(self) -> int:
        return len(self.base) - 1

    def matrix(self, n: int) -> np.ndarray:
        r = self.coefficient.rank
        return np.kron(np.eye(r, dtype=np.int64), self.base[n])

    def rank(self, n: int) -> int:
        """Rank of ``C^n`` as a direct sum of cyclic modules."""
        return self.dims[n] * self.coefficient.rank

    def component_cohomology(self, n: int, p: int, e: int) -> CyclicCohomology:
        key = (n, p, e)
        if key not in self._cache:
            if not 0 <= n <= self.top_degree:
                raise ValueError(f"degree {n} is outside 0..{self.top_degree}")
            A = self.base[n - 1] if n > 0 else None
            self._cache[key] = CyclicCohomology(A, self.base[n], p, e, self.dims[n])
        return self._cache[key]

    def basis(self, n: int) -> list[tuple[tuple[int, int, int], CyclicCohomology]]:
        return [(c, self.component_cohomology(n, c[1], c[2])) for c in components(self.coefficient)]

    def group(self, n: int) -> FinAb:
        orders = []
        for _, h in self.basis(n):
            orders.extend(h.orders)
        return FinAb.from_orders(orders)

    def orders(self, n: int) -> list[int]:
        """Generator orders in basis order (not sorted)."""
        out = []
        for _, h in self.basis(n):
            out.extend(h.orders)
        return out


def _support(X: FinSimpSet, reduced: bool, D: int) -> list[np.ndarray]:
    if not reduced:
        return [np.arange(X.sizes[k]) for k in range(D + 1)]
    if not X.pointed:
        raise StructuralError("reduced cohomology needs a pointed object")
    out = []
    for k in range(D + 1):
        keep = np.ones(X.sizes[k], dtype=bool)
        keep[X.basepoint_at(k)] = False
        out.append(np.flatnonzero(keep))
    return out


def build_complex(X: FinSimpSet, M, reduced: bool = False, top: int | None = None) -> CochainComplex:
    """Cochain complex in degrees ``0 .. top`` (default ``D - 1``).

    ``delta o delta = 0`` is checked over the integers.
    """
    M = as_finab(M)
    top = X.D - 1 if top is None else min(top, X.D - 1)
    support = _support(X, reduced, top + 1)
    base = [differential(X, n, support[n + 1], support[n]) for n in range(top + 1)]
    for n in range(top):
        if base[n].size and base[n + 1].size and np.any(base[n + 1] @ base[n]):
            raise ComplexError(f"delta^{n + 1} o delta^{n} != 0")
    return CochainComplex(X, M, base, support[: top + 1], reduced)


# ---------------------------------------------------------------------------
# tables


@dataclass
class CohomologyTable:
    coefficient: FinAb
    groups: dict
    reduced: bool = False
    provenance: str = "direct computation"
    top_degree: int | None = None
    vanishes_above: int | None = None
    stabilized: dict | None = None
    notes: list = field(default_factory=list)

    def __getitem__(self, n: int) -> FinAb:
        return self.group(n)

    def group(self, n: int) -> FinAb:
        if n < 0:
            return FinAb.trivial()
        if n in self.groups:
            return self.groups[n]
        if self.vanishes_above is not None and n > self.vanishes_above:
            return FinAb.trivial()
        raise KeyError(f"degree {n} is beyond the supported range")

    def supported(self, n: int) -> bool:
        try:
            self.group(n)
        except KeyError:
            return False
        return True

    def degrees(self) -> list[int]:
        return sorted(self.groups)

    def to_json(self) -> dict:
        out = {
            "coefficient": list(self.coefficient.invariant_factors),
            "groups": {str(n): list(g.invariant_factors) for n, g in sorted(self.groups.items())},
            "reduced": self.reduced,
            "provenance": self.provenance,
            "top_degree": self.top_degree,
            "vanishes_above": self.vanishes_above,
        }
        if self.stabilized is not None:
            out["stabilized"] = {str(n): bool(v) for n, v in sorted(self.stabilized.items())}
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "CohomologyTable":
        if isinstance(data, str):
            data = json.loads(data)
        stab = data.get("stabilized")
        return cls(FinAb(tuple(data["coefficient"])),
                   {int(n): FinAb(tuple(g)) for n, g in data["groups"].items()},
                   data.get("reduced", False), data.get("provenance", "direct computation"),
                   data.get("top_degree"), data.get("vanishes_above"),
                   None if stab is None else {int(n): v for n, v in stab.items()},
                   list(data.get("notes", [])))


def cohomology(X: FinSimpSet, M, reduced: bool = False) -> CohomologyTable:
    """``H^n(X; M)`` for ``n = 0 .. D-1`` (reduced: relative to the basepoint)."""
    C = build_complex(X, M, reduced)
    groups = {n: C.group(n) for n in range(C.top_degree + 1)}
    return CohomologyTable(C.coefficient, groups, reduced, "direct computation",
                           C.top_degree, X.dimension)


# ---------------------------------------------------------------------------
# homomorphisms between computed groups


@dataclass
class GroupHom:
    """Homomorphism between groups presented by generator orders.

    ``matrix[:, j]`` holds the target coordinates of the image of source
    generator ``j``.
    """

    source: list
    target: list
    matrix: np.ndarray

    @property
    def source_group(self) -> FinAb:
        return FinAb.from_orders(self.source)

    @property
    def target_group(self) -> FinAb:
        return FinAb.from_orders(self.target)

    def image(self) -> FinAb:
        return image_group(self.matrix.reshape(len(self.target), len(self.source)), self.target)

    def is_zero(self) -> bool:
        return not np.any(self._reduced())

    def is_surjective(self) -> bool:
        return self.image().order == self.target_group.order

    def is_injective(self) -> bool:
        return self.image().order == self.source_group.order

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def compose(self, first: "GroupHom") -> "GroupHom":
        """``self o first``."""
        if list(first.target) != list(self.source):
            raise ValueError("incompatible homomorphisms")
        M = (np.asarray(self.matrix, dtype=object).reshape(len(self.target), len(self.source))
             .dot(np.asarray(first.matrix, dtype=object).reshape(len(self.source), len(first.source))))
        return GroupHom(first.source, self.target, _mod_rows(M, self.target))

    def _reduced(self):
        return _mod_rows(self.matrix.reshape(len(self.target), len(self.source)), self.target)


def _mod_rows(M, orders) -> np.ndarray:
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return np.zeros(M.shape, dtype=np.int64)
    o = np.array(orders, dtype=object)[:, None]
    return (M % o).astype(np.int64)


def _block_hom(src: CochainComplex, tgt: CochainComplex, n: int, pull) -> GroupHom:
    """Assemble a homomorphism ``H^n(src) -> H^n(tgt)`` from a cochain map.

    ``pull(cocycles, p, e)`` maps source cochain columns to target cochain columns.
    """
    s_orders, t_orders = src.orders(n), tgt.orders(n)
    M = np.zeros((len(t_orders), len(s_orders)), dtype=np.int64)
    r0 = c0 = 0
    tb = dict(tgt.basis(n))
    for comp, hs in src.basis(n):
        ht = tb[comp]
        k, g = len(ht.orders), len(hs.orders)
        if k and g:
            M[r0:r0 + k, c0:c0 + g] = ht.coords(pull(hs.generators, comp[1], comp[2]) % hs.q)
        r0 += k
        c0 += g
    return GroupHom(s_orders, t_orders, M)


def _pullback(index: np.ndarray):
    def pull(gens, p, e):
        return gens[index]
    return pull


def _levelwise_index(f: SimplicialMap, src_support, tgt_support, n: int) -> np.ndarray:
    """For each supported simplex of the source of ``f``, the row of its image
    in the support of the target, or -1 for a simplex outside it."""
    pos = np.full(f.target.sizes[n], -1, dtype=np.int64)
    pos[tgt_support[n]] = np.arange(len(tgt_support[n]))
    return pos[f.level_maps[n][src_support[n]]]


def _pull_with_zero(index):
    def pull(gens, p, e):
        padded = np.vstack([gens, np.zeros((1, gens.shape[1]), dtype=np.int64)])
        return padded[np.where(index < 0, gens.shape[0], index)]
    return pull


def induced_map(f: SimplicialMap, M, n: int | None = None, reduced: bool = False):
    """``f^*: H^n(Y; M) -> H^n(X; M)`` for ``f: X -> Y``.

    Returns one :class:`GroupHom` for degree ``n``, or a dict over all
    common degrees when ``n`` is omitted.
    """
    M = as_finab(M)
    top = min(f.source.D, f.target.D, f.D) - 1
    CX = build_complex(f.source, M, reduced, top)
    CY = build_complex(f.target, M, reduced, top)
    degrees = range(top + 1) if n is None else [n]
    out = {}
    for k in degrees:
        idx = _levelwise_index(f, CX.support, CY.support, k)
        out[k] = _block_hom(CY, CX, k, _pull_with_zero(idx))
    return out if n is None else out[n]


def reduction_map(X: FinSimpSet, p: int, source_exp: int, target_exp: int, n: int,
                  multiplier: int = 1, reduced: bool = False) -> GroupHom:
    """Map on ``H^n`` induced by ``Z/p^a -> Z/p^b, x -> multiplier * x``.

    With ``multiplier = 1`` and ``b <= a`` this is reduction of coefficients.
    """
    a, b = source_exp, target_exp
    if (multiplier * p ** a) % p ** b:
        raise ValueError("not a homomorphism Z/p^a -> Z/p^b")
    CA = build_complex(X, p ** a, reduced, n)
    CB = build_complex(X, p ** b, reduced, n)
    hs = CA.component_cohomology(n, p, a)
    ht = CB.component_cohomology(n, p, b)
    if not hs.orders or not ht.orders:
        return GroupHom(hs.orders, ht.orders, np.zeros((len(ht.orders), len(hs.orders)), dtype=np.int64))
    M = ht.coords((hs.generators * multiplier) % ht.q)
    return GroupHom(hs.orders, ht.orders, M)


@dataclass
class TorsionWitness:
    holds: bool
    witness: int | None
    degrees: list

    def __bool__(self) -> bool:
        return self.holds


def no_ell_torsion(X, ell: int, nu: int, degrees=None) -> TorsionWitness:
    """Check surjectivity of ``H^*(X; Z/ell^nu) -> H^*(X; Z/ell)``.

    ``X`` is a :class:`FinSimpSet` or a mapping ``degree -> GroupHom`` of
    precomputed reduction maps.  The witness is the first failing degree.
    """
    if nu < 1:
        raise ValueError("nu must be >= 1")
    if isinstance(X, FinSimpSet):
        top = X.D - 1
        if X.dimension is not None:
            top = min(top, X.dimension)
        degs = list(range(top + 1)) if degrees is None else list(degrees)
        maps = {n: reduction_map(X, ell, nu, 1, n) for n in degs}
    else:
        maps = dict(X)
        degs = sorted(maps) if degrees is None else list(degrees)
    for n in degs:
        if not maps[n].is_surjective():
            return TorsionWitness(False, n, degs)
    return TorsionWitness(True, None, degs)


# ---------------------------------------------------------------------------
# relative cohomology


@dataclass
class Pair:
    X: FinSimpSet
    subsets: list
    A: FinSimpSet
    inclusion: SimplicialMap
    collapse: SimplicialMap

    @property
    def Q(self) -> FinSimpSet:
        return self.collapse.target


def make_pair(X: FinSimpSet, A) -> Pair:
    subs = _subsets(X, A)
    if len(subs[0]) == 0:
        raise StructuralError("relative cohomology needs a nonempty sub-object")
    Asub, inc = subobject(X, subs)
    return Pair(X, subs, Asub, inc, quotient_map(X, subs))


def relative_cohomology(X: FinSimpSet, A, M) -> CohomologyTable:
    """``H^n(X, A; M)`` as reduced cohomology of ``X/A``."""
    P = make_pair(X, A)
    tab = cohomology(P.Q, M, reduced=True)
    tab.provenance = "direct computation (relative)"
    return tab


def les_maps(X: FinSimpSet, A, M, top: int | None = None) -> list[tuple[str, int, GroupHom]]:
    """Maps of the long exact sequence of the pair, in order:
    ``H^n(X,A) -j-> H^n(X) -i-> H^n(A) -d-> H^{n+1}(X,A) -> ...``."""
    M = as_finab(M)
    P = make_pair(X, A)
    top = X.D - 1 if top is None else min(top, X.D - 1)
    CQ = build_complex(P.Q, M, reduced=True, top=top)
    CX = build_complex(X, M, top=top)
    CA = build_complex(P.A, M, top=top)
    out = []
    for n in range(top + 1):
        jidx = _levelwise_index(P.collapse, CX.support, CQ.support, n)
        out.append(("j", n, _block_hom(CQ, CX, n, _pull_with_zero(jidx))))
        iidx = _levelwise_index(P.inclusion, CA.support, CX.support, n)
        out.append(("i", n, _block_hom(CX, CA, n, _pull_with_zero(iidx))))
        if n < top:
            out.append(("d", n, _connecting(P, CA, CQ, X, n)))
    return out


def _connecting(P: Pair, CA: CochainComplex, CQ: CochainComplex, X: FinSimpSet, n: int) -> GroupHom:
    """Extend a cocycle on A by zero, apply delta on X, read it on X/A."""
    delta = differential(X, n)
    A_rows = P.subsets[n]
    # X_{n+1} simplex corresponding to each supported (non-basepoint) simplex of X/A
    relabel = P.collapse.level_maps[n + 1]
    back = np.full(P.Q.sizes[n + 1], -1, dtype=np.int64)
    outside = np.flatnonzero(relabel > 0)
    back[relabel[outside]] = outside
    rows = back[CQ.support[n + 1]]
    s_orders, t_orders = CA.orders(n), CQ.orders(n + 1)
    Mx = np.zeros((len(t_orders), len(s_orders)), dtype=np.int64)
    r0 = c0 = 0
    tb = dict(CQ.basis(n + 1))
    for comp, hs in CA.basis(n):
        ht = tb[comp]
        k, g = len(ht.orders), len(hs.orders)
        if k and g:
            ext = np.zeros((X.sizes[n], g), dtype=np.int64)
            ext[A_rows] = hs.generators
            img = (delta @ ext) % hs.q
            Mx[r0:r0 + k, c0:c0 + g] = ht.coords(img[rows])
        r0 += k
        c0 += g
    return GroupHom(s_orders, t_orders, Mx)


def les_check(X: FinSimpSet, A, M, top: int | None = None) -> bool:
    """Exactness of the long exact sequence of the pair at every interior term.

    At each middle group ``G`` between ``f`` and ``g``: ``g o f = 0`` and
    ``|im f| * |im g| = |G|``.  The sequence starts with ``0 -> H^0(X,A)``,
    so injectivity of the first ``j`` is checked as well.
    """
    maps = [m for _, _, m in les_maps(X, A, M, top)]
    if maps and not maps[0].is_injective():
        return False
    for f, g in zip(maps, maps[1:]):
        if not g.compose(f).is_zero():
            return False
        if f.image().order * g.image().order != f.target_group.order:
            return False
    return True


# ---------------------------------------------------------------------------
# towers


def tower_cohomology(T: Tower, M, reduced: bool = False) -> CohomologyTable:
    """Colimit of ``H^n(X^(t); M)`` along the bond-induced maps.

    With stages ``0..L`` the colimit is estimated by the image of stage
    ``h = max(L - 2, 0)`` in stage ``L``.  Degree ``n`` counts as stabilized
    when that image equals the image of stage ``h - 1`` and is not cut down
    further between stages ``L - 1`` and ``L``.
    """
    M = as_finab(M)
    L = len(T) - 1
    top = min(X.D for X in T.stages) - 1
    complexes = [build_complex(X, M, reduced, top) for X in T.stages]
    maps = {}
    for t, b in enumerate(T.bonds):
        for n in range(top + 1):
            idx = _levelwise_index(b, complexes[t + 1].support, complexes[t].support, n)
            maps[(t, n)] = _block_hom(complexes[t], complexes[t + 1], n, _pull_with_zero(idx))

    groups, stab = {}, {}
    for n in range(top + 1):
        chain = [maps[(t, n)] for t in range(L)]
        groups[n], stab[n] = colimit_estimate([c.orders(n) for c in complexes], chain)
    dims = [X.dimension for X in T.stages]
    vanish = min(dims) if all(d is not None for d in dims) else None
    notes = [] if all(stab.values()) else [
        "degrees " + ", ".join(str(n) for n, v in stab.items() if not v) + " did not stabilize"]
    return CohomologyTable(M, groups, reduced, "tower colimit", top, vanish, stab, notes)


def colimit_estimate(stage_orders: list, maps: list) -> tuple[FinAb, bool]:
    """Estimate ``colim G_0 -> G_1 -> ... -> G_L`` from finitely many stages.

    ``maps[t]`` is a :class:`GroupHom` ``G_t -> G_{t+1}``.  The estimate is
    the image of stage ``h = max(L - 2, 0)`` in stage ``L``; it counts as
    stabilized when the image of stage ``h - 1`` is the same subgroup and
    nothing from stage ``h`` dies between stages ``L - 1`` and ``L``.  With
    fewer than three stages, stabilization means every map is bijective.
    """
    L = len(stage_orders) - 1

    def composite(s, t):
        h = GroupHom(stage_orders[s], stage_orders[s],
                     np.eye(len(stage_orders[s]), dtype=np.int64))
        for u in range(s, t):
            h = maps[u].compose(h)
        return h

    h = max(L - 2, 0)
    est = composite(h, L).image()
    if L >= 2 and h >= 1:
        earlier = composite(h - 1, L).image()
        before_last = composite(h, L - 1).image()
        stable = earlier.order == est.order and before_last.order == est.order
    else:
        stable = all(m.is_isomorphism() for m in maps)
    return est, stable
