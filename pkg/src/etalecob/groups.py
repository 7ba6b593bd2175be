"""Cohomology of finite and profinite groups with trivial coefficients.

Two independent models:

* the nerve ``BG`` (level ``k`` is ``G^k``), whose cochain complex is the
  inhomogeneous bar complex; general but exponential in the degree;
* for metacyclic groups ``<tau> x| <sigma>`` a small periodic resolution
  with ``n + 1`` generators in degree ``n``, used for the tame local
  towers where the groups get large.

Profinite groups enter as towers of finite quotients; cohomology is the
colimit along inflation maps.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from . import config
from .cochains import (CohomologyTable, GroupHom, as_finab, cohomology, colimit_estimate, components,
                       tower_cohomology)
from .complexes import CyclicCohomology, check_complex
from .errors import BudgetExceeded, ParameterError, StructuralError
from .finab import FinAb, is_prime, prime_power, structure_from_subgroup_counts, valuation
from .simplicial import FinSimpSet, SimplicialMap, Tower


class FiniteGroup:
    """A finite group given by its multiplication table ``table[a, b] = a * b``."""

    def __init__(self, table, identity: int = 0, name: str | None = None, check: bool = True):
        self.table = np.asarray(table, dtype=np.int64)
        self.identity = int(identity)
        self.name = name
        if check:
            self.validate()

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def validate(self) -> None:
        T = self.table
        n = T.shape[0] if T.ndim == 2 else 0
        if T.shape != (n, n) or n == 0:
            raise StructuralError("multiplication table must be square and nonempty")
        if T.min() < 0 or T.max() >= n:
            raise StructuralError("table entries out of range")
        e = self.identity
        if not (np.array_equal(T[e], np.arange(n)) and np.array_equal(T[:, e], np.arange(n))):
            raise StructuralError("identity element is not neutral")
        if not all((T[a] == e).any() for a in range(n)):
            raise StructuralError("some element has no inverse")
        # (ab)c == a(bc) for all triples
        if not np.array_equal(T[T], T[:, T]):
            raise StructuralError("multiplication is not associative")

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverses(self) -> np.ndarray:
        return np.argmax(self.table == self.identity, axis=1)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def to_json(self) -> dict:
        return {"order": self.order, "identity": self.identity, "table": self.table.ravel().tolist()}

    @classmethod
    def from_json(cls, data) -> "FiniteGroup":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["order"])
        return cls(np.array(data["table"]).reshape(n, n), data.get("identity", 0))

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        a = np.arange(n)
        return cls((a[:, None] + a[None, :]) % n, 0, f"Z/{n}")

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls(np.zeros((1, 1), dtype=np.int64), 0, "1")

    @classmethod
    def product(cls, G: "FiniteGroup", H: "FiniteGroup") -> "FiniteGroup":
        """``G x H`` with ``(g, h)`` stored at ``g * |H| + h``."""
        g, h = G.order, H.order
        a = np.arange(g * h)
        T = G.table[(a // h)[:, None], (a // h)[None, :]] * h + H.table[(a % h)[:, None], (a % h)[None, :]]
        return cls(T, G.identity * h + H.identity)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}{', ' + self.name if self.name else ''})"


def is_homomorphism(G: FiniteGroup, H: FiniteGroup, f) -> bool:
    f = np.asarray(f, dtype=np.int64)
    return bool(np.array_equal(f[G.table], H.table[f[:, None], f[None, :]]))


def count_homomorphisms_to_cyclic(G: FiniteGroup, n: int) -> int:
    """``|Hom(G, Z/n)|`` by exhaustive search over all functions on a generating set."""
    gens: list[int] = []
    span = {G.identity}
    for x in range(G.order):
        if x not in span:
            gens.append(x)
            span = _closure(G, gens)
    count = 0
    for values in itertools.product(range(n), repeat=len(gens)):
        f = _extend(G, gens, values, n)
        if f is not None and is_homomorphism(G, FiniteGroup.cyclic(n), f):
            count += 1
    return count


def _closure(G: FiniteGroup, gens) -> set:
    span = {G.identity}
    frontier = [G.identity]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in span:
                    span.add(y)
                    new.append(y)
        frontier = new
    return span


def _extend(G: FiniteGroup, gens, values, n):
    f = {G.identity: 0}
    frontier = [G.identity]
    while frontier:
        new = []
        for x in frontier:
            for g, v in zip(gens, values):
                y = G.mul(x, g)
                w = (f[x] + v) % n
                if y in f:
                    if f[y] != w:
                        return None
                else:
                    f[y] = w
                    new.append(y)
        frontier = new
    return np.array([f[x] for x in range(G.order)], dtype=np.int64)


# ---------------------------------------------------------------------------
# the nerve / bar model


def nerve(G: FiniteGroup, D: int, budget: int | None = None) -> FinSimpSet:
    """``BG`` truncated at ``D``; a k-simplex is a tuple ``(g_1, ..., g_k)``.

    Tuples are encoded in base ``|G|`` with ``g_1`` most significant.
    """
    n = G.order
    limit = config.budget(budget)
    if n ** D > limit:
        raise BudgetExceeded(f"nerve level {D} would have {n ** D} simplices (budget {limit})")
    T = G.table
    sizes = [n ** k for k in range(D + 1)]

    def digits(k):
        idx = np.arange(n ** k, dtype=np.int64)
        return (idx[:, None] // n ** np.arange(k - 1, -1, -1, dtype=np.int64)) % n

    def encode(dig):
        k = dig.shape[1]
        return dig @ (n ** np.arange(k - 1, -1, -1, dtype=np.int64)) if k else np.zeros(len(dig), dtype=np.int64)

    faces, degens = [], []
    for k in range(1, D + 1):
        dig = digits(k)
        fk = [encode(dig[:, 1:])]
        for i in range(1, k):
            merged = T[dig[:, i - 1], dig[:, i]]
            fk.append(encode(np.column_stack([dig[:, : i - 1], merged, dig[:, i + 1:]])))
        fk.append(encode(dig[:, :-1]))
        faces.append(fk)
    for k in range(D):
        dig = digits(k) if k else np.zeros((1, 0), dtype=np.int64)
        e = np.full((len(dig), 1), G.identity, dtype=np.int64)
        degens.append([encode(np.column_stack([dig[:, :i], e, dig[:, i:]])) for i in range(k + 1)])
    return FinSimpSet(D, sizes, faces, degens, basepoint=0, check=False)


def nerve_map(f, G: FiniteGroup, H: FiniteGroup, BG: FinSimpSet, BH: FinSimpSet) -> SimplicialMap:
    """``Bf: BG -> BH`` for a homomorphism given as an array ``f[g]``."""
    f = np.asarray(f, dtype=np.int64)
    n, m = G.order, H.order
    maps = []
    for k in range(min(BG.D, BH.D) + 1):
        idx = np.arange(n ** k, dtype=np.int64)
        dig = (idx[:, None] // n ** np.arange(k - 1, -1, -1, dtype=np.int64)) % n if k else np.zeros((1, 0), dtype=np.int64)
        img = f[dig]
        maps.append(img @ (m ** np.arange(k - 1, -1, -1, dtype=np.int64)) if k else np.zeros(1, dtype=np.int64))
    return SimplicialMap(BG, BH, maps, check=False)


def bar_cohomology(G: FiniteGroup, M, top_degree: int = 3, budget: int | None = None) -> CohomologyTable:
    """``H^i(G; M)`` for ``i <= top_degree``, trivial action, from the bar complex."""
    tab = cohomology(nerve(G, top_degree + 1, budget), M)
    tab.provenance = "bar complex"
    tab.vanishes_above = None
    return tab


# ---------------------------------------------------------------------------
# towers


@dataclass
class GroupTower:
    """Finite quotients ``G_0 <- G_1 <- ... <- G_T``; ``maps[t]`` is ``G_{t+1} -> G_t``."""

    stages: list
    maps: list

    def __post_init__(self):
        if len(self.maps) != len(self.stages) - 1:
            raise StructuralError("need one surjection between consecutive stages")

    def __len__(self) -> int:
        return len(self.stages)

    def table(self, t: int) -> FiniteGroup:
        G = self.stages[t]
        return G if isinstance(G, FiniteGroup) else G.group()

    def surjection(self, t: int) -> np.ndarray:
        f = self.maps[t]
        return np.asarray(f() if callable(f) else f, dtype=np.int64)

    def validate(self) -> None:
        for t in range(len(self.maps)):
            G, H, f = self.table(t + 1), self.table(t), self.surjection(t)
            if not is_homomorphism(G, H, f):
                raise StructuralError(f"map {t} is not a homomorphism")
            if len(np.unique(f)) != H.order:
                raise StructuralError(f"map {t} is not surjective")

    def to_json(self) -> dict:
        return {"stages": [self.table(t).to_json() for t in range(len(self))],
                "maps": [self.surjection(t).tolist() for t in range(len(self.maps))]}


def cyclic_tower(ell: int, depth: int) -> GroupTower:
    """``Z/ell <- Z/ell^2 <- ... <- Z/ell^depth``."""
    stages = [FiniteGroup.cyclic(ell ** t) for t in range(1, depth + 1)]
    maps = [np.arange(ell ** (t + 1)) % ell ** t for t in range(1, depth)]
    return GroupTower(stages, maps)


def profinite_cohomology(T: GroupTower, M, top_degree: int = 3, model: str = "auto",
                         budget: int | None = None) -> CohomologyTable:
    """Colimit of ``H^i(G_t; M)`` along inflations.

    ``model`` is ``"bar"`` (nerves of the stage tables), ``"resolution"``
    (metacyclic stages only) or ``"auto"`` (resolution when available).
    """
    M = as_finab(M)
    meta = all(isinstance(G, MetacyclicGroup) for G in T.stages)
    if model == "auto":
        model = "resolution" if meta else "bar"
    if model == "resolution":
        if not meta:
            raise ParameterError("the resolution model needs metacyclic stages")
        return _resolution_tower_cohomology(T.stages, M, top_degree)
    if model != "bar":
        raise ValueError(f"unknown model {model!r}")
    D = top_degree + 1
    groups = [T.table(t) for t in range(len(T))]
    nerves = [nerve(G, D, budget) for G in groups]
    bonds = [nerve_map(T.surjection(t), groups[t + 1], groups[t], nerves[t + 1], nerves[t])
             for t in range(len(T.maps))]
    tab = tower_cohomology(Tower(nerves, bonds), M)
    tab.provenance = "profinite colimit (bar complex)"
    tab.vanishes_above = None
    return tab


# ---------------------------------------------------------------------------
# metacyclic groups and their periodic resolution


class MetacyclicGroup:
    """``<tau, sigma | tau^m = sigma^N = 1, sigma tau sigma^-1 = tau^r>``.

    Elements ``tau^a sigma^b`` are stored at index ``a * N + b``.  ``r`` is
    kept as an integer lift; the group only sees it modulo ``m``.
    """

    def __init__(self, m: int, N: int, r: int):
        if m < 1 or N < 1:
            raise ParameterError("m and N must be positive")
        if m > 1 and pow(r, N, m) != 1:
            raise ParameterError("r^N must be 1 modulo m")
        if m > 1 and gcd(r, m) != 1:
            raise ParameterError("r must be a unit modulo m")
        self.m, self.N, self.r = m, N, r

    @property
    def order(self) -> int:
        return self.m * self.N

    def element(self, a: int, b: int) -> int:
        return (a % self.m) * self.N + (b % self.N)

    def group(self) -> FiniteGroup:
        m, N = self.m, self.N
        idx = np.arange(m * N)
        a, b = idx // N, idx % N
        rb = np.array([pow(self.r, int(x), m) for x in range(N)], dtype=np.int64)
        # (tau^a sigma^b)(tau^c sigma^d) = tau^(a + r^b c) sigma^(b + d)
        A = (a[:, None] + rb[b][:, None] * a[None, :]) % m
        B = (b[:, None] + b[None, :]) % N
        return FiniteGroup(A * N + B, 0, repr(self))

    def projection_to(self, other: "MetacyclicGroup") -> np.ndarray:
        """``tau -> tau, sigma -> sigma`` onto a quotient stage."""
        if self.m % other.m or self.N % other.N:
            raise ParameterError("target is not a quotient stage")
        idx = np.arange(self.order)
        return (idx // self.N % other.m) * other.N + (idx % self.N % other.N)

    def __repr__(self) -> str:
        return f"MetacyclicGroup(m={self.m}, N={self.N}, r={self.r})"


def _weights(G: MetacyclicGroup, i: int, q: int) -> tuple[int, int]:
    w = pow(G.r, (i + 1) // 2, q)
    winv = pow(w, G.N - 1, q)
    return w, winv


def resolution_differentials(G: MetacyclicGroup, modulus: int, top: int) -> list[np.ndarray]:
    """Cochain differentials ``delta^0 .. delta^top`` of the periodic resolution.

    ``C^n`` has basis ``(i, j)`` with ``i + j = n`` (index ``i``); ``i``
    counts the ``tau`` direction and ``j`` the ``sigma`` direction.
    Valid when ``r^N = 1`` modulo ``m * modulus``.
    """
    q = modulus
    if G.m > 1 and pow(G.r, G.N, G.m * q) != 1:
        raise ParameterError("resolution model needs r^N = 1 mod m * modulus")
    out = []
    for n in range(top + 1):
        d = np.zeros((n + 2, n + 1), dtype=np.int64)
        for i in range(n + 2):
            j = n + 1 - i
            if i >= 1:
                eps = 0 if i % 2 else G.m
                d[i, i - 1] = eps % q
            if j >= 1:
                _, winv = _weights(G, i, q)
                if j % 2:
                    eta = (winv - 1) % q
                else:
                    eta = sum(pow(winv, t, q) for t in range(G.N)) % q
                d[i, i] = ((-1) ** i * eta) % q
        out.append(d)
    return out


def resolution_inflation(small: MetacyclicGroup, big: MetacyclicGroup, n: int) -> np.ndarray:
    """Diagonal factors of inflation ``C^n(small) -> C^n(big)`` on the ``(i, j)`` basis."""
    fm, fN = big.m // small.m, big.N // small.N
    return np.array([fm ** (i // 2) * fN ** ((n - i) // 2) for i in range(n + 1)], dtype=object)


def resolution_cohomology(G: MetacyclicGroup, M, top_degree: int = 3) -> CohomologyTable:
    M = as_finab(M)
    groups = {}
    for n in range(top_degree + 1):
        orders = []
        for _, p, e in components(M):
            ds = resolution_differentials(G, p ** e, n)
            check_complex(ds, p ** e)
            A = ds[n - 1] if n else None
            orders.extend(CyclicCohomology(A, ds[n], p, e, n + 1).orders)
        groups[n] = FinAb.from_orders(orders)
    return CohomologyTable(M, groups, False, "metacyclic resolution", top_degree, None)


def _resolution_tower_cohomology(stages, M: FinAb, top: int) -> CohomologyTable:
    groups, stab = {}, {}
    for n in range(top + 1):
        per_stage = []
        for G in stages:
            hs = []
            for comp in components(M):
                p, e = comp[1], comp[2]
                ds = resolution_differentials(G, p ** e, n)
                check_complex(ds, p ** e)
                hs.append(CyclicCohomology(ds[n - 1] if n else None, ds[n], p, e, n + 1))
            per_stage.append(hs)
        maps = []
        for t in range(len(stages) - 1):
            f = resolution_inflation(stages[t], stages[t + 1], n)
            src, tgt = per_stage[t], per_stage[t + 1]
            s_orders = [o for h in src for o in h.orders]
            t_orders = [o for h in tgt for o in h.orders]
            Mx = np.zeros((len(t_orders), len(s_orders)), dtype=np.int64)
            r0 = c0 = 0
            for hs, ht in zip(src, tgt):
                k, g = len(ht.orders), len(hs.orders)
                if k and g:
                    img = (hs.generators.astype(object) * f[:, None]) % ht.q
                    Mx[r0:r0 + k, c0:c0 + g] = ht.coords(img.astype(np.int64))
                r0 += k
                c0 += g
            maps.append(GroupHom(s_orders, t_orders, Mx))
        orders = [[o for h in hs for o in h.orders] for hs in per_stage]
        groups[n], stab[n] = colimit_estimate(orders, maps)
    notes = [] if all(stab.values()) else [
        "degrees " + ", ".join(str(n) for n, v in stab.items() if not v) + " did not stabilize"]
    return CohomologyTable(M, groups, False, "profinite colimit (metacyclic resolution)", top, None, stab, notes)


# ---------------------------------------------------------------------------
# tame local Galois groups


def _check_local(q: int, ell: int) -> None:
    if not is_prime(ell):
        raise ParameterError(f"ell = {ell} is not prime")
    try:
        p, _ = prime_power(q)
    except ValueError:
        raise ParameterError(f"q = {q} is not a prime power") from None
    if p == ell:
        raise ParameterError("ell must not divide q")


def _min_sigma_exponent(q: int, ell: int, modulus: int) -> int:
    """Least ``b`` with ``q^(ell^b) = 1`` mod ``modulus``."""
    b = 0
    while pow(q, ell ** b, modulus) != 1:
        b += 1
        if b > 64:
            raise ParameterError("no sigma exponent found")
    return b


def tame_stage_parameters(q: int, ell: int, depth: int, nu: int = 1) -> list[tuple[int, int]]:
    """Stage exponents ``(a_t, b_t)``: ``|tau| = ell^a``, ``|sigma| = ell^b``.

    ``a`` grows in steps of ``nu`` so that inflation kills pure ``tau``
    classes between consecutive stages; ``b`` is large enough for the
    resolution model to be valid with coefficients ``Z/ell^nu``.  When the
    ``tau`` part cannot survive in an ``ell``-quotient (``ell`` odd and
    ``ell`` not dividing ``q - 1``) it is dropped.
    """
    _check_local(q, ell)
    tame = (q - 1) % ell == 0
    out = []
    for t in range(1, depth + 1):
        a = nu * t if tame else 0
        b = max(nu * t, _min_sigma_exponent(q, ell, ell ** (a + nu)) if a else 0)
        out.append((a, b))
    return out


def tame_local_tower(q: int, ell: int, depth: int = 4, nu: int = 1) -> GroupTower:
    """Metacyclic quotients of the tame Galois group of a local field with residue field F_q."""
    params = tame_stage_parameters(q, ell, depth, nu)
    stages = [MetacyclicGroup(ell ** a, ell ** b, q if a else 1) for a, b in params]
    maps = [(lambda s=stages[t + 1], d=stages[t]: s.projection_to(d)) for t in range(len(stages) - 1)]
    return GroupTower(stages, maps)


def tame_stage(q: int, ell: int, a: int, b: int) -> MetacyclicGroup:
    """The stage ``G_{a,b}`` with ``sigma tau sigma^-1 = tau^q``."""
    _check_local(q, ell)
    return MetacyclicGroup(ell ** a, ell ** b, q if a else 1)


def nu0(q: int, ell: int, nu: int) -> int:
    """Exponent ``nu0`` with ``ell^nu0 = gcd(q - 1, ell^nu)``."""
    return valuation(gcd(q - 1, ell ** nu), ell)


def local_field_cohomology(q: int, ell: int, nu: int, top_degree: int = 3, depth: int = 4,
                           model: str = "resolution") -> CohomologyTable:
    """``H^i(G_k; Z/ell^nu)`` for a local field with residue field ``F_q``."""
    _check_local(q, ell)
    if nu < 1:
        raise ParameterError("nu must be >= 1")
    T = tame_local_tower(q, ell, depth, nu)
    tab = profinite_cohomology(T, ell ** nu, top_degree, model=model)
    tab.provenance = "tame local tower colimit"
    v0 = nu0(q, ell, nu)
    expected_h1 = FinAb.from_orders([ell ** nu, ell ** v0])
    tab.notes.append(f"computed H^1 = {tab.group(1)}; unramified plus tame parts give {expected_h1}")
    tab.notes.append(f"reference odd-degree value Z/{ell}^{v0} = {FinAb.from_orders([ell ** v0])} "
                     "omits the unramified summand")
    return tab


def h1_local_brute_force(q: int, ell: int, nu: int) -> FinAb:
    """``Hom(G, Z/ell^nu)`` by enumerating images ``(x, y)`` of ``tau`` and ``sigma``.

    The only relation seen by an abelian target is ``x = q x``.
    """
    n = ell ** nu
    pairs = [(x, y) for x in range(n) for y in range(n) if (q * x - x) % n == 0]
    # the solutions form a subgroup of (Z/n)^2; read off its structure from torsion counts
    counts = [1]
    k = 1
    while True:
        c = sum(1 for x, y in pairs if (ell ** k * x) % n == 0 and (ell ** k * y) % n == 0)
        counts.append(c)
        if c == len(pairs):
            break
        k += 1
    return FinAb.from_orders(structure_from_subgroup_counts(ell, counts))
