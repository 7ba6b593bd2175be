"""Representing objects ``L(S, n)`` and ``K(M, n)``.

``L(S, n)_k`` is the set of functions ``Hom([n], [k]) -> S``; simplicial
operators act by precomposition.  A function is stored as the integer whose
base-``|S|`` digits are its values on the monotone maps ``[n] -> [k]`` (taken
in lexicographic order, so digit positions agree with the level-``n``
simplices of ``Delta[k]``).

For a group ``M``, ``K(M, n)_k = Z^n(Delta[k]; M)`` is cut out of ``L(M, n)_k``
by a Smith-form kernel computation per level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import config
from .cochains import as_finab, differential
from .errors import BudgetExceeded, StructuralError
from .finab import FinAb
from .simplicial import FinSimpSet, SimplicialMap, enumerate_maps, monotone_maps, standard_simplex
from .snf import integer_snf


def _coface(theta: tuple, i: int) -> tuple:
    """``delta_i o theta``: skip the value ``i``."""
    return tuple(v + 1 if v >= i else v for v in theta)


def _codegeneracy(theta: tuple, i: int) -> tuple:
    """``sigma_i o theta``: identify ``i`` and ``i + 1``."""
    return tuple(v - 1 if v > i else v for v in theta)


@dataclass
class EMObject:
    """``L(S, n)`` or ``K(M, n)`` on levels ``0..D``.

    ``members[k]`` lists, for each simplex of the carrier, the encoded
    ``L``-element it stands for (the identity for ``L`` itself).
    """

    kind: str
    n: int
    size: int
    group: FinAb | None
    carrier: FinSimpSet
    homs: list
    members: list

    @property
    def D(self) -> int:
        return self.carrier.D

    def digits(self, k: int, idx=None) -> np.ndarray:
        """Values (as element indices of ``S``) on ``Hom([n],[k])``, one row per simplex."""
        codes = self.members[k] if idx is None else self.members[k][np.asarray(idx)]
        h = len(self.homs[k])
        powers = self.size ** np.arange(h - 1, -1, -1, dtype=np.int64)
        return (np.asarray(codes)[..., None] // powers) % self.size

    def encode(self, k: int, digits) -> np.ndarray:
        digits = np.asarray(digits, dtype=np.int64)
        h = len(self.homs[k])
        powers = self.size ** np.arange(h - 1, -1, -1, dtype=np.int64)
        return digits @ powers

    def index(self, k: int, codes) -> np.ndarray:
        """Carrier indices of encoded ``L``-elements (``-1`` if absent)."""
        codes = np.asarray(codes, dtype=np.int64)
        m = self.members[k]
        pos = np.searchsorted(m, codes)
        pos = np.minimum(pos, len(m) - 1)
        return np.where(m[pos] == codes, pos, -1)

    def cochain(self, k: int, idx) -> np.ndarray:
        """Group coordinates ``(len(Hom), rank)`` of one simplex of a group-valued object."""
        if self.group is None:
            raise StructuralError("object is not group-valued")
        return _coords(self.group, self.digits(k, idx))

    def add(self, k: int, a, b) -> np.ndarray:
        """Levelwise group operation on carrier indices."""
        if self.group is None:
            raise StructuralError("object is not group-valued")
        G = self.group
        s = (_coords(G, self.digits(k, a)) + _coords(G, self.digits(k, b))) % _moduli(G)
        return self.index(k, self.encode(k, _digits(G, s)))

    def zero(self, k: int) -> int:
        return int(self.index(k, np.zeros(1, dtype=np.int64))[0])


def _moduli(G: FinAb) -> np.ndarray:
    return np.array(G.invariant_factors, dtype=np.int64)


def _coords(G: FinAb, digits: np.ndarray) -> np.ndarray:
    """Mixed-radix digits (first summand most significant) -> coordinates."""
    mods = _moduli(G)
    out = np.empty(digits.shape + (len(mods),), dtype=np.int64)
    rest = np.asarray(digits, dtype=np.int64)
    for j in range(len(mods) - 1, -1, -1):
        out[..., j] = rest % mods[j]
        rest = rest // mods[j]
    return out


def _digits(G: FinAb, coords: np.ndarray) -> np.ndarray:
    out = np.zeros(coords.shape[:-1], dtype=np.int64)
    for j, m in enumerate(G.invariant_factors):
        out = out * m + coords[..., j]
    return out


def _group_and_size(S):
    if isinstance(S, FinAb):
        return S, S.order
    if isinstance(S, int):
        return None, S
    if isinstance(S, str):
        G = FinAb.parse(S)
        return G, G.order
    return None, len(S)


def build_L(S, n: int, D: int = 3, budget: int | None = None) -> EMObject:
    """``L(S, n)`` for a finite set (given by its size or a list) or a :class:`FinAb`."""
    G, s = _group_and_size(S)
    if s < 1:
        raise ValueError("S must be nonempty")
    limit = config.budget(budget)
    homs = [monotone_maps(n, k) for k in range(D + 1)]
    sizes = []
    for k in range(D + 1):
        N = s ** len(homs[k])
        if N > limit:
            raise BudgetExceeded(f"L level {k} would have {N} elements (budget {limit})")
        sizes.append(N)
    codes = [np.arange(N, dtype=np.int64) for N in sizes]
    return _assemble("L", n, s, G, homs, codes, basepoint=0 if G is not None else None)


def _assemble(kind, n, s, G, homs, members, basepoint=None) -> EMObject:
    """Face and degeneracy tables by precomposition, restricted to ``members``."""
    D = len(homs) - 1
    obj = EMObject(kind, n, s, G, None, homs, members)
    pos = [{th: j for j, th in enumerate(hk)} for hk in homs]

    def table(k, k2, cols):
        img = obj.index(k2, obj.encode(k2, obj.digits(k)[:, cols]))
        if np.any(img < 0):
            raise StructuralError(f"{kind} level {k} is not closed under a structure map")
        return img

    faces = [[table(k, k - 1, [pos[k][_coface(th, i)] for th in homs[k - 1]]) for i in range(k + 1)]
             for k in range(1, D + 1)]
    degens = [[table(k, k + 1, [pos[k][_codegeneracy(th, i)] for th in homs[k + 1]]) for i in range(k + 1)]
              for k in range(D)]
    obj.carrier = FinSimpSet(D, [len(m) for m in members], faces, degens, basepoint)
    return obj


def _cocycle_generators(delta: np.ndarray, m: int, dim: int) -> tuple[list, list]:
    """Generators and orders of ``ker(delta mod m)`` on ``(Z/m)^dim``."""
    if delta.size == 0:
        return [np.eye(dim, dtype=np.int64)[:, j] for j in range(dim)], [m] * dim
    res = integer_snf(delta.tolist(), transforms=True)
    d = res.diagonal + [0] * (dim - len(res.diagonal))
    V = np.array(res.V, dtype=object)
    gens, orders = [], []
    for j in range(dim):
        g = np.gcd(int(d[j]), m) if d[j] else m
        if g > 1:
            gens.append(((V[:, j] * (m // g)) % m).astype(np.int64))
            orders.append(g)
    return gens, orders


def build_K(M, n: int, D: int = 3, budget: int | None = None) -> EMObject:
    """``K(M, n)`` with level ``k`` the n-cocycles on ``Delta[k]``."""
    M = as_finab(M)
    limit = config.budget(budget)
    homs = [monotone_maps(n, k) for k in range(D + 1)]
    members = []
    for k in range(D + 1):
        h = len(homs[k])
        if M.order ** h >= 2 ** 62:
            raise BudgetExceeded(f"K level {k} codes do not fit in 64 bits")
        delta = differential(standard_simplex(k, n + 1), n)
        per_summand = []
        total = 1
        for m in M.invariant_factors:
            gens, orders = _cocycle_generators(delta, m, h)
            per_summand.append((gens, orders, m))
            for o in orders:
                total *= o
        if total > limit:
            raise BudgetExceeded(f"K level {k} would have {total} elements (budget {limit})")
        coords = np.zeros((total, h, M.rank), dtype=np.int64)
        row = 0
        # enumerate all combinations of kernel generators, summand by summand
        choices = [list(itertools.product(*[range(o) for o in orders])) for _, orders, _ in per_summand]
        for combo in itertools.product(*choices):
            for j, (gens, _, m) in enumerate(per_summand):
                v = np.zeros(h, dtype=np.int64)
                for c, g in zip(combo[j], gens):
                    if c:
                        v = (v + c * g) % m
                coords[row, :, j] = v
            row += 1
        L_size = M.order
        powers = L_size ** np.arange(h - 1, -1, -1, dtype=np.int64)
        codes = _digits(M, coords) @ powers if h else np.zeros(total, dtype=np.int64)
        codes = np.unique(codes)
        if len(codes) != total:
            raise StructuralError("cocycle enumeration produced duplicates")
        members.append(codes)
    # the zero cochain has code 0 and is the smallest member
    return _assemble("K", n, M.order, M, homs, members, basepoint=0)


def differential_map(M, n: int, D: int = 3, budget: int | None = None) -> SimplicialMap:
    """``L(M, n) -> K(M, n + 1)``, levelwise ``alpha -> delta alpha``."""
    M = as_finab(M)
    L = build_L(M, n, D, budget)
    K = build_K(M, n + 1, D, budget)
    mods = _moduli(M)
    maps = []
    for k in range(D + 1):
        delta = differential(standard_simplex(k, n + 1), n)
        c = _coords(M, L.digits(k))
        img = np.einsum("ab,nbj->naj", delta, c) % mods
        idx = K.index(k, K.encode(k, _digits(M, img)))
        if np.any(idx < 0):
            raise StructuralError("delta of a cochain is not a cocycle")
        maps.append(idx)
    f = SimplicialMap(L.carrier, K.carrier, maps)
    f.source_object, f.target_object = L, K
    return f


@lru_cache(maxsize=4)
def _shared_L(M: FinAb, n: int, D: int, limit: int) -> EMObject:
    # sweeps over many X reuse the same (large) representing object
    return build_L(M, n, D, limit)


def representability_check(X: FinSimpSet, M, n: int, budget: int | None = None,
                           max_pairs: int = 10_000) -> bool:
    """Compare simplicial maps ``X -> L(M, n)`` with ``C^n(X; M)``.

    True iff there are exactly ``|M|^{|X_n|}`` maps, evaluation at the
    identity of ``[n]`` is injective, and it is additive (checked on all
    pairs, or on ``max_pairs`` of them).
    """
    M = as_finab(M)
    if n > X.D:
        raise ValueError("n exceeds the truncation of X")
    L = _shared_L(M, n, X.D, config.budget(budget))
    maps = list(enumerate_maps(X, L.carrier, budget=budget))
    expected = M.order ** X.sizes[n]
    if len(maps) != expected:
        return False
    ident = L.homs[n].index(tuple(range(n + 1)))
    levels = [np.stack([f.level_maps[k] for f in maps]) for k in range(X.D + 1)]
    # evaluation at the identity of [n]: one row of M-element indices per map
    keys = L.digits(n, levels[n])[..., ident]
    codes = keys @ (M.order ** np.arange(keys.shape[1], dtype=np.int64))
    if len(np.unique(codes)) != expected:
        return False
    order = np.argsort(codes)
    plus = np.array([[M.element_index(M.add(M.element_from_index(x), M.element_from_index(y)))
                      for y in range(M.order)] for x in range(M.order)], dtype=np.int64)
    pairs = np.arange(min(max_pairs, expected * expected))
    I, J = pairs // expected, pairs % expected
    want = plus[keys[I], keys[J]] @ (M.order ** np.arange(keys.shape[1], dtype=np.int64))
    target = order[np.searchsorted(codes[order], want)]
    for k, A in enumerate(levels):
        summed = L.add(k, A[I].ravel(), A[J].ravel()).reshape(len(pairs), -1)
        if not np.array_equal(summed, A[target]):
            return False
    return True
