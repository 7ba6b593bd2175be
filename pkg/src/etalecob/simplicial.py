"""Levelwise-finite, dimension-truncated simplicial sets.

Simplices are dense integer indices per level; face and degeneracy maps are
``int64`` lookup tables.  Degenerate simplices are stored explicitly, so the
cochain complexes built from these objects are the unnormalized ones.

A truncated object ``X`` knows its levels ``0..D``.  ``dimension`` records the
largest dimension of a nondegenerate simplex when a constructor can prove it
(for instance a finite cell structure); it is ``None`` otherwise.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import config
from .errors import BudgetExceeded, StructuralError


# ---------------------------------------------------------------------------
# the simplex category


def monotone_maps(k: int, n: int) -> list[tuple[int, ...]]:
    """All nondecreasing maps ``[k] -> [n]`` as tuples, in lexicographic order."""
    return list(itertools.combinations_with_replacement(range(n + 1), k + 1))


def drop(theta: tuple, i: int) -> tuple:
    """``theta o delta_i``: precompose with the i-th coface."""
    return theta[:i] + theta[i + 1:]


def repeat(theta: tuple, i: int) -> tuple:
    """``theta o sigma_i``: precompose with the i-th codegeneracy."""
    return theta[: i + 1] + theta[i:]


# ---------------------------------------------------------------------------


class FinSimpSet:
    """A simplicial set with finite levels ``X_0 .. X_D``.

    ``faces[k][i]`` (``1 <= k <= D``) maps ``X_k -> X_{k-1}``;
    ``degeneracies[k][i]`` (``0 <= k < D``) maps ``X_k -> X_{k+1}``.
    """

    def __init__(self, truncation: int, sizes, faces, degeneracies, basepoint: int | None = None,
                 dimension: int | None = None, labels=None, check: bool = True):
        self.truncation = int(truncation)
        self.sizes = [int(s) for s in sizes]
        if len(self.sizes) != self.truncation + 1:
            raise StructuralError("need one size per level 0..D")
        self.faces = [[]] + [[np.asarray(f, dtype=np.int64) for f in fs] for fs in faces]
        self.degeneracies = [[np.asarray(s, dtype=np.int64) for s in ss] for ss in degeneracies]
        self.basepoint = None if basepoint is None else int(basepoint)
        self.dimension = dimension
        self.labels = labels
        if check:
            self.validate()

    # -- structure ----------------------------------------------------------

    @property
    def D(self) -> int:
        return self.truncation

    @property
    def pointed(self) -> bool:
        return self.basepoint is not None

    def face(self, k: int, i: int) -> np.ndarray:
        return self.faces[k][i]

    def degeneracy(self, k: int, i: int) -> np.ndarray:
        return self.degeneracies[k][i]

    def validate(self) -> None:
        D, n = self.D, self.sizes
        if len(self.faces) != D + 1 or len(self.degeneracies) != D:
            raise StructuralError("wrong number of face/degeneracy levels")
        for k in range(1, D + 1):
            if len(self.faces[k]) != k + 1:
                raise StructuralError(f"level {k} needs {k + 1} faces")
            for f in self.faces[k]:
                if f.shape != (n[k],) or (n[k] and (f.min() < 0 or f.max() >= n[k - 1])):
                    raise StructuralError(f"face table at level {k} does not land in level {k - 1}")
        for k in range(D):
            if len(self.degeneracies[k]) != k + 1:
                raise StructuralError(f"level {k} needs {k + 1} degeneracies")
            for s in self.degeneracies[k]:
                if s.shape != (n[k],) or (n[k] and (s.min() < 0 or s.max() >= n[k + 1])):
                    raise StructuralError(f"degeneracy table at level {k} does not land in level {k + 1}")
                if len(np.unique(s)) != n[k]:
                    raise StructuralError(f"degeneracy at level {k} is not injective")
        d, s = self.faces, self.degeneracies
        for k in range(2, D + 1):
            for j in range(k + 1):
                for i in range(j):
                    if not np.array_equal(d[k - 1][i][d[k][j]], d[k - 1][j - 1][d[k][i]]):
                        raise StructuralError(f"d_{i} d_{j} != d_{j - 1} d_{i} on level {k}")
        for k in range(D):
            ident = np.arange(n[k])
            for j in range(k + 1):
                sj = s[k][j]
                for i in range(k + 2):
                    lhs = d[k + 1][i][sj]
                    if i < j:
                        rhs = s[k - 1][j - 1][d[k][i]]
                    elif i in (j, j + 1):
                        rhs = ident
                    else:
                        rhs = s[k - 1][j][d[k][i - 1]]
                    if not np.array_equal(lhs, rhs):
                        raise StructuralError(f"d_{i} s_{j} identity fails on level {k}")
            if k + 1 < D:
                for j in range(k + 1):
                    for i in range(j + 1):
                        if not np.array_equal(s[k + 1][i][s[k][j]], s[k + 1][j + 1][s[k][i]]):
                            raise StructuralError(f"s_{i} s_{j} != s_{j + 1} s_{i} on level {k}")
        if self.basepoint is not None and not 0 <= self.basepoint < n[0]:
            raise StructuralError("basepoint out of range")

    @cached_property
    def _degenerate_masks(self) -> list[np.ndarray]:
        masks = [np.zeros(self.sizes[0], dtype=bool)]
        for k in range(1, self.D + 1):
            m = np.zeros(self.sizes[k], dtype=bool)
            for sj in self.degeneracies[k - 1]:
                m[sj] = True
            masks.append(m)
        return masks

    def nondegenerate(self, k: int) -> np.ndarray:
        """Indices of nondegenerate simplices in level ``k``."""
        return np.flatnonzero(~self._degenerate_masks[k])

    def census(self) -> list[int]:
        """Number of nondegenerate simplices in each level."""
        return [len(self.nondegenerate(k)) for k in range(self.D + 1)]

    def basepoint_at(self, k: int) -> int:
        """Index of the basepoint's iterated degeneracy in level ``k``."""
        if self.basepoint is None:
            raise StructuralError("object is not pointed")
        b = self.basepoint
        for j in range(k):
            b = int(self.degeneracies[j][0][b])
        return b

    def known_dimension(self) -> int | None:
        return self.dimension

    def with_basepoint(self, basepoint: int | None) -> "FinSimpSet":
        return FinSimpSet(self.D, self.sizes, self.faces[1:], self.degeneracies, basepoint,
                          self.dimension, self.labels, check=False)

    def truncate(self, D: int) -> "FinSimpSet":
        if D > self.D:
            raise StructuralError("cannot raise the truncation")
        return FinSimpSet(D, self.sizes[: D + 1], self.faces[1: D + 1], self.degeneracies[:D],
                          self.basepoint, self.dimension,
                          None if self.labels is None else self.labels[: D + 1], check=False)

    def __repr__(self) -> str:
        pt = f", basepoint={self.basepoint}" if self.pointed else ""
        return f"FinSimpSet(D={self.D}, sizes={self.sizes}{pt})"

    # -- io -------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "truncation": self.D,
            "levels": self.sizes,
            "faces": [[f.tolist() for f in self.faces[k]] for k in range(1, self.D + 1)],
            "degeneracies": [[s.tolist() for s in self.degeneracies[k]] for k in range(self.D)],
            "basepoint": self.basepoint,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data) -> "FinSimpSet":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(data["truncation"], data["levels"], data["faces"], data["degeneracies"],
                       data.get("basepoint"), dimension=data.get("dimension"))
        except KeyError as exc:
            raise StructuralError(f"missing field {exc}") from None


def from_keys(levels, face, degen, basepoint=None, dimension=None, check=True) -> FinSimpSet:
    """Build tables from hashable simplex keys.

    ``levels[k]`` lists the keys of ``X_k``; ``face(key, i)`` and
    ``degen(key, i)`` return keys of the neighbouring level.
    """
    D = len(levels) - 1
    index = [{key: n for n, key in enumerate(lv)} for lv in levels]
    try:
        faces = [[[index[k - 1][face(x, i)] for x in levels[k]] for i in range(k + 1)] for k in range(1, D + 1)]
        degens = [[[index[k + 1][degen(x, i)] for x in levels[k]] for i in range(k + 1)] for k in range(D)]
    except KeyError as exc:
        raise StructuralError(f"structure map leaves the declared levels: {exc}") from None
    bp = None if basepoint is None else index[0][basepoint]
    return FinSimpSet(D, [len(lv) for lv in levels], faces, degens, bp, dimension,
                      labels=[list(lv) for lv in levels], check=check)


# ---------------------------------------------------------------------------
# constructors


def standard_simplex(n: int, D: int = config.DEFAULT_TRUNCATION) -> FinSimpSet:
    """``Delta[n]``: level k is the set of monotone maps ``[k] -> [n]``."""
    if n < 0 or D < 0:
        raise ValueError("n and D must be non-negative")
    levels = [monotone_maps(k, n) for k in range(D + 1)]
    return from_keys(levels, drop, repeat, dimension=n)


def point(D: int = config.DEFAULT_TRUNCATION) -> FinSimpSet:
    return standard_simplex(0, D).with_basepoint(0)


def from_cells(cells: dict, faces: dict, D: int, basepoint=None) -> FinSimpSet:
    """Simplicial set generated by nondegenerate cells.

    ``cells[m]`` lists the names of the m-cells.  ``faces[name]`` lists the
    ``m + 1`` faces of an m-cell, each either a cell name or a pair
    ``(surjection, name)`` denoting a degeneracy of that cell, where the
    surjection is a tuple ``[m - 1] -> [dim]`` (e.g. ``((0, 0), "v")`` is the
    degenerate edge at vertex ``v``).
    """
    dim_of = {}
    for m, names in cells.items():
        for name in names:
            if name in dim_of:
                raise StructuralError(f"duplicate cell {name!r}")
            dim_of[name] = int(m)

    def simplex(obj):
        if isinstance(obj, tuple) and len(obj) == 2 and isinstance(obj[0], tuple):
            eta, name = obj
            return tuple(eta), name
        return tuple(range(dim_of[obj] + 1)), obj

    cell_faces = {}
    for name, m in dim_of.items():
        if m == 0:
            continue
        fs = [simplex(f) for f in faces[name]]
        if len(fs) != m + 1:
            raise StructuralError(f"cell {name!r} needs {m + 1} faces")
        for eta, y in fs:
            if len(eta) != m or set(eta) != set(range(dim_of[y] + 1)):
                raise StructuralError(f"bad face {eta, y} of cell {name!r}")
        cell_faces[name] = fs

    levels = []
    for k in range(D + 1):
        lv = []
        for name, m in sorted(dim_of.items(), key=lambda t: (t[1], str(t[0]))):
            if m > k:
                continue
            for eta in monotone_maps(k, m):
                if set(eta) == set(range(m + 1)):
                    lv.append((eta, name))
        levels.append(lv)

    def face(x, i):
        eta, name = x
        e2 = drop(eta, i)
        m = dim_of[name]
        missing = set(range(m + 1)) - set(e2)
        if not missing:
            return e2, name
        (j,) = missing
        e3 = tuple(v - 1 if v > j else v for v in e2)
        zeta, y = cell_faces[name][j]
        return tuple(zeta[a] for a in e3), y

    def degen(x, i):
        eta, name = x
        return repeat(eta, i), name

    bp = None if basepoint is None else ((0,), basepoint)
    dim = max(dim_of.values()) if dim_of else 0
    return from_keys(levels, face, degen, bp, dimension=dim)


def sphere(m: int, D: int = config.DEFAULT_TRUNCATION) -> FinSimpSet:
    """``S^m = Delta[m] / boundary`` with one vertex and one m-cell (m = 1 or 2)."""
    if m not in (1, 2):
        raise ValueError("sphere supports m = 1 or 2")
    degenerate = (tuple([0] * m), "*")
    return from_cells({0: ["*"], m: ["e"]}, {"e": [degenerate] * (m + 1)}, D, basepoint="*")


def moore_space(ell: int, D: int = config.DEFAULT_TRUNCATION) -> FinSimpSet:
    """``S^1`` with a 2-cell attached along a degree-``ell`` map, one vertex."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    loop = ((0, 0), "*")
    edges = ["c1"] + [f"c{k}" for k in range(2, ell + 1)]
    triangles = [f"s{k}" for k in range(2, ell + 1)] + ["t"]
    faces = {c: ["*", "*"] for c in edges}
    for k in range(2, ell + 1):
        # d0 = c1, d1 = c_k, d2 = c_{k-1}: boundary says c_k = c_{k-1} + c1
        faces[f"s{k}"] = ["c1", f"c{k}", f"c{k - 1}"]
    faces["t"] = [loop, f"c{ell}", loop]
    return from_cells({0: ["*"], 1: edges, 2: triangles}, faces, D, basepoint="*")


def disjoint_union(X: FinSimpSet, Y: FinSimpSet) -> FinSimpSet:
    D = min(X.D, Y.D)
    X, Y = X.truncate(D), Y.truncate(D)
    off = X.sizes
    faces = [[np.concatenate([X.faces[k][i], Y.faces[k][i] + off[k - 1]]) for i in range(k + 1)]
             for k in range(1, D + 1)]
    degens = [[np.concatenate([X.degeneracies[k][i], Y.degeneracies[k][i] + off[k + 1]]) for i in range(k + 1)]
              for k in range(D)]
    dim = None if X.dimension is None or Y.dimension is None else max(X.dimension, Y.dimension)
    return FinSimpSet(D, [a + b for a, b in zip(X.sizes, Y.sizes)], faces, degens, X.basepoint, dim, check=False)


def plus(X: FinSimpSet) -> FinSimpSet:
    """``X_+``: X with a disjoint basepoint (the last vertex)."""
    U = disjoint_union(X.with_basepoint(None), standard_simplex(0, X.D))
    return U.with_basepoint(U.sizes[0] - 1)


def s0(D: int = config.DEFAULT_TRUNCATION) -> FinSimpSet:
    return plus(point(D))


def product(X: FinSimpSet, Y: FinSimpSet) -> FinSimpSet:
    D = min(X.D, Y.D)
    sizes = [X.sizes[k] * Y.sizes[k] for k in range(D + 1)]

    def pair(a, b, ny):
        return a * ny + b

    faces = [[pair(X.faces[k][i][np.repeat(np.arange(X.sizes[k]), Y.sizes[k])],
                   Y.faces[k][i][np.tile(np.arange(Y.sizes[k]), X.sizes[k])], Y.sizes[k - 1])
              for i in range(k + 1)] for k in range(1, D + 1)]
    degens = [[pair(X.degeneracies[k][i][np.repeat(np.arange(X.sizes[k]), Y.sizes[k])],
                    Y.degeneracies[k][i][np.tile(np.arange(Y.sizes[k]), X.sizes[k])], Y.sizes[k + 1])
               for i in range(k + 1)] for k in range(D)]
    bp = None
    if X.pointed and Y.pointed:
        bp = X.basepoint * Y.sizes[0] + Y.basepoint
    dim = None if X.dimension is None or Y.dimension is None else X.dimension + Y.dimension
    return FinSimpSet(D, sizes, faces, degens, bp, dim, check=False)


def smash(X: FinSimpSet, Y: FinSimpSet) -> FinSimpSet:
    """``(X x Y) / (X v Y)``, truncated at ``min(D_X, D_Y)``."""
    if not (X.pointed and Y.pointed):
        raise StructuralError("smash needs pointed inputs")
    D = min(X.D, Y.D)
    P = product(X.truncate(D), Y.truncate(D))
    wedge = []
    for k in range(D + 1):
        bx, by = X.basepoint_at(k), Y.basepoint_at(k)
        idx = np.arange(P.sizes[k])
        a, b = idx // Y.sizes[k], idx % Y.sizes[k]
        wedge.append(np.flatnonzero((a == bx) | (b == by)))
    return quotient(P, wedge)


# ---------------------------------------------------------------------------
# maps


class SimplicialMap:
    """Levelwise functions ``X_k -> Y_k`` for ``k <= min(D_X, D_Y)``."""

    def __init__(self, source: FinSimpSet, target: FinSimpSet, level_maps, check: bool = True):
        self.source = source
        self.target = target
        D = min(source.D, target.D)
        self.level_maps = [np.asarray(f, dtype=np.int64) for f in level_maps][: D + 1]
        if len(self.level_maps) != D + 1:
            raise StructuralError("need a function on every common level")
        if check:
            self.validate()

    @property
    def D(self) -> int:
        return len(self.level_maps) - 1

    def validate(self) -> None:
        X, Y, f = self.source, self.target, self.level_maps
        for k in range(self.D + 1):
            if f[k].shape != (X.sizes[k],) or (X.sizes[k] and (f[k].min() < 0 or f[k].max() >= Y.sizes[k])):
                raise StructuralError(f"level map {k} has the wrong shape or range")
        for k in range(1, self.D + 1):
            for i in range(k + 1):
                if not np.array_equal(Y.faces[k][i][f[k]], f[k - 1][X.faces[k][i]]):
                    raise StructuralError(f"map does not commute with d_{i} on level {k}")
        for k in range(self.D):
            for i in range(k + 1):
                if not np.array_equal(Y.degeneracies[k][i][f[k]], f[k + 1][X.degeneracies[k][i]]):
                    raise StructuralError(f"map does not commute with s_{i} on level {k}")
        if X.pointed and Y.pointed and f[0][X.basepoint] != Y.basepoint:
            raise StructuralError("map does not preserve basepoints")

    @classmethod
    def identity(cls, X: FinSimpSet) -> "SimplicialMap":
        return cls(X, X, [np.arange(n) for n in X.sizes], check=False)

    @classmethod
    def constant(cls, X: FinSimpSet, Y: FinSimpSet, vertex: int | None = None) -> "SimplicialMap":
        v = Y.basepoint if vertex is None else vertex
        maps = []
        for k in range(min(X.D, Y.D) + 1):
            b = v
            for j in range(k):
                b = int(Y.degeneracies[j][0][b])
            maps.append(np.full(X.sizes[k], b))
        return cls(X, Y, maps)

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """``self o other``."""
        D = min(self.D, other.D)
        return SimplicialMap(other.source, self.target,
                             [self.level_maps[k][other.level_maps[k]] for k in range(D + 1)], check=False)

    def is_injective(self) -> bool:
        return all(len(np.unique(f)) == len(f) for f in self.level_maps)

    def is_bijective(self) -> bool:
        return self.is_injective() and all(len(f) == n for f, n in zip(self.level_maps, self.target.sizes))

    def image(self) -> list[np.ndarray]:
        return [np.unique(f) for f in self.level_maps]


# ---------------------------------------------------------------------------
# sub-objects, skeleta, quotients


def _subsets(X: FinSimpSet, A) -> list[np.ndarray]:
    if isinstance(A, SimplicialMap):
        if A.target is not X or not A.is_injective():
            raise StructuralError("sub-object must be an injective map into X")
        A = A.image()
    subs = [np.unique(np.asarray(a, dtype=np.int64)) for a in A]
    if len(subs) != X.D + 1:
        raise StructuralError("sub-object needs one subset per level")
    for k in range(X.D + 1):
        mask = np.zeros(X.sizes[k], dtype=bool)
        mask[subs[k]] = True
        if k >= 1:
            for f in X.faces[k]:
                prev = np.zeros(X.sizes[k - 1], dtype=bool)
                prev[subs[k - 1]] = True
                if not prev[f[subs[k]]].all():
                    raise StructuralError(f"subset not closed under faces at level {k}")
        if k < X.D:
            nxt = np.zeros(X.sizes[k + 1], dtype=bool)
            nxt[subs[k + 1]] = True
            for s in X.degeneracies[k]:
                if not nxt[s[subs[k]]].all():
                    raise StructuralError(f"subset not closed under degeneracies at level {k}")
    return subs


def subobject(X: FinSimpSet, A) -> tuple[FinSimpSet, SimplicialMap]:
    """Restrict ``X`` to a closed levelwise subset; return it with its inclusion."""
    subs = _subsets(X, A)
    relabel = []
    for k in range(X.D + 1):
        r = np.full(X.sizes[k], -1, dtype=np.int64)
        r[subs[k]] = np.arange(len(subs[k]))
        relabel.append(r)
    faces = [[relabel[k - 1][X.faces[k][i][subs[k]]] for i in range(k + 1)] for k in range(1, X.D + 1)]
    degens = [[relabel[k + 1][X.degeneracies[k][i][subs[k]]] for i in range(k + 1)] for k in range(X.D)]
    bp = None
    if X.pointed and relabel[0][X.basepoint] >= 0:
        bp = int(relabel[0][X.basepoint])
    S = FinSimpSet(X.D, [len(s) for s in subs], faces, degens, bp, X.dimension, check=False)
    return S, SimplicialMap(S, X, subs, check=False)


def generated(X: FinSimpSet, simplices) -> list[np.ndarray]:
    """Smallest closed levelwise subset containing the ``(level, index)`` pairs."""
    masks = [np.zeros(n, dtype=bool) for n in X.sizes]
    for k, x in simplices:
        masks[k][x] = True
    # faces first, top down, then degeneracies bottom up
    for k in range(X.D, 0, -1):
        for f in X.faces[k]:
            masks[k - 1][f[masks[k]]] = True
    for k in range(X.D):
        for s in X.degeneracies[k]:
            masks[k + 1][s[masks[k]]] = True
    return [np.flatnonzero(m) for m in masks]


def skeleton(X: FinSimpSet, p: int) -> tuple[FinSimpSet, SimplicialMap]:
    """Sub-object generated by the simplices of dimension ``<= p``, with its inclusion."""
    if p < 0 or p > X.D:
        raise ValueError("need 0 <= p <= truncation")
    subs = [np.arange(X.sizes[k]) for k in range(p + 1)]
    for k in range(p + 1, X.D + 1):
        subs.append(np.unique(np.concatenate([s[subs[k - 1]] for s in X.degeneracies[k - 1]])))
    S, inc = subobject(X, subs)
    S.dimension = p if X.dimension is None else min(p, X.dimension)
    return S, inc


def boundary_simplex(n: int, D: int = config.DEFAULT_TRUNCATION) -> FinSimpSet:
    """``boundary Delta[n]`` as the (n-1)-skeleton of ``Delta[n]``."""
    return skeleton(standard_simplex(n, D), n - 1)[0]


def quotient_map(X: FinSimpSet, A) -> SimplicialMap:
    """The collapse ``X -> X/A``; ``X/A`` is pointed at the class of ``A``."""
    subs = _subsets(X, A)
    if len(subs[0]) == 0:
        raise StructuralError("cannot collapse an empty sub-object; use plus()")
    relabel = []
    sizes = []
    for k in range(X.D + 1):
        r = np.zeros(X.sizes[k], dtype=np.int64)
        keep = np.ones(X.sizes[k], dtype=bool)
        keep[subs[k]] = False
        r[keep] = np.arange(1, keep.sum() + 1)
        relabel.append(r)
        sizes.append(int(keep.sum()) + 1)
    faces = []
    for k in range(1, X.D + 1):
        fk = []
        for i in range(k + 1):
            t = np.zeros(sizes[k], dtype=np.int64)
            t[relabel[k][relabel[k] > 0]] = relabel[k - 1][X.faces[k][i][relabel[k] > 0]]
            fk.append(t)
        faces.append(fk)
    degens = []
    for k in range(X.D):
        sk = []
        for i in range(k + 1):
            t = np.zeros(sizes[k], dtype=np.int64)
            t[relabel[k][relabel[k] > 0]] = relabel[k + 1][X.degeneracies[k][i][relabel[k] > 0]]
            sk.append(t)
        degens.append(sk)
    Q = FinSimpSet(X.D, sizes, faces, degens, 0, X.dimension, check=False)
    return SimplicialMap(X, Q, relabel, check=False)


def quotient(X: FinSimpSet, A) -> FinSimpSet:
    """``X/A`` with ``A`` collapsed to the basepoint.

    ``A`` is a list of index subsets per level or an injective map into X.
    """
    if not isinstance(A, SimplicialMap) and all(len(a) == 0 for a in A):
        return plus(X)
    return quotient_map(X, A).target


def basepoint_subobject(X: FinSimpSet) -> list[np.ndarray]:
    return [np.array([X.basepoint_at(k)]) for k in range(X.D + 1)]


# ---------------------------------------------------------------------------
# components and maps


def pi0(X: FinSimpSet) -> list[frozenset]:
    """Connected components of the vertex set, as sorted frozensets."""
    parent = list(range(X.sizes[0]))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    if X.D >= 1:
        for a, b in zip(X.faces[1][0].tolist(), X.faces[1][1].tolist()):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    classes: dict[int, set] = {}
    for v in range(X.sizes[0]):
        classes.setdefault(find(v), set()).add(v)
    return sorted((frozenset(c) for c in classes.values()), key=min)


def enumerate_maps(X: FinSimpSet, Y: FinSimpSet, pointed: bool = False, budget: int | None = None):
    """All simplicial maps ``X -> Y`` on the common levels, by exhaustive search.

    Nondegenerate simplices of one level are independent once lower levels
    are fixed, so each level contributes a product of candidate lists.
    Raises :class:`BudgetExceeded` past ``budget`` maps.
    """
    limit = config.budget(budget)
    D = min(X.D, Y.D)
    if pointed and not (X.pointed and Y.pointed):
        raise StructuralError("pointed enumeration needs pointed objects")
    lookup = [None]
    for k in range(1, D + 1):
        table: dict[tuple, list[int]] = {}
        keys = np.stack([Y.faces[k][i] for i in range(k + 1)], axis=1)
        for z, key in enumerate(map(tuple, keys.tolist())):
            table.setdefault(key, []).append(z)
        lookup.append(table)
    # one (j, y) with x = s_j y for every degenerate x
    reps = [None]
    for k in range(1, D + 1):
        rep = {}
        for j in range(k):
            for y, x in enumerate(X.degeneracies[k - 1][j].tolist()):
                rep.setdefault(x, (j, y))
        reps.append(rep)
    nondeg = [X.nondegenerate(k).tolist() for k in range(D + 1)]
    count = 0

    def level0():
        free = [v for v in range(X.sizes[0]) if not (pointed and v == X.basepoint)]
        for choice in itertools.product(range(Y.sizes[0]), repeat=len(free)):
            f = np.empty(X.sizes[0], dtype=np.int64)
            if pointed:
                f[X.basepoint] = Y.basepoint
            f[free] = choice
            yield [f]

    def extend(k, fs):
        nonlocal count
        if k > D:
            count += 1
            if count > limit:
                raise BudgetExceeded(f"more than {limit} simplicial maps")
            yield fs
            return
        prev = fs[-1]
        f = np.empty(X.sizes[k], dtype=np.int64)
        for x, (j, y) in reps[k].items():
            f[x] = Y.degeneracies[k - 1][j][prev[y]]
        cands = []
        for x in nondeg[k]:
            key = tuple(int(prev[X.faces[k][i][x]]) for i in range(k + 1))
            c = lookup[k].get(key)
            if not c:
                return
            cands.append(c)
        for choice in itertools.product(*cands):
            g = f.copy()
            g[nondeg[k]] = choice
            yield from extend(k + 1, fs + [g])

    for start in level0():
        for fs in extend(1, start):
            yield SimplicialMap(X, Y, fs, check=False)


def count_maps(X, Y, pointed=False, budget=None) -> int:
    return sum(1 for _ in enumerate_maps(X, Y, pointed, budget))


def mapping_space_level(W: FinSimpSet, Y: FinSimpSet, n: int, budget: int | None = None) -> list[SimplicialMap]:
    """Pointed maps ``W ^ Delta[n]_+ -> Y`` on the stored levels."""
    if not (W.pointed and Y.pointed):
        raise StructuralError("mapping spaces need pointed objects")
    source = smash(W, plus(standard_simplex(n, W.D)))
    return list(enumerate_maps(source, Y, pointed=True, budget=budget))


def find_isomorphism(X: FinSimpSet, Y: FinSimpSet, budget: int | None = None) -> SimplicialMap | None:
    """A levelwise bijective simplicial map ``X -> Y`` if one exists."""
    if X.D != Y.D or X.sizes != Y.sizes:
        return None
    for f in enumerate_maps(X, Y, pointed=X.pointed and Y.pointed, budget=budget):
        if f.is_bijective():
            return f
    return None


# ---------------------------------------------------------------------------
# towers


@dataclass
class Tower:
    """Finite inverse system ``X^(0) <- X^(1) <- ... <- X^(T)``.

    ``bonds[t]`` is a simplicial map ``stages[t + 1] -> stages[t]``.
    """

    stages: list
    bonds: list = field(default_factory=list)

    def __post_init__(self):
        if not self.stages:
            raise StructuralError("a tower needs at least one stage")
        if len(self.bonds) != len(self.stages) - 1:
            raise StructuralError("need one bond between consecutive stages")
        for t, b in enumerate(self.bonds):
            if b.source is not self.stages[t + 1] or b.target is not self.stages[t]:
                raise StructuralError(f"bond {t} does not connect stages {t + 1} -> {t}")

    def __len__(self) -> int:
        return len(self.stages)


def tower_from(X: FinSimpSet) -> Tower:
    return Tower([X], [])
