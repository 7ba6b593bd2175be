"""Cohomology of cochain complexes of free ``Z/m``-modules.

A complex is a list of integer matrices ``deltas[n]`` of shape
``(dim C^{n+1}, dim C^n)``.  Group structure is computed prime by prime with
the local kernel in :mod:`etalecob.snf`; :func:`cohomology_of_complex` with
``method="integer"`` instead lifts to Z, augments by ``m * identity`` columns
and runs the integer Smith form.  The two routes are independent.
"""

from __future__ import annotations

import itertools
from math import gcd

import numpy as np

from .errors import ComplexError
from .finab import FinAb, factorize, structure_from_subgroup_counts
from .snf import integer_snf, local_snf


def _as_array(M, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    if M is None:
        return np.zeros((rows or 0, cols or 0), dtype=np.int64)
    A = np.asarray(M, dtype=np.int64)
    if A.ndim != 2:
        A = A.reshape((rows or 0, cols or 0))
    return A


def check_complex(deltas, modulus: int) -> None:
    """Raise :class:`ComplexError` unless ``delta[n+1] @ delta[n] == 0 mod modulus``."""
    for n in range(len(deltas) - 1):
        a = np.asarray(deltas[n], dtype=object)
        b = np.asarray(deltas[n + 1], dtype=object)
        if a.size == 0 or b.size == 0:
            continue
        if a.shape[0] != b.shape[1]:
            raise ComplexError(f"shape mismatch between delta^{n} and delta^{n + 1}")
        prod = b.dot(a)
        if any(int(x) % modulus for x in prod.flat):
            raise ComplexError(f"delta^{n + 1} o delta^{n} is not 0 mod {modulus}")


class CyclicCohomology:
    """``H^n`` of a complex over ``Z/p^e`` with an explicit basis.

    ``orders`` lists the cyclic summand orders; ``generators`` holds one
    cocycle representative per summand as columns.  :meth:`coords` maps
    cocycles to coordinates in that basis.
    """

    def __init__(self, A, B, p: int, e: int, dim: int):
        self.p, self.e, self.q = p, e, p ** e
        self.dim = dim
        q = self.q
        A = _as_array(A, dim, 0)
        B = _as_array(B, 0, dim)
        ker = local_snf(B, p, e, right=True) if B.size else None
        if ker is None:
            b = [e] * dim
            Vinv = np.eye(dim, dtype=np.int64)
            V = np.eye(dim, dtype=np.int64)
        else:
            b = list(ker.valuations) + [e] * (dim - ker.rank)
            V, Vinv = ker.V, ker.V_inv
        self._keep = [j for j in range(dim) if b[j] > 0]
        self._b = np.array([b[j] for j in self._keep], dtype=np.int64)
        self._shift = np.array([p ** (e - b[j]) for j in self._keep], dtype=np.int64)
        self._Vinv = Vinv[self._keep] if self._keep else np.zeros((0, dim), dtype=np.int64)
        kappa = (V[:, self._keep] * self._shift) % q if self._keep else np.zeros((dim, 0), dtype=np.int64)
        g0 = len(self._keep)
        if A.size and g0:
            Y = (self._Vinv @ A) % q
            if np.any(Y % self._shift[:, None]):
                raise ComplexError("image of the previous differential is not inside the kernel")
            Z = (Y // self._shift[:, None]) % q
        else:
            Z = np.zeros((g0, 0), dtype=np.int64)
        rel = np.concatenate([Z, np.diag(p ** self._b) % q if g0 else np.zeros((0, 0), dtype=np.int64)], axis=1)
        if g0:
            quo = local_snf(rel, p, e, left=True)
            h = list(quo.valuations) + [e] * (g0 - quo.rank)
            self._U2 = quo.U
            U2inv = quo.U_inv
        else:
            h = []
            self._U2 = np.zeros((0, 0), dtype=np.int64)
            U2inv = np.zeros((0, 0), dtype=np.int64)
        self._live = [i for i in range(g0) if h[i] > 0]
        self.orders = [p ** h[i] for i in self._live]
        if self._live:
            self.generators = (kappa @ U2inv[:, self._live]) % q
        else:
            self.generators = np.zeros((dim, 0), dtype=np.int64)

    @property
    def group(self) -> FinAb:
        return FinAb.from_orders(self.orders)

    def coords(self, x) -> np.ndarray:
        """Coordinates of cocycle(s) ``x`` (vector or columns) in the generator basis."""
        x = np.asarray(x, dtype=np.int64) % self.q
        single = x.ndim == 1
        if single:
            x = x[:, None]
        if not self._live:
            out = np.zeros((0, x.shape[1]), dtype=np.int64)
        else:
            y = (self._Vinv @ x) % self.q
            if np.any(y % self._shift[:, None]):
                raise ValueError("vector is not a cocycle")
            z = y // self._shift[:, None]
            w = (self._U2 @ z) % self.q
            out = w[self._live] % np.array(self.orders, dtype=np.int64)[:, None]
        return out[:, 0] if single else out


def _prime_power_parts(modulus: int) -> list[tuple[int, int]]:
    return sorted(factorize(modulus).items())


def cohomology_of_complex(deltas, modulus: int, method: str = "local", check: bool = True) -> list[FinAb]:
    """``[H^0, ..., H^N]`` of ``0 -> C^0 -> ... -> C^N -> 0`` over ``Z/modulus``.

    ``deltas[n]`` is the matrix of ``C^n -> C^{n+1}``; ``N = len(deltas)``.
    An empty ``deltas`` list is not enough to know ``dim C^0``, so pass at
    least one (possibly ``(0, c)``-shaped) matrix.
    """
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    deltas = [_as_array(d) for d in deltas]
    if check:
        check_complex(deltas, modulus)
    dims = [d.shape[1] for d in deltas] + [deltas[-1].shape[0]] if deltas else []
    out = []
    for n in range(len(dims)):
        A = deltas[n - 1] if n > 0 else None
        B = deltas[n] if n < len(deltas) else None
        if method == "local":
            orders = []
            for p, e in _prime_power_parts(modulus):
                orders.extend(CyclicCohomology(A, B, p, e, dims[n]).orders)
            out.append(FinAb.from_orders(orders))
        elif method == "integer":
            out.append(_integer_route(A, B, modulus, dims[n]))
        else:
            raise ValueError(f"unknown method {method!r}")
    return out


def _integer_route(A, B, q: int, dim: int) -> FinAb:
    if dim == 0:
        return FinAb.trivial()
    if B is not None and B.size:
        res = integer_snf(B.tolist(), transforms=False, inverses=True)
        d = res.diagonal + [0] * (dim - len(res.diagonal))
        Vinv = res.V_inv
    else:
        d = [0] * dim
        Vinv = [[int(i == j) for j in range(dim)] for i in range(dim)]
    g = [gcd(x, q) for x in d]
    A_rows = A.tolist() if A is not None and A.size else [[] for _ in range(dim)]
    aug = [list(map(int, A_rows[i])) + [q * int(i == j) for j in range(dim)] for i in range(dim)]
    Y = []
    for j in range(dim):
        row = [sum(Vinv[j][k] * aug[k][c] for k in range(dim) if Vinv[j][k]) for c in range(len(aug[0]))]
        scaled = []
        for x in row:
            num = x * g[j]
            if num % q:
                raise ComplexError("image of the previous differential is not inside the kernel")
            scaled.append(num // q)
        Y.append(scaled)
    inv = integer_snf(Y, transforms=False).diagonal
    return FinAb.from_orders([x for x in inv if x > 1])


def image_group(F, target_orders) -> FinAb:
    """Subgroup of ``Z/b_1 + ... + Z/b_g`` generated by the columns of ``F``."""
    g = len(target_orders)
    if g == 0:
        return FinAb.trivial()
    F = [[int(x) for x in row] for row in np.asarray(F, dtype=object).reshape(g, -1).tolist()]
    k = len(F[0]) if F else 0
    if g == 0 or k == 0:
        return FinAb.trivial()
    M = [F[i] + [int(target_orders[i]) * int(i == j) for j in range(g)] for i in range(g)]
    res = integer_snf(M, transforms=True)
    s = len(res.diagonal)
    kernel = [row[s:] for row in res.V[:k]]
    inv = integer_snf(kernel, transforms=False, ncols=k + g - s).diagonal
    return FinAb.from_orders([x for x in inv if x > 1])


def brute_force_cohomology(deltas, modulus: int, degree: int) -> FinAb:
    """Exhaustive kernel/image enumeration; only for tiny complexes.

    Independent of every Smith-form routine: the group structure is read off
    from counts of ``p^k``-torsion elements in the quotient.
    """
    deltas = [np.asarray(d, dtype=np.int64) for d in deltas]
    dims = [d.shape[1] for d in deltas] + [deltas[-1].shape[0]]
    n = degree
    cn = dims[n]
    vecs = [np.array(v, dtype=np.int64) for v in itertools.product(range(modulus), repeat=cn)]
    if n < len(deltas):
        kernel = [v for v in vecs if not np.any((deltas[n] @ v) % modulus)]
    else:
        kernel = vecs
    if n > 0:
        prev = itertools.product(range(modulus), repeat=dims[n - 1])
        image = {tuple((deltas[n - 1] @ np.array(w, dtype=np.int64)) % modulus) for w in prev}
    else:
        image = {tuple([0] * cn)}
    h_order = len(kernel) // len(image)
    orders = []
    for p in factorize(h_order) if h_order > 1 else []:
        counts = [1]
        k = 1
        while True:
            c = sum(1 for v in kernel if tuple((p ** k * v) % modulus) in image) // len(image)
            # only the p-primary part contributes to |H[p^k]|
            counts.append(c)
            if c == counts[-2] and k > 1:
                break
            k += 1
        orders.extend(structure_from_subgroup_counts(p, counts))
    return FinAb.from_orders(orders)
