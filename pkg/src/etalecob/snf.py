"""Smith normal forms.

Two kernels live here:

* :func:`smith_normal_form` works over the integers with arbitrary-precision
  Python ints and a smallest-absolute-value pivot rule.
* :func:`local_snf` works over ``Z/p^e`` with numpy ``int64`` arrays.  Over this
  local ring an entry of minimal p-adic valuation divides every other entry,
  so one elimination pass per pivot suffices and entries stay below ``p^e``.

Both are deterministic: ties in the pivot search are broken by the first
position in row-major order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _as_rows(A):
    A = [[int(x) for x in row] for row in (A.tolist() if isinstance(A, np.ndarray) else A)]
    if A and len({len(r) for r in A}) != 1:
        raise ValueError("ragged matrix")
    return A


@dataclass
class IntegerSNF:
    """Result of :func:`integer_snf`: ``U @ A @ V == D``."""

    diagonal: list[int]
    U: list[list[int]] | None
    V: list[list[int]] | None
    U_inv: list[list[int]] | None
    V_inv: list[list[int]] | None
    shape: tuple[int, int]

    def D(self):
        r, c = self.shape
        D = [[0] * c for _ in range(r)]
        for i, d in enumerate(self.diagonal):
            D[i][i] = d
        return D


def integer_snf(A, transforms: bool = True, inverses: bool = False, ncols: int | None = None) -> IntegerSNF:
    """Smith normal form over Z.

    ``diagonal`` lists the nonzero diagonal entries ``d_1 | d_2 | ...`` (all
    positive); zeros are omitted.  ``ncols`` gives the width of an empty matrix.
    """
    A = _as_rows(A)
    r = len(A)
    c = len(A[0]) if A else (ncols or 0)
    track = transforms or inverses
    U = _identity(r) if track else None
    V = _identity(c) if track else None
    Ui = _identity(r) if inverses else None
    Vi = _identity(c) if inverses else None

    def row_axpy(dst, src, q):
        # row_dst -= q * row_src
        Ad, As = A[dst], A[src]
        for j in range(c):
            if As[j]:
                Ad[j] -= q * As[j]
        if track:
            Ud, Us = U[dst], U[src]
            for j in range(r):
                if Us[j]:
                    Ud[j] -= q * Us[j]
        if inverses:
            for row in Ui:
                if row[dst]:
                    row[src] += q * row[dst]

    def col_axpy(dst, src, q):
        # col_dst -= q * col_src
        for row in A:
            if row[src]:
                row[dst] -= q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]
        if inverses:
            Vd, Vs = Vi[dst], Vi[src]
            for j in range(c):
                if Vd[j]:
                    Vs[j] += q * Vd[j]

    def swap_rows(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]
        if inverses:
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]
        if inverses:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    diag = []
    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            row = A[i]
            for j in range(t, c):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            done = True
            piv = A[t][t]
            for i in range(t + 1, r):
                if A[i][t]:
                    row_axpy(i, t, A[i][t] // piv)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, c):
                if A[t][j]:
                    col_axpy(j, t, A[t][j] // piv)
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remainder in row/column t onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, r) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, c) if A[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_axpy(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if track:
                U[t] = [-x for x in U[t]]
            if inverses:
                for row in Ui:
                    row[t] = -row[t]
        diag.append(A[t][t])
        t += 1
    return IntegerSNF(diag, U if transforms or inverses else None,
                      V if transforms or inverses else None, Ui, Vi, (r, c))


def smith_normal_form(A):
    """Return ``(U, D, V)`` with ``U A V = D`` diagonal, ``U``, ``V`` unimodular.

    All three are lists of lists of Python ints.
    """
    res = integer_snf(A, transforms=True)
    return res.U, res.D(), res.V


def invariant_factors(A, ncols: int | None = None) -> list[int]:
    """Nonzero Smith invariants of an integer matrix."""
    return integer_snf(A, transforms=False, ncols=ncols).diagonal


def matmul(A, B):
    """Exact integer matrix product on lists of lists."""
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def determinant(A) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    M = [list(map(int, row)) for row in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# local kernel over Z/p^e


@dataclass
class LocalSNF:
    """``U @ A @ V == diag(p^v_0, p^v_1, ...)`` over ``Z/p^e``.

    ``valuations`` holds the pivot valuations (each < e), nondecreasing.
    Transforms are ``int64`` arrays reduced mod ``p^e`` or ``None``.
    """

    p: int
    e: int
    valuations: list[int]
    U: np.ndarray | None
    V: np.ndarray | None
    U_inv: np.ndarray | None
    V_inv: np.ndarray | None

    @property
    def rank(self) -> int:
        return len(self.valuations)


def _unit_inverse(u: int, q: int) -> int:
    return pow(int(u), -1, q)


def local_snf(A, p: int, e: int, transforms: bool = False, left: bool | None = None,
              right: bool | None = None) -> LocalSNF:
    """Smith normal form of an integer matrix reduced modulo ``p^e``.

    ``transforms`` tracks both sides; ``left``/``right`` select one side
    (the other stays ``None``), which saves most of the work on tall matrices.
    """
    q = p ** e
    if q >= 2 ** 20:
        raise ValueError("modulus too large for the int64 local kernel")
    A = np.array(A, dtype=np.int64) % q
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    r, c = A.shape
    left = transforms if left is None else left
    right = transforms if right is None else right
    U = V = Ui = Vi = None
    if left:
        U = np.eye(r, dtype=np.int64)
        Ui = np.eye(r, dtype=np.int64)
    if right:
        V = np.eye(c, dtype=np.int64)
        Vi = np.eye(c, dtype=np.int64)
    vals = []
    level = 0  # every entry of the remaining block is divisible by p^level
    for t in range(min(r, c)):
        pivot = None
        while level < e and pivot is None:
            step = p ** (level + 1)
            # cheap try: an entry of valuation exactly `level` in column t
            hits = np.flatnonzero(A[t:, t] % step)
            if hits.size:
                pivot = (t + int(hits[0]), t)
                break
            hit = np.flatnonzero(A[t:, t:] % step)
            if hit.size:
                i, j = divmod(int(hit[0]), c - t)
                pivot = (t + i, t + j)
            else:
                level += 1
        if pivot is None:
            break
        i, j = pivot
        vmin = level
        if i != t:
            A[[t, i]] = A[[i, t]]
            if left:
                U[[t, i]] = U[[i, t]]
                Ui[:, [t, i]] = Ui[:, [i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            if right:
                V[:, [t, j]] = V[:, [j, t]]
                Vi[[t, j]] = Vi[[j, t]]
        pk = p ** vmin
        unit = int(A[t, t]) // pk
        if unit != 1:
            inv = _unit_inverse(unit, q)
            A[t] = (A[t] * inv) % q
            if left:
                U[t] = (U[t] * inv) % q
                Ui[:, t] = (Ui[:, t] * unit) % q
        # clear column t below the pivot, touching only the rows that change
        col = A[t + 1:, t] // pk
        nz = np.flatnonzero(col)
        if nz.size:
            rows = t + 1 + nz
            A[rows] = (A[rows] - np.outer(col[nz], A[t])) % q
            if left:
                U[rows] = (U[rows] - np.outer(col[nz], U[t])) % q
                Ui[:, t] = (Ui[:, t] + Ui[:, rows] @ col[nz]) % q
        # column t is now zero off the pivot, so clearing row t only changes row t
        row = A[t, t + 1:] // pk
        if row.any():
            A[t, t + 1:] = 0
            if right:
                V[:, t + 1:] = (V[:, t + 1:] - np.outer(V[:, t], row)) % q
                Vi[t] = (Vi[t] + row @ Vi[t + 1:]) % q
        vals.append(vmin)
    return LocalSNF(p, e, vals, U, V, Ui, Vi)
