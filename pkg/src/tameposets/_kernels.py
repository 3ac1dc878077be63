"""Hot loops: row reduction over F_p and order closure / Hasse reduction.

Each kernel exists twice, a numba-compiled loop and a vectorised numpy
version. Set ``TAMEPOSETS_DISABLE_NUMBA=1`` to force numpy (also used when
numba is missing). Both versions return identical results.
"""

import os

import numpy as np

_DISABLE = os.environ.get("TAMEPOSETS_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    import numba as nb
except ImportError:  # pragma: no cover
    nb = None

BACKEND = "numpy" if (_DISABLE or nb is None) else "numba"


# -- numpy versions ---------------------------------------------------------


def rref_numpy(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.array(a, dtype=np.int64, copy=True) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64)


def closure_numpy(adj: np.ndarray) -> np.ndarray:
    reach = np.array(adj, dtype=bool, copy=True)
    n = reach.shape[0]
    reach[np.arange(n), np.arange(n)] = True
    for k in range(n):
        reach |= np.outer(reach[:, k], reach[k, :])
    return reach


def hasse_numpy(leq: np.ndarray) -> np.ndarray:
    lt = np.array(leq, dtype=bool, copy=True)
    np.fill_diagonal(lt, False)
    li = lt.astype(np.int32)
    return lt & ~((li @ li) > 0)


# -- numba versions ---------------------------------------------------------

if nb is not None:

    @nb.njit(cache=True)
    def _modinv(x, p):
        t, new_t = 0, 1
        r, new_r = p, x % p
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        return t % p

    @nb.njit(cache=True)
    def _rref_nb(a, p):
        rows, cols = a.shape
        for i in range(rows):
            for j in range(cols):
                a[i, j] = a[i, j] % p
        pivots = np.empty(min(rows, cols), np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            inv = _modinv(a[r, c], p)
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i != r:
                    f = a[i, c]
                    if f != 0:
                        for j in range(c, cols):
                            a[i, j] = (a[i, j] - f * a[r, j]) % p
            pivots[r] = c
            r += 1
        return a, pivots[:r].copy()

    @nb.njit(cache=True)
    def _closure_nb(reach):
        n = reach.shape[0]
        for i in range(n):
            reach[i, i] = True
        for k in range(n):
            for i in range(n):
                if reach[i, k]:
                    for j in range(n):
                        if reach[k, j]:
                            reach[i, j] = True
        return reach

    @nb.njit(cache=True)
    def _hasse_nb(leq):
        n = leq.shape[0]
        out = np.zeros((n, n), np.bool_)
        for i in range(n):
            for j in range(n):
                if i == j or not leq[i, j]:
                    continue
                cover = True
                for k in range(n):
                    if k != i and k != j and leq[i, k] and leq[k, j]:
                        cover = False
                        break
                out[i, j] = cover
        return out

    def rref_numba(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
        return _rref_nb(np.array(a, dtype=np.int64, copy=True), np.int64(p))

    def closure_numba(adj: np.ndarray) -> np.ndarray:
        return _closure_nb(np.array(adj, dtype=np.bool_, copy=True))

    def hasse_numba(leq: np.ndarray) -> np.ndarray:
        return _hasse_nb(np.ascontiguousarray(leq, dtype=np.bool_))

else:  # pragma: no cover
    rref_numba = rref_numpy
    closure_numba = closure_numpy
    hasse_numba = hasse_numpy


if BACKEND == "numba":
    rref_kernel = rref_numba
    closure_kernel = closure_numba
    hasse_kernel = hasse_numba
else:
    rref_kernel = rref_numpy
    closure_kernel = closure_numpy
    hasse_kernel = hasse_numpy
