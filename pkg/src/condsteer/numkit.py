"""Small dense linear algebra for bipartite operators.

Everything here works on plain numpy arrays. Spectra come from a cyclic
Jacobi eigensolver: Hermitian input is mapped to its real-symmetric
embedding ``[[Re, -Im], [Im, Re]]``, whose eigenvalues are those of the
original matrix, each appearing twice.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, OutOfRange

try:
    from numba import njit
except ImportError:  # pragma: no cover - slow pure-Python fallback

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

SUBSYSTEMS = ("A", "B")


@njit(cache=True)
def _jacobi_eigenvalues(a, tol, max_sweeps):
    """Cyclic Jacobi on a real symmetric matrix.

    Returns ``(diagonal, sweeps)``; ``sweeps`` is -1 when the off-diagonal
    Frobenius norm did not drop below ``tol`` within ``max_sweeps``.
    """
    a = a.copy()
    n = a.shape[0]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        if np.sqrt(off) < tol:
            return np.diag(a).copy(), sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                # exact zero keeps round-off from re-filling the pivot
                a[p, q] = 0.0
                a[q, p] = 0.0
    return np.diag(a).copy(), -1


def _square(m: np.ndarray) -> int:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m.shape[0]


@njit(cache=True)
def _spectrum_kernel(re, im, herm_tol, rel_tol, max_sweeps):
    """Hermiticity check, real embedding and Jacobi in one call.

    Returns ``(descending eigenvalues, sweeps, hermitian deviation)``;
    ``sweeps`` is -2 when the deviation exceeds ``herm_tol``.
    """
    n = re.shape[0]
    dev = 0.0
    cplx = False
    for i in range(n):
        for j in range(n):
            dr = re[i, j] - re[j, i]
            di = im[i, j] + im[j, i]
            d = np.sqrt(dr * dr + di * di)
            if d > dev:
                dev = d
            if im[i, j] != 0.0:
                cplx = True
    if dev > herm_tol:
        return np.zeros(0), -2, dev
    m = 2 * n if cplx else n
    emb = np.empty((m, m))
    for i in range(n):
        for j in range(n):
            sym = 0.5 * (re[i, j] + re[j, i])
            emb[i, j] = sym
            if cplx:
                anti = 0.5 * (im[i, j] - im[j, i])
                emb[i + n, j + n] = sym
                emb[i + n, j] = anti
                emb[i, j + n] = -anti
    norm = np.sqrt(np.sum(emb * emb))
    vals, sweeps = _jacobi_eigenvalues(emb, rel_tol * max(1.0, norm), max_sweeps)
    vals = np.sort(vals)[::-1]
    if cplx:
        # each eigenvalue appears twice in the embedding
        vals = 0.5 * (vals[0::2] + vals[1::2])
    return vals, sweeps, dev


def _run_kernel(re: np.ndarray, im: np.ndarray, herm_tol: float) -> np.ndarray:
    vals, sweeps, dev = _spectrum_kernel(re, im, herm_tol, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps == -2:
        raise NotHermitian(f"matrix deviates from Hermitian by {dev:.3e}")
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (n={re.shape[0]})")
    return vals


def symmetric_spectrum(s: np.ndarray) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix, descending (the symmetric part is used)."""
    s = np.ascontiguousarray(s, dtype=np.float64)
    _square(s)
    return _run_kernel(s, np.zeros_like(s), np.inf)


def hermitian_spectrum(m: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order.

    Raises :class:`NotHermitian` when ``max|M - M^H|`` exceeds 1e-10.
    A real input skips the 2n x 2n embedding, whose two blocks coincide.
    """
    m = np.asarray(m)
    _square(m)
    re = np.ascontiguousarray(m.real, dtype=np.float64)
    im = np.ascontiguousarray(m.imag, dtype=np.float64) if np.iscomplexobj(m) else np.zeros_like(re)
    return _run_kernel(re, im, HERMITIAN_TOL)


def singular_values(r: np.ndarray) -> np.ndarray:
    """Singular values of a real matrix, descending, via the spectrum of R^T R."""
    r = np.asarray(r, dtype=np.float64)
    if r.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {r.shape}")
    gram = r.T @ r
    return np.sqrt(np.clip(symmetric_spectrum(gram), 0.0, None))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def _check_dims(m: np.ndarray, dims: tuple[int, int]) -> tuple[int, int]:
    n = _square(m)
    da, db = int(dims[0]), int(dims[1])
    if da < 1 or db < 1 or da * db != n:
        raise DimensionMismatch(f"matrix of size {n} does not factor as {da}x{db}")
    return da, db


def _subsystem(side) -> int:
    if side in ("A", 0):
        return 0
    if side in ("B", 1):
        return 1
    raise OutOfRange(f"subsystem must be 'A' or 'B', got {side!r}")


def partial_trace(m: np.ndarray, keep, dims: tuple[int, int]) -> np.ndarray:
    """Reduced operator on subsystem ``keep`` ('A' or 'B')."""
    m = np.asarray(m)
    da, db = _check_dims(m, dims)
    t = m.reshape(da, db, da, db)
    if _subsystem(keep) == 0:
        return np.einsum("ikjk->ij", t)
    return np.einsum("kikj->ij", t)


def partial_transpose(m: np.ndarray, side, dims: tuple[int, int]) -> np.ndarray:
    """Transpose the indices of subsystem ``side`` only."""
    m = np.asarray(m)
    da, db = _check_dims(m, dims)
    t = m.reshape(da, db, da, db)
    if _subsystem(side) == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)
