"""Bipartite density matrices, the Bloch-Fano codec and the named state families."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import numkit
from .errors import InvalidState, NotHermitian, NotPositive, OutOfRange

TRACE_TOL = 1e-10
PSD_TOL = 1e-9
IMAG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density operator on a ``dims[0] * dims[1]`` dimensional space.

    Construction checks Hermiticity, unit trace and positivity; the
    spectrum computed for the positivity check is kept on the instance.
    """

    mat: np.ndarray
    dims: tuple[int, int]
    spectrum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        dims = (int(self.dims[0]), int(self.dims[1]))
        mat = np.array(self.mat, dtype=np.complex128)
        n = dims[0] * dims[1]
        if mat.shape != (n, n):
            raise InvalidState(f"matrix shape {mat.shape} does not match dims {dims}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidState(f"trace is {tr:.12g}, expected 1")
        try:
            spec = numkit.hermitian_spectrum(mat)
        except NotHermitian as exc:
            raise InvalidState(str(exc)) from exc
        if spec[-1] < -PSD_TOL:
            raise NotPositive(f"minimum eigenvalue {spec[-1]:.6g} is negative")
        mat.flags.writeable = False
        spec.flags.writeable = False
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spectrum", spec)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def purity(self) -> float:
        return float(np.vdot(self.mat, self.mat).real)

    def marginal(self, keep="B") -> "DensityMatrix":
        side = numkit._subsystem(keep)
        # immutable instance, so memoising per side is safe
        cache = self.__dict__.setdefault("_marginals", {})
        if side not in cache:
            reduced = numkit.partial_trace(self.mat, side, self.dims)
            cache[side] = DensityMatrix(reduced, (self.dims[side], 1))
        return cache[side]

    def conjugate(self, u: np.ndarray) -> "DensityMatrix":
        return DensityMatrix(u @ self.mat @ u.conj().T, self.dims)

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"


@dataclass(frozen=True)
class BlochFano:
    """Local Bloch vectors and correlation tensor of a bipartite state."""

    a: np.ndarray
    b: np.ndarray
    T: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        da, db = int(self.dims[0]), int(self.dims[1])
        a = np.asarray(self.a, dtype=np.float64).reshape(-1)
        b = np.asarray(self.b, dtype=np.float64).reshape(-1)
        t = np.asarray(self.T, dtype=np.float64).reshape(da * da - 1, db * db - 1)
        if a.size != da * da - 1 or b.size != db * db - 1:
            raise InvalidState(f"Bloch vector lengths {a.size}, {b.size} do not match dims {(da, db)}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "T", t)
        object.__setattr__(self, "dims", (da, db))

    @property
    def norm_a(self) -> float:
        return float(np.linalg.norm(self.a))

    @property
    def norm_b(self) -> float:
        return float(np.linalg.norm(self.b))

    @property
    def norm_T(self) -> float:
        return float(np.linalg.norm(self.T))


@lru_cache(maxsize=None)
def _basis_stack(d: int) -> np.ndarray:
    gens = []
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = g[k, j] = 1.0
        gens.append(g)
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = -1j
        g[k, j] = 1j
        gens.append(g)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        gens.append(np.diag(math.sqrt(2.0 / (l * (l + 1))) * diag).astype(np.complex128))
    stack = np.array(gens)
    stack.flags.writeable = False
    return stack


def generator_basis(d: int) -> list[np.ndarray]:
    """Generalized Gell-Mann matrices of size ``d``, normalised to Tr[g g'] = 2 delta.

    Order: symmetric pairs, antisymmetric pairs, then diagonal, each in
    lexicographic index order. For ``d == 2`` this is (sx, sy, sz).
    """
    if d < 2:
        raise OutOfRange(f"generator basis needs d >= 2, got {d}")
    return list(_basis_stack(int(d)))


def _as_state(rho) -> DensityMatrix:
    if not isinstance(rho, DensityMatrix):
        raise InvalidState(f"expected a DensityMatrix, got {type(rho).__name__}")
    return rho


PROJECTOR_CACHE_MAX_DIM = 25


@lru_cache(maxsize=16)
def _coefficient_projector(da: int, db: int) -> np.ndarray:
    """Rows vec(X^T) for X in [g (x) I ..., I (x) g ..., g (x) g ...]; Tr[rho X] = row . vec(rho)."""
    ga, gb = _basis_stack(da), _basis_stack(db)
    ia, ib = np.eye(da), np.eye(db)
    ops = [np.kron(g, ib) for g in ga] + [np.kron(ia, g) for g in gb]
    ops += [np.kron(g, h) for g in ga for h in gb]
    proj = np.array([op.T.reshape(-1) for op in ops])
    proj.flags.writeable = False
    return proj


def _expectations(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    da, db = rho.dims
    ma, mb = da * da - 1, db * db - 1
    if rho.dim <= PROJECTOR_CACHE_MAX_DIM:
        vals = _coefficient_projector(da, db) @ rho.mat.reshape(-1)
        return vals[:ma], vals[ma : ma + mb], vals[ma + mb :].reshape(ma, mb)
    ga, gb = _basis_stack(da), _basis_stack(db)
    t4 = rho.mat.reshape(da, db, da, db)
    # Tr[rho (X (x) Y)] = sum rho[i,k,j,l] X[j,i] Y[l,k]
    ta = np.einsum("ij,mji->m", np.einsum("ikjk->ij", t4), ga)
    tb = np.einsum("ij,mji->m", np.einsum("kikj->ij", t4), gb)
    half = np.einsum("ikjl,mji->mkl", t4, ga)
    tt = np.einsum("mkl,nlk->mn", half, gb)
    return ta, tb, tt


def decompose(rho: DensityMatrix) -> BlochFano:
    """Bloch vectors a_m = (dA/2) Tr[rho g_m (x) I], b_n likewise, t_mn = (dA dB/4) Tr[rho g_m (x) g_n]."""
    rho = _as_state(rho)
    cached = rho.__dict__.get("_bloch")
    if cached is not None:
        return cached
    da, db = rho.dims
    if da < 2 or db < 2:
        raise InvalidState(f"decompose needs a bipartite state, got dims {rho.dims}")
    ta, tb, tt = _expectations(rho)
    imag = max(np.abs(ta.imag).max(), np.abs(tb.imag).max(), np.abs(tt.imag).max())
    if imag > IMAG_TOL:
        raise InvalidState(f"Bloch coefficients have imaginary part {imag:.3e}")
    bf = BlochFano(
        a=0.5 * da * ta.real,
        b=0.5 * db * tb.real,
        T=0.25 * da * db * tt.real,
        dims=(da, db),
    )
    for arr in (bf.a, bf.b, bf.T):
        arr.flags.writeable = False
    rho.__dict__["_bloch"] = bf
    return bf


def bloch_operator(bf: BlochFano) -> np.ndarray:
    """The Hermitian unit-trace operator described by ``bf`` (no positivity check)."""
    da, db = bf.dims
    ga, gb = _basis_stack(da), _basis_stack(db)
    ia, ib = np.eye(da), np.eye(db)
    op = np.eye(da * db, dtype=np.complex128)
    op += np.kron(np.tensordot(bf.a, ga, axes=1), ib)
    op += np.kron(ia, np.tensordot(bf.b, gb, axes=1))
    op += np.einsum("mn,mij,nkl->ikjl", bf.T, ga, gb).reshape(da * db, da * db)
    return op / (da * db)


def reconstruct(bf: BlochFano) -> DensityMatrix:
    """Inverse of :func:`decompose`; raises :class:`NotPositive` for non-physical data."""
    return DensityMatrix(bloch_operator(bf), bf.dims)


# --- named families ----------------------------------------------------------

PAULI = tuple(_basis_stack(2))
SIGMA_X, SIGMA_Y, SIGMA_Z = PAULI
# s_i (x) s_i is real for all three Paulis
_PAULI_PAIRS = np.array([np.kron(s, s).real for s in PAULI])


def _unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise OutOfRange(f"{name} must lie in [0, 1], got {value}")
    return value


def _local_dim(d) -> int:
    if int(d) != d or d < 2:
        raise OutOfRange(f"local dimension must be an integer >= 2, got {d}")
    return int(d)


def ket_projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    return np.outer(psi, psi.conj())


def max_entangled(d: int) -> np.ndarray:
    """|psi_d> = sum_i |ii> / sqrt(d)."""
    psi = np.zeros(d * d, dtype=np.complex128)
    psi[:: d + 1] = 1.0 / math.sqrt(d)
    return psi


def flip_operator(d: int) -> np.ndarray:
    """V|ij> = |ji>."""
    v = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            v[j * d + i, i * d + j] = 1.0
    return v


def general2(a, b, T) -> DensityMatrix:
    return reconstruct(BlochFano(a=a, b=b, T=T, dims=(2, 2)))


def weyl_state(t1: float, t2: float, t3: float) -> DensityMatrix:
    """(1/4)[I + sum_i t_i s_i (x) s_i]; NotPositive outside the state tetrahedron."""
    op = np.eye(4) + np.tensordot(np.array([t1, t2, t3], dtype=np.float64), _PAULI_PAIRS, axes=1)
    return DensityMatrix(op / 4.0, (2, 2))


def werner_qubit(p: float) -> DensityMatrix:
    p = _unit_interval("p", p)
    return weyl_state(-p, -p, -p)


def theta_state(theta: float, beta: float) -> DensityMatrix:
    """beta |psi_theta><psi_theta| + (1 - beta) I/4 with |psi_theta> = cos|00> + sin|11>."""
    beta = _unit_interval("beta", beta)
    psi = np.array([math.cos(theta), 0.0, 0.0, math.sin(theta)])
    return DensityMatrix(beta * ket_projector(psi) + (1 - beta) * np.eye(4) / 4, (2, 2))


def nonweyl_bowles(x: float, p: float) -> DensityMatrix:
    """p |psi_x><psi_x| + (1 - p) rho_x^A (x) I/2, rho_x^A = diag(cos^2 x, sin^2 x)."""
    x = float(x)
    if not 0.0 < x <= math.pi / 4 + 1e-15:
        raise OutOfRange(f"x must lie in (0, pi/4], got {x}")
    p = _unit_interval("p", p)
    c, s = math.cos(x), math.sin(x)
    psi = np.array([c, 0.0, 0.0, s])
    rho_a = np.diag([c * c, s * s])
    mat = p * ket_projector(psi) + (1 - p) * np.kron(rho_a, np.eye(2) / 2)
    return DensityMatrix(mat, (2, 2))


def isotropic(d: int, eta: float) -> DensityMatrix:
    d = _local_dim(d)
    eta = _unit_interval("eta", eta)
    mat = eta * ket_projector(max_entangled(d)) + (1 - eta) * np.eye(d * d) / (d * d)
    return DensityMatrix(mat, (d, d))


def werner_qudit(d: int, eta: float) -> DensityMatrix:
    """((d-1+eta)/(d-1)) I/d^2 - (eta/(d-1)) V/d."""
    d = _local_dim(d)
    eta = _unit_interval("eta", eta)
    mat = (d - 1 + eta) / (d - 1) * np.eye(d * d) / (d * d) - eta / (d - 1) * flip_operator(d) / d
    return DensityMatrix(mat, (d, d))


def noisy_mix(inner: DensityMatrix, r: float) -> DensityMatrix:
    """r * inner + (1 - r) * (I/dA) (x) Tr_A[inner]; Bob's marginal is unchanged."""
    inner = _as_state(inner)
    r = _unit_interval("r", r)
    da, db = inner.dims
    rho_b = numkit.partial_trace(inner.mat, "B", inner.dims)
    mat = r * inner.mat + (1 - r) * np.kron(np.eye(da) / da, rho_b)
    return DensityMatrix(mat, inner.dims)


def random_state(dims: tuple[int, int], rng: np.random.Generator) -> DensityMatrix:
    """G G^H / Tr(G G^H) with standard complex Gaussian G (full rank almost surely)."""
    n = int(dims[0]) * int(dims[1])
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    w = g @ g.conj().T
    return DensityMatrix(w / np.trace(w).real, dims)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
