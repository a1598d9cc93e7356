import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condsteer import numkit
from condsteer.errors import DimensionMismatch, NoConvergence, NotHermitian
from condsteer.states import SIGMA_X, SIGMA_Z, ket_projector, random_state, werner_qubit

PHI_PLUS = ket_projector(np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_identity_spectrum():
    assert np.allclose(numkit.hermitian_spectrum(np.eye(4)), [1, 1, 1, 1], atol=1e-12)


@pytest.mark.parametrize("p, expected", [(1.0, [1, 0, 0, 0]), (0.5, [0.625, 0.125, 0.125, 0.125])])
def test_werner_spectrum(p, expected):
    assert np.allclose(numkit.hermitian_spectrum(werner_qubit(p).mat), expected, atol=1e-12)


def test_spectrum_is_descending_and_sums_to_trace(rng):
    for n in (1, 2, 5, 9, 16):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = a + a.conj().T
        lam = numkit.hermitian_spectrum(h)
        assert np.all(np.diff(lam) <= 1e-12)
        assert abs(lam.sum() - np.trace(h).real) < 1e-9


def test_jacobi_matches_lapack(rng):
    for n in (2, 3, 4, 6, 9, 25):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = a @ a.conj().T
        ref = np.sort(np.linalg.eigvalsh(h))[::-1]
        assert np.allclose(numkit.hermitian_spectrum(h), ref, atol=1e-10 * max(1, np.abs(ref).max()))


def test_real_symmetric_path(rng):
    s = rng.standard_normal((7, 7))
    s = s + s.T
    assert np.allclose(numkit.symmetric_spectrum(s), np.sort(np.linalg.eigvalsh(s))[::-1], atol=1e-11)


def test_not_hermitian():
    m = np.array([[1.0, 1.0], [0.0, 1.0]])
    with pytest.raises(NotHermitian):
        numkit.hermitian_spectrum(m)
    # just above the tolerance
    with pytest.raises(NotHermitian):
        numkit.hermitian_spectrum(np.array([[1.0, 2e-10], [0.0, 1.0]]))


def test_sweep_cap_raises(rng, monkeypatch):
    s = rng.standard_normal((6, 6))
    monkeypatch.setattr(numkit, "JACOBI_MAX_SWEEPS", 1)
    with pytest.raises(NoConvergence):
        numkit.symmetric_spectrum(s + s.T)


@pytest.mark.parametrize(
    "r, expected",
    [(np.diag([1.0, -1.0, 1.0]), [1, 1, 1]), (np.diag([-0.6] * 3), [0.6] * 3), (np.zeros((3, 3)), [0, 0, 0])],
)
def test_singular_values_examples(r, expected):
    assert np.allclose(numkit.singular_values(r), expected, atol=1e-12)


def test_singular_values_square_to_gram_spectrum(rng):
    for _ in range(50):
        r = rng.standard_normal((3, 3))
        sv = numkit.singular_values(r)
        assert np.all(sv >= 0) and np.all(np.diff(sv) <= 1e-12)
        assert np.allclose(sv**2, numkit.hermitian_spectrum(r.T @ r), atol=1e-8)
        assert np.allclose(sv, np.linalg.svd(r, compute_uv=False), atol=1e-9)


def test_kron_examples():
    assert np.array_equal(numkit.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(numkit.kron(SIGMA_Z, SIGMA_Z).real, np.diag([1, -1, -1, 1]))
    xi = numkit.kron(SIGMA_X, np.eye(2))
    assert np.array_equal(xi[:2, :2], np.zeros((2, 2))) and np.array_equal(xi[:2, 2:], np.eye(2))


def test_partial_trace_examples(rng):
    assert np.allclose(numkit.partial_trace(PHI_PLUS, "B", (2, 2)), np.eye(2) / 2)
    ra = random_state((3, 1), rng).mat
    rb = random_state((2, 1), rng).mat
    prod = numkit.kron(ra, rb)
    assert np.allclose(numkit.partial_trace(prod, "A", (3, 2)), ra, atol=1e-12)
    assert np.allclose(numkit.partial_trace(prod, "B", (3, 2)), rb, atol=1e-12)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(DimensionMismatch):
        numkit.partial_trace(np.eye(4), "A", (3, 2))
    with pytest.raises(DimensionMismatch):
        numkit.partial_transpose(np.eye(6), "B", (2, 2))


def test_partial_transpose_examples(rng):
    assert np.isclose(numkit.hermitian_spectrum(numkit.partial_transpose(PHI_PLUS, "B", (2, 2)))[-1], -0.5)
    assert np.allclose(numkit.partial_transpose(np.eye(4) / 4, "A", (2, 2)), np.eye(4) / 4)
    ra, rb = random_state((2, 1), rng).mat, random_state((3, 1), rng).mat
    pt = numkit.partial_transpose(numkit.kron(ra, rb), "B", (2, 3))
    assert np.allclose(pt, numkit.kron(ra, rb.T), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]), st.integers(0, 2**32 - 1), st.sampled_from(["A", "B"]))
def test_partial_transpose_involution_and_trace(dims, seed, side):
    m = random_state(dims, np.random.default_rng(seed)).mat
    pt = numkit.partial_transpose(m, side, dims)
    assert np.allclose(numkit.partial_transpose(pt, side, dims), m, atol=1e-12)
    assert abs(np.trace(pt) - 1) < 1e-12
    red = numkit.partial_trace(m, side, dims)
    assert abs(np.trace(red) - 1) < 1e-12
    assert np.allclose(red, red.conj().T, atol=1e-12)
