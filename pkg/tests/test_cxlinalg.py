import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnsmorph import symcone
from cnsmorph.cxlinalg import (
    complete_basis,
    eigvalsh,
    herm_eigs,
    hermitian,
    is_scaled_row_orthonormal,
    polar,
    svd,
)
from cnsmorph.errors import DomainError, NumericalError


def random_complex(rng, m, n):
    return rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))


def random_hermitian(rng, n):
    B = random_complex(rng, n, n)
    return (B + B.conj().T) / 2


def test_herm_eigs_examples():
    np.testing.assert_allclose(eigvalsh(np.diag([1, 1, -0.5])), [1, 1, -0.5])
    np.testing.assert_allclose(eigvalsh([[0, 1], [1, 0]]), [1, -1], atol=1e-15)


@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_herm_eigs_decomposes(n, seed):
    rng = np.random.default_rng(seed)
    H = random_hermitian(rng, n)
    lam, V = herm_eigs(H)
    assert np.all(np.diff(lam) <= 0)
    np.testing.assert_allclose(V.conj().T @ V, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(H @ V, V * lam, atol=1e-11 * max(1.0, np.abs(lam).max()))
    np.testing.assert_allclose(lam, np.linalg.eigvalsh(H)[::-1], atol=1e-12 * max(1.0, np.abs(lam).max()))


def test_herm_eigs_matches_characteristic_polynomial_roots(rng):
    H = random_hermitian(rng, 5)
    T = np.real(symcone.traces(H, 5))
    coeffs = [1.0] + [(-1) ** k * symcone.sigma_flv(k, T) for k in range(1, 6)]
    roots = np.sort(np.real(np.roots(coeffs)))[::-1]
    np.testing.assert_allclose(eigvalsh(H), roots, atol=1e-7)


def test_herm_eigs_sweep_budget_exhaustion_raises(rng):
    with pytest.raises(NumericalError) as info:
        herm_eigs(random_hermitian(rng, 6), sweeps=1)
    assert info.value.residual > 0


def test_hermitian_rejects_non_hermitian():
    with pytest.raises(DomainError):
        hermitian([[1, 2], [0, 1]])
    with pytest.raises(DomainError):
        hermitian(np.ones((2, 3)))
    H = hermitian([[1, 1j], [-1j, 2]])
    assert np.all(H == H.conj().T)


def test_svd_examples():
    res = svd(np.diag([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(res.s, [3, 2, 1])
    assert res.rank == 3
    res = svd(np.zeros((3, 4)))
    np.testing.assert_array_equal(res.s, [0, 0, 0])
    assert res.rank == 0
    np.testing.assert_allclose(res.U.conj().T @ res.U, np.eye(3), atol=1e-15)


@given(st.integers(1, 6), st.integers(1, 8), st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_svd_reconstructs(m, n, seed):
    rng = np.random.default_rng(seed)
    A = random_complex(rng, m, n)
    res = svd(A)
    assert res.U.shape == (m, m) and res.W.shape == (n, n)
    np.testing.assert_allclose(res.reconstruct(), A, atol=1e-12 * np.abs(A).max())
    np.testing.assert_allclose(res.U.conj().T @ res.U, np.eye(m), atol=1e-12)
    np.testing.assert_allclose(res.W.conj().T @ res.W, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(res.s[: min(m, n)], np.linalg.svd(A, compute_uv=False), rtol=1e-10)


def test_svd_rank_deficient(rng):
    A = random_complex(rng, 4, 2) @ random_complex(rng, 2, 5)
    res = svd(A)
    assert res.rank == 2
    np.testing.assert_allclose(res.reconstruct(), A, atol=1e-12 * np.abs(A).max())


def test_complete_basis(rng):
    Q, _ = np.linalg.qr(random_complex(rng, 5, 2))
    B = complete_basis(Q, 5)
    np.testing.assert_allclose(B.conj().T @ B, np.eye(5), atol=1e-12)
    np.testing.assert_allclose(B[:, :2], Q)


def test_polar_examples(rng):
    Q, _ = np.linalg.qr(random_complex(rng, 3, 3))
    p = polar(Q)
    np.testing.assert_allclose(p.B, np.eye(3), atol=1e-12)
    p = polar(np.diag([2.0, 3.0]))
    np.testing.assert_allclose(p.B, np.diag([2.0, 3.0]), atol=1e-14)
    np.testing.assert_allclose(p.U, np.eye(2), atol=1e-14)
    A = random_complex(rng, 3, 3)
    p = polar(A)
    assert np.abs(A - p.B @ p.U).max() <= 1e-9
    assert np.all(eigvalsh(p.B) >= -1e-12)
    np.testing.assert_allclose(p.U.conj().T @ p.U, np.eye(3), atol=1e-12)
    with pytest.raises(DomainError):
        polar(np.ones((2, 3)))


def test_row_orthonormal_examples(rng):
    Q, _ = np.linalg.qr(random_complex(rng, 4, 4))
    res = is_scaled_row_orthonormal(2 * Q[:3])
    assert res.ok and res.c == pytest.approx(2.0)
    assert not is_scaled_row_orthonormal(np.diag([1.0, 2.0, 3.0]))
    res = is_scaled_row_orthonormal([[1, 0, 0], [0, 1, 0]])
    assert res and res.c == 1.0
    with pytest.raises(DomainError):
        is_scaled_row_orthonormal(np.ones((3, 2)))
    assert is_scaled_row_orthonormal(np.zeros((2, 3))).c == 0.0


def test_row_orthonormal_is_scale_invariant(rng):
    Q, _ = np.linalg.qr(random_complex(rng, 5, 5))
    A = Q[:3] + 1e-6 * random_complex(rng, 3, 5)
    base = is_scaled_row_orthonormal(A, tol=1e-8)
    for c in (1e-6, 1.0, 1e6):
        res = is_scaled_row_orthonormal(c * A, tol=1e-8)
        assert res.ok == base.ok
        assert res.deviation == pytest.approx(base.deviation, rel=1e-6)
