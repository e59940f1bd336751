"""Small dense complex linear algebra: Jacobi eigensolver, Jacobi SVD, polar form.

Matrices in this package are tiny (a complex Hessian in ``C^N`` with
``N <= 16``), so the solvers favour accuracy and transparency over speed.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError

SWEEP_BUDGET = 30
HERMITIAN_REJECT = 1e-6
DEFAULT_RANK_TOL = 1e-8

_EPS = np.finfo(float).eps


def as_matrix(A):
    """Validate a 2-D finite matrix and return it as a complex array."""
    A = np.array(A, dtype=complex)
    if A.ndim != 2:
        raise DomainError(f"expected a matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix has non-finite entries")
    return A


def hermitian(A, reject=HERMITIAN_REJECT):
    """Return ``(A + A*)/2`` after checking that ``A`` was Hermitian to begin with.

    Raises :class:`DomainError` if ``A`` deviates from its conjugate transpose
    by more than ``reject`` (relative to ``1 + max|A|``).
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DomainError("Hermitian matrix must be square")
    dev = np.max(np.abs(A - A.conj().T), initial=0.0)
    if dev > reject * (1.0 + np.max(np.abs(A), initial=0.0)):
        raise DomainError(f"matrix is not Hermitian (deviation {dev:.3g})")
    H = 0.5 * (A + A.conj().T)
    H[np.diag_indices_from(H)] = H.diagonal().real
    return H


def _off(A):
    return np.linalg.norm(A - np.diag(A.diagonal()))


def herm_eigs(A, sweeps=SWEEP_BUDGET):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi.

    Parameters
    ----------
    A : array_like
        Hermitian matrix (symmetrised with :func:`hermitian`).
    sweeps : int
        Maximum number of full cyclic sweeps.

    Returns
    -------
    lam : ndarray
        Real eigenvalues, non-increasing.
    V : ndarray
        Unitary matrix with ``A @ V = V @ diag(lam)``.
    """
    A = hermitian(A)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = np.linalg.norm(A)
    if scale == 0.0 or n == 1:
        return _sorted(A.diagonal().real.copy(), V)
    target = _EPS * scale
    for _ in range(sweeps):
        if _off(A) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= 0.1 * target / n:
                    continue
                phase = apq / mag
                theta = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                # R = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                R = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ R
                A[idx, :] = R.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ R
    else:
        off = _off(A)
        if off > target:
            raise NumericalError(f"Jacobi eigensolver did not converge in {sweeps} sweeps", off)
    return _sorted(A.diagonal().real.copy(), V)


def _sorted(lam, V):
    order = np.argsort(-lam, kind="stable")
    return lam[order], V[:, order]


def eigvalsh(A):
    """Eigenvalues only, non-increasing."""
    return herm_eigs(A)[0]


@dataclass(frozen=True)
class SVDResult:
    """``A = U @ S @ W^*`` with ``S`` the rectangular diagonal of ``s``."""

    U: np.ndarray
    s: np.ndarray
    W: np.ndarray
    rank: int

    def sigma_matrix(self):
        S = np.zeros((self.U.shape[0], self.W.shape[0]))
        d = min(S.shape)
        S[:d, :d] = np.diag(self.s[:d])
        return S

    def reconstruct(self):
        return self.U @ self.sigma_matrix() @ self.W.conj().T


def complete_basis(Q, n):
    """Extend orthonormal columns ``Q`` (``n x r``) to an ``n x n`` unitary by Gram-Schmidt."""
    cols = [Q[:, j] for j in range(Q.shape[1])]
    for e in np.eye(n, dtype=complex):
        if len(cols) == n:
            break
        v = e.copy()
        for _ in range(2):
            for c in cols:
                v -= (c.conj() @ v) * c
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            cols.append(v / nv)
    if len(cols) < n:
        raise NumericalError("basis completion failed")
    return np.column_stack(cols) if cols else np.zeros((n, 0), dtype=complex)


def _one_sided_jacobi(A, sweeps):
    """Orthogonalise the columns of ``A`` (``m x n``, ``m >= n``).  Returns ``G, V`` with ``A V = G``."""
    G = A.copy()
    n = G.shape[1]
    V = np.eye(n, dtype=complex)
    for _ in range(sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                gi, gj = G[:, i], G[:, j]
                alpha = np.real(gi.conj() @ gi)
                beta = np.real(gj.conj() @ gj)
                gamma = gi.conj() @ gj
                mag = abs(gamma)
                if mag <= _EPS * np.sqrt(alpha * beta) or mag == 0.0:
                    continue
                rotated = True
                phase = gamma / mag
                zeta = (beta - alpha) / (2.0 * mag)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(zeta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                R = np.array([[c, s * phase], [-s * phase.conjugate(), c]])
                idx = [i, j]
                G[:, idx] = G[:, idx] @ R
                V[:, idx] = V[:, idx] @ R
        if not rotated:
            return G, V
    norms = np.linalg.norm(G, axis=0)
    gram = G.conj().T @ G
    denom = np.outer(norms, norms)
    off = np.abs(gram - np.diag(gram.diagonal()))
    resid = float(np.max(np.divide(off, denom, out=np.zeros_like(off), where=denom > 0), initial=0.0))
    if resid > 1e3 * _EPS:
        raise NumericalError(f"one-sided Jacobi SVD did not converge in {sweeps} sweeps", resid)
    return G, V


def svd(A, rank_tol=DEFAULT_RANK_TOL, sweeps=SWEEP_BUDGET):
    """Full singular value decomposition by one-sided (Hestenes) Jacobi.

    ``rank`` counts singular values above ``rank_tol * s[0]``.
    """
    A = as_matrix(A)
    m, n = A.shape
    wide = m < n
    B = A.conj().T if wide else A
    G, V = _one_sided_jacobi(B, sweeps)
    s = np.linalg.norm(G, axis=0)
    order = np.argsort(-s, kind="stable")
    s, G, V = s[order], G[:, order], V[:, order]
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rank_tol * smax)) if smax > 0 else 0
    # U takes every numerically nonzero column, independent of rank_tol
    live = int(np.sum(s > B.shape[1] * _EPS * smax)) if smax > 0 else 0
    U = complete_basis(G[:, :live] / s[:live], B.shape[0])
    if wide:
        # A^* = U S V^*  =>  A = V S^T U^*
        U, V = V, U
    return SVDResult(U=U, s=s, W=V, rank=rank)


@dataclass(frozen=True)
class PolarResult:
    """``A = B @ U`` with ``B`` positive semi-definite and ``U`` unitary."""

    B: np.ndarray
    U: np.ndarray


def polar(A):
    """Left polar decomposition of a square matrix, ``A = B U``.

    Both factors come from the SVD ``A = X S Y^*``: ``B = X S X^*`` and
    ``U = X Y^*``.  Taking ``B`` as the square root of ``A A^*`` directly would
    lose half the digits of small singular values.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DomainError("polar decomposition is implemented for square matrices only")
    res = svd(A)
    B = hermitian((res.U * res.s) @ res.U.conj().T)
    U = res.U @ res.W.conj().T
    return PolarResult(B=B, U=U)


@dataclass(frozen=True)
class RowStructure:
    """Result of :func:`is_scaled_row_orthonormal`.

    ``ok`` is the verdict; ``c`` the common row norm when ``ok``;
    ``deviation`` the largest relative departure from ``c^2 I`` in ``A A^*``.
    """

    ok: bool
    c: float
    deviation: float

    def __bool__(self):
        return self.ok


def is_scaled_row_orthonormal(A, tol=1e-8):
    """Test whether the rows of ``A`` are mutually orthogonal with a common norm.

    Deviations are measured in the Gram matrix ``A A^*`` relative to the largest
    squared row norm, so the test is invariant under scaling ``A``.  The zero
    matrix passes with ``c = 0``.
    """
    A = as_matrix(A)
    rows, cols = A.shape
    if rows > cols:
        raise DomainError(f"{rows} orthogonal rows cannot fit in C^{cols}")
    gram = A @ A.conj().T
    norms2 = gram.diagonal().real
    top = norms2.max()
    if top == 0.0:
        return RowStructure(True, 0.0, 0.0)
    c2 = norms2.mean()
    dev = np.abs(gram - c2 * np.eye(rows)).max() / top
    ok = dev <= tol
    return RowStructure(bool(ok), float(np.sqrt(c2)) if ok else float("nan"), float(dev))
