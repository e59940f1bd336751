"""Wirtinger calculus by central finite differences.

Conventions
-----------
A point of ``C^N`` is a complex array ``z`` of shape ``(N,)``; its real
coordinates are ``x = [Re z, Im z]``.  The complex Hessian of a real function
``u`` is ``H[j, k] = d^2 u / dz_j dzbar_k`` and the Levi form is
``L(u, a; X) = sum_jk H[j, k] X_j conj(X_k) = X^T H conj(X)``.  With these
conventions a holomorphic ``f`` with Jacobian columns ``grad f_r`` gives
``H_{phi o f} = J H_phi J^*`` where ``J[j, r] = df_r / dz_j``.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .cxlinalg import hermitian
from .errors import DomainError, NumericalError

DEFAULT_STEP = 1e-4
G_EXCLUSION_RADIUS = 1e-3


@dataclass(frozen=True)
class FDScheme:
    """Central-difference step and order (2 or 4)."""

    h: float = DEFAULT_STEP
    order: int = 2

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("finite-difference step must be positive")
        if self.order not in (2, 4):
            raise DomainError("finite-difference order must be 2 or 4")

    @property
    def reach(self):
        """Largest coordinate offset the stencil touches."""
        return self.h * (1 if self.order == 2 else 2)


DEFAULT_SCHEME = FDScheme()


@dataclass(frozen=True)
class ScalarField:
    """Real-valued function on (an open subset of) ``C^N``.

    ``hessian`` is an optional analytic complex Hessian, used by tests to
    check the finite-difference path.
    """

    N: int
    evaluator: Callable
    domain: Optional[Callable] = None
    hessian: Optional[Callable] = None
    name: str = "u"

    def __call__(self, z):
        return float(self.evaluator(np.asarray(z, dtype=complex)))

    def contains(self, z):
        return self.domain is None or bool(self.domain(np.asarray(z, dtype=complex)))


@dataclass(frozen=True)
class MapField:
    """Map ``C^N -> C^M``.  ``conjugated`` records anti-holomorphic intent only."""

    N: int
    M: int
    evaluator: Callable
    conjugated: bool = False
    domain: Optional[Callable] = None
    name: str = "f"

    def __call__(self, z):
        return np.asarray(self.evaluator(np.asarray(z, dtype=complex)), dtype=complex).reshape(self.M)

    def contains(self, z):
        return self.domain is None or bool(self.domain(np.asarray(z, dtype=complex)))


def compose(u, f):
    """The scalar field ``u o f``."""
    if u.N != f.M:
        raise DomainError(f"cannot compose a field on C^{u.N} with a map into C^{f.M}")

    def domain(z):
        return f.contains(z) and u.contains(f(z))

    return ScalarField(f.N, lambda z: u.evaluator(f(z)), domain, name=f"{u.name}o{f.name}")


def _point(z, N):
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.size != N:
        raise DomainError(f"point has {z.size} coordinates, field lives on C^{N}")
    if not np.all(np.isfinite(z)):
        raise DomainError("point has non-finite coordinates")
    return z


def _check_interior(field, z, scheme):
    """Require the domain predicate at ``z`` and at ``z +- 2h`` along every real axis."""
    if field.domain is None:
        return
    N = z.size
    step = 2.0 * scheme.h
    probes = [z]
    for j in range(N):
        for d in (step, -step, 1j * step, -1j * step):
            w = z.copy()
            w[j] += d
            probes.append(w)
    if not all(field.domain(w) for w in probes):
        raise DomainError(f"point {z} is not interior to the domain of {field.name}")


def _real_fn(fn, N):
    def g(x):
        return np.atleast_1d(np.asarray(fn(x[:N] + 1j * x[N:]), dtype=complex))

    return g


_W4 = {-2: 1.0, -1: -8.0, 1: 8.0, 2: -1.0}


def _real_jet(g, x, scheme, second=True):
    """Value, gradient ``(m, n)`` and Hessian ``(m, n, n)`` of a vector function of real ``x``."""
    # overflow surfaces through the finiteness check below, not as warnings
    with np.errstate(over="ignore", invalid="ignore"):
        return _real_jet_raw(g, x, scheme, second)


def _real_jet_raw(g, x, scheme, second):
    h = scheme.h
    n = x.size
    f0 = g(x)
    m = f0.size
    grad = np.zeros((m, n), dtype=complex)
    hess = np.zeros((m, n, n), dtype=complex) if second else None

    def at(*shifts):
        y = x.copy()
        for i, a in shifts:
            y[i] += a * h
        return g(y)

    if scheme.order == 2:
        for i in range(n):
            fp, fm = at((i, 1)), at((i, -1))
            grad[:, i] = (fp - fm) / (2 * h)
            if second:
                hess[:, i, i] = (fp - 2 * f0 + fm) / h**2
        if second:
            for i in range(n):
                for j in range(i + 1, n):
                    v = (at((i, 1), (j, 1)) - at((i, 1), (j, -1)) - at((i, -1), (j, 1)) + at((i, -1), (j, -1))) / (
                        4 * h**2
                    )
                    hess[:, i, j] = hess[:, j, i] = v
    else:
        for i in range(n):
            f = {a: at((i, a)) for a in (-2, -1, 1, 2)}
            grad[:, i] = sum(w * f[a] for a, w in _W4.items()) / (12 * h)
            if second:
                hess[:, i, i] = (-f[2] + 16 * f[1] - 30 * f0 + 16 * f[-1] - f[-2]) / (12 * h**2)
        if second:
            for i in range(n):
                for j in range(i + 1, n):
                    acc = 0.0
                    for a, wa in _W4.items():
                        for b, wb in _W4.items():
                            acc = acc + wa * wb * at((i, a), (j, b))
                    hess[:, i, j] = hess[:, j, i] = acc / (144 * h**2)
    if not (np.all(np.isfinite(grad)) and (hess is None or np.all(np.isfinite(hess)))):
        raise NumericalError("non-finite finite-difference derivative")
    return f0, grad, hess


@dataclass(frozen=True)
class WirtingerJet:
    """Wirtinger derivatives of a map ``C^N -> C^M`` at one point.

    ``dz[r, j] = df_r/dz_j``, ``dzbar[r, j] = df_r/dzbar_j``,
    ``mixed[r, j, k] = d^2 f_r / dz_j dzbar_k``, ``dzdz[r, j, k] = d^2 f_r / dz_j dz_k``.
    """

    value: np.ndarray
    dz: np.ndarray
    dzbar: np.ndarray
    mixed: Optional[np.ndarray] = None
    dzdz: Optional[np.ndarray] = None


def _wirtinger(fn, z, scheme, second):
    N = z.size
    f0, grad, hess = _real_jet(_real_fn(fn, N), np.concatenate([z.real, z.imag]), scheme, second)
    gx, gy = grad[:, :N], grad[:, N:]
    dz = 0.5 * (gx - 1j * gy)
    dzbar = 0.5 * (gx + 1j * gy)
    if not second:
        return WirtingerJet(f0, dz, dzbar)
    xx = hess[:, :N, :N]
    yy = hess[:, N:, N:]
    xy = hess[:, :N, N:]  # d/dx_j d/dy_k
    yx = hess[:, N:, :N]  # d/dy_j d/dx_k
    mixed = 0.25 * ((xx + yy) + 1j * (xy - yx))
    dzdz = 0.25 * ((xx - yy) - 1j * (xy + yx))
    return WirtingerJet(f0, dz, dzbar, mixed, dzdz)


def wirtinger_jet(f, z, scheme=DEFAULT_SCHEME, second=True):
    """First (and optionally second) Wirtinger derivatives of a map or scalar field."""
    z = _point(z, f.N)
    _check_interior(f, z, scheme)
    return _wirtinger(f.evaluator, z, scheme, second)


def wirtinger_derivs(f, z, scheme=DEFAULT_SCHEME):
    """``(df/dz, df/dzbar)`` as two ``M x N`` complex arrays."""
    jet = wirtinger_jet(f, z, scheme, second=False)
    return jet.dz, jet.dzbar


def complex_hessian(u, z, scheme=DEFAULT_SCHEME):
    """Finite-difference complex Hessian ``[d^2 u / dz_j dzbar_k]`` of a real field."""
    jet = wirtinger_jet(u, z, scheme)
    if np.max(np.abs(jet.value.imag)) > 1e-9 * (1 + np.max(np.abs(jet.value.real))):
        raise DomainError(f"{u.name} is not real-valued at {z}")
    try:
        return hermitian(jet.mixed[0])
    except DomainError as exc:
        raise NumericalError(f"finite-difference Hessian of {u.name} is not Hermitian: {exc}") from exc


def levi_form_matrix(H, X):
    """``sum_jk H[j, k] X_j conj(X_k)`` for a matrix ``H`` (not necessarily Hermitian)."""
    X = np.asarray(X, dtype=complex)
    return X @ H @ X.conj()


def levi_form(u, a, X, scheme=DEFAULT_SCHEME):
    """Levi form of a real field at ``a`` in direction ``X``."""
    H = complex_hessian(u, a, scheme)
    val = levi_form_matrix(H, X)
    if abs(val.imag) > 1e-10 * (1 + abs(val.real)):
        raise NumericalError(f"Levi form has imaginary part {val.imag:.3g}", abs(val.imag))
    return float(val.real)


def chain_hessian(J, Hphi):
    """Complex Hessian of ``phi o f`` for holomorphic ``f``: ``J @ Hphi @ J^*``.

    ``J`` is ``N x M`` with ``J[j, r] = df_r/dz_j`` (columns are complex gradients).
    """
    J = np.asarray(J, dtype=complex)
    Hphi = np.asarray(Hphi, dtype=complex)
    if J.ndim != 2 or Hphi.shape != (J.shape[1], J.shape[1]):
        raise DomainError(f"Jacobian {J.shape} does not match Hessian {Hphi.shape}")
    return hermitian(J @ Hphi @ J.conj().T)


class Holomorphy:
    HOLOMORPHIC = "holomorphic"
    ANTI_HOLOMORPHIC = "anti_holomorphic"
    NEITHER = "neither"


@dataclass(frozen=True)
class CRReport:
    """Cauchy-Riemann evidence for a map over a grid.

    ``mixed_product`` is the largest ``|df_r/dz_j * df_s/dzbar_k|`` over all
    indices and grid points; it vanishes identically exactly when the map is
    holomorphic or anti-holomorphic.
    """

    kind: str
    max_dzbar: float
    max_dz: float
    mixed_product: float
    tolerance: float
    points: int


def cr_residuals(f, grid, scheme=DEFAULT_SCHEME, rel_tol=1e-7):
    """Classify a map as holomorphic, anti-holomorphic or neither over ``grid``."""
    grid = list(grid)
    if not grid:
        raise DomainError("grid is empty")
    max_dz = max_dzbar = mixed = 0.0
    for z in grid:
        dz, dzbar = wirtinger_derivs(f, z, scheme)
        a, b = np.max(np.abs(dz)), np.max(np.abs(dzbar))
        max_dz, max_dzbar = max(max_dz, a), max(max_dzbar, b)
        mixed = max(mixed, a * b)
    tol = rel_tol * (1.0 + max(max_dz, max_dzbar))
    if max_dzbar <= tol:
        kind = Holomorphy.HOLOMORPHIC
    elif max_dz <= tol:
        kind = Holomorphy.ANTI_HOLOMORPHIC
    else:
        kind = Holomorphy.NEITHER
    return CRReport(kind, float(max_dzbar), float(max_dz), float(mixed), float(tol), len(grid))


@dataclass(frozen=True)
class LeviDecomposition:
    direct: float
    expansion: float
    terms: dict

    @property
    def residual(self):
        return abs(self.direct - self.expansion)


def levi_decomposition(phi, f, z, X, scheme=DEFAULT_SCHEME):
    """Levi form of ``phi o f`` directly and through the six-term chain-rule expansion.

    With ``U = (df/dz) X`` and ``V = (d fbar/dz) X``::

        L(phi o f; X) = L(phi; U) + L(phi; conj V)
                        + sum phi_{w_r w_s} U_r conj(V_s) + conj(same)
                        + sum phi_{wbar_r} L(fbar_r; X) + phi_{w_r} L(f_r; X)

    The second term is evaluated in direction ``conj V``; see the test suite
    for the check that this is the form that balances.
    """
    z = _point(z, f.N)
    X = np.asarray(X, dtype=complex)
    direct = levi_form(compose(phi, f), z, X, scheme)

    fj = wirtinger_jet(f, z, scheme)
    w = fj.value
    pj = wirtinger_jet(phi, w, scheme)
    H = hermitian(pj.mixed[0])
    phi_w = pj.dz[0]
    phi_ww = pj.dzdz[0]

    U = fj.dz @ X
    V = fj.dzbar.conj() @ X
    levi_f = np.array([levi_form_matrix(fj.mixed[r], X) for r in range(f.M)])
    levi_fbar = np.array([levi_form_matrix(fj.mixed[r].conj().T, X) for r in range(f.M)])
    terms = {
        "levi_U": levi_form_matrix(H, U),
        "levi_V": levi_form_matrix(H, V.conj()),
        "cross": U @ phi_ww @ V.conj(),
        "cross_conj": U.conj() @ phi_ww.conj() @ V,
        "first_order_bar": phi_w.conj() @ levi_fbar,
        "first_order": phi_w @ levi_f,
    }
    expansion = sum(terms.values())
    return LeviDecomposition(direct, float(expansion.real), {k: complex(v) for k, v in terms.items()})


def levi_decomposition_check(phi, f, z, X, scheme=DEFAULT_SCHEME):
    """Residual ``|L(phi o f) - expansion|``."""
    return levi_decomposition(phi, f, z, X, scheme).residual


# --- catalog -----------------------------------------------------------------


def _radius_domain(z):
    return np.linalg.norm(z) >= G_EXCLUSION_RADIUS


def gk(k, N):
    """``G_k(z) = -|z|^(2 - 2N/k)`` for ``k < N`` and ``log|z|`` for ``k = N``."""
    if not 1 <= k <= N:
        raise DomainError(f"G_k needs 1 <= k <= N, got k={k}, N={N}")
    if k == N:

        def value(z):
            return 0.5 * np.log(np.real(np.vdot(z, z)))

        def g1(t):
            return 0.5 / t

        def g2(t):
            return -0.5 / t**2

    else:
        p = 1.0 - N / k

        def value(z):
            return -np.real(np.vdot(z, z)) ** p

        def g1(t):
            return -p * t ** (p - 1)

        def g2(t):
            return -p * (p - 1) * t ** (p - 2)

    def hessian(z):
        z = np.asarray(z, dtype=complex)
        t = np.real(np.vdot(z, z))
        return g1(t) * np.eye(N) + g2(t) * np.outer(z.conj(), z)

    return ScalarField(N, value, _radius_domain, hessian, name=f"G{k}")


def norm_squared(N):
    """``|z|^2``."""
    return ScalarField(N, lambda z: np.real(np.vdot(z, z)), None, lambda z: np.eye(N, dtype=complex), name="abs2")


def quadratic_form(H, center=None):
    """``sum_jk H[j, k] d_j conj(d_k)`` with ``d = z - center``; its complex Hessian is ``H``."""
    H = hermitian(H)
    N = H.shape[0]
    c = np.zeros(N, dtype=complex) if center is None else np.asarray(center, dtype=complex)

    def value(z):
        d = z - c
        return np.real(d @ H @ d.conj())

    return ScalarField(N, value, None, lambda z: H.copy(), name="quad")


def _zero_hessian(N):
    return lambda z: np.zeros((N, N), dtype=complex)


def re_linear(a, r, N):
    """``Re(a w_r)`` (0-based ``r``)."""
    return ScalarField(N, lambda w: np.real(a * w[r]), None, _zero_hessian(N), name=f"Re(a w{r + 1})")


def im_linear(a, r, N):
    """``Im(a w_r)``."""
    return ScalarField(N, lambda w: np.imag(a * w[r]), None, _zero_hessian(N), name=f"Im(a w{r + 1})")


def re_quadratic(a, r, s, N):
    """``Re(a w_r w_s)``."""
    return ScalarField(N, lambda w: np.real(a * w[r] * w[s]), None, _zero_hessian(N), name=f"Re(a w{r + 1} w{s + 1})")


def im_quadratic(a, r, s, N):
    """``Im(a w_r w_s)``."""
    return ScalarField(N, lambda w: np.imag(a * w[r] * w[s]), None, _zero_hessian(N), name=f"Im(a w{r + 1} w{s + 1})")


def linear_map(A, w0=None, conjugated=False):
    """``z -> A z + w0`` (or ``A conj(z) + w0`` when ``conjugated``)."""
    A = np.asarray(A, dtype=complex)
    M, N = A.shape
    b = np.zeros(M, dtype=complex) if w0 is None else np.asarray(w0, dtype=complex)
    if conjugated:
        return MapField(N, M, lambda z: A @ z.conj() + b, True, name="fbar")
    return MapField(N, M, lambda z: A @ z + b, name="f")
