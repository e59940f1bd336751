"""Decisions: k-subharmonicity of fields and (m, n)-morphism tests for affine maps.

For a holomorphic affine map ``f(z) = A z + w0`` the complex Hessian of a
composition is ``J H_phi J^*`` with ``J = A^T``.  Writing ``J = V S W^*``, the
choice ``H_phi = W diag(x) W^*`` makes the composed spectrum the Hadamard
product of ``s^2`` with ``x`` (truncated or zero-padded to length ``N``).  So
every question about which maps pull ``m``-subharmonic functions back to
``n``-subharmonic ones reduces to which multipliers ``s^2`` map
``Lambda(m, M)`` into ``Lambda(n, N)``; :func:`morphism_witness` searches the
extremal family of ``Lambda(m, M)`` for a vector that escapes.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from . import symcone
from .cxcalc import DEFAULT_SCHEME, Holomorphy, complex_hessian, cr_residuals, linear_map, quadratic_form, wirtinger_jet
from .cxlinalg import eigvalsh, hermitian, is_scaled_row_orthonormal, svd
from .errors import DomainError, UnsupportedSignatureError
from .symcone import ConeSpec, Membership, cone_member, fit_length

FD_CONE_TOL = 1e-6
WITNESS_MARGIN = 1e-8


# --- fields ------------------------------------------------------------------


@dataclass(frozen=True)
class PointVerdict:
    verdict: Membership
    spectrum: np.ndarray
    sigmas: np.ndarray
    point: np.ndarray
    tolerance: float

    @property
    def margin(self):
        return float(self.sigmas.min())


def fd_tolerance(spectrum, k, tol=FD_CONE_TOL):
    """Slack for a cone test on a finite-difference spectrum: ``tol (1 + max|lambda|)^k``."""
    return tol * (1.0 + np.max(np.abs(spectrum), initial=0.0)) ** k


def k_subharmonic_at(u, z, k, scheme=DEFAULT_SCHEME, tol=FD_CONE_TOL):
    """Test the Hessian spectrum of ``u`` at ``z`` against ``Lambda(k, N)``.

    ``tol`` is scaled by :func:`fd_tolerance` because the Hessian carries
    finite-difference error.
    """
    if not 1 <= k <= u.N:
        raise DomainError(f"k must be in 1..{u.N}, got {k}")
    z = np.asarray(z, dtype=complex)
    lam = eigvalsh(complex_hessian(u, z, scheme))
    slack = fd_tolerance(lam, k, tol)
    res = cone_member(lam, ConeSpec(k, u.N, slack))
    return PointVerdict(res.verdict, lam, res.sigmas, z, slack)


@dataclass(frozen=True)
class GridReport:
    verdict: Membership
    worst_point: Optional[np.ndarray]
    worst_margin: float
    worst_sigmas: Optional[np.ndarray]
    evaluated: int
    skipped: int
    verdicts: list = field(repr=False, default_factory=list)


def k_subharmonic_on_grid(u, grid, k, scheme=DEFAULT_SCHEME, tol=FD_CONE_TOL):
    """Apply :func:`k_subharmonic_at` over a grid; the verdict is the worst seen.

    Grid points outside the field's domain (or too close to its edge for the
    stencil) are skipped and counted.
    """
    verdict = Membership.INSIDE
    worst_point = worst_sigmas = None
    worst_margin = np.inf
    evaluated = skipped = 0
    per_point = []
    for z in grid:
        try:
            pv = k_subharmonic_at(u, z, k, scheme, tol)
        except DomainError:
            skipped += 1
            continue
        evaluated += 1
        per_point.append(pv)
        verdict = symcone.worst(verdict, pv.verdict)
        if pv.margin < worst_margin:
            worst_margin, worst_point, worst_sigmas = pv.margin, pv.point, pv.sigmas
    if evaluated == 0:
        raise DomainError("no grid point lies inside the domain")
    return GridReport(verdict, worst_point, float(worst_margin), worst_sigmas, evaluated, skipped, per_point)


@dataclass(frozen=True)
class PluriharmonicVerdict:
    ok: bool
    plus: Membership
    minus: Membership
    hessian_norm: float
    spectrum: np.ndarray


def k_pluriharmonic_at(u, z, k, scheme=DEFAULT_SCHEME, tol=FD_CONE_TOL):
    """``u`` and ``-u`` both ``k``-subharmonic at ``z`` (``2 <= k <= N``).

    For ``k >= 2`` a positive answer forces the whole Hessian to vanish, which
    ``hessian_norm`` exposes.
    """
    if not 2 <= k <= u.N:
        raise DomainError(f"k-pluriharmonicity is tested for 2 <= k <= N, got k={k}")
    H = complex_hessian(u, z, scheme)
    lam = eigvalsh(H)
    slack = fd_tolerance(lam, k, tol)
    plus = cone_member(lam, ConeSpec(k, u.N, slack)).verdict
    minus = cone_member(-lam[::-1], ConeSpec(k, u.N, slack)).verdict
    ok = plus is not Membership.OUTSIDE and minus is not Membership.OUTSIDE
    return PluriharmonicVerdict(ok, plus, minus, float(np.linalg.norm(H, 2)), lam)


# --- affine maps -------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    """``(m, n)`` morphism question for maps ``C^N -> C^M``."""

    m: int
    n: int
    M: int
    N: int

    def __post_init__(self):
        if not (1 <= self.m <= self.M and 1 <= self.n <= self.N):
            raise DomainError(f"invalid signature {self}")


@dataclass(frozen=True)
class AffineHoloMap:
    """``f(z) = A z + w0`` (``A conj(z) + w0`` when ``conjugated``); ``A`` is ``M x N``."""

    A: np.ndarray
    w0: Optional[np.ndarray] = None
    conjugated: bool = False

    def __post_init__(self):
        A = np.array(self.A, dtype=complex)
        if A.ndim != 2 or not np.all(np.isfinite(A)):
            raise DomainError("A must be a finite 2-D matrix")
        object.__setattr__(self, "A", A)
        w0 = np.zeros(A.shape[0], dtype=complex) if self.w0 is None else np.asarray(self.w0, dtype=complex)
        if w0.shape != (A.shape[0],):
            raise DomainError(f"offset has shape {w0.shape}, expected ({A.shape[0]},)")
        object.__setattr__(self, "w0", w0)

    @property
    def M(self):
        return self.A.shape[0]

    @property
    def N(self):
        return self.A.shape[1]

    @property
    def jacobian(self):
        """``N x M`` matrix whose columns are the complex gradients of the components."""
        return self.A.T

    def field(self):
        return linear_map(self.A, self.w0, self.conjugated)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.A @ (z.conj() if self.conjugated else z) + self.w0

    def composed_hessian(self, H):
        """Complex Hessian of ``phi o f`` when ``phi`` has constant Hessian ``H``."""
        J = self.jacobian
        out = J @ np.asarray(H, dtype=complex) @ J.conj().T
        # an anti-holomorphic map conjugates the pulled-back form
        return hermitian(out.conj() if self.conjugated else out)


class Verdict:
    CONSTANT = "constant"
    PROJECTION = "projection_type"
    MORPHISM = "morphism"
    NOT_MORPHISM = "not_morphism"


MORPHISM_VERDICTS = (Verdict.CONSTANT, Verdict.PROJECTION, Verdict.MORPHISM)


@dataclass(frozen=True)
class WitnessFunction:
    """Quadratic ``phi(w) = sum H[j,k] d_j conj(d_k)``, ``d = w - center``.

    ``phi`` is ``m``-subharmonic (its constant Hessian has spectrum in
    ``Lambda(m, M)``) while ``phi o f`` leaves ``Lambda(n, N)`` at ``point``;
    ``level`` is the first ``sigma_l`` that goes negative and ``margin`` its
    magnitude.
    """

    H: np.ndarray
    center: np.ndarray
    point: np.ndarray
    level: int
    margin: float
    phi_spectrum: np.ndarray
    composed_spectrum: np.ndarray
    origin: str

    def phi(self):
        return quadratic_form(self.H, self.center)


@dataclass(frozen=True)
class MorphismVerdict:
    verdict: str
    signature: Signature
    singular_values: np.ndarray
    rank: int
    branch: str
    c: Optional[float] = None
    witness: Optional[WitnessFunction] = None
    details: dict = field(default_factory=dict)

    @property
    def is_morphism(self):
        return self.verdict in MORPHISM_VERDICTS


def _check_signature(fmap, sig):
    if (sig.M, sig.N) != (fmap.M, fmap.N):
        raise DomainError(f"signature {sig} does not match a map C^{fmap.N} -> C^{fmap.M}")


def dual_cone_gap(a, M):
    """``(sum a)^2 - (M - 1) sum a^2`` for ``a`` zero-padded to length ``M``.

    ``Lambda(2, M)`` is the second-order cone ``|x| <= sum x``; a non-negative
    weight vector has ``a . x >= 0`` on all of it exactly when this gap is
    non-negative.
    """
    a = fit_length(np.asarray(a, dtype=float), M)
    return float(a.sum() ** 2 - (M - 1) * np.sum(a**2))


def classify_affine(fmap, sig, tol=1e-8, zero_tol=0.0):
    """Decide whether an affine (anti-)holomorphic map is an ``(m, n)``-morphism.

    Parameters
    ----------
    fmap : AffineHoloMap
    sig : Signature
    tol : float
        Relative tolerance for the row-structure test and the dual-cone gap.
    zero_tol : float
        The map counts as constant when its largest singular value is at most this.

    Notes
    -----
    ``m <= n < ...`` with ``m < M`` follows the three-way classification
    (constant / homothetic projection / nothing).  Constant maps and ``m = M``
    are always morphisms, the latter because holomorphic maps preserve
    plurisubharmonicity; both are decided before the signature scope check.  The
    signature ``(2, 1)`` is decided by the dual-cone gap of the squared
    singular values.  Any other ``m > n`` raises
    :class:`UnsupportedSignatureError`.
    """
    _check_signature(fmap, sig)
    M, N, m, n = sig.M, sig.N, sig.m, sig.n
    res = svd(fmap.jacobian)
    s, rank = res.s, res.rank
    common = dict(signature=sig, singular_values=s, rank=rank)
    if s.size == 0 or s[0] <= zero_tol:
        return MorphismVerdict(Verdict.CONSTANT, branch="constant", **common)
    if m == M:
        return MorphismVerdict(Verdict.MORPHISM, branch="holomorphic", **common)
    if m > n and (m, n) != (2, 1):
        raise UnsupportedSignatureError(
            f"signature (m={m}, n={n}) with m > n is beyond the supported scope; "
            "only (2, 1) is decided (see thm44_check)"
        )

    if m > n:
        a = fit_length(s**2, M)
        gap = dual_cone_gap(a, M)
        details = {"dual_cone_gap": gap, "weights": a}
        if gap >= -tol * a.sum() ** 2:
            return MorphismVerdict(Verdict.MORPHISM, branch="(2,1)", details=details, **common)
        w = morphism_witness(fmap, sig, res)
        return MorphismVerdict(Verdict.NOT_MORPHISM, branch="(2,1)", witness=w, details=details, **common)

    if M <= N:
        branch = "C(a)" if m == n else "C(b)"
    else:
        branch = "C(c)"
    if branch == "C(a)":
        rows = is_scaled_row_orthonormal(fmap.A, tol)
        if rows.ok:
            return MorphismVerdict(Verdict.PROJECTION, branch=branch, c=rows.c, details={"deviation": rows.deviation}, **common)
    w = morphism_witness(fmap, sig, res)
    return MorphismVerdict(Verdict.NOT_MORPHISM, branch=branch, witness=w, **common)


def _soc_ray(a):
    """Boundary ray of ``Lambda(2, M)`` minimising ``a . x`` (exact for the second-order cone)."""
    M = a.size
    e = np.ones(M) / np.sqrt(M)
    perp = a - (a @ e) * e
    norm = np.linalg.norm(perp)
    if norm == 0.0:
        return None
    x = e / np.sqrt(M) - np.sqrt(1.0 - 1.0 / M) * perp / norm
    return x / np.max(np.abs(x))


def morphism_witness(fmap, sig, svd_result=None, tol=symcone.DEFAULT_TOLERANCE):
    """Construct an ``m``-subharmonic quadratic whose pull-back is not ``n``-subharmonic.

    The eigenvector basis ``W`` of ``J^* J`` diagonalises every candidate
    Hessian ``W diag(x) W^*``; candidates ``x`` run over the extremal family of
    ``Lambda(m, M)`` (plus, for ``m = 2``, the exact minimising ray of the
    second-order cone).  The candidate whose composed spectrum is most
    negative is kept and the certificate is re-verified before returning.
    """
    _check_signature(fmap, sig)
    M, N, m, n = sig.M, sig.N, sig.m, sig.n
    if m >= M:
        raise DomainError("no witness exists when m = M: holomorphic maps are (M, n)-morphisms")
    res = svd_result if svd_result is not None else svd(fmap.jacobian)
    if res.s[0] == 0.0:
        raise DomainError("constant maps are morphisms for every signature")
    y = fit_length(res.s**2 / res.s[0] ** 2, M)

    fam = symcone.cone_extremals(m, M)
    X = fam.vectors
    origins = list(fam.origins)
    if m == 2:
        ray = _soc_ray(y)
        if ray is not None:
            X = np.vstack([X, ray])
            origins.append("soc_ray")
    composed = fit_length(X * y, N)
    sig_vals = symcone.sigmas(composed, n)
    scores = -sig_vals.min(axis=1)
    best = int(np.argmax(scores))
    if scores[best] <= tol:
        raise DomainError("map admits no witness: every extremal pulls back into the target cone")

    x = X[best]
    W = res.W
    H = hermitian((W * x) @ W.conj().T)
    z0 = np.zeros(N, dtype=complex)
    center = fmap(z0)

    phi_spec = eigvalsh(H)
    comp_spec = eigvalsh(fmap.composed_hessian(H))
    phi_check = cone_member(phi_spec, ConeSpec(m, M, tol))
    comp_check = cone_member(comp_spec, ConeSpec(n, N, tol))
    if phi_check.verdict is Membership.OUTSIDE or comp_check.verdict is not Membership.OUTSIDE:
        raise RuntimeError(f"witness certificate failed to verify for {fmap}")
    s = comp_check.sigmas
    level = int(np.argmax(s < -tol)) + 1
    return WitnessFunction(
        H=H,
        center=center,
        point=z0,
        level=level,
        margin=float(-s.min()),
        phi_spectrum=phi_spec,
        composed_spectrum=comp_spec,
        origin=origins[best],
    )


def verify_witness(fmap, sig, witness, tol=symcone.DEFAULT_TOLERANCE, scheme=None):
    """Independent re-check of a witness certificate.

    Recomputes both spectra from ``witness.H``.  With ``scheme`` given, the
    composed Hessian is taken by finite differences of ``phi o f`` instead of
    the chain rule.
    """
    phi_ok = cone_member(eigvalsh(witness.H), ConeSpec(sig.m, sig.M, tol)).verdict is not Membership.OUTSIDE
    if scheme is None:
        comp = eigvalsh(fmap.composed_hessian(witness.H))
        slack = tol
    else:
        from .cxcalc import compose

        comp = eigvalsh(complex_hessian(compose(witness.phi(), fmap.field()), witness.point, scheme))
        slack = fd_tolerance(comp, sig.n)
    check = cone_member(comp, ConeSpec(sig.n, sig.N, slack))
    return phi_ok and check.verdict is Membership.OUTSIDE and -check.sigmas.min() > WITNESS_MARGIN


# --- probes for arbitrary maps -----------------------------------------------


@dataclass(frozen=True)
class ProbeReport:
    """Largest residual of each pluriharmonic-probe identity over a grid.

    ``laplacian``: ``sum_j F^k_{j jbar}``; ``symmetric_product``:
    ``sum_j (F^k_jbar F^s_j + F^s_jbar F^k_j)``; ``mixed_hessian``:
    ``F^k_{i jbar}``; ``pairwise_product``: ``F^k_jbar F^s_i + F^s_jbar F^k_i``;
    ``holomorphic_split``: ``F^r_j F^s_kbar``, which vanishes for every pair
    exactly when the map is holomorphic or anti-holomorphic.
    """

    residuals: dict
    failing: tuple
    cr: object
    tolerance: float

    @property
    def consistent(self):
        """All identities hold implies the map is holomorphic or anti-holomorphic."""
        return bool(self.failing) or self.cr.kind != Holomorphy.NEITHER


def holomorphy_probe(F, grid, scheme=DEFAULT_SCHEME, tol=1e-6):
    """Evaluate the derivative identities forced on morphisms that are not merely subharmonic-preserving."""
    grid = list(grid)
    res = dict(laplacian=0.0, symmetric_product=0.0, mixed_hessian=0.0, pairwise_product=0.0, holomorphic_split=0.0)
    for z in grid:
        jet = wirtinger_jet(F, z, scheme)
        d, db, mix = jet.dz, jet.dzbar, jet.mixed
        lap = np.abs(np.einsum("kjj->k", mix)).max()
        # P[k, s, i, j] = F^k_jbar F^s_i
        P = np.einsum("kj,si->ksij", db, d)
        pair = np.abs(P + P.transpose(1, 0, 2, 3)).max()
        sym = np.abs(np.einsum("ksjj->ks", P + P.transpose(1, 0, 2, 3))).max()
        res["laplacian"] = max(res["laplacian"], float(lap))
        res["symmetric_product"] = max(res["symmetric_product"], float(sym))
        res["mixed_hessian"] = max(res["mixed_hessian"], float(np.abs(mix).max()))
        res["pairwise_product"] = max(res["pairwise_product"], float(pair))
        res["holomorphic_split"] = max(res["holomorphic_split"], float(np.abs(P).max()))
    failing = tuple(k for k, v in res.items() if v > tol)
    return ProbeReport(res, failing, cr_residuals(F, grid, scheme), tol)


# --- the (2, 1) case ---------------------------------------------------------


class MinimumBranch:
    IDENTITY = "min_zero_via_identity"
    EQUAL = "min_zero_via_equal"
    INTERIOR = "min_zero_via_inequality"
    CONSTANT = "constant_only"
    NONE = "no_zero_min"


def lemma42_condition(a, M, N, variant="as_printed", rel_tol=1e-9):
    """Which branch (if any) makes ``min a . x`` over ``Lambda(2, M)`` equal to zero.

    ``variant="as_printed"`` evaluates the stated case split: the identity
    ``(sum a)^2 = (M - 1) sum a^2`` or equal weights when ``M <= N``, equal
    weights when ``M = N + 1``, zero weights beyond.  ``variant="exact"``
    evaluates the dual-cone inequality ``(sum a)^2 >= (M - 1) sum a^2``, which
    also admits weights strictly inside the dual cone and reports those as
    ``min_zero_via_inequality``.
    """
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise DomainError("weights must be non-negative")
    t = min(M, N)
    if a.size not in (t, N):
        raise DomainError(f"expected {N} (or {t}) weights, got {a.size}")
    if variant not in ("as_printed", "exact"):
        raise DomainError(f"unknown variant {variant!r}")
    if not np.any(a):
        return MinimumBranch.CONSTANT
    equal = bool(np.ptp(a) <= rel_tol * a.max())
    head = a[:t]
    gap = dual_cone_gap(head, M)
    scale = head.sum() ** 2
    identity = abs(gap) <= rel_tol * max(scale, 1e-300)

    if variant == "exact":
        if equal and gap >= -rel_tol * scale:
            return MinimumBranch.EQUAL
        if identity:
            return MinimumBranch.IDENTITY
        return MinimumBranch.INTERIOR if gap > 0 else MinimumBranch.NONE

    if M <= N:
        if identity:
            return MinimumBranch.IDENTITY
        return MinimumBranch.EQUAL if equal else MinimumBranch.NONE
    if M == N + 1:
        return MinimumBranch.EQUAL if equal else MinimumBranch.NONE
    return MinimumBranch.NONE


@dataclass(frozen=True)
class BruteMin:
    minimum: float
    argmin: np.ndarray
    evaluated: int


def _to_boundary(X, inner, iters=60):
    """Move rows of ``X`` that fall outside ``Lambda(2, L)`` onto its boundary.

    Bisects on the segment from the interior point ``inner`` to each row; the
    cone is convex so the segment crosses the boundary once.
    """
    inside = symcone.members(X, 2, tol=0.0)
    out = ~inside
    if not np.any(out):
        return X
    V = X[out]
    lo = np.zeros(len(V))
    hi = np.ones(len(V))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        P = (1 - mid)[:, None] * inner + mid[:, None] * V
        ok = symcone.members(P, 2, tol=0.0)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    Y = X.copy()
    Y[out] = (1 - lo)[:, None] * inner + lo[:, None] * V
    return Y


def brute_min_boundary(a, samples=20000, seed=0, refine=300):
    """Minimise ``a . x`` over unit vectors of ``Lambda(2, L)`` by sampling and local search.

    The objective is homogeneous of degree one, so the unit sphere carries all
    the information: a negative minimum means the objective is unbounded
    below on the cone, a non-negative one that its infimum is zero.
    """
    a = np.asarray(a, dtype=float)
    L = a.size
    if L < 2:
        raise DomainError("need at least two weights")
    rng = np.random.default_rng(seed)
    inner = np.ones(L) / np.sqrt(L)

    def evaluate(X):
        X = _to_boundary(X / np.linalg.norm(X, axis=1, keepdims=True), inner)
        X = X / np.linalg.norm(X, axis=1, keepdims=True)
        return X, X @ a

    X, vals = evaluate(rng.normal(size=(samples, L)))
    i = int(np.argmin(vals))
    best, fbest = X[i], vals[i]
    count = samples
    radius = 0.1
    batch = 64
    for _ in range(refine):
        X, vals = evaluate(best + radius * rng.normal(size=(batch, L)))
        count += batch
        i = int(np.argmin(vals))
        if vals[i] < fbest:
            best, fbest = X[i], vals[i]
        else:
            radius *= 0.7
        if radius < 1e-12:
            break
    return BruteMin(float(fbest), best, count)


@dataclass(frozen=True)
class SingularValueCondition:
    holds: bool
    identity_holds: bool
    equal_branch: bool
    lhs: float
    rhs: float
    variant: str
    other: dict


def _condition_sides(s, r, variant):
    if variant == "as_printed":
        return float(np.sum(np.sqrt(s)) ** 2), float((r - 1) * np.sum(s))
    return float(np.sum(s**2) ** 2), float((r - 1) * np.sum(s**4))


def thm44_check(s, r, variant="derived_correct", rel_tol=1e-9):
    """Necessary condition on singular values for a ``(2, 1)``-morphism.

    ``as_printed`` tests ``(sum sqrt s_j)^2 = (r - 1) sum s_j``;
    ``derived_correct`` substitutes the squared singular values as weights,
    ``(sum s_j^2)^2 = (r - 1) sum s_j^4``.  Either way the condition also holds
    when ``s_1 = ... = s_r``.  Both variants' sides are returned.
    """
    if variant not in ("as_printed", "derived_correct"):
        raise DomainError(f"unknown variant {variant!r}")
    if r < 2:
        raise DomainError("rank must be at least 2")
    s = np.sort(np.asarray(s, dtype=float))[::-1]
    if np.any(s < 0) or s.size < r:
        raise DomainError("need at least r non-negative singular values")
    s = s[:r]
    lhs, rhs = _condition_sides(s, r, variant)
    identity = abs(lhs - rhs) <= rel_tol * max(abs(lhs), abs(rhs), 1e-300)
    equal = bool(np.ptp(s) <= rel_tol * max(s.max(), 1e-300))
    other_name = "derived_correct" if variant == "as_printed" else "as_printed"
    olhs, orhs = _condition_sides(s, r, other_name)
    return SingularValueCondition(identity or equal, identity, equal, lhs, rhs, variant, {"variant": other_name, "lhs": olhs, "rhs": orhs})


# --- grids -------------------------------------------------------------------


def lattice(radius, points_per_axis, N):
    """All points of ``C^N`` whose ``2N`` real coordinates lie on ``linspace(-radius, radius, p)``."""
    axis = np.linspace(-radius, radius, points_per_axis)
    pts = []
    for coords in product(axis, repeat=2 * N):
        c = np.asarray(coords)
        pts.append(c[:N] + 1j * c[N:])
    return pts


def random_points(rng, count, N, rmin=0.0, rmax=1.0):
    """``count`` points with norms uniform in ``[rmin, rmax]`` and uniform directions."""
    Z = rng.normal(size=(count, N)) + 1j * rng.normal(size=(count, N))
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    return list(Z * rng.uniform(rmin, rmax, size=(count, 1)))
