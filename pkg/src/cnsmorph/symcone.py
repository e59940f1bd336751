"""Elementary symmetric polynomials and the cones they cut out.

The cone ``Lambda(k, N)`` is the set of real ``N``-vectors whose first ``k``
elementary symmetric polynomials are all non-negative.  A ``C^2`` function is
``k``-subharmonic exactly when the eigenvalues of its complex Hessian lie in
this cone at every point, so everything downstream reduces to evaluating
``sigma_l`` on short real vectors.

Vectors are plain 1-D float arrays.  Functions that accept a batch take a 2-D
array with one vector per row.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from math import comb, factorial

import numpy as np

from .errors import DomainError

DEFAULT_TOLERANCE = 1e-9

# Beyond this length only cyclic shifts of the extremal patterns are emitted.
MAX_PERMUTED_LENGTH = 8


def elementary(x, k):
    """Return ``(sigma_0, ..., sigma_k)`` of ``x``.

    Uses the prefix recurrence for the coefficients of ``prod_j (1 + x_j t)``,
    which costs ``O(k L)`` and never forms a subset.  ``x`` may be a single
    vector of length ``L`` or a batch of shape ``(n, L)``; the output has shape
    ``(k + 1,)`` or ``(n, k + 1)`` accordingly.
    """
    x = np.asarray(x, dtype=float)
    batch = x.ndim == 2
    xs = x if batch else x[None, :]
    n, length = xs.shape
    if k < 0 or k > length:
        raise DomainError(f"order {k} out of range for vectors of length {length}")
    e = np.zeros((n, k + 1))
    e[:, 0] = 1.0
    for i in range(length):
        xi = xs[:, i]
        for j in range(min(i + 1, k), 0, -1):
            e[:, j] += xi * e[:, j - 1]
    return e if batch else e[0]


def sigma(k, x):
    """Elementary symmetric polynomial of order ``k`` evaluated at ``x``.

    >>> sigma(2, [1.0, 4.0, 9.0])
    49.0
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or not 1 <= k <= x.size:
        raise DomainError(f"sigma needs 1 <= k <= len(x), got k={k}, shape {x.shape}")
    return float(elementary(x, k)[k])


def sigmas(x, k):
    """Return ``(sigma_1, ..., sigma_k)``; accepts a batch like :func:`elementary`."""
    if k < 1:
        raise DomainError("k must be positive")
    e = elementary(x, k)
    return e[..., 1:]


def sigma_pattern(l, N, x):
    """Closed form of ``sigma_l(1, ..., 1, x)`` with ``N - 1`` ones."""
    if not 1 <= l <= N:
        raise DomainError(f"need 1 <= l <= N, got l={l}, N={N}")
    return comb(N, l) * (N + l * (x - 1.0)) / N


def traces(A, k):
    """``(tr A, tr A^2, ..., tr A^k)`` for a square matrix."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("traces need a square matrix")
    out = []
    P = np.eye(A.shape[0], dtype=A.dtype)
    for _ in range(k):
        P = P @ A
        out.append(np.trace(P))
    return np.array(out)


def sigma_flv(k, T):
    """``sigma_k`` of the eigenvalues of a matrix given only its power traces.

    Evaluates the Faddeev-LeVerrier determinant

        sigma_k = det(F) / k!

    where ``F`` is ``k x k`` with ``T_{i-j+1}`` on and below the diagonal and
    ``k-1, k-2, ..., 1`` on the superdiagonal.  The traces are first rescaled by
    ``c^j`` with ``c = sqrt|T_2|`` so the determinant is formed from entries of
    order one; the result is scaled back by ``c^k``.

    Parameters
    ----------
    k : int
        Order, ``k >= 1``.
    T : sequence
        At least ``k`` power traces ``T_1 .. T_k``.

    Returns
    -------
    float or complex
        Real when the traces are real.
    """
    if k < 1:
        raise DomainError("sigma_flv needs k >= 1")
    T = np.asarray(T)
    if T.size < k:
        raise DomainError(f"need {k} traces, got {T.size}")
    T = T[:k]
    complex_input = np.iscomplexobj(T)
    if k == 1:
        return complex(T[0]) if complex_input else float(T[0])

    scale = np.sqrt(abs(T[1]))
    if not np.isfinite(scale) or scale == 0.0:
        scale = abs(T[0]) or 1.0
    Ts = T / scale ** np.arange(1, k + 1)

    F = np.zeros((k, k), dtype=Ts.dtype)
    for i in range(k):
        for j in range(i + 1):
            F[i, j] = Ts[i - j]
        if i + 1 < k:
            F[i, i + 1] = k - 1 - i
    value = np.linalg.det(F) / factorial(k) * scale**k
    return complex(value) if complex_input else float(value)


class Membership(str, Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


_RANK = {Membership.OUTSIDE: 0, Membership.BOUNDARY: 1, Membership.INSIDE: 2}


def worst(a, b):
    """The less favourable of two memberships."""
    return a if _RANK[a] <= _RANK[b] else b


@dataclass(frozen=True)
class ConeSpec:
    """The cone ``Lambda(k, N)`` with an absolute slack applied to every ``sigma_l``."""

    k: int
    N: int
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if not 1 <= self.k <= self.N:
            raise DomainError(f"cone needs 1 <= k <= N, got k={self.k}, N={self.N}")
        if self.tolerance < 0:
            raise DomainError("tolerance must be non-negative")


@dataclass(frozen=True)
class ConeMembership:
    verdict: Membership
    sigmas: np.ndarray = field(repr=False)

    @property
    def is_member(self):
        return self.verdict is not Membership.OUTSIDE

    @property
    def margin(self):
        """Smallest ``sigma_l``; negative when outside."""
        return float(self.sigmas.min())


def classify_sigmas(s, tol):
    """Map a vector of ``sigma_l`` values to a membership verdict."""
    if np.all(s > tol):
        return Membership.INSIDE
    if np.all(s >= -tol):
        return Membership.BOUNDARY
    return Membership.OUTSIDE


def cone_member(x, cone):
    """Decide whether ``x`` lies in ``cone``.

    Inside means every ``sigma_l > tol``; boundary means every
    ``sigma_l >= -tol`` with at least one within ``tol`` of zero.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != cone.N:
        raise DomainError(f"vector of length {x.size} tested against Lambda({cone.k}, {cone.N})")
    if not np.all(np.isfinite(x)):
        raise DomainError("vector has non-finite entries")
    s = sigmas(x, cone.k)
    return ConeMembership(classify_sigmas(s, cone.tolerance), s)


def members(X, k, tol=DEFAULT_TOLERANCE):
    """Vectorised membership for a batch: boolean array, ``True`` unless outside."""
    s = sigmas(X, k)
    return np.all(s >= -tol, axis=-1)


def hadamard(x, y):
    """Componentwise product."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DomainError(f"length mismatch {x.shape} vs {y.shape}")
    return x * y


def zero_pad(x, l):
    """Append ``l`` zeros."""
    if l < 0:
        raise DomainError("padding length must be non-negative")
    x = np.asarray(x, dtype=float)
    return np.concatenate([x, np.zeros(l)])


def fit_length(x, L):
    """Truncate ``x`` to its first ``L`` entries, or zero-pad it up to length ``L``."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] >= L:
        return x[..., :L]
    pad = [(0, 0)] * (x.ndim - 1) + [(0, L - x.shape[-1])]
    return np.pad(x, pad)


@dataclass(frozen=True)
class ExtremalFamily:
    """Boundary vectors of ``Lambda(k, K)`` built from the two proof patterns.

    ``vectors`` has one vector per row; ``origins[i]`` names the pattern that
    produced row ``i``.
    """

    k: int
    K: int
    vectors: np.ndarray
    origins: tuple

    def __len__(self):
        return len(self.vectors)


def _placements(K, n_ones, permute):
    """Yield ``(special_position, ones_positions)`` pairs."""
    if permute:
        for p in range(K):
            rest = [q for q in range(K) if q != p]
            for ones in combinations(rest, n_ones):
                yield p, ones
    else:
        # canonical layout (ones first, special last) and its cyclic shifts
        for shift in range(K):
            p = (K - 1 + shift) % K
            ones = tuple((q + shift) % K for q in range(n_ones))
            yield p, ones


def cone_extremals(k, K):
    """Boundary vectors of ``Lambda(k, K)`` used to refute Hadamard multipliers.

    Two patterns are emitted, each in every arrangement (all arrangements up
    to ``K = 8``, cyclic shifts beyond):

    * ``s`` ones, one entry ``1 - (s + 1)/k`` and zeros elsewhere, for every
      ``s = k, ..., K - 1``.  With ``s = k`` this is the vector
      ``(1, ..., 1, 0, ..., 0, -1/k)``.
    * ``(1 - K/k, 1, ..., 1)``.

    Every vector has ``sigma_k = 0`` and ``sigma_l > 0`` for ``l < k``.
    """
    if not 1 <= k < K:
        raise DomainError(f"extremal family needs 1 <= k < K, got k={k}, K={K}")
    permute = K <= MAX_PERMUTED_LENGTH
    seen = {}
    for s in range(k, K):
        special = 1.0 - (s + 1) / k
        name = f"ones{s}"
        for p, ones in _placements(K, s, permute):
            v = np.zeros(K)
            v[list(ones)] = 1.0
            v[p] = special
            seen.setdefault(tuple(v), name)
    special = 1.0 - K / k
    for p, ones in _placements(K, K - 1, permute):
        v = np.ones(K)
        v[p] = special
        seen.setdefault(tuple(v), "threshold")
    vectors = np.array(list(seen.keys()))
    return ExtremalFamily(k, K, vectors, tuple(seen.values()))
