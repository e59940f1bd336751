"""Deterministic random streams and cone samplers."""

from zlib import crc32

import numpy as np

from .. import symcone
from ..errors import DomainError


def stream(seed, name):
    """Independent generator for ``name`` under master ``seed``.

    The stream depends only on the pair, so campaigns can run in any order or
    in parallel and still draw identical samples.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), crc32(name.encode())]))


def _shift_to_boundary(X, k):
    """Reset the last coordinate of each row so that ``sigma_k = 0``.

    ``sigma_k`` is affine in any single coordinate:
    ``sigma_k(x) = sigma_k(x') + x_N sigma_{k-1}(x')``.
    """
    head = X[:, :-1]
    L = head.shape[1]
    e = symcone.elementary(head, min(k, L))
    sk = e[:, k] if k <= L else np.zeros(len(X))
    sk1 = e[:, k - 1]
    ok = np.abs(sk1) > 1e-12
    Y = X.copy()
    Y[ok, -1] = -sk[ok] / sk1[ok]
    return Y[ok]


def sample_cone(rng, k, N, count, boundary_fraction=0.3, tol=1e-12, max_rounds=1000):
    """``count`` members of ``Lambda(k, N)`` scaled to unit max-norm.

    Gaussian vectors with a random positive drift are kept when they land in
    the cone; a share of the draws is first pushed onto ``sigma_k = 0`` by
    moving the last coordinate, so boundary points are well represented.
    """
    if not 1 <= k <= N:
        raise DomainError(f"cone needs 1 <= k <= N, got k={k}, N={N}")
    out = []
    have = 0
    for _ in range(max_rounds):
        X = rng.normal(size=(256, N)) + rng.uniform(0.0, 2.0, size=(256, 1))
        nb = int(boundary_fraction * len(X))
        if N > 1 and nb:
            X = np.vstack([_shift_to_boundary(X[:nb], k), X[nb:]])
        X = X[np.max(np.abs(X), axis=1) > 0]
        X = X / np.max(np.abs(X), axis=1, keepdims=True)
        X = X[symcone.members(X, k, tol)]
        # the shifted coordinate always sits last; scatter it
        X = rng.permuted(X, axis=1)
        out.append(X)
        have += len(X)
        if have >= count:
            break
    else:
        raise RuntimeError(f"could not sample {count} members of Lambda({k}, {N})")
    X = np.vstack(out)
    return X[rng.permutation(len(X))[:count]]


def random_multiplier_config(rng, max_dim=6):
    """``(k, l, K, L)`` with ``k <= l <= L``, ``k < K <= max_dim`` and ``L <= max_dim``."""
    K = int(rng.integers(2, max_dim + 1))
    k = int(rng.integers(1, K))
    L = int(rng.integers(k, max_dim + 1))
    l = int(rng.integers(k, L + 1))
    return k, l, K, L
