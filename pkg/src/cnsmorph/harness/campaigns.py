"""Seeded refutation campaigns for the cone and Hadamard-multiplier statements.

A campaign searches for counterexamples; ``passed`` means none survived a
re-test in isolation.
"""

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import symcone
from ..errors import DomainError
from ..symcone import ConeSpec, cone_member, fit_length
from .sampling import sample_cone, stream

CAMPAIGN_TOL = 1e-9
MAX_DIM = 8


@dataclass
class Campaign:
    name: str
    seed: int
    trials: int
    tolerance: float
    passed: bool = True
    violations: int = 0
    counterexample: Optional[dict] = None
    runtime: float = 0.0
    details: dict = field(default_factory=dict)

    def fail(self, payload):
        self.passed = False
        self.violations += 1
        if self.counterexample is None:
            self.counterexample = payload

    def as_dict(self):
        return {
            "name": self.name,
            "seed": self.seed,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "violations": self.violations,
            "counterexample": self.counterexample,
            "runtime": self.runtime,
            "details": self.details,
        }


def _confirm_outside(x, k, tol):
    """Re-test a suspected violation on its own before it is reported."""
    x = np.asarray(x, dtype=float)
    return cone_member(x, ConeSpec(k, x.size, tol)).verdict is symcone.Membership.OUTSIDE


def _random_kn(rng):
    N = int(rng.integers(1, MAX_DIM + 1))
    return int(rng.integers(1, N + 1)), N


def _timed(fn):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        c = fn(*args, **kwargs)
        c.runtime = time.perf_counter() - t0
        return c

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def campaign_nesting(trials=1000, seed=0, tol=CAMPAIGN_TOL):
    """Members of ``Lambda(k, N)`` lie in every ``Lambda(j, N)`` with ``j < k``; ``Lambda(N, N)`` is the orthant."""
    c = Campaign("cone_nesting", seed, trials, tol)
    rng = stream(seed, c.name)
    for _ in range(trials):
        k, N = _random_kn(rng)
        x = sample_cone(rng, k, N, 1)[0]
        for j in range(1, k):
            if not symcone.members(x[None], j, tol)[0] and _confirm_outside(x, j, tol):
                c.fail({"x": x.tolist(), "k": k, "j": j})
        if k == N and np.any(x < -tol):
            c.fail({"x": x.tolist(), "k": k, "orthant": True})
    return c


@_timed
def campaign_convexity(trials=1000, seed=0, tol=CAMPAIGN_TOL):
    """Closed under positive scaling and convex combination."""
    c = Campaign("cone_convexity", seed, trials, tol)
    rng = stream(seed, c.name)
    for _ in range(trials):
        k, N = _random_kn(rng)
        x, y = sample_cone(rng, k, N, 2)
        t = rng.uniform()
        lam = rng.uniform(0.1, 10.0)
        v = t * x + (1 - t) * y
        if not symcone.members(v[None], k, tol)[0] and _confirm_outside(v, k, tol):
            c.fail({"x": x.tolist(), "y": y.tolist(), "t": t, "k": k, "kind": "combination"})
        # the scaled vector is checked at its own size: sigma_k scales by lam^k
        s = lam * x
        if not symcone.members(s[None], k, tol * lam**k)[0] and _confirm_outside(s, k, tol * lam**k):
            c.fail({"x": x.tolist(), "lam": lam, "k": k, "kind": "scaling"})
    return c


@_timed
def campaign_padding(trials=1000, seed=0, tol=CAMPAIGN_TOL):
    """Appending zeros keeps a vector in the cone of the same order."""
    c = Campaign("cone_padding", seed, trials, tol)
    rng = stream(seed, c.name)
    for _ in range(trials):
        k, N = _random_kn(rng)
        x = sample_cone(rng, k, N, 1)[0]
        pad = int(rng.integers(1, 4))
        v = symcone.zero_pad(x, pad)
        if not symcone.members(v[None], k, tol)[0] and _confirm_outside(v, k, tol):
            c.fail({"x": x.tolist(), "pad": pad, "k": k})
    return c


@_timed
def campaign_threshold(trials=1000, seed=0, tol=CAMPAIGN_TOL):
    """``(1, ..., 1, x)`` is in ``Lambda(k, N)`` exactly when ``x >= 1 - N/k``."""
    c = Campaign("cone_threshold", seed, trials, tol)
    rng = stream(seed, c.name)
    checked = 0
    for i in range(trials):
        k, N = _random_kn(rng)
        t = 1.0 - N / k
        x = t if i % 10 == 0 else t + rng.uniform(-2.0, 2.0)
        v = np.ones(N)
        v[-1] = x
        s = symcone.sigmas(v, k)
        closed = np.array([symcone.sigma_pattern(l, N, x) for l in range(1, k + 1)])
        if np.max(np.abs(s - closed)) > tol * (1 + np.max(np.abs(closed))):
            c.fail({"N": N, "k": k, "x": x, "kind": "closed_form"})
        if abs(x - t) <= tol and x != t:
            continue
        checked += 1
        expected = x >= t
        member = bool(symcone.members(v[None], k, tol)[0])
        if member != expected:
            c.fail({"N": N, "k": k, "x": x, "threshold": t})
    c.details["checked"] = checked
    return c


CONE_CAMPAIGNS = (campaign_nesting, campaign_convexity, campaign_padding, campaign_threshold)


def _multiplier_conclusion(k, l, K, L):
    """What the multiplier lemma forces on ``y``: ``"zero"`` or ``"equal"`` (first ``min(K, L)`` entries)."""
    if L < K or k < l:
        return "zero"
    return "equal"


def _composed(X, y, K, L):
    return fit_length(X * fit_length(y, K), L)


def conforming_multiplier(rng, k, l, K, L):
    """A ``y`` of the shape the lemma's conclusion allows."""
    t = min(K, L)
    y = rng.uniform(0.0, 2.0, size=L)
    if _multiplier_conclusion(k, l, K, L) == "zero":
        y[:t] = 0.0
    else:
        y[:t] = rng.uniform(0.1, 2.0)
    return y


def violating_multiplier(rng, k, l, K, L):
    """A non-negative ``y`` that breaks the conclusion within its first ``min(K, L)`` entries."""
    t = min(K, L)
    y = rng.uniform(0.0, 2.0, size=L)
    if _multiplier_conclusion(k, l, K, L) == "zero":
        y[:t] *= rng.uniform(size=t) < 0.6
        if not np.any(y[:t]):
            y[int(rng.integers(t))] = rng.uniform(0.1, 2.0)
    else:
        while np.ptp(y[:t]) < 1e-3:
            y[:t] = rng.uniform(0.0, 2.0, size=t)
    return y


def find_multiplier_witness(y, k, l, K, L, tol=CAMPAIGN_TOL):
    """First extremal ``x`` of ``Lambda(k, K)`` whose product with ``y`` leaves ``Lambda(l, L)``.

    Returns ``None`` when every extremal stays inside.
    """
    fam = symcone.cone_extremals(k, K)
    out = ~symcone.members(_composed(fam.vectors, y, K, L), l, tol)
    if not np.any(out):
        return None
    i = int(np.argmax(out))
    return fam.vectors[i]


@_timed
def campaign_lemma35(k, l, K, L, trials=1000, seed=0, tol=CAMPAIGN_TOL, y=None, violating_trials=20):
    """Both directions of the Hadamard-multiplier lemma for one configuration.

    Direction (i): a multiplier of the concluded shape (``y`` if given) maps
    ``trials`` sampled members and every extremal of ``Lambda(k, K)`` into
    ``Lambda(l, L)``.  Direction (ii): ``violating_trials`` multipliers that
    break the conclusion are each refuted by some extremal.  Only the first
    ``min(K, L)`` entries of ``y`` reach the product, so only they are
    constrained.
    """
    if not (1 <= k <= l <= L and k < K):
        raise DomainError(f"need 1 <= k <= l <= L and k < K, got k={k}, l={l}, K={K}, L={L}")
    name = f"multiplier_k{k}_l{l}_K{K}_L{L}"
    c = Campaign(name, seed, trials, tol)
    rng = stream(seed, name)

    y_ok = conforming_multiplier(rng, k, l, K, L) if y is None else np.asarray(y, dtype=float)
    if y_ok.shape != (L,) or np.any(y_ok < 0):
        raise DomainError(f"multiplier must be a non-negative vector of length {L}")
    X = np.vstack([sample_cone(rng, k, K, trials), symcone.cone_extremals(k, K).vectors])
    P = _composed(X, y_ok, K, L)
    bad = np.flatnonzero(~symcone.members(P, l, tol))
    confirmed = [i for i in bad if _confirm_outside(P[i], l, tol)]
    for i in confirmed:
        c.fail({"direction": "i", "y": y_ok.tolist(), "x": X[i].tolist()})
    c.details["direction_i"] = {"y": y_ok.tolist(), "samples": len(X), "violations": len(confirmed)}

    refuted = 0
    for _ in range(violating_trials):
        yv = violating_multiplier(rng, k, l, K, L)
        x = find_multiplier_witness(yv, k, l, K, L, tol)
        if x is not None and _confirm_outside(_composed(x[None], yv, K, L)[0], l, tol):
            refuted += 1
        else:
            c.fail({"direction": "ii", "y": yv.tolist()})
    c.details["direction_ii"] = {"tested": violating_trials, "refuted": refuted}
    c.details["conclusion"] = _multiplier_conclusion(k, l, K, L)
    return c
