"""The ten acceptance criteria, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py`` for a PASS/FAIL line per criterion in
the terminal summary, or execute this file directly.
"""

from itertools import combinations

import numpy as np
import pytest

from cnsmorph import symcone
from cnsmorph.classify import (
    MORPHISM_VERDICTS,
    AffineHoloMap,
    MinimumBranch,
    Signature,
    Verdict,
    brute_min_boundary,
    classify_affine,
    holomorphy_probe,
    k_subharmonic_at,
    lattice,
    lemma42_condition,
    thm44_check,
)
from cnsmorph.cli.expr import scalar_field
from cnsmorph.cxcalc import (
    FDScheme,
    MapField,
    ScalarField,
    chain_hessian,
    complex_hessian,
    compose,
    cr_residuals,
    gk,
    levi_decomposition_check,
    linear_map,
    quadratic_form,
)
from cnsmorph.cxlinalg import eigvalsh, svd
from cnsmorph.harness.campaigns import CONE_CAMPAIGNS, campaign_lemma35
from cnsmorph.harness.sampling import random_multiplier_config
from cnsmorph.symcone import Membership

FINE = FDScheme(h=1e-3, order=4)


def _points(rng, count, N, rmin, rmax):
    Z = rng.normal(size=(count, N)) + 1j * rng.normal(size=(count, N))
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    return Z * rng.uniform(rmin, rmax, size=(count, 1))


def test_ac01_example_field_end_to_end(acceptance):
    acceptance(1, "example field end-to-end (u boundary of Lambda(2,3); u o g fails k=1; u o f passes)")
    rng = np.random.default_rng(1)
    u = scalar_field("abs2(z1)+abs2(z2)-0.5*abs2(z3)", 3)
    ug = compose(u, linear_map(np.diag([1.0, 1.0, 3.0])))
    uf = compose(u, linear_map(np.diag([1.0, 2.0, 3.0])))
    worst = 0.0
    for z in _points(rng, 20, 3, 0.1, 1.0):
        pv = k_subharmonic_at(u, z, 2)
        assert pv.verdict is Membership.BOUNDARY
        assert abs(pv.sigmas[0] - 1.5) <= 1e-6 and abs(pv.sigmas[1]) <= 1e-6
        pg = k_subharmonic_at(ug, z, 1)
        assert pg.verdict is Membership.OUTSIDE
        assert abs(pg.sigmas[0] + 2.5) <= 1e-6
        pf = k_subharmonic_at(uf, z, 1)
        assert pf.verdict is not Membership.OUTSIDE
        assert abs(pf.sigmas[0] - 0.5) <= 1e-6
        worst = max(worst, abs(pv.sigmas[0] - 1.5), abs(pv.sigmas[1]), abs(pg.sigmas[0] + 2.5), abs(pf.sigmas[0] - 0.5))
    acceptance(1, "example field end-to-end", f"(worst sigma error {worst:.1e} <= 1e-6)")


def test_ac02_weighted_minimum(acceptance):
    acceptance(2, "weighted minimum over Lambda(2,3)")
    good = brute_min_boundary((1.0, 4.0, 9.0), seed=2)
    assert good.minimum >= -1e-6
    ray = np.array([6.0, 3.0, -2.0]) / 7.0
    angle = np.arccos(np.clip(good.argmin @ ray / np.linalg.norm(good.argmin), -1.0, 1.0))
    assert angle <= 1e-3
    bad = brute_min_boundary((1.0, 1.0, 9.0), seed=2)
    assert bad.minimum <= -0.1
    s = symcone.sigmas(bad.argmin, 2)
    assert s[0] >= 0 and s[1] >= -1e-9
    assert (1 + 4 + 9) ** 2 == 2 * (1 + 16 + 81) == 196
    assert lemma42_condition((1, 4, 9), 3, 3) == MinimumBranch.IDENTITY
    assert lemma42_condition((1, 1, 9), 3, 3) == MinimumBranch.NONE
    acceptance(2, "weighted minimum over Lambda(2,3)", f"(min {good.minimum:.1e}, angle {angle:.1e}; min {bad.minimum:.3f})")


def test_ac03_singular_value_condition(acceptance):
    acceptance(3, "singular-value condition: derived vs printed")
    d = thm44_check((1, 2, 3), 3, "derived_correct")
    p = thm44_check((1, 2, 3), 3, "as_printed")
    assert d.holds and d.lhs == 196.0 and d.rhs == 196.0
    assert not p.holds and p.lhs - p.rhs > 5
    assert p.lhs == pytest.approx((1 + np.sqrt(2) + np.sqrt(3)) ** 2) and p.rhs == 12.0
    print(f"derived_correct: {d.lhs} vs {d.rhs}; as_printed: {p.lhs:.4f} vs {p.rhs}")
    acceptance(3, "singular-value condition: derived vs printed", f"(derived 196 = 196; printed {p.lhs:.2f} vs {p.rhs:.0f})")


def _subset_sigma(x, k):
    return sum(np.prod(c) for c in combinations(x, k))


def test_ac04_oracle_equivalences(acceptance):
    acceptance(4, "oracle equivalences (sigma, sigma_flv, SVD)")
    rng = np.random.default_rng(4)
    worst_sigma = 0.0
    for _ in range(500):
        L = int(rng.integers(1, 11))
        x = rng.normal(size=L) * rng.uniform(0.1, 3.0)
        k = int(rng.integers(1, L + 1))
        # relative to the no-cancellation scale sigma_k(|x|)
        err = abs(symcone.sigma(k, x) - _subset_sigma(x, k)) / _subset_sigma(np.abs(x), k)
        worst_sigma = max(worst_sigma, err)
    assert worst_sigma <= 1e-12

    worst_flv = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 9))
        B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = (B + B.conj().T) / 2
        lam = eigvalsh(H)
        np.testing.assert_allclose(lam, np.linalg.eigvalsh(H)[::-1], atol=1e-12 * np.abs(lam).max())
        k = int(rng.integers(1, n + 1))
        T = np.real(symcone.traces(H, k))
        err = abs(symcone.sigma_flv(k, T) - symcone.sigma(k, lam)) / symcone.sigma(k, np.abs(lam))
        worst_flv = max(worst_flv, err)
    assert worst_flv <= 1e-9

    worst_rec = worst_uni = 0.0
    for _ in range(200):
        m, n = int(rng.integers(1, 7)), int(rng.integers(1, 9))
        A = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
        res = svd(A)
        np.testing.assert_allclose(res.s[: min(m, n)], np.linalg.svd(A, compute_uv=False), rtol=1e-10)
        worst_rec = max(worst_rec, np.abs(res.reconstruct() - A).max())
        worst_uni = max(
            worst_uni,
            np.abs(res.U.conj().T @ res.U - np.eye(m)).max(),
            np.abs(res.W.conj().T @ res.W - np.eye(n)).max(),
        )
    assert worst_rec <= 1e-9 and worst_uni <= 1e-9
    acceptance(
        4,
        "oracle equivalences (sigma, sigma_flv, SVD)",
        f"(sigma {worst_sigma:.1e}, flv {worst_flv:.1e}, svd {worst_rec:.1e}/{worst_uni:.1e})",
    )


def test_ac05_cone_campaigns(acceptance):
    acceptance(5, "cone campaigns: nesting, convexity, zero padding, threshold")
    outcomes = [fn(trials=1000, seed=5, tol=1e-9) for fn in CONE_CAMPAIGNS]
    for c in outcomes:
        assert c.trials == 1000
        assert c.violations == 0, c.counterexample
    acceptance(5, "cone campaigns: nesting, convexity, zero padding, threshold", "(4 x 1000 trials, 0 violations)")


def test_ac06_multiplier_campaigns(acceptance):
    acceptance(6, "Hadamard multiplier campaigns, both directions")
    rng = np.random.default_rng(6)
    refuted = tested = 0
    for _ in range(50):
        k, l, K, L = random_multiplier_config(rng)
        assert k <= l <= L and k < K <= 6 and L <= 6
        c = campaign_lemma35(k, l, K, L, trials=1000, seed=6)
        assert c.details["direction_i"]["violations"] == 0, c.counterexample
        assert c.details["direction_i"]["samples"] >= 1000
        d = c.details["direction_ii"]
        assert d["refuted"] == d["tested"], c.counterexample
        refuted += d["refuted"]
        tested += d["tested"]
    acceptance(6, "Hadamard multiplier campaigns, both directions", f"(50 configs; {refuted}/{tested} violating multipliers refuted)")


def _projection(rng, M, N):
    Z = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    Q, _ = np.linalg.qr(Z)
    return rng.uniform(0.5, 2.0) * Q[:M], rng.normal(size=M) + 1j * rng.normal(size=M)


def _certificate_ok(fmap, sig, w):
    # independent of the classifier: spectra via numpy, sigmas via subset enumeration
    phi = np.linalg.eigvalsh(w.H)
    comp = np.linalg.eigvalsh(fmap.composed_hessian(w.H))
    phi_ok = all(_subset_sigma(phi, l) >= -1e-9 for l in range(1, sig.m + 1))
    worst = min(_subset_sigma(comp, l) for l in range(1, sig.n + 1))
    return phi_ok and worst < -1e-8


def test_ac07_classifier_and_witness(acceptance):
    acceptance(7, "affine classifier: projections, perturbations, witnesses, monotonicity")
    rng = np.random.default_rng(7)
    smallest = np.inf
    for _ in range(200):
        M = int(rng.integers(2, 7))
        N = int(rng.integers(M, 7))
        m = int(rng.integers(1, M))
        A, w0 = _projection(rng, M, N)
        fmap = AffineHoloMap(A, w0)
        v = classify_affine(fmap, Signature(m, m, M, N))
        assert v.verdict == Verdict.PROJECTION and v.witness is None
        assert v.c == pytest.approx(np.linalg.norm(A[0]))
        E = rng.normal(size=A.shape) + 1j * rng.normal(size=A.shape)
        pert = AffineHoloMap(A + 1e-2 * np.linalg.norm(A) * E / np.linalg.norm(E), w0)
        vp = classify_affine(pert, Signature(m, m, M, N))
        assert vp.verdict == Verdict.NOT_MORPHISM
        assert _certificate_ok(pert, Signature(m, m, M, N), vp.witness)
        smallest = min(smallest, vp.witness.margin)
        for a, b in [(a, b) for a in range(m, M) for b in range(1, m + 1) if a <= b]:
            assert classify_affine(fmap, Signature(a, b, M, N)).verdict in MORPHISM_VERDICTS
    acceptance(7, "affine classifier: projections, perturbations, witnesses, monotonicity", f"(200 maps; smallest witness margin {smallest:.2e})")


def _hermitian(rng, n):
    B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (B + B.conj().T) / 4


def _phi(rng, M):
    P = rng.normal(size=(M, M)) + 1j * rng.normal(size=(M, M))
    P = (P + P.T) / 4
    Q = _hermitian(rng, M)
    b = rng.normal(size=M) + 1j * rng.normal(size=M)
    return ScalarField(
        M, lambda w: np.real(w @ P @ w + w @ Q @ w.conj() + b @ w) + 0.1 * np.real(np.vdot(w, w)) ** 2 + np.sin(w[0].real)
    )


def _map(rng, N, M, kind):
    A = (rng.normal(size=(M, N)) + 1j * rng.normal(size=(M, N))) / np.sqrt(N)
    C = (rng.normal(size=(M, N, N)) + 1j * rng.normal(size=(M, N, N))) / N
    B = (rng.normal(size=(M, N)) + 1j * rng.normal(size=(M, N))) / np.sqrt(N)

    def holo(z):
        return A @ z + np.einsum("rij,i,j->r", C, z, z)

    if kind == 0:
        return MapField(N, M, holo)
    if kind == 1:
        return MapField(N, M, lambda z: holo(z.conj()), True)
    return MapField(N, M, lambda z: holo(z) + B @ z.conj() + B[:, 0] * abs(z[0]) ** 2)


def test_ac08_chain_rule_and_levi(acceptance):
    acceptance(8, "chain rule and Levi decomposition")
    rng = np.random.default_rng(8)
    worst_chain = 0.0
    for _ in range(50):
        N, M = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        A = (rng.normal(size=(M, N)) + 1j * rng.normal(size=(M, N))) / np.sqrt(N)
        H = _hermitian(rng, M)
        phi = quadratic_form(H, rng.normal(size=M) + 1j * rng.normal(size=M))
        z = rng.normal(size=N) + 1j * rng.normal(size=N)
        fd = complex_hessian(compose(phi, linear_map(A)), z, FINE)
        worst_chain = max(worst_chain, np.abs(fd - chain_hessian(A.T, H)).max())
    assert worst_chain <= 1e-6
    worst_levi = 0.0
    for i in range(50):
        N, M = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        phi, f = _phi(rng, M), _map(rng, N, M, i % 3)
        # unit-scale inputs keep the Levi values O(1), where an absolute bound is meaningful
        z = _points(rng, 1, N, 0.1, 0.5)[0]
        X = _points(rng, 1, N, 1.0, 1.0)[0]
        worst_levi = max(worst_levi, levi_decomposition_check(phi, f, z, X, FINE))
    assert worst_levi <= 1e-5
    acceptance(8, "chain rule and Levi decomposition", f"(chain {worst_chain:.1e} <= 1e-6; Levi {worst_levi:.1e} <= 1e-5)")


def test_ac09_gk_boundary(acceptance):
    acceptance(9, "G_k sits on the boundary of Lambda(k,3)")
    rng = np.random.default_rng(9)
    worst = 0.0
    for k in (1, 2, 3):
        u = gk(k, 3)
        for z in _points(rng, 50, 3, 0.5, 2.0):
            s = symcone.sigmas(eigvalsh(complex_hessian(u, z, FINE)), k)
            assert -1e-4 <= s[-1] <= 1e-4
            assert np.all(s[:-1] > 0)
            worst = max(worst, abs(s[-1]))
    acceptance(9, "G_k sits on the boundary of Lambda(k,3)", f"(worst |sigma_k| {worst:.1e} <= 1e-4)")


def test_ac10_holomorphy_probes(acceptance):
    acceptance(10, "holomorphy probes")
    grid = lattice(0.5, 3, 2)
    holo = MapField(2, 2, lambda z: np.array([z[0] ** 2, z[0] * z[1]]))
    anti = MapField(2, 2, lambda z: z.conj())
    mixed = MapField(2, 2, lambda z: np.array([z[0], z[1].conj()]))
    assert cr_residuals(holo, grid).kind == "holomorphic"
    assert cr_residuals(anti, grid).kind == "anti_holomorphic"
    assert cr_residuals(mixed, grid).kind == "neither"
    for F in (holo, anti):
        pr = holomorphy_probe(F, grid)
        assert max(pr.residuals.values()) <= 1e-6 and not pr.failing
    pm = holomorphy_probe(mixed, grid)
    assert pm.residuals["holomorphic_split"] > 0.1
    assert cr_residuals(mixed, grid).mixed_product > 0.1
    acceptance(10, "holomorphy probes", f"(mixed-map product residual {pm.residuals['holomorphic_split']:.2f})")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
