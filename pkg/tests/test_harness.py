import json

import numpy as np
import pytest

from cnsmorph import symcone
from cnsmorph.cli.report import encode, strip_volatile
from cnsmorph.harness import campaign_lemma35, run_paper_suite, sample_cone, stream
from cnsmorph.harness.campaigns import CONE_CAMPAIGNS, find_multiplier_witness
from cnsmorph.harness.sampling import random_multiplier_config
from cnsmorph.harness.suite import ATTRIBUTION, run_item


def _stable(report):
    return json.dumps(strip_volatile(encode(report.as_dict())), sort_keys=True)


@pytest.fixture(scope="module")
def suite0():
    return run_paper_suite(seed=0)


def test_suite_passes_and_covers_every_item(suite0):
    assert suite0.passed
    names = [i.name for i in suite0.items]
    assert len(names) == len(set(names)) == 10
    assert all(i.kind in ATTRIBUTION for i in suite0.items)


def test_suite_is_deterministic(suite0):
    assert _stable(run_paper_suite(seed=0)) == _stable(suite0)


def test_parallel_run_matches_serial():
    names = ["example_field_end_to_end", "singular_value_condition", "gk_boundary", "holomorphy_probes"]
    serial = run_paper_suite(seed=0, items=names)
    assert _stable(run_paper_suite(seed=0, workers=4, items=names)) == _stable(serial)


@pytest.mark.parametrize("seed", [7, 2024])
def test_suite_is_seed_robust(seed):
    report = run_paper_suite(seed=seed)
    assert report.passed, [i.name for i in report.items if not i.passed]


def test_tight_tolerances_fail_with_an_attribution():
    report = run_paper_suite(seed=0, tolerance_scale=0.01)
    failed = [i for i in report.items if not i.passed]
    assert failed
    for item in failed:
        # a finite-difference failure whose analytic reference also fails is blamed on the statement
        kind = "exact" if item.kind == "fd" and item.exact_reference_ok is False else item.kind
        assert item.attribution == ATTRIBUTION[kind]
    kinds = {i.name: i.attribution for i in failed}
    assert kinds["example_field_end_to_end"] == ATTRIBUTION["fd"]
    assert kinds["oracle_equivalences"] == ATTRIBUTION["rounding"]


def test_items_can_be_selected():
    report = run_paper_suite(seed=0, items=["singular_value_condition"])
    assert [i.name for i in report.items] == ["singular_value_condition"]
    with pytest.raises(KeyError):
        run_item("no_such_item")


def test_streams_are_independent_and_reproducible():
    a = stream(0, "x").random(4)
    np.testing.assert_array_equal(a, stream(0, "x").random(4))
    assert not np.array_equal(a, stream(0, "y").random(4))
    assert not np.array_equal(a, stream(1, "x").random(4))


def test_sample_cone_returns_members(rng):
    for k, N in [(1, 3), (2, 4), (3, 3), (2, 6)]:
        X = sample_cone(rng, k, N, 200)
        assert X.shape == (200, N)
        assert np.all(symcone.members(X, k, tol=1e-9))
        np.testing.assert_allclose(np.abs(X).max(axis=1), 1.0)


def test_random_multiplier_configs_are_admissible(rng):
    for _ in range(200):
        k, l, K, L = random_multiplier_config(rng)
        assert 1 <= k <= l <= L and k < K <= 6 and L <= 6


@pytest.mark.parametrize("campaign", CONE_CAMPAIGNS)
def test_cone_campaigns_pass(campaign):
    c = campaign(trials=300, seed=5)
    assert c.passed and c.violations == 0 and c.counterexample is None


def test_zero_multiplier_has_no_violations():
    c = campaign_lemma35(2, 2, 4, 3, trials=1000, y=np.zeros(3))
    assert c.passed and c.details["direction_i"]["violations"] == 0


@pytest.mark.parametrize("a", [0.3, 1.0])
def test_constant_nonzero_multiplier_is_refuted(a):
    # with L < K only y = 0 survives, so a constant nonzero y is caught in direction (i)
    c = campaign_lemma35(2, 2, 4, 3, trials=1000, y=a * np.ones(3))
    assert not c.passed and c.counterexample["direction"] == "i"
    x = np.array(c.counterexample["x"])
    assert symcone.cone_member(x, symcone.ConeSpec(2, 4)).is_member
    assert not symcone.cone_member(a * x[:3], symcone.ConeSpec(2, 3)).is_member


def test_unequal_multiplier_has_an_extremal_witness():
    assert find_multiplier_witness(np.array([1.0, 2.0, 3.0]), 2, 2, 4, 3) is not None


def test_k_below_l_rejects_equal_nonzero_multiplier():
    for K, L in [(3, 3), (3, 4), (4, 5)]:
        assert find_multiplier_witness(np.ones(L), 2, 3, K, L) is not None


def test_default_multiplier_campaign_passes():
    for cfg in [(1, 1, 2, 2), (1, 2, 3, 3), (2, 3, 4, 5)]:
        assert campaign_lemma35(*cfg, trials=200).passed


def test_find_multiplier_witness_accepts_conforming_y():
    assert find_multiplier_witness(np.zeros(3), 2, 2, 4, 3) is None
    assert find_multiplier_witness(2 * np.ones(3), 2, 2, 3, 3) is None
