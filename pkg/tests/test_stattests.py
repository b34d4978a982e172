"""Statistical checks: trivial verdicts, guard rails, and null calibration.

Calibration: each check, fed synthetic data drawn exactly from its null,
must pass in at least 97 of 100 seeded repetitions.
"""

import math

import numpy as np
import pytest

from merw.analytics import CENTERED_MOVES, MULTIPLICATIVE_MOVES, POSITION, expected_moves
from merw.core import validate_params
from merw.ensemble import EnsembleConfig, run_ensemble, seed_stream
from merw.sizes import PointMass, StepSizeModel, ZeroInflatedPointMass
from merw.stattests import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    lil_smoke,
    test_clt_moves as check_clt_moves,
    test_lln_endpoint as check_lln_endpoint,
    test_martingale_drift as check_martingale_drift,
    test_mean_moves as check_mean_moves,
    test_sigma_convergence as check_sigma_convergence,
    test_variation_identity as check_variation_identity,
    z_scores,
)


def zip_sizes(b):
    return StepSizeModel(later=ZeroInflatedPointMass(b=b, value=1.0))


def small_ensemble(params, variant="stops", sizes=None, n=64, replicas=200, seed=0, **kw):
    cfg = EnsembleConfig(
        params=params, variant=variant, sizes=sizes, n=n, replicas=replicas,
        master_seed=seed, **kw,
    )
    return run_ensemble(cfg)


class TestZScores:
    def test_exact_agreement_zero_variance(self):
        assert z_scores(1.0, 1.0, 0.0) == 0.0

    def test_zero_variance_mismatch_is_infinite(self):
        assert z_scores(1.5, 1.0, 0.0) == np.inf

    def test_vector(self):
        z = z_scores([1.0, 2.0], [1.0, 1.0], [0.0, 0.5])
        assert z == pytest.approx([0.0, 2.0])


class TestMeanMoves:
    def test_certain_rest_exact(self):
        s = small_ensemble(validate_params(2, 0.0, 1.0), replicas=150)
        rep = check_mean_moves(s, r=1.0)
        assert rep.verdict == PASS  # zero variance, zero deviation
        assert rep.details["max_abs_z"] == 0.0

    def test_no_rest_exact(self):
        s = small_ensemble(validate_params(2, 0.4, 0.0), replicas=150)
        assert check_mean_moves(s, r=0.0).verdict == PASS

    def test_few_replicas_inconclusive(self):
        s = small_ensemble(validate_params(2, 0.4, 0.3), replicas=50)
        assert check_mean_moves(s, r=0.3).verdict == INCONCLUSIVE

    def test_wrong_null_fails(self):
        s = small_ensemble(validate_params(2, 0.4, 0.3), replicas=2000, n=128)
        assert check_mean_moves(s, r=0.7).verdict == FAIL

    def test_calibration(self):
        # synthetic per-replica counts drawn around the exact expectation
        params = validate_params(2, 0.4, 0.3)
        cps = np.array([8, 64, 200])
        null = expected_moves(0.3, cps)
        passes = 0
        reps = 100
        for i in range(reps):
            rng = seed_stream(1000, i)
            moves = rng.normal(null, np.sqrt(null), size=(400, 3))
            se = np.sqrt(moves.var(axis=0, ddof=1) / 400)
            z = z_scores(moves.mean(axis=0), null, se)
            passes += float(np.max(np.abs(z))) <= 4.0
        assert passes >= 97


class TestMartingaleDrift:
    def test_multiplicative_no_rest_identically_zero(self):
        s = small_ensemble(
            validate_params(2, 0.4, 0.0), replicas=1200,
            martingales=(MULTIPLICATIVE_MOVES,),
        )
        rep = check_martingale_drift(s, MULTIPLICATIVE_MOVES)
        assert rep.verdict == PASS
        assert rep.details["max_abs_z"] == 0.0

    def test_position_constant_sizes_identically_zero(self):
        s = small_ensemble(
            validate_params(2, 0.5, 0.0), variant="random-steps",
            sizes=StepSizeModel(later=PointMass(1.0)), replicas=1200,
            martingales=(POSITION,),
        )
        rep = check_martingale_drift(s, POSITION)
        assert rep.verdict == PASS

    def test_real_drift_detected(self):
        # feed the centered series the wrong zero mass: drift appears
        s = small_ensemble(
            validate_params(2, 0.5, 0.0), variant="random-steps",
            sizes=zip_sizes(0.4), replicas=4000, n=256,
            martingales=(CENTERED_MOVES,),
        )
        s.martingales[CENTERED_MOVES] += (s.checkpoints - 1) * 0.1  # corrupt
        assert check_martingale_drift(s, CENTERED_MOVES).verdict == FAIL

    def test_guards(self):
        s = small_ensemble(
            validate_params(2, 0.4, 0.3), replicas=1500, checkpoints=(64,),
            martingales=(MULTIPLICATIVE_MOVES,),
        )
        assert check_martingale_drift(s, MULTIPLICATIVE_MOVES).verdict == INCONCLUSIVE
        s = small_ensemble(
            validate_params(2, 0.4, 0.3), replicas=500,
            martingales=(MULTIPLICATIVE_MOVES,),
        )
        assert check_martingale_drift(s, MULTIPLICATIVE_MOVES).verdict == INCONCLUSIVE

    def test_calibration(self):
        passes = 0
        reps = 100
        for i in range(reps):
            rng = seed_stream(2000, i)
            incs = rng.normal(0.0, 1.0, size=(1500, 6))
            mean = incs.mean(axis=0)
            se = np.sqrt(incs.var(axis=0, ddof=1) / 1500)
            passes += float(np.max(np.abs(z_scores(mean, 0.0, se)))) <= 4.0
        assert passes >= 97


class TestCltMoves:
    def test_exact_null_passes(self):
        rng = seed_stream(3000, 0)
        x = rng.normal(0.0, math.sqrt(0.21), 20_000)
        rep = check_clt_moves(x, b=0.3, n=5000)
        assert rep.verdict == PASS
        assert rep.observed["p_value"] > 0.01

    def test_wrong_variance_fails(self):
        rng = seed_stream(3000, 1)
        x = rng.normal(0.0, 1.0, 20_000)
        assert check_clt_moves(x, b=0.3, n=5000).verdict == FAIL

    def test_degenerate_b_rejected(self):
        with pytest.raises(ValueError):
            check_clt_moves(np.zeros(10), b=0.0, n=5000)
        with pytest.raises(ValueError):
            check_clt_moves(np.zeros(10), b=1.0, n=5000)

    def test_small_n_inconclusive(self):
        rep = check_clt_moves(np.zeros(10_000), b=0.5, n=2)
        assert rep.verdict == INCONCLUSIVE

    def test_calibration(self):
        # exact-null draws: p-values are uniform, so p > 0.01 in ~99/100 runs
        passes = 0
        reps = 100
        for i in range(reps):
            rng = seed_stream(3100, i)
            x = rng.normal(0.0, math.sqrt(0.21), 4000)
            passes += check_clt_moves(x, b=0.3, n=5000).passed
        assert passes >= 97


class TestVariationIdentity:
    def test_constant_sizes_zero_budget(self):
        sizes = StepSizeModel(later=PointMass(1.0))
        s = small_ensemble(
            validate_params(2, 0.5, 0.0), variant="random-steps", sizes=sizes,
            n=20, replicas=1200, checkpoints=tuple(range(1, 21)),
            martingales=(POSITION,),
        )
        rep = check_variation_identity(s, sizes)
        assert rep.verdict == PASS
        assert rep.observed["increment_sq"] == 0.0
        assert rep.observed["cumulative"] == 0.0

    def test_zero_inflated_exact(self):
        # (Y - mu)^2 is deterministically 0.25 for the b=1/2 unit atom
        sizes = zip_sizes(0.5)
        s = small_ensemble(
            validate_params(2, 0.5, 0.0), variant="random-steps", sizes=sizes,
            n=20, replicas=1200, checkpoints=tuple(range(1, 21)),
            martingales=(POSITION,),
        )
        rep = check_variation_identity(s, sizes)
        assert rep.verdict == PASS
        assert rep.observed["increment_sq"] == pytest.approx(0.25, abs=1e-12)
        assert rep.observed["cumulative"] == pytest.approx(0.25 * 20, abs=1e-12)

    def test_requires_dense_checkpoints(self):
        sizes = zip_sizes(0.5)
        s = small_ensemble(
            validate_params(2, 0.5, 0.0), variant="random-steps", sizes=sizes,
            n=20, replicas=1100, checkpoints=(1, 2, 4, 20), martingales=(POSITION,),
        )
        with pytest.raises(ValueError):
            check_variation_identity(s, sizes)


class TestLlnEndpoint:
    def test_moves_fraction(self):
        s = small_ensemble(
            validate_params(2, 0.5, 0.0), variant="random-steps", sizes=zip_sizes(0.3),
            n=1000, replicas=300, checkpoints=(10, 100, 1000), seed=11,
        )
        assert check_lln_endpoint(s, "moves").verdict == PASS

    def test_stops_trivial_r_one(self):
        # r = 1: moves/n^r = 1/n, trivially decreasing
        s = small_ensemble(
            validate_params(2, 0.0, 1.0), n=1000, replicas=120,
            checkpoints=(10, 100, 1000), seed=12,
        )
        rep = check_lln_endpoint(s, "stops-subcritical", threshold=0.01)
        assert rep.verdict == PASS
        assert rep.observed == pytest.approx([0.1, 0.01, 0.001])

    def test_ladder_too_short(self):
        s = small_ensemble(validate_params(2, 0.4, 0.3), checkpoints=(8, 64), seed=13)
        with pytest.raises(ValueError):
            check_lln_endpoint(s, "stops-subcritical")

    def test_unknown_regime(self):
        s = small_ensemble(validate_params(2, 0.4, 0.3), checkpoints=(1, 8, 64), seed=14)
        with pytest.raises(ValueError):
            check_lln_endpoint(s, "bogus")


class TestSigmaConvergence:
    def test_one_dimensional_no_rest(self):
        s = small_ensemble(
            validate_params(1, 0.6, 0.0), n=100_000, replicas=20,
            checkpoints=(100_000,), seed=15,
        )
        rep = check_sigma_convergence(s, d=1)
        assert rep.verdict == PASS
        assert rep.observed == pytest.approx([1.0])

    def test_small_n_inconclusive(self):
        s = small_ensemble(validate_params(2, 0.4, 0.0), n=64, replicas=20, seed=16)
        assert check_sigma_convergence(s, d=2).verdict == INCONCLUSIVE


class TestLilSmoke:
    def test_advisory_never_hard_fails(self):
        rep = lil_smoke([10.0, 12.0], bound=1.0)
        assert rep.verdict == FAIL
        assert rep.advisory
        assert not rep.hard_failure()

    def test_within_bound_passes(self):
        rep = lil_smoke([0.5, 0.6, 0.7], bound=1.0, margin=0.5)
        assert rep.verdict == PASS
        assert rep.observed["fraction_within"] == 1.0


def test_report_round_trips_to_json():
    import json

    s = small_ensemble(validate_params(2, 0.4, 0.3), replicas=150, seed=17)
    rep = check_mean_moves(s, r=0.3)
    doc = json.dumps(rep.to_dict())
    again = json.loads(doc)
    assert again["name"] == "mean-moves"
    assert again["verdict"] in (PASS, FAIL, INCONCLUSIVE)
    # the verdict is recomputable from the recorded numbers
    z = z_scores(np.array(again["observed"]), np.array(again["null_value"]),
                 np.array(again["error_scale"]))
    assert (float(np.max(np.abs(z))) <= 4.0) == (again["verdict"] == PASS)
