"""Path simulation: trace invariants, degenerate laws, determinism."""

import numpy as np
import pytest

from merw.core import validate_params
from merw.engine import (
    default_checkpoints,
    dense_checkpoints,
    moves_series_random_steps,
    moves_series_stops,
    path_statistics,
    recompute_statistics,
    simulate_random_steps,
    simulate_stops,
)
from merw.ensemble import seed_stream
from merw.sizes import Exponential, PointMass, StepSizeModel, ZeroInflatedPointMass


def zip_sizes(b, value=1.0):
    return StepSizeModel(later=ZeroInflatedPointMass(b=b, value=value))


def test_default_checkpoints():
    assert list(default_checkpoints(200)) == [1, 2, 4, 8, 16, 32, 64, 128, 200]
    assert list(default_checkpoints(8)) == [1, 2, 4, 8]
    assert list(default_checkpoints(1)) == [1]


def test_checkpoint_validation():
    p = validate_params(2, 0.4, 0.3)
    with pytest.raises(ValueError):
        simulate_stops(p, 10, seed_stream(0, 0), checkpoints=[0, 5])
    with pytest.raises(ValueError):
        simulate_stops(p, 10, seed_stream(0, 0), checkpoints=[11])
    with pytest.raises(ValueError):
        simulate_stops(p, 0, seed_stream(0, 0))


def test_no_rest_actions_means_all_moves():
    p = validate_params(3, 0.4, 0.0)
    t = simulate_stops(p, 100, seed_stream(1, 0))
    assert t.moves[-1] == 100
    assert np.array_equal(t.moves, t.checkpoints)


def test_certain_rest_freezes_after_first_step():
    p = validate_params(2, 0.0, 1.0)
    t = simulate_stops(p, 50, seed_stream(2, 0), keep_steps=True)
    assert t.moves[-1] == 1
    w = t.position_int[-1]
    assert np.abs(w).sum() == 1  # the position is +-e_i from step 1
    axis, sign, _ = t.steps
    assert np.all(axis[1:] == 0)


def test_trace_invariants_across_seeds():
    cases = [
        (validate_params(1, 0.6, 0.2), None),
        (validate_params(2, 0.4, 0.3), None),
        (validate_params(3, 0.2, 0.5), None),
        (validate_params(2, 0.5, 0.0), zip_sizes(0.4)),
        (validate_params(4, 0.3, 0.0), StepSizeModel(later=Exponential(1.0))),
    ]
    for params, sizes in cases:
        for seed in range(5):
            rng = seed_stream(97, seed)
            n = 300
            if sizes is None:
                t = simulate_stops(params, n, rng, checkpoints=dense_checkpoints(n))
            else:
                t = simulate_random_steps(params, sizes, n, rng, checkpoints=dense_checkpoints(n))
            # moves are in [1, k], nondecreasing with 0/1 increments
            assert t.moves[0] == 1
            inc = np.diff(t.moves)
            assert set(np.unique(inc)).issubset({0, 1})
            assert np.all(t.moves >= 1) and np.all(t.moves <= t.checkpoints)
            # moves + delays = n at every checkpoint
            assert np.array_equal(t.moves + t.delays(), t.checkpoints)
            # |W|_1 <= k; sigma diagonal sums to moves (stops) or k (steps)
            assert np.all(np.abs(t.position_int).sum(axis=1) <= t.checkpoints)
            sums = t.sigma_diag.sum(axis=1)
            if sizes is None:
                assert np.array_equal(sums, t.moves)
            else:
                assert np.array_equal(sums, t.checkpoints)


def test_stops_moves_equals_sum_of_squared_norms():
    params = validate_params(2, 0.4, 0.3)
    t = simulate_stops(params, 200, seed_stream(3, 1), keep_steps=True)
    axis, sign, _ = t.steps
    assert t.moves[-1] == int(np.sum(axis != 0))


def test_random_steps_moves_counts_nonzero_sizes():
    sizes = zip_sizes(0.5)
    params = validate_params(2, 0.5, 0.0)
    t = simulate_random_steps(params, sizes, 500, seed_stream(4, 2), keep_steps=True)
    _, _, y = t.steps
    assert t.moves[-1] == int(np.sum(y != 0.0))
    assert y[0] > 0.0


def test_unit_sizes_make_s_equal_w():
    params = validate_params(3, 0.4, 0.0)
    t = simulate_random_steps(params, zip_sizes(0.0), 200, seed_stream(5, 0))
    assert np.array_equal(t.position_real, t.position_int.astype(float))
    assert t.moves[-1] == 200


def test_pure_repeat_one_dimension():
    # d=1, p=1 forces q=0: the walker repeats its first step forever
    params = validate_params(1, 1.0, 0.0)
    t = simulate_random_steps(params, zip_sizes(0.0), 10, seed_stream(6, 0))
    s10 = t.position_real[-1]
    assert abs(s10[0]) == 10.0


def test_rejects_nonzero_r_for_random_steps():
    with pytest.raises(ValueError):
        simulate_random_steps(validate_params(2, 0.4, 0.3), zip_sizes(0.5), 10, seed_stream(0, 0))


def test_path_statistics_and_recompute():
    params = validate_params(3, 0.3, 0.2)
    t = simulate_stops(params, 30, seed_stream(7, 3), checkpoints=[1, 7, 30], keep_steps=True)
    for k in (1, 7, 30):
        stored = path_statistics(t, k)
        recomputed = recompute_statistics(t, k)
        assert stored[0] == recomputed[0]
        for a, b in zip(stored[1:], recomputed[1:]):
            assert np.array_equal(a, b)
    assert path_statistics(t, 1)[0] == 1  # the first step always moves
    with pytest.raises(KeyError):
        path_statistics(t, 8)


def test_known_prefix_example():
    # steps +e1, +e1, -e2 give W = (2, -1), sigma = (2, 1), moves = 3
    axis = np.array([1, 1, 2], dtype=np.int16)
    sign = np.array([1, 1, -1], dtype=np.int8)
    y = np.ones(3)
    from merw import _kernels

    cps = np.array([3], dtype=np.int64)
    moves = np.zeros(1, np.int64)
    w = np.zeros((1, 2), np.int64)
    s = np.zeros((1, 2), np.float64)
    sig = np.zeros((1, 2), np.int64)
    _kernels.checkpoint_stats(axis, sign, y, (axis != 0).astype(np.uint8), cps, moves, w, s, sig)
    assert moves[0] == 3
    assert list(w[0]) == [2, -1]
    assert list(sig[0]) == [2, 1]


def test_determinism_same_seed_bit_identical():
    params = validate_params(2, 0.4, 0.3)
    t1 = simulate_stops(params, 500, seed_stream(11, 4), keep_steps=True)
    t2 = simulate_stops(params, 500, seed_stream(11, 4), keep_steps=True)
    assert np.array_equal(t1.moves, t2.moves)
    assert np.array_equal(t1.position_real, t2.position_real)
    assert np.array_equal(t1.steps[0], t2.steps[0])
    t3 = simulate_stops(params, 500, seed_stream(11, 5), keep_steps=True)
    assert not np.array_equal(t1.steps[0], t3.steps[0])


def test_moves_series_matches_trace():
    params = validate_params(2, 0.4, 0.3)
    n = 400
    series = moves_series_stops(params, n, seed_stream(13, 0))
    trace = simulate_stops(params, n, seed_stream(13, 0), checkpoints=dense_checkpoints(n))
    assert np.array_equal(series, trace.moves)
    sizes = zip_sizes(0.5)
    series = moves_series_random_steps(sizes, n, seed_stream(13, 1))
    assert series[0] == 1
    assert np.all(np.diff(series) >= 0)


def test_two_step_law_full_engine():
    # d=1, n=2: P{X2 = X1} = p, P{X2 = -X1} = q, P{X2 = 0} = r
    params = validate_params(1, 0.6, 0.3)
    reps = 20_000
    same = flip = rest = 0
    for i in range(reps):
        t = simulate_stops(params, 2, seed_stream(1701, i), keep_steps=True)
        axis, sign, _ = t.steps
        if axis[1] == 0:
            rest += 1
        elif sign[1] == sign[0]:
            same += 1
        else:
            flip += 1
    for count, prob in [(same, params.p), (flip, params.q), (rest, params.r)]:
        se = np.sqrt(prob * (1 - prob) / reps)
        assert abs(count / reps - prob) < 4 * se


def test_two_step_law_million_draws():
    # the same law at 1e6 draws via the vectorized primitives the engine uses
    params = validate_params(1, 0.6, 0.3)
    rng = seed_stream(2024, 0)
    n = 1_000_000
    first_u = rng.random(n)
    act_u = rng.random(n)
    sign1 = np.where((np.minimum((first_u * 2).astype(int), 1) % 2) == 0, 1, -1)
    # d=1 action decode: repeat, single alternative (-I), rest
    repeat = act_u < params.p
    rest = act_u >= params.p + params.q
    sign2 = np.where(rest, 0, np.where(repeat, sign1, -sign1))
    p_hat = np.mean(sign2 == sign1)
    q_hat = np.mean(sign2 == -sign1)
    r_hat = np.mean(sign2 == 0)
    for est, prob in [(p_hat, params.p), (q_hat, params.q), (r_hat, params.r)]:
        assert abs(est - prob) < 4 * np.sqrt(prob * (1 - prob) / n)


def test_conditional_mean_regression_slope():
    # regression through the origin of moves(n+1) on moves(n) has slope
    # 1 + (1-r)/n up to Monte-Carlo error
    from merw.ensemble import EnsembleConfig, run_ensemble

    params = validate_params(2, 0.4, 0.3)
    n = 20
    cfg = EnsembleConfig(
        params=params, variant="stops", n=n + 1, replicas=20_000,
        master_seed=314, checkpoints=(n, n + 1),
    )
    s = run_ensemble(cfg)
    m_n = s.moves[:, 0].astype(float)
    m_n1 = s.moves[:, 1].astype(float)
    slope = float(np.sum(m_n1 * m_n) / np.sum(m_n**2))
    want = 1 + (1 - params.r) / n
    # per-step increment noise is bounded by 1, so the slope SE is below
    # 1/sqrt(R E[m^2]); 4x that is a safe band
    se = 1.0 / np.sqrt(len(m_n) * np.mean(m_n**2))
    assert abs(slope - want) < 4 * se
