import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from gaitsym.errors import (
    AmbiguousCycleError,
    DegenerateSystemError,
    InsufficientRecordError,
    InvalidInputError,
    MissingDataError,
)
from gaitsym.ingest import JointId, JointTrajectory
from gaitsym.signal import CycleEstimate, SpeedMode, fractional_circular_shift, pearson
from gaitsym.symmetry import (
    CASE_ORDER,
    Classification,
    CouplingCase,
    case_series,
    classify,
    combined_cycle,
    dissimilarity,
    evaluate_all_cases,
    merge_cycles,
    quarter_shift_correlation,
)


def gait_like(M, T, offset=0.0):
    n = np.arange(M) - offset
    return np.maximum(0.0, np.sin(2 * np.pi * n / T)) ** 2 + 0.3 * np.sin(4 * np.pi * n / T)


# ── Quarter-cycle shift correlation ────────────────────────────────


def test_antiphase_copies_realign():
    right = gait_like(96, 32)
    left = gait_like(96, 32, offset=16)  # left[n] = right[n - T/2]
    res = quarter_shift_correlation(left, right, 32)
    assert res.rho >= 0.999
    assert (res.left_shift, res.right_shift, res.analyzed_length) == (8.0, -8.0, 96)


def test_in_phase_sinusoid_negates():
    x = np.sin(2 * np.pi * np.arange(96) / 32)
    res = quarter_shift_correlation(x, x, 32)
    assert res.rho == pytest.approx(pearson(x, fractional_circular_shift(x, 16)), abs=1e-12)
    assert res.rho == pytest.approx(-1.0, abs=1e-9)


def test_trims_to_whole_cycles():
    x = gait_like(100, 30)
    res = quarter_shift_correlation(x, gait_like(100, 30, 15), CycleEstimate(30, 0.8, (15, 50)))
    assert res.analyzed_length == 90
    assert res.left_shifted.shape == (90,)


def test_cycle_too_long_for_record():
    x = gait_like(60, 31)
    with pytest.raises(InsufficientRecordError):
        quarter_shift_correlation(x, x, 31)


def test_shift_length_mismatch():
    with pytest.raises(InvalidInputError):
        quarter_shift_correlation(np.ones(60), np.ones(61), 20)


@settings(max_examples=40, deadline=None)
@given(st.integers(16, 40), st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_half_cycle_offset_invariance(T, k, seed):
    # any periodic waveform and its half-cycle delay realign exactly
    rng = np.random.default_rng(seed)
    one = rng.normal(size=T)
    right = np.tile(one, k)
    left = fractional_circular_shift(right, T / 2)
    res = quarter_shift_correlation(left, right, T)
    assert res.rho == pytest.approx(1.0, abs=1e-9)


# ── Coupling cases ─────────────────────────────────────────────────


def test_case_modes():
    assert (CouplingCase.HH.input_mode, CouplingCase.HH.output_mode) == (SpeedMode.HORIZONTAL,) * 2
    assert CouplingCase.HV.input_mode is SpeedMode.HORIZONTAL
    assert CouplingCase.HV.output_mode is SpeedMode.VERTICAL
    assert CouplingCase.VH.input_mode is SpeedMode.VERTICAL
    assert [str(c) for c in CASE_ORDER] == ["HV", "VH", "HH", "VV"]


def static_trajectories(n=10):
    return {
        j: JointTrajectory.from_arrays(j, np.full(n, 3.0), np.full(n, 4.0), threshold=0.5)
        for j in JointId
    }


def test_case_series_components(make_traj):
    traj = make_traj()
    a, b, x, y = case_series(traj, CouplingCase.HV)
    assert (a.source, b.source, x.source, y.source) == (
        JointId.RAnkle,
        JointId.RWrist,
        JointId.LAnkle,
        JointId.LWrist,
    )
    assert a.mode is SpeedMode.HORIZONTAL and b.mode is SpeedMode.VERTICAL
    assert np.array_equal(a.values, np.diff(traj[JointId.RAnkle].x))
    assert np.array_equal(y.values, np.diff(traj[JointId.LWrist].y))
    hh = case_series(traj, CouplingCase.HH)
    assert all(s.mode is SpeedMode.HORIZONTAL for s in hh)


def test_case_series_static_subject():
    for s in case_series(static_trajectories(), CouplingCase.VV):
        assert np.all(s.values == 0.0)


def test_case_series_missing_joint():
    traj = static_trajectories()
    del traj[JointId.LWrist]
    with pytest.raises(MissingDataError, match="LWrist"):
        case_series(traj, CouplingCase.HV)


# ── Dissimilarity ──────────────────────────────────────────────────


def test_dis_identical_systems_zero():
    a, b = [1.0, 2.0, -1.0], [0.5, 0.0, 3.0]
    dis, pair = dissimilarity(a, b, a, b)
    assert dis == 0.0
    assert np.array_equal(pair.u, pair.v)


def test_dis_hand_example():
    dis, pair = dissimilarity([1, 0], [1, 0], [0, 1], [1, 0])
    assert pair.u.tolist() == [1, 0, 0]
    assert pair.v.tolist() == [0, 1, 0]
    assert dis == 2.0
    assert oracles.dissimilarity([1, 0], [1, 0], [0, 1], [1, 0]) == 2.0


def test_dis_zero_norm():
    with pytest.raises(DegenerateSystemError):
        dissimilarity([0, 0], [1, 1], [1, 1], [1, 1])


def test_dis_length_mismatch():
    with pytest.raises(InvalidInputError):
        dissimilarity([1, 2], [1, 2], [1, 2], [1, 2, 3])


def test_dis_demean():
    a = np.array([1.0, 2.0, 3.0, 4.0])
    dis, _ = dissimilarity(a + 10, a, a + 20, a, demean=True)
    assert dis == pytest.approx(0.0, abs=1e-12)


series4 = st.integers(2, 40).flatmap(
    lambda n: st.tuples(*[st.lists(st.floats(-10, 10, allow_nan=False), min_size=n, max_size=n)] * 4)
)


@settings(max_examples=80, deadline=None)
@given(series4)
def test_dis_matches_oracle_and_is_symmetric(s):
    a, b, x, y = s
    assume(np.linalg.norm(np.convolve(a, y)) > 1e-6 and np.linalg.norm(np.convolve(x, b)) > 1e-6)
    dis, _ = dissimilarity(a, b, x, y)
    assert dis >= 0.0
    assert dis == pytest.approx(oracles.dissimilarity(a, b, x, y), rel=1e-9, abs=1e-12)
    swapped, _ = dissimilarity(x, y, a, b)
    assert swapped == pytest.approx(dis, rel=1e-9, abs=1e-12)
    # ||u - v||^2 <= (||u|| + ||v||)^2 gives dis <= r + 1/r + 2
    u, v = np.convolve(a, y), np.convolve(x, b)
    r = np.linalg.norm(u) / np.linalg.norm(v)
    assert dis <= r + 1 / r + 2 + 1e-9


@settings(max_examples=60, deadline=None)
@given(series4, st.sampled_from([0.1, 2.0, 100.0]), st.sampled_from(["right", "left", "input", "output"]))
def test_dis_scale_invariance(s, c, which):
    a, b, x, y = (np.array(v) for v in s)
    assume(np.linalg.norm(np.convolve(a, y)) > 1e-6 and np.linalg.norm(np.convolve(x, b)) > 1e-6)
    base, _ = dissimilarity(a, b, x, y)
    if which == "right":
        a, b = c * a, c * b
    elif which == "left":
        x, y = c * x, c * y
    elif which == "input":
        a, x = c * a, c * x
    else:
        b, y = c * b, c * y
    scaled, _ = dissimilarity(a, b, x, y)
    assert scaled == pytest.approx(base, rel=1e-9, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 30), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_dis_common_delay_invariance(n, delay, seed):
    # the left system is the right one seen `delay` samples later
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=(2, n))
    x = np.concatenate([np.zeros(delay), a])
    y = np.concatenate([np.zeros(delay), b])
    a = np.concatenate([a, np.zeros(delay)])
    b = np.concatenate([b, np.zeros(delay)])
    dis, _ = dissimilarity(a, b, x, y)
    assert dis < 1e-20


def test_classify_threshold():
    assert classify(0.7) is Classification.SYMMETRIC
    assert classify(0.7, threshold=0.5) is Classification.ASYMMETRIC
    assert classify(1.0) is Classification.ASYMMETRIC


def test_evaluate_all_cases_symmetric(make_traj):
    report = evaluate_all_cases(make_traj())
    assert list(report.cases) == list(CASE_ORDER)
    assert all(r.classification is Classification.SYMMETRIC for r in report.cases.values())
    assert report.asymmetric_cases == set()


def test_evaluate_all_cases_motion_a_pattern(make_traj):
    report = evaluate_all_cases(make_traj(left_amp_ratio=0.5, left_phase_jitter=0.8, waveform_distortion=0.5))
    assert report.asymmetric_cases == {CouplingCase.HV, CouplingCase.VH, CouplingCase.VV}
    assert report.dis("HH") < 1.0


def test_evaluate_all_cases_degenerate_case_recorded():
    traj = static_trajectories()
    report = evaluate_all_cases(traj)
    assert all(r.classification is Classification.DEGENERATE for r in report.cases.values())
    assert all(math.isnan(r.dis) for r in report.cases.values())


def test_evaluate_all_cases_missing_joint():
    traj = static_trajectories()
    del traj[JointId.RWrist]
    with pytest.raises(MissingDataError, match="RWrist"):
        evaluate_all_cases(traj)


# ── Cycle from both ankles ─────────────────────────────────────────


def est(p):
    return CycleEstimate(p, 0.8, (15, 49))


def test_merge_equal():
    assert merge_cycles(est(33), est(33)).period_frames == 33


def test_merge_rounded_mean():
    assert merge_cycles(est(30), est(32)).period_frames == 31
    assert merge_cycles(est(30), est(31)).period_frames == 31


def test_merge_divergent():
    with pytest.raises(AmbiguousCycleError):
        merge_cycles(est(30), est(60))


def test_combined_cycle_from_ankles():
    n = np.arange(99)
    left = np.sin(2 * np.pi * (n - 16.5) / 33) + 1.0
    right = np.sin(2 * np.pi * n / 33) + 1.0
    assert combined_cycle(left, right).period_frames == 33
