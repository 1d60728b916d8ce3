import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import iterate_plain
from operiter import (
    AffineOperator,
    Constant,
    NoContractiveStrip,
    NumericalError,
    Periodic,
    RandomContractive,
    RangeError,
    StripSchedule,
    Termination,
    cauchy_residual,
    find_contractive_strips,
    iterate,
    operator_norm,
    orthogonal_projector,
    strip,
    trace_from_csv,
    trace_to_csv,
)


def half_plus_one():
    return Constant(AffineOperator(0.5 * np.eye(2), np.array([1.0, 1.0])))


def rot(theta, scale=1.0):
    c, s = np.cos(theta), np.sin(theta)
    return scale * np.array([[c, -s], [s, c]])


def test_first_steps_and_convergence():
    trace = iterate(half_plus_one(), x0=[0.0, 0.0], max_k=500)
    np.testing.assert_allclose(trace.xs[1], [1.0, 1.0])
    np.testing.assert_allclose(trace.xs[2], [1.5, 1.5])
    assert trace.terminated_reason is Termination.CONVERGED
    np.testing.assert_allclose(trace.final_x, [2.0, 2.0], atol=1e-9)
    assert trace.d_x[0] == 0.0 and trace.d_x[1] == pytest.approx(np.sqrt(2.0))


def test_projection_recorded():
    P = orthogonal_projector([[1.0], [0.0]])
    trace = iterate(half_plus_one(), Constant(P), x0=[4.0, 4.0], max_k=50)
    np.testing.assert_allclose(trace.zs[:, 1], 0.0)
    np.testing.assert_allclose(trace.zs[:, 0], trace.xs[:, 0])


def test_period_two_alternates():
    ops = Periodic((
        AffineOperator(0.5 * np.eye(2), np.array([1.0, 0.0])),
        AffineOperator(0.5 * np.eye(2), np.array([0.0, 1.0])),
    ))
    trace = iterate(ops, x0=[0.0, 0.0], max_k=400)
    assert trace.terminated_reason is Termination.MAX_ITER
    np.testing.assert_allclose(trace.xs[-1], [2 / 3, 4 / 3], atol=1e-12)
    np.testing.assert_allclose(trace.xs[-2], [4 / 3, 2 / 3], atol=1e-12)
    assert cauchy_residual(trace) == pytest.approx(np.sqrt(2.0) * 2 / 3, rel=1e-9)


def test_identity_converges_immediately():
    trace = iterate(Constant(AffineOperator.identity(3)), x0=[1.0, 2.0, 3.0], max_k=100)
    assert trace.terminated_reason is Termination.CONVERGED
    assert len(trace) == 33


def test_divergence_detected():
    trace = iterate(Constant(AffineOperator.linear(3 * np.eye(2))), x0=[1.0, 0.0], div_bound=1e6)
    assert trace.terminated_reason is Termination.DIVERGED
    assert np.linalg.norm(trace.final_x) > 1e6


def test_non_finite_state_raises():
    seq = Constant(AffineOperator.linear(1e200 * np.eye(1)))
    with pytest.raises(NumericalError) as info:
        iterate(seq, x0=[1e200], div_bound=np.inf)
    assert info.value.step == 1


@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_matches_plain_loop(seed, dim):
    seq = RandomContractive(dim, seed, 1.1, offset_scale=1.0)
    x0 = np.random.default_rng(seed).standard_normal(dim)
    trace = iterate(seq, x0=x0, max_k=60, conv_tol=0.0)
    plain = []
    x = x0.copy()
    plain.append(x)
    for k in range(60):
        op = seq[k]
        x = op.matrix @ x + op.offset
        plain.append(x)
    np.testing.assert_allclose(trace.xs, np.array(plain), rtol=1e-12, atol=1e-12)


def test_plain_oracle_agrees_on_periodic():
    a = (rot(0.5, 0.9), np.array([1.0, 0.0]))
    b = (rot(-1.0, 0.7), np.array([0.0, 2.0]))
    seq = Periodic((AffineOperator(*a), AffineOperator(*b)))
    trace = iterate(seq, x0=[1.0, 1.0], max_k=30, conv_tol=0.0)
    np.testing.assert_allclose(trace.xs, iterate_plain([a, b], [1.0, 1.0], 30), atol=1e-13)


def test_csv_round_trip_is_exact(tmp_path):
    seq = RandomContractive(3, 5, 0.9, offset_scale=1.0)
    trace = iterate(seq, x0=[1.0, -2.0, 0.5], max_k=40).with_strip_boundaries([0, 3, 7])
    path = tmp_path / "trace.csv"
    text = trace_to_csv(trace, path)
    assert text.splitlines()[0] == "k,x_0,x_1,x_2,z_0,z_1,z_2,d_x,d_z,strip_boundary"
    back = trace_from_csv(path)
    np.testing.assert_array_equal(back.xs, trace.xs)
    np.testing.assert_array_equal(back.zs, trace.zs)
    np.testing.assert_array_equal(back.d_x, trace.d_x)
    assert back.strip_boundaries == {0, 3, 7}
    assert trace_to_csv(back) == text


def test_strip_search_alternating():
    seq = Periodic((
        AffineOperator(rot(0.4, 1.2), np.array([1.0, 0.0])),
        AffineOperator(rot(1.1, 0.5), np.array([0.0, 1.0])),
    ))
    sched = find_contractive_strips(seq, 0.9, 4, 100)
    assert sched.validate() is sched
    assert set(sched.gaps) == {2}
    assert max(sched.per_strip_norm) == pytest.approx(0.6)
    for i in range(sched.strip_count):
        j, k = sched.boundaries[i], sched.boundaries[i + 1] - 1
        assert strip(seq, j, k).norm() == pytest.approx(sched.per_strip_norm[i])


def test_strip_search_failure_reports_best():
    seq = Constant(AffineOperator.linear(rot(0.3, 1.5)))
    with pytest.raises(NoContractiveStrip) as info:
        find_contractive_strips(seq, 0.9, 3, 10)
    assert info.value.start == 0
    assert info.value.best_norm == pytest.approx(1.5)


def test_strip_search_rejects_bad_target():
    with pytest.raises(ValueError):
        find_contractive_strips(half_plus_one(), 1.0, 2, 10)


@given(st.integers(0, 2**32 - 1), st.floats(0.3, 0.95), st.integers(1, 4))
def test_greedy_schedule_is_sound(seed, K, max_gap):
    seq = RandomContractive(3, seed, 1.4)
    try:
        sched = find_contractive_strips(seq, K, max_gap, 30)
    except NoContractiveStrip as exc:
        # the reported window really has no admissible strip
        for g in range(1, max_gap + 1):
            assert strip(seq, exc.start, exc.start + g - 1).norm() > K
        return
    sched.validate()
    assert sched.boundaries[-1] >= 30
    for i, norm in enumerate(sched.per_strip_norm):
        j, k = sched.boundaries[i], sched.boundaries[i + 1]
        assert norm <= K
        # greedy: no shorter prefix qualified
        for end in range(j, k - 1):
            assert operator_norm(strip(seq, j, end).realized) > K


def test_schedule_validate_rejects_bad_gaps():
    with pytest.raises(RangeError):
        StripSchedule((0, 3), (0.5,), 0.5, 2).validate()
    with pytest.raises(RangeError):
        StripSchedule((1, 2), (0.5,), 0.5, 2).validate()


def test_cauchy_residual_window_bounds():
    trace = iterate(half_plus_one(), x0=[0.0, 0.0], max_k=5, conv_tol=0.0)
    with pytest.raises(RangeError):
        cauchy_residual(trace, window=100)
