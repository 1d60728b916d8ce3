import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import l1_norm_vertices, l2_norm_angular_grid, linf_norm_vertices
from operiter import (
    AffineOperator,
    Constant,
    Convergent,
    DimensionError,
    Explicit,
    NormKind,
    NumericalError,
    Periodic,
    Product,
    RandomContractive,
    RangeError,
    apply,
    compose,
    fold,
    operator_distance,
    operator_norm,
    power_iteration_norm,
    sequence_limit_substitute,
    strip,
)
from operiter.operators import norm_attaining_vector, operator_norms

entries = st.floats(-10, 10, allow_nan=False)


def square(n):
    return arrays(np.float64, (n, n), elements=entries)


def rot(theta, scale=1.0):
    c, s = np.cos(theta), np.sin(theta)
    return scale * np.array([[c, -s], [s, c]])


# --------------------------------------------------------------------------
# Operators
# --------------------------------------------------------------------------


def test_apply_and_compose_order():
    S = AffineOperator(np.array([[2.0, 0.0], [0.0, 1.0]]), np.array([1.0, 0.0]))
    T = AffineOperator(np.array([[0.0, 1.0], [1.0, 0.0]]), np.array([0.0, 3.0]))
    x = np.array([1.0, 2.0])
    np.testing.assert_allclose(compose(S, T)(x), S(T(x)))
    np.testing.assert_allclose(fold([T, S])(x), S(T(x)))


def test_apply_rejects_wrong_dimension():
    with pytest.raises(DimensionError):
        apply(AffineOperator.identity(2), [1.0, 2.0, 3.0])


def test_operator_is_immutable():
    op = AffineOperator.identity(2)
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 3.0


@given(square(2))
def test_l2_norm_matches_angular_grid(A):
    grid = l2_norm_angular_grid(A)
    norm = operator_norm(A, "L2")
    # grid never exceeds the true norm and misses it by O(h^2)
    assert grid <= norm * (1 + 1e-12) + 1e-12
    assert norm - grid <= 1e-9 * (1 + norm)


@given(st.integers(1, 6).flatmap(square))
def test_l1_linf_norms_match_vertex_enumeration(A):
    assert operator_norm(A, "L1") == pytest.approx(l1_norm_vertices(A), rel=1e-12, abs=1e-12)
    assert operator_norm(A, "LInf") == pytest.approx(linf_norm_vertices(A), rel=1e-12, abs=1e-12)


@given(st.integers(1, 6).flatmap(square), st.sampled_from(list(NormKind)))
def test_norm_attaining_vector(A, kind):
    x = norm_attaining_vector(A, kind)
    x_norm = np.linalg.norm(x, kind.ord)
    assert x_norm == pytest.approx(1.0)
    assert np.linalg.norm(A @ x, kind.ord) == pytest.approx(operator_norm(A, kind), rel=1e-9, abs=1e-9)


@given(st.integers(1, 6).flatmap(square))
def test_power_iteration_agrees_with_svd(A):
    sigma, v = power_iteration_norm(A)
    assert sigma == pytest.approx(operator_norm(A, "L2"), rel=1e-6, abs=1e-9)
    assert np.linalg.norm(v) == pytest.approx(1.0)


def test_power_iteration_escapes_orthogonal_start():
    # the all-ones start is exactly the second right singular vector
    A = np.diag([1.0, 3.0])
    A = A @ np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    assert power_iteration_norm(A)[0] == pytest.approx(3.0, rel=1e-9)


def test_power_iteration_reports_nonconvergence():
    A = np.diag([1.0, 1.0 - 1e-4])
    with pytest.raises(NumericalError):
        power_iteration_norm(A @ np.array([[1.0, 0.0], [0.0, 1.0]]), tol=1e-16, max_iter=50)


def test_batched_norms_match_single():
    rng = np.random.default_rng(0)
    stack = rng.standard_normal((5, 3, 3))
    for kind in NormKind:
        np.testing.assert_allclose(operator_norms(stack, kind), [operator_norm(m, kind) for m in stack])


@given(square(3), square(3), st.sampled_from(list(NormKind)))
def test_operator_distance_bounds_pointwise_gap(A, B, kind):
    S = AffineOperator(A, np.ones(3))
    T = AffineOperator(B, np.zeros(3))
    x = np.array([0.3, -0.4, 0.1])
    x = x / np.linalg.norm(x, kind.ord)
    gap = np.linalg.norm(S(x) - T(x), kind.ord)
    assert gap <= operator_distance(S, T, kind) * (1 + 1e-12) + 1e-12


# --------------------------------------------------------------------------
# Sequences
# --------------------------------------------------------------------------


def test_periodic_and_limit():
    a = AffineOperator.linear(rot(0.3))
    b = AffineOperator.linear(rot(0.3, 0.5))
    seq = Periodic((a, b))
    assert seq[0] is a and seq[3] is b
    assert seq.limit is None
    assert Periodic((a, a)).limit is a
    with pytest.raises(RangeError):
        seq[-1]


def test_explicit_tails():
    ops = tuple(AffineOperator.linear(np.eye(2) * s) for s in (0.1, 0.2, 0.3))
    assert Explicit(ops, "hold")[10] is ops[2]
    assert Explicit(ops, "cycle")[4] is ops[1]
    tail = Constant(AffineOperator.identity(2))
    seq = Explicit(ops, tail)
    assert seq[7] is tail.op
    assert seq.limit is tail.op


def test_convergent_analytic_distances():
    lim = AffineOperator(0.5 * np.eye(2), np.array([1.0, 1.0]))
    pert = AffineOperator(np.array([[0.3, 0.2], [-0.1, 0.4]]), np.array([0.0, 2.0]))
    seq = Convergent(lim, pert, 0.9)
    for k in (0, 1, 7, 30):
        assert seq.increment_norm(k) == pytest.approx(operator_distance(seq[k + 1], seq[k]), rel=1e-9)
        assert seq.limit_distance(k) == pytest.approx(operator_distance(seq[k], lim), rel=1e-9)
    assert not seq.all_linear(10)
    with pytest.raises(ValueError):
        Convergent(lim, pert, 1.0)


@pytest.mark.parametrize("kind", list(NormKind))
def test_random_contractive_respects_bound(kind):
    seq = RandomContractive(5, seed=3, norm_bound=0.8, kind=kind)
    norms = [operator_norm(seq[k], kind) for k in range(200)]
    assert max(norms) <= 0.8 + 1e-12
    assert min(norms) >= 0.4 - 1e-12
    assert seq[17].same_as(RandomContractive(5, 3, 0.8, kind)[17])
    assert seq.all_linear(10)


def test_product_sequence():
    A = Convergent(AffineOperator.linear(rot(0.2, 0.8)), AffineOperator.linear(np.eye(2)), 0.5)
    B = Constant(AffineOperator(np.eye(2), np.array([1.0, 0.0])))
    prod = Product((A, B))
    x = np.array([1.0, 2.0])
    np.testing.assert_allclose(prod[3](x), B[3](A[3](x)))
    np.testing.assert_allclose(prod.limit(x), B.op(A.limit(x)))


def test_strip_composes_latest_outermost():
    ops = tuple(AffineOperator(np.eye(2) * (k + 1), np.full(2, float(k))) for k in range(5))
    seq = Explicit(ops)
    s = strip(seq, 1, 3)
    x = np.array([1.0, -1.0])
    np.testing.assert_allclose(s.realized(x), ops[3](ops[2](ops[1](x))))
    assert (s.start_index, s.end_index) == (1, 3)
    with pytest.raises(RangeError):
        strip(seq, 3, 1)


@given(st.integers(0, 40), st.integers(0, 10))
def test_strip_norm_submultiplicative(j, length):
    seq = RandomContractive(3, seed=11, norm_bound=1.3)
    s = strip(seq, j, j + length)
    assert s.norm() <= np.prod([operator_norm(op) for op in s.ops]) * (1 + 1e-12)


def test_limit_substitution():
    lim = AffineOperator.linear(0.5 * np.eye(2))
    conv = Convergent(lim, AffineOperator.linear(np.eye(2)), 0.9)
    sub = sequence_limit_substitute(conv)
    assert sub.has_limit and sub.sequence[5] is lim
    periodic = Periodic((lim, AffineOperator.identity(2)))
    sub = sequence_limit_substitute(periodic)
    assert not sub.has_limit and sub.sequence is periodic


def test_norm_cache_reused_for_periodic():
    seq = Periodic((AffineOperator.linear(rot(0.1, 2.0)), AffineOperator.linear(rot(0.4, 0.25))))
    assert seq.max_norm(1000) == pytest.approx(2.0)
    assert len(seq._norm_cache) == 2
