import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import l2_norm_angular_grid, projector_from_definition
from operiter import (
    ConvergentProjectors,
    DegenerateSplit,
    DimensionError,
    NormKind,
    NotLinear,
    AffineOperator,
    complementary_projector,
    identity_projector,
    is_projector,
    oblique_projector,
    operator_norm,
    orthogonal_projector,
)
from operiter.projectors import random_oblique_projector

OBLIQUE_DEMO = np.array([[1.0, -1.0], [0.0, 0.0]])


def demo_oblique():
    # range span{e1}, kernel span{(1, 1)}
    return oblique_projector([[1.0], [0.0]], [[1.0], [1.0]])


def test_demo_oblique_matrix_and_norm():
    P = demo_oblique()
    np.testing.assert_allclose(P.matrix, OBLIQUE_DEMO, atol=1e-15)
    assert operator_norm(P, "L2") == pytest.approx(l2_norm_angular_grid(OBLIQUE_DEMO), abs=1e-9)
    assert abs(operator_norm(P, "L2") - np.sqrt(2.0)) <= 1e-6


def test_orthogonal_projector_onto_diagonal():
    P = orthogonal_projector([[1.0], [1.0]])
    np.testing.assert_allclose(P.matrix, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
    assert operator_norm(P) == pytest.approx(1.0, abs=1e-12)


def test_identity_and_complement():
    I = identity_projector(3)
    np.testing.assert_array_equal(I.matrix, np.eye(3))
    P = demo_oblique()
    Q = complementary_projector(P)
    np.testing.assert_allclose(P.matrix + Q.matrix, np.eye(2), atol=1e-14)
    assert P.rank == 1 and Q.rank == 1


def test_degenerate_splits_rejected():
    with pytest.raises(DegenerateSplit):
        oblique_projector([[1.0], [1.0]], [[2.0], [2.0]])
    with pytest.raises(DegenerateSplit):
        oblique_projector([[1.0], [0.0]], [[1.0], [1e-14]])
    with pytest.raises((DegenerateSplit, DimensionError)):
        oblique_projector([[1.0], [0.0]], np.zeros((2, 0)))


def test_is_projector_requires_linear():
    with pytest.raises(NotLinear):
        is_projector(AffineOperator(np.eye(2), np.ones(2)))
    assert not is_projector(AffineOperator.linear(2 * np.eye(2)))


@st.composite
def splits(draw):
    n = draw(st.integers(1, 6))
    r = draw(st.integers(0, n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, r)), rng.standard_normal((n, n - r))


@given(splits())
def test_random_split_matches_definition(split):
    M, N = split
    basis = np.hstack([M, N])
    assume(np.linalg.cond(basis) < 1e6)
    P = oblique_projector(M, N)
    assert is_projector(P, tol=1e-10)
    np.testing.assert_allclose(P.matrix, projector_from_definition(M, N), atol=1e-8)
    np.testing.assert_allclose(P.matrix @ M, M, atol=1e-9)
    np.testing.assert_allclose(P.matrix @ N, 0.0, atol=1e-9)


@given(splits())
def test_orthogonal_projectors_have_unit_norm(split):
    M, _ = split
    assume(M.shape[1] > 0 and np.linalg.cond(M) < 1e6)
    P = orthogonal_projector(M)
    assert is_projector(P, tol=1e-10)
    np.testing.assert_allclose(P.matrix, P.matrix.T, atol=1e-12)
    assert abs(operator_norm(P) - 1.0) <= 1e-9


@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.sampled_from(list(NormKind)))
def test_random_oblique_projector_norm_bound(dim, seed, kind):
    rng = np.random.default_rng(seed)
    rank = int(rng.integers(0, dim + 1))
    P = random_oblique_projector(rng, dim, rank, mu_max=2.0, kind=kind)
    assert P.rank == rank
    assert operator_norm(P, kind) <= 2.0
    assert is_projector(P, tol=1e-10)


def test_convergent_projectors_are_projectors_and_converge():
    seq = ConvergentProjectors(
        [[1.0], [0.0]], [[1.0], [1.0]], [[0.0], [0.5]], [[0.4], [0.3]], 0.9
    )
    for k in (0, 5, 50):
        assert is_projector(seq[k], tol=1e-10)
    assert np.abs(seq[400].matrix - seq.limit.matrix).max() < 1e-12
