import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from operiter import DimensionError, InvalidVector, NormKind, as_vector, distance, norm_of

finite = st.floats(-1e6, 1e6, allow_nan=False)
vectors = arrays(np.float64, st.integers(1, 8), elements=finite)


def test_parse_is_case_insensitive():
    assert NormKind.parse("linf") is NormKind.LINF
    assert NormKind.parse("l2") is NormKind.L2
    assert NormKind.parse(NormKind.L1) is NormKind.L1
    with pytest.raises(ValueError):
        NormKind.parse("L3")


def test_as_vector_is_read_only():
    v = as_vector([1, 2, 3])
    assert v.dtype == float
    with pytest.raises(ValueError):
        v[0] = 5.0


@pytest.mark.parametrize("bad", [[np.nan, 1.0], [np.inf], [], [[1.0, 2.0]]])
def test_as_vector_rejects(bad):
    with pytest.raises(InvalidVector):
        as_vector(bad)


def test_as_vector_dimension():
    with pytest.raises(DimensionError):
        as_vector([1.0, 2.0], dim=3)


def test_known_norms():
    x = [3.0, -4.0]
    assert norm_of(x, "L1") == 7.0
    assert norm_of(x, "L2") == 5.0
    assert norm_of(x, "LInf") == 4.0


def test_distance_dimension_mismatch():
    with pytest.raises(DimensionError):
        distance([1.0], [1.0, 2.0])


@given(vectors, st.sampled_from(list(NormKind)))
def test_norm_axioms(x, kind):
    assert norm_of(x, kind) >= 0
    assert norm_of(-x, kind) == pytest.approx(norm_of(x, kind))
    assert norm_of(2.5 * x, kind) == pytest.approx(2.5 * norm_of(x, kind))


@given(vectors, st.sampled_from(list(NormKind)))
def test_norm_equivalence(x, kind):
    n = len(x)
    l1, l2, li = (norm_of(x, k) for k in NormKind)
    assert li <= l2 * (1 + 1e-12) + 1e-300
    assert l2 <= l1 * (1 + 1e-12) + 1e-300
    assert l1 <= n * li * (1 + 1e-12) + 1e-300


@given(st.data(), st.sampled_from(list(NormKind)))
def test_triangle_inequality(data, kind):
    n = data.draw(st.integers(1, 6))
    x, y, z = (data.draw(arrays(np.float64, n, elements=finite)) for _ in range(3))
    assert distance(x, z, kind) <= distance(x, y, kind) + distance(y, z, kind) + 1e-6
