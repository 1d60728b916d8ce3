"""Finite-dimensional real normed space.

Points are plain 1-D ``float64`` numpy arrays, marked read-only once they
pass through :func:`as_vector`. The metric is always the one induced by a
norm, so it is homogeneous and translation invariant by construction.
"""

from enum import Enum

import numpy as np

from .errors import DimensionError, InvalidVector

__all__ = ["NormKind", "as_vector", "norm_of", "distance"]


class NormKind(str, Enum):
    L1 = "L1"
    L2 = "L2"
    LINF = "LInf"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        for kind in cls:
            if kind.value.lower() == str(value).lower():
                return kind
        raise ValueError(f"unknown norm kind {value!r}; expected one of L1, L2, LInf")

    @property
    def ord(self):
        """The ``ord`` argument understood by :func:`numpy.linalg.norm`."""
        return {NormKind.L1: 1, NormKind.L2: 2, NormKind.LINF: np.inf}[self]


def as_vector(x, dim=None):
    """Validate ``x`` and return it as an immutable float vector.

    Raises
    ------
    InvalidVector
        If ``x`` is not 1-D or holds non-finite entries.
    DimensionError
        If ``dim`` is given and does not match.
    """
    arr = np.array(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidVector(f"expected a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidVector("vector has non-finite entries")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {arr.shape[0]}")
    arr.flags.writeable = False
    return arr


def norm_of(x, kind=NormKind.L2):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise InvalidVector("vector has non-finite entries")
    kind = NormKind.parse(kind)
    if kind is NormKind.L2:
        # rescale so that squaring cannot underflow or overflow
        scale = float(np.abs(x).max()) if x.size else 0.0
        if scale == 0.0:
            return 0.0
        return scale * float(np.linalg.norm(x / scale))
    return float(np.linalg.norm(x, kind.ord))


def distance(x, y, kind=NormKind.L2):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return norm_of(x - y, kind)
