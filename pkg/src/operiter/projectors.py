"""Oblique and orthogonal projectors given by explicit range/kernel bases."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateSplit, DimensionError, NotLinear
from .operators import AffineOperator, OperatorSequence, _check_index, operator_norm
from .space import NormKind

__all__ = [
    "ObliqueProjector",
    "oblique_projector",
    "orthogonal_projector",
    "identity_projector",
    "complementary_projector",
    "is_projector",
    "ConvergentProjectors",
    "random_oblique_projector",
    "CONDITION_LIMIT",
]

CONDITION_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class ObliqueProjector(AffineOperator):
    """Projector onto ``span(range_basis)`` along ``span(kernel_basis)``.

    Build instances with :func:`oblique_projector` or
    :func:`orthogonal_projector`; the matrix is derived from the bases.
    """

    range_basis: np.ndarray = None
    kernel_basis: np.ndarray = None

    @property
    def rank(self):
        return self.range_basis.shape[1]

    @property
    def realized(self):
        return AffineOperator(self.matrix, self.offset)


def _basis(arr, n, name):
    arr = np.array(arr, dtype=float)
    if arr.size == 0:
        return np.zeros((n, 0))
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] != n:
        raise DimensionError(f"{name} must have {n} rows, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DegenerateSplit(f"{name} has non-finite entries")
    arr.flags.writeable = False
    return arr


def oblique_projector(range_basis, kernel_basis):
    """Projector ``[M 0] [M | N]^{-1}`` for range basis M and kernel basis N.

    Raises
    ------
    DegenerateSplit
        If ``[M | N]`` is not square or its condition number exceeds
        ``CONDITION_LIMIT``.
    """
    range_arr = np.asarray(range_basis, dtype=float)
    n = range_arr.shape[0] if range_arr.ndim >= 1 and range_arr.size else None
    if n is None:
        kernel_arr = np.asarray(kernel_basis, dtype=float)
        n = kernel_arr.shape[0]
    M = _basis(range_basis, n, "range_basis")
    N = _basis(kernel_basis, n, "kernel_basis")
    r = M.shape[1]
    if r + N.shape[1] != n:
        raise DegenerateSplit(
            f"range ({r}) and kernel ({N.shape[1]}) dimensions do not add up to {n}"
        )
    split = np.hstack([M, N])
    cond = np.linalg.cond(split)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise DegenerateSplit(f"[range | kernel] is singular or ill-conditioned (cond={cond:.3g})")
    # P^T = [M 0]^T solved against [M|N]^T avoids forming the inverse.
    padded = np.hstack([M, np.zeros_like(N)])
    matrix = np.linalg.solve(split.T, padded.T).T
    return ObliqueProjector(matrix, np.zeros(n), M, N)


def orthogonal_projector(range_basis):
    M = np.array(range_basis, dtype=float)
    if M.ndim == 1:
        M = M[:, None]
    n, r = M.shape
    if r > n or (r and np.linalg.matrix_rank(M) < r):
        raise DegenerateSplit("range basis is rank deficient")
    q, _ = np.linalg.qr(M, mode="complete")
    return oblique_projector(M, q[:, r:])


def identity_projector(dim):
    return oblique_projector(np.eye(dim), np.zeros((dim, 0)))


def complementary_projector(P):
    """``I - P``: range and kernel swapped."""
    return oblique_projector(P.kernel_basis, P.range_basis)


def is_projector(op, tol=1e-10, kind=NormKind.L2):
    if not op.is_linear:
        raise NotLinear("projector test needs a linear operator (zero offset)")
    P = op.matrix
    return operator_norm(P @ P - P, kind) <= tol


@dataclass(frozen=True, eq=False)
class ConvergentProjectors(OperatorSequence):
    """Projectors built from bases ``M + rate**k dM`` and ``N + rate**k dN``.

    The bases are interpolated rather than the matrices, so every element
    is an exact projector.
    """

    range_limit: np.ndarray
    kernel_limit: np.ndarray
    range_perturbation: np.ndarray
    kernel_perturbation: np.ndarray
    rate: float

    def __post_init__(self):
        if not 0.0 < self.rate < 1.0:
            raise ValueError(f"decay rate must lie in (0, 1), got {self.rate}")
        for name in ("range_limit", "kernel_limit", "range_perturbation", "kernel_perturbation"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        # Validates the split of the limit eagerly.
        self.limit

    @property
    def dim(self):
        return self.range_limit.shape[0]

    @cached_property
    def limit(self):
        return oblique_projector(self.range_limit, self.kernel_limit)

    def __getitem__(self, k):
        _check_index(k)
        scale = self.rate**k
        return oblique_projector(
            self.range_limit + scale * self.range_perturbation,
            self.kernel_limit + scale * self.kernel_perturbation,
        )


def random_oblique_projector(rng, dim, rank, mu_max=2.0, kind=NormKind.L2, tilt=1.0):
    """Random projector with ``operator_norm <= mu_max`` in ``kind``.

    Range and kernel start as complementary coordinate subspaces (norm 1 in
    every induced norm) and are then tilted toward each other; the tilt is
    halved until the norm bound holds.
    """
    if not 0 <= rank <= dim:
        raise ValueError("rank must lie in [0, dim]")
    perm = rng.permutation(dim)
    E = np.eye(dim)[:, perm]
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    mix_range = rng.standard_normal((dim - rank, rank))
    mix_kernel = rng.standard_normal((rank, dim - rank))
    kind = NormKind.parse(kind)
    if kind is not NormKind.L2:
        # only orthogonal changes of basis preserve the induced norm in L2
        q = np.eye(dim)
    while True:
        M = q @ (E[:, :rank] + tilt * E[:, rank:] @ mix_range)
        N = q @ (E[:, rank:] + tilt * E[:, :rank] @ mix_kernel)
        try:
            P = oblique_projector(M, N)
        except DegenerateSplit:
            P = None
        if P is not None and operator_norm(P, kind) <= mu_max:
            return P
        if tilt < 1e-12:
            return oblique_projector(q @ E[:, :rank], q @ E[:, rank:])
        tilt *= 0.5
