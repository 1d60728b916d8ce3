"""Affine operators, induced norms, operator sequences and composite strips."""

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Union

import numpy as np

from .errors import DimensionError, InvalidVector, NumericalError, RangeError
from .space import NormKind, as_vector, norm_of

__all__ = [
    "AffineOperator",
    "apply",
    "compose",
    "operator_norm",
    "power_iteration_norm",
    "norm_attaining_vector",
    "operator_distance",
    "OperatorSequence",
    "Constant",
    "Explicit",
    "Periodic",
    "Convergent",
    "RandomContractive",
    "Product",
    "CompositeStrip",
    "strip",
    "LimitSubstitution",
    "sequence_limit_substitute",
]


def _readonly(arr):
    arr = np.array(arr, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class AffineOperator:
    """The map ``x -> matrix @ x + offset`` on R^n."""

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.size == 0:
            raise DimensionError(f"operator matrix must be square, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise InvalidVector("operator matrix has non-finite entries")
        offset = as_vector(self.offset, dim=matrix.shape[0])
        object.__setattr__(self, "matrix", _readonly(matrix))
        object.__setattr__(self, "offset", offset)

    @classmethod
    def linear(cls, matrix):
        matrix = np.asarray(matrix, dtype=float)
        return cls(matrix, np.zeros(matrix.shape[0]))

    @classmethod
    def identity(cls, dim):
        return cls.linear(np.eye(dim))

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def is_linear(self):
        return not np.any(self.offset)

    def __call__(self, x):
        return apply(self, x)

    def same_as(self, other, atol=0.0):
        """Entrywise comparison of both matrix and offset."""
        return (
            self.dim == other.dim
            and np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol)
            and np.allclose(self.offset, other.offset, rtol=0.0, atol=atol)
        )

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, linear={self.is_linear})"


def apply(op, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (op.dim,):
        raise DimensionError(f"operator of dimension {op.dim} applied to vector of shape {x.shape}")
    return op.matrix @ x + op.offset


def compose(outer, inner):
    """Return ``outer o inner``: matrix ``A_out A_in``, offset ``A_out b_in + b_out``."""
    if outer.dim != inner.dim:
        raise DimensionError(f"cannot compose dimensions {outer.dim} and {inner.dim}")
    return AffineOperator(outer.matrix @ inner.matrix, outer.matrix @ inner.offset + outer.offset)


def _as_matrix(op):
    if isinstance(op, AffineOperator):
        return op.matrix
    matrix = np.asarray(op, dtype=float)
    if matrix.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {matrix.shape}")
    return matrix


def power_iteration_norm(matrix, tol=1e-12, max_iter=10_000):
    """Largest singular value of ``matrix`` by power iteration on ``A^T A``.

    Runs from three fixed starts (all-ones, alternating signs and a
    seeded Gaussian vector) and keeps the largest converged estimate, so a
    start that happens to be orthogonal to the top singular vector does
    not go unnoticed. The matrix is rescaled by its largest entry first.

    Returns
    -------
    (sigma, v) : the norm estimate and the unit right singular vector.

    Raises
    ------
    NumericalError
        If no start converges (relative Rayleigh-quotient change below
        ``tol``) within ``max_iter`` steps.
    """
    A = _as_matrix(matrix)
    n = A.shape[1]
    scale = float(np.abs(A).max()) if A.size else 0.0
    if scale == 0.0:
        v = np.zeros(n)
        v[0] = 1.0
        return 0.0, v
    A = A / scale
    gram = A.T @ A
    starts = (
        np.ones(n),
        np.where(np.arange(n) % 2 == 0, 1.0, -1.0),
        np.random.default_rng(0).standard_normal(n),
    )
    best = None
    for start in starts:
        v = start / np.linalg.norm(start)
        rq_old = -1.0
        for _ in range(max_iter):
            w = gram @ v
            w_norm = np.linalg.norm(w)
            if w_norm == 0.0:
                break
            rq = float(v @ w)
            v = w / w_norm
            if abs(rq - rq_old) <= tol * rq:
                sigma = float(np.linalg.norm(A @ v))
                if best is None or sigma > best[0]:
                    best = (sigma, v)
                break
            rq_old = rq
    if best is None:
        raise NumericalError(f"power iteration did not converge within {max_iter} iterations")
    return best[0] * scale, best[1]


def operator_norm(op, kind=NormKind.L2, method="svd"):
    """Norm of the linear part induced by the vector norm ``kind``.

    L1 and LInf use the exact column/row abs-sum formulas. L2 uses the
    largest singular value, from LAPACK (``method="svd"``) or from
    :func:`power_iteration_norm` (``method="power"``).
    """
    A = _as_matrix(op)
    kind = NormKind.parse(kind)
    if kind is NormKind.L1:
        return float(np.abs(A).sum(axis=0).max())
    if kind is NormKind.LINF:
        return float(np.abs(A).sum(axis=1).max())
    if method == "power":
        return power_iteration_norm(A)[0]
    if method != "svd":
        raise ValueError(f"unknown method {method!r}")
    try:
        return float(np.linalg.svd(A, compute_uv=False)[0])
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc


def operator_norms(matrices, kind=NormKind.L2):
    """Vectorized :func:`operator_norm` over a stack of shape ``(m, n, n)``."""
    stack = np.asarray(matrices, dtype=float)
    kind = NormKind.parse(kind)
    if kind is NormKind.L1:
        return np.abs(stack).sum(axis=1).max(axis=1)
    if kind is NormKind.LINF:
        return np.abs(stack).sum(axis=2).max(axis=1)
    return np.linalg.svd(stack, compute_uv=False)[:, 0]


def norm_attaining_vector(op, kind=NormKind.L2):
    """A unit vector (in ``kind``) at which ``||A x||`` equals the induced norm."""
    A = _as_matrix(op)
    kind = NormKind.parse(kind)
    n = A.shape[1]
    if kind is NormKind.L1:
        x = np.zeros(n)
        x[int(np.argmax(np.abs(A).sum(axis=0)))] = 1.0
        return x
    if kind is NormKind.LINF:
        row = A[int(np.argmax(np.abs(A).sum(axis=1)))]
        x = np.where(row >= 0, 1.0, -1.0)
        return x
    if not np.any(A):
        x = np.zeros(n)
        x[0] = 1.0
        return x
    _, _, vt = np.linalg.svd(A)
    return vt[0]


def operator_distance(first, second, kind=NormKind.L2):
    """``||A_1 - A_2|| + ||b_1 - b_2||``.

    Bounds ``||first(x) - second(x)||`` for every ``x`` with ``||x|| <= 1``.
    """
    if first.dim != second.dim:
        raise DimensionError(f"dimension mismatch: {first.dim} vs {second.dim}")
    return operator_norm(first.matrix - second.matrix, kind) + norm_of(
        first.offset - second.offset, kind
    )


# --------------------------------------------------------------------------
# Sequences
# --------------------------------------------------------------------------


class OperatorSequence:
    """Rule producing an operator for every index ``k >= 0``.

    Subclasses implement ``__getitem__``, ``dim`` and ``limit`` (``None``
    when the sequence has no limit). ``_canonical`` maps an index to a key
    shared by all indices yielding the same element, which lets norms be
    memoized for constant and periodic sequences.
    """

    dim: int

    def __getitem__(self, k):
        raise NotImplementedError

    @property
    def limit(self):
        return None

    def _canonical(self, k):
        return None

    @cached_property
    def _norm_cache(self):
        return {}

    def norm_at(self, k, kind=NormKind.L2):
        """``operator_norm(self[k], kind)``, memoized where elements repeat."""
        kind = NormKind.parse(kind)
        key = self._canonical(k)
        if key is None:
            return operator_norm(self[k], kind)
        cache = self._norm_cache
        if (key, kind) not in cache:
            cache[(key, kind)] = operator_norm(self[k], kind)
        return cache[(key, kind)]

    def increment_norm(self, k, kind=NormKind.L2):
        """``||T_{k+1} - T_k||`` in the affine operator distance."""
        return operator_distance(self[k + 1], self[k], kind)

    def limit_distance(self, k, kind=NormKind.L2):
        """``||T_k - T||`` for the limit ``T``; raises if there is none."""
        if self.limit is None:
            raise ValueError("sequence has no limit")
        return operator_distance(self[k], self.limit, kind)

    def known_norm_bound(self, kind=NormKind.L2):
        """A guaranteed upper bound on every element norm, or ``None``."""
        return None

    def elements(self, start, stop):
        return [self[k] for k in range(start, stop)]

    def _indices(self, count):
        """One representative index per distinct element among ``0..count-1``."""
        seen = set()
        for k in range(count):
            key = self._canonical(k)
            if key is None:
                yield k
            elif key not in seen:
                seen.add(key)
                yield k

    def all_linear(self, count):
        return all(self[k].is_linear for k in self._indices(count))

    def max_norm(self, count, kind=NormKind.L2):
        """``max_{k < count} ||A_k||``, or the guaranteed bound when one is known."""
        bound = self.known_norm_bound(kind)
        if bound is not None:
            return bound
        return max(self.norm_at(k, kind) for k in self._indices(count))


def _check_index(k):
    if k < 0:
        raise RangeError(f"negative sequence index {k}")


@dataclass(frozen=True, eq=False)
class Constant(OperatorSequence):
    op: AffineOperator

    @property
    def dim(self):
        return self.op.dim

    def __getitem__(self, k):
        _check_index(k)
        return self.op

    @property
    def limit(self):
        return self.op

    def _canonical(self, k):
        return 0

    def increment_norm(self, k, kind=NormKind.L2):
        return 0.0

    def limit_distance(self, k, kind=NormKind.L2):
        return 0.0

    def known_norm_bound(self, kind=NormKind.L2):
        return self.norm_at(0, kind)


def _common_dim(ops):
    dims = {op.dim for op in ops}
    if len(dims) != 1:
        raise DimensionError(f"operators of mixed dimensions {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True, eq=False)
class Periodic(OperatorSequence):
    ops: tuple

    def __post_init__(self):
        if len(self.ops) == 0:
            raise ValueError("periodic sequence needs at least one operator")
        object.__setattr__(self, "ops", tuple(self.ops))
        _common_dim(self.ops)

    @property
    def dim(self):
        return self.ops[0].dim

    @property
    def period(self):
        return len(self.ops)

    def __getitem__(self, k):
        _check_index(k)
        return self.ops[k % len(self.ops)]

    def _canonical(self, k):
        return k % len(self.ops)

    @property
    def limit(self):
        first = self.ops[0]
        if all(op.same_as(first) for op in self.ops[1:]):
            return first
        return None

    def known_norm_bound(self, kind=NormKind.L2):
        return max(self.norm_at(i, kind) for i in range(self.period))


@dataclass(frozen=True, eq=False)
class Explicit(OperatorSequence):
    """A finite list followed by a tail rule.

    ``tail`` is ``"hold"`` (repeat the last element forever), ``"cycle"``
    (restart the list) or another :class:`OperatorSequence` whose index 0
    follows the last listed element.
    """

    ops: tuple
    tail: Union[str, OperatorSequence] = "hold"

    def __post_init__(self):
        if len(self.ops) == 0:
            raise ValueError("explicit sequence needs at least one operator")
        object.__setattr__(self, "ops", tuple(self.ops))
        dim = _common_dim(self.ops)
        if isinstance(self.tail, OperatorSequence):
            if self.tail.dim != dim:
                raise DimensionError("tail sequence has a different dimension")
        elif self.tail not in ("hold", "cycle"):
            raise ValueError(f"unknown tail rule {self.tail!r}")

    @property
    def dim(self):
        return self.ops[0].dim

    def __getitem__(self, k):
        _check_index(k)
        n = len(self.ops)
        if k < n:
            return self.ops[k]
        if self.tail == "hold":
            return self.ops[-1]
        if self.tail == "cycle":
            return self.ops[k % n]
        return self.tail[k - n]

    def _canonical(self, k):
        n = len(self.ops)
        if k < n:
            return k
        if self.tail == "hold":
            return n - 1
        if self.tail == "cycle":
            return k % n
        return None

    @property
    def limit(self):
        if self.tail == "hold":
            return self.ops[-1]
        if self.tail == "cycle":
            return Periodic(self.ops).limit
        return self.tail.limit


@dataclass(frozen=True, eq=False)
class Convergent(OperatorSequence):
    """``T_k = limit + rate**k * perturbation`` on both matrix and offset."""

    limit_op: AffineOperator
    perturbation: AffineOperator
    rate: float

    def __post_init__(self):
        if not 0.0 < self.rate < 1.0:
            raise ValueError(f"decay rate must lie in (0, 1), got {self.rate}")
        if self.limit_op.dim != self.perturbation.dim:
            raise DimensionError("limit and perturbation dimensions differ")

    @property
    def dim(self):
        return self.limit_op.dim

    @property
    def limit(self):
        return self.limit_op

    def __getitem__(self, k):
        _check_index(k)
        scale = self.rate**k
        return AffineOperator(
            self.limit_op.matrix + scale * self.perturbation.matrix,
            self.limit_op.offset + scale * self.perturbation.offset,
        )

    # The next two use homogeneity of the norm: the difference of two
    # elements is a scalar multiple of the perturbation.
    @cached_property
    def _perturbation_size(self):
        return {}

    def _delta(self, kind):
        kind = NormKind.parse(kind)
        if kind not in self._perturbation_size:
            self._perturbation_size[kind] = operator_distance(
                self.perturbation, AffineOperator.linear(np.zeros((self.dim, self.dim))), kind
            )
        return self._perturbation_size[kind]

    def increment_norm(self, k, kind=NormKind.L2):
        return (self.rate**k - self.rate ** (k + 1)) * self._delta(kind)

    def limit_distance(self, k, kind=NormKind.L2):
        return self.rate**k * self._delta(kind)

    def all_linear(self, count):
        return self.limit_op.is_linear and self.perturbation.is_linear

    def tail_norm_bound(self, n0, kind=NormKind.L2):
        """Upper bound on ``||A_k||`` for all ``k >= n0`` (triangle inequality)."""
        return operator_norm(self.limit_op, kind) + self.rate**n0 * operator_norm(
            self.perturbation, kind
        )


@dataclass(frozen=True, eq=False)
class RandomContractive(OperatorSequence):
    """Seeded random operators with ``operator_norm <= norm_bound`` in ``kind``.

    Element ``k`` depends only on ``(seed, k)``. The top singular value (L2)
    or the abs-sum norm (L1/LInf) is drawn uniformly from
    ``[norm_bound / 2, norm_bound]``.
    """

    dim: int
    seed: int
    norm_bound: float
    kind: NormKind = NormKind.L2
    offset_scale: float = 0.0

    def __post_init__(self):
        if self.norm_bound <= 0:
            raise ValueError("norm_bound must be positive")
        object.__setattr__(self, "kind", NormKind.parse(self.kind))

    def __getitem__(self, k):
        _check_index(k)
        rng = np.random.default_rng([self.seed, k])
        n = self.dim
        top = self.norm_bound * rng.uniform(0.5, 1.0)
        if self.kind is NormKind.L2:
            u, _ = np.linalg.qr(rng.standard_normal((n, n)))
            v, _ = np.linalg.qr(rng.standard_normal((n, n)))
            s = rng.uniform(0.0, 1.0, n)
            s *= top / s.max()
            matrix = (u * s) @ v.T
        else:
            g = rng.standard_normal((n, n))
            matrix = g * (top / operator_norm(g, self.kind))
        offset = self.offset_scale * rng.standard_normal(n)
        return AffineOperator(matrix, offset)

    def known_norm_bound(self, kind=NormKind.L2):
        if NormKind.parse(kind) is self.kind:
            return self.norm_bound
        return None

    def all_linear(self, count):
        return self.offset_scale == 0.0


@dataclass(frozen=True, eq=False)
class Product(OperatorSequence):
    """Factor-wise composite ``T_k = F_m[k] ... F_2[k] F_1[k]``.

    ``factors[0]`` is applied first. The limit exists when every factor
    has one.
    """

    factors: tuple

    def __post_init__(self):
        if len(self.factors) == 0:
            raise ValueError("product sequence needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))
        if len({f.dim for f in self.factors}) != 1:
            raise DimensionError("factor sequences of mixed dimensions")

    @property
    def dim(self):
        return self.factors[0].dim

    def __getitem__(self, k):
        _check_index(k)
        return fold([f[k] for f in self.factors])

    @property
    def limit(self):
        limits = [f.limit for f in self.factors]
        if any(lim is None for lim in limits):
            return None
        return fold(limits)

    def all_linear(self, count):
        return all(f.all_linear(count) for f in self.factors)


# --------------------------------------------------------------------------
# Strips and limit substitution
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CompositeStrip:
    """``T_end ... T_{start+1} T_start`` folded into one operator."""

    ops: tuple
    realized: AffineOperator
    start_index: int
    end_index: int

    def norm(self, kind=NormKind.L2):
        return operator_norm(self.realized, kind)


def fold(ops):
    """Right-to-left composition of ``ops`` (``ops[0]`` is applied first)."""
    result = ops[0]
    for op in ops[1:]:
        result = compose(op, result)
    return result


def strip(seq, j, k):
    """Composite of ``seq[j..k]`` inclusive, latest index outermost."""
    if j < 0 or k < j:
        raise RangeError(f"strip needs 0 <= j <= k, got j={j}, k={k}")
    ops = tuple(seq[i] for i in range(j, k + 1))
    realized = fold(ops)
    if type(realized) is not AffineOperator:
        realized = AffineOperator(realized.matrix, realized.offset)
    return CompositeStrip(ops, realized, j, k)


class LimitSubstitution(NamedTuple):
    sequence: OperatorSequence
    has_limit: bool


def sequence_limit_substitute(seq):
    """Replace a sequence by its limit where it has one.

    Sequences with a limit become ``Constant(limit)``; the rest are returned
    unchanged with ``has_limit=False``.
    """
    if isinstance(seq, Constant):
        return LimitSubstitution(seq, True)
    limit = seq.limit
    if limit is None:
        return LimitSubstitution(seq, False)
    return LimitSubstitution(Constant(limit), True)
