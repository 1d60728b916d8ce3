"""Projected iteration ``x_{k+1} = T_k x_k``, ``z_k = P_k x_k`` and strip schedules."""

import csv
import io as _io
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, NoContractiveStrip, NumericalError, RangeError
from .io import atomic_write_text, format_float
from .operators import compose, operator_norm
from .space import NormKind, as_vector

__all__ = [
    "Termination",
    "StepRecord",
    "IterationTrace",
    "iterate",
    "StripSchedule",
    "find_contractive_strips",
    "cauchy_residual",
    "trace_to_csv",
    "trace_from_csv",
    "DEFAULT_CONV_TOL",
    "DEFAULT_DIV_BOUND",
    "DEFAULT_MAX_K",
    "DEFAULT_WINDOW",
]

DEFAULT_CONV_TOL = 1e-10
DEFAULT_DIV_BOUND = 1e12
DEFAULT_MAX_K = 100_000
DEFAULT_WINDOW = 32
# A converged trace keeps a full Cauchy window of quiet steps.
CONVERGENCE_PATIENCE = DEFAULT_WINDOW


class Termination(str, Enum):
    MAX_ITER = "MaxIter"
    CONVERGED = "Converged"
    DIVERGED = "Diverged"


class StepRecord(NamedTuple):
    k: int
    x: np.ndarray
    z: np.ndarray
    d_x: float
    d_z: float


@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Recorded iterates ``x_0..x_N`` and projections ``z_0..z_N``.

    ``d_x[k] = d(x_k, x_{k-1})`` and ``d_z[k] = d(z_k, z_{k-1})`` (lagged by
    one step); both are 0 at ``k = 0``.
    """

    xs: np.ndarray
    zs: np.ndarray
    d_x: np.ndarray
    d_z: np.ndarray
    norm_kind: NormKind
    terminated_reason: Termination
    strip_boundaries: frozenset = frozenset()

    def __len__(self):
        return self.xs.shape[0]

    @property
    def x0(self):
        return self.xs[0]

    @property
    def dim(self):
        return self.xs.shape[1]

    @property
    def final_x(self):
        return self.xs[-1]

    @property
    def final_z(self):
        return self.zs[-1]

    @property
    def steps(self):
        for k in range(len(self)):
            yield StepRecord(k, self.xs[k], self.zs[k], float(self.d_x[k]), float(self.d_z[k]))

    def with_strip_boundaries(self, boundaries):
        return replace(self, strip_boundaries=frozenset(int(b) for b in boundaries))


def _elementwise_norm(diff, kind):
    return np.linalg.norm(diff, ord=kind.ord, axis=-1)


def iterate(
    t_seq,
    p_seq=None,
    x0=None,
    max_k=DEFAULT_MAX_K,
    conv_tol=DEFAULT_CONV_TOL,
    div_bound=DEFAULT_DIV_BOUND,
    kind=NormKind.L2,
):
    """Run ``x_{k+1} = T_k x_k`` and record ``z_k = P_k x_k``.

    Stops as ``Converged`` once ``d_x < conv_tol`` for ``DEFAULT_WINDOW`` consecutive
    steps, as ``Diverged`` once ``||x_k|| > div_bound``, otherwise after
    ``max_k`` steps.

    Parameters
    ----------
    t_seq : OperatorSequence
    p_seq : OperatorSequence of projectors, optional
        Identity projectors when omitted.
    x0 : array_like
    """
    kind = NormKind.parse(kind)
    if max_k < 1:
        raise ValueError("max_k must be at least 1")
    n = t_seq.dim
    x = as_vector(x0, dim=n) if x0 is not None else np.zeros(n)
    if p_seq is not None and p_seq.dim != n:
        raise DimensionError(f"projector sequence has dimension {p_seq.dim}, operators {n}")

    def project(k, v):
        if p_seq is None:
            return v.copy()
        P = p_seq[k]
        return P.matrix @ v + P.offset

    xs = [np.array(x)]
    zs = [project(0, x)]
    d_x = [0.0]
    d_z = [0.0]
    reason = Termination.MAX_ITER
    streak = 0
    for k in range(max_k):
        T = t_seq[k]
        with np.errstate(over="ignore", invalid="ignore"):
            x_next = T.matrix @ xs[-1] + T.offset
        if not np.all(np.isfinite(x_next)):
            raise NumericalError(f"non-finite state at step {k + 1}", step=k + 1)
        z_next = project(k + 1, x_next)
        dx = float(np.linalg.norm(x_next - xs[-1], kind.ord))
        dz = float(np.linalg.norm(z_next - zs[-1], kind.ord))
        xs.append(x_next)
        zs.append(z_next)
        d_x.append(dx)
        d_z.append(dz)
        if np.linalg.norm(x_next, kind.ord) > div_bound:
            reason = Termination.DIVERGED
            break
        streak = streak + 1 if dx < conv_tol else 0
        if streak >= CONVERGENCE_PATIENCE:
            reason = Termination.CONVERGED
            break
    return IterationTrace(
        xs=np.array(xs),
        zs=np.array(zs),
        d_x=np.array(d_x),
        d_z=np.array(d_z),
        norm_kind=kind,
        terminated_reason=reason,
    )


# --------------------------------------------------------------------------
# Strip schedules
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class StripSchedule:
    """Boundaries ``j_0 = 0 < j_1 < ...`` and the norm of each strip composite.

    Strip ``i`` covers indices ``boundaries[i] .. boundaries[i+1] - 1``.
    """

    boundaries: tuple
    per_strip_norm: tuple
    K: float
    max_gap: int

    @property
    def gaps(self):
        return tuple(np.diff(self.boundaries).tolist())

    @property
    def strip_count(self):
        return len(self.boundaries) - 1

    def validate(self):
        b = self.boundaries
        if len(b) < 2 or b[0] != 0:
            raise RangeError("schedule must start at index 0 and contain at least one strip")
        if len(self.per_strip_norm) != len(b) - 1:
            raise RangeError("per_strip_norm length does not match the number of strips")
        gaps = np.diff(b)
        if np.any(gaps <= 0):
            raise RangeError("schedule boundaries must be strictly increasing")
        if np.any(gaps > self.max_gap):
            raise RangeError(f"schedule gap exceeds max_gap={self.max_gap}")
        return self


def find_contractive_strips(t_seq, K_target, max_gap, horizon, kind=NormKind.L2):
    """Greedy schedule whose strip composites all have norm ``<= K_target``.

    From each boundary ``j`` the next boundary is the smallest ``j + g``
    (``1 <= g <= max_gap``) with ``||T_{j+g-1} ... T_j|| <= K_target``.
    Boundaries are generated until they reach ``horizon``.

    Raises
    ------
    NoContractiveStrip
        With the offending start index and the best norm seen in its window.
    """
    if not 0.0 <= K_target < 1.0:
        raise ValueError(f"K_target must lie in [0, 1), got {K_target}")
    if max_gap < 1:
        raise ValueError("max_gap must be at least 1")
    kind = NormKind.parse(kind)
    boundaries = [0]
    norms = []
    j = 0
    while j < horizon:
        composite = None
        best = np.inf
        for g in range(1, max_gap + 1):
            op = t_seq[j + g - 1]
            composite = op if composite is None else compose(op, composite)
            value = operator_norm(composite, kind)
            best = min(best, value)
            if value <= K_target:
                break
        else:
            raise NoContractiveStrip(j, max_gap, best)
        j += g
        boundaries.append(j)
        norms.append(value)
    return StripSchedule(tuple(boundaries), tuple(norms), max(norms) if norms else 0.0, max_gap)


def cauchy_residual(trace, window=DEFAULT_WINDOW, which="z"):
    """Largest pairwise distance among the last ``window`` recorded points."""
    points = trace.zs if which == "z" else trace.xs
    if window < 1 or window > len(points):
        raise RangeError(f"window {window} outside trace of length {len(points)}")
    tail = points[-window:]
    diffs = tail[:, None, :] - tail[None, :, :]
    return float(_elementwise_norm(diffs, trace.norm_kind).max())


# --------------------------------------------------------------------------
# CSV export
# --------------------------------------------------------------------------


def trace_to_csv(trace, path=None):
    """Serialize ``trace``; writes atomically to ``path`` when given.

    Columns: ``k, x_0..x_{n-1}, z_0..z_{n-1}, d_x, d_z, strip_boundary``.
    """
    n = trace.dim
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = (
        ["k"]
        + [f"x_{i}" for i in range(n)]
        + [f"z_{i}" for i in range(n)]
        + ["d_x", "d_z", "strip_boundary"]
    )
    writer.writerow(header)
    for k in range(len(trace)):
        writer.writerow(
            [k]
            + [format_float(v) for v in trace.xs[k]]
            + [format_float(v) for v in trace.zs[k]]
            + [format_float(trace.d_x[k]), format_float(trace.d_z[k])]
            + [1 if k in trace.strip_boundaries else 0]
        )
    text = buf.getvalue()
    if path is not None:
        atomic_write_text(path, text)
    return text


def trace_from_csv(source, kind=NormKind.L2, terminated_reason=Termination.MAX_ITER):
    """Inverse of :func:`trace_to_csv` (``source`` is a path or CSV text)."""
    if isinstance(source, str) and "\n" in source:
        text = source
    else:
        with open(source, encoding="utf-8", newline="") as fh:
            text = fh.read()
    rows = list(csv.reader(_io.StringIO(text)))
    header, body = rows[0], rows[1:]
    n = sum(1 for name in header if name.startswith("x_"))
    data = np.array([[float(v) for v in row] for row in body])
    if data.size == 0:
        data = data.reshape(0, 2 * n + 4)
    boundaries = frozenset(int(row[0]) for row in body if row[-1] == "1")
    return IterationTrace(
        xs=data[:, 1 : 1 + n],
        zs=data[:, 1 + n : 1 + 2 * n],
        d_x=data[:, 1 + 2 * n],
        d_z=data[:, 2 + 2 * n],
        norm_kind=NormKind.parse(kind),
        terminated_reason=Termination(terminated_reason),
        strip_boundaries=boundaries,
    )
