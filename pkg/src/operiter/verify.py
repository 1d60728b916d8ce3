"""Numerical verification of the fixed-point and composite-operator bounds.

Every ``check_*`` function returns a :class:`CheckResult`. A check measures
a violation ``LHS - (RHS + slack_tol)`` (or ``residual - tolerance`` for
limits); it passes exactly when the largest violation is ``<= 0``.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DimensionError, NonContractive, NotClustered, NumericalError, RangeError
from .iteration import DEFAULT_WINDOW, cauchy_residual
from .operators import (
    Constant,
    Convergent,
    Periodic,
    compose,
    fold,
    operator_norm,
    operator_norms,
    sequence_limit_substitute,
    strip,
)
from .projectors import ConvergentProjectors, ObliqueProjector
from .space import NormKind, as_vector, norm_of

__all__ = [
    "Status",
    "Witness",
    "CheckResult",
    "VerificationReport",
    "ClusterSet",
    "REFERENCES",
    "SLACK_TOL",
    "LIMIT_TOL",
    "SEPARATION_TOL",
    "fixed_point_direct",
    "check_bound_nonexpansive",
    "check_bound_nonexpansive_affine",
    "check_convergent_contractive",
    "cluster_points",
    "check_cluster_points",
    "check_asymptotic_contractivity",
    "check_composite_substitution",
    "check_common_fixed_points",
    "check_limit_continuity",
    "check_compactness_inequality",
    "check_strip_decay",
    "check_kernel_preimage_degeneracy",
    "fit_geometric_decay",
]

SLACK_TOL = 1e-9
LIMIT_TOL = 1e-8
SEPARATION_TOL = 1e-6
FIXED_POINT_TOL = 1e-6
CONDITION_LIMIT = 1e12

REFERENCES = {
    "check_bound_nonexpansive": (
        "non-expansive T_k, sup_k ||P_k|| <= mu: d(z_{k+2}, z_{k+1}) <= 4 mu ||x_0||"
    ),
    "check_bound_nonexpansive_affine": (
        "affine non-expansive T_k: d(z_{k+2}, z_{k+1}) <= 4 mu ||x_0|| + 3 mu ||T_0(0)||"
    ),
    "check_convergent_contractive": (
        "T_k -> T contractive, constant P: z_k Cauchy with unique limit P x*, x* = T x*"
    ),
    "cluster_points": (
        "contractive periodic composites: at most J Cauchy subsequences of z_k,"
        " each limit fixed by its rotated period composite"
    ),
    "check_asymptotic_contractivity": (
        "P_n -> P, T_n -> T: ||P_n T_n|| <= ||P|| ||T|| + delta for all n >= n0(delta)"
    ),
    "check_composite_substitution": (
        "composites with convergent factors replaced by limits:"
        " d(T_hat(k+i+1, k) x, T_hat0(k+i+1, k) x) -> 0"
    ),
    "check_common_fixed_points": (
        "limit composites T_hat and T_hat0 share their fixed points"
    ),
    "check_limit_continuity": (
        "T_n -> T, x_n -> x: ||T_n x_n - T x|| <= ||T|| ||x_n - x|| + ||T_n - T|| ||x_n|| -> 0"
    ),
    "check_compactness_inequality": (
        "||T z_i - T z_j|| <= ||T - T_n|| (||z_i|| + ||z_j||) + ||T_n z_i - T_n z_j||"
    ),
    "check_strip_decay": (
        "strip composites of norm <= K < 1: ||T_hat(j_{k+2}, j_k)|| <= K ||T_hat(j_{k+1}, j_k)||,"
        " T_hat(j_k, 0) -> 0 and trajectories collapse to the strip fixed point"
    ),
    "check_kernel_preimage_degeneracy": (
        "P T linear: P T (x + x_a) = P T x for every x_a in Ker(P T)"
    ),
}


class Status(str, Enum):
    PASS = "Pass"
    FAIL = "Fail"
    INAPPLICABLE = "Inapplicable"


@dataclass
class Witness:
    index: Optional[int] = None
    vectors: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "index": self.index,
            "vectors": {name: np.asarray(v, dtype=float).tolist() for name, v in self.vectors.items()},
        }


@dataclass
class CheckResult:
    check_name: str
    status: Status
    max_violation: float
    details: str = ""
    witness: Optional[Witness] = None
    measured: dict = field(default_factory=dict)
    paper_ref: str = ""

    def __post_init__(self):
        if not self.paper_ref:
            self.paper_ref = REFERENCES.get(self.check_name, "")
        if self.status is Status.FAIL and self.witness is None:
            self.witness = Witness()

    @property
    def passed(self):
        return self.status is Status.PASS

    def to_dict(self):
        out = {
            "check_name": self.check_name,
            "paper_ref": self.paper_ref,
            "status": self.status.value,
            "max_violation": float(self.max_violation),
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        out["details"] = self.details
        if self.measured:
            out["measured"] = _plain(self.measured)
        return out


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _inapplicable(name, reason, **measured):
    return CheckResult(name, Status.INAPPLICABLE, 0.0, details=reason, measured=measured)


@dataclass
class VerificationReport:
    scenario_digest: str
    entries: list = field(default_factory=list)

    def add(self, entry):
        self.entries.append(entry)
        return entry

    @property
    def any_failed(self):
        return any(e.status is Status.FAIL for e in self.entries)

    @property
    def exit_code(self):
        return 1 if self.any_failed else 0

    def entry(self, name):
        for e in self.entries:
            if e.check_name == name:
                return e
        raise KeyError(name)

    def to_dict(self):
        return {
            "scenario_digest": self.scenario_digest,
            "entries": [e.to_dict() for e in self.entries],
        }


# --------------------------------------------------------------------------
# Oracles
# --------------------------------------------------------------------------


def fixed_point_direct(op):
    """Solve ``(I - A) x = b`` directly; the fixed point of ``x -> A x + b``.

    Raises
    ------
    NonContractive
        If ``I - A`` is singular or its condition number exceeds 1e12.
    """
    n = op.dim
    system = np.eye(n) - op.matrix
    cond = np.linalg.cond(system)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise NonContractive(f"I - A is singular or ill-conditioned (cond={cond:.3g})")
    x = np.linalg.solve(system, op.offset)
    residual = np.linalg.norm(x - op.matrix @ x - op.offset)
    if residual > 1e-10 * (1.0 + np.linalg.norm(x)):
        raise NumericalError(f"fixed-point residual {residual:.3g} too large")
    return x


def fit_geometric_decay(values, floor=0.0):
    """Least-squares fit of ``values[k] ~ C * rate**k`` on entries above ``floor``.

    Returns ``(rate, C_envelope, r_squared, n_points)``; ``C_envelope`` is
    the smallest constant with ``values[k] <= C * rate**k`` on the fitted
    points. With fewer than three usable points the rate is reported as 0.
    """
    values = np.asarray(values, dtype=float)
    ks = np.nonzero(values > floor)[0]
    if ks.size < 3:
        return 0.0, float(values.max(initial=0.0)), 1.0, int(ks.size)
    logs = np.log(values[ks])
    slope, intercept = np.polyfit(ks, logs, 1)
    predicted = slope * ks + intercept
    ss_res = float(np.sum((logs - predicted) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    rate = float(np.exp(slope))
    envelope = float(np.max(values[ks] / rate ** ks.astype(float)))
    return rate, envelope, r_squared, int(ks.size)


def _constant_projector(p_seq):
    if p_seq is None:
        return None
    if isinstance(p_seq, ObliqueProjector):
        return p_seq
    if isinstance(p_seq, Constant):
        return p_seq.op
    return None


# --------------------------------------------------------------------------
# Uniform bound for non-expansive maps
# --------------------------------------------------------------------------


def _projector_sup(p_seq, count, kind):
    if p_seq is None:
        return 1.0
    return p_seq.max_norm(count, kind)


def check_bound_nonexpansive(trace, t_seq, p_seq=None, mu=None, slack_tol=SLACK_TOL):
    """``d(z_{k+2}, z_{k+1}) <= 4 mu ||x_0||`` along the whole trace.

    Requires linear ``T_k`` with ``||A_k|| <= 1`` and ``||P_k|| <= mu``.
    """
    name = "check_bound_nonexpansive"
    kind = trace.norm_kind
    steps = len(trace) - 1
    if steps < 2:
        return _inapplicable(name, "trace shorter than two steps")
    if not t_seq.all_linear(steps):
        return _inapplicable(name, "operators have nonzero offsets; see check_bound_nonexpansive_affine")
    op_sup = t_seq.max_norm(steps, kind)
    if op_sup > 1.0 + slack_tol:
        return _inapplicable(name, f"operators are not non-expansive (sup norm {op_sup:.6g})")
    p_sup = _projector_sup(p_seq, steps + 1, kind)
    if mu is None:
        mu = p_sup
    elif p_sup > mu + slack_tol:
        return _inapplicable(name, f"projector norm {p_sup:.6g} exceeds mu={mu:.6g}")
    bound = 4.0 * mu * norm_of(trace.x0, kind)
    lhs = trace.d_z[2:]
    violations = lhs - (bound + slack_tol)
    worst = int(np.argmax(violations))
    max_violation = float(violations[worst])
    measured = {
        "mu": mu,
        "bound": bound,
        "max_d_z": float(lhs.max()),
        "min_slack": float(bound - lhs.max()),
        "operator_sup_norm": op_sup,
    }
    if max_violation <= 0:
        return CheckResult(name, Status.PASS, max_violation, details=f"{lhs.size} increments checked", measured=measured)
    k = worst
    return CheckResult(
        name,
        Status.FAIL,
        max_violation,
        details=f"bound exceeded at k={k}",
        witness=Witness(k, {"z_k+1": trace.zs[k + 1], "z_k+2": trace.zs[k + 2]}),
        measured=measured,
    )


def check_bound_nonexpansive_affine(trace, t_seq, p_seq=None, mu=None, slack_tol=SLACK_TOL):
    """Affine variant ``d(z_{k+2}, z_{k+1}) <= 4 mu ||x_0|| + 3 mu ||T_0(0)||``.

    The extra term accounts for the offset of the first map. This is an
    empirical extension: for time-varying offsets and moving projectors
    it is not guaranteed, and the check reports what it measures.
    """
    name = "check_bound_nonexpansive_affine"
    kind = trace.norm_kind
    steps = len(trace) - 1
    if steps < 2:
        return _inapplicable(name, "trace shorter than two steps")
    op_sup = t_seq.max_norm(steps, kind)
    if op_sup > 1.0 + slack_tol:
        return _inapplicable(name, f"operators are not non-expansive (sup norm {op_sup:.6g})")
    if mu is None:
        mu = _projector_sup(p_seq, steps + 1, kind)
    bound = 4.0 * mu * norm_of(trace.x0, kind) + 3.0 * mu * norm_of(t_seq[0].offset, kind)
    lhs = trace.d_z[2:]
    violations = lhs - (bound + slack_tol)
    worst = int(np.argmax(violations))
    max_violation = float(violations[worst])
    measured = {"mu": mu, "bound": bound, "max_d_z": float(lhs.max())}
    if max_violation <= 0:
        return CheckResult(name, Status.PASS, max_violation, details="affine extension holds on this trace", measured=measured)
    return CheckResult(
        name,
        Status.FAIL,
        max_violation,
        details=f"affine extension exceeded at k={worst}",
        witness=Witness(worst, {"z_k+1": trace.zs[worst + 1], "z_k+2": trace.zs[worst + 2]}),
        measured=measured,
    )


# --------------------------------------------------------------------------
# Convergent contractive sequences
# --------------------------------------------------------------------------


def _contractive_tail(t_seq, kind, horizon):
    """``(n0, K)`` with ``||A_k|| <= K < 1`` for every ``k >= n0``, or ``None``."""
    if isinstance(t_seq, Constant):
        K = operator_norm(t_seq.op, kind)
        return (0, K) if K < 1.0 else None
    if isinstance(t_seq, Convergent):
        if operator_norm(t_seq.limit_op, kind) >= 1.0:
            return None
        for n0 in range(horizon + 1):
            K = t_seq.tail_norm_bound(n0, kind)
            if K < 1.0:
                return n0, K
    return None


def check_convergent_contractive(
    trace,
    t_seq,
    projector=None,
    window=DEFAULT_WINDOW,
    limit_tol=LIMIT_TOL,
    fixed_point_tol=FIXED_POINT_TOL,
    slack_tol=SLACK_TOL,
):
    """Convergence of ``z_k`` for a convergent contractive ``T_k`` and constant ``P``.

    Three sub-checks: (a) the Cauchy residual of the last ``window`` values
    of ``z`` is below ``limit_tol``; (b) the final ``z`` is within
    ``fixed_point_tol`` of ``P x*`` where ``x* = T x*`` is solved directly;
    (c) for every ``k >= n0``::

        d(z_{k+2}, z_{k+1}) <= ||P|| (K^{k-n0+1} d(x_{n0+1}, x_{n0})
                               + (1 - K^{k-n0+1}) / (1 - K) * D_k * M_k)

    with ``D_k = sup_{n0 <= j <= k} ||T_{j+1} - T_j||`` and
    ``M_k = sup_{j <= k} ||x_j||`` (floored at 1 for affine maps).
    """
    name = "check_convergent_contractive"
    kind = trace.norm_kind
    N = len(trace) - 1
    P = _constant_projector(projector)
    if projector is not None and P is None:
        return _inapplicable(name, "projector sequence is not constant")
    tail = _contractive_tail(t_seq, kind, N)
    if tail is None:
        return _inapplicable(name, "operator sequence is not convergent with a contractive tail")
    n0, K = tail
    if trace.terminated_reason.value == "Diverged":
        return CheckResult(name, Status.FAIL, float("inf"), details="trace diverged",
                           witness=Witness(N, {"x_final": trace.final_x}))
    P_matrix = np.eye(trace.dim) if P is None else P.matrix
    P_norm = 1.0 if P is None else operator_norm(P, kind)

    # (a) Cauchy residual
    residual = cauchy_residual(trace, min(window, len(trace)))
    viol_a = residual - limit_tol

    # (b) limit against the directly solved fixed point
    x_star = fixed_point_direct(t_seq.limit)
    z_star = P_matrix @ x_star
    err_b = norm_of(trace.final_z - z_star, kind)
    viol_b = err_b - fixed_point_tol

    # (c) majorant along k = n0 .. N-2
    viol_c = -np.inf
    worst_k = None
    extra = {}
    if N - 2 >= n0:
        ks = np.arange(n0, N - 1)
        lhs = trace.d_z[ks + 2]
        e0 = trace.d_x[n0 + 1]
        incr = np.array([t_seq.increment_norm(int(j), kind) for j in ks])
        sup_incr = np.maximum.accumulate(incr)
        x_norms = np.linalg.norm(trace.xs, ord=kind.ord, axis=1)
        sup_x = np.maximum.accumulate(x_norms)[ks]
        if not t_seq.all_linear(N):
            sup_x = np.maximum(sup_x, 1.0)
        powers = K ** (ks - n0 + 1.0)
        geometric = (1.0 - powers) / (1.0 - K) if K < 1 else ks - n0 + 1.0
        rhs = P_norm * (powers * e0 + geometric * sup_incr * sup_x)
        diffs = lhs - (rhs + slack_tol)
        worst = int(np.argmax(diffs))
        viol_c = float(diffs[worst])
        worst_k = int(ks[worst])
        # Reference forms, reported only.
        shifted = K * (1.0 - K ** (ks - n0 + 0.0)) / (1.0 - K)
        rhs_shifted = P_norm * (powers * e0 + shifted * sup_incr * sup_x)
        rhs_single = P_norm * (powers * e0 + shifted * incr * x_norms[n0])
        extra = {
            "shifted_sum_form_max_violation": float(np.max(lhs - rhs_shifted)),
            "single_increment_form_max_violation": float(np.max(lhs - rhs_single)),
        }

    max_violation = float(max(viol_a, viol_b, viol_c))
    measured = {
        "n0": n0,
        "K": K,
        "projector_norm": P_norm,
        "cauchy_residual": residual,
        "final_z": trace.final_z,
        "fixed_point": x_star,
        "limit_error": err_b,
        "majorant_max_violation": viol_c if np.isfinite(viol_c) else None,
        **extra,
    }
    details = (
        f"(a) residual {residual:.3g} vs {limit_tol:.1g}; (b) |z_N - P x*| = {err_b:.3g}"
        f" vs {fixed_point_tol:.1g}; (c) majorant from n0={n0}, K={K:.6g}"
    )
    if max_violation <= 0:
        return CheckResult(name, Status.PASS, max_violation, details=details, measured=measured)
    if viol_c > 0 and viol_c >= max(viol_a, viol_b):
        witness = Witness(worst_k, {"z_k+1": trace.zs[worst_k + 1], "z_k+2": trace.zs[worst_k + 2]})
    else:
        witness = Witness(N, {"z_final": trace.final_z, "P_x_star": z_star})
    return CheckResult(name, Status.FAIL, max_violation, details=details, witness=witness, measured=measured)


# --------------------------------------------------------------------------
# Cluster points of periodic scenarios
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ClusterSet:
    """Distinct limits of the residue classes ``k mod period`` of ``z_k``."""

    points: tuple
    period: int
    per_point_residual: tuple
    residues: tuple


def cluster_points(trace, period, separation_tol=SEPARATION_TOL, limit_tol=LIMIT_TOL, window=DEFAULT_WINDOW):
    """Split the tail of ``z_k`` by ``k mod period`` and merge coincident limits.

    Raises
    ------
    NotClustered
        If some residue class has Cauchy residual above ``limit_tol``.
    RangeError
        If the trace holds fewer than ``window`` members per class.
    """
    if period < 1:
        raise RangeError("period must be at least 1")
    kind = trace.norm_kind
    L = len(trace)
    if L < window * period:
        raise RangeError(f"trace of length {L} too short for {window} members per class")
    class_limits = []
    class_residuals = []
    for r in range(period):
        idx = np.arange(r, L, period)[-window:]
        members = trace.zs[idx]
        diffs = members[:, None, :] - members[None, :, :]
        residual = float(np.linalg.norm(diffs, ord=kind.ord, axis=-1).max())
        if residual > limit_tol:
            raise NotClustered(r, residual)
        class_limits.append(members[-1])
        class_residuals.append(residual)
    points, residuals, residues = [], [], []
    for r, (p, res) in enumerate(zip(class_limits, class_residuals)):
        for i, q in enumerate(points):
            if norm_of(p - q, kind) <= separation_tol:
                residues[i] = residues[i] + (r,)
                residuals[i] = max(residuals[i], res)
                break
        else:
            points.append(p)
            residuals.append(res)
            residues.append((r,))
    return ClusterSet(tuple(points), period, tuple(residuals), tuple(residues))


def _has_period(seq, period, probe=None):
    if seq is None:
        return True
    if isinstance(seq, Periodic):
        return period % seq.period == 0
    probe = probe or 2 * period
    return all(seq[k].same_as(seq[k + period]) for k in range(probe))


def check_cluster_points(
    trace,
    t_seq,
    p_seq,
    period,
    separation_tol=SEPARATION_TOL,
    limit_tol=LIMIT_TOL,
    window=DEFAULT_WINDOW,
):
    """At most ``period`` cluster points, each matching its rotated composite.

    For residue ``r`` the composite ``C_r = T_{r+J-1} ... T_r`` maps
    ``x_{mJ+r}`` to ``x_{(m+1)J+r}``; its fixed point ``x_r*`` (solved
    directly) must satisfy ``P_r x_r* = z_hat_r``, and the recorded class
    limit of ``x`` must be fixed by ``C_r`` to within ``limit_tol``.
    """
    name = "cluster_points"
    kind = trace.norm_kind
    try:
        clusters = cluster_points(trace, period, separation_tol, limit_tol, window)
    except NotClustered as exc:
        L = len(trace)
        idx = np.arange(exc.residue, L, period)[-1]
        return CheckResult(
            name, Status.FAIL, exc.residual - limit_tol, details=str(exc),
            witness=Witness(int(idx), {"z": trace.zs[idx]}),
        )
    viol_count = len(clusters.points) - period
    measured = {
        "period": period,
        "count": len(clusters.points),
        "points": [np.asarray(p) for p in clusters.points],
        "residues": [list(r) for r in clusters.residues],
        "per_point_residual": list(clusters.per_point_residual),
    }
    violations = [float(viol_count)]
    witness = None
    if _has_period(t_seq, period) and _has_period(p_seq, period):
        L = len(trace)
        fp_residuals, oracle_errors = [], []
        for r in range(period):
            composite = strip(t_seq, r, r + period - 1).realized
            idx = np.arange(r, L, period)[-1]
            x_hat = trace.xs[idx]
            fp_res = norm_of(composite(x_hat) - x_hat, kind)
            try:
                x_star = fixed_point_direct(composite)
            except NonContractive as exc:
                return _inapplicable(name, f"rotated composite {r} has no unique fixed point: {exc}")
            P = None if p_seq is None else p_seq[r]
            z_star = x_star if P is None else P(x_star)
            err = norm_of(trace.zs[idx] - z_star, kind)
            fp_residuals.append(fp_res)
            oracle_errors.append(err)
            v = max(fp_res, err) - limit_tol
            violations.append(v)
            if v > 0 and witness is None:
                witness = Witness(int(idx), {"z": trace.zs[idx], "P_x_star": z_star})
        measured["fixed_point_residuals"] = fp_residuals
        measured["oracle_errors"] = oracle_errors
    else:
        measured["fixed_point_residuals"] = None
    max_violation = float(max(violations))
    details = f"{len(clusters.points)} distinct cluster point(s) for period {period}"
    if max_violation <= 0:
        return CheckResult(name, Status.PASS, max_violation, details=details, measured=measured)
    if witness is None:
        witness = Witness(None, {f"point_{i}": p for i, p in enumerate(clusters.points)})
    return CheckResult(name, Status.FAIL, max_violation, details=details, witness=witness, measured=measured)


# --------------------------------------------------------------------------
# Asymptotic contractivity of P_n T_n
# --------------------------------------------------------------------------


@lru_cache(maxsize=16)
def _product_norms(p_seq, t_seq, horizon, kind):
    stack = np.empty((horizon + 1, t_seq.dim, t_seq.dim))
    for n in range(horizon + 1):
        stack[n] = p_seq[n].matrix @ t_seq[n].matrix
    norms = operator_norms(stack, kind)
    norms.flags.writeable = False
    return norms


def check_asymptotic_contractivity(p_seq, t_seq, delta, horizon=10_000, kind=NormKind.L2):
    """Smallest ``n0`` with ``||P_n T_n|| <= ||P|| ||T|| + delta`` on ``[n0, horizon]``.

    Raises
    ------
    ValueError
        If ``delta <= 0``.
    """
    name = "check_asymptotic_contractivity"
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    kind = NormKind.parse(kind)
    P, T = p_seq.limit, t_seq.limit
    if P is None or T is None:
        return _inapplicable(name, "projector or operator sequence has no limit")
    p, t = operator_norm(P, kind), operator_norm(T, kind)
    pt_limit = operator_norm(P.matrix @ T.matrix, kind)
    bound = p * t + delta
    norms = _product_norms(p_seq, t_seq, int(horizon), kind)
    above = np.nonzero(norms > bound)[0]
    n0 = 0 if above.size == 0 else int(above[-1]) + 1
    found = n0 <= horizon
    asymptotically_contractive = pt_limit < 1.0 and delta < 1.0 - pt_limit
    measured = {
        "n0": n0 if found else None,
        "bound": bound,
        "p": p,
        "t": t,
        "limit_product_norm": pt_limit,
        "norm_at_n0": float(norms[n0]) if found else None,
        "norm_before_n0": float(norms[n0 - 1]) if found and n0 > 0 else None,
        "asymptotically_contractive": bool(asymptotically_contractive),
    }
    if found:
        max_violation = float(np.max(norms[n0:] - bound))
        details = f"n0={n0} for delta={delta:g}"
        if asymptotically_contractive:
            details += "; asymptotically contractive"
        return CheckResult(name, Status.PASS, max_violation, details=details, measured=measured)
    return CheckResult(
        name,
        Status.FAIL,
        float(norms[-1] - bound),
        details=f"bound still violated at the horizon n={horizon}",
        witness=Witness(int(horizon), {}),
        measured=measured,
    )


# --------------------------------------------------------------------------
# Limit substitution in composites
# --------------------------------------------------------------------------


def _factor_product(factors, k):
    """``T_k = F_m[k] ... F_1[k]`` (first factor applied first)."""
    return fold([f[k] for f in factors])


def _window_composite(factors, k, length):
    """``T_hat(k+length, k) = T_{k+length-1} ... T_k``."""
    return fold([_factor_product(factors, j) for j in range(k, k + length)])


def _known_rate(seq):
    if isinstance(seq, (Convergent, ConvergentProjectors)):
        return seq.rate
    return None


def check_composite_substitution(
    factor_seqs,
    i,
    sample_points,
    horizon=300,
    kind=NormKind.L2,
    limit_tol=LIMIT_TOL,
    rate_slack=0.02,
    min_r_squared=0.9,
):
    """``max_x d(T_hat(k+i+1, k) x, T_hat0(k+i+1, k) x)`` vanishes geometrically.

    ``T_hat0`` replaces every factor sequence that has a limit by that
    limit; factors without one (e.g. periodic) are kept verbatim. The
    distance series is fitted as ``C * rate**k``; when all substituted
    factors decay at known rates the fitted rate must not exceed the
    slowest of them by more than ``rate_slack``.
    """
    name = "check_composite_substitution"
    kind = NormKind.parse(kind)
    dims = {f.dim for f in factor_seqs}
    if len(dims) != 1:
        raise DimensionError(f"factor sequences of mixed dimensions {sorted(dims)}")
    substituted = [sequence_limit_substitute(f) for f in factor_seqs]
    limit_factors = [s.sequence for s in substituted]
    has_limit = [s.has_limit for s in substituted]
    samples = [as_vector(x) for x in sample_points]
    length = i + 1
    distances = np.empty(horizon + 1)
    scale = 0.0
    for k in range(horizon + 1):
        actual = _window_composite(factor_seqs, k, length)
        limit = _window_composite(limit_factors, k, length)
        best = 0.0
        for x in samples:
            ax, lx = actual(x), limit(x)
            best = max(best, norm_of(ax - lx, kind))
            scale = max(scale, norm_of(lx, kind))
        distances[k] = best
    floor = 1e-13 * (1.0 + scale)
    rate, envelope, r2, used = fit_geometric_decay(distances, floor)
    rates = [_known_rate(f) for f, h in zip(factor_seqs, has_limit) if h and not isinstance(f, Constant)]
    expected = max(rates) if rates and all(r is not None for r in rates) else None
    final = float(distances[-1])
    violations = [final - limit_tol]
    if expected is not None:
        violations.append(rate - (expected + rate_slack))
    if used >= 3:
        violations.append(min_r_squared - r2)
    max_violation = float(max(violations))
    measured = {
        "final_distance": final,
        "fitted_rate": rate,
        "fitted_constant": envelope,
        "r_squared": r2,
        "fitted_points": used,
        "expected_rate": expected,
        "factors_with_limit": has_limit,
        "window_length": length,
    }
    details = f"final distance {final:.3g}, fitted rate {rate:.4f}"
    if expected is not None:
        details += f" (factor rate {expected:g})"
    if max_violation <= 0:
        return CheckResult(name, Status.PASS, max_violation, details=details, measured=measured)
    worst_x = samples[0] if samples else np.zeros(factor_seqs[0].dim)
    return CheckResult(
        name, Status.FAIL, max_violation, details=details,
        witness=Witness(horizon, {"x": worst_x}), measured=measured,
    )


def check_common_fixed_points(factor_seqs, i, horizon=300, kind=NormKind.L2, limit_tol=LIMIT_TOL):
    """Fixed points of ``T_hat(k+i+1, k)`` at ``k = horizon`` and of its limit agree.

    Applicable when every factor has a limit (so the substituted window
    composite is a single operator) and that operator is contractive.
    """
    name = "check_common_fixed_points"
    kind = NormKind.parse(kind)
    substituted = [sequence_limit_substitute(f) for f in factor_seqs]
    if not all(s.has_limit for s in substituted):
        return _inapplicable(name, "some factor has no limit; the substituted composite varies with k")
    length = i + 1
    limit_op = _window_composite([s.sequence for s in substituted], 0, length)
    K = operator_norm(limit_op, kind)
    if K >= 1.0:
        return _inapplicable(name, f"limit composite is not contractive (norm {K:.6g})")
    actual = _window_composite(factor_seqs, horizon, length)
    try:
        x_limit = fixed_point_direct(limit_op)
        x_actual = fixed_point_direct(actual)
    except NonContractive as exc:
        return _inapplicable(name, str(exc))
    gap = norm_of(x_actual - x_limit, kind)
    tol = limit_tol * (1.0 + norm_of(x_limit, kind))
    measured = {"fixed_point": x_limit, "fixed_point_at_horizon": x_actual, "distance": gap, "limit_norm": K}
    if gap <= tol:
        return CheckResult(name, Status.PASS, gap - tol, details=f"fixed points agree to {gap:.3g}", measured=measured)
    return CheckResult(
        name, Status.FAIL, gap - tol, details=f"fixed points differ by {gap:.3g}",
        witness=Witness(horizon, {"limit": x_limit, "actual": x_actual}), measured=measured,
    )


# --------------------------------------------------------------------------
# Closedness and compactness inequalities
# --------------------------------------------------------------------------


def check_limit_continuity(
    t_seq,
    x_limit,
    x_perturbation,
    x_rate,
    horizon=400,
    kind=NormKind.L2,
    slack_tol=SLACK_TOL,
    limit_tol=LIMIT_TOL,
):
    """Strong convergence ``T_n x_n -> T x`` for ``x_n = x + x_rate**n e``.

    Checks, at every ``n <= horizon``::

        ||T_n x_n - T x|| <= ||T|| ||x_n - x|| + ||T_n - T|| ||x_n||

    (``||x_n||`` floored at 1 for affine maps) and that the left side has
    dropped below ``limit_tol`` by the horizon.
    """
    name = "check_limit_continuity"
    kind = NormKind.parse(kind)
    T = t_seq.limit
    if T is None:
        return _inapplicable(name, "operator sequence has no limit")
    x = as_vector(x_limit, dim=t_seq.dim)
    e = as_vector(x_perturbation, dim=t_seq.dim)
    Tx = T(x)
    T_norm = operator_norm(T, kind)
    affine = not (T.is_linear and t_seq.all_linear(horizon + 1))
    lhs = np.empty(horizon + 1)
    rhs = np.empty(horizon + 1)
    for n in range(horizon + 1):
        xn = x + x_rate**n * e
        xn_norm = norm_of(xn, kind)
        lhs[n] = norm_of(t_seq[n](xn) - Tx, kind)
        rhs[n] = T_norm * norm_of(xn - x, kind) + t_seq.limit_distance(n, kind) * (
            max(xn_norm, 1.0) if affine else xn_norm
        )
    slack = rhs - lhs
    worst = int(np.argmin(slack))
    viol_ineq = float(-slack[worst] - slack_tol)
    viol_limit = float(lhs[-1] - limit_tol)
    rate, _, _, _ = fit_geometric_decay(lhs, 1e-13 * (1.0 + norm_of(Tx, kind)))
    measured = {
        "min_slack": float(slack[worst]),
        "final_lhs": float(lhs[-1]),
        "fitted_rate": rate,
        "limit_norm": T_norm,
        "lhs": lhs,
        "rhs": rhs,
    }
    max_violation = max(viol_ineq, viol_limit)
    details = f"min slack {slack[worst]:.3g}, final ||T_n x_n - T x|| = {lhs[-1]:.3g}"
    if max_violation <= 0:
        return CheckResult(name, Status.PASS, max_violation, details=details, measured=measured)
    return CheckResult(
        name, Status.FAIL, max_violation, details=details,
        witness=Witness(worst, {"x_n": x + x_rate**worst * e}), measured=measured,
    )


def check_compactness_inequality(t_seq, z_i, z_j, horizon=200, kind=NormKind.L2, slack_tol=SLACK_TOL):
    """``||T z_i - T z_j|| <= ||T - T_n|| (||z_i|| + ||z_j||) + ||T_n z_i - T_n z_j||`` for each n."""
    name = "check_compactness_inequality"
    kind = NormKind.parse(kind)
    T = t_seq.limit
    if T is None:
        return _inapplicable(name, "operator sequence has no limit")
    zi = as_vector(z_i, dim=t_seq.dim)
    zj = as_vector(z_j, dim=t_seq.dim)
    lhs = norm_of(T(zi) - T(zj), kind)
    size = norm_of(zi, kind) + norm_of(zj, kind)
    slack = np.empty(horizon + 1)
    for n in range(horizon + 1):
        Tn = t_seq[n]
        slack[n] = t_seq.limit_distance(n, kind) * size + norm_of(Tn(zi) - Tn(zj), kind) - lhs
    worst = int(np.argmin(slack))
    max_violation = float(-slack[worst] - slack_tol)
    measured = {"lhs": lhs, "min_slack": float(slack[worst]), "final_slack": float(slack[-1]), "slack": slack}
    details = f"min slack {slack[worst]:.3g} over {horizon + 1} indices"
    if max_violation <= 0:
        return CheckResult(name, Status.PASS, max_violation, details=details, measured=measured)
    return CheckResult(
        name, Status.FAIL, max_violation, details=details,
        witness=Witness(worst, {"z_i": zi, "z_j": zj}), measured=measured,
    )


# --------------------------------------------------------------------------
# Strip decay
# --------------------------------------------------------------------------


def check_strip_decay(
    t_seq,
    schedule,
    kind=NormKind.L2,
    sample_pairs=None,
    seed=0,
    slack_tol=SLACK_TOL,
    limit_tol=LIMIT_TOL,
):
    """Geometric decay of composites over a contractive strip schedule.

    (a) ``||T_hat(j_{k+2}, j_k)|| <= K ||T_hat(j_{k+1}, j_k)||``;
    (b) ``||T_hat(j_k, 0)|| <= ||T_hat(j_1, 0)|| K^{k-1}``;
    (c) trajectory pairs from the same composites collapse, at most at the
    rate ``prod per_strip_norm``, and converge to the fixed point of the
    strip composite once consecutive strips coincide.

    Raises
    ------
    RangeError
        If the schedule is malformed or ``K >= 1``.
    """
    name = "check_strip_decay"
    kind = NormKind.parse(kind)
    schedule.validate()
    if not schedule.K < 1.0:
        raise RangeError(f"schedule constant K={schedule.K} is not below 1")
    b = schedule.boundaries
    s = schedule.strip_count
    strips = [strip(t_seq, b[i], b[i + 1] - 1).realized for i in range(s)]
    strip_norms = np.array([operator_norm(S, kind) for S in strips])
    K = float(strip_norms.max())
    soundness = float(np.max(np.abs(strip_norms - np.asarray(schedule.per_strip_norm))))

    # (a) two-strip chain
    viol_a = -np.inf
    for idx in range(s - 1):
        two = operator_norm(compose(strips[idx + 1], strips[idx]), kind)
        viol_a = max(viol_a, two - (K * strip_norms[idx] + slack_tol))

    # (b) composite from 0 decays geometrically
    composites = []
    C = None
    for S in strips:
        C = S if C is None else compose(S, C)
        composites.append(C)
    comp_norms = np.array([operator_norm(C, kind) for C in composites])
    ks = np.arange(1, s + 1)
    viol_b = float(np.max(comp_norms - (comp_norms[0] * K ** (ks - 1.0) + slack_tol)))
    monotone = bool(np.all(np.diff(comp_norms) <= slack_tol)) if s > 1 else True

    # (c) trajectory collapse
    if sample_pairs is None:
        rng = np.random.default_rng(seed)
        sample_pairs = []
        for _ in range(4):
            x = rng.standard_normal(t_seq.dim)
            y = rng.standard_normal(t_seq.dim)
            sample_pairs.append((x, y))
    cum_prod = np.cumprod(strip_norms)
    viol_c = -np.inf
    final_gap = 0.0
    witness = None
    for x, y in sample_pairs:
        x, y = np.asarray(x, float), np.asarray(y, float)
        d0 = norm_of(x - y, kind)
        for k, C in enumerate(composites):
            gap = norm_of(C(x) - C(y), kind)
            v = gap - (cum_prod[k] * d0 + slack_tol)
            if v > viol_c:
                viol_c = v
                if v > 0 and witness is None:
                    witness = Witness(int(b[k + 1]), {"x": x, "y": y})
        final_gap = max(final_gap, norm_of(composites[-1](x) - composites[-1](y), kind))
    viol_c = max(viol_c, final_gap - limit_tol)

    # strip fixed point, when consecutive strips have settled to one operator
    fixed_point_error = None
    x_star = None
    if s >= 2 and strips[-1].same_as(strips[-2], atol=1e-12 * (1.0 + np.abs(strips[-1].matrix).max())):
        try:
            x_star = fixed_point_direct(strips[-1])
        except NonContractive:
            x_star = None
        if x_star is not None:
            tol = limit_tol * (1.0 + norm_of(x_star, kind))
            fixed_point_error = max(norm_of(composites[-1](np.asarray(x, float)) - x_star, kind) for x, _ in sample_pairs)
            viol_c = max(viol_c, fixed_point_error - tol)

    max_violation = float(max(viol_a, viol_b, viol_c))
    measured = {
        "K": K,
        "strip_count": s,
        "max_gap": int(np.max(np.diff(b))),
        "per_strip_norm_mismatch": soundness,
        "composite_norms": comp_norms,
        "monotone_composite_norms": monotone,
        "final_pair_distance": final_gap,
        "strip_fixed_point": x_star,
        "fixed_point_error": fixed_point_error,
        "chain_max_violation": float(viol_a) if s > 1 else None,
        "decay_max_violation": viol_b,
    }
    details = f"{s} strips, K={K:.6g}, final pair distance {final_gap:.3g}"
    if max_violation <= 0:
        return CheckResult(name, Status.PASS, max_violation, details=details, measured=measured)
    if witness is None:
        worst = int(np.argmax(comp_norms - comp_norms[0] * K ** (ks - 1.0)))
        witness = Witness(int(b[worst + 1]), {})
    return CheckResult(name, Status.FAIL, max_violation, details=details, witness=witness, measured=measured)


# --------------------------------------------------------------------------
# Kernel preimages
# --------------------------------------------------------------------------


def _null_space(matrix):
    u, sv, vt = np.linalg.svd(matrix)
    tol = max(matrix.shape) * np.finfo(float).eps * (sv[0] if sv.size else 0.0)
    rank = int(np.sum(sv > tol))
    return vt[rank:].T


def check_kernel_preimage_degeneracy(P, T, samples=16, seed=0, tol=SLACK_TOL, kind=NormKind.L2):
    """``P T (x + x_a) = P T x`` for ``x_a`` drawn from the kernel of ``P A``."""
    name = "check_kernel_preimage_degeneracy"
    kind = NormKind.parse(kind)
    PT = compose(P, T)
    kernel = _null_space(PT.matrix)
    if kernel.shape[1] == 0:
        return _inapplicable(name, "P T has trivial kernel")
    rng = np.random.default_rng(seed)
    worst, witness_x, witness_xa = -np.inf, None, None
    for _ in range(samples):
        x = rng.standard_normal(PT.dim)
        xa = kernel @ rng.standard_normal(kernel.shape[1])
        gap = norm_of(PT(x + xa) - PT(x), kind)
        if gap > worst:
            worst, witness_x, witness_xa = gap, x, xa
    max_violation = float(worst - tol)
    measured = {"kernel_dimension": int(kernel.shape[1]), "max_gap": float(worst), "kernel_basis": kernel}
    details = f"kernel of P T has dimension {kernel.shape[1]}; max |PT(x + x_a) - PT x| = {worst:.3g}"
    if max_violation <= 0:
        return CheckResult(name, Status.PASS, max_violation, details=details, measured=measured)
    return CheckResult(
        name, Status.FAIL, max_violation, details=details,
        witness=Witness(None, {"x": witness_x, "x_a": witness_xa}), measured=measured,
    )
