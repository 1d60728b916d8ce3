"""Scenario configuration, execution and the built-in demo scenarios.

A scenario is a JSON document. Matrices are row-major nested arrays,
operators are ``{"matrix", "offset"}`` objects and projectors are
``{"range_basis", "kernel_basis"}`` or ``{"orthogonal_range"}`` (bases are
``n x r`` arrays whose columns span the subspace) or the string
``"identity"``.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, NoContractiveStrip, OperiterError
from .io import atomic_write_text, dumps_json
from .iteration import (
    DEFAULT_CONV_TOL,
    DEFAULT_DIV_BOUND,
    DEFAULT_MAX_K,
    DEFAULT_WINDOW,
    find_contractive_strips,
    iterate,
    trace_to_csv,
)
from .operators import (
    AffineOperator,
    Constant,
    Convergent,
    Explicit,
    Periodic,
    Product,
    RandomContractive,
)
from .projectors import (
    ConvergentProjectors,
    identity_projector,
    oblique_projector,
    orthogonal_projector,
)
from .space import NormKind, norm_of
from .verify import (
    LIMIT_TOL,
    SEPARATION_TOL,
    SLACK_TOL,
    CheckResult,
    Status,
    VerificationReport,
    Witness,
    check_asymptotic_contractivity,
    check_bound_nonexpansive,
    check_bound_nonexpansive_affine,
    check_cluster_points,
    check_common_fixed_points,
    check_compactness_inequality,
    check_composite_substitution,
    check_convergent_contractive,
    check_kernel_preimage_degeneracy,
    check_limit_continuity,
    check_strip_decay,
)

__all__ = [
    "CHECK_NAMES",
    "DEMOS",
    "ScenarioConfig",
    "Tolerances",
    "StripSearch",
    "parse_config",
    "load_config",
    "build_operator_sequence",
    "build_projector_sequence",
    "run_scenario",
    "ScenarioResult",
    "demo_config",
]

# Report order; configs may list checks in any order.
CHECK_NAMES = (
    "check_bound_nonexpansive",
    "check_convergent_contractive",
    "cluster_points",
    "check_asymptotic_contractivity",
    "check_composite_substitution",
    "check_common_fixed_points",
    "check_limit_continuity",
    "check_compactness_inequality",
    "check_strip_decay",
    "check_kernel_preimage_degeneracy",
)


@dataclass(frozen=True)
class Tolerances:
    conv_tol: float = DEFAULT_CONV_TOL
    slack_tol: float = SLACK_TOL
    separation_tol: float = SEPARATION_TOL
    limit_tol: float = LIMIT_TOL
    div_bound: float = DEFAULT_DIV_BOUND


@dataclass(frozen=True)
class StripSearch:
    K_target: float
    max_gap: int
    horizon: int


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    dim: int
    norm_kind: NormKind
    seed: int
    t_sequence: dict
    p_sequence: object
    x0: object
    max_k: int
    tolerances: Tolerances
    checks: tuple
    strip_search: object
    params: dict
    raw: dict = field(repr=False, compare=False)

    @property
    def digest(self):
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# --------------------------------------------------------------------------
# Validation helpers
# --------------------------------------------------------------------------


def _require(mapping, key, path):
    if not isinstance(mapping, dict):
        raise ConfigError(path, "expected an object")
    if key not in mapping:
        raise ConfigError(f"{path}.{key}" if path else key, "missing required field")
    return mapping[key]


def _number(value, path, lo=None, hi=None, lo_open=False, hi_open=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(path, f"expected a finite number, got {value!r}")
    if lo is not None and (value < lo or (lo_open and value == lo)):
        raise ConfigError(path, f"must be {'>' if lo_open else '>='} {lo}, got {value}")
    if hi is not None and (value > hi or (hi_open and value == hi)):
        raise ConfigError(path, f"must be {'<' if hi_open else '<='} {hi}, got {value}")
    return float(value)


def _integer(value, path, lo=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigError(path, f"must be >= {lo}, got {value}")
    return value


def _vector(value, dim, path):
    if not isinstance(value, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise ConfigError(path, "expected a list of numbers")
    if len(value) != dim:
        raise ConfigError(path, f"expected {dim} entries, got {len(value)}")
    arr = np.array(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ConfigError(path, "entries must be finite")
    return arr


def _matrix(value, rows, cols, path):
    if not isinstance(value, list) or len(value) != rows:
        raise ConfigError(path, f"expected {rows} rows")
    out = []
    for i, row in enumerate(value):
        if cols is not None and (not isinstance(row, list) or len(row) != cols):
            raise ConfigError(f"{path}[{i}]", f"expected {cols} columns")
        out.append(_vector(row, len(row) if isinstance(row, list) else -1, f"{path}[{i}]"))
    arr = np.array(out, dtype=float)
    if cols is None and arr.ndim != 2:
        raise ConfigError(path, "rows have inconsistent lengths")
    return arr


def _operator(spec, dim, path):
    matrix = _matrix(_require(spec, "matrix", path), dim, dim, f"{path}.matrix")
    offset = spec.get("offset")
    offset = np.zeros(dim) if offset is None else _vector(offset, dim, f"{path}.offset")
    return AffineOperator(matrix, offset)


def _basis(spec, dim, path):
    if spec == [] or spec is None:
        return np.zeros((dim, 0))
    return _matrix(spec, dim, None, path)


def _projector(spec, dim, path):
    try:
        if spec == "identity":
            return identity_projector(dim)
        if isinstance(spec, dict) and "orthogonal_range" in spec:
            return orthogonal_projector(_basis(spec["orthogonal_range"], dim, f"{path}.orthogonal_range"))
        M = _basis(_require(spec, "range_basis", path), dim, f"{path}.range_basis")
        N = _basis(_require(spec, "kernel_basis", path), dim, f"{path}.kernel_basis")
        return oblique_projector(M, N)
    except ConfigError:
        raise
    except OperiterError as exc:
        raise ConfigError(path, str(exc)) from exc


def _items(spec, key, path):
    items = _require(spec, key, path)
    if not isinstance(items, list) or not items:
        raise ConfigError(f"{path}.{key}", "expected a non-empty list")
    return items


def build_operator_sequence(spec, dim, kind, seed, path="t_sequence"):
    """Turn a sequence spec into an :class:`OperatorSequence`."""
    kind_name = _require(spec, "kind", path)
    if kind_name == "constant":
        return Constant(_operator(_require(spec, "operator", path), dim, f"{path}.operator"))
    if kind_name == "periodic":
        ops = _items(spec, "operators", path)
        return Periodic(tuple(_operator(op, dim, f"{path}.operators[{i}]") for i, op in enumerate(ops)))
    if kind_name == "explicit":
        ops = _items(spec, "operators", path)
        tail = spec.get("tail", "hold")
        if isinstance(tail, dict):
            tail = build_operator_sequence(tail, dim, kind, seed, f"{path}.tail")
        elif tail not in ("hold", "cycle"):
            raise ConfigError(f"{path}.tail", "expected 'hold', 'cycle' or a sequence spec")
        return Explicit(tuple(_operator(op, dim, f"{path}.operators[{i}]") for i, op in enumerate(ops)), tail)
    if kind_name == "convergent":
        rate = _number(_require(spec, "rate", path), f"{path}.rate", 0.0, 1.0, True, True)
        return Convergent(
            _operator(_require(spec, "limit", path), dim, f"{path}.limit"),
            _operator(_require(spec, "perturbation", path), dim, f"{path}.perturbation"),
            rate,
        )
    if kind_name == "random_contractive":
        bound = _number(_require(spec, "norm_bound", path), f"{path}.norm_bound", 0.0, lo_open=True)
        sub_seed = _integer(spec.get("seed", seed), f"{path}.seed")
        offset_scale = _number(spec.get("offset_scale", 0.0), f"{path}.offset_scale", 0.0)
        return RandomContractive(dim, sub_seed, bound, kind, offset_scale)
    if kind_name == "product":
        factors = _items(spec, "factors", path)
        return Product(
            tuple(
                build_operator_sequence(f, dim, kind, seed, f"{path}.factors[{i}]")
                for i, f in enumerate(factors)
            )
        )
    raise ConfigError(f"{path}.kind", f"unknown sequence kind {kind_name!r}")


def build_projector_sequence(spec, dim, path="p_sequence"):
    if spec is None:
        return None
    kind_name = _require(spec, "kind", path)
    if kind_name == "constant":
        return Constant(_projector(_require(spec, "projector", path), dim, f"{path}.projector"))
    if kind_name == "periodic":
        items = _items(spec, "projectors", path)
        return Periodic(tuple(_projector(p, dim, f"{path}.projectors[{i}]") for i, p in enumerate(items)))
    if kind_name == "explicit":
        items = _items(spec, "projectors", path)
        tail = spec.get("tail", "hold")
        if isinstance(tail, dict):
            tail = build_projector_sequence(tail, dim, f"{path}.tail")
        elif tail not in ("hold", "cycle"):
            raise ConfigError(f"{path}.tail", "expected 'hold', 'cycle' or a sequence spec")
        return Explicit(tuple(_projector(p, dim, f"{path}.projectors[{i}]") for i, p in enumerate(items)), tail)
    if kind_name == "convergent":
        rate = _number(_require(spec, "rate", path), f"{path}.rate", 0.0, 1.0, True, True)
        M = _basis(_require(spec, "range_basis", path), dim, f"{path}.range_basis")
        N = _basis(_require(spec, "kernel_basis", path), dim, f"{path}.kernel_basis")
        dM = _basis(spec.get("range_perturbation", np.zeros_like(M).tolist()), dim, f"{path}.range_perturbation")
        dN = _basis(spec.get("kernel_perturbation", np.zeros_like(N).tolist()), dim, f"{path}.kernel_perturbation")
        if dM.shape != M.shape or dN.shape != N.shape:
            raise ConfigError(path, "perturbation bases must match the limit basis shapes")
        try:
            return ConvergentProjectors(M, N, dM, dN, rate)
        except OperiterError as exc:
            raise ConfigError(path, str(exc)) from exc
    raise ConfigError(f"{path}.kind", f"unknown projector sequence kind {kind_name!r}")


def _random_or_vector(value, dim, path, rng):
    if value == "random":
        return rng.standard_normal(dim)
    return _vector(value, dim, path)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------


def _uses_random(obj):
    if obj == "random":
        return True
    if isinstance(obj, dict):
        if obj.get("kind") == "random_contractive":
            return True
        return any(_uses_random(v) for v in obj.values())
    if isinstance(obj, list):
        return any(_uses_random(v) for v in obj)
    return False


def parse_config(raw, name="scenario"):
    """Validate a scenario mapping and return a :class:`ScenarioConfig`.

    Sequences are built eagerly so that every dimension and basis error is
    reported here, naming the offending field.
    """
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "scenario must be a JSON object")
    dim = _integer(_require(raw, "dim", ""), "dim", lo=1)
    try:
        kind = NormKind.parse(raw.get("norm_kind", "L2"))
    except ValueError as exc:
        raise ConfigError("norm_kind", str(exc)) from exc
    if "seed" in raw:
        seed = _integer(raw["seed"], "seed")
    elif _uses_random(raw):
        raise ConfigError("seed", "required when any element is random")
    else:
        seed = 0
    t_spec = _require(raw, "t_sequence", "")
    build_operator_sequence(t_spec, dim, kind, seed)
    p_spec = raw.get("p_sequence")
    build_projector_sequence(p_spec, dim)
    x0 = _require(raw, "x0", "")
    if x0 != "random":
        _vector(x0, dim, "x0")
    max_k = _integer(raw.get("max_k", DEFAULT_MAX_K), "max_k", lo=1)

    tol_raw = raw.get("tolerances", {})
    if not isinstance(tol_raw, dict):
        raise ConfigError("tolerances", "expected an object")
    tol_kwargs = {}
    for key in ("conv_tol", "slack_tol", "separation_tol", "limit_tol", "div_bound"):
        if key in tol_raw:
            tol_kwargs[key] = _number(tol_raw[key], f"tolerances.{key}", 0.0, lo_open=True)
    unknown_tol = set(tol_raw) - set(Tolerances.__dataclass_fields__)
    if unknown_tol:
        raise ConfigError(f"tolerances.{sorted(unknown_tol)[0]}", "unknown tolerance")
    tolerances = Tolerances(**tol_kwargs)

    checks = raw.get("checks", [])
    if not isinstance(checks, list):
        raise ConfigError("checks", "expected a list of check names")
    for i, check in enumerate(checks):
        if check not in CHECK_NAMES:
            raise ConfigError(f"checks[{i}]", f"unknown check {check!r}; known: {', '.join(CHECK_NAMES)}")

    strip = raw.get("strip_search")
    strip_search = None
    if strip is not None:
        strip_search = StripSearch(
            _number(_require(strip, "K_target", "strip_search"), "strip_search.K_target", 0.0, 1.0, hi_open=True),
            _integer(_require(strip, "max_gap", "strip_search"), "strip_search.max_gap", lo=1),
            _integer(_require(strip, "horizon", "strip_search"), "strip_search.horizon", lo=1),
        )
    if "check_strip_decay" in checks and strip_search is None:
        raise ConfigError("strip_search", "required by check_strip_decay")

    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("params", "expected an object keyed by check name")
    for key, value in params.items():
        if key not in CHECK_NAMES:
            raise ConfigError(f"params.{key}", "unknown check name")
        if not isinstance(value, dict):
            raise ConfigError(f"params.{key}", "expected an object")
    _validate_params(params, dim, kind, seed, checks)

    return ScenarioConfig(
        name=str(raw.get("name", name)),
        dim=dim,
        norm_kind=kind,
        seed=seed,
        t_sequence=t_spec,
        p_sequence=p_spec,
        x0=x0,
        max_k=max_k,
        tolerances=tolerances,
        checks=tuple(c for c in CHECK_NAMES if c in checks),
        strip_search=strip_search,
        params=params,
        raw=raw,
    )


def _validate_params(params, dim, kind, seed, checks):
    cp = params.get("cluster_points", {})
    if "cluster_points" in checks:
        _integer(_require(cp, "period", "params.cluster_points"), "params.cluster_points.period", lo=1)
    ac = params.get("check_asymptotic_contractivity", {})
    if "check_asymptotic_contractivity" in checks:
        _number(_require(ac, "delta", "params.check_asymptotic_contractivity"),
                "params.check_asymptotic_contractivity.delta", 0.0, lo_open=True)
    for name in ("check_composite_substitution", "check_common_fixed_points"):
        spec = params.get(name, {})
        for i, f in enumerate(spec.get("factors", [])):
            build_operator_sequence(f, dim, kind, seed, f"params.{name}.factors[{i}]")
    lc = params.get("check_limit_continuity", {})
    if "check_limit_continuity" in checks:
        for key in ("x_limit", "x_perturbation"):
            value = lc.get(key, "random")
            if value != "random":
                _vector(value, dim, f"params.check_limit_continuity.{key}")
        _number(lc.get("x_rate", 0.8), "params.check_limit_continuity.x_rate", 0.0, 1.0, True, True)
    ci = params.get("check_compactness_inequality", {})
    for key in ("z_i", "z_j"):
        value = ci.get(key, "random")
        if value != "random":
            _vector(value, dim, f"params.check_compactness_inequality.{key}")


def load_config(path):
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError("<root>", f"invalid JSON: {exc}") from exc
    return parse_config(raw, name=path.stem)


# --------------------------------------------------------------------------
# Execution
# --------------------------------------------------------------------------


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    trace: object
    report: VerificationReport
    schedule: object = None

    @property
    def exit_code(self):
        return self.report.exit_code

    def write(self, out_dir):
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        trace_to_csv(self.trace, out_dir / "trace.csv")
        atomic_write_text(out_dir / "report.json", dumps_json(self.report.to_dict()))


def _factors_for(config, t_seq, name, rng):
    spec = config.params.get(name, {})
    if "factors" in spec:
        return [
            build_operator_sequence(f, config.dim, config.norm_kind, config.seed, f"params.{name}.factors[{i}]")
            for i, f in enumerate(spec["factors"])
        ]
    if isinstance(t_seq, Product):
        return list(t_seq.factors)
    return [t_seq]


def run_scenario(config):
    """Iterate the scenario and run its checks in canonical order."""
    kind = config.norm_kind
    tol = config.tolerances
    rng = np.random.default_rng(config.seed)
    t_seq = build_operator_sequence(config.t_sequence, config.dim, kind, config.seed)
    p_seq = build_projector_sequence(config.p_sequence, config.dim)
    x0 = rng.standard_normal(config.dim) if config.x0 == "random" else np.array(config.x0, float)
    trace = iterate(t_seq, p_seq, x0, config.max_k, tol.conv_tol, tol.div_bound, kind)

    schedule = None
    strip_failure = None
    if config.strip_search is not None:
        s = config.strip_search
        try:
            schedule = find_contractive_strips(t_seq, s.K_target, s.max_gap, s.horizon, kind)
            trace = trace.with_strip_boundaries(schedule.boundaries)
        except NoContractiveStrip as exc:
            strip_failure = exc

    report = VerificationReport(config.digest)
    for name in config.checks:
        params = config.params.get(name, {})
        if name == "check_bound_nonexpansive":
            linear = t_seq.all_linear(len(trace) - 1)
            report.add(check_bound_nonexpansive(trace, t_seq, p_seq, params.get("mu"), tol.slack_tol))
            if not linear:
                report.add(check_bound_nonexpansive_affine(trace, t_seq, p_seq, params.get("mu"), tol.slack_tol))
        elif name == "check_convergent_contractive":
            report.add(_convergent_with_restarts(config, t_seq, p_seq, trace, params, rng))
        elif name == "cluster_points":
            report.add(check_cluster_points(
                trace, t_seq, p_seq, params["period"], tol.separation_tol, tol.limit_tol,
                params.get("window", DEFAULT_WINDOW),
            ))
        elif name == "check_asymptotic_contractivity":
            if p_seq is None:
                report.add(CheckResult(name, Status.INAPPLICABLE, 0.0, details="no projector sequence"))
            else:
                report.add(check_asymptotic_contractivity(
                    p_seq, t_seq, params["delta"], params.get("horizon", 10_000), kind
                ))
        elif name in ("check_composite_substitution", "check_common_fixed_points"):
            factors = _factors_for(config, t_seq, name, rng)
            window = params.get("window", 0)
            horizon = params.get("horizon", 300)
            if name == "check_composite_substitution":
                samples = [rng.standard_normal(config.dim) for _ in range(params.get("samples", 8))]
                report.add(check_composite_substitution(
                    factors, window, samples, horizon, kind, tol.limit_tol, params.get("rate_slack", 0.02)
                ))
            else:
                report.add(check_common_fixed_points(factors, window, horizon, kind, tol.limit_tol))
        elif name == "check_limit_continuity":
            x_lim = _random_or_vector(params.get("x_limit", "random"), config.dim, name, rng)
            e = _random_or_vector(params.get("x_perturbation", "random"), config.dim, name, rng)
            report.add(check_limit_continuity(
                t_seq, x_lim, e, params.get("x_rate", 0.8), params.get("horizon", 400),
                kind, tol.slack_tol, tol.limit_tol,
            ))
        elif name == "check_compactness_inequality":
            zi = _random_or_vector(params.get("z_i", "random"), config.dim, name, rng)
            zj = _random_or_vector(params.get("z_j", "random"), config.dim, name, rng)
            report.add(check_compactness_inequality(t_seq, zi, zj, params.get("horizon", 200), kind, tol.slack_tol))
        elif name == "check_strip_decay":
            if strip_failure is not None:
                report.add(CheckResult(
                    name, Status.FAIL, strip_failure.best_norm - config.strip_search.K_target,
                    details=str(strip_failure),
                    witness=Witness(strip_failure.start, {}),
                ))
            else:
                report.add(check_strip_decay(
                    t_seq, schedule, kind, seed=config.seed, slack_tol=tol.slack_tol, limit_tol=tol.limit_tol
                ))
        elif name == "check_kernel_preimage_degeneracy":
            P = identity_projector(config.dim) if p_seq is None else p_seq[0]
            report.add(check_kernel_preimage_degeneracy(
                P, t_seq[0], params.get("samples", 16), config.seed, tol.slack_tol, kind
            ))
    return ScenarioResult(config, trace, report, schedule)


def _convergent_with_restarts(config, t_seq, p_seq, trace, params, rng):
    tol = config.tolerances
    result = check_convergent_contractive(
        trace, t_seq, p_seq, params.get("window", DEFAULT_WINDOW), tol.limit_tol,
        params.get("fixed_point_tol", 1e-6), tol.slack_tol,
    )
    restarts = params.get("restarts", 0)
    if restarts and result.status is not Status.INAPPLICABLE:
        finals = [trace.final_z]
        for _ in range(restarts):
            x0 = 10.0 * rng.standard_normal(config.dim)
            finals.append(iterate(t_seq, p_seq, x0, config.max_k, tol.conv_tol, tol.div_bound, config.norm_kind).final_z)
        spread = max(
            norm_of(a - b, config.norm_kind) for i, a in enumerate(finals) for b in finals[i + 1:]
        )
        result.measured["restart_spread"] = spread
        result.details += f"; {restarts} restarts agree to {spread:.3g}"
        if spread > tol.limit_tol:
            result.max_violation = max(result.max_violation, spread - tol.limit_tol)
            result.status = Status.FAIL
            result.witness = Witness(None, {f"z_final_{i}": z for i, z in enumerate(finals)})
    return result


# --------------------------------------------------------------------------
# Built-in demos
# --------------------------------------------------------------------------


def _rot(theta, scale=1.0):
    c, s = math.cos(theta), math.sin(theta)
    return [[scale * c, -scale * s], [scale * s, scale * c]]


DEMOS = {
    "theorem21i": {
        "name": "theorem21i",
        "dim": 2,
        "norm_kind": "L2",
        "seed": 21,
        "t_sequence": {
            "kind": "periodic",
            "operators": [
                {"matrix": _rot(0.7)},
                {"matrix": [[0.9, 0.0], [0.0, -0.9]]},
                {"matrix": _rot(-2.1)},
            ],
        },
        "p_sequence": {
            "kind": "periodic",
            "projectors": [
                {"orthogonal_range": [[1.0], [0.0]]},
                {"range_basis": [[1.0], [0.0]], "kernel_basis": [[1.0], [1.0]]},
            ],
        },
        "x0": [0.6, 0.8],
        "max_k": 1000,
        "checks": ["check_bound_nonexpansive"],
    },
    "theorem21ii": {
        "name": "theorem21ii",
        "dim": 2,
        "norm_kind": "L2",
        "seed": 22,
        "t_sequence": {
            "kind": "convergent",
            "limit": {"matrix": [[0.5, 0.0], [0.0, 0.5]], "offset": [1.0, 1.0]},
            "perturbation": {"matrix": [[0.3, 0.2], [-0.1, 0.4]], "offset": [0.0, 0.0]},
            "rate": 0.9,
        },
        "p_sequence": {"kind": "constant", "projector": {"orthogonal_range": [[1.0], [0.0]]}},
        "x0": [5.0, -3.0],
        "max_k": 100000,
        "checks": ["check_convergent_contractive"],
        "params": {"check_convergent_contractive": {"restarts": 3}},
    },
    "theorem21iii": {
        "name": "theorem21iii",
        "dim": 2,
        "norm_kind": "L2",
        "seed": 23,
        "t_sequence": {
            "kind": "periodic",
            "operators": [
                {"matrix": [[0.5, 0.0], [0.0, 0.5]], "offset": [1.0, 0.0]},
                {"matrix": [[0.5, 0.0], [0.0, 0.5]], "offset": [0.0, 1.0]},
            ],
        },
        "x0": [0.0, 0.0],
        "max_k": 400,
        "checks": ["cluster_points"],
        "params": {"cluster_points": {"period": 2}},
    },
    "remark22": {
        "name": "remark22",
        "dim": 2,
        "norm_kind": "L2",
        "seed": 24,
        "t_sequence": {"kind": "constant", "operator": {"matrix": [[1.0, 0.0], [0.0, 1.0]]}},
        "p_sequence": {
            "kind": "constant",
            "projector": {"range_basis": [[1.0], [0.0]], "kernel_basis": [[1.0], [1.0]]},
        },
        "x0": [1.0, 2.0],
        "max_k": 50,
        "checks": ["check_kernel_preimage_degeneracy"],
    },
    "lemma23": {
        "name": "lemma23",
        "dim": 2,
        "norm_kind": "L2",
        "seed": 25,
        "t_sequence": {
            "kind": "convergent",
            "limit": {"matrix": _rot(0.4, 0.5)},
            "perturbation": {"matrix": [[0.8, -0.3], [0.2, 0.6]]},
            "rate": 0.95,
        },
        "p_sequence": {
            "kind": "convergent",
            "range_basis": [[1.0], [0.0]],
            "kernel_basis": [[1.0], [1.0]],
            "range_perturbation": [[0.0], [0.5]],
            "kernel_perturbation": [[0.4], [0.3]],
            "rate": 0.95,
        },
        "x0": [1.0, -1.0],
        "max_k": 200,
        "checks": ["check_asymptotic_contractivity"],
        "params": {"check_asymptotic_contractivity": {"delta": 0.1, "horizon": 2000}},
    },
    "lemma31": {
        "name": "lemma31",
        "dim": 2,
        "norm_kind": "L2",
        "seed": 31,
        "t_sequence": {
            "kind": "product",
            "factors": [
                {
                    "kind": "convergent",
                    "limit": {"matrix": _rot(0.3, 0.8), "offset": [1.0, 0.0]},
                    "perturbation": {"matrix": [[0.5, 0.1], [0.0, -0.4]], "offset": [0.2, 0.3]},
                    "rate": 0.9,
                },
                {"kind": "constant", "operator": {"matrix": [[0.6, 0.2], [0.1, 0.5]], "offset": [0.0, 1.0]}},
                {
                    "kind": "periodic",
                    "operators": [
                        {"matrix": [[1.0, 0.0], [0.0, 1.0]]},
                        {"matrix": _rot(0.5), "offset": [0.5, -0.5]},
                    ],
                },
            ],
        },
        "x0": [1.0, 1.0],
        "max_k": 300,
        "checks": ["check_composite_substitution", "check_common_fixed_points"],
        "params": {
            "check_composite_substitution": {"window": 1, "samples": 8, "horizon": 300},
            "check_common_fixed_points": {
                "window": 1,
                "horizon": 300,
                "factors": [
                    {
                        "kind": "convergent",
                        "limit": {"matrix": _rot(0.3, 0.8), "offset": [1.0, 0.0]},
                        "perturbation": {"matrix": [[0.5, 0.1], [0.0, -0.4]], "offset": [0.2, 0.3]},
                        "rate": 0.9,
                    },
                    {"kind": "constant", "operator": {"matrix": [[0.6, 0.2], [0.1, 0.5]], "offset": [0.0, 1.0]}},
                ],
            },
        },
    },
    "lemma33": {
        "name": "lemma33",
        "dim": 3,
        "norm_kind": "L2",
        "seed": 33,
        "t_sequence": {
            "kind": "convergent",
            "limit": {"matrix": [[0.7, 0.1, 0.0], [0.0, 0.4, 0.3], [0.2, 0.0, 0.5]]},
            "perturbation": {"matrix": [[0.3, -0.2, 0.1], [0.0, 0.5, 0.0], [0.1, 0.1, -0.4]]},
            "rate": 0.9,
        },
        "x0": [1.0, 0.0, -1.0],
        "max_k": 200,
        "checks": ["check_limit_continuity"],
        "params": {
            "check_limit_continuity": {
                "x_limit": [1.0, 2.0, -1.0],
                "x_perturbation": [0.5, -0.5, 1.0],
                "x_rate": 0.8,
                "horizon": 400,
            }
        },
    },
    "lemma34": {
        "name": "lemma34",
        "dim": 3,
        "norm_kind": "L2",
        "seed": 34,
        "t_sequence": {
            "kind": "convergent",
            "limit": {"matrix": [[0.2, 1.0, 0.0], [0.0, 0.3, -0.5], [0.4, 0.0, 0.1]], "offset": [1.0, 0.0, 0.0]},
            "perturbation": {"matrix": [[0.5, 0.0, 0.3], [-0.2, 0.4, 0.0], [0.0, 0.1, 0.6]], "offset": [0.0, 1.0, 0.0]},
            "rate": 0.85,
        },
        "x0": [0.0, 0.0, 0.0],
        "max_k": 200,
        "checks": ["check_compactness_inequality"],
        "params": {"check_compactness_inequality": {"z_i": "random", "z_j": "random", "horizon": 200}},
    },
    "theorem35": {
        "name": "theorem35",
        "dim": 2,
        "norm_kind": "L2",
        "seed": 35,
        "t_sequence": {
            "kind": "periodic",
            "operators": [
                {"matrix": _rot(0.4, 1.2), "offset": [1.0, 0.0]},
                {"matrix": _rot(1.1, 0.5), "offset": [0.0, 1.0]},
            ],
        },
        "x0": [3.0, -2.0],
        "max_k": 200,
        "strip_search": {"K_target": 0.9, "max_gap": 4, "horizon": 200},
        "checks": ["check_strip_decay"],
    },
}


def demo_config(name):
    if name not in DEMOS:
        raise KeyError(name)
    return json.loads(json.dumps(DEMOS[name]))
