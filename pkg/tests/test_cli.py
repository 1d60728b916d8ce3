import json
import subprocess
import sys

import numpy as np
import pytest

from operiter import ConfigError
from operiter.cli import main, run_batch
from operiter.scenarios import CHECK_NAMES, DEMOS, demo_config, parse_config, run_scenario
from operiter.verify import REFERENCES


def base_config(**overrides):
    cfg = {
        "dim": 2,
        "t_sequence": {"kind": "constant", "operator": {"matrix": [[0.5, 0.0], [0.0, 0.5]], "offset": [1.0, 1.0]}},
        "x0": [0.0, 0.0],
        "max_k": 200,
        "checks": ["check_convergent_contractive"],
    }
    cfg.update(overrides)
    return cfg


def write(tmp_path, name, cfg):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(cfg))
    return path


@pytest.mark.parametrize("name", list(DEMOS))
def test_every_demo_passes(name, tmp_path):
    assert main(["demo", name, "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["entries"]
    for entry in report["entries"]:
        assert entry["status"] in ("Pass", "Inapplicable")
        assert entry["paper_ref"] == REFERENCES[entry["check_name"]]
    header = (tmp_path / "trace.csv").read_text().splitlines()[0]
    assert header.startswith("k,x_0")


def test_demo_convergent_limit(tmp_path):
    result = run_scenario(parse_config(demo_config("theorem21ii")))
    entry = result.report.entry("check_convergent_contractive")
    assert entry.status.value == "Pass"
    np.testing.assert_allclose(result.trace.final_z, [2.0, 0.0], atol=1e-8)


def test_demo_nonexpansive_positive_slack():
    result = run_scenario(parse_config(demo_config("theorem21i")))
    entry = result.report.entry("check_bound_nonexpansive")
    assert entry.measured["min_slack"] > 0
    x0_norm = np.linalg.norm(result.trace.x0)
    assert entry.measured["bound"] == pytest.approx(4 * np.sqrt(2.0) * x0_norm)


def test_unknown_demo_exit_2(capsys):
    assert main(["demo", "nope"]) == 2
    err = capsys.readouterr().err
    assert "theorem35" in err


@pytest.mark.parametrize(
    "overrides, field",
    [
        ({"x0": [1.0, 2.0, 3.0]}, "x0"),
        ({"strip_search": {"K_target": 1.0, "max_gap": 2, "horizon": 10}}, "strip_search.K_target"),
        ({"checks": ["no_such_check"]}, "checks[0]"),
        ({"x0": "random"}, "seed"),
        ({"norm_kind": "L7"}, "norm_kind"),
        ({"t_sequence": {"kind": "constant", "operator": {"matrix": [[1.0]]}}}, "t_sequence.operator.matrix"),
        ({"p_sequence": {"kind": "constant", "projector": {"range_basis": [[1.0], [1.0]], "kernel_basis": [[2.0], [2.0]]}}},
         "p_sequence.projector"),
        ({"t_sequence": {"kind": "bogus"}}, "t_sequence.kind"),
    ],
)
def test_validation_names_field(tmp_path, capsys, overrides, field):
    path = write(tmp_path, "bad", base_config(**overrides))
    with pytest.raises(ConfigError) as info:
        parse_config(json.loads(path.read_text()))
    assert info.value.field == field
    assert main(["run", str(path), "--out", str(tmp_path / "out")]) == 2
    assert field in capsys.readouterr().err


def test_run_writes_outputs_and_exit_codes(tmp_path):
    path = write(tmp_path, "ok", base_config())
    assert main(["run", str(path), "--out", str(tmp_path / "ok")]) == 0
    assert (tmp_path / "ok" / "trace.csv").exists()
    # period-2 scenario checked as if it converged: a genuine Fail
    cfg = base_config(
        t_sequence={
            "kind": "periodic",
            "operators": [
                {"matrix": [[0.5, 0.0], [0.0, 0.5]], "offset": [1.0, 0.0]},
                {"matrix": [[0.5, 0.0], [0.0, 0.5]], "offset": [0.0, 1.0]},
            ],
        },
        checks=["cluster_points"],
        params={"cluster_points": {"period": 1}},
    )
    path = write(tmp_path, "fail", cfg)
    assert main(["run", str(path), "--out", str(tmp_path / "fail")]) == 1
    report = json.loads((tmp_path / "fail" / "report.json").read_text())
    assert report["entries"][0]["status"] == "Fail"
    assert "witness" in report["entries"][0]


def test_env_var_default_output(tmp_path, monkeypatch):
    monkeypatch.setenv("OPERITER_OUT", str(tmp_path / "envout"))
    path = write(tmp_path, "ok", base_config())
    assert main(["run", str(path)]) == 0
    assert (tmp_path / "envout" / "report.json").exists()


def test_checks_run_in_canonical_order():
    cfg = base_config(checks=["check_kernel_preimage_degeneracy", "check_convergent_contractive"])
    config = parse_config(cfg)
    assert config.checks == tuple(c for c in CHECK_NAMES if c in cfg["checks"])


def test_digest_depends_on_content():
    a = parse_config(base_config())
    b = parse_config(base_config(max_k=201))
    assert a.digest != b.digest
    assert a.digest == parse_config(base_config()).digest


def test_no_contractive_strip_becomes_fail(tmp_path):
    cfg = base_config(
        t_sequence={"kind": "constant", "operator": {"matrix": [[1.5, 0.0], [0.0, 1.5]]}},
        x0=[1.0, 0.0],
        max_k=5,
        strip_search={"K_target": 0.9, "max_gap": 3, "horizon": 10},
        checks=["check_strip_decay"],
    )
    result = run_scenario(parse_config(cfg))
    entry = result.report.entry("check_strip_decay")
    assert entry.status.value == "Fail"
    assert entry.max_violation == pytest.approx(1.5 - 0.9)


def test_batch_isolation_and_determinism(tmp_path):
    configs = tmp_path / "configs"
    assert main(["export-demos", str(configs)]) == 0
    (configs / "zz_broken.json").write_text("{not json")
    code, summary = run_batch(configs, tmp_path / "a", jobs=2)
    assert code == 2
    by_name = {e["scenario"]: e for e in summary["scenarios"]}
    assert by_name["zz_broken"]["exit_code"] == 2
    assert all(by_name[name]["exit_code"] == 0 for name in DEMOS)
    run_batch(configs, tmp_path / "b", jobs=1)
    for rel in ["summary.json"] + [f"{n}/{f}" for n in DEMOS for f in ("trace.csv", "report.json")]:
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes(), rel


def test_batch_empty_dir(tmp_path):
    (tmp_path / "empty").mkdir()
    assert main(["batch", str(tmp_path / "empty"), "--out", str(tmp_path / "o")]) == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "operiter", "demo", "theorem21iii", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "cluster_points: Pass" in proc.stdout
