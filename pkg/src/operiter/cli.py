"""Command-line interface: ``run``, ``demo``, ``batch`` and ``export-demos``."""

import argparse
import json
import os
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import ConfigError, OperiterError
from .io import atomic_write_text, dumps_json
from .scenarios import DEMOS, demo_config, load_config, parse_config, run_scenario

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def default_out():
    return Path(os.environ.get("OPERITER_OUT", "out"))


def _execute(config, out_dir):
    """Run a parsed config and write its outputs; returns ``(code, statuses)``."""
    result = run_scenario(config)
    result.write(out_dir)
    statuses = {e.check_name: e.status.value for e in result.report.entries}
    return result.exit_code, statuses


def run_path(config_path, out_dir):
    """Load, run and write one scenario. Never raises; returns a summary entry."""
    entry = {"scenario": Path(config_path).stem, "exit_code": EXIT_ERROR, "checks": {}, "error": None}
    try:
        config = load_config(config_path)
        entry["exit_code"], entry["checks"] = _execute(config, out_dir)
    except ConfigError as exc:
        entry["error"] = f"invalid config: {exc}"
    except (OperiterError, ValueError, OSError) as exc:
        entry["error"] = f"{type(exc).__name__}: {exc}"
    except Exception as exc:  # isolation: an unexpected crash marks only this scenario
        entry["error"] = "".join(traceback.format_exception_only(type(exc), exc)).strip()
    return entry


def _report(entry, out_dir):
    if entry["error"]:
        print(f"error: {entry['error']}", file=sys.stderr)
    else:
        for name, status in entry["checks"].items():
            print(f"{name}: {status}")
        print(f"wrote {out_dir / 'trace.csv'} and {out_dir / 'report.json'}")
    return entry["exit_code"]


def cmd_run(args):
    out_dir = Path(args.out) if args.out else default_out()
    return _report(run_path(args.config, out_dir), out_dir)


def cmd_demo(args):
    if args.name not in DEMOS:
        print(f"error: unknown demo {args.name!r}; available: {', '.join(DEMOS)}", file=sys.stderr)
        return EXIT_ERROR
    out_dir = Path(args.out) if args.out else default_out() / args.name
    entry = {"scenario": args.name, "exit_code": EXIT_ERROR, "checks": {}, "error": None}
    try:
        config = parse_config(demo_config(args.name), name=args.name)
        entry["exit_code"], entry["checks"] = _execute(config, out_dir)
    except (OperiterError, ValueError, OSError) as exc:
        entry["error"] = f"{type(exc).__name__}: {exc}"
    return _report(entry, out_dir)


def _batch_job(job):
    path, out_dir = job
    return run_path(path, out_dir)


def run_batch(config_dir, out_root, jobs=1):
    """Run every ``*.json`` in ``config_dir``; returns ``(exit_code, summary)``.

    Each scenario writes to ``out_root/<stem>/``. The summary lists
    scenarios in sorted file order and contains no timestamps, so repeated
    runs are byte-identical.
    """
    config_dir = Path(config_dir)
    if not config_dir.is_dir():
        raise ConfigError("config_dir", f"{config_dir} is not a directory")
    paths = sorted(config_dir.glob("*.json"))
    if not paths:
        raise ConfigError("config_dir", f"no *.json scenarios in {config_dir}")
    out_root = Path(out_root)
    work = [(str(p), str(out_root / p.stem)) for p in paths]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_batch_job, work))
    else:
        entries = [_batch_job(job) for job in work]
    code = max(e["exit_code"] for e in entries)
    summary = {"exit_code": code, "scenarios": entries}
    atomic_write_text(out_root / "summary.json", dumps_json(summary))
    return code, summary


def cmd_batch(args):
    out_root = Path(args.out) if args.out else default_out()
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        code, summary = run_batch(args.config_dir, out_root, args.jobs)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for e in summary["scenarios"]:
        line = f"{e['scenario']}: exit {e['exit_code']}"
        if e["error"]:
            line += f" ({e['error']})"
        print(line)
    print(f"wrote {out_root / 'summary.json'}")
    return code


def cmd_export_demos(args):
    target = Path(args.dir)
    for name in DEMOS:
        atomic_write_text(target / f"{name}.json", json.dumps(demo_config(name), indent=2) + "\n")
    print(f"wrote {len(DEMOS)} demo configs to {target}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="operiter",
        description="Run projected fixed-point iterations and verify their convergence bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario config")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (default: $OPERITER_OUT or ./out)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("demo", help="run a built-in scenario")
    p.add_argument("name", help=", ".join(DEMOS))
    p.add_argument("--out", help="output directory (default: $OPERITER_OUT/<name>)")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("batch", help="run every *.json scenario in a directory")
    p.add_argument("config_dir")
    p.add_argument("--out", help="output root (default: $OPERITER_OUT or ./out)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("export-demos", help="write the built-in scenarios as JSON configs")
    p.add_argument("dir")
    p.set_defaults(func=cmd_export_demos)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
