"""Run every built-in scenario and print one line per check.

    python scripts/run_demos.py --out out/demos
"""

import argparse
import time
from pathlib import Path

from operiter.scenarios import DEMOS, demo_config, parse_config, run_scenario


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out/demos")
    args = parser.parse_args()

    worst = 0
    for name in DEMOS:
        start = time.perf_counter()
        result = run_scenario(parse_config(demo_config(name), name=name))
        result.write(Path(args.out) / name)
        elapsed = time.perf_counter() - start
        worst = max(worst, result.exit_code)
        for entry in result.report.entries:
            print(f"{name:14s} {entry.check_name:36s} {entry.status.value:12s}"
                  f" max_violation={entry.max_violation: .3e}  ({elapsed:.2f}s)")
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
