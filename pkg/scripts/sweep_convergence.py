"""Iterations to convergence as a function of the limit norm K and decay rate rho.

For each (K, rho) cell, several seeded Convergent sequences with a random
oblique projector are iterated until ``d_x < conv_tol``; the script records
the median step count, the worst distance to ``P x*`` and the worst slack of
the convergence majorant, and writes everything to a CSV.

    python scripts/sweep_convergence.py --out out/sweep.csv --seeds 8
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from operiter import Constant, iterate
from operiter.generators import random_convergent
from operiter.io import format_float
from operiter.projectors import random_oblique_projector
from operiter.verify import check_convergent_contractive, fixed_point_direct


def run_cell(K, rho, seeds, dim):
    steps, errors, majorant = [], [], []
    for seed in range(seeds):
        rng = np.random.default_rng([seed, int(K * 1000), int(rho * 1000)])
        t_seq = random_convergent(rng, dim, K, rho)
        P = random_oblique_projector(rng, dim, int(rng.integers(1, dim + 1)))
        trace = iterate(t_seq, Constant(P), 10 * rng.standard_normal(dim), max_k=100_000)
        result = check_convergent_contractive(trace, t_seq, Constant(P))
        steps.append(len(trace) - 1)
        errors.append(np.linalg.norm(trace.final_z - P.matrix @ fixed_point_direct(t_seq.limit)))
        if result.measured.get("majorant_max_violation") is not None:
            majorant.append(result.measured["majorant_max_violation"])
    return int(np.median(steps)), max(errors), max(majorant) if majorant else float("nan")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out/sweep.csv")
    parser.add_argument("--seeds", type=int, default=8)
    parser.add_argument("--dim", type=int, default=4)
    args = parser.parse_args()

    Ks = (0.3, 0.5, 0.7, 0.9)
    rhos = (0.5, 0.8, 0.9, 0.95)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["K", "rho", "median_steps", "max_limit_error", "max_majorant_violation"])
        for K in Ks:
            for rho in rhos:
                median, err, maj = run_cell(K, rho, args.seeds, args.dim)
                writer.writerow([K, rho, median, format_float(err), format_float(maj)])
                print(f"K={K:.2f} rho={rho:.2f}  median steps={median:6d}  max |z_N - P x*|={err:.2e}"
                      f"  worst majorant violation={maj:.2e}")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
