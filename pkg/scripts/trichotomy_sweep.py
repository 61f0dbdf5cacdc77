"""lambda1 and solution size across eps, to locate the trivial/nontrivial switch.

    python3 scripts/trichotomy_sweep.py --out runs/trichotomy
"""
import argparse
import math
from pathlib import Path

import numpy as np

from gljunction import reports
from gljunction.assembly import RadialProblem
from gljunction.eigen import lambda1
from gljunction.geometry import DiskInDisk
from gljunction.params import Params
from gljunction.solver import solve


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--m", type=float, default=1.0)
    ap.add_argument("--r1", type=float, default=1.0)
    ap.add_argument("--r2", type=float, default=2.0)
    ap.add_argument("--eps-min", type=float, default=0.3)
    ap.add_argument("--eps-max", type=float, default=2.0)
    ap.add_argument("--count", type=int, default=35)
    ap.add_argument("--n", type=int, default=800)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("runs/trichotomy"))
    args = ap.parse_args(argv)

    g = DiskInDisk(args.r1, args.r2)
    eps_values = np.geomspace(args.eps_min, args.eps_max, args.count)
    rows = []
    for eps in eps_values:
        prob = RadialProblem(Params(args.a, args.m, eps), g, args.n)
        lam = lambda1(prob).lambda1
        u, rep = solve(prob, f"random:{args.seed}")
        bound = math.pi * args.r1**2 / (2 * eps**2)
        rows.append((eps, lam, rep.sup_norm, rep.energy, bound, rep.converged))
        print(f"eps={eps:.4f} lambda1={lam:+.5f} sup={rep.sup_norm:.3e} G0={rep.energy:.5g} (< {bound:.5g})")
    reports.write_csv(args.out / "trichotomy.csv",
                      ["eps", "lambda1", "sup_norm", "energy", "normal_state_energy", "converged"],
                      list(zip(*rows)))
    lam = np.array([r[1] for r in rows])
    switch = np.flatnonzero(np.diff(np.sign(lam)) != 0)
    for i in switch:
        print(f"lambda1 changes sign between eps={eps_values[i]:.4f} and {eps_values[i + 1]:.4f}")


if __name__ == "__main__":
    main()
