"""Write two-column plot data for the steering-ratio figures.

One file per (family, criterion) in the output directory, each line
``parameter violation_ratio``. Moment-based curves use closed forms;
entropic curves for the non-Gaussian families need quadrature and are opt-in.
"""

import argparse
from pathlib import Path

import numpy as np

from steerlab.cli import write_plot_data
from steerlab.criteria import Resolution, sweep

CURVES = [
    ("werner", np.round(np.linspace(0, 1, 101), 2), ["sum", "entropic", "chsh"]),
    ("tmsv", np.round(np.linspace(0.05, 1.0, 20), 2), ["reid", "entropic", "sum"]),
    ("psub", np.round(np.linspace(0.0, 0.6, 13), 2), ["reid", "sum"]),
    ("lg", list(range(8)), ["reid", "sum"]),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out", nargs="?", default="figure_data")
    ap.add_argument("--with-entropy", action="store_true",
                    help="add entropic curves for psub and lg (slow, quadrature)")
    ap.add_argument("--grid-n", type=int)
    args = ap.parse_args()
    res = Resolution(grid_n=args.grid_n)
    for family, params, crits in CURVES:
        if args.with_entropy and family in ("psub", "lg"):
            crits = crits + ["entropic"]
        rows = sweep(family, [float(p) if family != "lg" else int(p) for p in params], crits,
                     fixed={"m": 0} if family == "lg" else None, resolution=res)
        write_plot_data(rows, family, crits, Path(args.out))
        print(f"{family}: {len(rows)} points -> {args.out}/")


if __name__ == "__main__":
    main()
