"""Reproduce both violation-ratio tables and print them next to the printed values.

    python scripts/reproduce_tables.py            # default resolution, tens of minutes
    python scripts/reproduce_tables.py --grid-n 61  # fast mode
"""

import argparse
import time

from steerlab.criteria import Resolution, reproduce_table

PRINTED = {
    "psub": {0.0: (0.444, 1.044, 1.155), 0.1: (0.458, 1.053, 1.161), 0.2: (0.501, 1.061, 1.225),
             0.3: (0.581, 1.093, 1.318), 0.4: (0.707, 1.124, 1.457), 0.5: (0.909, 1.192, 1.648),
             0.6: (1.204, 1.264, 1.901)},
    "lg": {0: (1.0, 1.0, 1.0), 1: (0.4444, 1.0438, 1.1560), 2: (0.3599, 1.0567, 1.3243),
           3: (0.3265, 1.0626, 1.5080), 4: (0.3086, 1.0657, 1.6719), 5: (0.2975, 1.0676, 1.8115)},
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid-n", type=int)
    ap.add_argument("--which", choices=("psub", "lg"), nargs="*", default=["psub", "lg"])
    args = ap.parse_args()
    res = Resolution(grid_n=args.grid_n)
    for which in args.which:
        t0 = time.perf_counter()
        rows = reproduce_table(which, res)
        print(f"\n{which} table ({time.perf_counter() - t0:.0f}s)")
        print(f"{'param':>6} {'reid':>16} {'entropic':>16} {'sum':>16}   worst dev")
        for row in rows:
            ref = PRINTED[which][row.param]
            got = (row.reid, row.entropic, row.sum)
            dev = max(abs(g - w) / w for g, w in zip(got, ref))
            cells = " ".join(f"{g:7.4f} ({w:6.4f})" for g, w in zip(got, ref))
            print(f"{row.param:>6} {cells}   {dev:.2%}")


if __name__ == "__main__":
    main()
