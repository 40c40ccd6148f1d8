"""Steering thresholds of the two-qubit Werner family for the three criteria."""

import math

from steerlab import discrete


def main():
    print(f"sum criterion       p* = {discrete.sum_threshold():.9f}  (1/sqrt 2 = {1 / math.sqrt(2):.9f})")
    print(f"  from density matrix   {discrete.sum_threshold('numeric'):.9f}")
    print(f"entropic criterion  p* = {discrete.entropic_threshold():.6f}")
    print(f"  from density matrix   {discrete.entropic_threshold('numeric'):.6f}")
    print(f"CHSH-type functional p* = {discrete.chsh_threshold():.9f}")
    for p in (0.5, 0.75, 0.9, 1.0):
        value, a1, a2 = discrete.optimal_chsh(discrete.werner(p))
        print(f"  p={p:4}: max S = {value:.6f}  (2*sqrt(2)*p = {2 * math.sqrt(2) * p:.6f})")


if __name__ == "__main__":
    main()
