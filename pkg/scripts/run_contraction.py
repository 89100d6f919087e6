"""Exact one-step drift of the weighted (1,s) chain at and above the contraction threshold."""
import argparse
from fractions import Fraction

from tileflip.experiments import contraction_check
from tileflip.region import rectangle


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", default="6:2,9:3", help="comma list of n:s")
    ap.add_argument("--scale", type=Fraction, default=Fraction(10), help="multiplier for the power check")
    args = ap.parse_args()
    for case in args.cases.split(","):
        n, s = map(int, case.split(":"))
        threshold = Fraction(1, (2 * s - 1) ** 2 - 2)
        for lam in (threshold, threshold * args.scale):
            rep = contraction_check(rectangle(n, n), s, lam)
            print(f"rect {n}x{n} s={s} lambda={lam}: max drift {rep.max_drift} "
                  f"(bad-site bound {rep.bound}), {rep.pairs} pairs, max bad sites {rep.max_bad_sites}")


if __name__ == "__main__":
    main()
