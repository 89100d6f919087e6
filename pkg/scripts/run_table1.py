"""Coupling-time table for (1,s) tilings of n x n squares, compared with the reference values."""
import argparse
import sys

from tileflip.experiments import REFERENCE_COUPLING, coupling_time_table, rows_to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cells", default="10:2,12:3,14:4,10:5", help="comma list of n:s")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed-base", type=int, default=42)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("-o", "--output", help="CSV path (stdout if omitted)")
    args = ap.parse_args()

    rows = []
    for cell in args.cells.split(","):
        n, s = map(int, cell.split(":"))
        row = coupling_time_table([n], [s], args.trials, args.seed_base, workers=args.workers)[0]
        ref = REFERENCE_COUPLING.get((n, s))
        note = f"  reference {ref:.0f}, ratio {row['mean'] / ref:.2f}" if ref else ""
        print(f"n={n} s={s} mean={row['mean']:.0f} se={row['stderr']:.0f}{note}", file=sys.stderr)
        rows.append(row)
    text = rows_to_csv(rows)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
