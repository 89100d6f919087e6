"""Exhaustive flip graphs: counts, connectivity, diameter and exact stationarity."""
import argparse

from tileflip.region import parse_region
from tileflip.smallgraph import build_flip_graph, descent_fixpoints, enumerate_tilings, graph_stats, stationary_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", default="rect:4x4/1,2;rect:6x6/1,3;rect:8x8/2,3",
                    help="semicolon list of region/m,s")
    args = ap.parse_args()
    for case in args.cases.split(";"):
        spec, tiles = case.split("/")
        m, s = map(int, tiles.split(","))
        tilings = enumerate_tilings(parse_region(spec), m, s)
        g = build_flip_graph(tilings)
        stats = graph_stats(g)
        rep = stationary_check(g)
        fix = len(descent_fixpoints(tilings)) if not parse_region(spec).is_torus else "n/a"
        print(f"{spec} ({m},{s}): {stats} residual={rep.residual} symmetric={rep.symmetric} fixpoints={fix}")


if __name__ == "__main__":
    main()
