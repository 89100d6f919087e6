"""Occupancy map of a (2,3) chain on a staircase hexagon; writes PGM and JSON summary."""
import argparse
import json
import time

from tileflip.experiments import limit_shape_summary, occupancy_map
from tileflip.mcmc import ChainConfig
from tileflip.region import staircase_hexagon
from tileflip.render import occupancy_pgm
from tileflip.tiling import all_small


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=50)
    ap.add_argument("--tiles", default="2,3")
    ap.add_argument("--burn-in", type=int, default=5_000_000)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--thinning", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--pgm", default="limit_shape.pgm")
    ap.add_argument("--json", default="limit_shape.json")
    args = ap.parse_args()

    m, s = map(int, args.tiles.split(","))
    region = staircase_hexagon(args.size, m, s)
    t0 = time.time()
    om = occupancy_map(all_small(region, m, s), ChainConfig("uniform", 1.0, args.seed),
                       args.burn_in, args.samples, args.thinning)
    summary = limit_shape_summary(om, region)
    with open(args.pgm, "wb") as fh:
        fh.write(occupancy_pgm(om.fractions, om.mask))
    doc = {"summary": summary.__dict__, "map": om.to_json(), "seconds": round(time.time() - t0, 1)}
    with open(args.json, "w") as fh:
        json.dump(doc, fh)
    print(json.dumps(summary.__dict__, indent=1))


if __name__ == "__main__":
    main()
