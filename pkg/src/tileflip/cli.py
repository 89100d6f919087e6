"""Command-line entry point: ``tileflip <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import cayley
from .experiments import coupling_time_table, coupling_trials, contraction_check, rows_to_csv, trial_seed
from .indsets import compare_with_tiling_chain
from .mcmc import ChainConfig, ChainState, grand_coupling, run
from .region import parse_region
from .render import RenderOptions, render_svg
from .smallgraph import build_flip_graph, enumerate_tilings, graph_stats, stationary_check
from .tiling import Tiling, all_small, greedy_big, load_tiling


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _tiles(text: str) -> tuple[int, int]:
    try:
        m, s = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected m,s such as 1,2") from None
    if not 1 <= m < s:
        raise argparse.ArgumentTypeError("need 1 <= m < s")
    return m, s


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _int_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in text.split(",")]


def _region(text: str):
    try:
        return parse_region(text)
    except (ValueError, OSError) as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _initial(args, region, m, s) -> Tiling:
    if args.init == "small":
        return all_small(region, m, s)
    if args.init == "big":
        return greedy_big(region, m, s)
    t = load_tiling(args.init, m, s)
    if t.region != region:
        raise ValueError("initial tiling does not match --region")
    return t


def cmd_sample(args) -> int:
    m, s = args.tiles
    cfg = ChainConfig(args.chain, float(args.lam), args.seed)
    t = _initial(args, args.region, m, s)
    st = ChainState.start(t, cfg)

    def snap(state):
        print(json.dumps({"step": state.step_count, "big": state.board.n_big, "small": state.board.n_small}))

    run(st, args.steps, snap if args.snapshot_every else None, args.snapshot_every or 0)
    final = st.tiling
    doc = final.to_json()
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
    print(json.dumps({"steps": st.step_count, "big": final.count(s), "small": final.count(m)}))
    return 0


def cmd_couple(args) -> int:
    m, s = args.tiles
    if m != 1:
        raise ValueError("couple starts from greedy_big and all_small, which needs m = 1")
    region = args.region
    a0, b0 = greedy_big(region, m, s), all_small(region, m, s)
    print("trial,seed,coupled,steps")
    for i in range(args.trials):
        seed = trial_seed(args.seed_base, i)
        res = grand_coupling(ChainConfig(args.chain, float(args.lam), seed), a0, b0, args.max_steps)
        print(f"{i},{seed},{int(res.coupled)},{res.steps}")
    return 0


def cmd_table1(args) -> int:
    rows = coupling_time_table(args.n, args.s, args.trials, args.seed_base, args.max_steps, args.workers)
    sys.stdout.write(rows_to_csv(rows))
    return 0


def cmd_enumerate(args) -> int:
    m, s = args.tiles
    tilings = enumerate_tilings(args.region, m, s, args.budget)
    g = build_flip_graph(tilings, args.chain, args.lam)
    stats = graph_stats(g)
    rep = stationary_check(g)
    stats.update(residual=str(rep.residual), symmetric=rep.symmetric)
    print(json.dumps(stats, sort_keys=True))
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(g.to_json(with_matrix=args.matrix), fh)
    return 0


def cmd_height(args) -> int:
    t = load_tiling(args.tiling, *(args.tiles or (None, None)))
    field = cayley.vertex_heights(t)
    out = {"total_height": cayley.total_height(t, field), "potential": cayley.potential(t)}
    if args.json:
        out["heights"] = field.to_json()
    print(json.dumps(out))
    return 0


def cmd_render(args) -> int:
    t = load_tiling(args.tiling, *(args.tiles or (None, None)))
    svg = render_svg(t, RenderOptions(args.cell, args.overlay))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return 0


def cmd_indset_check(args) -> int:
    diff = compare_with_tiling_chain(args.n, args.lam)
    print(f"max_abs_diff {diff} ({float(diff):.3g})")
    return 0


def cmd_contraction(args) -> int:
    rep = contraction_check(args.region, args.s, args.lam)
    print(json.dumps({
        "s": rep.s, "lambda": str(rep.lam), "pairs": rep.pairs, "sites": rep.n_sites,
        "max_drift": str(rep.max_drift), "max_bad_sites": rep.max_bad_sites,
        "bad_site_bound_drift": str(rep.bound), "contracting": rep.contracting,
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tileflip", description="Flip chains on tilings by two sizes of squares.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def region_arg(q, required=True):
        q.add_argument("--region", type=_region, required=required,
                       help="rect:WxH, torus:N, stairhex:SIZE,M,S or a region JSON file")

    q = sub.add_parser("sample", help="run one chain and write the final tiling")
    region_arg(q)
    q.add_argument("--tiles", type=_tiles, required=True, help="m,s")
    q.add_argument("--chain", default="uniform", choices=["uniform", "w12", "w1s"])
    q.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1))
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--steps", type=int, required=True)
    q.add_argument("--snapshot-every", type=int, default=0, help="print big/small counts every N steps")
    q.add_argument("--init", default="small", help="small, big or a tiling JSON file")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_sample)

    q = sub.add_parser("couple", help="grand coupling from greedy_big and all_small; CSV per trial")
    region_arg(q)
    q.add_argument("--tiles", type=_tiles, required=True)
    q.add_argument("--chain", default="uniform", choices=["uniform", "w12", "w1s"])
    q.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1))
    q.add_argument("--trials", type=int, default=1)
    q.add_argument("--seed-base", type=int, default=0)
    q.add_argument("--max-steps", type=int, default=10**9)
    q.set_defaults(func=cmd_couple)

    q = sub.add_parser("table1", help="coupling-time table as CSV")
    q.add_argument("--n", type=_int_range, required=True, help="e.g. 10..16 or 10,12")
    q.add_argument("--s", type=_int_range, required=True)
    q.add_argument("--trials", type=int, default=100)
    q.add_argument("--seed-base", type=int, default=42)
    q.add_argument("--max-steps", type=int, default=10**9)
    q.add_argument("--workers", type=int, default=None, help="defaults to TILEFLIP_THREADS or the CPU count")
    q.set_defaults(func=cmd_table1)

    q = sub.add_parser("enumerate", help="exhaustive tiling graph with exact checks")
    region_arg(q)
    q.add_argument("--tiles", type=_tiles, required=True)
    q.add_argument("--chain", default="uniform", choices=["uniform", "weighted_1_2", "weighted_1_s"])
    q.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1))
    q.add_argument("--budget", type=int, default=10**6)
    q.add_argument("--emit", help="write graph JSON here")
    q.add_argument("--matrix", action="store_true", help="include the transition matrix in --emit")
    q.set_defaults(func=cmd_enumerate)

    q = sub.add_parser("height", help="total height and potential of a tiling")
    q.add_argument("--tiling", required=True)
    q.add_argument("--tiles", type=_tiles, help="needed only for bare tile lists")
    q.add_argument("--json", action="store_true", help="also print every vertex height")
    q.set_defaults(func=cmd_height)

    q = sub.add_parser("render", help="SVG of a tiling")
    q.add_argument("--tiling", required=True)
    q.add_argument("--tiles", type=_tiles)
    q.add_argument("--overlay", default="none", choices=["none", "heights", "anchors"])
    q.add_argument("--cell", type=int, default=12, help="pixels per cell (default 12)")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_render)

    q = sub.add_parser("indset-check", help="compare the weighted (1,2) chain with the drag chain")
    q.add_argument("--n", type=int, default=4)
    q.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(1, 4))
    q.set_defaults(func=cmd_indset_check)

    q = sub.add_parser("contraction", help="exact drift check of the weighted (1,s) chain")
    region_arg(q)
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--lambda", dest="lam", type=_fraction, required=True)
    q.set_defaults(func=cmd_contraction)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(str(e))
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError, KeyError) as e:
        sys.stderr.write(f"tileflip: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
