"""Command-line interface: pncmaps {fades,mapbook,complete,quantize,simulate,rectangle}."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .completion import SolverLimits, complete_min_symbols
from .constellation import PskConfig
from .constraints import ConstraintSet, build_cpls, generate_constraints
from .fades import PhaseClass, SingularFade, circles, enumerate_singular_fades
from .latin import GridMap
from .mapbook import (
    AssemblyOptions,
    MapBook,
    assemble,
    latin_rectangle,
    seed_count_formulas,
    seed_count_report,
    verify,
)
from .metrics import PlaneGrid, quantize_plane, regions_to_csv
from .sim import ChannelModel, SimConfig, run_ser_sweep, ser_to_csv


class CliError(Exception):
    pass


def _cfg(m: int, max_m: int = 32) -> PskConfig:
    try:
        cfg = PskConfig(m)
    except ValueError as e:
        raise CliError(str(e)) from None
    if m > max_m:
        raise CliError(f"M={m} exceeds the supported maximum {max_m}")
    return cfg


def parse_fade(text: str, m: int) -> SingularFade:
    """'k1,k2,m' or 'k1,k2,m,class'."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (3, 4):
        raise CliError(f"fade must be k1,k2,m[,class]: {text!r}")
    try:
        k1, k2, idx = (int(p) for p in parts[:3])
        f = SingularFade.make(m, k1, k2, idx)
        if len(parts) == 4 and PhaseClass(parts[3]) is not f.phase_class:
            raise CliError(f"class {parts[3]} does not match k1={k1}, k2={k2}")
        return f
    except ValueError as e:
        raise CliError(str(e)) from None


def _limits(args) -> SolverLimits:
    env = SolverLimits.from_env()
    return SolverLimits(
        solution_cap=args.solution_cap if args.solution_cap is not None else env.solution_cap,
        node_budget=args.node_budget if args.node_budget is not None else env.node_budget,
        t_max=args.t_max if args.t_max is not None else env.t_max,
    )


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_book(path: str, m: int | None = None) -> MapBook:
    try:
        book = MapBook.load(path)
    except FileNotFoundError:
        raise CliError(f"map book not found: {path}") from None
    if m is not None and book.cfg.m != m:
        raise CliError(f"book is for M={book.cfg.m}, not {m}")
    return book


def cmd_fades(args) -> int:
    cfg = _cfg(args.m)
    fades = enumerate_singular_fades(cfg)
    if args.json:
        doc = {"m": cfg.m, "count": len(fades), "circles": len(circles(cfg)),
               "fades": [dict(f.to_json(), gamma=f.gamma, theta=f.fade_state().theta) for f in fades]}
        print(json.dumps(doc, indent=1))
        return 0
    print(f"M={cfg.m}: {len(fades)} singular fade states on {len(circles(cfg))} circles "
          "(plus the degenerate gamma=0 channel)")
    print("k1 k2  m  class    gamma        theta")
    for f in fades:
        print(f"{f.k1:2d} {f.k2:2d} {f.m:2d}  {f.phase_class.value:7s}  {f.gamma:.9f}  {f.fade_state().theta:+.9f}")
    return 0


def cmd_mapbook(args) -> int:
    cfg = _cfg(args.m)
    book = assemble(cfg, AssemblyOptions(limits=_limits(args)))
    if args.out:
        book.save(args.out)
    rep = verify(book)
    sizes = sorted({c.n_blocks for c in book.clusterings})
    print(f"M={cfg.m}: {len(book.clusterings)} distinct clusterings, block counts {sizes}")
    print(f"seeds used: {len(book.seeds)} ({', '.join(s.source for s in book.seeds)})")
    if cfg.m >= 8:
        print(f"closed-form seed counts: {seed_count_formulas(cfg.m)}; by circle category: {seed_count_report(cfg)}")
    print(f"verify: {rep.passed}/{rep.total}")
    if book.partial:
        print(f"partial book, unsolved circles: {book.failed_circles}", file=sys.stderr)
        return 2
    return 0 if rep.ok else 1


def cmd_complete(args) -> int:
    if args.cpls:
        with open(args.cpls) as fh:
            doc = json.load(fh)
        if "groups" in doc:
            m = args.m or doc.get("m")
            if m is None:
                raise CliError("--m is required with a constraint-set file")
            grid = build_cpls(ConstraintSet.from_json(int(m), doc)).grid
        else:
            grid = GridMap.from_json(doc)
    elif args.fade:
        if not args.m:
            raise CliError("--m is required with --fade")
        cfg = _cfg(args.m)
        grid = build_cpls(generate_constraints(cfg, parse_fade(args.fade, cfg.m))).grid
    else:
        raise CliError("give --cpls FILE or --fade k1,k2,m")
    res = complete_min_symbols(grid, t_max=args.t_max, enumerate_all=args.all, limits=_limits(args))
    if res.t_min is None:
        print(f"no completion up to t_max ({res.status.value}); infeasible t: {res.infeasible_t}")
        return 1
    print(f"t_min={res.t_min} infeasible_t={res.infeasible_t} status={res.status.value} nodes={res.nodes_explored}")
    print(f"completions: {len(res.squares)} clusterings ({res.labelled_count} with literal symbols)")
    for g in res.squares:
        print("/".join(" ".join(str(v) for v in r) for r in g.cells))
    if args.out:
        _write(args.out, json.dumps([g.to_json() for g in res.squares]))
    return 0


def cmd_quantize(args) -> int:
    book = _load_book(args.book, args.m)
    rows = quantize_plane(book, book.cfg, PlaneGrid(args.gamma_max, args.n_gamma, args.n_theta))
    _write(args.out, regions_to_csv(rows))
    return 0


def cmd_simulate(args) -> int:
    book = _load_book(args.book, args.m)
    m = book.cfg.m
    if args.rayleigh:
        channel, z = ChannelModel.RAYLEIGH_BLOCK, 1.0
    elif args.fade:
        channel, z = ChannelModel.FIXED_FADE, parse_fade(args.fade, m).value()
    elif args.z:
        re_, im_ = (float(v) for v in args.z.split(","))
        channel, z = ChannelModel.FIXED_FADE, complex(re_, im_)
    else:
        raise CliError("give --fade, --z or --rayleigh")
    snrs = [float(s) for s in args.snr.split(",")]
    simcfg = SimConfig(m, args.trials, snrs, channel, z, args.seed)
    _write(args.out, ser_to_csv(run_ser_sweep(simcfg, book)))
    return 0


def cmd_rectangle(args) -> int:
    cfg = _cfg(args.m)
    fade = parse_fade(args.fade, cfg.m)
    if args.square:
        with open(args.square) as fh:
            square = GridMap.from_json(json.load(fh))
    elif args.book:
        book = _load_book(args.book, cfg.m)
        square = book.grid(book.assignment[fade])
    else:
        raise CliError("give --book or --square")
    try:
        rect = latin_rectangle(square, fade, args.n, args.offset)
    except ValueError as e:
        raise CliError(str(e)) from None
    _write(args.out, json.dumps(rect.to_json()) + "\n")
    return 0


def _solver_flags(p):
    p.add_argument("--solution-cap", type=int)
    p.add_argument("--node-budget", type=int)
    p.add_argument("--t-max", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pncmaps", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("fades", help="enumerate singular fade states")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fades)

    p = sub.add_parser("mapbook", help="assemble and verify the map book")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out")
    _solver_flags(p)
    p.set_defaults(func=cmd_mapbook)

    p = sub.add_parser("complete", help="complete a constrained partial Latin square")
    p.add_argument("--cpls")
    p.add_argument("--fade")
    p.add_argument("--m", type=int)
    p.add_argument("--all", action="store_true")
    p.add_argument("--out")
    _solver_flags(p)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("quantize", help="sample the fade plane with the selection rule")
    p.add_argument("--m", type=int)
    p.add_argument("--book", required=True)
    p.add_argument("--gamma-max", type=float, default=3.0)
    p.add_argument("--n-gamma", type=int, default=60)
    p.add_argument("--n-theta", type=int, default=120)
    p.add_argument("--out")
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("simulate", help="Monte Carlo SER sweep")
    p.add_argument("--m", type=int)
    p.add_argument("--book", required=True)
    p.add_argument("--snr", default="0,10,20,30")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--fade")
    g.add_argument("--z")
    g.add_argument("--rayleigh", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rectangle", help="Latin rectangle for unequal PSK orders")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fade", required=True)
    p.add_argument("--book")
    p.add_argument("--square")
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rectangle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except CliError as e:
        print(f"pncmaps: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
