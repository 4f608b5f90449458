"""Command-line interface: ``pairguess {evaluate,optimize,simulate,certify}``.

Exit codes: 0 success (``certify``: QUANTUM), 3 NOT_CERTIFIED, 2 bad input
or data errors.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import __version__
from .certify import Verdict, certify_quantumness, empirical_matrix
from .classical import (
    balanced_partition_optimum,
    brute_force_optimum,
    classical_strategy_for,
)
from .errors import PairGuessError
from .game import (
    ClassicalStrategy,
    average_success,
    canonical_spec,
    min_cell,
    success_matrix,
    wins,
)
from .qubit import make_state
from .quantum import (
    Ensemble,
    best_known_ensemble,
    delta_bound_d3,
    delta_bound_d4,
    maximize_delta,
    optimize_ensemble,
    polygon,
    qrac_reference,
    tetrad,
    trine,
)
from .records import read_records, write_records
from .sim import GENERATOR, simulate

EXIT_OK = 0
EXIT_DATA = 2
EXIT_NOT_CERTIFIED = 3

STRATEGIES = ("trine", "tetrad", "polygon", "classical-optimum")


class UsageError(PairGuessError):
    pass


def _fmt(p) -> str:
    s = f"{float(p):.7f}"
    if isinstance(p, Fraction):
        s += f" ({p.numerator}/{p.denominator})"
    return s


def _jsonable(p):
    return float(p)


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("PAIRGUESS_THREADS", "1")))
    except ValueError:
        return 1


def load_ensemble_file(path: str) -> Ensemble:
    """One state per line: Re(amp0) Im(amp0) Re(amp1) Im(amp1)."""
    states = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 4:
                raise UsageError(f"{path}:{lineno}: expected 4 numbers, got {len(parts)}")
            try:
                r0, i0, r1, i1 = (float(v) for v in parts)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: not a number") from None
            try:
                states.append(make_state(complex(r0, i0), complex(r1, i1)))
            except PairGuessError as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from None
    return Ensemble(tuple(states))


def resolve_strategy(args):
    d = args.d
    noise = args.noise
    if args.ensemble_file:
        ens = load_ensemble_file(args.ensemble_file)
        if ens.d != d:
            raise UsageError(f"ensemble file has {ens.d} states, --d is {d}")
        return "file", ens.strategy(noise)
    name = args.strategy
    if name is None:
        raise UsageError("give --strategy or --ensemble-file")
    if name == "classical-optimum":
        if noise:
            raise UsageError("--noise applies to quantum strategies only")
        return name, classical_strategy_for(d, args.levels)
    if name == "trine":
        if d != 3:
            raise UsageError("the trine ensemble needs --d 3")
        return name, trine().strategy(noise)
    if name == "tetrad":
        if d != 4:
            raise UsageError("the tetrad ensemble needs --d 4")
        return name, tetrad().strategy(noise)
    if name == "polygon":
        return name, polygon(d).strategy(noise)
    raise UsageError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGIES)}")


def _emit(args, doc: dict, text: str) -> None:
    if args.format == "structured":
        print(json.dumps(doc, indent=2))
    else:
        print(text)


# --- subcommands -----------------------------------------------------------


def cmd_evaluate(args) -> int:
    name, strategy = resolve_strategy(args)
    spec = canonical_spec(args.d)
    matrix = success_matrix(strategy, spec)
    avg = average_success(matrix, spec)
    worst = min_cell(matrix)
    won = wins(matrix)
    bound = balanced_partition_optimum(args.d, 2)
    qrac = qrac_reference()

    lines = [f"strategy {name}, d = {args.d}", "   i    j  S_j        p(i|x_i,j)"]
    for (i, j), p in matrix.items():
        a, b = spec.pair(j)
        lines.append(f"{i:>4} {j:>4}  {{{a},{b}}}  {_fmt(p)}")
    lines += [
        f"average success    {_fmt(avg)}",
        f"min cell           {_fmt(worst)}",
        f"wins               {str(won).lower()}",
        f"1-cbit optimum     {_fmt(bound)}",
        f"QRAC reference     {qrac:.7f}",
    ]
    doc = {
        "strategy": name,
        "d": args.d,
        "cells": [
            {"i": i, "j": j, "p": _jsonable(p)} for (i, j), p in matrix.items()
        ],
        "average_success": _jsonable(avg),
        "min_cell": _jsonable(worst),
        "wins": won,
        "classical_bound": float(bound),
        "qrac_reference": qrac,
    }
    if isinstance(strategy, ClassicalStrategy):
        doc["encoding"] = list(strategy.encoding)
        lines.insert(1, f"encoding {list(strategy.encoding)}")
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_optimize(args) -> int:
    d = args.d
    if args.mode == "classical":
        opt = brute_force_optimum(d, args.levels, threads=args.threads)
        closed = balanced_partition_optimum(d, args.levels)
        doc = {
            "mode": "classical",
            "d": d,
            "levels": args.levels,
            "best_encoding": list(opt.best_encoding),
            "best_average": float(opt.best_average),
            "best_average_exact": str(opt.best_average),
            "balanced_partition_optimum": float(closed),
            "can_win": opt.can_win,
        }
        text = "\n".join([
            f"classical optimum, d = {d}, levels = {args.levels}",
            f"best encoding      {list(opt.best_encoding)}",
            f"best average       {_fmt(opt.best_average)}",
            f"closed form        {_fmt(closed)}",
            f"can win            {str(opt.can_win).lower()}",
        ])
    elif args.mode == "quantum":
        ens, value = optimize_ensemble(d, args.restarts, args.seed, threads=args.threads)
        ref_name, ref = best_known_ensemble(d)
        spec = canonical_spec(d)
        ref_value = float(average_success(success_matrix(ref.strategy(), spec), spec))
        amps = [[s.amp0.real, s.amp0.imag, s.amp1.real, s.amp1.imag] for s in ens]
        doc = {
            "mode": "quantum",
            "d": d,
            "restarts": args.restarts,
            "seed": args.seed,
            "best_average": value,
            "ensemble": amps,
            "reference": ref_name,
            "reference_average": ref_value,
            "gap_to_reference": value - ref_value,
        }
        lines = [f"quantum optimum, d = {d}, restarts = {args.restarts}, seed = {args.seed}"]
        for k, a in enumerate(amps, start=1):
            lines.append(f"  x_{k}: " + " ".join(f"{v:+.7f}" for v in a))
        lines += [
            f"best average       {value:.7f}",
            f"{ref_name:<18} {ref_value:.7f}",
            f"gap                {value - ref_value:+.3e}",
        ]
        text = "\n".join(lines)
    else:
        if d == 3:
            which, ref_point, ref_fn = "d3", (0.5, 0.5), delta_bound_d3
        elif d == 4:
            which, ref_point, ref_fn = "d4", (1 / math.sqrt(3),) * 3, delta_bound_d4
        else:
            raise UsageError("--mode delta is defined for d = 3 and d = 4 only")
        argmax, value = maximize_delta(which, args.grid_step)
        ref_value = ref_fn(*ref_point)
        doc = {
            "mode": "delta",
            "d": d,
            "grid_step": args.grid_step,
            "argmax": list(argmax),
            "max": value,
            "reference_point": list(ref_point),
            "reference_value": ref_value,
        }
        text = "\n".join([
            f"triangle-inequality bound, d = {d}, grid step {args.grid_step}",
            "argmax             " + ", ".join(f"{v:.7f}" for v in argmax),
            f"max                {value:.7f}",
            "reference point    " + ", ".join(f"{v:.7f}" for v in ref_point),
            f"value there        {ref_value:.7f}",
        ])
    _emit(args, doc, text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    name, strategy = resolve_strategy(args)
    spec = canonical_spec(args.d)
    hits = 0
    total = 0

    def counted():
        nonlocal hits, total
        for rec in simulate(strategy, spec, args.rounds, args.seed):
            total += 1
            hits += rec.guess == rec.x
            yield rec

    write_records(counted(), args.out)
    avg = hits / total if total else float("nan")
    doc = {
        "strategy": name,
        "d": args.d,
        "noise": args.noise,
        "rounds": total,
        "seed": args.seed,
        "generator": GENERATOR,
        "empirical_average": avg,
        "out": str(args.out),
    }
    text = "\n".join([
        f"wrote {total} rounds to {args.out}",
        f"strategy {name}, d = {args.d}, noise = {args.noise}",
        f"generator {GENERATOR}, seed {args.seed}",
        f"empirical average  {avg:.7f}",
    ])
    _emit(args, doc, text)
    return EXIT_OK


def cmd_certify(args) -> int:
    counts = empirical_matrix(read_records(args.input), args.d)
    report = certify_quantumness(counts, args.d, args.alpha)
    _emit(args, report.to_dict(), report.to_text())
    return EXIT_OK if report.quantumness_verdict is Verdict.QUANTUM else EXIT_NOT_CERTIFIED


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--threads", type=int, default=_default_threads(),
                        help="worker threads (default: $PAIRGUESS_THREADS or 1)")

    strat = argparse.ArgumentParser(add_help=False)
    strat.add_argument("--d", type=int, required=True)
    strat.add_argument("--strategy", choices=STRATEGIES)
    strat.add_argument("--ensemble-file")
    strat.add_argument("--noise", type=float, default=0.0)
    strat.add_argument("--levels", type=int, default=2,
                       help="message levels for classical-optimum (default 2)")

    parser = argparse.ArgumentParser(prog="pairguess", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"pairguess {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", parents=[common, strat], help="exact success matrix")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("optimize", parents=[common], help="search for optimal strategies")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mode", choices=("classical", "quantum", "delta"), required=True)
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-step", type=float, default=0.005)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", parents=[common, strat], help="write simulated round records")
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("certify", parents=[common], help="certify quantumness from records")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.01)
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PairGuessError, OSError) as exc:
        print(f"pairguess {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
