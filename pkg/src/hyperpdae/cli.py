"""Command-line entry point.

Subcommands::

    run     single (n, eps) solve            -> trajectory CSV
    sweep   eps sweep for a list of n        -> errors CSV
    rates   errors CSV                       -> rates CSV
    figure  one of the rate figures (2..5)   -> figN_errors.csv, figN_rates.csv, figN_rates.svg

Exit codes: 0 success, 2 usage error, 1 runtime failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import PdaeError, State, TimeGrid, solve_eps_system
from .expansion import exact_mode_trajectories, solve_limit_system
from .io import read_errors_csv, write_errors_csv, write_rate_plot_svg, write_rates_csv, write_trajectory_csv
from .metrics import Measure
from .pipe import InitialDataPreset, build_pipe_system, initial_data
from .sweep import FULL_N_LIST, Integrator, SweepConfig, estimate_rates, figure_preset, run_sweep

log = logging.getLogger("hyperpdae")

DEFAULT_SWEEP_MEASURES = "p_linf_l2,p_l2_h1,m_l2_l2,m_sqrteps_linf_l2,lambda_l2"
BOOLEAN_KEYS = {"exact", "midpoint", "full", "verbose"}


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _preset(text: str) -> InitialDataPreset:
    try:
        return InitialDataPreset.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _measures(text: str) -> tuple[Measure, ...]:
    try:
        return tuple(Measure.parse(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        valid = sorted(a.option_strings[-1].lstrip("-") for a in self._actions if a.option_strings
                       and a.dest != "help")
        raise UsageError(f"{self.prog}: error: {message}\nvalid keys: {', '.join(valid)}")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out-dir", default=".", help="directory for output files")
    parser.add_argument("--config", help="file with 'key = value' lines; flags override it")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for eps solves")
    parser.add_argument("--seed", type=int, default=None, help="reserved; all computations are deterministic")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--exact", dest="integrator", action="store_const", const=Integrator.EXACT,
                       help="exact mode propagation (default)")
    group.add_argument("--midpoint", dest="integrator", action="store_const", const=Integrator.MIDPOINT,
                       help="implicit midpoint saddle-point integrator")
    parser.set_defaults(integrator=Integrator.EXACT)
    parser.add_argument("--t-end", type=_positive_float, default=1.0)
    parser.add_argument("--n-steps", type=int, default=2000)
    parser.add_argument("--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hyperpdae", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", metavar="{run,sweep,rates,figure}", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("run", help="solve one (n, eps) pipe problem")
    _common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=_nonneg_float, required=True, help="0 selects the limit system")
    p.add_argument("--preset", type=_preset, default=InitialDataPreset.DATA42)
    p.add_argument("--output", default="trajectory.csv")

    p = sub.add_parser("sweep", help="eps sweep -> errors CSV")
    _common(p)
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated list, e.g. 1,2,4")
    p.add_argument("--preset", type=_preset, required=True)
    p.add_argument("--jmax", type=int, default=30)
    p.add_argument("--measures", type=_measures, default=_measures(DEFAULT_SWEEP_MEASURES))
    p.add_argument("--output", default="errors.csv")

    p = sub.add_parser("rates", help="errors CSV -> rates CSV")
    _common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="rates.csv")
    p.add_argument("--svg", default=None, help="also write a rate plot")

    p = sub.add_parser("figure", help="errors, rates and plot for one figure preset")
    _common(p)
    p.add_argument("--id", type=int, required=True, choices=(2, 3, 4, 5))
    p.add_argument("--n", type=_int_list, default=None, help="override the list of n")
    p.add_argument("--jmax", type=int, default=None)
    p.add_argument("--full", action="store_true", help="n up to 16384")
    return parser


def read_config(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror or exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def _config_tokens(subparser, config: dict[str, str]) -> list[str]:
    valid = {a.option_strings[-1].lstrip("-"): a for a in subparser._actions
             if a.option_strings and a.dest not in ("help", "config")}
    tokens: list[str] = []
    for key, value in config.items():
        if key not in valid:
            raise UsageError(f"unknown config key {key!r}; valid keys: {', '.join(sorted(valid))}")
        if key in BOOLEAN_KEYS:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(f"--{key}")
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"config key {key!r} expects true/false")
        else:
            tokens += [f"--{key}", value]
    return tokens


@dataclass
class CliCommand:
    name: str
    args: argparse.Namespace
    sweep: SweepConfig | None = None


def parse_cli(argv: list[str]) -> CliCommand:
    """Validate ``argv``; raises :class:`UsageError` on bad input."""
    parser = build_parser()
    # config keys may supply required flags, so splice them in before parsing
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    choices = parser._subparsers._group_actions[0].choices
    command = next((a for a in argv if a in choices), None)
    if known.config and command is not None:
        config = read_config(known.config)
        idx = argv.index(command) + 1
        argv = argv[:idx] + _config_tokens(choices[command], config) + argv[idx:]
    args = parser.parse_args(argv)

    sweep = None
    try:
        if args.command == "sweep":
            sweep = SweepConfig(
                n_list=args.n, j_max=args.jmax, preset=args.preset, measures=args.measures,
                t_end=args.t_end, n_steps=args.n_steps, integrator=args.integrator, threads=args.threads,
            )
        elif args.command == "figure":
            base = figure_preset(args.id, full=args.full)
            sweep = SweepConfig(
                n_list=args.n or (FULL_N_LIST if args.full else base.n_list),
                j_max=args.jmax or base.j_max, preset=base.preset, measures=base.measures,
                t_end=args.t_end, n_steps=args.n_steps, integrator=args.integrator, threads=args.threads,
            )
        elif args.command == "run" and args.n < 1:
            raise ValueError("--n must be positive")
    except ValueError as exc:
        raise UsageError(f"hyperpdae {args.command}: error: {exc}") from None
    return CliCommand(args.command, args, sweep)


def _run_single(args) -> None:
    n = args.n
    sys_ = build_pipe_system(n)
    p0, m0 = initial_data(args.preset, n)
    grid = TimeGrid.uniform(args.t_end, args.n_steps)
    if args.integrator is Integrator.EXACT:
        traj = exact_mode_trajectories(n, args.eps, (p0, m0), grid)
    elif args.eps == 0:
        traj = solve_limit_system(sys_, p0, grid)
    else:
        traj = solve_eps_system(sys_, State(0.0, p0, m0, np.zeros(2)), args.eps, grid)
    write_trajectory_csv(traj, Path(args.out_dir) / args.output)


def execute(cmd: CliCommand) -> None:
    args = cmd.args
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if cmd.name == "run":
        _run_single(args)
    elif cmd.name == "sweep":
        write_errors_csv(run_sweep(cmd.sweep), out / args.output)
    elif cmd.name == "rates":
        rates = estimate_rates(read_errors_csv(args.input))
        write_rates_csv(rates, out / args.output)
        if args.svg:
            write_rate_plot_svg(rates, out / args.svg)
    elif cmd.name == "figure":
        errors = run_sweep(cmd.sweep)
        rates = estimate_rates(errors)
        stem = f"fig{args.id}"
        write_errors_csv(errors, out / f"{stem}_errors.csv")
        write_rates_csv(rates, out / f"{stem}_rates.csv")
        write_rate_plot_svg(rates, out / f"{stem}_rates.svg", title=f"Estimated eps-orders, figure {args.id}")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cmd = parse_cli(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if cmd.args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        execute(cmd)
    except (PdaeError, ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(f"hyperpdae: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
