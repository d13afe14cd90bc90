"""Command-line interface.

Subcommands
-----------
resonances   compute all resonances of a step barrier up to a radius
count        tabulate the counting function and fit its growth order
channel      run a single angular channel, optionally with a contour check
validate     run a named self-check suite
region       emit samples of the eye-region boundary

Exit codes: 0 success, 1 validation failure, 2 bad arguments,
3 numerical non-convergence.  Output files are written atomically and are
byte-identical across runs with the same arguments.  The environment
variable RESONANCE_ATLAS_THREADS caps worker threads for multi-channel
searches (default 1).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass

from . import counting, engine, report, validation
from . import surface_maps as sm
from .errors import ConvergenceError, DomainError, FitError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3

EPS_MIN, EPS_MAX = 0.02, 0.3


@dataclass(frozen=True)
class RunConfig:
    """Validated bundle of command-line options for one invocation."""

    command: str
    dim: int = 2
    v0: float = 10.0
    sheet: int = 1
    r_max: float = 60.0
    eps: float = 0.1
    grid_points: int = 20
    format: str = "csv"
    out: str | None = None
    alpha: float = 1.5
    ell: int | None = None
    samples: int = 512
    suite: str = "all"
    contour_check: bool = False
    figures_dir: str | None = None

    def __post_init__(self):
        if self.command in ("resonances", "count", "channel"):
            if self.dim < 2 or self.dim % 2:
                raise DomainError("dimension must be even and at least 2")
            if self.v0 < 0:
                raise DomainError("barrier height must be non-negative")
            if self.sheet == 0:
                raise DomainError("sheet 0 is the physical sheet; "
                                  "resonances live on sheets m != 0")
            if not self.r_max > 0:
                raise DomainError("rmax must be positive")
        if not EPS_MIN <= self.eps <= EPS_MAX:
            raise DomainError(f"eps must lie in [{EPS_MIN}, {EPS_MAX}]")
        if self.grid_points < 2:
            raise DomainError("grid-points must be at least 2")
        if self.format not in ("csv", "json"):
            raise DomainError("format must be csv or json")
        if not self.alpha > 1.0:
            raise DomainError("alpha must exceed 1")
        if self.samples < 2:
            raise DomainError("samples must be at least 2")

    @property
    def region_spec(self) -> sm.RegionSpec:
        return sm.RegionSpec.for_margin(self.eps)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resonance-atlas",
        description="Scattering resonances of a radial step barrier in "
                    "even dimensions, on the sheets of the logarithmic "
                    "resolvent surface.")
    parser.add_argument("--verbose", action="store_true",
                        help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, pot: bool = True):
        if pot:
            p.add_argument("--dim", type=int, default=2,
                           help="space dimension (even, >= 2)")
            p.add_argument("--v0", type=float, default=10.0,
                           help="barrier height on the unit ball")
            p.add_argument("--sheet", type=int, default=1,
                           help="surface sheet index m (nonzero)")
            p.add_argument("--rmax", type=float, default=60.0,
                           help="largest resonance modulus to report")
        p.add_argument("--eps", type=float, default=0.1,
                       help="boundary-margin parameter for the eye region")
        p.add_argument("--out", type=str, default=None,
                       help="output file (default: stdout)")
        p.add_argument("--figures-dir", type=str, default=None,
                       help="also render figures into this directory")

    p = sub.add_parser("resonances", help="all channels up to rmax")
    add_common(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--alpha", type=float, default=1.5,
                   help="depth factor for enclosure boxes")

    p = sub.add_parser("count", help="counting function and fitted order")
    add_common(p)
    p.add_argument("--grid-points", type=int, default=20,
                   help="number of radius samples")
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("channel", help="a single angular channel")
    add_common(p)
    p.add_argument("--ell", type=int, required=True,
                   help="angular momentum of the channel")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--contour-check", action="store_true",
                   help="verify the zero list against a region winding count")

    p = sub.add_parser("validate", help="run a self-check suite")
    add_common(p, pot=False)
    p.add_argument("--suite", default="all",
                   choices=("all", *validation.SUITES),
                   help="which suite to run")
    p.add_argument("--v0", type=float, default=10.0,
                   help="barrier height used by potential-dependent suites")

    p = sub.add_parser("region", help="eye boundary samples")
    add_common(p, pot=False)
    p.add_argument("--samples", type=int, default=512,
                   help="number of boundary points")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {}
    for name in ("dim", "v0", "sheet", "eps", "grid_points", "format",
                 "out", "alpha", "ell", "samples", "suite", "contour_check",
                 "figures_dir"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    if hasattr(args, "rmax"):
        fields["r_max"] = args.rmax
    return RunConfig(command=args.command, **fields)


def _emit(config: RunConfig, text: str) -> None:
    if config.out is None:
        sys.stdout.write(text)
    else:
        report.write_atomic(config.out, text)


def _figure_path(config: RunConfig, name: str) -> str | None:
    if config.figures_dir is None:
        return None
    os.makedirs(config.figures_dir, exist_ok=True)
    return os.path.join(config.figures_dir, name)


def _gather_zeros(config: RunConfig,
                  channels: list[engine.Channel]) -> list[engine.ResonanceZero]:
    spec = config.region_spec
    zeros: list[engine.ResonanceZero] = []
    for ch in channels:
        zeros.extend(counting.channel_zeros(ch, config.sheet, config.v0,
                                            config.r_max, spec))
    return zeros


def _cmd_resonances(config: RunConfig) -> int:
    if config.v0 == 0:
        # A vanishing barrier scatters nothing: the sheet function is a
        # nonzero constant, so an empty table is the correct answer.
        text = (report.resonance_csv([]) if config.format == "csv"
                else report.resonance_json([]))
        _emit(config, text)
        return EXIT_OK
    channels = counting.channel_ladder(config.dim, config.r_max,
                                       config.region_spec)
    zeros = _gather_zeros(config, channels)
    text = (report.resonance_csv(zeros) if config.format == "csv"
            else report.resonance_json(zeros))
    _emit(config, text)
    fig = _figure_path(config, "resonances.png")
    if fig:
        from . import figures
        figures.save_resonance_figure(zeros, fig)
    return EXIT_OK


def _cmd_count(config: RunConfig) -> int:
    if config.v0 == 0:
        pot = engine.StepPotential(config.dim, 0.0)
        empty = counting.CountingReport(
            pot, config.sheet,
            tuple((r, 0) for r in (config.r_max / 3.0, config.r_max)),
            (config.r_max / 3.0, config.r_max), 0, None, None,
            ("vanishing barrier: no resonances",))
        _emit(config, report.counting_json(empty)
              if config.format == "json" else report.counting_csv(empty))
        return EXIT_OK
    pot = engine.StepPotential(config.dim, config.v0)
    rep = counting.assemble_counting(pot, config.sheet, config.r_max,
                                     config.grid_points, config.region_spec)
    try:
        rep = rep.with_order(counting.fit_order(rep))
    except FitError as exc:
        rep = counting.CountingReport(rep.potential, rep.sheet, rep.samples,
                                      rep.fit_window, rep.seed_total,
                                      rep.contour_total, None,
                                      rep.warnings + (f"order fit failed: {exc}",))
    text = (report.counting_json(rep) if config.format == "json"
            else report.counting_csv(rep))
    _emit(config, text)
    fig = _figure_path(config, "counting.png")
    if fig:
        from . import figures
        figures.save_counting_figure(rep, fig)
    return EXIT_OK


def _cmd_channel(config: RunConfig) -> int:
    if config.ell is None or config.ell < 0:
        raise DomainError("channel requires --ell >= 0")
    channel = engine.Channel.open(config.ell, config.dim)
    if config.v0 == 0:
        _emit(config, report.resonance_csv([])
              if config.format == "csv" else report.resonance_json([]))
        return EXIT_OK
    spec = config.region_spec
    zeros = counting.channel_zeros(channel, config.sheet, config.v0,
                                   config.r_max, spec)
    text = (report.resonance_csv(zeros) if config.format == "csv"
            else report.resonance_json(zeros))
    _emit(config, text)
    if config.contour_check:
        if channel.nu >= counting.SEEDED_ORDER_MIN and zeros:
            rect = engine.covering_rectangle(zeros, channel.nu)
            counted = engine.count_zeros_rho_rectangle(
                channel.nu, config.sheet, config.v0, rect)
        else:
            counted = len(engine.contour_channel_zeros(
                channel, config.sheet, config.v0, config.r_max))
        print(f"contour check: winding {counted}, listed {len(zeros)}",
              file=sys.stderr)
        if counted != len(zeros):
            return EXIT_VALIDATION
    return EXIT_OK


def _cmd_validate(config: RunConfig) -> int:
    names = list(validation.SUITES) if config.suite == "all" \
        else [config.suite]
    ok, lines = validation.run_suites(names, config.v0)
    text = "\n".join(lines) + "\n"
    _emit(config, text)
    if config.out is not None:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_VALIDATION


def _cmd_region(config: RunConfig) -> int:
    pairs = report.region_samples(config.samples)
    _emit(config, report.region_csv(pairs))
    fig = _figure_path(config, "region.png")
    if fig:
        from . import figures
        figures.save_region_figure(pairs, fig)
    return EXIT_OK


_COMMANDS = {
    "resonances": _cmd_resonances,
    "count": _cmd_count,
    "channel": _cmd_channel,
    "validate": _cmd_validate,
    "region": _cmd_region,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config_from_args(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[config.command](config)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
