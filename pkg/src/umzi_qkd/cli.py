"""Command-line surface: eval, sweep, maxdist, and optimize.

All numeric output is scientific notation with 17 significant digits so files
and stdout are byte-reproducible and round-trip exactly.  Summary diagnostics
go to stdout, errors to stderr; sweep data goes to a CSV file whose comment
lines carry the full effective configuration.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .analysis import SweepResult, max_distance, optimize_mu, sweep
from .channel import fiber_transmittance
from .config import CONFIG_KEYS, COMMANDS, RunConfig, echo_lines, parse_config
from .errors import BracketError, UndefinedQberError, ValidationError
from .keyrate import Scenario, ScenarioRates, detector_free_rate, secure_key_rate

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BRACKET = 3
EXIT_UNDEFINED_QBER = 4
EXIT_IO = 5

CSV_HEADER = "scenario,distance_km,q_total,e_total,q1,e1,rate,rate_clamped"

_RATE_FIELDS = ("distance_km", "q_total", "e_total", "q1", "e1", "rate", "rate_clamped")


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _rate_row(r: ScenarioRates) -> str:
    return ",".join([r.scenario.value] + [_fmt(getattr(r, f)) for f in _RATE_FIELDS])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="umzi-qkd",
        description=(
            "Secret-key-rate model for phase-coding BB84 on an unbalanced "
            "Mach-Zehnder interferometer with a lossy phase modulator."
        ),
        epilog=(
            "eval and optimize run at distance d_min_km; maxdist bisects inside "
            "(d_min_km, d_max_km).  Flags override config-file values, which "
            "override built-in defaults."
        ),
    )
    parser.add_argument("command", choices=COMMANDS, help="what to compute")
    parser.add_argument("--config", metavar="PATH", help="flat key = value config file")
    for key in CONFIG_KEYS:
        if key == "scenarios":
            parser.add_argument(
                "--scenarios", metavar="LIST", help="comma-separated: ideal,virtual,naive,compensated or all"
            )
        elif key == "output":
            parser.add_argument("--output", metavar="PATH", help="CSV output path for sweep")
        else:
            parser.add_argument(f"--{key}", metavar="X", help=f"override config key {key}")
    parser.add_argument(
        "--plot", metavar="PATH", help="also render the sweep as a figure (sweep command only)"
    )
    return parser


def write_sweep_csv(result: SweepResult, config: RunConfig, path: str) -> None:
    lines = [f"# generated-by: umzi-qkd {__version__}"]
    lines += [f"# {line}" for line in echo_lines(config)]
    lines.append(CSV_HEADER)
    lines += [_rate_row(r) for r in result.points]
    Path(path).write_text("\n".join(lines) + "\n")


def read_sweep_csv(path: str) -> tuple[ScenarioRates, ...]:
    """Parse a sweep CSV back into rate records (exact float round-trip)."""
    rows: list[ScenarioRates] = []
    header_seen = False
    for line in Path(path).read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != CSV_HEADER:
                raise ValidationError(f"unexpected CSV header {line!r}")
            header_seen = True
            continue
        fields = line.split(",")
        if len(fields) != 8:
            raise ValidationError(f"malformed CSV row {line!r}")
        rows.append(
            ScenarioRates(
                Scenario(fields[0]),
                *(float(f) for f in fields[1:]),
            )
        )
    if not header_seen:
        raise ValidationError("CSV is missing its header line")
    return tuple(rows)


def _print_preamble(config: RunConfig) -> None:
    print(f"# generated-by: umzi-qkd {__version__}")
    for line in echo_lines(config):
        print(f"# {line}")


def _run_eval(config: RunConfig) -> None:
    fiber_t = fiber_transmittance(config.channel.alpha_db_per_km, config.channel.distance_km)
    print(CSV_HEADER + ",detector_free_rate")
    for scenario in config.scenarios:
        r = secure_key_rate(scenario, config.interferometer, config.channel)
        df = detector_free_rate(scenario, config.interferometer, fiber_t)
        print(_rate_row(r) + "," + _fmt(df))


def _run_sweep(config: RunConfig, plot_path: str | None) -> None:
    result = sweep(config.sweep)
    out = config.output_path or "sweep.csv"
    write_sweep_csv(result, config, out)
    for scenario in result.scenarios:
        crossing = result.max_distance_km[scenario]
        if crossing is not None:
            print(f"max_distance_km {scenario.value} {_fmt(crossing)}")
        else:
            print(f"max_distance_km {scenario.value} none")
    print(f"wrote {out}")
    if plot_path is not None:
        from .plotting import render_sweep_figure

        render_sweep_figure(result, plot_path)
        print(f"wrote {plot_path}")


def _run_maxdist(config: RunConfig) -> None:
    bracket = (config.sweep.d_min_km, config.sweep.d_max_km)
    for scenario in config.scenarios:
        d = max_distance(scenario, config.interferometer, config.channel, bracket)
        print(f"max_distance_km {scenario.value} {_fmt(d)}")


def _run_optimize(config: RunConfig) -> None:
    params = config.interferometer
    loss_ratio = params.nu / params.mu
    # Default bracket: capped so mu - nu <= 1 holds across the whole range.
    hi = 1.5 if loss_ratio >= 1.0 else min(1.5, 1.0 / (1.0 - loss_ratio))
    bracket = (0.05, hi)
    for scenario in config.scenarios:
        result = optimize_mu(scenario, loss_ratio, config.channel, bracket)
        flag = " zero-rate" if result.zero_rate else ""
        print(
            f"optimum {scenario.value} mu_opt {_fmt(result.mu_opt)} "
            f"rate_opt {_fmt(result.rate_opt)}{flag}"
        )


def run(config: RunConfig, plot_path: str | None = None) -> int:
    """Execute one validated run; returns the process exit status."""
    try:
        _print_preamble(config)
        if config.command == "eval":
            _run_eval(config)
        elif config.command == "sweep":
            _run_sweep(config, plot_path)
        elif config.command == "maxdist":
            _run_maxdist(config)
        elif config.command == "optimize":
            _run_optimize(config)
        else:
            raise ValidationError(f"unknown command {config.command!r}")
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BracketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BRACKET
    except UndefinedQberError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED_QBER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_contents = Path(args.config).read_text() if args.config else ""
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    overrides = {
        key: value
        for key in CONFIG_KEYS
        if (value := getattr(args, key, None)) is not None
    }
    try:
        config = parse_config(file_contents, overrides, command=args.command)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return run(config, plot_path=args.plot)


def console_main() -> None:
    raise SystemExit(main())
