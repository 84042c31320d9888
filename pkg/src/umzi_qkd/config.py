"""Flat ``key = value`` run configuration with precedence flag > file > default.

Every key has a built-in default whose provenance ("gys-default" for fiber and
detector numbers taken from the Gobby-Yuan-Shields benchmark, "default"
otherwise, overridden by "file" or "flag") is tracked so runs can echo exactly
where each effective value came from.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .analysis import SweepConfig
from .channel import (
    DEFAULT_E0,
    DEFAULT_F_EC,
    DEFAULT_Q_SIFT,
    GYS_ALPHA_DB_PER_KM,
    GYS_E_DET,
    GYS_ETA_BOB,
    GYS_Y0,
    ChannelParams,
)
from .errors import ValidationError
from .keyrate import Scenario
from .source import InterferometerParams

COMMANDS = ("eval", "sweep", "maxdist", "optimize")

#: Recognized configuration keys, in canonical echo order.
CONFIG_KEYS = (
    "mu",
    "nu",
    "alpha_db_per_km",
    "eta_bob",
    "y0",
    "e_det",
    "e0",
    "f_ec",
    "q_sift",
    "d_min_km",
    "d_max_km",
    "step_km",
    "scenarios",
    "output",
)

_FLOAT_KEYS = CONFIG_KEYS[:12]

_DEFAULT_SCENARIOS = (Scenario.IDEAL_PM, Scenario.VIRTUAL_SOURCE, Scenario.NAIVE_EVE_ATTENUATOR)

# key -> (default value, provenance tag)
_DEFAULTS: dict[str, tuple[object, str]] = {
    "mu": (0.4, "default"),
    "nu": (0.067, "default"),
    "alpha_db_per_km": (GYS_ALPHA_DB_PER_KM, "gys-default"),
    "eta_bob": (GYS_ETA_BOB, "gys-default"),
    "y0": (GYS_Y0, "gys-default"),
    "e_det": (GYS_E_DET, "gys-default"),
    "e0": (DEFAULT_E0, "default"),
    "f_ec": (DEFAULT_F_EC, "default"),
    "q_sift": (DEFAULT_Q_SIFT, "default"),
    "d_min_km": (0.0, "default"),
    "d_max_km": (200.0, "default"),
    "step_km": (1.0, "default"),
    "scenarios": (_DEFAULT_SCENARIOS, "default"),
    "output": (None, "default"),
}


@dataclass(frozen=True)
class RunConfig:
    """Fully validated inputs for one CLI invocation."""

    command: str
    interferometer: InterferometerParams
    channel: ChannelParams  # distance_km set to d_min_km (the eval distance)
    scenarios: tuple[Scenario, ...]
    sweep: SweepConfig
    output_path: str | None
    provenance: dict[str, str]  # key -> flag | file | gys-default | default


def parse_scenarios(value: str) -> tuple[Scenario, ...]:
    """Parse a comma-separated scenario list; ``all`` selects every scenario."""
    names = [t.strip().lower() for t in value.split(",") if t.strip()]
    if not names:
        raise ValidationError("scenarios: empty list")
    if "all" in names:
        return tuple(Scenario)
    by_value = {s.value: s for s in Scenario}
    chosen = set()
    for name in names:
        if name not in by_value:
            raise ValidationError(
                f"scenarios: unknown name {name!r}; valid: {', '.join(by_value)} or 'all'"
            )
        chosen.add(by_value[name])
    return tuple(s for s in Scenario if s in chosen)


def scenarios_to_string(scenarios: tuple[Scenario, ...]) -> str:
    return ",".join(s.value for s in scenarios)


def _parse_file(text: str, errors: list[str]) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {raw_line.strip()!r}")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        values[key] = value  # a repeated key: the last assignment wins
    return values


def parse_config(
    file_contents: str,
    cli_overrides: Mapping[str, str] | None = None,
    command: str | None = None,
) -> RunConfig:
    """Merge file text, CLI overrides, and built-in defaults into a RunConfig.

    All validation failures are aggregated into a single
    :class:`ValidationError` naming every offending key.
    """
    errors: list[str] = []
    file_values = _parse_file(file_contents, errors)

    overrides = dict(cli_overrides or {})
    for key in overrides:
        if key not in CONFIG_KEYS:
            errors.append(f"unknown override key {key!r}")

    effective: dict[str, object] = {}
    provenance: dict[str, str] = {}
    for key in CONFIG_KEYS:
        if key in overrides:
            raw, provenance[key] = overrides[key], "flag"
        elif key in file_values:
            raw, provenance[key] = file_values[key], "file"
        else:
            effective[key], provenance[key] = _DEFAULTS[key]
            continue
        if key in _FLOAT_KEYS:
            try:
                effective[key] = float(raw)
            except ValueError:
                errors.append(f"{key}: cannot parse {raw!r} as a number")
        elif key == "scenarios":
            try:
                effective[key] = parse_scenarios(str(raw))
            except ValidationError as exc:
                errors.append(str(exc))
        else:  # output
            effective[key] = str(raw)

    if command is None:
        errors.append("missing command (expected one of: " + ", ".join(COMMANDS) + ")")
    elif command not in COMMANDS:
        errors.append(f"unknown command {command!r} (expected one of: {', '.join(COMMANDS)})")

    interferometer = channel = sweep_config = None
    if not errors:
        try:
            interferometer = InterferometerParams(mu=effective["mu"], nu=effective["nu"])
        except ValidationError as exc:
            errors.append(str(exc))
        try:
            channel = ChannelParams(
                alpha_db_per_km=effective["alpha_db_per_km"],
                distance_km=effective["d_min_km"],
                eta_bob=effective["eta_bob"],
                y0=effective["y0"],
                e_det=effective["e_det"],
                e0=effective["e0"],
                f_ec=effective["f_ec"],
                q_sift=effective["q_sift"],
            )
        except ValidationError as exc:
            errors.append(str(exc))
        if interferometer is not None and channel is not None:
            try:
                sweep_config = SweepConfig(
                    d_min_km=effective["d_min_km"],
                    d_max_km=effective["d_max_km"],
                    step_km=effective["step_km"],
                    scenarios=effective["scenarios"],
                    params=interferometer,
                    channel=channel,
                )
            except ValidationError as exc:
                errors.append(str(exc))

    if errors:
        raise ValidationError("config validation failed: " + "; ".join(errors))
    assert interferometer is not None and channel is not None and sweep_config is not None
    return RunConfig(
        command=command,
        interferometer=interferometer,
        channel=channel,
        scenarios=sweep_config.scenarios,
        sweep=sweep_config,
        output_path=effective["output"],
        provenance=provenance,
    )


def echo_lines(config: RunConfig) -> list[str]:
    """Deterministic ``key = value (provenance)`` lines for the summary output."""
    values: dict[str, object] = {
        "mu": config.interferometer.mu,
        "nu": config.interferometer.nu,
        "alpha_db_per_km": config.channel.alpha_db_per_km,
        "eta_bob": config.channel.eta_bob,
        "y0": config.channel.y0,
        "e_det": config.channel.e_det,
        "e0": config.channel.e0,
        "f_ec": config.channel.f_ec,
        "q_sift": config.channel.q_sift,
        "d_min_km": config.sweep.d_min_km,
        "d_max_km": config.sweep.d_max_km,
        "step_km": config.sweep.step_km,
        "scenarios": scenarios_to_string(config.scenarios),
        "output": config.output_path if config.output_path is not None else "-",
    }
    lines = []
    for key in CONFIG_KEYS:
        value = values[key]
        rendered = f"{value:.16e}" if isinstance(value, float) else str(value)
        lines.append(f"{key} = {rendered} ({config.provenance[key]})")
    return lines
