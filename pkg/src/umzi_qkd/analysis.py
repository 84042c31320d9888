"""Distance sweeps, zero-rate distance bisection, and intensity optimization."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .channel import ChannelParams
from .errors import BracketError, ValidationError
from .keyrate import Scenario, ScenarioRates, secure_key_rate
from .source import InterferometerParams

DEFAULT_BISECTION_TOL_KM = 0.01
DEFAULT_MU_TOL = 1e-5

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepConfig:
    """Inclusive distance grid plus everything needed to evaluate it."""

    d_min_km: float
    d_max_km: float
    step_km: float
    scenarios: tuple[Scenario, ...]
    params: InterferometerParams
    channel: ChannelParams  # distance_km ignored, overridden per grid point

    def __post_init__(self) -> None:
        problems = []
        if not math.isfinite(self.d_min_km) or self.d_min_km < 0:
            problems.append("d_min_km must be >= 0")
        if not math.isfinite(self.d_max_km) or self.d_max_km < self.d_min_km:
            problems.append("d_max_km must be >= d_min_km")
        if not math.isfinite(self.step_km) or self.step_km <= 0:
            problems.append("step_km must be > 0")
        if not self.scenarios:
            problems.append("at least one scenario is required")
        if problems:
            raise ValidationError("; ".join(problems))
        # Canonical scenario order (enum declaration order) makes output
        # ordering deterministic regardless of how the set was given.
        wanted = set(self.scenarios)
        object.__setattr__(
            self, "scenarios", tuple(s for s in Scenario if s in wanted)
        )


@dataclass(frozen=True)
class SweepResult:
    """Rate series per scenario over the distance grid, plus cutoff distances.

    ``points`` is flat and scenario-major: all distances for the first
    scenario, then the next.  ``max_distance_km[scenario]`` is the bisected
    zero-rate crossing, or ``None`` when the rate never becomes positive or is
    still positive at the end of the grid.
    """

    scenarios: tuple[Scenario, ...]
    distances_km: tuple[float, ...]
    points: tuple[ScenarioRates, ...]
    max_distance_km: dict[Scenario, float | None]

    def series(self, scenario: Scenario) -> tuple[ScenarioRates, ...]:
        i = self.scenarios.index(scenario)
        n = len(self.distances_km)
        return self.points[i * n : (i + 1) * n]


def _distance_grid(d_min: float, d_max: float, step: float) -> tuple[float, ...]:
    count = int(math.floor((d_max - d_min) / step + 1e-9)) + 1
    return tuple(d_min + k * step for k in range(count))


def sweep(config: SweepConfig) -> SweepResult:
    """Evaluate every requested scenario over the inclusive distance grid.

    Output ordering is deterministic: scenario enumeration order, then
    ascending distance.  Grid points are independent, so errors carry the
    offending scenario and distance.
    """
    grid = _distance_grid(config.d_min_km, config.d_max_km, config.step_km)
    points: list[ScenarioRates] = []
    crossings: dict[Scenario, float | None] = {}
    for scenario in config.scenarios:
        series = []
        for d in grid:
            try:
                series.append(
                    secure_key_rate(scenario, config.params, replace(config.channel, distance_km=d))
                )
            except (ValidationError, ArithmeticError) as exc:
                raise type(exc)(f"{scenario.value} at {d} km: {exc}") from exc
        points.extend(series)
        crossings[scenario] = _grid_crossing(scenario, config, grid, series)
    return SweepResult(
        scenarios=config.scenarios,
        distances_km=grid,
        points=tuple(points),
        max_distance_km=crossings,
    )


def _grid_crossing(
    scenario: Scenario,
    config: SweepConfig,
    grid: tuple[float, ...],
    series: list[ScenarioRates],
) -> float | None:
    positive = [i for i, r in enumerate(series) if r.rate > 0]
    if not positive or positive[-1] == len(grid) - 1:
        return None
    i = positive[-1]
    return max_distance(
        scenario, config.params, config.channel, (grid[i], grid[i + 1])
    )


def max_distance(
    scenario: Scenario,
    params: InterferometerParams,
    channel: ChannelParams,
    bracket: tuple[float, float],
    tol_km: float = DEFAULT_BISECTION_TOL_KM,
) -> float:
    """Bisect the zero-rate distance inside ``bracket``.

    Requires a strict sign change: positive rate at the lower end,
    non-positive at the upper end.  Returns the positive-rate side of the
    final interval, i.e. the last distance known to yield key.  Brackets are
    never widened automatically; callers get a :class:`BracketError` instead.
    """
    if not math.isfinite(tol_km) or tol_km <= 0:
        raise ValidationError("tol_km must be > 0")
    lo, hi = bracket
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0:
        raise ValidationError("bracket endpoints must be finite and >= 0")
    if not lo < hi:
        raise BracketError(f"empty bracket ({lo}, {hi})")

    def rate_at(d: float) -> float:
        return secure_key_rate(scenario, params, replace(channel, distance_km=d)).rate

    r_lo, r_hi = rate_at(lo), rate_at(hi)
    if not (r_lo > 0 >= r_hi):
        raise BracketError(
            f"no sign change in bracket: rate({lo} km) = {r_lo:.6e}, rate({hi} km) = {r_hi:.6e}"
        )
    while hi - lo > tol_km:
        mid = 0.5 * (lo + hi)
        if rate_at(mid) > 0:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class MuOptimum:
    """Result of a mean-photon-number optimization."""

    mu_opt: float
    rate_opt: float
    zero_rate: bool  # True when no mu in the bracket yields a positive rate


def optimize_mu(
    scenario: Scenario,
    loss_ratio: float,
    channel: ChannelParams,
    mu_bracket: tuple[float, float],
    tol: float = DEFAULT_MU_TOL,
) -> MuOptimum:
    """Golden-section search for the rate-maximizing short-arm intensity.

    The long arm is held proportional, ``nu = loss_ratio * mu``, and the rate
    is evaluated at the channel's configured distance.  The rate is assumed
    unimodal in mu over the bracket.  If no bracket point yields a positive
    rate, the argmax is still reported with ``zero_rate`` set.
    """
    if not math.isfinite(loss_ratio) or not 0.0 < loss_ratio <= 1.0:
        raise ValidationError("loss_ratio must lie in (0, 1]")
    if not math.isfinite(tol) or tol <= 0:
        raise ValidationError("tol must be > 0")
    lo, hi = mu_bracket
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo <= 0 or not lo < hi:
        raise ValidationError("mu_bracket must satisfy 0 < lo < hi")
    # Validity across the bracket: mu - nu = mu * (1 - loss_ratio) grows with
    # mu, so checking the upper end suffices.
    InterferometerParams(hi, loss_ratio * hi)

    def rate_at(mu: float) -> float:
        return secure_key_rate(
            scenario, InterferometerParams(mu, loss_ratio * mu), channel
        ).rate

    a, b = lo, hi
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = rate_at(c), rate_at(d)
    while b - a > tol:
        if fc > fd:  # maximum in [a, d]
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = rate_at(c)
        else:  # maximum in [c, b]
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = rate_at(d)
    mu_opt = 0.5 * (a + b)
    rate_opt = rate_at(mu_opt)
    return MuOptimum(mu_opt=mu_opt, rate_opt=rate_opt, zero_rate=rate_opt <= 0.0)
