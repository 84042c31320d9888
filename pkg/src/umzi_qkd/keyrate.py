"""Single-photon rate bounds and the tagged secure-key-rate composition.

Three treatments of the lossy long-arm modulator are compared against the
lossless reference:

* ``NAIVE_EVE_ATTENUATOR`` concedes the modulator loss to the channel, so the
  single-photon fraction is taken from a balanced source of intensity
  ``2 mu`` and pays both interferometer pass efficiencies.
* ``VIRTUAL_SOURCE`` re-books the same physics through a virtual balanced
  source followed by a basis-independent filter; the usable single-photon
  probability rises by ``exp(mu - nu)``.
* ``ACTIVE_COMPENSATION`` balances the arms with matching attenuators, which
  provably buys nothing: its detector-free bound equals the naive one.

The distance curves use the tagged (GLLP-style) lower bound with the
ideal-decoy assumption, i.e. the single-photon yield and error rate are taken
at their true channel values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .channel import (
    ChannelParams,
    LinkBudget,
    fiber_transmittance,
    overall_gain_and_qber,
    pass_efficiency_bob,
)
from .errors import UndefinedQberError, ValidationError
from .source import (
    DEFAULT_N_MAX,
    InterferometerParams,
    PhotonNumberDistribution,
    channel_source_distribution,
    pass_efficiency_alice,
    virtual_source_distribution,
)


class Scenario(Enum):
    """How the lossy long-arm modulator is treated in the rate accounting."""

    IDEAL_PM = "ideal"                   # lossless-modulator reference, nu forced to mu
    VIRTUAL_SOURCE = "virtual"           # loss absorbed into virtual source + filter
    NAIVE_EVE_ATTENUATOR = "naive"       # loss conceded to the channel
    ACTIVE_COMPENSATION = "compensated"  # matching attenuation added on the short arms


@dataclass(frozen=True)
class ScenarioRates:
    """Per-distance rate record for one scenario."""

    scenario: Scenario
    distance_km: float
    q_total: float
    e_total: float
    q1: float
    e1: float
    rate: float
    rate_clamped: float

    def __post_init__(self) -> None:
        if self.q1 > self.q_total + 1e-12:
            raise ValidationError("tagged single-photon gain exceeds the overall gain")
        if not 0.0 <= self.e1 <= 1.0:
            raise ValidationError("e1 must lie in [0, 1]")
        if self.rate_clamped < 0.0:
            raise ValidationError("rate_clamped must be >= 0")


def binary_entropy(x: float) -> float:
    """Binary Shannon entropy in bits, with H2(0) = H2(1) = 0 by continuity."""
    if not math.isfinite(x) or not 0.0 <= x <= 1.0:
        raise ValidationError(f"binary_entropy: argument {x!r} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _check_fiber_t(fiber_t: float) -> None:
    if not math.isfinite(fiber_t) or not 0.0 <= fiber_t <= 1.0:
        raise ValidationError("fiber transmittance must lie in [0, 1]")


def naive_single_photon_rate(params: InterferometerParams, fiber_t: float) -> float:
    """Detector-free single-photon rate when the modulator loss is conceded to Eve.

    Single-photon probability ``exp(-2 mu) * 2 mu`` of the balanced source,
    times the fiber and the transmitter/receiver pass efficiencies
    ``(mu+nu)/(2 mu) * nu/(mu+nu)``, which collapse to ``nu / (2 mu)``.
    """
    _check_fiber_t(fiber_t)
    return math.exp(-2.0 * params.mu) * 2.0 * params.mu * fiber_t * (params.nu / (2.0 * params.mu))


def virtual_single_photon_rate(params: InterferometerParams, fiber_t: float) -> float:
    """Detector-free single-photon rate under the virtual-source accounting.

    The virtual single-photon probability times the filter pass efficiency is
    ``exp(-(mu+nu)) * (mu+nu)``, and only the receiver efficiency
    ``nu / (mu+nu)`` remains to be paid.
    """
    _check_fiber_t(fiber_t)
    s = params.total_intensity
    return math.exp(-s) * s * fiber_t * (params.nu / s)


def compensated_single_photon_rate(params: InterferometerParams, fiber_t: float) -> float:
    """Detector-free single-photon rate with actively balanced arms.

    The transmitter pass efficiency becomes 1 but the matching attenuation in
    the receiver's short arm costs ``nu / (2 mu)``: the same product as the
    naive treatment, so compensation buys nothing.
    """
    _check_fiber_t(fiber_t)
    return math.exp(-2.0 * params.mu) * 2.0 * params.mu * fiber_t * (params.nu / (2.0 * params.mu))


def improvement_factor(params: InterferometerParams) -> float:
    """Ratio of the virtual-source bound to the naive bound: ``exp(mu - nu)``."""
    return math.exp(params.mu - params.nu)


def ideal_decoy_bounds(
    dist: PhotonNumberDistribution,
    eta1: float,
    ch: ChannelParams,
) -> tuple[float, float]:
    """Single-photon yield and error rate under the ideal-decoy assumption.

    With infinitely many decoy settings the estimates converge to the true
    channel values ``y1 = y0 + eta1`` and ``e1 = (e0*y0 + e_det*eta1) / y1``,
    independent of the photon-number mixture actually sent (``dist`` is
    accepted for interface symmetry with the gain computation).
    """
    if not math.isfinite(eta1) or not 0.0 <= eta1 <= 1.0:
        raise ValidationError("eta1 must lie in [0, 1]")
    del dist
    y1 = min(1.0, ch.y0 + eta1)
    if y1 <= 0.0:
        raise UndefinedQberError("single-photon yield is zero; e1 is undefined")
    e1 = (ch.e0 * ch.y0 + ch.e_det * eta1) / y1
    return y1, min(max(e1, 0.0), 1.0)


@dataclass(frozen=True)
class _ScenarioModel:
    source: PhotonNumberDistribution  # what the channel actually sees
    p_b: float                        # receiver pass efficiency
    tagged_p1: float                  # single-photon probability credited as secure
    eta1: float                       # end-to-end transmittance of a tagged photon


def _scenario_model(
    scenario: Scenario,
    params: InterferometerParams,
    ch: ChannelParams,
    fiber_t: float,
    n_max: int,
) -> _ScenarioModel:
    if scenario is Scenario.IDEAL_PM:
        # Lossless modulator: both arms at mu, balanced receiver.
        ideal = InterferometerParams(params.mu, params.mu)
        return _ScenarioModel(
            source=channel_source_distribution(ideal, n_max),
            p_b=0.5,
            tagged_p1=math.exp(-2.0 * params.mu) * 2.0 * params.mu,
            eta1=fiber_t * 0.5 * ch.eta_bob,
        )
    if scenario is Scenario.VIRTUAL_SOURCE:
        p_b = pass_efficiency_bob(params)
        return _ScenarioModel(
            source=channel_source_distribution(params, n_max),
            p_b=p_b,
            tagged_p1=float(virtual_source_distribution(params, n_max).probs[1]),
            eta1=pass_efficiency_alice(params) * fiber_t * p_b * ch.eta_bob,
        )
    if scenario is Scenario.NAIVE_EVE_ATTENUATOR:
        # Same channel physics as the virtual treatment; only the bookkeeping
        # of the single-photon fraction differs.
        return _ScenarioModel(
            source=channel_source_distribution(params, n_max),
            p_b=pass_efficiency_bob(params),
            tagged_p1=math.exp(-2.0 * params.mu) * 2.0 * params.mu,
            eta1=(params.nu / (2.0 * params.mu)) * fiber_t * ch.eta_bob,
        )
    if scenario is Scenario.ACTIVE_COMPENSATION:
        balanced = InterferometerParams(params.mu, params.mu)
        p_b = pass_efficiency_bob(params, compensated=True)
        return _ScenarioModel(
            source=channel_source_distribution(balanced, n_max),
            p_b=p_b,
            tagged_p1=math.exp(-2.0 * params.mu) * 2.0 * params.mu,
            eta1=fiber_t * p_b * ch.eta_bob,
        )
    raise ValidationError(f"unknown scenario {scenario!r}")


def secure_key_rate(
    scenario: Scenario,
    params: InterferometerParams,
    ch: ChannelParams,
    n_max: int = DEFAULT_N_MAX,
) -> ScenarioRates:
    """Tagged secure key rate per pulse at the channel's configured distance.

    Composes the overall gain/QBER of the scenario's channel statistics with
    the ideal-decoy single-photon yield:

    ``R = q_sift * (-Q * f_ec * H2(E) + Q1 * (1 - H2(e1)))``

    where ``Q1 = p1_tagged * (y0 + eta1)`` and ``e1`` is clamped to [0, 0.5]
    before the entropy evaluation.  Multi-photon pulses earn nothing; their
    cost is carried entirely by the tagging structure.
    """
    fiber_t = fiber_transmittance(ch.alpha_db_per_km, ch.distance_km)
    model = _scenario_model(scenario, params, ch, fiber_t, n_max)
    budget = LinkBudget.from_factors(fiber_t, model.p_b, ch.eta_bob)
    q_total, e_total = overall_gain_and_qber(model.source, budget, ch)
    y1, e1 = ideal_decoy_bounds(model.source, model.eta1, ch)
    q1 = model.tagged_p1 * y1
    e1_ent = min(e1, 0.5)
    rate = ch.q_sift * (
        -q_total * ch.f_ec * binary_entropy(e_total) + q1 * (1.0 - binary_entropy(e1_ent))
    )
    return ScenarioRates(
        scenario=scenario,
        distance_km=ch.distance_km,
        q_total=q_total,
        e_total=e_total,
        q1=q1,
        e1=e1,
        rate=rate,
        rate_clamped=max(rate, 0.0),
    )


def detector_free_rate(scenario: Scenario, params: InterferometerParams, fiber_t: float) -> float:
    """Scenario's detector-free single-photon bound (diagnostic column)."""
    if scenario is Scenario.IDEAL_PM:
        _check_fiber_t(fiber_t)
        return math.exp(-2.0 * params.mu) * 2.0 * params.mu * fiber_t * 0.5
    if scenario is Scenario.VIRTUAL_SOURCE:
        return virtual_single_photon_rate(params, fiber_t)
    if scenario is Scenario.NAIVE_EVE_ATTENUATOR:
        return naive_single_photon_rate(params, fiber_t)
    if scenario is Scenario.ACTIVE_COMPENSATION:
        return compensated_single_photon_rate(params, fiber_t)
    raise ValidationError(f"unknown scenario {scenario!r}")
