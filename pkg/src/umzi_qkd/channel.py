"""Fiber, receiver interferometer, and threshold-detector model.

Produces the per-pulse detection probability (gain) and error fraction (QBER)
for a given photon-number distribution, using the standard threshold-detector
yield ``Y_n = y0 + 1 - (1 - eta)^n`` with double clicks counted as random
bits.  The receiver interferometer enters only as a multiplicative pass
efficiency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedQberError, ValidationError
from .source import InterferometerParams, PhotonNumberDistribution

# Fiber/detector defaults from the Gobby-Yuan-Shields 122 km fiber QKD
# experiment, the customary benchmark set for rate-vs-distance studies.
GYS_ALPHA_DB_PER_KM = 0.21
GYS_ETA_BOB = 0.045
GYS_Y0 = 1.7e-6
GYS_E_DET = 0.033

DEFAULT_E0 = 0.5      # dark counts carry no bit information
DEFAULT_F_EC = 1.22   # constant error-correction inefficiency
DEFAULT_Q_SIFT = 0.5  # basis-sifting factor


@dataclass(frozen=True)
class ChannelParams:
    """Fiber and detector parameters for one link configuration."""

    alpha_db_per_km: float = GYS_ALPHA_DB_PER_KM
    distance_km: float = 0.0
    eta_bob: float = GYS_ETA_BOB
    y0: float = GYS_Y0
    e_det: float = GYS_E_DET
    e0: float = DEFAULT_E0
    f_ec: float = DEFAULT_F_EC
    q_sift: float = DEFAULT_Q_SIFT

    def __post_init__(self) -> None:
        problems = []
        if not math.isfinite(self.alpha_db_per_km) or self.alpha_db_per_km <= 0:
            problems.append("alpha_db_per_km must be > 0")
        if not math.isfinite(self.distance_km) or self.distance_km < 0:
            problems.append("distance_km must be >= 0")
        for name in ("eta_bob", "y0", "e_det", "e0"):
            value = getattr(self, name)
            if not math.isfinite(value) or not 0.0 <= value <= 1.0:
                problems.append(f"{name} must lie in [0, 1]")
        if not math.isfinite(self.f_ec) or self.f_ec < 1.0:
            problems.append("f_ec must be >= 1")
        if not math.isfinite(self.q_sift) or not 0.0 < self.q_sift <= 1.0:
            problems.append("q_sift must lie in (0, 1]")
        if problems:
            raise ValidationError("; ".join(problems))


@dataclass(frozen=True)
class LinkBudget:
    """Multiplicative transmittance budget for one channel photon."""

    fiber_transmittance: float
    p_b: float
    eta_total: float

    def __post_init__(self) -> None:
        for name in ("fiber_transmittance", "p_b", "eta_total"):
            value = getattr(self, name)
            if not math.isfinite(value) or not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1]")
        # eta_total = fiber * p_b * eta_bob with eta_bob <= 1.
        if self.eta_total > self.fiber_transmittance * self.p_b + 1e-15:
            raise ValidationError("eta_total exceeds the product of its factors")

    @classmethod
    def from_factors(cls, fiber_t: float, p_b: float, eta_bob: float) -> "LinkBudget":
        return cls(fiber_t, p_b, fiber_t * p_b * eta_bob)


def fiber_transmittance(alpha_db_per_km: float, distance_km: float) -> float:
    """Fiber transmittance ``10^(-alpha * l / 10)``."""
    if not math.isfinite(alpha_db_per_km) or alpha_db_per_km <= 0:
        raise ValidationError("alpha_db_per_km must be > 0")
    if not math.isfinite(distance_km) or distance_km < 0:
        raise ValidationError("distance_km must be >= 0")
    return 10.0 ** (-alpha_db_per_km * distance_km / 10.0)


def pass_efficiency_bob(params: InterferometerParams, compensated: bool = False) -> float:
    """Receiver interferometer pass efficiency for a channel single photon.

    Uncompensated receiver: ``nu / (mu + nu)``.  With matching attenuation
    added in the receiver's short arm: ``nu / (2 mu)``.
    """
    if params.total_intensity <= 0:
        raise ValidationError("pass efficiency requires mu + nu > 0")
    if compensated:
        return params.nu / (2.0 * params.mu)
    return params.nu / params.total_intensity


def yield_n(eta_total: float, y0: float, n: int) -> float:
    """Detection probability of an n-photon pulse: ``y0 + 1 - (1 - eta)^n``, in [0, 1]."""
    if not 0.0 <= eta_total <= 1.0:
        raise ValidationError("eta_total must lie in [0, 1]")
    if not 0.0 <= y0 <= 1.0:
        raise ValidationError("y0 must lie in [0, 1]")
    if n < 0:
        raise ValidationError("n must be >= 0")
    return min(1.0, max(0.0, y0 + 1.0 - (1.0 - eta_total) ** n))


def overall_gain_and_qber(
    dist: PhotonNumberDistribution,
    budget: LinkBudget,
    ch: ChannelParams,
) -> tuple[float, float]:
    """Per-pulse gain and QBER of the source `dist` sent through `budget`.

    Gain is the yield-weighted sum over photon number; the error numerator
    composes random dark-count errors ``e0 * y0`` with misalignment errors on
    the signal clicks.  The truncated tail contributes with the saturated
    (n -> infinity) yield.  For a Poisson source both results agree with the
    closed forms ``y0 + 1 - exp(-eta*s)`` and ``e0*y0 + e_det*(1 - exp(-eta*s))``.
    """
    eta = budget.eta_total
    n = np.arange(dist.n_max + 1)
    signal = 1.0 - (1.0 - eta) ** n
    yields = np.clip(ch.y0 + signal, 0.0, 1.0)
    error_terms = ch.e0 * ch.y0 + ch.e_det * signal

    tail_signal = 1.0 if eta > 0 else 0.0
    tail_yield = min(1.0, ch.y0 + tail_signal)
    tail_error = ch.e0 * ch.y0 + ch.e_det * tail_signal

    gain = float(dist.probs @ yields) + dist.tail_mass * tail_yield
    error_mass = float(dist.probs @ error_terms) + dist.tail_mass * tail_error
    if gain <= 0.0:
        raise UndefinedQberError(
            "overall gain is zero (total loss, no dark counts); QBER is undefined"
        )
    gain = min(gain, 1.0)
    qber = min(max(error_mass / gain, 0.0), 1.0)
    return gain, qber
