"""Photon-number statistics and single-photon geometry of the two-arm source.

A phase-coding transmitter splits each weak coherent pulse over the short and
long arms of an unbalanced Mach-Zehnder interferometer.  The long arm carries
the phase modulator and is lossier, so its mean photon number ``nu`` falls
below the short arm's ``mu`` and the emitted single-photon states are no
longer balanced BB84 states.  Because the global phase is randomized, the
channel only ever sees the photon-number-diagonal mixture: a Poisson
distribution with mean ``mu + nu``.

This module provides that distribution, the four unbalanced signal states,
and the virtual-source construction: a fictitious source whose single-photon
fraction is boosted by the inverse pass efficiency ``(mu + nu) / (2 mu)``,
such that feeding it through a basis-independent filter (which diverts the
surplus long-arm amplitude into a flag mode) reproduces the real source
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import DegenerateSourceError, ValidationError

#: Default truncation order for photon-number distributions.
DEFAULT_N_MAX = 64

#: Default ceiling on the probability mass beyond the truncation order.
DEFAULT_TAIL_TOL = 1e-15

#: Long-arm modulation phases in BB84 order: 0, pi/2, pi, 3pi/2.
BB84_PHASES = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)

# exp(i * phase) for the four BB84 phases, kept exact (no trig roundoff).
_PHASE_FACTORS = (1 + 0j, 1j, -1 + 0j, -1j)

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class InterferometerParams:
    """Arm intensities of the transmitter interferometer.

    ``mu`` is the mean photon number of the short-arm pulse and ``nu`` that of
    the long-arm pulse after its lossy phase modulator.  The loss is
    directional: ``nu`` may not exceed ``mu``, and ``mu - nu`` may not exceed 1
    or the virtual source's vacuum probability would turn negative.
    """

    mu: float
    nu: float

    def __post_init__(self) -> None:
        problems = []
        if not math.isfinite(self.mu) or not self.mu > 0:
            problems.append("mu must be a finite number > 0")
        if not math.isfinite(self.nu) or self.nu < 0:
            problems.append("nu must be a finite number >= 0")
        elif self.nu > self.mu:
            problems.append("nu exceeds mu (the modulated arm cannot be the brighter one)")
        if math.isfinite(self.mu - self.nu) and self.mu - self.nu > 1:
            problems.append(
                "mu - nu exceeds 1: the virtual source's vacuum probability would be negative"
            )
        if problems:
            raise ValidationError("; ".join(problems))

    @property
    def total_intensity(self) -> float:
        """Mean photon number entering the channel, both arms combined."""
        return self.mu + self.nu


@dataclass(frozen=True)
class PhotonNumberDistribution:
    """Probabilities over photon number ``0..n_max`` plus the explicit tail mass.

    ``probs[n]`` is the probability of emitting exactly ``n`` photons;
    ``tail_mass`` is the total probability of more than ``n_max``.  Entries are
    validated non-negative and the total mass must be 1 within 1e-12.  The
    probability vector is frozen (read-only) so instances can be shared.
    """

    probs: np.ndarray
    tail_mass: float
    n_max: int

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        if probs.shape != (self.n_max + 1,):
            raise ValidationError(
                f"probs must have n_max + 1 = {self.n_max + 1} entries, got {probs.shape}"
            )
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ValidationError("photon-number probabilities must be finite and >= 0")
        if not 0 <= self.tail_mass <= 1:
            raise ValidationError("tail_mass must lie in [0, 1]")
        total = float(probs.sum()) + self.tail_mass
        if abs(total - 1.0) > _NORM_TOL:
            raise ValidationError(f"total probability mass {total!r} is not 1 within {_NORM_TOL}")


@dataclass(frozen=True)
class UnbalancedQubit:
    """Single-photon state with one amplitude per interferometer arm.

    ``amp_short`` multiplies the short-arm one-photon ket, ``amp_long`` the
    long-arm one; ``basis_phase`` records which of the four BB84 phases was
    modulated onto the long arm.
    """

    amp_short: complex
    amp_long: complex
    basis_phase: float

    def __post_init__(self) -> None:
        norm_sq = abs(self.amp_short) ** 2 + abs(self.amp_long) ** 2
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValidationError(f"state is not normalized: |amp|^2 = {norm_sq!r}")

    def inner(self, other: "UnbalancedQubit") -> complex:
        """Hermitian inner product <self|other>."""
        return (
            self.amp_short.conjugate() * other.amp_short
            + self.amp_long.conjugate() * other.amp_long
        )


@dataclass(frozen=True)
class VirtualUnitaryImage:
    """Amplitudes the pass/divert filter puts on a long-arm photon.

    ``pass_amplitude`` stays in the channel, ``flag_amplitude`` goes to the
    transmitter-side flag mode; the two must form a unit vector.
    """

    pass_amplitude: float
    flag_amplitude: float

    def __post_init__(self) -> None:
        norm_sq = self.pass_amplitude**2 + self.flag_amplitude**2
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValidationError(f"filter amplitudes are not unitary: sum of squares {norm_sq!r}")


def poisson_pmf(mean: float, n: int) -> float:
    """Poisson probability of exactly ``n`` photons at the given mean.

    Evaluated in log space so it stays accurate for n well beyond 200.
    """
    if not math.isfinite(mean) or mean < 0:
        raise ValidationError("poisson_pmf: mean must be finite and >= 0")
    if n < 0:
        raise ValidationError("poisson_pmf: n must be >= 0")
    if mean == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(mean) - mean - math.lgamma(n + 1))


def _poisson_tail(mean: float, n_max: int) -> float:
    # P(N > n_max) via the regularized lower incomplete gamma function,
    # avoiding the cancellation of 1 - sum(pmf).
    return float(special.gammainc(n_max + 1, mean))


@lru_cache(maxsize=4096)
def _channel_distribution(params: InterferometerParams, n_max: int, tail_tol: float):
    s = params.total_intensity
    probs = np.array([poisson_pmf(s, n) for n in range(n_max + 1)])
    tail = _poisson_tail(s, n_max)
    if tail > tail_tol:
        raise ValidationError(
            f"truncation at n_max={n_max} leaves tail mass {tail:.3e} > {tail_tol:.3e};"
            " increase n_max or loosen tail_tol"
        )
    return PhotonNumberDistribution(probs, tail, n_max)


def channel_source_distribution(
    params: InterferometerParams,
    n_max: int = DEFAULT_N_MAX,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> PhotonNumberDistribution:
    """Photon-number distribution seen by the channel: Poisson with mean mu + nu."""
    return _channel_distribution(params, n_max, tail_tol)


def single_photon_state(params: InterferometerParams, phase_index: int) -> UnbalancedQubit:
    """One of the four unbalanced signal states.

    The amplitudes are ``(sqrt(mu), exp(i*phi) * sqrt(nu)) / sqrt(mu + nu)``
    with ``phi`` drawn from :data:`BB84_PHASES` by ``phase_index``.
    """
    if phase_index not in (0, 1, 2, 3):
        raise ValidationError(f"phase_index must be 0..3, got {phase_index!r}")
    s = params.total_intensity
    if s <= 0:
        raise DegenerateSourceError("mu + nu = 0: the source emits no photons")
    amp_short = math.sqrt(params.mu / s)
    amp_long = _PHASE_FACTORS[phase_index] * math.sqrt(params.nu / s)
    return UnbalancedQubit(amp_short, amp_long, BB84_PHASES[phase_index])


def pass_efficiency_alice(params: InterferometerParams) -> float:
    """Probability that a virtual-source single photon survives into the channel.

    Equals ``(mu + nu) / (2 mu)``; 1 only when the arms are balanced.
    """
    if params.mu <= 0:
        raise ValidationError("pass efficiency requires mu > 0")
    return params.total_intensity / (2.0 * params.mu)


@lru_cache(maxsize=4096)
def _virtual_distribution(params: InterferometerParams, n_max: int, tail_tol: float):
    s = params.total_intensity
    p_suc = pass_efficiency_alice(params)
    probs = np.array([poisson_pmf(s, n) for n in range(n_max + 1)])
    probs[1] = poisson_pmf(s, 1) / p_suc
    # Vacuum entry e^{-s}*(1 - s/p_suc + s) written as e^{-s}*(1 - (mu - nu)),
    # which cannot round below zero while mu - nu <= 1.
    probs[0] = math.exp(-s) * (1.0 - (params.mu - params.nu))
    tail = _poisson_tail(s, n_max)
    if tail > tail_tol:
        raise ValidationError(
            f"truncation at n_max={n_max} leaves tail mass {tail:.3e} > {tail_tol:.3e};"
            " increase n_max or loosen tail_tol"
        )
    return PhotonNumberDistribution(probs, tail, n_max)


def virtual_source_distribution(
    params: InterferometerParams,
    n_max: int = DEFAULT_N_MAX,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> PhotonNumberDistribution:
    """Photon-number distribution of the virtual (pre-filter) source.

    The single-photon probability is the channel's divided by the pass
    efficiency, the surplus is taken out of the vacuum entry, and all
    multi-photon entries coincide with the real Poisson source.  Parameters
    with ``mu - nu > 1`` are rejected at construction time, because the vacuum
    entry would be negative and no such source exists.
    """
    return _virtual_distribution(params, n_max, tail_tol)


def virtual_unitary_action(params: InterferometerParams) -> VirtualUnitaryImage:
    """Filter amplitudes applied to a long-arm single photon.

    A fraction ``sqrt(nu/mu)`` of the amplitude passes into the channel and
    ``sqrt((mu-nu)/mu)`` is diverted to the flag mode; short-arm photons and
    long-arm multi-photon components pass untouched.
    """
    if params.mu <= 0:
        raise ValidationError("filter amplitudes require mu > 0")
    if params.nu > params.mu:
        raise ValidationError("nu exceeds mu; the filter would need gain")
    return VirtualUnitaryImage(
        pass_amplitude=math.sqrt(params.nu / params.mu),
        flag_amplitude=math.sqrt((params.mu - params.nu) / params.mu),
    )
