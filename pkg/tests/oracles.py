"""Independent closed-form rate evaluator used as a test oracle.

Deliberately avoids the package's photon-number-sum machinery: gain and QBER
come straight from the Poisson closed forms, so agreement with the production
path is a real check rather than a tautology.
"""

import math

from umzi_qkd import ChannelParams, Scenario


def h2(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def closed_form_rate(
    scenario: Scenario, mu: float, nu: float, ch: ChannelParams, distance_km: float
) -> float:
    """Secure key rate from closed forms only (no truncated sums)."""
    fiber = 10.0 ** (-ch.alpha_db_per_km * distance_km / 10.0)
    if scenario is Scenario.IDEAL_PM:
        s, p_b = 2.0 * mu, 0.5
        p1 = math.exp(-2.0 * mu) * 2.0 * mu
        eta1 = fiber * 0.5 * ch.eta_bob
    elif scenario is Scenario.VIRTUAL_SOURCE:
        s = mu + nu
        p_b = nu / s
        p1 = math.exp(-s) * 2.0 * mu
        eta1 = (s / (2.0 * mu)) * fiber * p_b * ch.eta_bob
    elif scenario is Scenario.NAIVE_EVE_ATTENUATOR:
        s = mu + nu
        p_b = nu / s
        p1 = math.exp(-2.0 * mu) * 2.0 * mu
        eta1 = (nu / (2.0 * mu)) * fiber * ch.eta_bob
    elif scenario is Scenario.ACTIVE_COMPENSATION:
        s, p_b = 2.0 * mu, nu / (2.0 * mu)
        p1 = math.exp(-2.0 * mu) * 2.0 * mu
        eta1 = fiber * p_b * ch.eta_bob
    else:
        raise AssertionError(scenario)
    eta_t = fiber * p_b * ch.eta_bob
    q = ch.y0 + 1.0 - math.exp(-eta_t * s)
    e = (ch.e0 * ch.y0 + ch.e_det * (1.0 - math.exp(-eta_t * s))) / q
    y1 = ch.y0 + eta1
    e1 = (ch.e0 * ch.y0 + ch.e_det * eta1) / y1
    q1 = p1 * y1
    return ch.q_sift * (-q * ch.f_ec * h2(e) + q1 * (1.0 - h2(min(e1, 0.5))))
