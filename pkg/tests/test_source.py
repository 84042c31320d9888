"""Source model: photon-number statistics, signal states, virtual source."""

import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings

from umzi_qkd import (
    BB84_PHASES,
    DegenerateSourceError,
    InterferometerParams,
    PhotonNumberDistribution,
    UnbalancedQubit,
    ValidationError,
    VirtualUnitaryImage,
    channel_source_distribution,
    pass_efficiency_alice,
    poisson_pmf,
    single_photon_state,
    virtual_source_distribution,
    virtual_unitary_action,
)

from conftest import random_valid_params, valid_params

PARAMS = InterferometerParams(0.4, 0.067)

# Frozen oracle values, computed at 50-digit precision from the closed forms.
POIS_0467_1 = 0.29275300222258007   # 0.467 * exp(-0.467)
POIS_08_2 = 0.14378526851751091     # 0.32 * exp(-0.8)
EXP_M08 = 0.44932896411722159
EXP_M0467 = 0.62688009041237703
POIS_0467_2 = 0.068357826018972447
AMP_SHORT = 0.92548962676549505     # sqrt(0.4 / 0.467)
AMP_LONG = 0.37877295408920720      # sqrt(0.067 / 0.467)
P1_VIRT = 0.50150407232990162       # exp(-0.467) * 0.8
P0_VIRT = 0.41812902030505548
U_PASS = 0.40926763859362250        # sqrt(0.067 / 0.4)
U_FLAG = 0.91241437954473295        # sqrt(0.333 / 0.4)


class TestInterferometerParams:
    def test_valid(self):
        p = InterferometerParams(0.4, 0.067)
        assert p.total_intensity == 0.4 + 0.067

    @pytest.mark.parametrize(
        "mu,nu",
        [(0.0, 0.0), (-0.1, 0.0), (0.4, -0.01), (0.4, 0.5), (1.5, 0.2), (float("nan"), 0.1)],
    )
    def test_rejected(self, mu, nu):
        with pytest.raises(ValidationError):
            InterferometerParams(mu, nu)

    def test_nu_exceeds_mu_message(self):
        with pytest.raises(ValidationError, match="nu exceeds mu"):
            InterferometerParams(0.4, 0.5)

    def test_negative_vacuum_message(self):
        with pytest.raises(ValidationError, match="vacuum"):
            InterferometerParams(1.2, 0.1)


class TestPoissonPmf:
    def test_vacuum_source(self):
        assert poisson_pmf(0.0, 0) == 1.0
        assert poisson_pmf(0.0, 3) == 0.0

    def test_examples(self):
        assert poisson_pmf(0.467, 1) == pytest.approx(POIS_0467_1, rel=1e-14)
        assert poisson_pmf(0.467, 1) == pytest.approx(0.467 * math.exp(-0.467), rel=1e-14)
        assert poisson_pmf(0.8, 2) == pytest.approx(POIS_08_2, rel=1e-14)
        assert poisson_pmf(0.8, 2) == pytest.approx(0.32 * math.exp(-0.8), rel=1e-14)

    def test_series_cross_check(self):
        # exp(-x) via 50 exact rational series terms; truncation error ~1e-81.
        x = Fraction(467, 1000)
        series = sum((-x) ** k / math.factorial(k) for k in range(50))
        assert poisson_pmf(0.467, 1) == pytest.approx(float(x * series), rel=1e-13)

    def test_large_n_stability(self):
        # Naive mean**n / n! overflows around n ~ 170; log space must not.
        assert poisson_pmf(100.0, 200) == pytest.approx(
            scipy.stats.poisson.pmf(200, 100.0), rel=1e-10
        )
        assert 0.0 < poisson_pmf(30.0, 250) < 1.0
        total = sum(poisson_pmf(2.0, n) for n in range(301))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValidationError):
            poisson_pmf(-0.1, 0)
        with pytest.raises(ValidationError):
            poisson_pmf(0.5, -1)


class TestChannelSourceDistribution:
    def test_unbalanced_example(self):
        dist = channel_source_distribution(PARAMS, n_max=20)
        assert dist.probs[1] == pytest.approx(POIS_0467_1, rel=1e-14)
        assert dist.tail_mass < 1e-15
        assert dist.n_max == 20

    def test_balanced_example(self):
        dist = channel_source_distribution(InterferometerParams(0.4, 0.4), n_max=20)
        assert dist.probs[0] == pytest.approx(EXP_M08, rel=1e-14)

    def test_dead_long_arm_reduces_to_single_arm(self):
        dist = channel_source_distribution(InterferometerParams(0.4, 0.0), n_max=20)
        expected = scipy.stats.poisson.pmf(np.arange(21), 0.4)
        np.testing.assert_allclose(dist.probs, expected, rtol=1e-12)

    def test_tail_guard(self):
        with pytest.raises(ValidationError, match="tail"):
            channel_source_distribution(PARAMS, n_max=2)

    def test_distribution_type_invariants(self):
        with pytest.raises(ValidationError):
            PhotonNumberDistribution(np.array([0.5, 0.4]), 0.2, 1)  # mass 1.1
        with pytest.raises(ValidationError):
            PhotonNumberDistribution(np.array([-0.1, 1.1]), 0.0, 1)
        dist = channel_source_distribution(PARAMS)
        assert not dist.probs.flags.writeable


class TestSinglePhotonState:
    def test_balanced_is_standard_bb84(self):
        q = single_photon_state(InterferometerParams(0.3, 0.3), 0)
        assert q.amp_short == pytest.approx(1 / math.sqrt(2), rel=1e-15)
        assert q.amp_long == pytest.approx(1 / math.sqrt(2), rel=1e-15)

    def test_unbalanced_pi_phase(self):
        q = single_photon_state(PARAMS, 2)
        assert q.amp_short == pytest.approx(AMP_SHORT, rel=1e-14)
        assert q.amp_long.real == pytest.approx(-AMP_LONG, rel=1e-14)
        assert q.amp_long.imag == 0.0
        assert q.basis_phase == math.pi

    def test_unbalanced_quadrature_phase(self):
        q = single_photon_state(PARAMS, 1)
        assert q.amp_long == pytest.approx(1j * AMP_LONG, rel=1e-14)

    def test_four_phase_factors(self):
        factors = [single_photon_state(PARAMS, k).amp_long / AMP_LONG for k in range(4)]
        expected = [1, 1j, -1, -1j]
        for got, want in zip(factors, expected):
            assert got == pytest.approx(want, abs=1e-12)

    def test_phase_index_validation(self):
        with pytest.raises(ValidationError):
            single_photon_state(PARAMS, 4)

    def test_degenerate_source_error_type_exists(self):
        # Valid params always have mu + nu > 0, so the degenerate branch is a
        # guard; the error class is part of the contract.
        assert issubclass(DegenerateSourceError, ValidationError)

    @given(valid_params())
    @settings(max_examples=150, deadline=None)
    def test_unit_norm(self, params):
        for k in range(4):
            q = single_photon_state(params, k)
            assert abs(abs(q.amp_short) ** 2 + abs(q.amp_long) ** 2 - 1.0) <= 1e-12

    @given(valid_params())
    @settings(max_examples=150, deadline=None)
    def test_overlap_of_opposite_phases(self, params):
        # The 0 and pi states are not orthogonal: <psi0|psi2> = (mu-nu)/(mu+nu).
        overlap = single_photon_state(params, 0).inner(single_photon_state(params, 2))
        expected = (params.mu - params.nu) / params.total_intensity
        assert overlap.real == pytest.approx(expected, abs=1e-12)
        assert overlap.imag == pytest.approx(0.0, abs=1e-12)


class TestPassEfficiencyAlice:
    def test_examples(self):
        assert pass_efficiency_alice(InterferometerParams(0.4, 0.4)) == 1.0
        assert pass_efficiency_alice(PARAMS) == pytest.approx(0.58375, rel=1e-15)
        assert pass_efficiency_alice(InterferometerParams(0.5, 0.0)) == 0.5

    @given(valid_params())
    @settings(max_examples=150, deadline=None)
    def test_in_unit_interval(self, params):
        assert 0.0 < pass_efficiency_alice(params) <= 1.0


class TestVirtualSourceDistribution:
    def test_examples(self):
        dist = virtual_source_distribution(PARAMS)
        assert dist.probs[1] == pytest.approx(P1_VIRT, rel=1e-14)
        assert dist.probs[0] == pytest.approx(P0_VIRT, rel=1e-14)
        assert dist.probs[2] == pytest.approx(POIS_0467_2, rel=1e-14)

    def test_single_photon_bookkeeping_example(self):
        # p1~ * P_suc must equal the real source's single-photon probability.
        dist = virtual_source_distribution(PARAMS)
        p1 = float(dist.probs[1]) * pass_efficiency_alice(PARAMS)
        assert p1 == pytest.approx(POIS_0467_1, rel=1e-15)

    def test_balanced_collapse(self):
        params = InterferometerParams(0.4, 0.4)
        virt = virtual_source_distribution(params)
        chan = channel_source_distribution(params)
        np.testing.assert_allclose(virt.probs, chan.probs, rtol=0, atol=1e-15)
        assert virt.tail_mass == chan.tail_mass

    def test_rejects_mu_minus_nu_above_one(self):
        with pytest.raises(ValidationError, match="vacuum"):
            InterferometerParams(1.3, 0.2)

    @given(valid_params())
    @settings(max_examples=200, deadline=None)
    def test_normalization(self, params):
        dist = virtual_source_distribution(params)
        assert abs(float(dist.probs.sum()) + dist.tail_mass - 1.0) <= 1e-12
        assert np.all(dist.probs >= 0)

    @given(valid_params())
    @settings(max_examples=200, deadline=None)
    def test_consistency_identity(self, params):
        dist = virtual_source_distribution(params)
        lhs = float(dist.probs[1]) * pass_efficiency_alice(params)
        rhs = poisson_pmf(params.total_intensity, 1)
        assert lhs == pytest.approx(rhs, rel=1e-15)

    def test_reduction_on_grid(self, rng):
        for params in random_valid_params(rng, 50):
            balanced = InterferometerParams(params.mu, params.mu)
            virt = virtual_source_distribution(balanced)
            chan = channel_source_distribution(balanced)
            np.testing.assert_allclose(virt.probs, chan.probs, rtol=0, atol=1e-15)


class TestVirtualUnitaryAction:
    def test_examples(self):
        img = virtual_unitary_action(PARAMS)
        assert img.pass_amplitude == pytest.approx(U_PASS, rel=1e-14)
        assert img.flag_amplitude == pytest.approx(U_FLAG, rel=1e-14)

    def test_balanced_is_identity(self):
        img = virtual_unitary_action(InterferometerParams(0.4, 0.4))
        assert img.pass_amplitude == 1.0
        assert img.flag_amplitude == 0.0

    def test_dead_long_arm_always_flags(self):
        img = virtual_unitary_action(InterferometerParams(0.5, 0.0))
        assert img.pass_amplitude == 0.0
        assert img.flag_amplitude == 1.0

    def test_image_type_rejects_non_unitary(self):
        with pytest.raises(ValidationError):
            VirtualUnitaryImage(0.9, 0.9)

    @given(valid_params())
    @settings(max_examples=200, deadline=None)
    def test_unitarity(self, params):
        img = virtual_unitary_action(params)
        assert abs(img.pass_amplitude**2 + img.flag_amplitude**2 - 1.0) <= 1e-12

    @given(valid_params())
    @settings(max_examples=100, deadline=None)
    def test_conditional_state_reconstruction(self, params):
        # Filtering the balanced state must leave norm^2 = P_suc in the channel
        # and renormalize to the unbalanced signal state, for all four phases.
        img = virtual_unitary_action(params)
        balanced = InterferometerParams(params.mu, params.mu)
        for k in range(4):
            b = single_photon_state(balanced, k)
            ch_short = b.amp_short
            ch_long = b.amp_long * img.pass_amplitude
            norm_sq = abs(ch_short) ** 2 + abs(ch_long) ** 2
            assert norm_sq == pytest.approx(pass_efficiency_alice(params), abs=1e-12)
            target = single_photon_state(params, k)
            norm = math.sqrt(norm_sq)
            assert ch_short / norm == pytest.approx(target.amp_short, abs=1e-12)
            assert ch_long / norm == pytest.approx(target.amp_long, abs=1e-12)


def test_unbalanced_qubit_rejects_unnormalized():
    with pytest.raises(ValidationError):
        UnbalancedQubit(1.0, 0.5, 0.0)


def test_bb84_phases_ordering():
    assert BB84_PHASES == (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)
