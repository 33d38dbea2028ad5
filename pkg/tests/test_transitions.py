"""Multiphoton transition tables, conservation bookkeeping, and the
quasiclassical peak correspondence."""

import math

import pytest

from cyclores import (
    FieldConfig,
    ParticleState,
    derived_scales,
    peak_compare,
    quasiclassical_predict,
    transition_table,
    zeta_from_amplitude,
)
from cyclores.constants import C_LIGHT, HBAR

from conftest import H0_REF, resonant_field


def _normal_setup(s=0):
    particle = ParticleState.electron(s=s)
    field = FieldConfig(H0=H0_REF, n=1.0, omega=1e12, g=1)
    return particle, field, derived_scales(particle, field)


def _anomalous_setup(s=0):
    particle = ParticleState.electron(s=s)
    field = FieldConfig(H0=H0_REF, n=2.0, omega=1e12, g=-1)
    return particle, field, derived_scales(particle, field)


class TestTransitionTable:
    def test_zero_displacement_is_elastic(self):
        _, field, scales = _normal_setup(s=3)
        table = transition_table(3, 0.0, field, scales)
        assert len(table.records) == 1
        record = table.records[0]
        assert record.s_prime == 3 and record.w == 1.0 and record.photons == 0
        assert table.total == 1.0

    def test_ground_state_elastic_weight(self):
        _, field, scales = _normal_setup()
        table = transition_table(0, 2.0, field, scales)
        assert table.records[0].s_prime == 0
        assert table.records[0].w == pytest.approx(math.exp(-2.0), rel=1e-13)
        assert 1.0 - 1e-8 <= table.total <= 1.0

    @pytest.mark.parametrize("s", [0, 1, 5, 20])
    @pytest.mark.parametrize("zeta", [0.1, 1.0, 5.0])
    def test_unitarity(self, s, zeta):
        _, field, scales = _normal_setup(s)
        table = transition_table(s, zeta, field, scales)
        assert 1.0 - 1e-8 <= table.total <= 1.0
        assert all(0.0 <= r.w <= 1.0 for r in table.records)
        assert table.cutoff_meta.tail_estimate < 1e-8

    def test_mean_photon_number(self):
        # The displaced distribution has mean s' = s + zeta, so the
        # emitted-photon count s - s' averages to -zeta.
        _, field, scales = _normal_setup(s=5)
        zeta = 3.0
        table = transition_table(5, zeta, field, scales)
        mean = math.fsum(r.photons * r.w for r in table.records)
        assert mean == pytest.approx(-zeta, rel=1e-8)

    def test_conservation_coupling(self):
        _, field, scales = _anomalous_setup(s=4)
        table = transition_table(4, 2.5, field, scales)
        for record in table.records:
            assert math.isclose(
                record.delta_E * field.n, C_LIGHT * record.delta_pz,
                rel_tol=1e-15, abs_tol=0.0,
            )

    def test_energy_flow_sign_by_regime(self):
        # Normal Doppler: net absorption from the wave (wave-side
        # energy change -zeta hbar omega); anomalous: net emission.
        zeta = 1.5
        for setup, sign in ((_normal_setup, -1.0), (_anomalous_setup, +1.0)):
            _, field, scales = setup(s=2)
            table = transition_table(2, zeta, field, scales)
            net = math.fsum(r.delta_E * r.w for r in table.records)
            expected = sign * zeta * HBAR * field.omega
            assert net == pytest.approx(expected, rel=1e-8)

    def test_band_suppression(self):
        # Outside (sqrt(s') - sqrt(s))^2 <= zeta + 10 sqrt(zeta) the
        # probabilities are negligible against the row maximum.
        s, zeta = 10, 2.0
        _, field, scales = _normal_setup(s)
        table = transition_table(s, zeta, field, scales)
        w_max = max(r.w for r in table.records)
        edge = zeta + 10.0 * math.sqrt(zeta)
        for record in table.records:
            if (math.sqrt(record.s_prime) - math.sqrt(s)) ** 2 > edge:
                assert record.w < 1e-6 * w_max

    def test_records_sorted_and_cutoff_meta(self):
        _, field, scales = _normal_setup(s=5)
        table = transition_table(5, 4.0, field, scales)
        levels = [r.s_prime for r in table.records]
        assert levels == sorted(levels)
        assert table.cutoff_meta.s_prime_min == levels[0]
        assert table.cutoff_meta.s_prime_max == levels[-1]
        assert table.cutoff_meta.n_dropped >= 0

    def test_rejects_invalid(self):
        _, field, scales = _normal_setup()
        with pytest.raises(ValueError):
            transition_table(-1, 1.0, field, scales)
        with pytest.raises(ValueError):
            transition_table(0, -1.0, field, scales)


class TestZetaFromAmplitude:
    def test_scaling(self):
        _, _, scales = _normal_setup()
        f1 = resonant_field(A_bar=1e-6, T=1e-6)
        f2 = resonant_field(A_bar=2e-6, T=1e-6)
        f3 = resonant_field(A_bar=1e-6, T=3e-6)
        z1 = zeta_from_amplitude(f1, scales)
        assert zeta_from_amplitude(f2, scales) == pytest.approx(4.0 * z1, rel=1e-12)
        assert zeta_from_amplitude(f3, scales) == pytest.approx(9.0 * z1, rel=1e-12)

    def test_zero_drive(self):
        _, field, scales = _normal_setup()
        assert zeta_from_amplitude(field, scales) == 0.0


class TestQuasiclassical:
    def test_shift_identity(self):
        # e E v_tr T / (hbar omega) collapses to 2 sqrt(s zeta) for any
        # drive: the two routes must agree to rounding.
        _, _, scales = _normal_setup()
        field = resonant_field(A_bar=3e-7, T=2e-6)
        s = 2500
        pred = quasiclassical_predict(s, field, scales)
        zeta = zeta_from_amplitude(field, scales)
        assert pred.predicted_shift == pytest.approx(
            2.0 * math.sqrt(s * zeta), rel=1e-12
        )
        assert pred.zeta_from_cl == pytest.approx(zeta, rel=1e-12)
        # the band of final levels brackets the distribution mean s + zeta
        assert pred.zeta_peak_band[0] < s + zeta < pred.zeta_peak_band[1]

    def test_warns_below_asymptotic_range(self):
        _, _, scales = _normal_setup()
        field = resonant_field(A_bar=1e-7, T=1e-6)
        with pytest.warns(UserWarning, match="asymptotic"):
            quasiclassical_predict(50, field, scales)

    def test_zero_index(self):
        _, _, scales = _normal_setup()
        field = resonant_field(A_bar=1e-7, T=1e-6)
        with pytest.warns(UserWarning):
            pred = quasiclassical_predict(0, field, scales)
        assert pred.predicted_shift == 0.0
        assert pred.zeta_from_cl == 0.0


class TestPeakCompare:
    def test_reference_point(self):
        # s = 2500, zeta = 1: predicted shift 100, scanned peak at 95.
        comparison = peak_compare(2500, 1.0)
        assert comparison.predicted_shift == pytest.approx(100.0, rel=1e-12)
        assert comparison.argmax_shift == -95
        assert comparison.relative_gap == pytest.approx(0.05, abs=1e-12)

    def test_elastic_limit(self):
        comparison = peak_compare(50, 0.0)
        assert comparison.argmax_shift == 0
        assert comparison.relative_gap == 0.0

    def test_tiny_displacement_peaks_elastic(self):
        comparison = peak_compare(50, 1e-8)
        assert comparison.argmax_shift == 0
        assert comparison.relative_gap == 1.0
