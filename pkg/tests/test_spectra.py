import math

import numpy as np
import pytest

from conftest import F_CENTER
from empcirc import (Spectrum, fit_resonance, group_delay, isolation_db,
                     normalize_to_reference, power_trend, sweep_spectrum,
                     unwrap_phase)
from empcirc.errors import ContractError, DataError
from empcirc.spectra import _lorentz


def make_spectrum(freqs, values, label="test"):
    return Spectrum(np.asarray(freqs, dtype=float), np.asarray(values, dtype=complex), label)


def lorentzian_spectrum(f0=F_CENTER, q=236.0, amp=1.0, offset=0.05,
                        n=4001, halfspan_widths=8.0, kind="peak", noise=0.0, seed=0):
    width = f0 / q
    freqs = np.linspace(f0 - halfspan_widths * width, f0 + halfspan_widths * width, n)
    sign = 1.0 if kind == "peak" else -1.0
    mag = offset + sign * amp / (1.0 + (2.0 * (freqs - f0) / width) ** 2)
    if kind == "dip":
        mag = mag + amp  # keep magnitudes positive: baseline above the dip
    if noise:
        mag = mag + noise * amp * np.random.default_rng(seed).standard_normal(n)
        mag = np.maximum(mag, 1e-6)
    return make_spectrum(freqs, mag), width


class TestSpectrumType:
    def test_validation(self):
        with pytest.raises(ContractError):
            make_spectrum([1e6], [1.0])
        with pytest.raises(ContractError):
            make_spectrum([2e6, 1e6], [1.0, 1.0])
        with pytest.raises(ContractError):
            make_spectrum([1e6, 1e6], [1.0, 1.0])
        with pytest.raises(ContractError):
            make_spectrum([1e6, 2e6], [1.0, math.inf])


class TestUnwrapPhase:
    def test_constant(self):
        s = make_spectrum([1e6, 2e6, 3e6], np.exp(0.5j) * np.ones(3))
        assert np.allclose(unwrap_phase(s), 0.5)

    def test_single_wrap(self):
        s = make_spectrum([1e6, 2e6], [np.exp(3.0j), np.exp(-3.0j)])
        unwrapped = unwrap_phase(s)
        assert unwrapped[0] == pytest.approx(3.0)
        assert unwrapped[1] == pytest.approx(-3.0 + 2.0 * math.pi)

    def test_linear_phase(self):
        tau = 100e-9
        freqs = np.linspace(500e6, 501e6, 101)
        s = make_spectrum(freqs, np.exp(-2j * np.pi * freqs * tau))
        unwrapped = unwrap_phase(s)
        slopes = np.diff(unwrapped) / np.diff(freqs)
        assert np.allclose(slopes, -2.0 * np.pi * tau, rtol=1e-9)

    def test_zero_carries_previous_phase(self):
        s = make_spectrum([1e6, 2e6, 3e6], [np.exp(1.0j), 0.0, np.exp(1.1j)])
        unwrapped = unwrap_phase(s)
        assert unwrapped[1] == pytest.approx(1.0)

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        s = make_spectrum(np.linspace(1e6, 2e6, 50),
                          np.exp(1j * rng.uniform(-math.pi, math.pi, 50)))
        once = unwrap_phase(s)
        s2 = make_spectrum(s.freqs_hz, np.abs(s.values) * np.exp(1j * once))
        assert np.allclose(unwrap_phase(s2), once)


class TestGroupDelay:
    def test_pure_delay(self):
        tau = 10e-9
        freqs = np.linspace(500e6, 502e6, 201)
        s = make_spectrum(freqs, np.exp(-2j * np.pi * freqs * tau))
        assert np.allclose(group_delay(s), tau, rtol=1e-12)

    def test_constant_phase(self):
        s = make_spectrum(np.linspace(1e6, 2e6, 21), np.full(21, 0.3 + 0.4j))
        assert np.allclose(group_delay(s), 0.0)

    def test_negative_at_dip_center(self, high_power_params):
        s = sweep_spectrum(high_power_params, F_CENTER - 20e6, F_CENTER + 20e6,
                           2001, conjugate_for_export=True)
        tau = group_delay(s)
        assert tau[len(tau) // 2] < 0

    def test_conjugation_flips_sign(self, high_power_params):
        s = sweep_spectrum(high_power_params, F_CENTER - 20e6, F_CENTER + 20e6, 501)
        assert np.allclose(group_delay(s.conjugated()), -group_delay(s), atol=1e-18)


class TestNormalize:
    def test_scale_by_reference_max(self):
        freqs = np.linspace(1e6, 2e6, 11)
        ref = make_spectrum(freqs, 2.0 * np.exp(1j * freqs / 1e6))
        tgt = make_spectrum(freqs, np.ones(11))
        out = normalize_to_reference(tgt, ref)
        assert np.allclose(out.values, 0.5)

    def test_unit_reference_is_identity(self):
        freqs = np.linspace(1e6, 2e6, 11)
        ref = make_spectrum(freqs, np.linspace(0.1, 1.0, 11))
        tgt = make_spectrum(freqs, np.full(11, 0.3 + 0.1j))
        out = normalize_to_reference(tgt, ref)
        assert np.allclose(out.values, tgt.values)

    def test_reference_peaks_at_unity(self):
        freqs = np.linspace(1e6, 2e6, 11)
        ref = make_spectrum(freqs, 3.7 * np.linspace(0.1, 1.0, 11))
        out = normalize_to_reference(ref, ref)
        assert np.max(np.abs(out.values)) == pytest.approx(1.0, rel=1e-12)

    def test_errors(self):
        a = make_spectrum([1e6, 2e6], [1.0, 1.0])
        b = make_spectrum([1e6, 3e6], [1.0, 1.0])
        with pytest.raises(DataError):
            normalize_to_reference(a, b)
        z = make_spectrum([1e6, 2e6], [0.0, 0.0])
        with pytest.raises(DataError):
            normalize_to_reference(a, z)


class TestIsolation:
    def test_50db(self):
        freqs = np.linspace(1e6, 2e6, 5)
        fwd = make_spectrum(freqs, np.ones(5))
        rev = make_spectrum(freqs, np.full(5, 10 ** (-50 / 20)))
        iso, iso_max, f_at = isolation_db(fwd, rev)
        assert np.allclose(iso, 50.0, atol=1e-9)
        assert iso_max == pytest.approx(50.0, abs=1e-9)

    def test_identity_and_antisymmetry(self):
        rng = np.random.default_rng(1)
        freqs = np.linspace(1e6, 2e6, 30)
        a = make_spectrum(freqs, rng.uniform(0.1, 1, 30) * np.exp(1j * rng.uniform(0, 6, 30)))
        b = make_spectrum(freqs, rng.uniform(0.1, 1, 30))
        assert np.allclose(isolation_db(a, a)[0], 0.0)
        assert np.allclose(isolation_db(a, b)[0], -isolation_db(b, a)[0])

    def test_model_constant_offset(self, low_power_params):
        fwd = sweep_spectrum(low_power_params, 530e6, 560e6, 301, direction="forward")
        rev = sweep_spectrum(low_power_params, 530e6, 560e6, 301, direction="reverse")
        iso, _, _ = isolation_db(fwd, rev)
        # Documented ratio: reverse = forward/path_ratio, a constant
        # 20*log10(2) offset at path_ratio 2.
        assert np.allclose(iso, 20 * math.log10(2.0), atol=1e-9)

    def test_floor(self):
        freqs = np.linspace(1e6, 2e6, 3)
        zero = make_spectrum(freqs, np.zeros(3))
        one = make_spectrum(freqs, np.ones(3))
        iso, _, _ = isolation_db(one, zero)
        assert np.allclose(iso, 200.0)


class TestFitResonance:
    def test_q236_noiseless(self):
        s, width = lorentzian_spectrum(q=236.0)
        rep = fit_resonance(s, kind="peak")
        assert rep.q_factor == pytest.approx(236.0, rel=1e-3)
        assert rep.f_center_hz == pytest.approx(F_CENTER, abs=0.001 * width)

    def test_q236_noisy(self):
        s, _ = lorentzian_spectrum(q=236.0, noise=0.01, seed=3)
        rep = fit_resonance(s, kind="peak")
        assert rep.q_factor == pytest.approx(236.0, rel=0.05)

    def test_dip(self):
        s, width = lorentzian_spectrum(q=500.0, amp=0.8, offset=0.1, kind="dip")
        rep = fit_resonance(s, kind="dip")
        assert rep.kind == "dip"
        assert rep.q_factor == pytest.approx(500.0, rel=1e-3)
        assert rep.bandwidth_3db_hz > 0

    def test_flat_spectrum_error(self):
        s = make_spectrum(np.linspace(1e6, 2e6, 101), np.ones(101))
        with pytest.raises(DataError):
            fit_resonance(s, kind="peak")

    @pytest.mark.parametrize("q", [50.0, 236.0, 1000.0, 5000.0])
    def test_q_recovery_sweep(self, q):
        # >= 20 points per FWHM, noiseless: Q back within 0.1%.
        s, _ = lorentzian_spectrum(q=q, n=321, halfspan_widths=8.0)
        rep = fit_resonance(s, kind="peak")
        assert rep.q_factor == pytest.approx(q, rel=1e-3)

    def test_3db_bandwidth_of_pure_lorentzian(self):
        # Independent check: scan the fitted model curve for the -3 dB points.
        s, width = lorentzian_spectrum(q=236.0, offset=1e-6, amp=1.0)
        rep = fit_resonance(s, kind="peak")
        f = np.linspace(F_CENTER - 4 * width, F_CENTER + 4 * width, 400001)
        curve = _lorentz(f, rep.f_center_hz, rep.f_center_hz / rep.q_factor, 1.0, 1e-6)
        target = curve.max() / 10 ** (3 / 20)
        above = f[curve >= target]
        assert rep.bandwidth_3db_hz == pytest.approx(above[-1] - above[0], rel=1e-3)


class TestPowerTrend:
    def _pair(self, iso_db=30.0, q=300.0):
        dip, _ = lorentzian_spectrum(q=q, amp=0.9, offset=0.05, kind="dip", n=2001)
        through = make_spectrum(dip.freqs_hz,
                                np.full(len(dip), np.max(np.abs(dip.values))
                                        * 10 ** (iso_db / 20)))
        return dip, through

    def test_single_row(self):
        fwd, rev = self._pair()
        rows = power_trend([(-119.0, fwd, rev)])
        assert len(rows) == 1
        row = rows[0]
        assert row.error is None
        assert row.dip_freq_hz == pytest.approx(F_CENTER, rel=1e-6)
        assert row.max_isolation_db > 30.0

    def test_identical_rows(self):
        fwd, rev = self._pair()
        rows = power_trend([(-120.0, fwd, rev), (-110.0, fwd, rev)])
        assert rows[0].max_isolation_db == rows[1].max_isolation_db
        assert rows[0].dip_freq_hz == rows[1].dip_freq_hz

    def test_flat_row_flagged(self):
        fwd, rev = self._pair()
        freqs = fwd.freqs_hz
        flat = make_spectrum(freqs, np.ones(len(freqs)))
        rows = power_trend([(-130.0, flat, flat), (-120.0, fwd, rev)])
        assert rows[0].error is not None and "-130" in rows[0].error
        assert rows[1].error is None

    def test_ordered_by_power(self):
        fwd, rev = self._pair()
        rows = power_trend([(-100.0, fwd, rev), (-140.0, fwd, rev)])
        assert [r.power_dbm for r in rows] == [-140.0, -100.0]

    def test_empty_rejected(self):
        with pytest.raises(ContractError):
            power_trend([])
