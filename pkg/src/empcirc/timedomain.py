"""Narrowband pulse-through-channel experiments at complex baseband.

A 50 Hz-wide pulse on a ~544 MHz carrier is simulated as its complex
envelope only; the carrier is implied by f_center and never sampled.  The
channel spectrum is applied bin-by-bin in the frequency domain at the
absolute frequency f_center + f_baseband.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .errors import ContractError
from .numerics import dft, idft

_GAUSS_FWHM = 2.0 * math.sqrt(2.0 * math.log(2.0))  # FWHM / sigma
_EDGE_CLIP = 1e-6
_COVERAGE_ENERGY_FRACTION = 1e-9


class CoverageWarning(UserWarning):
    """Channel grid did not cover all spectrally significant pulse bins."""


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian narrowband pulse: bandwidth_hz is the FWHM of the envelope's
    magnitude spectrum."""

    f_center_hz: float
    bandwidth_hz: float
    span_s: float
    n_samples: int

    def __post_init__(self):
        if not 0 < self.bandwidth_hz < 0.1 * self.f_center_hz:
            raise ContractError("need 0 < bandwidth_hz << f_center_hz")
        if self.n_samples < 2 or (self.n_samples & (self.n_samples - 1)) != 0:
            raise ContractError("n_samples must be a power of two")
        if not self.span_s > 0:
            raise ContractError("span_s must be > 0")

    @property
    def dt_s(self):
        return self.span_s / self.n_samples


@dataclass(frozen=True)
class TimeSeries:
    """Complex baseband envelope samples on a uniform time grid."""

    t0_s: float
    dt_s: float
    values: np.ndarray

    def __post_init__(self):
        if not self.dt_s > 0:
            raise ContractError("dt_s must be > 0")
        values = np.asarray(self.values, dtype=complex)
        if len(values) < 2:
            raise ContractError("time series needs at least 2 samples")
        object.__setattr__(self, "values", values)

    def times(self):
        return self.t0_s + self.dt_s * np.arange(len(self.values))


def synth_pulse(spec):
    """Gaussian complex envelope, unit peak, centered mid-span, with the
    requested FWHM in the magnitude spectrum."""
    sigma_f = spec.bandwidth_hz / _GAUSS_FWHM
    sigma_t = 1.0 / (2.0 * math.pi * sigma_f)
    t = spec.dt_s * np.arange(spec.n_samples)
    center = 0.5 * spec.span_s
    env = np.exp(-((t - center) ** 2) / (2.0 * sigma_t**2))
    if env[0] > _EDGE_CLIP or env[-1] > _EDGE_CLIP:
        raise ContractError(
            f"pulse clipped at the span edges ({max(env[0], env[-1]):.2e} > {_EDGE_CLIP});"
            " widen span_s or the bandwidth"
        )
    return TimeSeries(t0_s=0.0, dt_s=spec.dt_s, values=env.astype(complex))


def apply_channel(pulse, channel, f_center_hz):
    """Pass a baseband envelope through a channel given as a Spectrum.

    Each baseband bin f_b is multiplied by the channel value linearly
    interpolated (complex, component-wise) at f_center + f_b.  Bins outside
    the channel grid take the nearest-edge value; if they carry significant
    energy a CoverageWarning is issued.
    """
    n = len(pulse.values)
    if n & (n - 1):
        raise ContractError("pulse length must be a power of two")
    spectrum = dft(pulse.values)
    f_abs = f_center_hz + np.fft.fftfreq(n, d=pulse.dt_s)
    cf = channel.freqs_hz
    if f_abs.max() < cf[0] or f_abs.min() > cf[-1]:
        raise ContractError("channel grid entirely misses the pulse band")
    out_of_grid = (f_abs < cf[0]) | (f_abs > cf[-1])
    if np.any(out_of_grid):
        energy = np.abs(spectrum) ** 2
        frac = energy[out_of_grid].sum() / max(energy.sum(), 1e-300)
        if frac > _COVERAGE_ENERGY_FRACTION:
            warnings.warn(
                f"channel grid misses {frac:.2e} of the pulse energy; "
                "edge values were used",
                CoverageWarning,
            )
    # np.interp clamps to the edges, which is exactly the nearest-edge rule.
    h = np.interp(f_abs, cf, channel.values.real) + 1j * np.interp(f_abs, cf, channel.values.imag)
    out = idft(spectrum * h)
    return TimeSeries(t0_s=pulse.t0_s, dt_s=pulse.dt_s, values=out)


def _refined_peak_time(series):
    mag = np.abs(series.values)
    idx = int(np.argmax(mag))
    if idx == 0 or idx == len(mag) - 1:
        raise ContractError("envelope maximum sits at a series endpoint")
    if mag[idx] == mag[idx - 1] or mag[idx] == mag[idx + 1]:
        raise ContractError("ambiguous envelope peak (plateau)")
    # 3-point parabolic refinement of the argmax.
    ym, y0, yp = mag[idx - 1], mag[idx], mag[idx + 1]
    delta = 0.5 * (ym - yp) / (ym - 2.0 * y0 + yp)
    return series.t0_s + (idx + delta) * series.dt_s


def estimate_delay(input_env, output_env):
    """Envelope delay: refined output peak time minus refined input peak
    time.  Negative means the output envelope peak arrives early."""
    if not math.isclose(input_env.dt_s, output_env.dt_s, rel_tol=1e-12):
        raise ContractError("input and output series must share dt")
    return _refined_peak_time(output_env) - _refined_peak_time(input_env)
