"""Derived quantities from complex transmission spectra: unwrapped phase,
group delay, normalization, isolation and Lorentzian resonance fits."""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ContractError, DataError, NumericalError
from .numerics import MinimizerConfig, nelder_mead

MAG_FLOOR = 1e-10  # -200 dB, applied before any log operation
_3DB_LIN = 10.0 ** (3.0 / 20.0)


@dataclass(frozen=True)
class Spectrum:
    """Complex transmission on a strictly increasing frequency grid."""

    freqs_hz: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        freqs = np.asarray(self.freqs_hz, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if freqs.ndim != 1 or len(freqs) < 2:
            raise ContractError("spectrum needs at least 2 frequency points")
        if len(values) != len(freqs):
            raise ContractError("freqs and values length mismatch")
        if not np.all(np.diff(freqs) > 0):
            raise ContractError("frequencies must be strictly increasing")
        if not (np.all(np.isfinite(freqs)) and np.all(np.isfinite(values))):
            raise ContractError("spectrum contains non-finite entries")
        object.__setattr__(self, "freqs_hz", freqs)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.freqs_hz)

    def magnitude(self):
        return np.abs(self.values)

    def magnitude_db(self):
        return 20.0 * np.log10(np.maximum(self.magnitude(), MAG_FLOOR))

    def conjugated(self):
        return Spectrum(self.freqs_hz, np.conj(self.values), label=self.label)


@dataclass(frozen=True)
class ResonanceReport:
    f_center_hz: float
    q_factor: float
    bandwidth_3db_hz: float
    peak_mag_db: float
    kind: str  # "peak" or "dip"

    def __post_init__(self):
        if not self.q_factor > 0:
            raise ContractError("q_factor must be > 0")
        if not self.bandwidth_3db_hz > 0:
            raise ContractError("bandwidth must be > 0")


def unwrap_phase(spectrum):
    """Unwrapped phase in radians; zero-magnitude points carry the previous
    point's phase forward (0 for a leading zero)."""
    values = spectrum.values
    raw = np.angle(values)
    mags = np.abs(values)
    phases = raw.copy()
    prev = 0.0
    for i in range(len(phases)):
        if mags[i] == 0.0:
            phases[i] = prev
        else:
            prev = phases[i]
    return np.unwrap(phases)


def group_delay(spectrum):
    """Group delay tau = -dphi/domega from the unwrapped phase, central
    differences inside and one-sided at the ends."""
    if len(spectrum) < 3:
        raise ContractError("group delay needs at least 3 points")
    phase = unwrap_phase(spectrum)
    omega = 2.0 * np.pi * spectrum.freqs_hz
    return -np.gradient(phase, omega)


def normalize_to_reference(target, reference):
    """Scale target by 1/max|reference| (the through-path 0 dB convention);
    apply to the reference itself to obtain its normalized trace."""
    if not np.array_equal(target.freqs_hz, reference.freqs_hz):
        raise DataError("target and reference must share the exact frequency grid")
    peak = float(np.max(np.abs(reference.values)))
    if peak == 0.0:
        raise DataError("reference spectrum is identically zero")
    return Spectrum(target.freqs_hz, target.values / peak, label=target.label)


def isolation_db(s_fwd, s_rev):
    """Pointwise 20log10|fwd| - 20log10|rev| plus (max, frequency of max).

    Magnitudes are floored at -200 dB before subtraction.
    """
    if not np.array_equal(s_fwd.freqs_hz, s_rev.freqs_hz):
        raise DataError("isolation requires a shared frequency grid")
    iso = s_fwd.magnitude_db() - s_rev.magnitude_db()
    imax = int(np.argmax(iso))
    return iso, float(iso[imax]), float(s_fwd.freqs_hz[imax])


def _lorentz(f, f0, width, amp, offset):
    return offset + amp / (1.0 + (2.0 * (f - f0) / width) ** 2)


def _interior_extremum(mag, kind):
    """Index of the most prominent interior local extremum.

    Prominence (smaller of the two drops to the deepest point on each side)
    picks the real line out of shapes with structure beyond one Lorentzian,
    e.g. a dip flanked by two tall peaks, where the raw global minimum would
    sit at a spectrum edge.
    """
    s = -mag if kind == "dip" else mag
    best_idx, best_prom = None, 0.0
    for i in range(1, len(s) - 1):
        if s[i] >= s[i - 1] and s[i] > s[i + 1]:
            prom = min(s[i] - np.min(s[:i]), s[i] - np.min(s[i + 1:]))
            if prom > best_prom:
                best_idx, best_prom = i, float(prom)
    if best_idx is None:
        raise DataError(f"no interior {kind} found in spectrum")
    return best_idx


def _barrier_interval(mag, idx, kind):
    """Index range (lo, hi) between the tallest barrier on each side of the
    extremum; the fit window never extends past the flanking structure."""
    if kind == "dip":
        lo = int(np.argmax(mag[:idx]))
        hi = idx + 1 + int(np.argmax(mag[idx + 1:]))
    else:
        lo = int(np.argmin(mag[:idx]))
        hi = idx + 1 + int(np.argmin(mag[idx + 1:]))
    return lo, hi


def _estimate_width(freqs, mag, idx, baseline):
    half = 0.5 * (mag[idx] + baseline)
    sign = 1.0 if mag[idx] > baseline else -1.0
    lo = idx
    while lo > 0 and sign * (mag[lo] - half) > 0:
        lo -= 1
    hi = idx
    while hi < len(mag) - 1 and sign * (mag[hi] - half) > 0:
        hi += 1
    width = freqs[hi] - freqs[lo]
    if width <= 0:
        width = (freqs[-1] - freqs[0]) / 10.0
    return width


def fit_resonance(spectrum, kind="peak"):
    """Least-squares Lorentzian fit (linear magnitude) around the interior
    extremum; the window is +/-5 fitted FWHM, iterated twice.

    Q is f_center/FWHM of the fitted Lorentzian; the 3 dB bandwidth is read
    from the fitted curve.
    """
    if kind not in ("peak", "dip"):
        raise ContractError(f"kind must be 'peak' or 'dip', got {kind!r}")
    freqs = spectrum.freqs_hz
    mag = spectrum.magnitude()
    idx = _interior_extremum(mag, kind)
    lo, hi = _barrier_interval(mag, idx, kind)
    in_valley = np.zeros(len(freqs), dtype=bool)
    in_valley[lo:hi + 1] = True
    baseline = 0.5 * (mag[lo] + mag[hi])
    f0 = freqs[idx]
    width = _estimate_width(freqs, mag, idx, baseline)
    amp = mag[idx] - baseline

    x = None
    for _ in range(2):  # fit, then refit in a window sized by the first fit
        sel = (np.abs(freqs - f0) <= 5.0 * width) & in_valley
        if np.count_nonzero(sel) < 5:
            sel = in_valley
        fw, mw = freqs[sel], mag[sel]
        scale = max(abs(amp), MAG_FLOOR)

        def objective(p, fw=fw, mw=mw, scale=scale):
            f0_, w_, a_, o_ = p
            if w_ <= 0:
                return math.inf
            r = (_lorentz(fw, f0_, w_, a_, o_) - mw) / scale
            return float(np.mean(r * r))

        cfg = MinimizerConfig(max_evaluations=20000, simplex_tolerance=1e-12,
                              restarts=3, seed=0)
        x, _, _ = nelder_mead(objective, np.array([f0, width, amp, baseline]), cfg)
        f0, width, amp, baseline = float(x[0]), abs(float(x[1])), float(x[2]), float(x[3])

    if not (freqs[0] <= f0 <= freqs[-1]) or width <= 0:
        raise NumericalError("resonance fit did not converge to an interior line")

    extremum = _lorentz(f0, f0, width, amp, baseline)
    if extremum <= 0:
        extremum = MAG_FLOOR
    target = extremum * _3DB_LIN if kind == "dip" else extremum / _3DB_LIN
    # Solve lorentz(f) = target analytically for the half-width in u = 2(f-f0)/w.
    denom = target - baseline
    if denom == 0 or amp / denom <= 1.0:
        raise NumericalError("fitted line too shallow for a 3 dB bandwidth")
    u = math.sqrt(amp / denom - 1.0)
    bandwidth = u * width
    return ResonanceReport(
        f_center_hz=f0,
        q_factor=f0 / width,
        bandwidth_3db_hz=bandwidth,
        peak_mag_db=20.0 * math.log10(max(extremum, MAG_FLOOR)),
        kind=kind,
    )


@dataclass(frozen=True)
class PowerTrendRow:
    power_dbm: float
    max_isolation_db: float = math.nan
    isolation_freq_hz: float = math.nan
    dip_freq_hz: float = math.nan
    bandwidth_3db_hz: float = math.nan
    error: str | None = None


def power_trend(entries):
    """Per-power extraction of max isolation, dip frequency and 3 dB
    bandwidth from (power_dbm, forward Spectrum, reverse Spectrum) triples.

    Forward is the dip path; isolation is reported as reverse-over-forward
    (the circulator's useful isolation), so its maximum is positive at the
    dip.  A failing row is flagged with the error message; other rows are
    unaffected.  Rows come back ordered by power.
    """
    if not entries:
        raise ContractError("power_trend needs at least one entry")
    rows = []
    for power_dbm, s_fwd, s_rev in sorted(entries, key=lambda e: e[0]):
        try:
            _, iso_max, iso_f = isolation_db(s_rev, s_fwd)
            rep = fit_resonance(s_fwd, kind="dip")
            rows.append(PowerTrendRow(
                power_dbm=float(power_dbm),
                max_isolation_db=iso_max,
                isolation_freq_hz=iso_f,
                dip_freq_hz=rep.f_center_hz,
                bandwidth_3db_hz=rep.bandwidth_3db_hz,
            ))
        except (DataError, NumericalError, ContractError) as exc:
            rows.append(PowerTrendRow(
                power_dbm=float(power_dbm),
                error=f"power {power_dbm} dBm: {exc}",
            ))
    return rows
