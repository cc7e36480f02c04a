"""Four-mode coupled-mode model of the chiral circulator.

The dynamical system is two identical LC resonators (modes a, b) coupled
unidirectionally through two chiral edge-plasmon paths (modes m1, m2) in a
ring: a <- m1 <- b <- m2 <- a.  Mode order everywhere is (a, m1, b, m2).

Conventions
-----------
* Internal units are angular (rad/s).  Use ``CmtParams.from_hz`` at public
  boundaries where ordinary frequency is more natural.
* The per-path plasmon responses are fixed multiples of one stored response
  alpha_m = -i*omega + i*omega_m + kappa_m: the long path carries
  sqrt(path_ratio)*alpha_m and the short path alpha_m/sqrt(path_ratio), so
  their product is always alpha_m**2.  With the default path_ratio of 2 the
  long path response is twice the short one.
* The detuned matrix uses entries nu_x - i*kappa_x with nu_x = omega -
  omega_x.  ``mode_matrix`` is its omega-independent companion with diagonal
  omega_x - i*kappa_x and the same couplings; the two share damping and
  coupling terms while the diagonal real part nu_x is replaced by omega_x.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ContractError, PoleError
from .numerics import eigenvalues_small, lu_solve
from .spectra import Spectrum

TWO_PI = 2.0 * math.pi

_POLE_GUARD = 1e-30


@dataclass(frozen=True)
class BackgroundPath:
    """Broadband parasitic path: constant complex leak plus linear phase."""

    amplitude: float
    phase_offset: float = 0.0
    delay: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise ContractError("background amplitude must be finite and >= 0")
        if not (math.isfinite(self.phase_offset) and math.isfinite(self.delay)):
            raise ContractError("background phase_offset and delay must be finite")

    def response(self, omega):
        return self.amplitude * np.exp(1j * (self.phase_offset - np.asarray(omega) * self.delay))


@dataclass(frozen=True)
class CmtParams:
    """The five model rates, all angular (rad/s), plus the path asymmetry.

    omega0/kappa0 describe both LC resonators, omega_m/kappa_m the combined
    plasmon response, g the LC-plasmon coupling.  path_ratio is the ratio of
    the long-path to short-path plasmon response (2 in the device geometry).
    """

    omega0: float
    kappa0: float
    omega_m: float
    kappa_m: float
    g: float
    path_ratio: float = 2.0
    background: BackgroundPath | None = None

    def __post_init__(self):
        checks = [
            ("omega0", self.omega0, self.omega0 > 0),
            ("kappa0", self.kappa0, self.kappa0 > 0),
            ("omega_m", self.omega_m, self.omega_m > 0),
            ("kappa_m", self.kappa_m, self.kappa_m > 0),
            ("g", self.g, self.g >= 0),
            ("path_ratio", self.path_ratio, self.path_ratio > 0),
        ]
        for name, value, ok in checks:
            if not (isinstance(value, (int, float)) and math.isfinite(value) and ok):
                raise ContractError(f"invalid {name}={value!r}")

    @classmethod
    def from_hz(cls, f0_hz, kappa0_hz, fm_hz, kappa_m_hz, g_hz,
                path_ratio=2.0, background=None):
        """Build from ordinary-frequency rates (each value is rate/2pi)."""
        return cls(
            omega0=TWO_PI * f0_hz,
            kappa0=TWO_PI * kappa0_hz,
            omega_m=TWO_PI * fm_hz,
            kappa_m=TWO_PI * kappa_m_hz,
            g=TWO_PI * g_hz,
            path_ratio=path_ratio,
            background=background,
        )

    def to_hz(self):
        """Rates in ordinary frequency (Hz), keyed for reports."""
        return {
            "f0_hz": self.omega0 / TWO_PI,
            "kappa0_hz": self.kappa0 / TWO_PI,
            "fm_hz": self.omega_m / TWO_PI,
            "kappa_m_hz": self.kappa_m / TWO_PI,
            "g_hz": self.g / TWO_PI,
        }


_COUPLING_POSITIONS = ((0, 1), (1, 2), (2, 3), (3, 0))


def detuned_matrix(params, omega):
    """4x4 dynamical matrix at drive frequency omega (rad/s).

    Diagonal entries are nu_x - i*kappa_x in mode order (a, m1, b, m2); the
    two plasmon entries are the scaled path responses sqrt(r)*(nu_m -
    i*kappa_m) and (nu_m - i*kappa_m)/sqrt(r) with r = path_ratio.
    Couplings g sit at (a,m1), (m1,b), (b,m2), (m2,a).
    """
    if not math.isfinite(omega):
        raise ContractError("omega must be finite")
    s = math.sqrt(params.path_ratio)
    d_lc = (omega - params.omega0) - 1j * params.kappa0
    d_m = (omega - params.omega_m) - 1j * params.kappa_m
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = d_lc
    mat[1, 1] = s * d_m
    mat[2, 2] = d_lc
    mat[3, 3] = d_m / s
    for i, j in _COUPLING_POSITIONS:
        mat[i, j] = params.g
    return mat


def mode_matrix(params):
    """Omega-independent companion matrix whose eigenvalues are the complex
    normal-mode frequencies (real part: frequency, -imag part: decay)."""
    s = math.sqrt(params.path_ratio)
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = params.omega0 - 1j * params.kappa0
    mat[1, 1] = params.omega_m - 1j * s * params.kappa_m
    mat[2, 2] = params.omega0 - 1j * params.kappa0
    mat[3, 3] = params.omega_m - 1j * params.kappa_m / s
    for i, j in _COUPLING_POSITIONS:
        mat[i, j] = params.g
    return mat


def eigenmodes(params):
    """The four complex normal-mode frequencies, sorted by (real, imag)."""
    vals = eigenvalues_small(mode_matrix(params))
    return sorted(vals, key=lambda z: (z.real, z.imag))


def ep_gap(params):
    """Minimum pairwise eigenvalue distance; zero means an exceptional point."""
    vals = eigenmodes(params)
    return min(abs(vals[i] - vals[j]) for i in range(4) for j in range(i + 1, 4))


def _alpha_lc(params, omega):
    return -1j * omega + 1j * params.omega0 + params.kappa0


def _alpha_m(params, omega):
    return -1j * omega + 1j * params.omega_m + params.kappa_m


def _transmission_array(params, omega, reverse=False):
    """Vectorized closed-form transmission; omega may be scalar or array."""
    omega = np.asarray(omega, dtype=float)
    a0 = _alpha_lc(params, omega)
    am = _alpha_m(params, omega)
    s = math.sqrt(params.path_ratio)
    g2 = params.g**2
    # Long (dip) path carries sqrt(r)*alpha_m, short path alpha_m/sqrt(r).
    scale = 1.0 / s if reverse else s
    num = -scale * params.kappa0 * am * g2
    den = a0**2 * am**2 - g2**2
    bad = np.abs(den) <= _POLE_GUARD * np.abs(num)
    if np.any(bad & (np.abs(num) > 0)):
        w = float(np.atleast_1d(omega)[np.argmax(np.atleast_1d(bad))])
        raise PoleError(f"transmission pole at omega={w:.6e} rad/s")
    with np.errstate(invalid="ignore"):
        t = np.where(np.abs(num) > 0, num / den, 0.0 + 0.0j)
    if params.background is not None:
        t = t + params.background.response(omega)
    return t


def forward_transmission(params, omega):
    """Closed-form transmission of the dip path (long plasmon path),
    -sqrt(r)*kappa0*alpha_m*g^2 / (alpha0^2*alpha_m^2 - g^4), plus the
    background leak when configured."""
    return complex(_transmission_array(params, omega, reverse=False))


def reverse_transmission(params, omega):
    """Transmission with the two plasmon paths exchanged: the numerator
    carries the short-path response alpha_m/sqrt(r); the denominator (the
    loop product) is unchanged.  Equals forward_transmission/path_ratio."""
    return complex(_transmission_array(params, omega, reverse=True))


def oracle_transmission(params, omega):
    """Transmission by direct steady-state linear solve of the 4-mode system
    (drive on a, readout on b); independent of the closed form.

    Under an exp(-i*omega*t) drive the steady-state operator is
    -i*conj(detuned_matrix(omega)).  The result equals
    forward_transmission/kappa0 (the closed form fixes the input/output
    coupling prefactor; the oracle leaves it at unity).  Ignores background.
    """
    op = -1j * np.conj(detuned_matrix(params, omega))
    drive = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    try:
        x = lu_solve(op, drive)
    except Exception as exc:
        raise PoleError(f"steady-state system singular at omega={omega:.6e}") from exc
    return complex(x[2])


def sweep_spectrum(params, f_start_hz, f_stop_hz, n_points, direction="forward",
                   conjugate_for_export=False, label=""):
    """Evaluate the chosen transmission on a uniform frequency grid.

    With conjugate_for_export the values are complex-conjugated so that the
    exported phase follows the measurement convention (group delay negative
    at the dip center).
    """
    if not f_start_hz < f_stop_hz:
        raise ContractError("f_start must be < f_stop")
    if n_points < 2:
        raise ContractError("n_points must be >= 2")
    if direction not in ("forward", "reverse"):
        raise ContractError(f"unknown direction {direction!r}")
    freqs = np.linspace(f_start_hz, f_stop_hz, n_points)
    values = _transmission_array(params, TWO_PI * freqs, reverse=(direction == "reverse"))
    if conjugate_for_export:
        values = np.conj(values)
    if not label:
        label = f"{direction} model"
    return Spectrum(freqs, values, label=label)
