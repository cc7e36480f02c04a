"""Lumped-element helpers for the matching network and edge impedance."""

from dataclasses import dataclass
import math

from .errors import ContractError

# CODATA 2018 exact values.
PLANCK_H = 6.62607015e-34  # J s
ELEMENTARY_CHARGE = 1.602176634e-19  # C


@dataclass(frozen=True)
class CircuitParams:
    inductance_h: float = 180e-9
    c_stray_f: float | None = None
    c_edge_f: float | None = None  # descriptive only; no governing formula
    chern_number: int = 1
    disk_radius_m: float = 100e-6

    def __post_init__(self):
        for name in ("inductance_h", "c_stray_f", "c_edge_f", "disk_radius_m"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ContractError(f"{name} must be positive")
        if self.chern_number < 1:
            raise ContractError("chern_number must be >= 1")


def _require_positive(**kwargs):
    for name, value in kwargs.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ContractError(f"{name} must be a positive finite number, got {value!r}")


def lc_resonance_hz(inductance_h, capacitance_f):
    """Resonance frequency 1/(2*pi*sqrt(L*C)) in Hz."""
    _require_positive(inductance_h=inductance_h, capacitance_f=capacitance_f)
    return 1.0 / (2.0 * math.pi * math.sqrt(inductance_h * capacitance_f))


def stray_capacitance_f(inductance_h, resonance_hz):
    """Capacitance that resonates a given inductor at resonance_hz."""
    _require_positive(inductance_h=inductance_h, resonance_hz=resonance_hz)
    return 1.0 / (inductance_h * (2.0 * math.pi * resonance_hz) ** 2)


def edge_impedance_ohm(chern_number):
    """Edge-state impedance h/(C*e^2) for Chern number C (25.8 kOhm at C=1)."""
    if not (isinstance(chern_number, int) and chern_number >= 1):
        raise ContractError("chern_number must be an integer >= 1")
    return PLANCK_H / (chern_number * ELEMENTARY_CHARGE**2)


def emp_frequency_hz(radius_m, velocity_m_per_s):
    """Fundamental edge-plasmon frequency: one wavelength around the disk,
    f = v/(2*pi*R)."""
    _require_positive(radius_m=radius_m, velocity_m_per_s=velocity_m_per_s)
    return velocity_m_per_s / (2.0 * math.pi * radius_m)
