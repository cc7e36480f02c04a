"""Coupled-mode simulator and spectrum-analysis toolkit for chiral
circulators built from LC resonators coupled to an edge-plasmon ring."""

from .circuit import (CircuitParams, edge_impedance_ohm, emp_frequency_hz,
                      lc_resonance_hz, stray_capacitance_f)
from .errors import (ContractError, DataError, EmpcircError, NumericalError,
                     PoleError, SingularMatrixError)
from .fitting import FitConfig, FitResult, fit_report_text, fit_transmission, objective
from .io_formats import (FORMATS, read_run_config, read_spectrum, write_spectrum,
                         write_table)
from .model import (BackgroundPath, CmtParams, detuned_matrix, ep_gap,
                    eigenmodes, forward_transmission, mode_matrix,
                    oracle_transmission, reverse_transmission, sweep_spectrum)
from .numerics import MinimizerConfig
from .spectra import (ResonanceReport, Spectrum, fit_resonance, group_delay,
                      isolation_db, normalize_to_reference, power_trend,
                      unwrap_phase)
from .timedomain import (PulseSpec, TimeSeries, apply_channel, estimate_delay,
                         synth_pulse)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
