"""Fit the closed-form circulator transmission to measured spectra.

The default objective is magnitude-only in dB (deep dips vanish in linear
magnitude); a linear-complex mode exists for phase-sensitive work.  Rates
are optimized in log space so positivity is structural, and frequencies as
grid-relative offsets so every simplex coordinate is O(1).
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ContractError, NumericalError
from .model import TWO_PI, BackgroundPath, CmtParams, _transmission_array
from .numerics import MinimizerConfig, nelder_mead

RATE_NAMES = ("g_hz", "kappa0_hz", "kappa_m_hz")
FREQ_NAMES = ("f0_hz", "fm_hz")
BG_NAMES = ("bg_amplitude", "bg_phase", "bg_delay")


@dataclass(frozen=True)
class FitConfig:
    objective_space: str = "db"  # "db" or "complex"
    mag_floor_db: float = -80.0
    fit_background: bool = False
    bounds: dict = field(default_factory=dict)  # name -> (min, max), Hz-domain units
    minimizer: MinimizerConfig = field(default_factory=MinimizerConfig)

    def __post_init__(self):
        if self.objective_space not in ("db", "complex"):
            raise ContractError("objective_space must be 'db' or 'complex'")
        if not self.mag_floor_db < 0:
            raise ContractError("mag_floor_db must be negative")
        for name, (lo, hi) in self.bounds.items():
            if not lo < hi:
                raise ContractError(f"bound for {name} has min >= max")


@dataclass(frozen=True)
class FitResult:
    params: CmtParams
    residual: float
    evaluations: int
    converged: bool
    per_parameter_report: dict  # name -> (initial, final), Hz-domain units


def objective(params, data, config=None):
    """Mean squared misfit between the model transmission and the data."""
    if config is None:
        config = FitConfig()
    model_vals = _transmission_array(params, TWO_PI * data.freqs_hz)
    if config.objective_space == "db":
        floor = 10.0 ** (config.mag_floor_db / 20.0)
        m = 20.0 * np.log10(np.maximum(np.abs(model_vals), floor))
        d = 20.0 * np.log10(np.maximum(np.abs(data.values), floor))
        r = m - d
        return float(np.mean(r * r))
    r = np.abs(model_vals - data.values)
    return float(np.mean(r * r))


def _pack(params, f_mid, f_span, fit_background):
    hz = params.to_hz()
    x = [
        math.log(max(hz["g_hz"], 1e-300)),
        math.log(hz["kappa0_hz"]),
        math.log(hz["kappa_m_hz"]),
        (hz["f0_hz"] - f_mid) / f_span,
        (hz["fm_hz"] - f_mid) / f_span,
    ]
    if fit_background:
        bg = params.background or BackgroundPath(0.0)
        x += [bg.amplitude, bg.phase_offset, bg.delay * f_span]
    return np.array(x, dtype=float)


def _unpack(x, f_mid, f_span, template, fit_background):
    bg = template.background
    if fit_background:
        amp = x[5]
        if amp < 0:
            return None
        bg = BackgroundPath(amplitude=amp, phase_offset=x[6], delay=x[7] / f_span)
    try:
        return CmtParams.from_hz(
            f0_hz=f_mid + x[3] * f_span,
            kappa0_hz=math.exp(x[1]),
            fm_hz=f_mid + x[4] * f_span,
            kappa_m_hz=math.exp(x[2]),
            g_hz=math.exp(x[0]),
            path_ratio=template.path_ratio,
            background=bg,
        )
    except (ContractError, OverflowError):
        return None


def _hz_values(params, fit_background):
    vals = params.to_hz()
    if fit_background:
        bg = params.background or BackgroundPath(0.0)
        vals.update(bg_amplitude=bg.amplitude, bg_phase=bg.phase_offset, bg_delay=bg.delay)
    return vals


def _check_bounds(values, bounds, where):
    for name, (lo, hi) in bounds.items():
        if name in values and not (lo <= values[name] <= hi):
            raise ContractError(f"{name}={values[name]:g} outside bounds [{lo:g}, {hi:g}] {where}")


def fit_transmission(data, init, config=None):
    """Minimize the objective over (g, kappa0, kappa_m, f0, fm) and, when
    enabled, the three background parameters.

    Runs `config.minimizer.restarts` seeded multi-starts (start 0 from init,
    the rest with +/-20% log-space jitter on the rates); the best residual
    wins, ties broken by lowest start index.  Deterministic for a fixed seed.
    """
    if config is None:
        config = FitConfig()
    mcfg = config.minimizer
    f_mid = 0.5 * (data.freqs_hz[0] + data.freqs_hz[-1])
    f_span = data.freqs_hz[-1] - data.freqs_hz[0]
    _check_bounds(_hz_values(init, config.fit_background), config.bounds, "at init")
    x0 = _pack(init, f_mid, f_span, config.fit_background)

    def obj(x):
        params = _unpack(x, f_mid, f_span, init, config.fit_background)
        if params is None:
            return math.inf
        vals = _hz_values(params, config.fit_background)
        for name, (lo, hi) in config.bounds.items():
            if name in vals and not (lo <= vals[name] <= hi):
                return math.inf
        return objective(params, data, config)

    rng = np.random.default_rng(mcfg.seed)
    per_start = max(mcfg.max_evaluations // mcfg.restarts, 100)
    inner = MinimizerConfig(max_evaluations=per_start,
                            simplex_tolerance=mcfg.simplex_tolerance,
                            restarts=1, seed=mcfg.seed)
    step = np.full(len(x0), 0.1)
    step[3:5] = 0.05  # frequency offsets move in fractions of the grid span
    if config.fit_background:
        step[5:] = (0.05, 0.3, 0.05)
    best = None
    total_evals = 0
    for start in range(mcfg.restarts):
        if start == 0:
            xs = x0
        else:
            xs = x0.copy()
            xs[:3] += rng.uniform(-0.2, 0.2, size=3)  # +/-20% in log space
            xs[3:5] += rng.uniform(-0.05, 0.05, size=2)
        try:
            x_min, f_min, ev = nelder_mead(obj, xs, inner, initial_step=step)
        except NumericalError:
            continue
        total_evals += ev
        if best is None or f_min < best[1]:
            best = (x_min, f_min)
        if best[1] < 1e-18:
            break  # data already matched to numerical noise
    if best is None:
        raise NumericalError("all fit starts failed (objective non-finite)")
    # Polish the winner with a tight simplex.
    try:
        x_min, f_min, ev = nelder_mead(obj, best[0], inner, initial_step=step / 20.0)
        total_evals += ev
        if f_min < best[1]:
            best = (x_min, f_min)
    except NumericalError:
        pass

    params = _unpack(best[0], f_mid, f_span, init, config.fit_background)
    if params is None:
        raise NumericalError("fit converged to invalid parameters")
    init_hz = _hz_values(init, config.fit_background)
    final_hz = _hz_values(params, config.fit_background)
    report = {name: (init_hz[name], final_hz[name]) for name in final_hz}
    return FitResult(
        params=params,
        residual=best[1],
        evaluations=total_evals,
        converged=total_evals < mcfg.max_evaluations and math.isfinite(best[1]),
        per_parameter_report=report,
    )


def fit_report_text(result):
    """Stable key-value block (MHz units) for logging and diffing."""
    lines = []
    order = ["f0_hz", "kappa0_hz", "fm_hz", "kappa_m_hz", "g_hz",
             "bg_amplitude", "bg_phase", "bg_delay"]
    for name in order:
        if name not in result.per_parameter_report:
            continue
        init, final = result.per_parameter_report[name]
        if name.endswith("_hz"):
            label = name[:-3] + "_mhz"
            init, final = init / 1e6, final / 1e6
        else:
            label = name
        lines.append(f"{label:<16}: {final:.6f} (init {init:.6f})")
    lines.append(f"{'residual':<16}: {result.residual:.6e}")
    lines.append(f"{'evaluations':<16}: {result.evaluations}")
    lines.append(f"{'converged':<16}: {'yes' if result.converged else 'no'}")
    return "\n".join(lines) + "\n"
