"""File ingestion and emission: CSV spectra, a 1-port Touchstone subset,
and the INI run configuration."""

import configparser
import math
from pathlib import Path

import numpy as np

from .errors import ContractError, DataError
from .spectra import Spectrum

FORMATS = ("csv-complex", "csv-db-phase", "touchstone")

_TS_UNIT_SCALE = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}

# %.17g survives a float round trip bit-exactly.
_FMT = "%.17g"


def _parse_float(token, path, line_no):
    try:
        return float(token)
    except ValueError:
        raise DataError(f"{path}:{line_no}: non-numeric value {token!r}") from None


def _finish(freqs, values, path, label):
    if len(freqs) < 2:
        raise DataError(f"{path}: need at least 2 data rows")
    freqs = np.asarray(freqs, dtype=float)
    values = np.asarray(values, dtype=complex)
    order = np.argsort(freqs)
    freqs, values = freqs[order], values[order]
    if np.any(np.diff(freqs) <= 0):
        raise DataError(f"{path}: duplicate frequencies after sorting")
    return Spectrum(freqs, values, label=label)


def _read_csv(path, header, converter):
    freqs, values = [], []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or [c.strip() for c in lines[0].split(",")] != list(header):
        raise DataError(f"{path}: expected header {','.join(header)!r}")
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != 3:
            raise DataError(f"{path}:{line_no}: expected 3 columns")
        f, a, b = (_parse_float(c, path, line_no) for c in cells)
        freqs.append(f)
        values.append(converter(a, b))
    return freqs, values


def _read_touchstone(path):
    freqs, values = [], []
    option = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("!", 1)[0].strip()
            if not line:
                continue
            if line.startswith("#"):
                if option is not None:
                    raise DataError(f"{path}:{line_no}: duplicate option line")
                tokens = line[1:].split()
                if (len(tokens) != 5 or tokens[0].lower() not in _TS_UNIT_SCALE
                        or tokens[1].upper() != "S"
                        or tokens[2].upper() not in ("MA", "DB", "RI")
                        or tokens[3].upper() != "R"):
                    raise DataError(f"{path}:{line_no}: unsupported Touchstone option {line!r}")
                _parse_float(tokens[4], path, line_no)
                option = (_TS_UNIT_SCALE[tokens[0].lower()], tokens[2].upper())
                continue
            if option is None:
                raise DataError(f"{path}:{line_no}: data before option line")
            tokens = line.split()
            if len(tokens) != 3:
                raise DataError(f"{path}:{line_no}: expected 3 columns (1-port only)")
            f, a, b = (_parse_float(t, path, line_no) for t in tokens)
            scale, fmt = option
            freqs.append(f * scale)
            if fmt == "RI":
                values.append(complex(a, b))
            elif fmt == "MA":
                values.append(a * np.exp(1j * math.radians(b)))
            else:  # DB
                values.append(10.0 ** (a / 20.0) * np.exp(1j * math.radians(b)))
    if option is None:
        raise DataError(f"{path}: missing Touchstone option line")
    return freqs, values


def read_spectrum(path, fmt):
    """Parse a spectrum file.  Formats: csv-complex (freq_hz,re,im),
    csv-db-phase (freq_hz,mag_db,phase_deg), touchstone (1-port)."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    label = path.stem
    if fmt == "csv-complex":
        freqs, values = _read_csv(path, ("freq_hz", "re", "im"), complex)
    elif fmt == "csv-db-phase":
        freqs, values = _read_csv(
            path, ("freq_hz", "mag_db", "phase_deg"),
            lambda db, deg: 10.0 ** (db / 20.0) * np.exp(1j * math.radians(deg)))
    elif fmt == "touchstone":
        freqs, values = _read_touchstone(path)
    else:
        raise ContractError(f"unknown format {fmt!r} (choose from {FORMATS})")
    try:
        return _finish(freqs, values, path, label)
    except ContractError as exc:
        raise DataError(f"{path}: {exc}") from exc


def write_spectrum(spectrum, path, fmt="csv-complex"):
    """Write a spectrum; read_spectrum inverts this bit-stably."""
    path = Path(path)
    lines = []
    if fmt == "csv-complex":
        lines.append("freq_hz,re,im")
        for f, v in zip(spectrum.freqs_hz, spectrum.values):
            lines.append(f"{_FMT % f},{_FMT % v.real},{_FMT % v.imag}")
    elif fmt == "csv-db-phase":
        lines.append("freq_hz,mag_db,phase_deg")
        for f, v in zip(spectrum.freqs_hz, spectrum.values):
            mag_db = 20.0 * math.log10(max(abs(v), 1e-300))
            lines.append(f"{_FMT % f},{_FMT % mag_db},{_FMT % math.degrees(np.angle(v))}")
    elif fmt == "touchstone":
        lines.append("! 1-port S-parameter data")
        lines.append("# Hz S RI R 50")
        for f, v in zip(spectrum.freqs_hz, spectrum.values):
            lines.append(f"{_FMT % f} {_FMT % v.real} {_FMT % v.imag}")
    else:
        raise ContractError(f"unknown format {fmt!r} (choose from {FORMATS})")
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def write_table(rows, header, path):
    """Write a list of row tuples as CSV with the given header."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, float):
                cells.append("nan" if math.isnan(cell) else _FMT % cell)
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_run_config(path):
    """Read an INI run configuration.

    Recognized sections: [model] (f0_mhz, kappa0_mhz, fm_mhz, kappa_m_mhz,
    g_mhz, path_ratio, bg_amplitude, bg_phase, bg_delay_s), [sweep]
    (f_start_mhz, f_stop_mhz, points, direction, conjugate), [fit]
    (objective_space, mag_floor_db, fit_background, restarts,
    max_evaluations), [pulse] (bandwidth_hz, span_s, n_samples).
    Returns a dict of dicts with numbers already converted.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise DataError(f"{path}: {exc}") from exc
    out = {}
    for section in parser.sections():
        sec = {}
        for key, raw in parser.items(section):
            for cast in (int, float):
                try:
                    sec[key] = cast(raw)
                    break
                except ValueError:
                    continue
            else:
                low = raw.strip().lower()
                if low in ("true", "yes", "on"):
                    sec[key] = True
                elif low in ("false", "no", "off"):
                    sec[key] = False
                else:
                    sec[key] = raw.strip()
        out[section] = sec
    return out
