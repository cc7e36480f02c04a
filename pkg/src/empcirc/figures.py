"""Matplotlib report figures written next to the delimited outputs."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .spectra import group_delay, unwrap_phase

# Pinned metadata keeps PNG bytes stable across identical runs.
_PNG_META = {"Software": "empcirc"}


def _save(fig, path):
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)


def spectrum_figure(spectra, path, title=""):
    """Magnitude (dB) and phase panels for one or more spectra."""
    fig, (ax_mag, ax_ph) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    for s in spectra:
        f_mhz = s.freqs_hz / 1e6
        ax_mag.plot(f_mhz, s.magnitude_db(), label=s.label or None)
        ax_ph.plot(f_mhz, np.degrees(unwrap_phase(s)))
    ax_mag.set_ylabel("|t| (dB)")
    ax_ph.set_ylabel("phase (deg)")
    ax_ph.set_xlabel("frequency (MHz)")
    if any(s.label for s in spectra):
        ax_mag.legend(fontsize=8)
    if title:
        ax_mag.set_title(title)
    fig.tight_layout()
    _save(fig, path)


def fit_overlay_figure(data, model, path, title="model fit"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(data.freqs_hz / 1e6, data.magnitude_db(), ".", ms=3, label="data")
    ax.plot(model.freqs_hz / 1e6, model.magnitude_db(), "-", lw=1.2, label="fit")
    ax.set_xlabel("frequency (MHz)")
    ax.set_ylabel("|t| (dB)")
    ax.legend(fontsize=8)
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)


def group_delay_figure(spectrum, path, title="group delay"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(spectrum.freqs_hz / 1e6, group_delay(spectrum) * 1e6, lw=1.2)
    ax.axhline(0.0, color="gray", lw=0.8)
    ax.set_xlabel("frequency (MHz)")
    ax.set_ylabel("group delay (us)")
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)


def pulse_figure(input_env, output_env, path, title="envelope delay"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    t_in = input_env.times() * 1e6
    t_out = output_env.times() * 1e6
    ax.plot(t_in, np.abs(input_env.values), label="input")
    out_mag = np.abs(output_env.values)
    peak = out_mag.max()
    if peak > 0:
        out_mag = out_mag / peak
    ax.plot(t_out, out_mag, label="output (normalized)")
    ax.set_xlabel("time (us)")
    ax.set_ylabel("|envelope|")
    ax.legend(fontsize=8)
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)
