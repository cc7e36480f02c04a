"""Minimal deterministic SVG line plots.

Byte-identical output for identical input makes these snapshot-testable;
matplotlib renderings (figures module) are the human-facing counterpart.
"""

import math

from .errors import ContractError, DataError

WIDTH, HEIGHT = 800.0, 500.0
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70.0, 20.0, 20.0, 50.0

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _nice_ticks(lo, hi, n=6):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _log_ticks(lo, hi):
    ticks = []
    d = math.floor(math.log10(lo))
    while 10.0**d <= hi * (1 + 1e-12):
        if 10.0**d >= lo * (1 - 1e-12):
            ticks.append(10.0**d)
        d += 1
    return ticks or [lo, hi]


class Axis:
    def __init__(self, lo, hi, log, length, offset, invert=False):
        if log and lo <= 0:
            raise ContractError("log axis requires positive data")
        self.lo, self.hi, self.log = lo, hi, log
        self.length, self.offset, self.invert = length, offset, invert

    def to_px(self, v):
        if self.log:
            lo, hi, v = math.log10(self.lo), math.log10(self.hi), math.log10(v)
        else:
            lo, hi = self.lo, self.hi
        frac = 0.5 if hi == lo else (v - lo) / (hi - lo)
        if self.invert:
            frac = 1.0 - frac
        return self.offset + frac * self.length

    def ticks(self):
        return _log_ticks(self.lo, self.hi) if self.log else _nice_ticks(self.lo, self.hi)


def emit_svg_plot(series, path, x_label="", y_label="", x_log=False, y_log=False,
                  title=""):
    """Render (label, x, y) series as a standalone SVG file.

    Non-finite points are dropped; the number dropped is recorded in a
    comment in the SVG header.  Raises DataError when nothing is plottable.
    """
    if not series:
        raise DataError("no series to plot")
    cleaned = []
    skipped = 0
    for label, xs, ys in series:
        pts = []
        for x, y in zip(xs, ys):
            x, y = float(x), float(y)
            if math.isfinite(x) and math.isfinite(y) and not (x_log and x <= 0) \
                    and not (y_log and y <= 0):
                pts.append((x, y))
            else:
                skipped += 1
        if pts:
            cleaned.append((str(label), pts))
    if not cleaned:
        raise DataError("all points are non-finite")

    xs_all = [p[0] for _, pts in cleaned for p in pts]
    ys_all = [p[1] for _, pts in cleaned for p in pts]
    pad = lambda lo, hi: (lo, hi) if hi > lo else (lo - 0.5, hi + 0.5)
    x_lo, x_hi = pad(min(xs_all), max(xs_all))
    y_lo, y_hi = pad(min(ys_all), max(ys_all))
    x_axis = Axis(x_lo, x_hi, x_log, WIDTH - MARGIN_L - MARGIN_R, MARGIN_L)
    y_axis = Axis(y_lo, y_hi, y_log, HEIGHT - MARGIN_T - MARGIN_B, MARGIN_T, invert=True)

    out = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(f"<!-- skipped_points: {skipped} -->")
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:g}" '
               f'height="{HEIGHT:g}" viewBox="0 0 {WIDTH:g} {HEIGHT:g}">')
    out.append(f'<rect width="{WIDTH:g}" height="{HEIGHT:g}" fill="white"/>')
    # Frame
    x0, x1 = MARGIN_L, WIDTH - MARGIN_R
    y0, y1 = MARGIN_T, HEIGHT - MARGIN_B
    out.append(f'<rect x="{x0:g}" y="{y0:g}" width="{x1 - x0:g}" height="{y1 - y0:g}" '
               'fill="none" stroke="black" stroke-width="1"/>')
    # Ticks and labels
    for t in x_axis.ticks():
        px = x_axis.to_px(t)
        out.append(f'<line x1="{px:.2f}" y1="{y1:g}" x2="{px:.2f}" y2="{y1 + 5:g}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{y1 + 18:g}" font-size="11" '
                   f'text-anchor="middle" font-family="sans-serif">{t:g}</text>')
    for t in y_axis.ticks():
        py = y_axis.to_px(t)
        out.append(f'<line x1="{x0 - 5:g}" y1="{py:.2f}" x2="{x0:g}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8:g}" y="{py + 4:.2f}" font-size="11" '
                   f'text-anchor="end" font-family="sans-serif">{t:g}</text>')
    if x_label:
        out.append(f'<text x="{(x0 + x1) / 2:g}" y="{HEIGHT - 10:g}" font-size="13" '
                   f'text-anchor="middle" font-family="sans-serif">{x_label}</text>')
    if y_label:
        out.append(f'<text x="15" y="{(y0 + y1) / 2:g}" font-size="13" text-anchor="middle" '
                   f'font-family="sans-serif" transform="rotate(-90 15 {(y0 + y1) / 2:g})">'
                   f'{y_label}</text>')
    if title:
        out.append(f'<text x="{(x0 + x1) / 2:g}" y="15" font-size="14" '
                   f'text-anchor="middle" font-family="sans-serif">{title}</text>')
    # Series
    for i, (label, pts) in enumerate(cleaned):
        color = _COLORS[i % len(_COLORS)]
        coords = " ".join(f"{x_axis.to_px(x):.2f},{y_axis.to_px(y):.2f}" for x, y in pts)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
    # Legend
    lx, ly = x0 + 10, y0 + 15
    for i, (label, _) in enumerate(cleaned):
        color = _COLORS[i % len(_COLORS)]
        out.append(f'<line x1="{lx:g}" y1="{ly + 16 * i:g}" x2="{lx + 20:g}" '
                   f'y2="{ly + 16 * i:g}" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{lx + 26:g}" y="{ly + 16 * i + 4:g}" font-size="11" '
                   f'font-family="sans-serif">{label}</text>')
    out.append("</svg>")
    data = "\n".join(out) + "\n"
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc
