"""Command-line surface tying the model, analysis and IO modules together.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

import argparse
import re
import sys
from pathlib import Path

import numpy as np

from . import figures, svgplot
from .errors import ContractError, DataError, NumericalError
from .fitting import FitConfig, fit_report_text, fit_transmission
from .io_formats import FORMATS, read_run_config, read_spectrum, write_spectrum, write_table
from .model import TWO_PI, BackgroundPath, CmtParams, ep_gap, eigenmodes, sweep_spectrum
from .numerics import MinimizerConfig
from .spectra import fit_resonance, group_delay, isolation_db, power_trend
from .timedomain import PulseSpec, apply_channel, estimate_delay, synth_pulse

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def _params_from_config(path):
    cfg = read_run_config(path)
    if "model" not in cfg:
        raise DataError(f"{path}: missing [model] section")
    m = cfg["model"]
    try:
        background = None
        if "bg_amplitude" in m:
            background = BackgroundPath(
                amplitude=m["bg_amplitude"],
                phase_offset=m.get("bg_phase", 0.0),
                delay=m.get("bg_delay_s", 0.0),
            )
        return CmtParams.from_hz(
            f0_hz=m["f0_mhz"] * 1e6,
            kappa0_hz=m["kappa0_mhz"] * 1e6,
            fm_hz=m["fm_mhz"] * 1e6,
            kappa_m_hz=m["kappa_m_mhz"] * 1e6,
            g_hz=m["g_mhz"] * 1e6,
            path_ratio=m.get("path_ratio", 2.0),
            background=background,
        )
    except KeyError as exc:
        raise DataError(f"{path}: [model] is missing key {exc.args[0]}") from exc


def _write_spectrum_outputs(spectrum, out_prefix, make_figures=True):
    csv_path = Path(f"{out_prefix}.csv")
    write_spectrum(spectrum, csv_path, "csv-complex")
    svgplot.emit_svg_plot(
        [(spectrum.label or "spectrum", spectrum.freqs_hz / 1e6, spectrum.magnitude_db())],
        f"{out_prefix}.svg", x_label="frequency (MHz)", y_label="|t| (dB)")
    if make_figures:
        figures.spectrum_figure([spectrum], f"{out_prefix}.png")
    return csv_path


def _cmd_simulate(args):
    params = _params_from_config(args.params)
    spectrum = sweep_spectrum(params, args.f_start, args.f_stop, args.points,
                              direction=args.direction,
                              conjugate_for_export=args.conjugate)
    csv_path = _write_spectrum_outputs(spectrum, args.out)
    print(f"wrote {csv_path} (+ .svg, .png)")
    return EXIT_OK


def _cmd_eigen(args):
    params = _params_from_config(args.params)
    modes = eigenmodes(params)
    print("mode frequencies (MHz), decay rates (MHz):")
    for z in modes:
        print(f"  f = {z.real / TWO_PI / 1e6:14.6f}   kappa = {-z.imag / TWO_PI / 1e6:10.6f}")
    print(f"ep-gap: {ep_gap(params) / TWO_PI / 1e6:.6f} MHz")
    return EXIT_OK


def _cmd_fit(args):
    data = read_spectrum(args.data, args.format)
    init = _params_from_config(args.params)
    config = FitConfig(
        objective_space=args.objective_space,
        fit_background=args.fit_background,
        minimizer=MinimizerConfig(restarts=args.restarts, seed=args.seed,
                                  max_evaluations=args.max_evaluations),
    )
    result = fit_transmission(data, init, config)
    report = fit_report_text(result)
    print(report, end="")
    Path(f"{args.out}_report.txt").write_text(report, encoding="utf-8")
    model = sweep_spectrum(result.params, data.freqs_hz[0], data.freqs_hz[-1],
                           len(data.freqs_hz), label="fit")
    svgplot.emit_svg_plot(
        [("data", data.freqs_hz / 1e6, data.magnitude_db()),
         ("fit", model.freqs_hz / 1e6, model.magnitude_db())],
        f"{args.out}_overlay.svg", x_label="frequency (MHz)", y_label="|t| (dB)")
    figures.fit_overlay_figure(data, model, f"{args.out}_overlay.png")
    return EXIT_OK


def _cmd_pulse(args):
    if bool(args.channel) == bool(args.params):
        raise ContractError("pass exactly one of --channel or --params")
    if args.channel:
        channel = read_spectrum(args.channel, args.format)
    else:
        params = _params_from_config(args.params)
        half_span = max(100.0 * args.bandwidth, 30e6)
        channel = sweep_spectrum(params, args.f_center - half_span,
                                 args.f_center + half_span, 4001,
                                 conjugate_for_export=True, label="model channel")
    spec = PulseSpec(f_center_hz=args.f_center, bandwidth_hz=args.bandwidth,
                     span_s=args.span, n_samples=args.samples)
    pulse = synth_pulse(spec)
    out = apply_channel(pulse, channel, args.f_center)
    delay = estimate_delay(pulse, out)
    for name, series in (("input", pulse), ("output", out)):
        rows = [(t, v.real, v.imag) for t, v in zip(series.times(), series.values)]
        write_table(rows, ("time_s", "re", "im"), f"{args.out}_{name}.csv")
    figures.pulse_figure(pulse, out, f"{args.out}.png")
    print(f"envelope delay: {delay * 1e6:.6f} us")
    return EXIT_OK


def _cmd_analyze(args):
    spectra = [read_spectrum(p, args.format) for p in args.data]
    primary = spectra[0]
    report = fit_resonance(primary, kind=args.kind)
    print(f"resonance ({report.kind}): f = {report.f_center_hz / 1e6:.6f} MHz, "
          f"Q = {report.q_factor:.2f}, 3 dB bandwidth = {report.bandwidth_3db_hz / 1e6:.6f} MHz")
    tau = group_delay(primary)
    rows = [(f, t) for f, t in zip(primary.freqs_hz, tau)]
    write_table(rows, ("freq_hz", "group_delay_s"), f"{args.out}_group_delay.csv")
    figures.group_delay_figure(primary, f"{args.out}_group_delay.png")
    idx = int(np.argmin(np.abs(primary.freqs_hz - report.f_center_hz)))
    print(f"group delay at {primary.freqs_hz[idx] / 1e6:.6f} MHz: {tau[idx] * 1e6:.6f} us")
    if len(spectra) == 2:
        iso, iso_max, iso_f = isolation_db(spectra[1], spectra[0])
        write_table(list(zip(primary.freqs_hz, iso)), ("freq_hz", "isolation_db"),
                    f"{args.out}_isolation.csv")
        print(f"max isolation: {iso_max:.2f} dB at {iso_f / 1e6:.6f} MHz")
    return EXIT_OK


_POWER_FILE = re.compile(r"^(fwd|rev)_(-?\d+(?:\.\d+)?)dBm\.csv$")


def _cmd_sweep(args):
    directory = Path(args.directory)
    if not directory.is_dir():
        raise DataError(f"{directory}: not a directory")
    pairs = {}
    for path in sorted(directory.iterdir()):
        m = _POWER_FILE.match(path.name)
        if m:
            pairs.setdefault(float(m.group(2)), {})[m.group(1)] = path
    entries = []
    for power in sorted(pairs):
        pair = pairs[power]
        if "fwd" not in pair or "rev" not in pair:
            raise DataError(f"power {power} dBm is missing its "
                            f"{'rev' if 'fwd' in pair else 'fwd'} file")
        entries.append((power,
                        read_spectrum(pair["fwd"], "csv-complex"),
                        read_spectrum(pair["rev"], "csv-complex")))
    if not entries:
        raise DataError(f"{directory}: no files matching fwd/rev_<power>dBm.csv")
    rows = power_trend(entries)
    table = [(r.power_dbm, r.max_isolation_db, r.dip_freq_hz, r.bandwidth_3db_hz,
              r.error or "") for r in rows]
    write_table(table, ("power_dbm", "max_isolation_db", "dip_freq_hz",
                        "bandwidth_3db_hz", "error"), args.out)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="empcirc",
        description="Coupled-mode circulator simulator and spectrum-analysis toolkit")
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="evaluate the model on a frequency grid")
    p.add_argument("--params", required=True, help="INI config with a [model] section")
    p.add_argument("--f-start", type=float, required=True, help="start frequency (Hz)")
    p.add_argument("--f-stop", type=float, required=True, help="stop frequency (Hz)")
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--direction", choices=("forward", "reverse"), default="forward")
    p.add_argument("--conjugate", action="store_true",
                   help="export in the measurement phase convention")
    p.add_argument("-o", "--out", default="simulate", help="output path prefix")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("eigen", help="print normal modes and the exceptional-point gap")
    p.add_argument("--params", required=True)
    p.set_defaults(func=_cmd_eigen)

    p = sub.add_parser("fit", help="fit the model to a measured spectrum")
    p.add_argument("data")
    p.add_argument("--format", choices=FORMATS, default="csv-complex")
    p.add_argument("--params", required=True, help="INI config with the initial guess")
    p.add_argument("--objective-space", choices=("db", "complex"), default="db")
    p.add_argument("--fit-background", action="store_true")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-evaluations", type=int, default=100_000)
    p.add_argument("-o", "--out", default="fit")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("pulse", help="narrowband pulse through a channel")
    p.add_argument("--channel", help="spectrum file used as the channel")
    p.add_argument("--format", choices=FORMATS, default="csv-complex")
    p.add_argument("--params", help="INI config; model spectrum used as the channel")
    p.add_argument("--f-center", type=float, required=True, help="carrier (Hz)")
    p.add_argument("--bandwidth", type=float, required=True, help="envelope FWHM (Hz)")
    p.add_argument("--span", type=float, default=0.2, help="simulated duration (s)")
    p.add_argument("--samples", type=int, default=4096, help="power of two")
    p.add_argument("-o", "--out", default="pulse")
    p.set_defaults(func=_cmd_pulse)

    p = sub.add_parser("analyze", help="Q, bandwidth, group delay, isolation")
    p.add_argument("data", nargs="+", help="one spectrum, or dip-path then through-path")
    p.add_argument("--format", choices=FORMATS, default="csv-complex")
    p.add_argument("--kind", choices=("peak", "dip"), default="dip")
    p.add_argument("-o", "--out", default="analyze")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("sweep", help="power-trend table from fwd/rev_<power>dBm.csv files")
    p.add_argument("directory")
    p.add_argument("-o", "--out", default="power_trend.csv")
    p.set_defaults(func=_cmd_sweep)
    return parser


def cli_main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
