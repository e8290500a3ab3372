"""Command-line front end: ``msgate <command> [options]``.

Parameter precedence is built-in defaults < config file < command-line
flags. The config file holds ``key = value`` lines (``#`` starts a comment)
using the long flag names, e.g. ``phonon-dim = 6``. ``--config`` names the
file; otherwise ``$MSGATE_CONFIG`` is used if set.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

from . import figures
from .core import GateParams, MSGateError
from .evolve import write_csv
from .hamiltonians import ToyParams

COMMANDS = ("fig1", "fig2", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "periods", "sweep")

# option name -> (type, default); None defaults fall back to per-command values
OPTIONS = {
    "omega": (float, 0.1),
    "eta": (float, 0.025),
    "nu": (float, 5.0),
    "dnu": (float, 0.025),
    "phonon-dim": (int, 4),
    "dt": (float, None),
    "t-end": (float, None),
    "n-th": (str, None),
    "alpha": (float, 1.0),
    "kappa": (float, math.sqrt(2.0) - 1.0),
    "jobs": (int, 1),
    "out": (str, None),
    "plot": (str, None),
    "param": (str, None),
    "values": (str, None),
    "numeric": (bool, None),
    "period-method": (str, "extremum"),
}


class UsageError(Exception):
    pass


def read_config(path) -> dict:
    """Parse a ``key = value`` file into a dict keyed by option name."""
    conf = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("_", "-")
            if not sep or key not in OPTIONS:
                raise UsageError(f"{path}:{lineno}: cannot parse {line!r}")
            conf[key] = value.strip()
    return conf


def _convert(key, value):
    kind = OPTIONS[key][0]
    if kind is bool:
        if isinstance(value, bool):
            return value
        if value.lower() in ("1", "true", "yes", "on"):
            return True
        if value.lower() in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"{key}: expected a boolean, got {value!r}")
    try:
        return kind(value)
    except ValueError:
        raise UsageError(f"{key}: cannot convert {value!r} to {kind.__name__}") from None


def _floats(text, name):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--{name} expects comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="msgate",
        description="Simulate the two-beam Molmer-Sorensen gate and write figure data as CSV.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--omega", type=float, help="Rabi frequency (default 0.1)")
    ap.add_argument("--eta", type=float, help="Lamb-Dicke parameter (default 0.025)")
    ap.add_argument("--nu", type=float, help="trap frequency (default 5)")
    ap.add_argument("--dnu", type=float, help="detuning offset (default 0.025)")
    ap.add_argument("--phonon-dim", type=int, help="phonon truncation N (default 4)")
    ap.add_argument("--dt", type=float, help="RK4 step (default pi / (50 nu))")
    ap.add_argument("--t-end", type=float, help="end time for fig1 and fig4a")
    ap.add_argument("--n-th", help="comma-separated mean phonon numbers for fig2/fig4b")
    ap.add_argument("--alpha", type=float, help="toy-gate coupling (default 1)")
    ap.add_argument("--kappa", type=float, help="toy-gate ratio (default sqrt2 - 1)")
    ap.add_argument("--jobs", type=int, help="worker threads for independent runs")
    ap.add_argument("--out", help="output CSV path (default: stdout)")
    ap.add_argument("--plot", help="also write an SVG line chart here (needs matplotlib)")
    ap.add_argument("--config", help="key = value parameter file (default $MSGATE_CONFIG)")
    ap.add_argument("--param", choices=figures.SWEEP_PARAMS, help="sweep: parameter to vary")
    ap.add_argument("--values", help="sweep/fig3*: comma-separated parameter values")
    num = ap.add_mutually_exclusive_group()
    num.add_argument("--numeric", dest="numeric", action="store_true", default=None,
                     help="sweep/fig3*: include the simulated period (default on for fig3*)")
    num.add_argument("--no-numeric", dest="numeric", action="store_false",
                     help="sweep/fig3*: skip the simulation")
    ap.add_argument("--period-method", choices=("extremum", "fit"),
                    help="period extraction for fig1/periods (default extremum)")
    return ap


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags into one option dict."""
    opts = {k: v[1] for k, v in OPTIONS.items()}
    path = args.config or os.environ.get("MSGATE_CONFIG")
    if path:
        try:
            conf = read_config(path)
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
        opts.update({k: _convert(k, v) for k, v in conf.items()})
    for key in OPTIONS:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            opts[key] = value
    return opts


def _check(opts, command):
    if opts["jobs"] < 1:
        raise UsageError("--jobs must be >= 1")
    if opts["period-method"] not in ("extremum", "fit"):
        raise UsageError("period-method must be 'extremum' or 'fit'")
    if command == "sweep":
        if not opts["param"] or not opts["values"]:
            raise UsageError("sweep needs --param and --values")
    elif opts["param"]:
        raise UsageError("--param only applies to sweep")
    if opts["values"] and command not in ("sweep", "fig3a", "fig3b", "fig3c"):
        raise UsageError(f"--values does not apply to {command}")
    if opts["numeric"] is not None and command not in ("sweep", "fig3a", "fig3b", "fig3c"):
        raise UsageError(f"--numeric/--no-numeric do not apply to {command}")
    if opts["n-th"] and command not in ("fig2", "fig4b"):
        raise UsageError(f"--n-th does not apply to {command}")
    if opts["t-end"] is not None and command not in ("fig1", "fig4a"):
        raise UsageError(f"--t-end does not apply to {command}")
    if opts["plot"] and command == "periods":
        raise UsageError("periods has no plot")


def _params(opts):
    try:
        p = GateParams(opts["omega"], opts["eta"], opts["nu"], opts["dnu"], opts["phonon-dim"])
        tp = ToyParams(opts["alpha"], opts["kappa"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return p, tp


def run(command: str, opts: dict, stdout=None) -> None:
    """Execute one command with resolved options."""
    stdout = stdout or sys.stdout
    p, tp = _params(opts)
    dt, jobs = opts["dt"], opts["jobs"]
    out = opts["out"]

    if command == "periods":
        summary = figures.periods(p, tp, dt=dt, method=opts["period-method"])
        line = " ".join(f"{k}={_fmt_period(k, v)}" for k, v in summary.items())
        if out:
            with open(out, "w") as fh:
                fh.write(line + "\n")
        print(line, file=stdout)
        return

    if command == "fig1":
        traj = figures.fig1(p, t_end=opts["t-end"] or 16000.0, dt=dt)
        header, rows = traj.table()
        T = figures.extract_period(traj, "ee", opts["period-method"]).value
        print(f"extracted period {T:.1f}", file=sys.stderr)
    elif command == "fig2":
        nth = _floats(opts["n-th"], "n-th") if opts["n-th"] else figures.FIG2_NTH
        header, rows = figures.fig2(p, nth, dt=dt, jobs=jobs)
    elif command in ("fig3a", "fig3b", "fig3c"):
        values = _floats(opts["values"], "values") if opts["values"] else None
        numeric = True if opts["numeric"] is None else opts["numeric"]
        header, rows = figures.fig3(p, command, values, numeric, dt=dt, jobs=jobs)
    elif command == "fig3d":
        header, rows = figures.fig3d(p, dt=dt, jobs=jobs)
    elif command == "fig4a":
        header, rows = figures.fig4a(tp, opts["t-end"])
    elif command == "fig4b":
        nth = _floats(opts["n-th"], "n-th") if opts["n-th"] else figures.FIG4B_NTH
        header, rows = figures.fig4b(tp, nth)
    else:
        header, rows = figures.sweep(p, opts["param"], _floats(opts["values"], "values"),
                                     bool(opts["numeric"]), dt=dt, jobs=jobs)

    write_csv(out or stdout, header, rows)
    if opts["plot"]:
        if command == "fig1":
            header = ["t", "prob_gg", "prob_ge", "prob_eg", "prob_ee"]
            rows = [[t, *pr] for t, pr in zip(traj.times, traj.probs)]
        plot_svg(header, rows, opts["plot"], title=command)


# formula values keep two decimals, simulated and closed-form periods one
_DECIMALS = {"T_MS": 2, "T_ge_formula": 2, "T_toy": 6, "cz_shift": 6}


def _fmt_period(key, value):
    return f"{value:.{_DECIMALS.get(key, 1)}f}"


def plot_svg(header, rows, path, title="") -> None:
    """Line chart of every column against the first."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise MSGateError("--plot needs matplotlib (pip install matplotlib)") from None
    import numpy as np

    data = np.asarray(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    for j, name in enumerate(header[1:], 1):
        ax.plot(data[:, 0], data[:, j], label=name)
    ax.set_xlabel(header[0])
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve(args)
        _check(opts, args.command)
        run(args.command, opts)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"msgate: error: {exc}", file=sys.stderr)
        return 2
    except MSGateError as exc:
        print(f"msgate: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
