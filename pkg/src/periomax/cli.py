"""
Command-line driver.

``periomax test``
    read a single-column CSV, estimate ``f``, run a test, write a JSON report.
``periomax simulate``
    write a simulated series described by a JSON config to CSV.
``periomax mc SUITE``
    run one of the verification suites and write a JSON report plus CSV
    samples.

Settings resolve as built-in defaults, then the ``--config`` JSON document,
then command-line flags. The seed falls back to ``PERIOMAX_SEED``.

Exit codes: 0 success, 2 usage, config or input-file error, 3 degenerate or
otherwise unusable data, 4 a ``--check`` criterion failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import __version__
from .errors import DegenerateDataError, InvalidDataError, InvalidLengthError, PeriomaxError
from .experiments import SUITES
from .peaks import STATISTICS, normalize
from .processes import process_from_dict, simulate
from .series import MIN_LENGTH, TimeSeries, parseval_check, periodogram
from .spectral import lag_window_estimate

__all__ = ["main", "read_series_csv", "dumps_report", "build_test_report", "CliError"]

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CHECK = 0, 2, 3, 4

TEST_DEFAULTS = {"method": "max", "r": 2, "beta": 0.5, "kernel": "parzen", "eta": 0.3,
                 "floor": 1e-3, "no_center": False, "reps": 999, "workers": 1}
KERNEL_ALIASES = {"parzen": "parzen", "tukey": "tukey-hanning", "tukey-hanning": "tukey-hanning"}


class CliError(Exception):
    """Error carrying an exit code and a machine-readable type tag."""

    def __init__(self, message: str, code: int = EXIT_USAGE, kind: str = "usage"):
        super().__init__(message)
        self.code = code
        self.kind = kind

    def to_dict(self) -> dict:
        return {"error": {"type": self.kind, "message": str(self), "exit_code": self.code}}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, EXIT_USAGE, "usage")


# -- I/O --------------------------------------------------------------------

def read_series_csv(path) -> np.ndarray:
    """Read a single numeric column; a non-numeric first row is taken as a header."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_USAGE, "unreadable-file") from exc
    values = []
    for lineno, row in enumerate(rows, start=1):
        if len(row) != 1:
            raise CliError(f"row {lineno}: expected one column, got {len(row)}", EXIT_USAGE,
                           "invalid-data")
        try:
            v = float(row[0])
        except ValueError:
            if lineno == 1:
                continue
            raise CliError(f"row {lineno}: non-numeric value {row[0]!r}", EXIT_USAGE,
                           "invalid-data") from None
        if not math.isfinite(v):
            raise CliError(f"row {lineno}: non-finite value {row[0]!r}", EXIT_USAGE, "invalid-data")
        values.append(v)
    if len(values) < MIN_LENGTH:
        raise CliError(f"series has {len(values)} values; at least {MIN_LENGTH} are needed",
                       EXIT_USAGE, "short-series")
    return np.asarray(values)


def write_series_csv(path, values, header: str = "value") -> None:
    np.savetxt(path, np.asarray(values, float), fmt="%.17g", header=header, comments="")


def _check_finite(obj, where="report"):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise CliError(f"non-finite number in {where}", EXIT_DATA, "non-finite")
    if isinstance(obj, Mapping):
        for k, v in obj.items():
            _check_finite(v, f"{where}.{k}")
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _check_finite(v, where)


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps_report(report: Mapping) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_USAGE, "config") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"config {path} is not valid JSON: {exc}", EXIT_USAGE, "config") from exc
    if not isinstance(cfg, dict):
        raise CliError("config must be a JSON object", EXIT_USAGE, "config")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def _resolve(args: argparse.Namespace, defaults: Mapping, keys) -> dict:
    """defaults < config file < flags (flags left at ``None`` do not override)."""
    settings = dict(defaults)
    settings.update(_load_config(getattr(args, "config", None)))
    for k in keys:
        v = getattr(args, k, None)
        if v is not None and v is not False:
            settings[k] = v
    if settings.get("seed") is None:
        env = os.environ.get("PERIOMAX_SEED")
        if env is not None:
            try:
                settings["seed"] = int(env)
            except ValueError:
                raise CliError(f"PERIOMAX_SEED must be an integer, got {env!r}") from None
    if settings.get("seed") is None:
        settings["seed"] = 0
    return settings


# -- test -------------------------------------------------------------------

def build_test_report(x: np.ndarray, settings: Mapping, source: Mapping | None = None) -> dict:
    """Center, estimate ``f``, run the selected test and assemble the report body."""
    method = settings["method"]
    if method not in STATISTICS:
        raise CliError(f"unknown method {method!r}; choose from {sorted(STATISTICS)}")
    kernel = KERNEL_ALIASES.get(str(settings["kernel"]))
    if kernel is None:
        raise CliError(f"unknown kernel {settings['kernel']!r}; choose parzen or tukey")
    center = not settings.get("no_center", False)
    raw_mean = float(np.mean(x))
    y = x - raw_mean if center else np.asarray(x, float)
    if not np.any(y != 0):
        raise DegenerateDataError("series has zero variance after centering" if center
                                  else "series is identically zero")
    ts = TimeSeries(y, {"source": "csv"})
    est = lag_window_estimate(ts, kernel, float(settings["eta"]), float(settings["floor"]))
    V = normalize(periodogram(ts), est)
    func = STATISTICS[method]
    if method == "u":
        res = func(V, int(settings["r"]), reps=int(settings["reps"]), seed=int(settings["seed"]),
                   workers=int(settings["workers"]))
    elif method == "r":
        res = func(V, float(settings["beta"]), reps=int(settings["reps"]),
                   seed=int(settings["seed"]), workers=int(settings["workers"]))
    else:
        res = func(V)
    norm_mean = float(np.mean(V.values))
    inputs = {"n": ts.n, "method": method, "kernel": kernel, "eta": float(settings["eta"]),
              "floor": float(settings["floor"]), "centered": center, "seed": int(settings["seed"])}
    if method == "u":
        inputs["r"] = int(settings["r"])
    if method == "r":
        inputs["beta"] = float(settings["beta"])
    if method in ("u", "r"):
        inputs["reps"] = int(settings["reps"])
    if source:
        inputs.update(source)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "test",
        "periomax_version": __version__,
        "inputs": inputs,
        "results": [res.to_dict()],
        "diagnostics": {
            "sample_mean": raw_mean,
            "normalized_mean": norm_mean,
            "normalized_mean_gap": abs(norm_mean - 1.0),
            "bandwidth": est.bandwidth,
            "spectral_floor": est.floor,
            "n_floored": est.n_floored,
            "floor_applied": bool(est.n_floored > 0),
            "parseval_rel_gap": parseval_check(ts),
        },
    }


def cmd_test(args) -> int:
    t0 = time.perf_counter()
    keys = ("method", "r", "beta", "kernel", "eta", "floor", "no_center", "seed", "reps",
            "workers", "input", "out")
    s = _resolve(args, TEST_DEFAULTS, keys)
    if not s.get("input"):
        raise CliError("--input is required (or 'input' in the config)")
    path = Path(s["input"])
    x = read_series_csv(path)
    source = {"input": path.name}
    try:
        source["input_sha256"] = hashlib.sha256(path.read_bytes()).hexdigest()
    except OSError:
        pass
    report = build_test_report(x, s, source)
    report["timing"] = {} if args.no_timing else {"elapsed_seconds": time.perf_counter() - t0}
    _check_finite(report)
    _emit(dumps_report(report), s.get("out"))
    return EXIT_OK


# -- simulate ---------------------------------------------------------------

_SIM_RESERVED = ("n", "seed", "out", "process", "config")


def _process_spec(settings: Mapping) -> Any:
    if "process" in settings:
        return settings["process"]
    spec = {k: v for k, v in settings.items() if k not in _SIM_RESERVED}
    if "kind" not in spec:
        raise CliError("config needs a 'process' object or a top-level 'kind'", EXIT_USAGE, "config")
    return spec


def cmd_simulate(args) -> int:
    s = _resolve(args, {}, ("n", "seed", "out"))
    if "n" not in s:
        raise CliError("simulate needs n (flag or config)", EXIT_USAGE, "config")
    if not s.get("out"):
        raise CliError("simulate needs --out", EXIT_USAGE, "config")
    try:
        model = process_from_dict(_process_spec(s))
        path = simulate(model, int(s["n"]), int(s["seed"]))
    except PeriomaxError as exc:
        raise CliError(str(exc), EXIT_USAGE, "config") from exc
    write_series_csv(s["out"], path.values)
    return EXIT_OK


# -- mc ---------------------------------------------------------------------

def _sample_paths(out, samples_dir, suite: str, name: str):
    if samples_dir:
        base = Path(samples_dir) / f"{suite}_{name}"
    elif out:
        base = Path(out).with_suffix("")
        base = base.with_name(f"{base.name}_{name}")
    else:
        return None
    return base.with_suffix(".csv"), base.with_name(base.name + "_ecdf").with_suffix(".csv")


def cmd_mc(args) -> int:
    t0 = time.perf_counter()
    s = _resolve(args, {}, ("seed", "reps", "workers", "out", "samples_dir"))
    if args.check:
        s["check"] = True
    suite = SUITES[args.suite]
    try:
        body = suite(s)
    except PeriomaxError as exc:
        if isinstance(exc, (DegenerateDataError,)):
            raise CliError(str(exc), EXIT_DATA, "degenerate-data") from exc
        raise CliError(str(exc), EXIT_USAGE, "config") from exc
    except (TypeError, KeyError) as exc:
        raise CliError(f"invalid config: {exc}", EXIT_USAGE, "config") from exc
    samples = {}
    for name, smp in body["samples"].items():
        info = {"reps": smp.reps, "experiment": smp.experiment, "seed": smp.seed}
        paths = _sample_paths(s.get("out"), s.get("samples_dir"), args.suite, name)
        if paths is not None:
            smp.to_csv(paths[0])
            smp.ecdf_to_csv(paths[1])
            info["csv"] = paths[0].name
            info["ecdf_csv"] = paths[1].name
        samples[name] = info
    echo = {k: v for k, v in s.items() if k not in ("out", "samples_dir")}
    report = {"schema_version": SCHEMA_VERSION, "command": "mc", "suite": args.suite,
              "periomax_version": __version__, "inputs": echo, "results": body["result"],
              "samples": samples,
              "timing": {} if args.no_timing else {"elapsed_seconds": time.perf_counter() - t0}}
    _check_finite(report)
    _emit(dumps_report(report), s.get("out"))
    crit = body["result"].get("criterion")
    if args.check and crit is not None and not crit["passed"]:
        return EXIT_CHECK
    return EXIT_OK


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="periomax", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=f"periomax {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    t = sub.add_parser("test", help="test a CSV series for a hidden periodicity")
    t.add_argument("--input", help="single-column CSV, optional header")
    t.add_argument("--method", choices=sorted(STATISTICS))
    t.add_argument("--r", type=int, help="order index for the U(r) test")
    t.add_argument("--beta", type=float, help="trimming fraction for the R(beta) test")
    t.add_argument("--kernel", choices=("parzen", "tukey"))
    t.add_argument("--eta", type=float, help="bandwidth exponent, B = floor(n^eta)")
    t.add_argument("--floor", type=float, help="spectral floor as a fraction of r(0)/(2 pi)")
    t.add_argument("--no-center", action="store_true", default=None,
                   help="do not subtract the sample mean")
    t.add_argument("--reps", type=int, help="Monte Carlo calibration size for u and r")

    s = sub.add_parser("simulate", help="simulate a process described by a config")
    s.add_argument("--n", type=int)

    m = sub.add_parser("mc", help="run a verification suite")
    m.add_argument("suite", choices=sorted(SUITES))
    m.add_argument("--reps", type=int)
    m.add_argument("--samples-dir", help="directory for sample and ECDF CSV files")
    m.add_argument("--check", action="store_true",
                   help="exit with status 4 when the suite criterion fails")

    for sp in (t, s, m):
        sp.add_argument("--seed", type=int, help="master seed (falls back to PERIOMAX_SEED)")
        sp.add_argument("--out", help="output path (stdout when omitted for reports)")
        sp.add_argument("--config", help="flat JSON document of settings; flags win")
    for sp in (t, m):
        sp.add_argument("--workers", type=int, help="worker threads; results do not change")
        sp.add_argument("--no-timing", action="store_true",
                        help="omit wall-clock timing so reports are byte-reproducible")
    return p


COMMANDS = {"test": cmd_test, "simulate": cmd_simulate, "mc": cmd_mc}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise CliError("a command is required: test, simulate or mc")
        return COMMANDS[args.command](args)
    except CliError as exc:
        err = exc
    except (InvalidLengthError, InvalidDataError) as exc:
        err = CliError(str(exc), EXIT_USAGE, "invalid-data")
    except DegenerateDataError as exc:
        err = CliError(str(exc), EXIT_DATA, "degenerate-data")
    except PeriomaxError as exc:
        err = CliError(str(exc), EXIT_USAGE, "invalid-argument")
    sys.stderr.write(json.dumps(err.to_dict(), sort_keys=True) + "\n")
    return err.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
