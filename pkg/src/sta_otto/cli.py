"""``sta-otto`` command line: trace, cycle, sweep and pareto.

Exit codes: 0 ok, 1 configuration error, 2 non-engine regime,
3 shortcut method not applicable, 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Any, Iterable, Sequence

import numpy as np

from .config import cycle_config, load_settings, settings_to_config_dict, sweep_spec, SweepSpec
from .dynamics import qstar_na_profile
from .engine import CycleConfig, EnginePerformance, Method, run_cycle
from .errors import ConfigError, ConvergenceError, StaOttoError, TrapInversionError
from .protocol import eval_ramp
from .sta import StaMethod, cost_density, initial_mean_energy, lcd_freq_sq, qstar

EXIT_OK, EXIT_CONFIG, EXIT_NOT_ENGINE, EXIT_METHOD_INVALID, EXIT_IO = 0, 1, 2, 3, 4

TRACE_COLUMNS = ("t", "s", "omega", "domega", "ddomega", "qstar", "cost_density")
PARETO_COLUMNS = ("method", "tau", "eta", "power")
PARETO_METHODS = (Method.NA, Method.CD, Method.LCD, Method.IE)


def fmt(value: Any) -> str:
    """CSV cell: 12 significant digits, booleans as true/false, None as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Method):
        return value.value
    if isinstance(value, (float, np.floating)):
        return format(float(value) + 0.0, "#.12g")
    return str(value)


def _round12(value):
    return None if value is None else float(format(value, ".12g"))


@dataclass(frozen=True)
class OutputRecord:
    tau: float
    method: Method
    qstar1: float
    qstar3: float
    w1: float
    w3: float
    q2: float
    cost1: float | None
    cost3: float | None
    eta: float | None
    power: float | None
    engine_valid: bool
    method_valid: bool

    @classmethod
    def columns(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_performance(cls, tau: float, method: Method, perf: EnginePerformance) -> "OutputRecord":
        return cls(
            tau=tau, method=Method(method), qstar1=perf.qstar1, qstar3=perf.qstar3,
            w1=perf.w1, w3=perf.w3, q2=perf.q2, cost1=perf.cost1, cost3=perf.cost3,
            eta=perf.eta, power=perf.power,
            engine_valid=perf.engine_valid, method_valid=perf.method_valid,
        )

    def cells(self) -> list[str]:
        return [fmt(getattr(self, name)) for name in self.columns()]

    def to_json(self) -> dict[str, Any]:
        out = {}
        for name in self.columns():
            value = getattr(self, name)
            if isinstance(value, Method):
                value = value.value
            elif isinstance(value, float):
                value = _round12(value)
            out[name] = value
        return out


def write_csv(stream, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


# -- trace ----------------------------------------------------------------------

def trace_rows(config: CycleConfig, method: Method, n_samples: int,
               stroke: str = "compression") -> tuple[list[list[str]], str | None]:
    """Time profile of one stroke; returns CSV rows and an error message, if any.

    For CD the rows stop before the first sample where the trap inverts.
    """
    if n_samples < 2:
        raise ConfigError("n_samples", "must be >= 2")
    method = Method(method)
    if stroke == "compression":
        ramp, beta = config.compression_ramp(), config.baths.beta_cold
    else:
        ramp, beta = config.expansion_ramp(), config.baths.beta_hot
    sample = eval_ramp(ramp, np.linspace(0.0, ramp.tau, n_samples))
    error = None
    n_ok = n_samples
    zeros = np.zeros(n_samples)

    if method is Method.AD:
        q, cost = np.ones(n_samples), zeros
    elif method is Method.NA:
        per_sample = -(-config.ode.n_steps // (n_samples - 1))
        _, q_full = qstar_na_profile(ramp, per_sample * (n_samples - 1))
        q, cost = q_full[::per_sample], zeros
    else:
        sta = method.sta
        e0 = initial_mean_energy(ramp.omega_start, beta)
        if sta is StaMethod.CD:
            ratio = sample.domega**2 / (4 * sample.omega**4)
            bad = np.flatnonzero(ratio >= 1)
            if bad.size:
                n_ok = int(bad[0])
                error = f"CD trap inversion at t={fmt(float(sample.t[n_ok]))}"
            ok = slice(0, n_ok)
            part = type(sample)(*(getattr(sample, f.name)[ok] for f in fields(sample)))
            q = np.asarray(qstar(sta, part))
            cost = np.asarray(cost_density(sta, part, ramp.omega_start, e0))
        else:
            q = np.asarray(qstar(sta, sample))
            cost = np.asarray(cost_density(sta, sample, ramp.omega_start, e0))
            if sta is StaMethod.LCD:
                lcd = lcd_freq_sq(sample)
                if np.any(lcd <= 0):
                    t_bad = float(sample.t[np.flatnonzero(lcd <= 0)[0]])
                    error = f"LCD squared frequency non-positive at t={fmt(t_bad)}"
            elif not config.tau > 1 / (2 * config.omega2):
                error = f"IE trap inversion: tau <= 1/(2 omega2) = {fmt(1 / (2 * config.omega2))}"

    rows = []
    for k in range(n_ok):
        rows.append([fmt(float(v)) for v in (
            sample.t[k], sample.s[k], sample.omega[k], sample.domega[k], sample.ddomega[k], q[k], cost[k],
        )])
    if error is not None:
        rows.append([f"# error: {error}"])
    return rows, error


# -- sweep ----------------------------------------------------------------------

def _evaluate(point: tuple[CycleConfig, float, Method]) -> OutputRecord:
    base, tau, method = point
    perf = run_cycle(replace(base, tau=tau, method=method))
    return OutputRecord.from_performance(tau, method, perf)


def sweep_records(base: CycleConfig, spec: SweepSpec, workers: int = 1) -> list[OutputRecord]:
    """One record per (tau, method), sorted by tau then method name."""
    points = [(base, tau, m) for tau in spec.taus() for m in spec.methods]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_evaluate, points, chunksize=max(1, len(points) // (4 * workers))))
    else:
        records = [_evaluate(p) for p in points]
    return sorted(records, key=lambda r: (r.tau, r.method.value))


def pareto_rows(records: Iterable[OutputRecord]) -> list[list[str]]:
    valid = [r for r in records if r.engine_valid and r.method_valid and r.eta is not None]
    valid.sort(key=lambda r: (r.method.value, r.tau))
    return [[r.method.value, fmt(r.tau), fmt(r.eta), fmt(r.power)] for r in valid]


# -- commands -------------------------------------------------------------------

def _emit(text: str, out: str | None, stdout) -> int:
    if out is None:
        stdout.write(text)
        return EXIT_OK
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    write_csv(buf, header, rows)
    return buf.getvalue()


def cmd_trace(args, settings, stdout) -> int:
    config = cycle_config(settings)
    rows, error = trace_rows(config, config.method, args.n_samples, args.stroke)
    status = _emit(_csv_text(TRACE_COLUMNS, rows), args.out, stdout)
    if status:
        return status
    return EXIT_METHOD_INVALID if error else EXIT_OK


def cmd_cycle(args, settings, stdout) -> int:
    config = cycle_config(settings)
    perf = run_cycle(config)
    record = OutputRecord.from_performance(config.tau, config.method, perf)
    if args.format == "csv":
        text = _csv_text(OutputRecord.columns(), [record.cells()])
    else:
        doc = {"config": settings_to_config_dict(config), "record": record.to_json()}
        if perf.reason:
            doc["reason"] = perf.reason
        text = json.dumps(doc, indent=2) + "\n"
    status = _emit(text, args.out, stdout)
    if status:
        return status
    if not perf.method_valid:
        return EXIT_METHOD_INVALID
    if not perf.engine_valid:
        return EXIT_NOT_ENGINE
    return EXIT_OK


def cmd_sweep(args, settings, stdout) -> int:
    base = cycle_config(settings, tau=settings.get("tau", 1.0))
    records = sweep_records(base, sweep_spec(settings), args.workers)
    return _emit(_csv_text(OutputRecord.columns(), [r.cells() for r in records]), args.out, stdout)


def cmd_pareto(args, settings, stdout) -> int:
    base = cycle_config(settings, tau=settings.get("tau", 1.0))
    records = sweep_records(base, sweep_spec(settings, PARETO_METHODS), args.workers)
    rows = pareto_rows(records)
    status = _emit(_csv_text(PARETO_COLUMNS, rows), args.out, stdout)
    if status:
        return status
    return EXIT_OK if rows else EXIT_NOT_ENGINE


COMMANDS = {"trace": cmd_trace, "cycle": cmd_cycle, "sweep": cmd_sweep, "pareto": cmd_pareto}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sta-otto",
        description="Quantum Otto engine with shortcut-to-adiabaticity strokes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value or JSON config file")
        p.add_argument("--out", help="output file (default: stdout)")
        for key in ("omega1", "omega2", "beta1", "beta2", "tau", "tau_min", "tau_max", "quad_rel_tol"):
            p.add_argument(f"--{key}", type=str)
        for key in ("n_points", "ode_steps"):
            p.add_argument(f"--{key}", type=str)
        p.add_argument("--method")
        p.add_argument("--methods", help="comma separated, e.g. NA,CD,LCD,IE")
        p.add_argument("--spacing", help="linear or log")
        if name == "trace":
            p.add_argument("--n-samples", dest="n_samples", type=int, default=201)
            p.add_argument("--stroke", choices=("compression", "expansion"), default="compression")
        if name == "cycle":
            p.add_argument("--format", choices=("json", "csv"), default="json")
        if name in ("sweep", "pareto"):
            p.add_argument("--workers", type=int, default=1)
    return parser


OVERRIDE_KEYS = ("omega1", "omega2", "beta1", "beta2", "tau", "tau_min", "tau_max", "quad_rel_tol",
                 "n_points", "ode_steps", "method", "methods", "spacing")


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in OVERRIDE_KEYS}
    try:
        settings = load_settings(args.config, overrides)
        return COMMANDS[args.command](args, settings, stdout)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"config error: ode_steps: {exc}; increase ode_steps", file=sys.stderr)
        return EXIT_CONFIG
    except TrapInversionError as exc:
        print(f"method invalid: {exc}", file=sys.stderr)
        return EXIT_METHOD_INVALID
    except StaOttoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
