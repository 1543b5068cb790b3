"""Acceptance criteria 1-9.

Each criterion is a function returning ``(ok, detail)``. Under pytest a
summary line per criterion is printed at the end of the session; run this
file directly to get the same lines without pytest.
"""
import io
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import otto_closed_form, trapezoid  # noqa: E402
from sta_otto.cli import main  # noqa: E402
from sta_otto.dynamics import (  # noqa: E402
    design_ie_frequency,
    propagate_oscillator,
    qstar_na_profile,
    quadrature,
    solve_ermakov,
    solve_na,
)
from sta_otto.engine import BathPair, CycleConfig, Method, run_cycle  # noqa: E402
from sta_otto.errors import TrapInversionError  # noqa: E402
from sta_otto.protocol import eval_ramp, make_quintic_ramp, reverse_ramp  # noqa: E402
from sta_otto.sta import (  # noqa: E402
    StaMethod,
    cost_density,
    initial_mean_energy,
    lcd_freq_sq,
    qstar,
    qstar_cd,
    qstar_ie,
    time_avg_cost,
)

W1, W2, B1, B2 = 0.32, 1.0, 0.5, 0.05
BATHS = BathPair(B1, B2)
REF_ARGS = ["--omega1", "0.32", "--omega2", "1", "--beta1", "0.5", "--beta2", "0.05"]
SWEEP_ARGS = ["sweep", *REF_ARGS, "--tau_min", "0.6", "--tau_max", "50", "--n_points", "40"]
STA = (Method.CD, Method.LCD, Method.IE)
SLACK = 1e-12

RESULTS: dict[int, tuple[str, bool, str]] = {}


def config(tau, method=Method.AD, **kw):
    return CycleConfig(W1, W2, BATHS, tau, method, **kw)


def log_grid(n):
    return [float(t) for t in np.geomspace(0.6, 50.0, n)]


_sweep_cache = {}


def reference_sweep(workers=1):
    """CSV text of the 40 x 5 reference sweep and its wall time."""
    if workers not in _sweep_cache:
        out = io.StringIO()
        start = time.perf_counter()
        code = main([*SWEEP_ARGS, "--workers", str(workers)], stdout=out)
        _sweep_cache[workers] = (code, out.getvalue(), time.perf_counter() - start)
    return _sweep_cache[workers]


def sweep_records():
    import csv

    code, text, _ = reference_sweep()
    assert code == 0
    table = {}
    for rec in csv.DictReader(io.StringIO(text)):
        row = {k: (None if v == "" else v) for k, v in rec.items()}
        for key in ("tau", "eta", "power", "w1", "w3", "q2", "cost1", "cost3", "qstar1", "qstar3"):
            if row[key] is not None:
                row[key] = float(row[key])
        table[(row["tau"], row["method"])] = row
    return table


# -- criteria -------------------------------------------------------------------

def criterion_1():
    work1, work3, heat2 = map(float, otto_closed_form(W1, W2, B1, B2))
    perf = run_cycle(config(3.0))
    timings = []
    for _ in range(200):
        start = time.perf_counter()
        run_cycle(config(3.0))
        timings.append(time.perf_counter() - start)
    runtime = float(np.median(timings))
    rounded = {"w1": 4.25905, "w3": -13.60283, "q2": 13.74086}
    ok = (
        abs(perf.eta - 0.68) <= 1e-12
        and abs(perf.w1 - work1) <= 1e-5
        and abs(perf.w3 - work3) <= 1e-5
        and abs(perf.q2 - heat2) <= 1e-5
        and all(abs(getattr(perf, k) - v) <= 1e-5 * abs(v) for k, v in rounded.items())
        and runtime < 1e-3
    )
    detail = (f"eta={perf.eta:.15f} W1={perf.w1:.7f} W3={perf.w3:.7f} Q2={perf.q2:.7f} "
              f"(rounded Q2 off by {perf.q2 - rounded['q2']:.1e}) t={runtime * 1e6:.0f}us")
    return ok, detail


def criterion_2():
    start = time.perf_counter()
    sudden = solve_na(make_quintic_ramp(W1, W2, 1e-4))
    slow = solve_na(make_quintic_ramp(W1, W2, 100.0))
    runtime = time.perf_counter() - start
    target = (W1**2 + W2**2) / (2 * W1 * W2)
    wr = max(abs(sudden.wronskian + 1), abs(slow.wronskian + 1))
    ok = abs(sudden.qstar - 1.7225) <= 1e-3 and abs(sudden.qstar - target) <= 1e-3 \
        and abs(slow.qstar - 1) <= 1e-3 and wr < 1e-9 and runtime < 1.0
    return ok, f"Q*(1e-4)={sudden.qstar:.9f} Q*(100)={slow.qstar:.9f} |W+1|<={wr:.1e} t={runtime:.3f}s"


def criterion_3():
    worst_q = worst_c = 0.0
    for tau in log_grid(20):
        comp = make_quintic_ramp(W1, W2, tau)
        for ramp, beta in ((comp, B1), (reverse_ramp(comp), B2)):
            e0 = initial_mean_energy(ramp.omega_start, beta)
            ends = [eval_ramp(ramp, 0.0), eval_ramp(ramp, tau)]
            for m in StaMethod:
                for s in ends:
                    worst_q = max(worst_q, abs(qstar(m, s) - 1))
                    worst_c = max(worst_c, abs(cost_density(m, s, ramp.omega_start, e0)))
            # AD is identically 1; NA starts in the adiabatic state
            _, q_na = qstar_na_profile(ramp, 256)
            worst_q = max(worst_q, abs(q_na[0] - 1))
    ok = worst_q <= 1e-9 and worst_c <= 1e-9
    return ok, f"max|Q*-1|={worst_q:.1e} max|cost|={worst_c:.1e} at endpoints, 20 taus x 2 strokes"


def criterion_4():
    n_points = 0
    pointwise_ok = True
    for tau in log_grid(20):
        for ramp in (make_quintic_ramp(W1, W2, tau), make_quintic_ramp(W2, W1, tau)):
            s = eval_ramp(ramp, np.linspace(0.0, tau, 2001))
            valid = s.domega**2 < 4 * s.omega**4
            part = type(s)(*(np.asarray(getattr(s, f))[valid] for f in ("t", "s", "omega", "domega", "ddomega")))
            q_cd, q_ie = qstar_cd(part), qstar_ie(part)
            pointwise_ok &= bool(np.all(q_cd >= q_ie - SLACK) and np.all(q_ie >= 1 - SLACK))
            n_points += int(valid.sum())
    table = sweep_records()
    rows_ok = True
    n_rows = 0
    for tau in sorted({k[0] for k in table}):
        eta = {m.value: table[(tau, m.value)]["eta"] for m in STA}
        ie = eta["IE"]
        for other in ("CD", "LCD"):
            if eta[other] is not None:
                n_rows += 1
                rows_ok &= ie is not None and ie >= eta[other] - SLACK
    ok = pointwise_ok and rows_ok and n_rows > 0
    return ok, f"Q*_CD>=Q*_IE>=1 on {n_points} points; eta_IE >= eta_CD, eta_LCD on {n_rows} row pairs"


def criterion_5():
    table = sweep_records()
    taus = sorted({k[0] for k in table})
    equal = sta_vs_na = True
    n_cmp = 0
    for tau in taus:
        powers = {table[(tau, m.value)]["power"] for m in STA if table[(tau, m.value)]["method_valid"] == "true"}
        equal &= len(powers) <= 1
        na = table[(tau, "NA")]
        if na["engine_valid"] == "true":
            for m in STA:
                row = table[(tau, m.value)]
                if row["engine_valid"] == "true" and row["method_valid"] == "true":
                    n_cmp += 1
                    sta_vs_na &= row["power"] >= na["power"] - SLACK * abs(na["power"])
    # fixed works: the adiabatic cycle at several tau
    base = run_cycle(config(1.0)).power
    worst = max(abs(run_cycle(config(tau)).power * tau / base - 1) for tau in (0.6, 2.0, 7.3, 50.0, 200.0))
    ok = equal and sta_vs_na and n_cmp > 0 and worst <= 1e-12
    return ok, f"P_CD=P_LCD=P_IE on {len(taus)} taus; P_STA>=P_NA on {n_cmp} rows; max|P*tau/P(1)-1|={worst:.1e}"


def criterion_6():
    ratios = {}
    for m in STA:
        d100 = abs(run_cycle(config(100.0, m)).eta - 0.68)
        d200 = abs(run_cycle(config(200.0, m)).eta - 0.68)
        ratios[m.value] = d100 / d200
    scaling_ok = all(abs(r - 4) <= 0.2 for r in ratios.values())
    quad_err = 0.0
    for m in StaMethod:
        for tau in (3.0, 10.0):
            ramp = make_quintic_ramp(W1, W2, tau)
            e0 = initial_mean_energy(W1, B1)
            f = lambda t, m=m, ramp=ramp: cost_density(m, eval_ramp(ramp, t), W1, e0)  # noqa: E731
            ref = trapezoid(f, 0.0, tau, 1_000_000)
            quad_err = max(quad_err, abs(quadrature(f, 0.0, tau) - ref) / abs(ref))
    rich = 0.0
    for tau in (0.6, 3.0, 20.0, 50.0, 100.0):
        ramp = make_quintic_ramp(W1, W2, tau)
        rich = max(rich, abs(propagate_oscillator(ramp, 4096).qstar - propagate_oscillator(ramp, 8192).qstar))
    ok = scaling_ok and quad_err <= 1e-8 and rich <= 1e-7
    txt = " ".join(f"{k}={v:.4f}" for k, v in ratios.items())
    return ok, f"dev(100)/dev(200): {txt}; quad rel err {quad_err:.1e}; Richardson |dQ*|<={rich:.1e}"


def criterion_7():
    grid_pts = 100_001
    taus = log_grid(40) + [2.4274132387523957 + d for d in (-1e-3, 1e-3)] \
        + [2.6199867517461772 + d for d in (-1e-3, 1e-3)]
    cd_ok = lcd_ok = True
    for tau in taus:
        ramp = make_quintic_ramp(W1, W2, tau)
        s = eval_ramp(ramp, np.linspace(0.0, tau, grid_pts))
        cd_bad = np.flatnonzero(s.domega**2 >= 4 * s.omega**4)
        try:
            time_avg_cost("CD", ramp, B1)
            raised_at = None
        except TrapInversionError as exc:
            raised_at = exc.t
        if cd_bad.size:
            cd_ok &= raised_at is not None and abs(raised_at - s.t[cd_bad[0]]) <= 2 * tau / (grid_pts - 1)
        else:
            cd_ok &= raised_at is None
        cd_ok &= run_cycle(config(tau, "CD")).method_valid == (cd_bad.size == 0)
        lcd_bad = bool(np.any(lcd_freq_sq(s) <= 0))
        lcd_ok &= run_cycle(config(tau, "LCD")).method_valid == (not lcd_bad)
    threshold = 1 / (2 * W2)
    ie_ok = (not run_cycle(config(threshold, "IE")).method_valid
             and not run_cycle(config(0.4, "IE")).method_valid
             and run_cycle(config(threshold * (1 + 1e-9), "IE")).method_valid)
    ok = cd_ok and lcd_ok and ie_ok
    return ok, f"CD {cd_ok}, LCD {lcd_ok} on {len(taus)} taus vs 1e5-point scans; IE rejected at tau<=0.5: {ie_ok}"


def criterion_8():
    worst_b = worst_res = 0.0
    for degree, tau in ((5, 3.0), (5, 10.0), (9, 4.0)):
        ramp = design_ie_frequency(W1, W2, tau, b_degree=degree)
        trace = solve_ermakov(ramp, 1.0, 0.0, W1)
        worst_b = max(worst_b, abs(trace.b[-1] - np.sqrt(W1 / W2)))
        worst_res = max(worst_res, trace.residual())
    ok = worst_b <= 1e-6 and worst_res < 1e-8 * W1**2
    return ok, f"|b(tau)-sqrt(0.32)|<={worst_b:.1e}, residual {worst_res:.1e} < {1e-8 * W1**2:.1e}"


def criterion_9():
    code1, text1, t1 = reference_sweep(1)
    code4, text4, t4 = reference_sweep(4)
    rows = text1.count("\n") - 1
    ok = code1 == code4 == 0 and text1 == text4 and rows == 200 and max(t1, t4) < 10.0
    return ok, f"identical={text1 == text4} rows={rows} t(1 worker)={t1:.2f}s t(4 workers)={t4:.2f}s"


CRITERIA = {
    1: ("adiabatic anchor", criterion_1),
    2: ("nonadiabatic limits", criterion_2),
    3: ("boundary normalization", criterion_3),
    4: ("ordering", criterion_4),
    5: ("power", criterion_5),
    6: ("convergence", criterion_6),
    7: ("validity boundaries", criterion_7),
    8: ("Ermakov self-consistency", criterion_8),
    9: ("determinism", criterion_9),
}


def report_line(number):
    name, ok, detail = RESULTS[number]
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number} ({name}): {detail}"


def evaluate(number):
    name, fn = CRITERIA[number]
    try:
        ok, detail = fn()
    except Exception as exc:  # reported as a failure line, then re-raised by the test
        RESULTS[number] = (name, False, f"{type(exc).__name__}: {exc}")
        raise
    RESULTS[number] = (name, bool(ok), detail)
    return bool(ok), detail


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, detail = evaluate(number)
    print(report_line(number))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        try:
            evaluate(n)
        except Exception:
            pass
        print(report_line(n), flush=True)
        failed += not RESULTS[n][1]
    raise SystemExit(1 if failed else 0)
