"""Adiabaticity parameters and driving costs of the three shortcut methods.

Every quantity here is a closed-form function of (omega, omega', omega'') at
a single instant, so the functions accept a :class:`RampSample` whose fields
are either floats or arrays and broadcast accordingly.

Cost densities are the expectation value of the auxiliary driving term for
an oscillator that starts the stroke in a thermal state with mean energy
``e0`` at frequency ``omega_init``:

    CD   (w/w_i) e0 (w/Omega - 1),       Omega = w sqrt(1 - w'^2 / 4w^4)
    LCD  (w/w_i) e0 (-w'^2/4w^4 + w''/4w^3)
    IE   (w/w_i) e0 w'^2 / 8w^4
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .dynamics import QuadratureConfig, quadrature
from .errors import ParameterDomainError, TrapInversionError
from .protocol import RampSample, RampSpec, eval_ramp

SCAN_POINTS = 10_001


class StaMethod(str, enum.Enum):
    CD = "CD"
    LCD = "LCD"
    IE = "IE"


@dataclass(frozen=True)
class CostProfile:
    method: StaMethod
    beta_init: float
    e0: float
    t: np.ndarray
    qstar: np.ndarray
    cost_density: np.ndarray
    time_avg_cost: float


def coth(x):
    return 1.0 / np.tanh(x)


def initial_mean_energy(omega: float, beta: float) -> float:
    """Thermal mean energy (omega/2) coth(beta omega / 2) of the oscillator."""
    if not omega > 0 or not beta > 0:
        raise ParameterDomainError(f"omega and beta must be positive, got {omega!r}, {beta!r}")
    return float(0.5 * omega * coth(0.5 * beta * omega))


def _cd_ratio(sample: RampSample):
    return sample.domega**2 / (4 * sample.omega**4)


def effective_freq_cd(sample: RampSample):
    ratio = _cd_ratio(sample)
    bad = np.atleast_1d(ratio >= 1)
    if bad.any():
        t_bad = float(np.atleast_1d(sample.t)[bad][0])
        raise TrapInversionError(f"CD trap inversion: omega'^2 >= 4 omega^4 at t={t_bad:.12g}", t=t_bad)
    return sample.omega * np.sqrt(1 - ratio)


def qstar_cd(sample: RampSample):
    return sample.omega / effective_freq_cd(sample)


def qstar_lcd(sample: RampSample):
    w = sample.omega
    return 1 - sample.domega**2 / (4 * w**4) + sample.ddomega / (4 * w**3)


def qstar_ie(sample: RampSample):
    return 1 + sample.domega**2 / (8 * sample.omega**4)


def lcd_freq_sq(sample: RampSample):
    """Squared frequency of the local potential; non-positive values mean trap inversion."""
    w = sample.omega
    return w**2 - 3 * sample.domega**2 / (4 * w**2) + sample.ddomega / (2 * w)


def qstar(method: StaMethod, sample: RampSample):
    method = StaMethod(method)
    if method is StaMethod.CD:
        return qstar_cd(sample)
    if method is StaMethod.LCD:
        return qstar_lcd(sample)
    return qstar_ie(sample)


def cost_density(method: StaMethod, sample: RampSample, omega_init: float, e0: float):
    """Instantaneous mean energy of the auxiliary driving term.

    The LCD value may be negative mid-stroke and is returned as is.
    """
    if not e0 > 0:
        raise ParameterDomainError(f"e0 must be positive, got {e0!r}")
    return sample.omega / omega_init * e0 * (qstar(method, sample) - 1)


def _refined_extremum(fn, ramp: RampSpec, grid: np.ndarray, values: np.ndarray, sign: float):
    """Polish the grid extremum of ``sign * fn`` with a bounded scalar search."""
    k = int(np.argmax(sign * values))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    best_t, best = grid[k], values[k]
    if hi > lo:
        res = minimize_scalar(lambda t: -sign * fn(eval_ramp(ramp, t)), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-12 * ramp.tau})
        if sign * fn(eval_ramp(ramp, res.x)) > sign * best:
            best_t, best = float(res.x), float(fn(eval_ramp(ramp, res.x)))
    return float(best_t), float(best)


def cd_first_invalid_time(ramp: RampSpec, n_scan: int = SCAN_POINTS) -> float | None:
    """Earliest t where omega'^2 >= 4 omega^4, or None if CD applies on the whole stroke.

    The scan locates the first bad grid cell; the crossing inside it is then
    found by root finding on ``omega'^2 / (4 omega^4) - 1``.
    """
    grid = np.linspace(0.0, ramp.tau, n_scan)
    ratio = _cd_ratio(eval_ramp(ramp, grid))
    hits = np.flatnonzero(ratio >= 1)
    if hits.size:
        k = int(hits[0])
        if k == 0:
            return 0.0
        lo, hi = grid[k - 1], grid[k]
    else:
        t_max, r_max = _refined_extremum(_cd_ratio, ramp, grid, ratio, +1.0)
        if r_max < 1:
            return None
        lo, hi = grid[max(int(np.searchsorted(grid, t_max)) - 1, 0)], t_max
    excess = lambda t: _cd_ratio(eval_ramp(ramp, t)) - 1.0  # noqa: E731
    root = brentq(excess, lo, hi, xtol=1e-14 * ramp.tau, rtol=4 * np.finfo(float).eps)
    # step onto the side where the condition actually holds
    for _ in range(1024):
        if excess(root) >= 0:
            return float(root)
        root = np.nextafter(root, hi)
    return float(hi)


def lcd_min_freq_sq(ramp: RampSpec, n_scan: int = SCAN_POINTS) -> tuple[float, float]:
    """(t, value) of the smallest LCD squared frequency over the stroke."""
    grid = np.linspace(0.0, ramp.tau, n_scan)
    values = lcd_freq_sq(eval_ramp(ramp, grid))
    return _refined_extremum(lcd_freq_sq, ramp, grid, values, -1.0)


def time_avg_cost(method: StaMethod, ramp: RampSpec, beta_init: float,
                  quad: QuadratureConfig = QuadratureConfig()) -> float:
    """(1/tau) times the integral of the cost density over the stroke.

    The thermal state at the start of the stroke has frequency
    ``ramp.omega_start`` and inverse temperature ``beta_init``.
    """
    method = StaMethod(method)
    if method is StaMethod.CD:
        t_bad = cd_first_invalid_time(ramp)
        if t_bad is not None:
            raise TrapInversionError(f"CD trap inversion at t={t_bad:.12g}", t=t_bad)
    w_i = ramp.omega_start
    e0 = initial_mean_energy(w_i, beta_init)
    total = quadrature(lambda t: cost_density(method, eval_ramp(ramp, t), w_i, e0), 0.0, ramp.tau, quad)
    return total / ramp.tau


def cost_profile(method: StaMethod, ramp: RampSpec, beta_init: float, n_samples: int = 201,
                 quad: QuadratureConfig = QuadratureConfig()) -> CostProfile:
    method = StaMethod(method)
    w_i = ramp.omega_start
    e0 = initial_mean_energy(w_i, beta_init)
    sample = eval_ramp(ramp, np.linspace(0.0, ramp.tau, n_samples))
    return CostProfile(
        method=method, beta_init=beta_init, e0=e0, t=sample.t,
        qstar=np.asarray(qstar(method, sample)),
        cost_density=np.asarray(cost_density(method, sample, w_i, e0)),
        time_avg_cost=time_avg_cost(method, ramp, beta_init, quad),
    )
