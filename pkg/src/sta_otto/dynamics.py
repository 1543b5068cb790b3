"""Numerical kernels: Simpson quadrature, fixed-step RK4 for the parametric
oscillator and the Ermakov equation, and the inverse-engineered frequency design.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    ConvergenceError,
    ParameterDomainError,
    QuadratureError,
    TrapCollapseError,
    TrapInversionError,
)
from .protocol import RampKind, RampSpec, eval_ramp

RICHARDSON_TOL = 1e-7


class OdeScheme(str, enum.Enum):
    RK4 = "RK4"


@dataclass(frozen=True)
class QuadratureConfig:
    n_panels: int = 64
    rel_tol: float = 1e-10
    max_refinements: int = 16

    def __post_init__(self):
        if self.n_panels < 2 or self.n_panels % 2:
            raise ParameterDomainError(f"n_panels must be even and >= 2, got {self.n_panels}")
        if not self.rel_tol > 0:
            raise ParameterDomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_refinements < 0:
            raise ParameterDomainError("max_refinements must be non-negative")


@dataclass(frozen=True)
class OdeConfig:
    n_steps: int = 4096
    scheme: OdeScheme = OdeScheme.RK4
    richardson_check: bool = True

    def __post_init__(self):
        if self.n_steps < 16:
            raise ParameterDomainError(f"n_steps must be >= 16, got {self.n_steps}")


# -- quadrature ---------------------------------------------------------------

def quadrature(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
               cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """Composite Simpson rule on [a, b], doubling the panel count until two
    successive estimates agree to ``cfg.rel_tol``.

    ``f`` is called with arrays of abscissae. Function values from coarser
    levels are reused, so each refinement only evaluates the new midpoints.
    """
    n = cfg.n_panels
    x = np.linspace(a, b, n + 1)
    fx = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise ParameterDomainError("integrand is not finite on the initial grid")
    ends = fx[0] + fx[-1]
    odd = fx[1:-1:2].sum()
    even = fx[2:-1:2].sum()
    h = (b - a) / n
    prev = cur = h / 3 * (ends + 4 * odd + 2 * even)
    for _ in range(cfg.max_refinements):
        n *= 2
        h = (b - a) / n
        mids = a + h * np.arange(1, n, 2)
        fm = np.asarray(f(mids), dtype=float)
        if not np.all(np.isfinite(fm)):
            raise ParameterDomainError("integrand is not finite on the refined grid")
        even += odd
        odd = fm.sum()
        cur = h / 3 * (ends + 4 * odd + 2 * even)
        if abs(cur - prev) <= cfg.rel_tol * abs(cur):
            return float(cur)
        last_two = (float(prev), float(cur))
        prev = cur
    if cfg.max_refinements == 0:
        last_two = (float(cur), float(cur))
    raise QuadratureError(
        f"Simpson rule did not reach rel_tol={cfg.rel_tol} with {n} panels", last_two
    )


# -- parametric oscillator ----------------------------------------------------

def _omega_sq_stages(omega_sq: Callable[[np.ndarray], np.ndarray], tau: float, n: int) -> np.ndarray:
    """omega^2 on the 2n+1 points t_k and t_k + h/2 needed by RK4."""
    return np.asarray(omega_sq(np.linspace(0.0, tau, 2 * n + 1)), dtype=float)


def _rk4_step_matrices(w: np.ndarray, h: float) -> np.ndarray:
    """One-step RK4 propagators for u' = [[0, 1], [-omega^2, 0]] u, shape (n, 2, 2)."""
    n = (len(w) - 1) // 2
    eye = np.broadcast_to(np.eye(2), (n, 2, 2))

    def generator(wk):
        a = np.zeros((n, 2, 2))
        a[:, 0, 1] = 1.0
        a[:, 1, 0] = -wk
        return a

    a0, am, a1 = generator(w[0:-1:2]), generator(w[1::2]), generator(w[2::2])
    k1 = a0
    k2 = am @ (eye + 0.5 * h * k1)
    k3 = am @ (eye + 0.5 * h * k2)
    k4 = a1 @ (eye + h * k3)
    return eye + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _chain(mats: np.ndarray) -> np.ndarray:
    """Ordered product M[n-1] ... M[1] M[0] by pairwise reduction."""
    while len(mats) > 1:
        if len(mats) % 2:
            mats = np.concatenate([mats, np.eye(2)[None]])
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


@dataclass(frozen=True)
class OscillatorSolution:
    """Classical solutions X (X=0, X'=1) and Y (Y=1, Y'=0) at the end of a stroke."""

    x: float
    xdot: float
    y: float
    ydot: float
    omega_i: float
    omega_f: float

    @property
    def qstar(self) -> float:
        wi, wf = self.omega_i, self.omega_f
        num = wi**2 * (wf**2 * self.x**2 + self.xdot**2) + wf**2 * self.y**2 + self.ydot**2
        return num / (2 * wi * wf)

    @property
    def wronskian(self) -> float:
        return self.x * self.ydot - self.y * self.xdot


def propagate_oscillator(ramp: RampSpec, n_steps: int) -> OscillatorSolution:
    w = _omega_sq_stages(lambda t: eval_ramp(ramp, t).omega ** 2, ramp.tau, n_steps)
    phi = _chain(_rk4_step_matrices(w, ramp.tau / n_steps))
    # columns of phi map (f, f') at t=0; X starts at (0, 1), Y at (1, 0)
    return OscillatorSolution(
        x=float(phi[0, 1]), xdot=float(phi[1, 1]),
        y=float(phi[0, 0]), ydot=float(phi[1, 0]),
        omega_i=ramp.omega_start, omega_f=ramp.omega_end,
    )


def solve_na(ramp: RampSpec, cfg: OdeConfig = OdeConfig()) -> OscillatorSolution:
    """Classical solutions for the unassisted stroke.

    With ``richardson_check`` the stroke is integrated at ``cfg.n_steps`` and
    at twice that; a change of Q* above 1e-7 raises :class:`ConvergenceError`,
    otherwise the finer solution is returned.
    """
    sol = propagate_oscillator(ramp, cfg.n_steps)
    if cfg.richardson_check:
        fine = propagate_oscillator(ramp, 2 * cfg.n_steps)
        if abs(fine.qstar - sol.qstar) > RICHARDSON_TOL:
            raise ConvergenceError(
                f"Q*_NA changed by {abs(fine.qstar - sol.qstar):.3g} when doubling {cfg.n_steps} steps",
                (sol.qstar, fine.qstar),
            )
        sol = fine
    return sol


def qstar_na(ramp: RampSpec, cfg: OdeConfig = OdeConfig()) -> float:
    """Adiabaticity parameter of the unassisted (nonadiabatic) stroke, see :func:`solve_na`."""
    return solve_na(ramp, cfg).qstar


def qstar_na_profile(ramp: RampSpec, n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Instantaneous Q*(t) of the unassisted stroke on an (n_steps+1)-point grid.

    At each t the adiabatic reference is the oscillator frozen at omega(t),
    so the last value is Q*_NA of an ``n_steps`` integration.
    """
    grid = np.linspace(0.0, ramp.tau, n_steps + 1)
    w = _omega_sq_stages(lambda t: eval_ramp(ramp, t).omega ** 2, ramp.tau, n_steps)
    mats = _rk4_step_matrices(w, ramp.tau / n_steps)
    phis = np.empty((n_steps + 1, 2, 2))
    phis[0] = np.eye(2)
    for k in range(n_steps):
        phis[k + 1] = mats[k] @ phis[k]
    x, xd, y, yd = phis[:, 0, 1], phis[:, 1, 1], phis[:, 0, 0], phis[:, 1, 0]
    wi = ramp.omega_start
    wt = np.sqrt(w[::2])
    q = (wi**2 * (wt**2 * x**2 + xd**2) + wt**2 * y**2 + yd**2) / (2 * wi * wt)
    return grid, q


# -- Ermakov equation ---------------------------------------------------------

@dataclass(frozen=True)
class ErmakovTrace:
    grid: np.ndarray
    b: np.ndarray
    bdot: np.ndarray
    bddot: np.ndarray
    omega0: float
    omega_sq: np.ndarray

    def residual(self) -> float:
        """Largest |b'' + omega^2 b - omega0^2 / b^3| on interior grid points.

        b'' is taken from a fourth-order central difference of the integrated
        b', so the check does not reuse the right-hand side that produced b.
        """
        h = self.grid[1] - self.grid[0]
        v = self.bdot
        bdd = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
        b = self.b[2:-2]
        r = bdd + self.omega_sq[2:-2] * b - self.omega0**2 / b**3
        return float(np.max(np.abs(r)))


def _ermakov_rk4(w: np.ndarray, h: float, b0: float, v0: float, omega0: float):
    n = (len(w) - 1) // 2
    w0sq = omega0 * omega0
    b = np.empty(n + 1)
    v = np.empty(n + 1)
    b[0], v[0] = b0, v0
    wl = w.tolist()
    bk, vk = b0, v0
    for k in range(n):
        wa, wm, wb = wl[2 * k], wl[2 * k + 1], wl[2 * k + 2]
        k1b, k1v = vk, w0sq / bk**3 - wa * bk
        bb = bk + 0.5 * h * k1b
        k2b, k2v = vk + 0.5 * h * k1v, w0sq / bb**3 - wm * bb
        bb = bk + 0.5 * h * k2b
        k3b, k3v = vk + 0.5 * h * k2v, w0sq / bb**3 - wm * bb
        bb = bk + h * k3b
        k4b, k4v = vk + h * k3v, w0sq / bb**3 - wb * bb
        bk = bk + h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b)
        vk = vk + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        if not bk > 0:
            raise TrapCollapseError(f"scaling function reached {bk:.3g} at t={(k + 1) * h:.6g}",
                                    t=(k + 1) * h)
        b[k + 1], v[k + 1] = bk, vk
    return b, v


def solve_ermakov(omega_sq: RampSpec | Callable[[np.ndarray], np.ndarray], b0: float,
                  bdot0: float, omega0: float, cfg: OdeConfig = OdeConfig(),
                  tau: float | None = None) -> ErmakovTrace:
    """Integrate b'' + omega(t)^2 b = omega0^2 / b^3 over the stroke.

    ``omega_sq`` is either a ramp or a vectorized callable returning omega^2(t);
    a callable needs ``tau``.
    """
    if not b0 > 0:
        raise ParameterDomainError(f"b0 must be positive, got {b0!r}")
    if isinstance(omega_sq, RampSpec):
        ramp = omega_sq
        tau = ramp.tau
        omega_sq = lambda t: eval_ramp(ramp, t).omega ** 2  # noqa: E731
    elif tau is None or tau <= 0:
        raise ParameterDomainError("tau must be given and positive for a callable omega^2")
    n = cfg.n_steps
    w = _omega_sq_stages(omega_sq, tau, n)
    b, v = _ermakov_rk4(w, tau / n, b0, bdot0, omega0)
    if cfg.richardson_check:
        b2, v2 = _ermakov_rk4(_omega_sq_stages(omega_sq, tau, 2 * n), tau / (2 * n), b0, bdot0, omega0)
        change = max(abs(b2[-1] - b[-1]), abs(v2[-1] - v[-1]))
        if change > RICHARDSON_TOL:
            raise ConvergenceError(
                f"Ermakov end state changed by {change:.3g} when doubling {n} steps", (b[-1], b2[-1])
            )
    wg = w[::2]
    return ErmakovTrace(
        grid=np.linspace(0.0, tau, n + 1), b=b, bdot=v,
        bddot=omega0**2 / b**3 - wg * b, omega0=float(omega0), omega_sq=wg,
    )


def design_ie_frequency(omega_start: float, omega_end: float, tau: float,
                        b_degree: int = 5, n_check: int = 4097) -> RampSpec:
    """Frequency ramp whose Ermakov scaling function is a prescribed polynomial.

    b(t) runs from 1 to sqrt(omega_start / omega_end). With ``b_degree=5`` its
    first and second derivatives vanish at both ends, which is what the
    invariant needs, but b''' does not, so omega'(0) and omega'(tau) are
    nonzero. ``b_degree=9`` also pins b''' and b'''' and gives a frequency
    that starts and ends at rest, at the price of a larger minimal tau.

    Raises :class:`TrapInversionError` when tau <= 1 / (2 omega_end)
    or when omega^2 = omega0^2 / b^4 - b''/b turns non-positive.
    """
    if not tau > 1.0 / (2.0 * omega_end):
        raise TrapInversionError(
            f"tau={tau!r} must exceed 1/(2 omega_end) = {1.0 / (2.0 * omega_end)!r}", t=None
        )
    ramp = RampSpec(float(omega_start), float(omega_end), float(tau), RampKind.BSCALED, b_degree=b_degree)
    eval_ramp(ramp, np.linspace(0.0, tau, n_check))
    return ramp
