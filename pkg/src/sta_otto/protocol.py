"""Frequency protocols for the compression and expansion strokes.

A ramp carries its own analytic first and second time derivatives, so the
driving terms that need the curvature of the protocol never go through
numerical differentiation.

Two shapes exist:

* ``QUINTIC``: omega(s) = w_i + (w_f - w_i)(10 s^3 - 15 s^4 + 6 s^5), s = t/tau.
* ``BSCALED``: the frequency implied by a prescribed Ermakov scaling function
  b(t) through omega^2 = w0^2 / b^4 - b''/b, with b a smooth polynomial step
  of degree 5 or 9. Build these with
  :func:`sta_otto.dynamics.design_ie_frequency`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Protocol

import numpy as np
from numpy.polynomial import Polynomial

from .errors import ParameterDomainError, TrapInversionError

# 10 s^3 - 15 s^4 + 6 s^5: value 0 -> 1, first and second derivatives vanish at both ends
QUINTIC_STEP = Polynomial([0, 0, 0, 10, -15, 6])
# 126 s^5 - ... + 70 s^9: derivatives up to fourth order vanish at both ends
NONIC_STEP = Polynomial([0, 0, 0, 0, 0, 126, -420, 540, -315, 70])
STEP_POLYNOMIALS = {5: QUINTIC_STEP, 9: NONIC_STEP}


class RampKind(str, enum.Enum):
    QUINTIC = "QuinticPolynomial"
    BSCALED = "BScaled"


@dataclass(frozen=True)
class RampSample:
    """One evaluation of a ramp. Fields are floats or equally shaped arrays."""

    t: float | np.ndarray
    s: float | np.ndarray
    omega: float | np.ndarray
    domega: float | np.ndarray
    ddomega: float | np.ndarray


@dataclass(frozen=True)
class RampSpec:
    """Immutable frequency protocol running from ``omega_start`` to ``omega_end``.

    ``reversed`` marks a time-reflected copy of a ramp built forward from
    ``omega_end`` to ``omega_start``; use :func:`reverse_ramp` rather than
    setting it by hand.
    """

    omega_start: float
    omega_end: float
    tau: float
    kind: RampKind = RampKind.QUINTIC
    reversed: bool = False
    b_degree: int = 5

    def __post_init__(self):
        if self.b_degree not in STEP_POLYNOMIALS:
            raise ParameterDomainError(f"b_degree must be one of {sorted(STEP_POLYNOMIALS)}")
        for name in ("omega_start", "omega_end", "tau"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ParameterDomainError(f"{name} must be positive, got {value!r}")

    @property
    def base_endpoints(self) -> tuple[float, float]:
        """Start and end frequency of the underlying forward construction."""
        if self.reversed:
            return self.omega_end, self.omega_start
        return self.omega_start, self.omega_end

    @property
    def gamma(self) -> float:
        """Final value of the scaling function, sqrt(w0 / w_f), for BScaled ramps."""
        w0, wf = self.base_endpoints
        return float(np.sqrt(w0 / wf))

    def evaluate(self, t) -> RampSample:
        return eval_ramp(self, t)


class Ramp(Protocol):
    omega_start: float
    omega_end: float
    tau: float

    def evaluate(self, t) -> RampSample: ...


def make_quintic_ramp(omega_start: float, omega_end: float, tau: float) -> RampSpec:
    return RampSpec(float(omega_start), float(omega_end), float(tau), RampKind.QUINTIC)


def scaling_function(ramp: RampSpec, t_base) -> tuple[np.ndarray, ...]:
    """b and its first four time derivatives for a BScaled ramp, on the forward clock."""
    gamma = ramp.gamma
    s = np.asarray(t_base, dtype=float) / ramp.tau
    poly = STEP_POLYNOMIALS[ramp.b_degree]
    out = [1.0 + (gamma - 1.0) * poly(s)]
    for k in range(1, 5):
        poly = poly.deriv()
        out.append((gamma - 1.0) * poly(s) / ramp.tau**k)
    return tuple(out)


def _quintic_forward(w_i, w_f, tau, t):
    s = t / tau
    delta = w_f - w_i
    omega = w_i + delta * QUINTIC_STEP(s)
    domega = delta * QUINTIC_STEP.deriv(1)(s) / tau
    ddomega = delta * QUINTIC_STEP.deriv(2)(s) / tau**2
    return omega, domega, ddomega


def _bscaled_forward(ramp: RampSpec, t):
    w0, _ = ramp.base_endpoints
    w0sq = w0 * w0
    b, b1, b2, b3, b4 = scaling_function(ramp, t)
    g = w0sq / b**4 - b2 / b
    if np.any(g <= 0):
        bad = np.atleast_1d(np.asarray(t, dtype=float))[np.atleast_1d(g <= 0)]
        raise TrapInversionError(
            f"designed squared frequency is non-positive at t={bad[0]:.6g}", t=float(bad[0])
        )
    dg = -4 * w0sq * b1 / b**5 - b3 / b + b2 * b1 / b**2
    ddg = (
        20 * w0sq * b1**2 / b**6
        - 4 * w0sq * b2 / b**5
        - b4 / b
        + 2 * b3 * b1 / b**2
        + b2**2 / b**2
        - 2 * b2 * b1**2 / b**3
    )
    omega = np.sqrt(g)
    domega = dg / (2 * omega)
    ddomega = (ddg - 2 * domega**2) / (2 * omega)
    return omega, domega, ddomega


def eval_ramp(ramp: RampSpec, t) -> RampSample:
    """Evaluate omega and its first two derivatives at ``t`` (scalar or array)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t_arr)) or np.any(t_arr < 0) or np.any(t_arr > ramp.tau):
        raise ParameterDomainError(f"t must lie in [0, {ramp.tau}], got {t!r}")
    t_base = ramp.tau - t_arr if ramp.reversed else t_arr
    if ramp.kind is RampKind.QUINTIC:
        w_i, w_f = ramp.base_endpoints
        omega, domega, ddomega = _quintic_forward(w_i, w_f, ramp.tau, t_base)
    else:
        omega, domega, ddomega = _bscaled_forward(ramp, t_base)
    if ramp.reversed:
        domega = -domega
    if t_arr.ndim == 0:
        return RampSample(float(t_arr), float(t_arr / ramp.tau), float(omega), float(domega), float(ddomega))
    return RampSample(t_arr, t_arr / ramp.tau, omega, domega, ddomega)


def reverse_ramp(ramp: RampSpec) -> RampSpec:
    """Time-reflected ramp: omega_rev(t) = omega(tau - t)."""
    return replace(
        ramp,
        omega_start=ramp.omega_end,
        omega_end=ramp.omega_start,
        reversed=not ramp.reversed,
    )


def check_boundary_conditions(ramp: Ramp, tol: float) -> list[str]:
    """List every violated endpoint condition; an empty list means the ramp complies.

    Derivatives at t = 0 and t = tau must stay below tol * max(w_i, w_f) / tau,
    and the endpoint frequencies must match the declared ones within ``tol``.
    """
    if tol <= 0:
        raise ParameterDomainError(f"tol must be positive, got {tol!r}")
    scale = tol * max(ramp.omega_start, ramp.omega_end) / ramp.tau
    report = []
    for label, t, declared in (("0", 0.0, ramp.omega_start), ("tau", ramp.tau, ramp.omega_end)):
        sample = ramp.evaluate(t)
        if abs(sample.omega - declared) > tol:
            report.append(f"omega({label}) = {sample.omega!r} != declared {declared!r}")
        if abs(sample.domega) > scale:
            report.append(f"domega({label}) = {sample.domega!r} is not zero")
        if abs(sample.ddomega) > scale:
            report.append(f"ddomega({label}) = {sample.ddomega!r} is not zero")
    return report
