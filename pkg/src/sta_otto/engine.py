"""Quantum Otto cycle of a harmonic oscillator: works, heat, efficiency, power.

The cycle runs compression omega1 -> omega2 (duration tau, starting in
equilibrium with the cold bath), instantaneous thermalization with the hot
bath, expansion omega2 -> omega1 (duration tau) and instantaneous
thermalization with the cold bath. The cycle time is 2 tau.

Shortcut methods reach the adiabatic end state, so they are charged with
adiabatic works and heat plus the time-averaged driving cost of each stroke.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .dynamics import OdeConfig, QuadratureConfig, qstar_na
from .errors import ParameterDomainError
from .protocol import RampSpec, make_quintic_ramp, reverse_ramp
from .sta import StaMethod, cd_first_invalid_time, coth, lcd_min_freq_sq, time_avg_cost


class Method(str, enum.Enum):
    AD = "AD"
    NA = "NA"
    CD = "CD"
    LCD = "LCD"
    IE = "IE"

    @property
    def sta(self) -> StaMethod | None:
        return StaMethod(self.value) if self.value in StaMethod.__members__ else None


@dataclass(frozen=True)
class BathPair:
    beta_cold: float
    beta_hot: float

    def __post_init__(self):
        if not self.beta_cold > self.beta_hot > 0:
            raise ParameterDomainError(
                f"need beta_cold > beta_hot > 0, got {self.beta_cold!r}, {self.beta_hot!r}"
            )


@dataclass(frozen=True)
class CycleConfig:
    omega1: float
    omega2: float
    baths: BathPair
    tau: float
    method: Method = Method.AD
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    ode: OdeConfig = field(default_factory=OdeConfig)

    def __post_init__(self):
        if not self.omega2 > self.omega1 > 0:
            raise ParameterDomainError(f"need omega2 > omega1 > 0, got {self.omega1!r}, {self.omega2!r}")
        if not self.tau > 0:
            raise ParameterDomainError(f"tau must be positive, got {self.tau!r}")
        object.__setattr__(self, "method", Method(self.method))

    @property
    def cycle_time(self) -> float:
        return 2 * self.tau

    def compression_ramp(self) -> RampSpec:
        return make_quintic_ramp(self.omega1, self.omega2, self.tau)

    def expansion_ramp(self) -> RampSpec:
        return reverse_ramp(self.compression_ramp())


@dataclass(frozen=True)
class EnginePerformance:
    """Result of one cycle. ``None`` marks a quantity that is undefined for the
    configuration (non-engine regime or an inapplicable shortcut method)."""

    w1: float
    w3: float
    q2: float
    cost1: float | None
    cost3: float | None
    eta: float | None
    power: float | None
    qstar1: float
    qstar3: float
    engine_valid: bool
    method_valid: bool
    reason: str | None = None


def stroke_work_compression(omega1: float, omega2: float, beta1: float, qstar: float) -> float:
    return 0.5 * (omega2 * qstar - omega1) * float(coth(0.5 * beta1 * omega1))


def stroke_work_expansion(omega1: float, omega2: float, beta2: float, qstar: float) -> float:
    return 0.5 * (omega1 * qstar - omega2) * float(coth(0.5 * beta2 * omega2))


def isochore_heat(omega2: float, baths: BathPair, omega1: float, qstar1: float) -> float:
    """Heat absorbed from the hot bath after a compression with parameter ``qstar1``."""
    hot = coth(0.5 * baths.beta_hot * omega2)
    cold = coth(0.5 * baths.beta_cold * omega1)
    return float(0.5 * omega2 * (hot - qstar1 * cold))


def efficiency_sta(w1_ad: float, w3_ad: float, q2_ad: float, cost1: float, cost3: float) -> float | None:
    """Work output over heat plus driving cost; None outside the engine regime."""
    energy_in = q2_ad + cost1 + cost3
    if not (w1_ad + w3_ad < 0 and q2_ad > 0 and energy_in > 0):
        return None
    return -(w1_ad + w3_ad) / energy_in


def efficiency_na(w1: float, w3: float, q2: float) -> float | None:
    if not (w1 + w3 < 0 and q2 > 0):
        return None
    return -(w1 + w3) / q2


def power(w1: float, w3: float, tau: float) -> float:
    if not tau > 0:
        raise ParameterDomainError(f"tau must be positive, got {tau!r}")
    return -(w1 + w3) / (2 * tau)


def _sta_validity(method: StaMethod, config: CycleConfig) -> str | None:
    ramps = (config.compression_ramp(), config.expansion_ramp())
    if method is StaMethod.CD:
        for ramp in ramps:
            t_bad = cd_first_invalid_time(ramp)
            if t_bad is not None:
                return f"CD trap inversion at t={t_bad:.12g}"
    elif method is StaMethod.LCD:
        for ramp in ramps:
            t_min, value = lcd_min_freq_sq(ramp)
            if value <= 0:
                return f"LCD squared frequency {value:.6g} <= 0 at t={t_min:.12g}"
    elif not config.tau > 1 / (2 * config.omega2):
        return f"IE trap inversion: tau={config.tau!r} <= 1/(2 omega2)"
    return None


def run_cycle(config: CycleConfig) -> EnginePerformance:
    w1_, w2_ = config.omega1, config.omega2
    b1, b2 = config.baths.beta_cold, config.baths.beta_hot
    method = config.method

    if method is Method.NA:
        q1 = qstar_na(config.compression_ramp(), config.ode)
        q3 = qstar_na(config.expansion_ramp(), config.ode)
    else:
        q1 = q3 = 1.0

    w1 = stroke_work_compression(w1_, w2_, b1, q1)
    w3 = stroke_work_expansion(w1_, w2_, b2, q3)
    q2 = isochore_heat(w2_, config.baths, w1_, q1)
    engine_valid = w1 + w3 < 0 and q2 > 0

    if method.sta is None:
        return EnginePerformance(
            w1=w1, w3=w3, q2=q2, cost1=0.0, cost3=0.0,
            eta=efficiency_na(w1, w3, q2), power=power(w1, w3, config.tau),
            qstar1=q1, qstar3=q3, engine_valid=engine_valid, method_valid=True,
            reason=None if engine_valid else "not an engine",
        )

    reason = _sta_validity(method.sta, config)
    if reason is not None:
        return EnginePerformance(
            w1=w1, w3=w3, q2=q2, cost1=None, cost3=None, eta=None, power=None,
            qstar1=q1, qstar3=q3, engine_valid=engine_valid, method_valid=False, reason=reason,
        )
    cost1 = time_avg_cost(method.sta, config.compression_ramp(), b1, config.quad)
    cost3 = time_avg_cost(method.sta, config.expansion_ramp(), b2, config.quad)
    return EnginePerformance(
        w1=w1, w3=w3, q2=q2, cost1=cost1, cost3=cost3,
        eta=efficiency_sta(w1, w3, q2, cost1, cost3), power=power(w1, w3, config.tau),
        qstar1=q1, qstar3=q3, engine_valid=engine_valid, method_valid=True,
        reason=None if engine_valid else "not an engine",
    )
