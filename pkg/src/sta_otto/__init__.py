"""Finite-time quantum Otto engine driven by shortcuts to adiabaticity."""
from .dynamics import (
    ErmakovTrace,
    OdeConfig,
    QuadratureConfig,
    design_ie_frequency,
    quadrature,
    qstar_na,
    solve_ermakov,
    solve_na,
)
from .engine import (
    BathPair,
    CycleConfig,
    EnginePerformance,
    Method,
    efficiency_na,
    efficiency_sta,
    isochore_heat,
    power,
    run_cycle,
    stroke_work_compression,
    stroke_work_expansion,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    ParameterDomainError,
    QuadratureError,
    StaOttoError,
    TrapCollapseError,
    TrapInversionError,
)
from .protocol import (
    RampKind,
    RampSample,
    RampSpec,
    check_boundary_conditions,
    eval_ramp,
    make_quintic_ramp,
    reverse_ramp,
)
from .sta import (
    CostProfile,
    StaMethod,
    cost_density,
    cost_profile,
    effective_freq_cd,
    initial_mean_energy,
    lcd_freq_sq,
    qstar_cd,
    qstar_ie,
    qstar_lcd,
    time_avg_cost,
)

__version__ = "0.1.0"

__all__ = [
    "BathPair",
    "check_boundary_conditions",
    "ConfigError",
    "ConvergenceError",
    "cost_density",
    "cost_profile",
    "CostProfile",
    "CycleConfig",
    "design_ie_frequency",
    "effective_freq_cd",
    "efficiency_na",
    "efficiency_sta",
    "EnginePerformance",
    "ErmakovTrace",
    "eval_ramp",
    "initial_mean_energy",
    "isochore_heat",
    "lcd_freq_sq",
    "make_quintic_ramp",
    "Method",
    "OdeConfig",
    "ParameterDomainError",
    "power",
    "qstar_cd",
    "qstar_ie",
    "qstar_lcd",
    "qstar_na",
    "quadrature",
    "QuadratureConfig",
    "QuadratureError",
    "RampKind",
    "RampSample",
    "RampSpec",
    "reverse_ramp",
    "run_cycle",
    "solve_ermakov",
    "solve_na",
    "StaMethod",
    "StaOttoError",
    "stroke_work_compression",
    "stroke_work_expansion",
    "time_avg_cost",
    "TrapCollapseError",
    "TrapInversionError",
]
