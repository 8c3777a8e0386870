"""Linearized cavity optomechanics of a resonator doped with two-level emitters.

Two independent routes give the final phonon occupation: the Lyapunov
equation for the steady-state covariance (:mod:`dopedom.stability`) and
integration of the analytic position spectrum (:mod:`dopedom.spectral`).
"""

__version__ = "0.1.0"

from .errors import (ConfigError, DopedOMError, QuadratureError, RegimeError, SolverError,
                     UnstableError, ValidationError)
from .model import (Direct, LinearSystem, ModelParams, Physical, SteadyState, linearize,
                    solve_steady_state)
from .config import load_params, parse_params, serialize_params
from .stability import CovarianceResult, StabilityVerdict, check_stability, solve_lyapunov
from .spectral import (FrequencyGrid, SpectrumResult, SusceptibilityKernel, effective_damping,
                       kernel, spectrum)
from .analytics import (PolaritonModel, RegimeReport, StandardOMParams, force_ratio,
                        polariton_damping, regime_report, standard_om_nf)

__all__ = [
    "ConfigError", "DopedOMError", "QuadratureError", "RegimeError", "SolverError",
    "UnstableError", "ValidationError",
    "Direct", "Physical", "ModelParams", "SteadyState", "LinearSystem",
    "solve_steady_state", "linearize",
    "parse_params", "load_params", "serialize_params",
    "StabilityVerdict", "CovarianceResult", "check_stability", "solve_lyapunov",
    "SusceptibilityKernel", "SpectrumResult", "FrequencyGrid", "kernel", "spectrum",
    "effective_damping",
    "StandardOMParams", "RegimeReport", "PolaritonModel", "standard_om_nf", "regime_report",
    "polariton_damping", "force_ratio",
]
