"""Process simulation, dependence measures and condition checks."""

from .conditions import ConditionReport, ConditionRow, check_conditions, decreasing_to_zero
from .dependence import (
    DependenceProfile,
    ThetaEstimate,
    coupled_pair,
    coupled_theta,
    covariance_bound,
    dependence_profile,
    theta_tail,
)
from .innovations import InnovationSpec, gen_innovations
from .models import (
    LinearModel,
    RecursionModel,
    Transform,
    process_from_dict,
    process_to_dict,
    spectral_density,
    white_noise,
)
from .simulate import (
    ApproxResult,
    SimulatedPath,
    fourier_approx_gap,
    gen_linear,
    gen_recursion,
    m_approx,
    simulate,
)

__all__ = [
    "ApproxResult",
    "ConditionReport",
    "ConditionRow",
    "DependenceProfile",
    "InnovationSpec",
    "LinearModel",
    "RecursionModel",
    "SimulatedPath",
    "ThetaEstimate",
    "Transform",
    "check_conditions",
    "coupled_pair",
    "coupled_theta",
    "covariance_bound",
    "decreasing_to_zero",
    "dependence_profile",
    "fourier_approx_gap",
    "gen_innovations",
    "gen_linear",
    "gen_recursion",
    "m_approx",
    "process_from_dict",
    "process_to_dict",
    "simulate",
    "spectral_density",
    "theta_tail",
    "white_noise",
]
