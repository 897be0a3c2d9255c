"""Explicit semiclassical energy splitting of symmetric double wells."""

from .expr import parse_potential, polynomial
from .oracle import GridConfig, OracleReport, eigen_splitting, fit_epsilon, oracle_report
from .potential import PhysicalContext, PotentialProfile, analyze_profile, eval_with_derivatives
from .quadrature import QuadratureConfig, find_root, integrate
from .semiclassical import (
    SemiclassicalReport,
    TimeBudget,
    WkbTail,
    action_S,
    epsilon_constant,
    ground_splitting,
    period_T,
    separatrix_area,
    splitting_wkb_direct,
    time_budget,
    time_defect,
)

__all__ = [
    "GridConfig",
    "OracleReport",
    "PhysicalContext",
    "PotentialProfile",
    "QuadratureConfig",
    "SemiclassicalReport",
    "TimeBudget",
    "WkbTail",
    "action_S",
    "analyze_profile",
    "eigen_splitting",
    "epsilon_constant",
    "eval_with_derivatives",
    "find_root",
    "fit_epsilon",
    "ground_splitting",
    "integrate",
    "oracle_report",
    "parse_potential",
    "period_T",
    "polynomial",
    "separatrix_area",
    "splitting_wkb_direct",
    "time_budget",
    "time_defect",
]
