"""Fog node placement maximising fog connectivity and edge coverage."""

from .network import (
    EdgeNode,
    FogNode,
    Point2D,
    Scenario,
    TopologyGraph,
    build_topology,
    connectivity_zeta,
    coverage_phi,
    covers,
    fog_link,
    load_scenario,
    save_scenario,
)
from .objective import EvaluationContext, FitnessBreakdown, bounds, decode, encode, evaluate_population, fitness
from .record import RunRecord

__version__ = "0.1.0"

__all__ = [
    "EdgeNode",
    "FogNode",
    "Point2D",
    "Scenario",
    "TopologyGraph",
    "build_topology",
    "connectivity_zeta",
    "coverage_phi",
    "covers",
    "fog_link",
    "load_scenario",
    "save_scenario",
    "EvaluationContext",
    "FitnessBreakdown",
    "bounds",
    "decode",
    "encode",
    "evaluate_population",
    "fitness",
    "RunRecord",
]
