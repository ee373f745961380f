"""Result container shared by every optimizer."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from .network import Scenario, scenario_to_dict
from .objective import FitnessBreakdown

# callback(t, population) invoked once per iteration after all updates
IterationCallback = Optional[Callable[[int, np.ndarray], None]]


def scenario_digest(s: Scenario) -> str:
    """SHA-256 of the canonical JSON form of a scenario."""
    blob = json.dumps(scenario_to_dict(s), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class RunRecord:
    algorithm: str
    seed: int
    params: dict[str, Any]
    best_f: np.ndarray
    best_zeta: np.ndarray
    best_phi: np.ndarray
    best_position: np.ndarray
    final: FitnessBreakdown
    n: int
    m: int
    omega: float
    scenario_digest: str
    wall_time: float = 0.0
    evaluations: int = 0
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def t_max(self) -> int:
        return len(self.best_f)

    @property
    def final_zeta_pct(self) -> float:
        return 100.0 * self.final.zeta / self.n

    @property
    def final_phi_pct(self) -> float:
        return 100.0 * self.final.phi / self.m

    def iters_to_fraction(self, fraction: float = 0.95) -> int:
        """Iterations needed for the best fitness to reach ``fraction`` of its final value."""
        target = fraction * self.final.f
        hits = np.nonzero(self.best_f >= target)[0]
        return int(hits[0]) + 1 if len(hits) else self.t_max


class BestTracker:
    """Best-so-far bookkeeping plus per-iteration trace (maximisation)."""

    def __init__(self, t_max: int, dim: int):
        self.f = -np.inf
        self.zeta = 0
        self.phi = 0
        self.position = np.zeros(dim)
        self.trace_f = np.zeros(t_max)
        self.trace_zeta = np.zeros(t_max, dtype=int)
        self.trace_phi = np.zeros(t_max, dtype=int)

    def offer(self, X: np.ndarray, f: np.ndarray, zeta: np.ndarray, phi: np.ndarray) -> bool:
        k = int(np.argmax(f))
        if f[k] > self.f:
            self.f = float(f[k])
            self.zeta = int(zeta[k])
            self.phi = int(phi[k])
            self.position = X[k].copy()
            return True
        return False

    def record(self, t: int) -> None:
        self.trace_f[t] = self.f
        self.trace_zeta[t] = self.zeta
        self.trace_phi[t] = self.phi

    def breakdown(self) -> FitnessBreakdown:
        return FitnessBreakdown(f=self.f, zeta=self.zeta, phi=self.phi)
