"""Marine Predators Algorithm over fog placement vectors.

The run is split into three equal stages by iteration count:

* stage 1 (``t < T//3``): Brownian exploration of every prey around the elite;
* stage 2 (``T//3 <= t < 2T//3``): the first ``N//2`` prey take Lévy steps,
  the rest are pulled toward the elite with Brownian steps scaled by CF;
* stage 3: every prey moves around the elite with Lévy steps scaled by CF.

After each stage update the population is evaluated, per-agent memory keeps
the better of old/new positions, and a FADs perturbation is applied. The
elite (top predator) is the best position ever evaluated.

Random draws come from one ``numpy.random.Generator`` (PCG64) seeded per run.
Every random quantity is drawn as a whole ``(agents, dim)`` block in
row-major order, in the order listed in each update function's docstring.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .objective import EvaluationContext, bounds as search_bounds, evaluate_population
from .record import BestTracker, IterationCallback, RunRecord, scenario_digest

__all__ = [
    "MpaParams",
    "AgentMemory",
    "make_rng",
    "initialize",
    "brownian_vector",
    "mantegna_levy",
    "levy_vector",
    "cf",
    "phase_of",
    "phase1_step",
    "phase2_step",
    "phase3_step",
    "fads_step",
    "phase1_update",
    "phase2_update",
    "phase3_update",
    "fads_effect",
    "memory_saving",
    "run",
]

LEVY_SCALE = 0.05


@dataclass(frozen=True)
class MpaParams:
    population: int = 30
    t_max: int = 1000
    p_const: float = 0.5
    fads_prob: float = 0.2
    levy_beta: float = 1.5
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ValueError(f"population must be >= 2, got {self.population}")
        if self.t_max < 3:
            raise ValueError(f"t_max must be >= 3 so every stage runs, got {self.t_max}")
        if not 0.0 <= self.fads_prob <= 1.0:
            raise ValueError(f"fads_prob must lie in [0, 1], got {self.fads_prob}")
        if not 0.0 < self.levy_beta <= 2.0:
            raise ValueError(f"levy_beta must lie in (0, 2], got {self.levy_beta}")


@dataclass
class AgentMemory:
    positions: np.ndarray
    fitness: np.ndarray


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def initialize(params: MpaParams, bounds, rng) -> np.ndarray:
    """Uniform prey positions ``lower + U[0,1) * (upper - lower)``."""
    lower, upper = bounds
    return lower + rng.random((params.population, len(lower))) * (upper - lower)


def brownian_vector(d, rng) -> np.ndarray:
    """Standard normal steps; ``d`` may be an int or a shape tuple."""
    return rng.standard_normal(d)


def _mantegna_sigma(beta: float) -> float:
    num = math.gamma(1 + beta) * math.sin(math.pi * beta / 2)
    den = math.gamma((1 + beta) / 2) * beta * 2 ** ((beta - 1) / 2)
    return (num / den) ** (1 / beta)


def mantegna_levy(d, beta: float, rng) -> np.ndarray:
    """Unscaled Mantegna steps: draws ``u ~ N(0, sigma_u^2)`` then ``v ~ N(0, 1)``,
    returns ``u / |v|**(1/beta)``."""
    u = rng.standard_normal(d) * _mantegna_sigma(beta)
    v = rng.standard_normal(d)
    return u / np.abs(v) ** (1 / beta)


def levy_vector(d, beta: float, rng) -> np.ndarray:
    """Lévy-stable steps (Mantegna) scaled by 0.05."""
    return LEVY_SCALE * mantegna_levy(d, beta, rng)


def cf(t: float, t_max: float) -> float:
    """Adaptive step factor ``(1 - t/T) ** (2t/T)``; 1 at the start, 0 at the end."""
    ratio = t / t_max
    return (1.0 - ratio) ** (2.0 * ratio)


def phase_of(t: int, t_max: int) -> int:
    if t < t_max // 3:
        return 1
    if t < (2 * t_max) // 3:
        return 2
    return 3


# -- pure update kernels (no randomness, no clamping) -----------------------


def phase1_step(prey, elite, rb, r, p):
    step = rb * (elite - rb * prey)
    return prey + p * r * step


def phase2_step(prey, elite, rl, r, rb, p, cf_t):
    """``rl`` and ``r`` cover the first ``N//2`` rows, ``rb`` the remainder."""
    half = len(prey) // 2
    out = np.empty_like(prey)
    head = prey[:half]
    out[:half] = head + p * r * (rl * (elite - rl * head))
    out[half:] = elite + p * cf_t * (rb * (rb * elite - prey[half:]))
    return out


def phase3_step(prey, elite, rl, p, cf_t):
    return elite + p * cf_t * (rl * (rl * elite - prey))


def fads_step(prey, lower, upper, cf_t, fads_prob, r, rand_pos, mask, r1, r2):
    """FADs perturbation for given draws.

    Rows with ``r <= fads_prob`` jump by ``cf_t * (lower + rand_pos * (upper -
    lower)) * mask``; the others move by ``(fads_prob * (1 - r) + r) *
    (prey[r1] - prey[r2])``.
    """
    jump = cf_t * (lower + rand_pos * (upper - lower)) * mask
    drift = (fads_prob * (1.0 - r) + r)[:, None] * (prey[r1] - prey[r2])
    return prey + np.where((r <= fads_prob)[:, None], jump, drift)


# -- stochastic updates ------------------------------------------------------


def phase1_update(prey, elite, params: MpaParams, rng, bounds):
    """Draws: ``R_B (N,d)``, ``R (N,d)``."""
    rb = brownian_vector(prey.shape, rng)
    r = rng.random(prey.shape)
    return np.clip(phase1_step(prey, elite, rb, r, params.p_const), *bounds)


def phase2_update(prey, elite, params: MpaParams, t, rng, bounds):
    """Draws: ``R_L (N//2,d)``, ``R (N//2,d)``, ``R_B (N-N//2,d)``."""
    half = len(prey) // 2
    d = prey.shape[1]
    rl = levy_vector((half, d), params.levy_beta, rng)
    r = rng.random((half, d))
    rb = brownian_vector((len(prey) - half, d), rng)
    new = phase2_step(prey, elite, rl, r, rb, params.p_const, cf(t, params.t_max))
    return np.clip(new, *bounds)


def phase3_update(prey, elite, params: MpaParams, t, rng, bounds):
    """Draws: ``R_L (N,d)``."""
    rl = levy_vector(prey.shape, params.levy_beta, rng)
    return np.clip(phase3_step(prey, elite, rl, params.p_const, cf(t, params.t_max)), *bounds)


def fads_effect(prey, params: MpaParams, t, bounds, rng):
    """Draws: ``r (N,)``, ``R (N,d)``, mask ``U (N,d)``, ``r1 (N,)``, ``r2 (N,)``.

    All draws are taken regardless of which branch each agent follows.
    """
    lower, upper = bounds
    N = len(prey)
    r = rng.random(N)
    rand_pos = rng.random(prey.shape)
    mask = rng.random(prey.shape) < params.fads_prob
    r1 = rng.integers(0, N, N)
    r2 = rng.integers(0, N, N)
    new = fads_step(prey, lower, upper, cf(t, params.t_max), params.fads_prob, r, rand_pos, mask, r1, r2)
    return np.clip(new, lower, upper)


def memory_saving(prey, fit, memory: AgentMemory | None):
    """Per agent, keep the new position unless the remembered one was strictly better.

    Returns ``(prey, fit, memory)`` where ``memory`` now holds the kept rows.
    """
    if memory is not None:
        revert = memory.fitness > fit
        prey = np.where(revert[:, None], memory.positions, prey)
        fit = np.where(revert, memory.fitness, fit)
    return prey, fit, AgentMemory(prey.copy(), fit.copy())


def run(ctx: EvaluationContext, params: MpaParams, callback: IterationCallback = None) -> RunRecord:
    start = time.perf_counter()
    rng = make_rng(params.seed)
    box = search_bounds(ctx)
    best = BestTracker(params.t_max, ctx.dim)
    phases = np.zeros(params.t_max, dtype=np.int8)
    evaluations = 0

    prey = initialize(params, box, rng)
    memory = None
    for t in range(params.t_max):
        # evaluate (initial or FADs-perturbed) prey, update elite, memory saving
        f, zeta, phi = evaluate_population(prey, ctx)
        evaluations += len(prey)
        best.offer(prey, f, zeta, phi)
        prey, f, memory = memory_saving(prey, f, memory)

        phase = phase_of(t, params.t_max)
        phases[t] = phase
        if phase == 1:
            prey = phase1_update(prey, best.position, params, rng, box)
        elif phase == 2:
            prey = phase2_update(prey, best.position, params, t, rng, box)
        else:
            prey = phase3_update(prey, best.position, params, t, rng, box)

        f, zeta, phi = evaluate_population(prey, ctx)
        evaluations += len(prey)
        best.offer(prey, f, zeta, phi)
        prey, f, memory = memory_saving(prey, f, memory)
        best.record(t)

        prey = fads_effect(prey, params, t, box, rng)
        if callback is not None:
            callback(t, prey)

    return RunRecord(
        algorithm="mpa",
        seed=params.seed,
        params=asdict(params),
        best_f=best.trace_f,
        best_zeta=best.trace_zeta,
        best_phi=best.trace_phi,
        best_position=best.position,
        final=best.breakdown(),
        n=ctx.n,
        m=ctx.m,
        omega=ctx.omega,
        scenario_digest=scenario_digest(ctx.template),
        wall_time=time.perf_counter() - start,
        evaluations=evaluations,
        diagnostics={"phases": phases, "memory_fitness": memory.fitness.copy()},
    )
