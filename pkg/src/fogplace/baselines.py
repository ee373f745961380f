"""PSO, SCA and HHO baselines on the same fitness, bounds and RNG contract as MPA.

All three maximise. Each keeps a best-so-far record, so their traces never
decrease, and each clamps positions to the search box after every move.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from .mpa import initialize, make_rng, mantegna_levy
from .objective import EvaluationContext, bounds as search_bounds, evaluate_population
from .record import BestTracker, IterationCallback, RunRecord, scenario_digest

__all__ = ["ALGORITHMS", "BaselineParams", "pso_run", "sca_run", "hho_run", "run_baseline"]

ALGORITHMS = ("pso", "sca", "hho")

HHO_BRANCHES = (
    "explore_perch_family",
    "explore_perch_random",
    "soft_besiege",
    "hard_besiege",
    "soft_besiege_dive",
    "hard_besiege_dive",
)


@dataclass(frozen=True)
class BaselineParams:
    algorithm: str
    population: int = 30
    t_max: int = 1000
    seed: int = 0
    # PSO
    w_start: float = 0.9
    w_end: float = 0.4
    c1: float = 2.0
    c2: float = 2.0
    velocity_clamp: float = 0.2
    # SCA
    sca_a: float = 2.0
    # HHO
    hho_beta: float = 1.5
    hho_levy_scale: float = 0.01

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown baseline {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.population < 2:
            raise ValueError(f"population must be >= 2, got {self.population}")
        if self.t_max < 1:
            raise ValueError(f"t_max must be >= 1, got {self.t_max}")


def _record(ctx, params, best, evaluations, start, diagnostics=None) -> RunRecord:
    return RunRecord(
        algorithm=params.algorithm,
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
        diagnostics=diagnostics or {},
    )


def pso_run(ctx: EvaluationContext, params: BaselineParams, callback: IterationCallback = None) -> RunRecord:
    """Inertia-weight PSO, velocities start at zero.

    Per iteration draws ``r1 (N,d)`` then ``r2 (N,d)``. Inertia decays
    linearly from ``w_start`` to ``w_end`` over the run; velocities are clamped
    to ``velocity_clamp * (upper - lower)``.
    """
    start = time.perf_counter()
    rng = make_rng(params.seed)
    lower, upper = search_bounds(ctx)
    N, T = params.population, params.t_max
    vmax = params.velocity_clamp * (upper - lower)

    X = initialize(params, (lower, upper), rng)
    V = np.zeros_like(X)
    f, zeta, phi = evaluate_population(X, ctx)
    evaluations = N
    best = BestTracker(T, ctx.dim)
    best.offer(X, f, zeta, phi)
    pbest, pbest_f = X.copy(), f.copy()

    for t in range(T):
        w = params.w_start - (params.w_start - params.w_end) * t / max(T - 1, 1)
        r1 = rng.random(X.shape)
        r2 = rng.random(X.shape)
        V = w * V + params.c1 * r1 * (pbest - X) + params.c2 * r2 * (best.position - X)
        V = np.clip(V, -vmax, vmax)
        X = np.clip(X + V, lower, upper)

        f, zeta, phi = evaluate_population(X, ctx)
        evaluations += N
        improved = f >= pbest_f
        pbest[improved] = X[improved]
        pbest_f[improved] = f[improved]
        best.offer(X, f, zeta, phi)
        best.record(t)
        if callback is not None:
            callback(t, X)

    return _record(ctx, params, best, evaluations, start)


def sca_run(ctx: EvaluationContext, params: BaselineParams, callback: IterationCallback = None) -> RunRecord:
    """Sine cosine algorithm moving every agent around the best point found.

    Amplitude ``r1 = a * (1 - (t+1)/T)`` reaches 0 on the final iteration.
    Per iteration draws ``r2 (N,d)``, ``r3 (N,d)``, ``r4 (N,)``; ``r4`` picks the
    sine or cosine branch for a whole agent.
    """
    start = time.perf_counter()
    rng = make_rng(params.seed)
    lower, upper = search_bounds(ctx)
    N, T = params.population, params.t_max

    X = initialize(params, (lower, upper), rng)
    best = BestTracker(T, ctx.dim)
    evaluations = 0
    amplitudes = np.zeros(T)

    for t in range(T):
        f, zeta, phi = evaluate_population(X, ctx)
        evaluations += N
        best.offer(X, f, zeta, phi)

        r1 = params.sca_a - (t + 1) * params.sca_a / T
        amplitudes[t] = r1
        r2 = 2 * np.pi * rng.random(X.shape)
        r3 = 2 * rng.random(X.shape)
        r4 = rng.random(N)
        wave = np.where((r4 < 0.5)[:, None], np.sin(r2), np.cos(r2))
        X = np.clip(X + r1 * wave * np.abs(r3 * best.position - X), lower, upper)

        best.record(t)
        if callback is not None:
            callback(t, X)

    return _record(ctx, params, best, evaluations, start, {"amplitude": amplitudes})


def hho_run(ctx: EvaluationContext, params: BaselineParams, callback: IterationCallback = None) -> RunRecord:
    """Harris hawks optimisation with escape-energy branch switching.

    Escape energy is ``E = 2 * E0 * (1 - t/T)`` with ``E0 ~ U(-1, 1)`` per hawk.
    ``|E| >= 1`` explores; otherwise soft/hard besiege, optionally with rapid
    dives that are accepted only when they beat the hawk's current fitness.

    Per iteration draws, all ``(N,)`` unless noted: ``E0``, ``q``, ``r``,
    ``k`` (random hawk index), ``a1``, ``a2``, ``a3``, ``a4``, jump ``u``,
    ``S (N,d)``, Lévy ``(N,d)``.
    """
    start = time.perf_counter()
    rng = make_rng(params.seed)
    lower, upper = search_bounds(ctx)
    N, T, d = params.population, params.t_max, ctx.dim

    X = initialize(params, (lower, upper), rng)
    best = BestTracker(T, d)
    evaluations = 0
    counts = np.zeros(len(HHO_BRANCHES), dtype=int)

    for t in range(T):
        f, zeta, phi = evaluate_population(X, ctx)
        evaluations += N
        best.offer(X, f, zeta, phi)
        rabbit = best.position

        E = 2.0 * (2.0 * rng.random(N) - 1.0) * (1.0 - t / T)
        q = rng.random(N)
        r = rng.random(N)
        k = rng.integers(0, N, N)
        a1, a2, a3, a4 = (rng.random(N)[:, None] for _ in range(4))
        jump = 2.0 * (1.0 - rng.random(N))[:, None]
        S = rng.random((N, d))
        levy = params.hho_levy_scale * mantegna_levy((N, d), params.hho_beta, rng)

        absE = np.abs(E)
        explore = absE >= 1
        soft = absE >= 0.5
        branch = np.where(
            explore,
            np.where(q < 0.5, 0, 1),
            np.where(r >= 0.5, np.where(soft, 2, 3), np.where(soft, 4, 5)),
        )
        counts += np.bincount(branch, minlength=len(HHO_BRANCHES))

        Ecol = E[:, None]
        mean = X.mean(axis=0)
        Xr = X[k]
        candidates = [
            Xr - a1 * np.abs(Xr - 2 * a2 * X),
            (rabbit - mean) - a3 * (lower + a4 * (upper - lower)),
            (rabbit - X) - Ecol * np.abs(jump * rabbit - X),
            rabbit - Ecol * np.abs(rabbit - X),
        ]
        new = X.copy()
        for b, cand in enumerate(candidates):
            sel = branch == b
            new[sel] = cand[sel]

        dive = branch >= 4
        if dive.any():
            anchor = np.where((branch == 5)[:, None], mean, X)
            Y = np.clip(rabbit - Ecol * np.abs(jump * rabbit - anchor), lower, upper)[dive]
            Z = np.clip(Y + S[dive] * levy[dive], lower, upper)
            fy, zy, py = evaluate_population(Y, ctx)
            fz, zz, pz = evaluate_population(Z, ctx)
            evaluations += 2 * len(Y)
            best.offer(Y, fy, zy, py)
            best.offer(Z, fz, zz, pz)
            cur = f[dive]
            pick = np.where((fy > cur)[:, None], Y, np.where((fz > cur)[:, None], Z, X[dive]))
            new[dive] = pick

        X = np.clip(new, lower, upper)
        best.record(t)
        if callback is not None:
            callback(t, X)

    return _record(ctx, params, best, evaluations, start, {"branch_counts": dict(zip(HHO_BRANCHES, counts.tolist()))})


_RUNNERS = {"pso": pso_run, "sca": sca_run, "hho": hho_run}


def run_baseline(ctx: EvaluationContext, params: BaselineParams, callback: IterationCallback = None) -> RunRecord:
    return _RUNNERS[params.algorithm](ctx, params, callback)
