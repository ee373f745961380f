"""End-to-end acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line through the ``report`` fixture (shown in the
terminal summary) and then asserts. Expensive optimiser runs on the default
scenario are shared between criteria through session fixtures.
"""

import statistics
import time

import numpy as np
import pytest

from fogplace import lab, mpa
from fogplace.baselines import BaselineParams, run_baseline
from fogplace.lab import ExperimentConfig, GeneratorSpec
from fogplace.mpa import MpaParams, brownian_vector, cf, fads_effect, levy_vector, make_rng, phase_of
from fogplace.network import build_topology, connectivity_zeta, coverage_phi
from fogplace.objective import EvaluationContext, bounds, encode, fitness
from oracles import dfs_components, three_cluster_fixture, pairwise_coverage, scenario_from_arrays

pytestmark = pytest.mark.acceptance

POP, T_MAX = 30, 500
MPA_SEEDS = tuple(range(20))
CMP_SEEDS = tuple(range(10))
SWEEP_SEEDS = tuple(range(5))


@pytest.fixture(scope="session")
def default_ctx():
    return EvaluationContext(lab.generate_scenario(GeneratorSpec()), 0.5)


@pytest.fixture(scope="session")
def mpa_runs(default_ctx):
    """Default-scenario MPA runs with per-iteration bounds and phase instrumentation."""
    lower, upper = bounds(default_ctx)
    out = {}
    with pytest.MonkeyPatch.context() as mp:
        events = []
        for k, name in enumerate(("phase1_update", "phase2_update", "phase3_update"), start=1):
            orig = getattr(mpa, name)

            def wrapped(*a, _orig=orig, _k=k, **kw):
                events.append(("phase", _k))
                return _orig(*a, **kw)

            mp.setattr(mpa, name, wrapped)

        for seed in MPA_SEEDS:
            events.clear()
            out_of_bounds = []

            def check(t, prey):
                events.append(("iter", t))
                if not (np.all(prey >= lower) and np.all(prey <= upper)):
                    out_of_bounds.append(t)

            rec = mpa.run(default_ctx, MpaParams(population=POP, t_max=T_MAX, seed=seed), callback=check)
            out[seed] = (rec, list(events), out_of_bounds)
    return out


@pytest.fixture(scope="session")
def baseline_runs(default_ctx):
    return {
        (algo, seed): run_baseline(default_ctx, BaselineParams(algo, population=POP, t_max=T_MAX, seed=seed))
        for algo in ("pso", "sca", "hho")
        for seed in CMP_SEEDS
    }


def test_c1_graph_metric_oracles(report):
    rng = np.random.default_rng(20240501)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(500):
        n, m = int(rng.integers(0, 13)), int(rng.integers(0, 31))
        fog_xy, edge_xy = rng.random((n, 2)) * 400, rng.random((m, 2)) * 400
        ranges = rng.uniform(10, 150, n)
        g = build_topology(scenario_from_arrays(400, 400, fog_xy, ranges, edge_xy))
        comps = dfs_components(fog_xy, ranges)
        zeta_oracle = max((len(c) for c in comps), default=0)
        if connectivity_zeta(g) != zeta_oracle or coverage_phi(g) != pairwise_coverage(fog_xy, ranges, edge_xy):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = report("C1", "graph-metric oracle equivalence", mismatches == 0 and elapsed < 5.0,
                f"mismatches={mismatches}/500 time={elapsed:.2f}s")
    assert ok


def test_c2_fitness_fixture(report):
    s = three_cluster_fixture()
    xy = [(f.location.x, f.location.y) for f in s.fog_nodes]
    sizes = sorted(len(c) for c in dfs_components(xy, [f.range for f in s.fog_nodes]))
    fb = fitness(encode(s), EvaluationContext(s, 0.5))
    ok = report("C2", "fitness arithmetic fixture",
                (s.n, s.m) == (10, 80) and sizes == [2, 3, 5] and (fb.zeta, fb.phi) == (5, 68) and fb.f == 0.675,
                f"components={sizes} zeta={fb.zeta} phi={fb.phi} f={fb.f!r}")
    assert ok


def _one_phase_per_iteration(events, t_max):
    phases_seen, pending = [], []
    for kind, value in events:
        if kind == "phase":
            pending.append(value)
        else:
            if len(pending) != 1:
                return False
            phases_seen.append(pending[0])
            pending = []
    return not pending and phases_seen == [phase_of(t, t_max) for t in range(t_max)]


def test_c3_mpa_mechanics(report, mpa_runs):
    cf_ok = cf(0, T_MAX) == 1.0 and cf(T_MAX, T_MAX) == 0.0 and abs(cf(T_MAX / 2, T_MAX) - 0.5) <= 1e-12
    failures = []
    slowest = 0.0
    for seed, (rec, events, oob) in mpa_runs.items():
        slowest = max(slowest, rec.wall_time)
        if not np.all(np.diff(rec.best_f) >= 0):
            failures.append(f"seed {seed}: trace decreases")
        if oob:
            failures.append(f"seed {seed}: out of bounds at t={oob[0]}")
        if not _one_phase_per_iteration(events, T_MAX):
            failures.append(f"seed {seed}: phase dispatch")
        if rec.wall_time >= 60.0:
            failures.append(f"seed {seed}: {rec.wall_time:.1f}s")
    ok = report("C3", "MPA mechanics", cf_ok and not failures,
                f"cf_ok={cf_ok} seeds={len(mpa_runs)} slowest={slowest:.1f}s " + "; ".join(failures[:3]))
    assert ok


def test_c4_determinism(report, tmp_path, default_ctx, mpa_runs, baseline_runs):
    seed = 0
    first = {"mpa": mpa_runs[seed][0], **{a: baseline_runs[(a, seed)] for a in ("pso", "sca", "hho")}}
    same = {}
    for algo, rec in first.items():
        again = lab.run_algorithm(default_ctx.template, algo, omega=0.5, population=POP, t_max=T_MAX, seed=seed)
        a = lab.write_convergence_csv(rec, tmp_path / f"{algo}_a.csv").read_bytes()
        b = lab.write_convergence_csv(again, tmp_path / f"{algo}_b.csv").read_bytes()
        same[algo] = a == b
    ok = report("C4", "determinism", all(same.values()), " ".join(f"{k}={v}" for k, v in same.items()))
    assert ok


def test_c5_comparative_performance(report, mpa_runs, baseline_runs):
    recs = {"mpa": [mpa_runs[s][0] for s in CMP_SEEDS]}
    for algo in ("pso", "sca", "hho"):
        recs[algo] = [baseline_runs[(algo, s)] for s in CMP_SEEDS]
    total = sum(r.wall_time for rs in recs.values() for r in rs)
    med_f = {a: statistics.median(r.final.f for r in rs) for a, rs in recs.items()}
    med_it = {a: statistics.median(r.iters_to_fraction(0.95) for r in rs) for a, rs in recs.items()}

    quality = all(med_f["mpa"] >= med_f[a] - 0.01 for a in ("pso", "sca", "hho"))
    speed = med_it["mpa"] <= med_it["pso"]
    detail = (
        "median f " + " ".join(f"{a}={v:.4f}" for a, v in med_f.items())
        + f"; median iters-to-95% mpa={med_it['mpa']:g} pso={med_it['pso']:g}"
        + f"; quality={'ok' if quality else 'FAIL'} speed={'ok' if speed else 'FAIL'}; runtime={total:.0f}s"
    )
    ok = report("C5", "comparative performance", quality and speed and total < 1800.0, detail)
    assert ok


def _sweep_cfg():
    # library defaults (population 30, t_max 1000) for everything but the seed list
    return ExperimentConfig(seeds=SWEEP_SEEDS)


def test_c6_density_and_range_trends(report):
    start = time.perf_counter()
    cfg = _sweep_cfg()
    fog = lab.sweep(cfg, "fog_count", [30, 70, 110, 150, 190])
    rng_table = lab.sweep(cfg, "range", [100.0, 130.0, 160.0, 200.0])
    elapsed = time.perf_counter() - start

    dense = [r for r in fog.rows if r.axis_value >= 150]
    wide = [r for r in rng_table.rows if r.axis_value >= 160]
    high_ok = all(r.connectivity_pct >= 95 and r.coverage_pct >= 95 for r in dense + wide)
    cov = fog.column("coverage_pct")
    drops = [cov[i] - cov[i + 1] for i in range(len(cov) - 1) if cov[i + 1] < cov[i]]
    mono_ok = not drops or (len(drops) == 1 and drops[0] <= 2.0)

    fmt = lambda t: " ".join(f"{r.axis_value:g}:{r.connectivity_pct:.1f}/{r.coverage_pct:.1f}" for r in t.rows)
    ok = report("C6", "density/range trends", high_ok and mono_ok and elapsed < 1200.0,
                f"fog {fmt(fog)}; range {fmt(rng_table)}; drops={drops} time={elapsed:.0f}s")
    assert ok


def test_c7_edge_density_stability(report):
    table = lab.sweep(_sweep_cfg(), "edge_count", [30, 90, 150, 195])
    conn, cov, fit = table.column("connectivity_pct"), table.column("coverage_pct"), table.column("fitness_pct")
    spread = max(fit) - min(fit)
    ok_band = all(70 <= c <= 100 for c in conn) and all(70 <= c <= 100 for c in cov)
    detail = " ".join(f"{r.axis_value:g}:{r.connectivity_pct:.1f}/{r.coverage_pct:.1f}/{r.fitness_pct:.1f}"
                      for r in table.rows)
    ok = report("C7", "edge-density stability", ok_band and spread <= 12.0, f"{detail}; f spread={spread:.2f}")
    assert ok


def test_c8_omega_directionality(report, default_ctx):
    cfg = _sweep_cfg()
    rows = {r.omega: r for r in lab.omega_study(cfg, [0.1, 0.5, 0.9], scenario=default_ctx.template)}
    conn_ok = rows[0.9].connectivity_pct >= rows[0.1].connectivity_pct
    cov_ok = rows[0.1].coverage_pct >= rows[0.9].coverage_pct
    detail = " ".join(f"w={w}:{r.connectivity_pct:.1f}/{r.coverage_pct:.1f}" for w, r in rows.items())
    ok = report("C8", "omega directionality", conn_ok and cov_ok, detail)
    assert ok


def test_c9_rng_statistics(report):
    z = brownian_vector(10**6, make_rng(101))
    mean_ok = -0.01 <= z.mean() <= 0.01
    var_ok = 0.99 <= z.var() <= 1.01

    lv = np.abs(levy_vector(10**6, 1.5, make_rng(102)))
    bz = np.abs(z)
    tail_l = float(np.mean(lv > 10 * np.median(lv)))
    tail_b = float(np.mean(bz > 10 * np.median(bz)))

    draws = []

    class Recorder:
        def __init__(self, inner):
            self.inner = inner

        def random(self, shape):
            out = self.inner.random(shape)
            draws.append(out)
            return out

        def integers(self, lo, hi, size):
            return self.inner.integers(lo, hi, size)

    p = MpaParams(population=1000)
    fads_effect(np.full((1000, 1000), 5.0), p, 1, (np.zeros(1000), np.full(1000, 10.0)), Recorder(make_rng(103)))
    density = float(np.mean(draws[2] < p.fads_prob))
    density_ok = abs(density - p.fads_prob) <= 0.005

    ok = report("C9", "RNG statistics", mean_ok and var_ok and tail_l > tail_b and density_ok,
                f"mean={z.mean():.4f} var={z.var():.4f} tail levy={tail_l:.4f} brownian={tail_b:.2e} "
                f"mask={density:.4f}")
    assert ok
