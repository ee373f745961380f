import numpy as np
import pytest

from fogplace import baselines
from fogplace.baselines import ALGORITHMS, HHO_BRANCHES, BaselineParams, run_baseline
from fogplace.objective import EvaluationContext, bounds
from oracles import scenario_from_arrays


def ctx_for(n=6, m=30, seed=0):
    rng = np.random.default_rng(seed)
    s = scenario_from_arrays(1000, 1000, rng.random((n, 2)) * 1000, [120.0] * n, rng.random((m, 2)) * 1000)
    return EvaluationContext(s, 0.5)


class TestParams:
    def test_defaults(self):
        p = BaselineParams("pso")
        assert (p.w_start, p.w_end, p.c1, p.c2, p.velocity_clamp) == (0.9, 0.4, 2.0, 2.0, 0.2)
        assert BaselineParams("sca").sca_a == 2.0

    @pytest.mark.parametrize("kw", [{"algorithm": "ga"}, {"algorithm": "pso", "population": 1},
                                    {"algorithm": "sca", "t_max": 0}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            BaselineParams(**kw)


@pytest.mark.parametrize("algo", ALGORITHMS)
class TestCommon:
    def test_trace_non_decreasing_and_final(self, algo):
        rec = run_baseline(ctx_for(), BaselineParams(algo, population=10, t_max=40, seed=3))
        assert rec.algorithm == algo
        assert len(rec.best_f) == 40
        assert np.all(np.diff(rec.best_f) >= 0)
        assert rec.best_f[-1] == rec.final.f

    def test_deterministic(self, algo):
        ctx = ctx_for()
        a = run_baseline(ctx, BaselineParams(algo, population=10, t_max=25, seed=8))
        b = run_baseline(ctx, BaselineParams(algo, population=10, t_max=25, seed=8))
        np.testing.assert_array_equal(a.best_f, b.best_f)
        np.testing.assert_array_equal(a.best_position, b.best_position)

    def test_bounds_every_iteration(self, algo):
        ctx = ctx_for(n=4)
        lower, upper = bounds(ctx)
        bad = []

        def check(t, X):
            if not (np.all(X >= lower) and np.all(X <= upper)):
                bad.append(t)

        run_baseline(ctx, BaselineParams(algo, population=20, t_max=50, seed=1), callback=check)
        assert not bad


class TestPso:
    def test_frozen_dynamics(self):
        ctx = ctx_for()
        seen = []
        p = BaselineParams("pso", population=6, t_max=15, seed=2, c1=0.0, c2=0.0, w_start=0.0, w_end=0.0)
        baselines.pso_run(ctx, p, callback=lambda t, X: seen.append(X.copy()))
        for X in seen[1:]:
            np.testing.assert_array_equal(X, seen[0])

    def test_velocity_clamp(self):
        ctx = ctx_for(n=3)
        lower, upper = bounds(ctx)
        vmax = 0.2 * (upper - lower)
        prev = []

        def check(t, X):
            if prev:
                assert np.all(np.abs(X - prev[-1]) <= vmax + 1e-9)
            prev.append(X.copy())

        baselines.pso_run(ctx, BaselineParams("pso", population=10, t_max=30, seed=4), callback=check)


class TestSca:
    def test_amplitude_schedule(self):
        rec = baselines.sca_run(ctx_for(), BaselineParams("sca", population=5, t_max=10))
        amp = rec.diagnostics["amplitude"]
        assert amp[-1] == 0.0
        assert np.all(np.diff(amp) < 0)
        assert amp[0] == pytest.approx(2.0 * 9 / 10)

    def test_final_iteration_does_not_move(self):
        seen = []
        baselines.sca_run(ctx_for(), BaselineParams("sca", population=5, t_max=10, seed=3),
                          callback=lambda t, X: seen.append(X.copy()))
        np.testing.assert_array_equal(seen[-1], seen[-2])


class TestHho:
    def test_branch_counts_sum(self):
        rec = baselines.hho_run(ctx_for(), BaselineParams("hho", population=12, t_max=40, seed=5))
        counts = rec.diagnostics["branch_counts"]
        assert set(counts) == set(HHO_BRANCHES)
        assert sum(counts.values()) == 12 * 40
        # early iterations have |E| >= 1 available, late ones cannot explore
        assert counts["explore_perch_family"] + counts["explore_perch_random"] > 0
        assert counts["soft_besiege"] + counts["hard_besiege"] > 0
