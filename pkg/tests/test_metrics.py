import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hyperpdae.core import State, TimeGrid, Trajectory, solve_eps_system
from hyperpdae.expansion import exact_correction_trajectory, exact_mode_trajectories, hat_solution, solve_limit_system
from hyperpdae.metrics import ErrorTable, Measure, bochner_l2, bochner_linf, error_report
from hyperpdae.pipe import InitialDataPreset, initial_data

GRID = TimeGrid.uniform(1.0, 8)


def random_traj(seed, n=3, grid=GRID):
    rng = np.random.default_rng(seed)
    N = len(grid)
    return Trajectory(grid, rng.standard_normal((N, n + 2)), rng.standard_normal((N, n + 1)),
                      rng.standard_normal((N, 2)))


class TestBochner:
    def test_zero(self, pipe):
        z = np.zeros((9, 5))
        assert bochner_linf(z, pipe(3).G_H) == 0.0
        assert bochner_l2(z, pipe(3).G_H, GRID) == 0.0

    def test_spike(self, pipe):
        sys = pipe(1)
        diff = np.zeros((9, 3))
        diff[4, 2] = 3 / np.sqrt(0.5)
        assert bochner_linf(diff, sys.G_H) == pytest.approx(3.0, rel=1e-15)

    def test_constant(self):
        diff = np.full((9, 1), -2.5)
        assert bochner_l2(diff, np.eye(1), GRID) == pytest.approx(2.5, rel=1e-14)

    def test_exponential_mode(self, pipe):
        sys = pipe(1)
        grid = TimeGrid.uniform(1.0, 4000)
        v = np.array([0.0, 0.0, 2.0])
        diff = np.exp(-grid.nodes)[:, None] * v
        exact = np.sqrt((1 - np.exp(-2)) / 2 * (v @ sys.G_H @ v))
        assert bochner_l2(diff, sys.G_H, grid) == pytest.approx(exact, rel=1e-7)

    def test_mode_one_sup_against_dense_sampling(self, pipe):
        # difference between eps and limit solution of mode 1 peaks inside (0, T)
        sys = pipe(1)
        init = (np.array([0, 0, 1.0]), np.zeros(2))
        eps = 0.05
        dense = TimeGrid.uniform(1.0, 200_000)
        d = exact_mode_trajectories(1, eps, init, dense).p - exact_mode_trajectories(1, 0.0, init, dense).p
        analytic = np.sqrt(0.5) * np.abs(d[:, 2]).max()
        grid = TimeGrid.uniform(1.0, 20_000)
        d = exact_mode_trajectories(1, eps, init, grid).p - exact_mode_trajectories(1, 0.0, init, grid).p
        assert bochner_linf(d, sys.G_H) == pytest.approx(analytic, abs=1e-6)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            bochner_l2(np.zeros((3, 1)), None, GRID)


class TestMeasure:
    def test_ids_and_parse(self):
        assert [m.value for m in Measure] == [
            "p_linf_l2", "p_l2_h1", "m_l2_l2", "m_sqrteps_linf_l2", "lambda_l2",
            "phat_linf_l2", "phat_l2_h1", "mhat_l2_l2"]
        assert Measure.parse("lambda_l2") is Measure.Lambda_L2
        with pytest.raises(ValueError, match="valid measures"):
            Measure.parse("q_l2")

    def test_attributes(self):
        m = Measure.M_LinfL2_sqrtEps
        assert (m.variable, m.space, m.time, m.sqrt_eps, m.hat) == ("m", "M", "linf", True, False)
        m = Measure.Phat_L2H1
        assert (m.variable, m.space, m.time, m.sqrt_eps, m.hat) == ("p", "P", "l2", False, True)
        assert Measure.Lambda_L2.space is None
        assert "sqrt(eps)" in Measure.M_LinfL2_sqrtEps.label


class TestErrorReport:
    def test_identical(self, pipe):
        tr = random_traj(0)
        rep = error_report(tr, tr, 0.1, list(Measure), pipe(3), hat=tr)
        assert all(v == 0 for v in rep.values())

    def test_sqrt_eps_weight(self, pipe):
        a, b = random_traj(1), random_traj(2)
        rep = error_report(a, b, 0.25, [Measure.M_LinfL2_sqrtEps], pipe(3))
        assert rep[Measure.M_LinfL2_sqrtEps] == pytest.approx(0.5 * bochner_linf(a.m - b.m, pipe(3).G_M), rel=1e-15)

    def test_hat_requires_reference(self, pipe):
        tr = random_traj(0)
        with pytest.raises(ValueError, match="hat reference"):
            error_report(tr, tr, 0.1, [Measure.Mhat_L2L2], pipe(3))

    def test_grid_mismatch(self, pipe):
        with pytest.raises(ValueError, match="different grids"):
            error_report(random_traj(0), random_traj(0, grid=TimeGrid.uniform(1, 9)), 0.1, [Measure.P_LinfL2], pipe(3))

    def test_lambda_paths_agree_midpoint(self, pipe):
        n, eps = 2, 0.125
        sys = pipe(n)
        p, m = initial_data(InitialDataPreset.DATA42, n)
        grid = TimeGrid.uniform(1.0, 2000)
        traj = solve_eps_system(sys, State(0, p, m, np.zeros(2)), eps, grid)
        traj0 = solve_limit_system(sys, p, grid)
        rep = error_report(traj, traj0, eps, [Measure.Lambda_L2], sys)
        assert rep[Measure.Lambda_L2] > 1e-3
        assert rep.lambda_gap <= 1e-8

    @pytest.mark.parametrize("preset", list(InitialDataPreset))
    def test_lambda_paths_agree_exact(self, pipe, preset):
        n, eps = 16, 0.01
        sys = pipe(n)
        init = initial_data(preset, n)
        grid = TimeGrid.graded(1.0, 500, 1e-5)
        traj = exact_mode_trajectories(n, eps, init, grid)
        traj0 = exact_mode_trajectories(n, 0.0, init, grid)
        hat = hat_solution(traj0, exact_correction_trajectory(n, init, grid), eps)
        for ref in (traj0, hat):
            rep = error_report(traj, ref, eps, [Measure.Lambda_L2], sys)
            assert rep.lambda_gap <= 1e-8


diffs = arrays(np.float64, (9, 5), elements=st.floats(-1e3, 1e3))


@settings(max_examples=60, deadline=None)
@given(a=diffs, b=diffs, c=diffs, measure=st.sampled_from([m for m in Measure if m.variable == "p"]))
def test_triangle_inequality(pipe, a, b, c, measure):
    sys = pipe(3)
    gram = sys.G_P if measure.space == "P" else sys.G_H
    norm = (lambda d: bochner_linf(d, gram)) if measure.time == "linf" else (lambda d: bochner_l2(d, gram, GRID))
    scale = 1 + norm(a - b) + norm(b - c)
    assert norm(a - c) <= norm(a - b) + norm(b - c) + 1e-12 * scale


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 16), s=st.floats(-100, 100))
def test_homogeneity(pipe, seed, s):
    sys = pipe(3)
    a, b = random_traj(seed), random_traj(seed + 1)
    scaled = Trajectory(GRID, b.p + s * (a.p - b.p), b.m + s * (a.m - b.m), b.lam + s * (a.lam - b.lam))
    base = error_report(a, b, 0.3, list(Measure), sys, hat=b)
    rep = error_report(scaled, b, 0.3, list(Measure), sys, hat=b)
    for measure in Measure:
        assert rep[measure] == pytest.approx(abs(s) * base[measure], rel=1e-12, abs=1e-12)


class TestErrorTable:
    def test_validation(self):
        table = ErrorTable()
        table.add(1, 0.1, Measure.P_LinfL2, 0.5)
        with pytest.raises(ValueError, match="duplicate"):
            table.add(1, 0.1, Measure.P_LinfL2, 0.4)
        for bad in (-1.0, np.nan, np.inf):
            with pytest.raises(ValueError, match="finite and nonnegative"):
                table.add(2, 0.1, Measure.P_LinfL2, bad)
        assert len(table) == 1

    def test_groups_sorted_by_decreasing_eps(self):
        table = ErrorTable()
        for eps in (0.01, 0.1, 0.05):
            table.add(4, eps, Measure.M_L2L2, eps)
        eps, vals = table.series(4, Measure.M_L2L2)
        np.testing.assert_array_equal(eps, [0.1, 0.05, 0.01])
        assert table == ErrorTable(list(table))
