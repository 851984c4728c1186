"""Acceptance criteria, one test (and one summary line) each.

Desk scale: n <= 256, j = 1..30, exact-mode integrator.  The summary lines
are printed in the "acceptance criteria" section at the end of the run.
"""
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from hyperpdae.core import (
    State,
    TimeGrid,
    check_energy_estimate,
    consistency_defect,
    estimate_constants,
    solve_eps_system,
)
from hyperpdae.expansion import exact_mode_trajectories, solve_limit_system
from hyperpdae.metrics import ErrorTable, Measure, bochner_linf, error_report
from hyperpdae.pipe import InitialDataPreset, initial_data
from hyperpdae.sweep import DESK_N_LIST, epsilon_grid, estimate_rates


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
    assert ok, detail


def fmt(values):
    return ", ".join(f"{v:.4f}" for v in values)


def test_criterion_1_oracle_equivalence(pipe):
    start = time.perf_counter()
    n, eps = 4, 0.1
    sys = pipe(n)
    p, m = initial_data(InitialDataPreset.DATA42, n)
    init = State(0.0, p, m, np.zeros(2))

    def errors(n_steps):
        grid = TimeGrid.uniform(1.0, n_steps)
        traj = solve_eps_system(sys, init, eps, grid)
        exact = exact_mode_trajectories(n, eps, (p, m), grid)
        return bochner_linf(traj.p - exact.p, sys.G_H), bochner_linf(traj.m - exact.m, sys.G_M)

    err_p, err_m = errors(100_000)
    study = [errors(s) for s in (250, 500, 1000, 2000)]
    orders = [np.log2(study[i][j] / study[i + 1][j]) for i in range(3) for j in range(2)]
    elapsed = time.perf_counter() - start
    ok = err_p <= 1e-4 and err_m <= 1e-4 and all(1.9 <= o <= 2.1 for o in orders) and elapsed < 30
    record(1, "oracle equivalence", ok,
           f"err_p={err_p:.2e}, err_m={err_m:.2e}, orders in [{min(orders):.3f}, {max(orders):.3f}], "
           f"{elapsed:.1f}s")


def test_criterion_2_figure3_constant_series(figure_run):
    _, rates = figure_run(3)
    ns, alpha = rates.series(Measure.M_LinfL2_sqrtEps)
    dev = np.abs(alpha - 0.5).max()
    ok = list(ns) == list(DESK_N_LIST) and dev <= 1e-3
    record(2, "figure 3 sqrt(eps) series", ok, f"max |alpha - 0.5| = {dev:.2e} over n = 1..256")


def test_criterion_3_figure4_pressure_rate(figure_run):
    _, rates = figure_run(4)
    _, alpha = rates.series(Measure.P_LinfL2)
    dev = np.abs(alpha - 1.0).max()
    record(3, "figure 4 pressure rate", dev <= 0.05, f"alpha in [{alpha.min():.4f}, {alpha.max():.4f}]")


def test_criterion_4_figure2_trends(figure_run):
    _, rates = figure_run(2)
    a1 = rates.alpha(1, Measure.P_LinfL2)
    a256 = rates.alpha(256, Measure.P_LinfL2)
    ns, am = rates.series(Measure.M_L2L2)
    bad_m = [int(n) for n, a in zip(ns, am) if abs(a - 0.5) > 0.05]
    ok_p = abs(a1 - 0.96) <= 0.05 and abs(a256 - 0.525) <= 0.05
    detail = f"p: n=1 {a1:.4f}, n=256 {a256:.4f}; m_l2_l2: {fmt(am)}"
    if bad_m:
        detail += f" (outside 0.5 +- 0.05 for n = {bad_m})"
    record(4, "figure 2 trends", ok_p and not bad_m, detail)


def test_criterion_5_figure5_second_order(figure_run):
    _, rates = figure_run(5)
    a1 = rates.alpha(1, Measure.Phat_LinfL2)
    a256 = rates.alpha(256, Measure.Phat_LinfL2)
    _, am = rates.series(Measure.Mhat_L2L2)
    ok = abs(a1 - 1.95) <= 0.07 and abs(a256 - 1.523) <= 0.05 and np.all((am >= 1.40) & (am <= 1.55))
    record(5, "figure 5 second-order rates", ok,
           f"phat: n=1 {a1:.4f}, n=256 {a256:.4f}; mhat in [{am.min():.4f}, {am.max():.4f}]")


def test_criterion_6_multiplier_rates(figure_run):
    a4 = figure_run(4)[1].alpha(256, Measure.Lambda_L2)
    _, a2 = figure_run(2)[1].series(Measure.Lambda_L2)
    ok = 0.70 <= a4 <= 0.85 and np.all(np.diff(a2) < 0) and a2[-1] <= 0.30
    record(6, "multiplier rates", ok, f"figure 4 n=256 {a4:.4f}; figure 2 {fmt(a2)}")


def test_criterion_7_invariant_suites(pipe):
    failures = []
    rng = np.random.default_rng(20)
    eps_grid = epsilon_grid(30)
    worst = dict(constraint=0.0, energy=0.0, lam_gap=0.0, defect=0.0)
    for trial in range(20):
        n = int(rng.integers(1, 9))
        eps = float(eps_grid[rng.integers(0, 12)])
        preset = list(InitialDataPreset)[trial % 4]
        sys = pipe(n)
        p, m = initial_data(preset, n)
        init = State(0.0, p, m, np.zeros(2))
        grid = TimeGrid.uniform(1.0, 1000)
        traj = solve_eps_system(sys, init, eps, grid)
        traj0 = solve_limit_system(sys, p, grid)

        worst["constraint"] = max(worst["constraint"], np.abs(traj.p @ sys.B_mat.T).max())
        energy = (np.einsum("ij,jk,ik->i", traj.p, sys.G_H, traj.p)
                  + eps * np.einsum("ij,jk,ik->i", traj.m, sys.G_M, traj.m))
        worst["energy"] = max(worst["energy"], np.diff(energy).max() / energy[0])
        rep = error_report(traj, traj0, eps, [Measure.Lambda_L2], sys)
        worst["lam_gap"] = max(worst["lam_gap"], rep.lambda_gap)
        if not check_energy_estimate(traj, estimate_constants(sys), eps, init, sys).satisfied:
            failures.append(f"energy estimate n={n} eps={eps:.3g} {preset.value}")
    for preset in (InitialDataPreset.DATA44, InitialDataPreset.DATA45):
        for n in DESK_N_LIST:
            p, m = initial_data(preset, n)
            worst["defect"] = max(worst["defect"], consistency_defect(pipe(n), State(0.0, p, m, np.zeros(2))))
    if worst["constraint"] > 1e-9:
        failures.append("constraint")
    if worst["energy"] > 1e-8:
        failures.append("energy dissipation")
    if worst["lam_gap"] > 1e-8:
        failures.append("multiplier paths")
    if worst["defect"] > 1e-12:
        failures.append("consistency defect")
    detail = ", ".join(f"{k}={v:.1e}" for k, v in worst.items()) + "; 20 energy-estimate configs"
    if failures:
        detail += f"; failed: {failures}"
    record(7, "invariant suites", not failures, detail)


def test_criterion_8_rate_estimator_truth():
    worst = 0.0
    for a in (0.5, 1.0, 1.5, 2.0):
        for c in (1e-3, 1.0, 7.5):
            table = ErrorTable()
            for eps in epsilon_grid(30):
                table.add(1, eps, Measure.P_LinfL2, c * eps ** a)
            worst = max(worst, abs(estimate_rates(table).alpha(1, Measure.P_LinfL2) - a))
    record(8, "rate estimator on exact power laws", worst <= 1e-12, f"max |alpha - a| = {worst:.1e}")
