"""
Initial layers on a single pipe
===============================

The flux of the hyperbolic pipe model relaxes onto the parabolic flux
``m0 = -p0_x`` within a time of order eps.  Data that violate
``p_x(0) = -m(0)`` leave a layer behind; consistent data do not.
"""

import numpy as np

from hyperpdae import State, TimeGrid, build_pipe_system, initial_data, solve_eps_system, solve_limit_system
from hyperpdae.pipe import InitialDataPreset, trace_multiplier_reference

n, eps = 16, 1e-3
sys = build_pipe_system(n)
grid = TimeGrid.graded(1.0, 2000, 1e-3 * eps)

###############################################################################
# Midpoint solves for an inconsistent and a consistent preset.
for preset in (InitialDataPreset.DATA42, InitialDataPreset.DATA45):
    p, m = initial_data(preset, n)
    traj = solve_eps_system(sys, State(0.0, p, m, np.zeros(2)), eps, grid)
    ref = solve_limit_system(sys, p, grid)
    dm = traj.m - ref.m
    gap = np.sqrt(np.einsum("ij,jk,ik->i", dm, sys.G_M, dm))
    print(f"{preset.value}: |m - m0| at t=0 {gap[0]:.3e}, at t=10 eps {np.interp(10 * eps, grid.nodes, gap):.3e}, "
          f"at t=1 {gap[-1]:.3e}")

###############################################################################
# The multiplier is the boundary flux ``(-m(0), m(1))``.
ends = np.array([trace_multiplier_reference(mi) for mi in traj.m]) * [-1, 1]
print("max |lam - flux trace| =", np.abs(traj.lam - ends).max())
print("max |B p| =", np.abs(traj.p @ sys.B_mat.T).max())
