"""
A generic constrained system with forcing
=========================================

Nothing in the solvers is specific to the pipe.  Here a random system
with a non-symmetric damping ``D``, a nonzero ``A`` and sampled forcing
is integrated; the constraint ``B p = h`` holds at every node.
"""

import numpy as np

from hyperpdae import DiscretePdae, Forcing, State, TimeGrid, estimate_constants, solve_auxiliary, solve_eps_system
from hyperpdae.core import saddle_residuals

rng = np.random.default_rng(1)
dim_p, dim_m, dim_q = 6, 4, 2


def spd(k):
    x = rng.standard_normal((k, k))
    return x @ x.T / k + np.eye(k)


skew = rng.standard_normal((dim_m, dim_m))
G_H = spd(dim_p)
sys = DiscretePdae(
    G_H=G_H, G_P=G_H + spd(dim_p), G_M=spd(dim_m),
    A_mat=0.2 * rng.standard_normal((dim_p, dim_p)), K_mat=rng.standard_normal((dim_m, dim_p)),
    D_mat=spd(dim_m) + 0.3 * (skew - skew.T), B_mat=rng.standard_normal((dim_q, dim_p)),
)
consts = estimate_constants(sys)
print(consts)

###############################################################################
# A consistent start: the auxiliary problem returns a vector in ker B.
p0 = solve_auxiliary(sys, consts, rng.standard_normal(dim_p))[0]
grid = TimeGrid.uniform(2.0, 400)
t = grid.nodes
forcing = Forcing(
    g=np.outer(np.sin(3 * t), rng.standard_normal(dim_p)),
    f=np.outer(np.cos(t), rng.standard_normal(dim_m)),
    h=np.column_stack([np.sin(t), 0.5 * t ** 2]),
)
traj = solve_eps_system(sys, State(0.0, p0, np.zeros(dim_m), np.zeros(dim_q)), 0.05, grid, forcing)
print("max |B p - h| =", np.abs(traj.p @ sys.B_mat.T - forcing.h).max())
print("max step residual =", saddle_residuals(sys, traj, 0.05, forcing).max())
