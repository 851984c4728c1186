"""First-order expansion in eps: limit system, correction system, exact pipe modes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DiscretePdae,
    Forcing,
    ScaledLU,
    State,
    TimeGrid,
    Trajectory,
    _check_consistent,
    _StepCache,
    node_multipliers,
)


def _parabolic_midpoint(sys: DiscretePdae, p_init, grid: TimeGrid, rhs, h):
    """Midpoint rule for ``G_H p' + (L + A) p + B^T lam = rhs``, ``B p = h``."""
    dp, dq = sys.dim_p, sys.dim_q
    LA = sys.L_mat + sys.A_mat
    GH, B = sys.G_H, sys.B_mat

    def build(step):
        lhs = np.block([[GH / step + 0.5 * LA, B.T], [B, np.zeros((dq, dq))]])
        lu = ScaledLU(lhs, "parabolic saddle system is singular")
        return lu, lu.solve(np.vstack([GH / step - 0.5 * LA, np.zeros((dq, dp))]))

    steps = _StepCache(build)
    forced = bool(np.any(rhs)) or bool(np.any(h))
    n = len(grid)
    P = np.empty((n, dp))
    stage = np.empty((n - 1, dq))
    P[0] = p_init
    for i, step in enumerate(grid.steps):
        lu, prop = steps(step)
        x = prop @ P[i]
        if forced:
            x += lu.solve(np.concatenate([0.5 * (rhs[i] + rhs[i + 1]), h[i + 1]]))
        P[i + 1] = x[:dp]
        stage[i] = x[dp:]
    return P, stage


def _parabolic_nodes(sys: DiscretePdae, P, g, f, h_dot):
    """Flow variable, multiplier and ``p'`` at the nodes of a parabolic solution."""
    M = sys.solve_D((f - P @ sys.K_mat.T).T).T
    residual = g - P @ sys.A_mat.T + M @ sys.K_mat
    lam = node_multipliers(sys, residual, h_dot)
    p_dot = sys.solve_H((residual - lam @ sys.B_mat).T).T
    return M, lam, p_dot


def solve_limit_system(
    sys: DiscretePdae,
    p0_init,
    grid: TimeGrid,
    forcing: Forcing | None = None,
    constraint_tol: float = 1e-9,
) -> Trajectory:
    """Solve the eps = 0 system.

    The flow equation is eliminated, ``m0 = D^{-1}(f - K p0)``, leaving a
    constrained parabolic equation for ``p0`` that is integrated with the
    implicit midpoint rule.
    """
    forcing = forcing or Forcing.zero()
    forcing.check(sys, grid)
    n = len(grid)
    g = forcing.values("g", n, sys.dim_p)
    f = forcing.values("f", n, sys.dim_m)
    h = forcing.values("h", n, sys.dim_q)
    p0_init = np.asarray(p0_init, float)
    _check_consistent(sys, p0_init, h[0], constraint_tol)
    rhs = g + sys.solve_D(f.T).T @ sys.K_mat
    P, stage = _parabolic_midpoint(sys, p0_init, grid, rhs, h)
    M, lam, _ = _parabolic_nodes(sys, P, g, f, forcing.derivative("h", grid, sys.dim_q))
    return Trajectory(grid, P, M, lam, stage_lam=stage)


def limit_time_derivatives(sys: DiscretePdae, traj0: Trajectory, forcing: Forcing | None = None):
    """``(p0', m0')`` at the nodes, taken from the equations instead of differencing.

    ``p0' = G_H^{-1}(g - A p0 + K^T m0 - B^T lam0)`` with ``lam0`` chosen so
    that ``B p0' = h'``; then ``m0' = D^{-1}(f' - K p0')``.
    """
    forcing = forcing or Forcing.zero()
    grid = traj0.grid
    n = len(grid)
    g = forcing.values("g", n, sys.dim_p)
    residual = g - traj0.p @ sys.A_mat.T + traj0.m @ sys.K_mat
    lam = node_multipliers(sys, residual, forcing.derivative("h", grid, sys.dim_q))
    p_dot = sys.solve_H((residual - lam @ sys.B_mat).T).T
    f_dot = forcing.derivative("f", grid, sys.dim_m)
    m_dot = sys.solve_D((f_dot - p_dot @ sys.K_mat.T).T).T
    return p_dot, m_dot


def solve_correction_system(
    sys: DiscretePdae,
    traj0: Trajectory,
    grid: TimeGrid,
    forcing: Forcing | None = None,
) -> Trajectory:
    """First-order correction ``(p1, m1, lam1)``.

    Same parabolic structure as the limit system with flow right-hand side
    ``-m0'`` and homogeneous data, starting from ``p1(0) = 0``.  The
    nodal ``lam1`` is diagnostic only.
    """
    if not traj0.grid.same_as(grid):
        raise ValueError("grid mismatch: traj0 was computed on a different time grid")
    _, m0_dot = limit_time_derivatives(sys, traj0, forcing)
    f1 = -m0_dot @ sys.G_M.T
    n = len(grid)
    zeros_q = np.zeros((n, sys.dim_q))
    g1 = np.zeros((n, sys.dim_p))
    rhs = sys.solve_D(f1.T).T @ sys.K_mat
    P, stage = _parabolic_midpoint(sys, np.zeros(sys.dim_p), grid, rhs, zeros_q)
    M, lam, _ = _parabolic_nodes(sys, P, g1, f1, zeros_q)
    return Trajectory(grid, P, M, lam, stage_lam=stage)


def hat_solution(traj0: Trajectory, traj1: Trajectory, eps: float) -> Trajectory:
    """Node-wise ``traj0 + eps traj1``."""
    if not traj0.grid.same_as(traj1.grid):
        raise ValueError("grid mismatch between expansion terms")
    return Trajectory(
        traj0.grid,
        traj0.p + eps * traj1.p,
        traj0.m + eps * traj1.m,
        traj0.lam + eps * traj1.lam,
    )


@dataclass(frozen=True)
class ExpansionBundle:
    traj0: Trajectory
    traj1: Trajectory
    eps: float
    hat: Trajectory

    @classmethod
    def build(cls, traj0: Trajectory, traj1: Trajectory, eps: float) -> "ExpansionBundle":
        return cls(traj0, traj1, eps, hat_solution(traj0, traj1, eps))


# --- exact propagation of the decoupled pipe modes -------------------------

def _split_init(init):
    if isinstance(init, State):
        return np.asarray(init.p, float), np.asarray(init.m, float)
    p, m = init
    return np.asarray(p, float), np.asarray(m, float)


def _check_pure_modes(p, m):
    n = p.size - 2
    if n < 1 or m.size != n + 1:
        raise ValueError("mode data must have sizes (n + 2, n + 1)")
    if np.any(p[:2] != 0.0):
        raise ValueError("oracle requires pure-mode data (exponential coefficients must vanish)")
    return n


def mode_propagator(a: np.ndarray, eps: float, t: np.ndarray):
    """Coefficients ``(c, s)`` with ``exp(t M) = c I + s (M - sigma I)``.

    ``M = [[0, a], [-a/eps, -1/eps]]`` is the mode matrix, ``sigma = -1/(2 eps)``
    its mean eigenvalue.  Real, defective and complex eigenvalue branches are
    evaluated without overflow or cancellation.  Shapes: ``(len(a), len(t))``.
    """
    a = np.asarray(a, float)[:, None]
    t = np.asarray(t, float)[None, :]
    disc = 1.0 - 4.0 * eps * a ** 2
    root = np.sqrt(np.abs(disc))
    omega = root / (2 * eps)
    real = disc > 0
    defective = disc == 0
    # slow and fast eigenvalue on the real branch, free of cancellation
    mu_slow = np.where(real, -2 * a ** 2 / (1 + root), 0.0)
    mu_fast = -1.0 / eps - mu_slow
    safe_omega = np.where(omega > 0, omega, 1.0)
    sigma = -0.5 / eps
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        e_slow = np.exp(mu_slow * t)
        e_fast = np.exp(mu_fast * t)
        x = 2 * omega * t
        s_real = np.where(
            x <= 1.0,
            e_fast * np.expm1(np.minimum(x, 1.0)) / (2 * safe_omega),
            (e_slow - e_fast) / (2 * safe_omega),
        )
        c_real = 0.5 * (e_slow + e_fast)
        decay = np.exp(sigma * t)
        c_cplx = decay * np.cos(omega * t)
        s_cplx = decay * np.sin(omega * t) / safe_omega
    c = np.where(real, c_real, c_cplx)
    s = np.where(real, s_real, s_cplx)
    c = np.where(defective, decay, c)
    s = np.where(defective, t * decay, s)
    return c, s


def _trace_lambda(M):
    alt = (-1.0) ** np.arange(M.shape[1])
    return np.column_stack([-M.sum(axis=1), M @ alt])


def exact_mode_coefficients(a: np.ndarray, eps: float, pk: np.ndarray, mk: np.ndarray, t: np.ndarray):
    """Sine coefficients ``p_k(t)`` and cosine coefficients ``m_k(t)``, shape ``(len(t), len(a))``.

    ``a = pi k`` are the wavenumbers; ``eps = 0`` gives the limit solution
    (for which ``mk`` is ignored).
    """
    a = np.asarray(a, float)
    pk = np.asarray(pk, float)
    mk = np.asarray(mk, float)
    t = np.asarray(t, float)
    if eps == 0:
        P = np.exp(-np.outer(t, a ** 2)) * pk
        return P, -a * P
    c, s = mode_propagator(a, eps, t)
    P = (c * pk[:, None] + s * (pk / (2 * eps) + a * mk)[:, None]).T
    M = (c * mk[:, None] - s * (a * pk / eps + mk / (2 * eps))[:, None]).T
    return P, M


def exact_correction_coefficients(a: np.ndarray, pk: np.ndarray, t: np.ndarray):
    """Mode coefficients of the first-order correction ``(p1, m1)``."""
    a = np.asarray(a, float)
    t = np.asarray(t, float)
    decay = np.exp(-np.outer(t, a ** 2)) * np.asarray(pk, float)
    P = -(a ** 4) * t[:, None] * decay
    return P, -a * P - a ** 3 * decay


def exact_mode_trajectories(n: int, eps: float, init, grid: TimeGrid) -> Trajectory:
    """Exact solution of the pipe system for data on the sine/cosine modes.

    Each mode ``k`` obeys ``p_k' = pi k m_k``, ``eps m_k' = -pi k p_k - m_k``
    and the constant flux mode ``eps m_0' = -m_0``.  ``eps = 0`` returns the
    limit solution.  The multiplier is the boundary trace
    ``(-m(0, t), m(1, t))``.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    p_init, m_init = _split_init(init)
    if _check_pure_modes(p_init, m_init) != n:
        raise ValueError("initial data does not match n")
    t = grid.nodes
    a = np.pi * np.arange(1, n + 1)
    P = np.zeros((len(t), n + 2))
    M = np.zeros((len(t), n + 1))
    P[:, 2:], M[:, 1:] = exact_mode_coefficients(a, eps, p_init[2:], m_init[1:], t)
    if eps > 0:
        M[:, 0] = m_init[0] * np.exp(-t / eps)
    return Trajectory(grid, P, M, _trace_lambda(M))


def exact_correction_trajectory(n: int, init, grid: TimeGrid) -> Trajectory:
    """Closed-form first-order correction for pure-mode pipe data.

    ``p1_k = -(pi k)^4 p_k(0) t exp(-(pi k)^2 t)`` and
    ``m1_k = -pi k p1_k - (pi k)^3 p_k(0) exp(-(pi k)^2 t)``.
    """
    p_init, m_init = _split_init(init)
    if _check_pure_modes(p_init, m_init) != n:
        raise ValueError("initial data does not match n")
    t = grid.nodes
    a = np.pi * np.arange(1, n + 1)
    P = np.zeros((len(t), n + 2))
    M = np.zeros((len(t), n + 1))
    P[:, 2:], M[:, 1:] = exact_correction_coefficients(a, p_init[2:], t)
    return Trajectory(grid, P, M, _trace_lambda(M))
