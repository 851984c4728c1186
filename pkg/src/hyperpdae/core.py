"""Galerkin-discretized constrained hyperbolic PDAE.

The semi-discrete system reads

    G_H p' + A p - K^T m + B^T lam = g
    eps G_M m' + K p + D m         = f
    B p                            = h

with Gram matrices ``G_H`` (pivot space of the potential), ``G_M`` (flow
space) and a surjective constraint matrix ``B``.  Everything in this module
works on coefficient vectors; dual quantities (right-hand sides, residuals)
are stored in Gram-weighted coordinates.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np
import scipy.linalg as sla


class PdaeError(Exception):
    """Base class for solver failures."""


class InconsistentInitialValue(PdaeError, ValueError):
    pass


class SingularSystemError(PdaeError, np.linalg.LinAlgError):
    pass


def _spd_factor(mat: np.ndarray, name: str):
    try:
        return sla.cho_factor(mat, lower=True)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"{name} is not symmetric positive definite") from exc


def _is_symmetric(mat: np.ndarray) -> bool:
    return np.allclose(mat, mat.T, rtol=1e-12, atol=1e-14 * max(1.0, np.abs(mat).max()))


@dataclass(frozen=True)
class OperatorConstants:
    """Bounds of the operators of one discrete system.

    ``c_D`` ellipticity of D, ``beta`` inf-sup constant of B (with the
    Euclidean norm on the multiplier space), ``c_K`` lower bound of K on
    ker B, ``c_L`` ellipticity of K^T D^{-1} K on ker B.  Capital letters are
    operator norms.
    """

    c_D: float
    C_A: float
    C_K: float
    C_D: float
    C_B: float
    beta: float
    c_K: float
    c_L: float

    def __post_init__(self):
        vals = [self.c_D, self.C_A, self.C_K, self.C_D, self.C_B, self.beta, self.c_K, self.c_L]
        if not all(np.isfinite(v) and v >= 0 for v in vals):
            raise ValueError("operator constants must be finite and nonnegative")
        if min(self.c_D, self.beta, self.c_K, self.c_L) <= 0:
            raise ValueError("c_D, beta, c_K and c_L must be strictly positive")
        if self.c_D > self.C_D * (1 + 1e-12) or self.c_K > self.C_K * (1 + 1e-12):
            raise ValueError("lower bounds exceed operator norms")


@dataclass(frozen=True, eq=False)
class DiscretePdae:
    """Matrices of one discretized instance.

    Shapes: ``G_H, G_P, A_mat`` are ``dim_p x dim_p``; ``G_M, D_mat`` are
    ``dim_m x dim_m``; ``K_mat`` is ``dim_m x dim_p``; ``B_mat`` is
    ``dim_q x dim_p``.
    """

    G_H: np.ndarray
    G_P: np.ndarray
    G_M: np.ndarray
    A_mat: np.ndarray
    K_mat: np.ndarray
    D_mat: np.ndarray
    B_mat: np.ndarray

    def __post_init__(self):
        for name in ("G_H", "G_P", "G_M", "A_mat", "K_mat", "D_mat", "B_mat"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        dp, dm, dq = self.dim_p, self.dim_m, self.dim_q
        expected = {
            "G_H": (dp, dp), "G_P": (dp, dp), "G_M": (dm, dm), "A_mat": (dp, dp),
            "K_mat": (dm, dp), "D_mat": (dm, dm), "B_mat": (dq, dp),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ValueError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        for name in ("G_H", "G_P", "G_M"):
            if not _is_symmetric(getattr(self, name)):
                raise ValueError(f"{name} is not symmetric")
        self.chol_H
        self.chol_M
        _spd_factor(self.G_P, "G_P")
        _spd_factor(self.D_mat + self.D_mat.T, "D_mat + D_mat^T")
        if dq > dp or np.linalg.matrix_rank(self.B_mat) < dq:
            raise ValueError("B_mat must have full row rank")
        # H^1-type norm must dominate the pivot norm
        gap = self.G_P - self.G_H
        scale = np.abs(self.G_P).max()
        if np.linalg.eigvalsh(gap).min() < -1e-10 * scale:
            raise ValueError("G_P does not dominate G_H")

    @property
    def dim_p(self) -> int:
        return self.G_H.shape[0]

    @property
    def dim_m(self) -> int:
        return self.G_M.shape[0]

    @property
    def dim_q(self) -> int:
        return self.B_mat.shape[0]

    @cached_property
    def chol_H(self):
        return _spd_factor(self.G_H, "G_H")

    @cached_property
    def chol_M(self):
        return _spd_factor(self.G_M, "G_M")

    @cached_property
    def lu_D(self):
        if np.linalg.cond(self.D_mat) > 1e14:
            raise SingularSystemError("operator D not invertible")
        return sla.lu_factor(self.D_mat)

    @cached_property
    def L_mat(self) -> np.ndarray:
        return assemble_schur(self)

    @cached_property
    def chol_S(self):
        """Cholesky factor of B G_H^{-1} B^T."""
        S = self.B_mat @ sla.cho_solve(self.chol_H, self.B_mat.T)
        try:
            return sla.cho_factor(0.5 * (S + S.T), lower=True)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError("constraint operator not surjective") from exc

    def solve_H(self, rhs: np.ndarray) -> np.ndarray:
        return sla.cho_solve(self.chol_H, rhs)

    def solve_M(self, rhs: np.ndarray) -> np.ndarray:
        return sla.cho_solve(self.chol_M, rhs)

    def solve_D(self, rhs: np.ndarray) -> np.ndarray:
        return sla.lu_solve(self.lu_D, rhs)

    def dual_norm_M(self, r: np.ndarray) -> float:
        """``sqrt(r^T G_M^{-1} r)``."""
        return float(np.sqrt(max(r @ self.solve_M(r), 0.0)))


def _symmetric_part(mat):
    return 0.5 * (mat + mat.T)


def _operator_norm(mat, left_gram, right_gram) -> float:
    """Norm of ``mat`` viewed as a map from (R^n, right_gram) into the dual of (R^m, left_gram)."""
    Rl = np.linalg.cholesky(left_gram)
    Rr = np.linalg.cholesky(right_gram)
    X = sla.solve_triangular(Rl, mat, lower=True)
    X = sla.solve_triangular(Rr, X.T, lower=True).T
    return float(np.linalg.norm(X, 2))


def estimate_constants(sys: DiscretePdae) -> OperatorConstants:
    """Compute the operator constants of a discrete system numerically.

    Uses dense generalized eigenvalue problems, so it is meant for small
    systems (tests and diagnostics).
    """
    eye_q = np.eye(sys.dim_q)
    c_D = float(sla.eigh(_symmetric_part(sys.D_mat), sys.G_M, eigvals_only=True).min())
    C_D = _operator_norm(sys.D_mat, sys.G_M, sys.G_M)
    C_A = _operator_norm(sys.A_mat, sys.G_H, sys.G_H)
    C_K = _operator_norm(sys.K_mat, sys.G_M, sys.G_P)
    C_B = _operator_norm(sys.B_mat, eye_q, sys.G_P)
    Rp = np.linalg.cholesky(sys.G_P)
    BR = sla.solve_triangular(Rp, sys.B_mat.T, lower=True).T
    beta = float(np.linalg.svd(BR, compute_uv=False).min())

    Z = sla.null_space(sys.B_mat)
    GPz = Z.T @ sys.G_P @ Z
    Kz = sys.K_mat @ Z
    c_K = float(np.sqrt(max(sla.eigh(Kz.T @ sys.solve_M(Kz), GPz, eigvals_only=True).min(), 0.0)))
    Lz = Z.T @ sys.L_mat @ Z
    c_L = float(sla.eigh(_symmetric_part(Lz), GPz, eigvals_only=True).min())
    return OperatorConstants(c_D=c_D, C_A=C_A, C_K=C_K, C_D=C_D, C_B=C_B, beta=beta, c_K=c_K, c_L=c_L)


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Partition of ``[0, T]``; not necessarily uniform."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("a time grid needs at least two nodes")
        if nodes[0] != 0.0:
            raise ValueError("time grid must start at 0")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("time grid nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def uniform(cls, t_end: float, n_steps: int) -> "TimeGrid":
        if t_end <= 0 or n_steps < 1:
            raise ValueError("need t_end > 0 and n_steps >= 1")
        nodes = np.linspace(0.0, t_end, n_steps + 1)
        nodes[-1] = t_end
        return cls(nodes)

    @classmethod
    def graded(cls, t_end: float, n_steps: int, t_min: float, per_level: int = 32) -> "TimeGrid":
        """Uniform grid with step ``t_end/n_steps``, refined dyadically towards t = 0.

        The interval ``[0, t_min]`` gets ``per_level`` steps, then each
        interval ``[t_min 2^l, t_min 2^(l+1)]`` gets ``per_level`` steps
        until those steps reach the uniform step size.  Boundary layers of
        width down to ``t_min`` are resolved with a fixed number of nodes
        per decade, and only a few distinct step sizes occur.
        """
        if not 0 < t_min < t_end:
            raise ValueError("need 0 < t_min < t_end")
        dt = t_end / n_steps
        parts = [np.linspace(0.0, t_min, per_level + 1)]
        left = t_min
        while left / per_level < dt and 2 * left < t_end:
            parts.append(np.linspace(left, 2 * left, per_level + 1)[1:])
            left *= 2
        k = max(1, int(np.ceil((t_end - left) / dt - 1e-9)))
        tail = np.linspace(left, t_end, k + 1)[1:]
        tail[-1] = t_end
        parts.append(tail)
        return cls(np.concatenate(parts))

    @property
    def t_end(self) -> float:
        return float(self.nodes[-1])

    @property
    def n_steps(self) -> int:
        return self.nodes.size - 1

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.nodes)

    def __len__(self) -> int:
        return self.nodes.size

    def same_as(self, other: "TimeGrid") -> bool:
        return self is other or (
            self.nodes.shape == other.nodes.shape and np.array_equal(self.nodes, other.nodes)
        )


@dataclass(frozen=True, eq=False)
class Forcing:
    """Right-hand sides sampled at the grid nodes; ``None`` means zero.

    Arrays have shape ``(n_nodes, dim)`` and hold dual (Gram-weighted)
    coefficients for ``g`` and ``f``.
    """

    g: np.ndarray | None = None
    f: np.ndarray | None = None
    h: np.ndarray | None = None

    @classmethod
    def zero(cls) -> "Forcing":
        return cls()

    @property
    def kind(self) -> str:
        return "zero" if self.g is None and self.f is None and self.h is None else "sampled"

    def check(self, sys: DiscretePdae, grid: TimeGrid) -> None:
        dims = {"g": sys.dim_p, "f": sys.dim_m, "h": sys.dim_q}
        for name, dim in dims.items():
            arr = getattr(self, name)
            if arr is not None and np.shape(arr) != (len(grid), dim):
                raise ValueError(
                    f"forcing {name} has shape {np.shape(arr)}, expected {(len(grid), dim)}"
                )

    def values(self, name: str, n_nodes: int, dim: int) -> np.ndarray:
        arr = getattr(self, name)
        return np.zeros((n_nodes, dim)) if arr is None else np.asarray(arr, dtype=float)

    def derivative(self, name: str, grid: TimeGrid, dim: int) -> np.ndarray:
        """Nodal time derivative (second-order finite differences)."""
        arr = getattr(self, name)
        if arr is None:
            return np.zeros((len(grid), dim))
        if len(grid) < 3:
            return np.gradient(np.asarray(arr, float), grid.nodes, axis=0, edge_order=1)
        return np.gradient(np.asarray(arr, float), grid.nodes, axis=0, edge_order=2)


@dataclass(frozen=True)
class State:
    t: float
    p: np.ndarray
    m: np.ndarray
    lam: np.ndarray


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Coefficient vectors at every grid node (one row per node).

    ``stage_lam`` optionally holds the multiplier of each time step as
    computed inside the saddle-point solve (one row per step).
    """

    grid: TimeGrid
    p: np.ndarray
    m: np.ndarray
    lam: np.ndarray
    stage_lam: np.ndarray | None = None

    def __post_init__(self):
        n = len(self.grid)
        for name in ("p", "m", "lam"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.ndim != 2 or arr.shape[0] != n:
                raise ValueError(f"trajectory field {name} must have {n} rows")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.grid)

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    def state(self, i: int) -> State:
        return State(float(self.grid.nodes[i]), self.p[i], self.m[i], self.lam[i])

    def states(self) -> Iterator[State]:
        for i in range(len(self)):
            yield self.state(i)

    def final(self) -> State:
        return self.state(len(self) - 1)


def zero_trajectory(sys: DiscretePdae, grid: TimeGrid) -> Trajectory:
    n = len(grid)
    return Trajectory(grid, np.zeros((n, sys.dim_p)), np.zeros((n, sys.dim_m)), np.zeros((n, sys.dim_q)))


def assemble_schur(sys: DiscretePdae) -> np.ndarray:
    """Return ``L = K^T D^{-1} K``."""
    L = sys.K_mat.T @ sys.solve_D(sys.K_mat)
    if _is_symmetric(sys.D_mat):
        L = _symmetric_part(L)
    return L


class ScaledLU:
    """LU factorization of a row-equilibrated matrix.

    Rows are scaled to unit max-norm before factoring, so the pivot test
    for singularity does not depend on how the blocks of a saddle system
    are weighted (e.g. ``G_H / dt`` against the constraint rows).
    """

    def __init__(self, mat: np.ndarray, message: str = "singular system"):
        mat = np.asarray(mat, float)
        row_max = np.abs(mat).max(axis=1)
        if not np.all(np.isfinite(row_max)) or np.any(row_max == 0):
            raise SingularSystemError(message)
        self._scale = 1.0 / row_max
        try:
            with warnings.catch_warnings():
                # exact zero pivots are reported below as SingularSystemError
                warnings.simplefilter("ignore", sla.LinAlgWarning)
                self._lu = sla.lu_factor(mat * self._scale[:, None], check_finite=True)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SingularSystemError(message) from exc
        pivots = np.abs(np.diag(self._lu[0]))
        if pivots.min() <= 1e-14 * pivots.max():
            raise SingularSystemError(message)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.asarray(rhs, float)
        scale = self._scale if rhs.ndim == 1 else self._scale[:, None]
        return sla.lu_solve(self._lu, rhs * scale)


def _solve_dense(mat, rhs, message):
    return ScaledLU(mat, message).solve(rhs)


def solve_auxiliary(sys: DiscretePdae, consts: OperatorConstants, g: np.ndarray):
    """Solve the shifted stationary saddle problem with right-hand side ``g``.

    Returns ``(p_bar, m_bar, lam_bar)`` with ``B p_bar = 0`` and
    ``m_bar = -D^{-1} K p_bar``.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (sys.dim_p,):
        raise ValueError(f"g must have length {sys.dim_p}")
    dp, dq = sys.dim_p, sys.dim_q
    top = sys.L_mat + sys.A_mat + consts.C_A * sys.G_H
    mat = np.block([[top, sys.B_mat.T], [sys.B_mat, np.zeros((dq, dq))]])
    rhs = np.concatenate([g, np.zeros(dq)])
    sol = _solve_dense(mat, rhs, "auxiliary problem not solvable (inf-sup violated)")
    p_bar, lam_bar = sol[:dp], sol[dp:]
    m_bar = -sys.solve_D(sys.K_mat @ p_bar)
    return p_bar, m_bar, lam_bar


def recover_multiplier(sys: DiscretePdae, residual: np.ndarray) -> np.ndarray:
    """Multiplier from a momentum residual given in dual coordinates.

    ``lam = (B G_H^{-1} B^T)^{-1} B G_H^{-1} residual``.  Accepts one
    residual or a stack of them (one per row).
    """
    residual = np.asarray(residual, dtype=float)
    if residual.shape[-1] != sys.dim_p:
        raise ValueError(f"residual must have trailing dimension {sys.dim_p}")
    flat = residual.reshape(-1, sys.dim_p).T
    lam = sla.cho_solve(sys.chol_S, sys.B_mat @ sys.solve_H(flat))
    return lam.T.reshape(residual.shape[:-1] + (sys.dim_q,))


def consistency_defect(sys: DiscretePdae, init: State, forcing: Forcing | None = None) -> float:
    """Dual M-norm of ``f(0) - K p(0) - D m(0)``."""
    f0 = np.zeros(sys.dim_m) if forcing is None or forcing.f is None else np.asarray(forcing.f[0], float)
    p0 = np.asarray(init.p, float)
    m0 = np.asarray(init.m, float)
    if p0.shape != (sys.dim_p,) or m0.shape != (sys.dim_m,):
        raise ValueError("state dimensions do not match the system")
    return sys.dual_norm_M(f0 - sys.K_mat @ p0 - sys.D_mat @ m0)


def _check_consistent(sys, p0, h0, tol):
    defect = np.abs(sys.B_mat @ p0 - h0).max(initial=0.0)
    if defect > tol:
        raise InconsistentInitialValue(f"inconsistent initial value: |B p(0) - h(0)| = {defect:.3e}")


class _StepCache:
    """Per-step-size factorizations of a linear midpoint step."""

    def __init__(self, build):
        self._build = build
        self._cache = {}

    def __call__(self, h: float):
        key = float(h)
        if key not in self._cache:
            self._cache[key] = self._build(key)
        return self._cache[key]


def node_multipliers(sys: DiscretePdae, residual: np.ndarray, h_dot: np.ndarray) -> np.ndarray:
    """Multipliers at nodes from momentum residuals and the constraint rate ``h'``."""
    lam = recover_multiplier(sys, residual)
    if np.any(h_dot):
        lam = lam - sla.cho_solve(sys.chol_S, h_dot.T).T
    return lam


def solve_eps_system(
    sys: DiscretePdae,
    init: State,
    eps: float,
    grid: TimeGrid,
    forcing: Forcing | None = None,
    constraint_tol: float = 1e-9,
) -> Trajectory:
    """Integrate the eps-system with the implicit midpoint rule.

    Each step solves one saddle-point system for the new ``(p, m)`` and the
    step multiplier, with ``B p = h`` imposed at the new node.  Nodal
    multipliers are recovered from the momentum equation afterwards.
    """
    if not eps > 0:
        raise ValueError("use solve_limit_system for eps = 0")
    forcing = forcing or Forcing.zero()
    forcing.check(sys, grid)
    n = len(grid)
    dp, dm, dq = sys.dim_p, sys.dim_m, sys.dim_q
    g = forcing.values("g", n, dp)
    f = forcing.values("f", n, dm)
    h = forcing.values("h", n, dq)
    p0 = np.asarray(init.p, float)
    m0 = np.asarray(init.m, float)
    _check_consistent(sys, p0, h[0], constraint_tol)

    GH, GM, A, K, D, B = sys.G_H, sys.G_M, sys.A_mat, sys.K_mat, sys.D_mat, sys.B_mat

    def build(step):
        lhs = np.block([
            [GH / step + 0.5 * A, -0.5 * K.T, B.T],
            [0.5 * K, eps * GM / step + 0.5 * D, np.zeros((dm, dq))],
            [B, np.zeros((dq, dm)), np.zeros((dq, dq))],
        ])
        rhs_state = np.block([
            [GH / step - 0.5 * A, 0.5 * K.T],
            [-0.5 * K, eps * GM / step - 0.5 * D],
            [np.zeros((dq, dp)), np.zeros((dq, dm))],
        ])
        lu = ScaledLU(lhs, "midpoint saddle system is singular")
        return lu, lu.solve(rhs_state)

    steps = _StepCache(build)
    forced = forcing.kind != "zero"
    P = np.empty((n, dp))
    M = np.empty((n, dm))
    stage = np.empty((n - 1, dq))
    P[0], M[0] = p0, m0
    y = np.concatenate([p0, m0])
    for i, step in enumerate(grid.steps):
        lu, prop = steps(step)
        x = prop @ y
        if forced:
            b = np.concatenate([0.5 * (g[i] + g[i + 1]), 0.5 * (f[i] + f[i + 1]), h[i + 1]])
            x += lu.solve(b)
        y = x[: dp + dm]
        P[i + 1], M[i + 1] = x[:dp], x[dp:dp + dm]
        stage[i] = x[dp + dm:]

    residual = g - P @ A.T + M @ K
    lam = node_multipliers(sys, residual, forcing.derivative("h", grid, dq))
    return Trajectory(grid, P, M, lam, stage_lam=stage)


def saddle_residuals(
    sys: DiscretePdae, traj: Trajectory, eps: float, forcing: Forcing | None = None
) -> np.ndarray:
    """Relative residual of every midpoint step of an eps-system trajectory."""
    if traj.stage_lam is None:
        raise ValueError("trajectory carries no step multipliers")
    forcing = forcing or Forcing.zero()
    n = len(traj)
    g = forcing.values("g", n, sys.dim_p)
    f = forcing.values("f", n, sys.dim_m)
    h = forcing.values("h", n, sys.dim_q)
    steps = traj.grid.steps[:, None]
    P, M, lam = traj.p, traj.m, traj.stage_lam
    pm = 0.5 * (P[1:] + P[:-1])
    mm = 0.5 * (M[1:] + M[:-1])
    r1 = (P[1:] - P[:-1]) @ sys.G_H.T / steps + pm @ sys.A_mat.T - mm @ sys.K_mat + lam @ sys.B_mat \
        - 0.5 * (g[1:] + g[:-1])
    r2 = eps * (M[1:] - M[:-1]) @ sys.G_M.T / steps + pm @ sys.K_mat.T + mm @ sys.D_mat.T \
        - 0.5 * (f[1:] + f[:-1])
    r3 = P[1:] @ sys.B_mat.T - h[1:]
    res = np.sqrt((r1 ** 2).sum(1) + (r2 ** 2).sum(1) + (r3 ** 2).sum(1))
    scale = np.sqrt(
        ((P[1:] @ sys.G_H.T / steps) ** 2).sum(1)
        + ((eps * M[1:] @ sys.G_M.T / steps) ** 2).sum(1)
        + (lam ** 2).sum(1)
    ) + 1e-300
    return res / scale


@dataclass(frozen=True)
class EnergyReport:
    lhs: np.ndarray
    rhs: np.ndarray
    satisfied: bool


def check_energy_estimate(
    traj: Trajectory,
    consts: OperatorConstants,
    eps: float,
    init: State,
    sys: DiscretePdae,
    constant: float = 1.0,
) -> EnergyReport:
    """Compare both sides of the a-priori energy bound along a trajectory.

    ``lhs(t) = |p(t)|_H^2 + eps |m(t)|_M^2 + c_D int_0^t |m|_M^2`` against
    ``rhs(t) = C exp((1 + 2 C_A) t) (|p(0)|_H^2 + eps |m(0)|_M^2)`` for
    unforced trajectories.
    """
    if constant < 1:
        raise ValueError("the estimate constant must be >= 1")
    t = traj.t
    pH = np.einsum("ij,jk,ik->i", traj.p, sys.G_H, traj.p)
    mM = np.einsum("ij,jk,ik->i", traj.m, sys.G_M, traj.m)
    running = np.concatenate([[0.0], np.cumsum(0.5 * (mM[1:] + mM[:-1]) * np.diff(t))])
    lhs = pH + eps * mM + consts.c_D * running
    p0, m0 = np.asarray(init.p, float), np.asarray(init.m, float)
    e0 = p0 @ sys.G_H @ p0 + eps * (m0 @ sys.G_M @ m0)
    rhs = constant * np.exp((1 + 2 * consts.C_A) * t) * e0
    slack = 1e-12 * max(e0, 1e-300)
    return EnergyReport(lhs=lhs, rhs=rhs, satisfied=bool(np.all(lhs <= rhs + slack)))
