"""eps sweeps on the pipe model and median-slope rate estimates."""
from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import PdaeError, State, TimeGrid, solve_eps_system
from .expansion import (
    exact_correction_coefficients,
    exact_mode_coefficients,
    hat_solution,
    solve_correction_system,
    solve_limit_system,
)
from .metrics import ErrorTable, Measure, error_report, time_norm
from .pipe import InitialDataPreset, build_pipe_system, initial_data, mode_weights, multiplier_map

log = logging.getLogger(__name__)

DESK_N_LIST = (1, 2, 4, 8, 16, 32, 64, 128, 256)
FULL_N_LIST = tuple(2 ** i for i in range(15))


class Integrator(enum.Enum):
    EXACT = "exact"
    MIDPOINT = "midpoint"


class InsufficientDataError(ValueError):
    pass


def epsilon_grid(j_max: int) -> np.ndarray:
    """``eps_j = 1 / (8 sqrt(2^j))`` for ``j = 1..j_max``."""
    if j_max < 1:
        raise ValueError("j_max must be at least 1")
    j = np.arange(1, j_max + 1)
    return 2.0 ** (-3.0 - j / 2.0)


@dataclass(frozen=True)
class SweepConfig:
    """One eps sweep over several discretization sizes.

    ``grid`` selects the time grid: ``"graded"`` refines dyadically towards
    t = 0 down to ``layer_fraction * min(eps)`` so that initial layers are
    resolved for every eps; ``"uniform"`` uses ``n_steps`` equal steps.
    """

    n_list: tuple[int, ...] = DESK_N_LIST
    j_max: int = 30
    preset: InitialDataPreset = InitialDataPreset.DATA42
    measures: tuple[Measure, ...] = (Measure.P_LinfL2,)
    t_end: float = 1.0
    n_steps: int = 2000
    integrator: Integrator = Integrator.EXACT
    grid: str = "graded"
    per_level: int = 32
    layer_fraction: float = 1e-3
    threads: int = 1

    def __post_init__(self):
        n_list = tuple(int(n) for n in self.n_list)
        if not n_list or any(n < 1 for n in n_list) or list(n_list) != sorted(set(n_list)):
            raise ValueError("n_list must be a nonempty strictly ascending list of positive integers")
        if self.j_max < 2:
            raise ValueError("j_max must be at least 2")
        if self.t_end <= 0 or self.n_steps < 1:
            raise ValueError("t_end and n_steps must be positive")
        if self.grid not in ("graded", "uniform"):
            raise ValueError("grid must be 'graded' or 'uniform'")
        object.__setattr__(self, "n_list", n_list)
        object.__setattr__(self, "measures", tuple(dict.fromkeys(self.measures)))
        object.__setattr__(self, "preset", InitialDataPreset(self.preset))
        object.__setattr__(self, "integrator", Integrator(self.integrator))

    @property
    def epsilons(self) -> np.ndarray:
        return epsilon_grid(self.j_max)

    def time_grid(self) -> TimeGrid:
        if self.grid == "uniform":
            return TimeGrid.uniform(self.t_end, self.n_steps)
        t_min = min(self.layer_fraction * self.epsilons[-1], 0.5 * self.t_end)
        return TimeGrid.graded(self.t_end, self.n_steps, t_min, self.per_level)


# nodes x modes per block of the exact sweep (16 MB of float64)
_BLOCK_ENTRIES = 1 << 21


def _annotate(n, eps, exc):
    return type(exc)(f"n={n}, eps={eps!r}: {exc}")


def _map(config, fn, items):
    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _exact_errors(config: SweepConfig, n: int, epsilons: list[float]) -> list[dict]:
    """Measures for the exact integrator, accumulated over blocks of modes.

    The pipe modes decouple, so nodal squared norms are sums over modes
    with the diagonal weights of ``mode_weights`` and the multiplier
    difference is ``dm @ multiplier_map(n)``.  Nothing of size
    ``n x n`` or ``len(grid) x n`` is formed, which keeps the full
    n = 16384 runs within memory.
    """
    p_init, m_init = initial_data(config.preset, n)
    grid = config.time_grid()
    t = grid.nodes
    measures = config.measures
    want_hat = any(m.hat for m in measures)
    weights = mode_weights(n)
    R = multiplier_map(n)
    acc = [{m: np.zeros((len(t), 2)) if m.variable == "lam" else np.zeros(len(t)) for m in measures}
           for _ in epsilons]

    def accumulate(store, P, M, refs, k):
        # k: 1-based sine indices of the block; cosine index 0 has no sine partner
        for measure in measures:
            ref_p, ref_m = refs["hat" if measure.hat else "lim"]
            if measure.variable == "p":
                d = P - ref_p
                store[measure] += (d * d) @ weights[measure.space][k - 1]
            else:
                d = M - ref_m
                if measure.variable == "m":
                    store[measure] += (d * d) @ weights["M"][k]
                else:
                    store[measure] += d @ R[k]

    # constant flux mode: eps m_0' = -m_0 decays and is zero in limit and correction
    if m_init[0] != 0:
        for i, eps in enumerate(epsilons):
            m0 = m_init[0] * np.exp(-t / eps)
            for measure in measures:
                if measure.variable == "m":
                    acc[i][measure] += weights["M"][0] * m0 ** 2
                elif measure.variable == "lam":
                    acc[i][measure] += np.outer(m0, R[0])

    block = max(1, _BLOCK_ENTRIES // len(t))
    for lo in range(1, n + 1, block):
        k = np.arange(lo, min(n, lo + block - 1) + 1)
        a = np.pi * k
        pk, mk = p_init[1 + k], m_init[k]
        P0, M0 = exact_mode_coefficients(a, 0.0, pk, mk, t)
        if want_hat:
            P1, M1 = exact_correction_coefficients(a, pk, t)

        def job(i):
            eps = epsilons[i]
            try:
                P, M = exact_mode_coefficients(a, eps, pk, mk, t)
                refs = {"lim": (P0, M0)}
                if want_hat:
                    refs["hat"] = (P0 + eps * P1, M0 + eps * M1)
                accumulate(acc[i], P, M, refs, k)
            except (ValueError, FloatingPointError) as exc:
                raise _annotate(n, eps, exc) from exc

        _map(config, job, range(len(epsilons)))

    reports = []
    for i, eps in enumerate(epsilons):
        report = {}
        for measure in measures:
            sq = acc[i][measure]
            if measure.variable == "lam":
                sq = np.einsum("ij,ij->i", sq, sq)
            value = time_norm(sq, measure.time, grid)
            report[measure] = value * math.sqrt(eps) if measure.sqrt_eps else value
        reports.append(report)
    return reports


def _midpoint_errors(config: SweepConfig, n: int, epsilons: list[float]) -> list[dict]:
    sys = build_pipe_system(n)
    p_init, m_init = initial_data(config.preset, n)
    grid = config.time_grid()
    want_hat = any(m.hat for m in config.measures)
    traj0 = solve_limit_system(sys, p_init, grid)
    traj1 = solve_correction_system(sys, traj0, grid) if want_hat else None
    init = State(0.0, p_init, m_init, np.zeros(2))

    def job(eps):
        try:
            traj = solve_eps_system(sys, init, eps, grid)
            hat = hat_solution(traj0, traj1, eps) if want_hat else None
            return error_report(traj, traj0, eps, config.measures, sys, hat=hat)
        except (PdaeError, ValueError, np.linalg.LinAlgError) as exc:
            raise _annotate(n, eps, exc) from exc

    return _map(config, job, epsilons)


def _sweep_one_n(config: SweepConfig, n: int, table_rows: list):
    epsilons = [float(e) for e in config.epsilons]
    if config.integrator is Integrator.EXACT:
        reports = _exact_errors(config, n, epsilons)
    else:
        reports = _midpoint_errors(config, n, epsilons)
    for eps, report in zip(epsilons, reports):
        for measure in config.measures:
            table_rows.append((n, eps, measure, report[measure]))
    log.info("n=%d done (%d eps values)", n, len(epsilons))


def run_sweep(config: SweepConfig) -> ErrorTable:
    """Error table ordered by n, then by decreasing eps, then by measure."""
    table = ErrorTable()
    if not config.measures:
        return table
    rows: list = []
    for n in config.n_list:
        _sweep_one_n(config, n, rows)
    for row in rows:
        table.add(*row)
    return table


@dataclass(frozen=True)
class RateRow:
    n: int
    measure: Measure
    alpha: float
    slopes: tuple[float, ...] = ()
    excluded: tuple[float, ...] = field(default=(), compare=False)


@dataclass
class RateTable:
    rows: list[RateRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def get(self, n: int, measure: Measure) -> RateRow:
        for row in self.rows:
            if row.n == n and row.measure is measure:
                return row
        raise KeyError((n, measure))

    def alpha(self, n: int, measure: Measure) -> float:
        return self.get(n, measure).alpha

    def measures(self) -> list[Measure]:
        return list(dict.fromkeys(r.measure for r in self.rows))

    def series(self, measure: Measure) -> tuple[np.ndarray, np.ndarray]:
        rows = sorted((r for r in self.rows if r.measure is measure), key=lambda r: r.n)
        return np.array([r.n for r in rows]), np.array([r.alpha for r in rows])


def median_slope(eps: np.ndarray, err: np.ndarray) -> tuple[float, np.ndarray]:
    """Median of the log-log slopes between successive points."""
    slopes = np.diff(np.log(err)) / np.diff(np.log(eps))
    return float(np.median(slopes)), slopes


def estimate_rates(errors: ErrorTable) -> RateTable:
    """Fit ``err = C eps^alpha`` per ``(n, measure)`` by the median slope.

    Points with a zero error are excluded (and listed in
    ``RateRow.excluded``); slopes are taken between the remaining
    successive points.
    """
    out = RateTable()
    for (n, measure), rows in errors.groups().items():
        eps = np.array([r.eps for r in rows])
        err = np.array([r.value for r in rows])
        keep = err > 0
        if keep.sum() < 3:
            raise InsufficientDataError(
                f"insufficient data for rate estimate (n={n}, measure={measure.value})"
            )
        if not keep.all():
            log.warning("n=%d %s: excluding %d nonpositive errors", n, measure.value, (~keep).sum())
        alpha, slopes = median_slope(eps[keep], err[keep])
        out.rows.append(
            RateRow(n, measure, alpha, tuple(float(s) for s in slopes), tuple(float(e) for e in eps[~keep]))
        )
    return out


_FIGURES = {
    2: (InitialDataPreset.DATA42,
        (Measure.P_LinfL2, Measure.P_L2H1, Measure.M_L2L2, Measure.Lambda_L2)),
    3: (InitialDataPreset.DATA43,
        (Measure.P_LinfL2, Measure.M_LinfL2_sqrtEps, Measure.M_L2L2, Measure.Lambda_L2)),
    4: (InitialDataPreset.DATA44,
        (Measure.P_LinfL2, Measure.P_L2H1, Measure.M_LinfL2_sqrtEps, Measure.M_L2L2, Measure.Lambda_L2)),
    5: (InitialDataPreset.DATA45,
        (Measure.Phat_LinfL2, Measure.Phat_L2H1, Measure.Mhat_L2L2)),
}


def figure_preset(fig_id: int, full: bool = False) -> SweepConfig:
    """Sweep configuration for one of the four rate figures (ids 2-5).

    ``full=True`` uses n up to 16384 instead of the desk-scale 256.
    """
    if fig_id not in _FIGURES:
        raise ValueError(f"figure id must be one of {sorted(_FIGURES)}, got {fig_id!r}")
    preset, measures = _FIGURES[fig_id]
    return SweepConfig(
        n_list=FULL_N_LIST if full else DESK_N_LIST,
        j_max=30,
        preset=preset,
        measures=measures,
    )
