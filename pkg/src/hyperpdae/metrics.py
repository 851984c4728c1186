"""Space-time (Bochner) error measures between trajectories."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .core import DiscretePdae, TimeGrid, Trajectory, recover_multiplier


class Measure(enum.Enum):
    """Error measures; the value is the serialized id.

    Each member carries ``(variable, spatial norm, temporal norm,
    sqrt(eps) weight, uses the hat reference)``.
    """

    P_LinfL2 = "p_linf_l2"
    P_L2H1 = "p_l2_h1"
    M_L2L2 = "m_l2_l2"
    M_LinfL2_sqrtEps = "m_sqrteps_linf_l2"
    Lambda_L2 = "lambda_l2"
    Phat_LinfL2 = "phat_linf_l2"
    Phat_L2H1 = "phat_l2_h1"
    Mhat_L2L2 = "mhat_l2_l2"

    @property
    def variable(self) -> str:
        return {"p": "p", "m": "m", "l": "lam"}[self.value[0]]

    @property
    def space(self) -> str | None:
        if self.variable == "lam":
            return None
        return "P" if self.value.endswith("h1") else ("H" if self.variable == "p" else "M")

    @property
    def time(self) -> str:
        return "linf" if "linf" in self.value else "l2"

    @property
    def sqrt_eps(self) -> bool:
        return "sqrteps" in self.value

    @property
    def hat(self) -> bool:
        return "hat" in self.value

    @property
    def label(self) -> str:
        var = {"p": "p", "m": "m", "lam": "lambda"}[self.variable]
        ref = "hat" if self.hat else "0"
        w = "sqrt(eps) " if self.sqrt_eps else ""
        norm = {"linf": "Linf", "l2": "L2"}[self.time]
        sp = {"H": "L2", "M": "L2", "P": "H1", None: "R2"}[self.space]
        return f"{w}({var} - {var}_{ref}) in {norm}({sp})"

    @classmethod
    def parse(cls, text: str) -> "Measure":
        try:
            return cls(text.strip())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown measure {text!r}; valid measures: {valid}") from None


def _gram(sys: DiscretePdae, space: str | None):
    return {"H": sys.G_H, "P": sys.G_P, "M": sys.G_M, None: None}[space]


def _squared_norms(diff: np.ndarray, gram: np.ndarray | None) -> np.ndarray:
    diff = np.atleast_2d(np.asarray(diff, float))
    if gram is None:
        return np.einsum("ij,ij->i", diff, diff)
    return np.maximum(np.einsum("ij,ij->i", diff @ gram, diff), 0.0)


def time_norm(sq: np.ndarray, time: str, grid: TimeGrid | None = None) -> float:
    """Temporal norm of nodal squared spatial norms ``sq``.

    ``time="linf"`` takes the largest node, ``"l2"`` the trapezoidal
    integral over ``grid``.
    """
    sq = np.asarray(sq, float)
    if time == "linf":
        return float(np.sqrt(sq.max(initial=0.0)))
    if sq.size != len(grid):
        raise ValueError("difference and grid have different lengths")
    return float(np.sqrt(np.sum(0.5 * (sq[1:] + sq[:-1]) * grid.steps)))


def bochner_linf(diff: np.ndarray, gram: np.ndarray | None = None) -> float:
    """Largest nodal norm ``max_i sqrt(v_i^T G v_i)``; rows are nodes."""
    return time_norm(_squared_norms(diff, gram), "linf")


def bochner_l2(diff: np.ndarray, gram: np.ndarray | None, grid: TimeGrid) -> float:
    """Trapezoidal ``sqrt(int_0^T v^T G v dt)``."""
    return time_norm(_squared_norms(diff, gram), "l2", grid)


def lambda_difference(sys: DiscretePdae, traj: Trajectory, ref: Trajectory) -> np.ndarray:
    """``lam - lam_ref`` from the flow and potential differences alone.

    For equal right-hand sides the momentum equations differ by
    ``K^T dm - A dp``; the multiplier difference is its constrained
    projection.
    """
    resid = (traj.m - ref.m) @ sys.K_mat - (traj.p - ref.p) @ sys.A_mat.T
    return recover_multiplier(sys, resid)


class ErrorReport(dict):
    """Measure -> value, plus the gap between the two multiplier error paths."""

    lambda_gap: float = 0.0


def error_report(
    traj_eps: Trajectory,
    traj_ref: Trajectory,
    eps: float,
    measures: Iterable[Measure],
    sys: DiscretePdae,
    hat: Trajectory | None = None,
) -> ErrorReport:
    """Evaluate the requested measures of ``traj_eps`` against the references.

    Plain measures compare with ``traj_ref`` (the limit solution), hat
    measures with ``hat``.  The multiplier error is computed from the flow
    difference (canonical value) and from the stored nodal multipliers;
    their gap is kept in ``lambda_gap``.
    """
    grid = traj_eps.grid
    if not grid.same_as(traj_ref.grid):
        raise ValueError("trajectories live on different grids")
    report = ErrorReport()
    for measure in measures:
        if measure.hat:
            if hat is None:
                raise ValueError(f"measure {measure.value} requires a hat reference")
            if not grid.same_as(hat.grid):
                raise ValueError("hat reference lives on a different grid")
            ref = hat
        else:
            ref = traj_ref
        if measure.variable == "lam":
            canonical = lambda_difference(sys, traj_eps, ref)
            direct = traj_eps.lam - ref.lam
            value = bochner_l2(canonical, None, grid)
            report.lambda_gap = abs(value - bochner_l2(direct, None, grid))
        else:
            diff = getattr(traj_eps, measure.variable) - getattr(ref, measure.variable)
            gram = _gram(sys, measure.space)
            if measure.time == "linf":
                value = bochner_linf(diff, gram)
            else:
                value = bochner_l2(diff, gram, grid)
            if measure.sqrt_eps:
                value *= math.sqrt(eps)
        report[measure] = value
    return report


@dataclass(frozen=True)
class ErrorRow:
    n: int
    eps: float
    measure: Measure
    value: float


@dataclass
class ErrorTable:
    """Error values keyed by ``(n, eps, measure)`` in insertion order."""

    rows: list[ErrorRow] = field(default_factory=list)

    def __post_init__(self):
        rows, self.rows, self._keys = list(self.rows), [], set()
        for row in rows:
            self.add(row.n, row.eps, row.measure, row.value)

    def add(self, n: int, eps: float, measure: Measure, value: float) -> None:
        key = (int(n), float(eps), measure)
        if key in self._keys:
            raise ValueError(f"duplicate error entry {key}")
        value = float(value)
        if not (math.isfinite(value) and value >= 0):
            raise ValueError(f"error values must be finite and nonnegative, got {value}")
        self._keys.add(key)
        self.rows.append(ErrorRow(*key, value))

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, ErrorTable) and self.rows == other.rows

    def groups(self) -> dict[tuple[int, Measure], list[ErrorRow]]:
        """Rows per ``(n, measure)``, sorted by decreasing eps."""
        out: dict[tuple[int, Measure], list[ErrorRow]] = {}
        for row in self.rows:
            out.setdefault((row.n, row.measure), []).append(row)
        return {k: sorted(v, key=lambda r: -r.eps) for k, v in out.items()}

    def series(self, n: int, measure: Measure) -> tuple[np.ndarray, np.ndarray]:
        rows = self.groups().get((n, measure), [])
        return np.array([r.eps for r in rows]), np.array([r.value for r in rows])
