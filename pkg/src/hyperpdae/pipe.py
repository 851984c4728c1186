"""Single gas pipe on (0, 1) with an enriched spectral basis.

Pressure space: ``span{exp(-x), exp(x), sin(pi x), ..., sin(n pi x)}``.
Mass-flux space: ``span{1, cos(pi x), ..., cos(n pi x)}``.
The homogeneous Dirichlet condition on the pressure is imposed through the
trace constraint at both ends, so the multiplier space is R^2.
All matrix entries are closed-form integrals.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import DiscretePdae

E = np.e


@dataclass(frozen=True)
class PipeBasis:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")

    @property
    def dim_p(self) -> int:
        return self.n + 2

    @property
    def dim_m(self) -> int:
        return self.n + 1

    @property
    def dim_q(self) -> int:
        return 2

    @property
    def wavenumbers(self) -> np.ndarray:
        """``pi k`` for ``k = 1..n``."""
        return np.pi * np.arange(1, self.n + 1)


def build_pipe_system(n: int) -> DiscretePdae:
    """Discrete pipe system with ``A = 0`` and ``D = identity`` (tested in L^2)."""
    basis = PipeBasis(n)
    a = basis.wavenumbers
    alt = (-1.0) ** np.arange(1, n + 1)
    denom = 1.0 + a ** 2

    # L^2 Gram of {e^-x, e^x, sin}
    G_H = np.zeros((n + 2, n + 2))
    G_H[0, 0] = (1 - E ** -2) / 2
    G_H[1, 1] = (E ** 2 - 1) / 2
    G_H[0, 1] = G_H[1, 0] = 1.0
    G_H[0, 2:] = G_H[2:, 0] = a * (1 - alt / E) / denom
    G_H[1, 2:] = G_H[2:, 1] = a * (1 - alt * E) / denom
    G_H[2:, 2:] = 0.5 * np.eye(n)

    # Gram of the derivatives {-e^-x, e^x, pi k cos}
    G_d = np.zeros((n + 2, n + 2))
    G_d[0, 0] = (1 - E ** -2) / 2
    G_d[1, 1] = (E ** 2 - 1) / 2
    G_d[0, 1] = G_d[1, 0] = -1.0
    G_d[0, 2:] = G_d[2:, 0] = -a * (1 - alt / E) / denom
    G_d[1, 2:] = G_d[2:, 1] = a * (alt * E - 1) / denom
    G_d[2:, 2:] = np.diag(a ** 2 / 2)

    G_M = np.diag(np.concatenate([[1.0], np.full(n, 0.5)]))

    # K[i, j] = int (d/dx phi_j) psi_i
    K = np.zeros((n + 1, n + 2))
    K[0, 0] = 1 / E - 1
    K[0, 1] = E - 1
    K[1:, 0] = -(1 - alt / E) / denom
    K[1:, 1] = (alt * E - 1) / denom
    K[1:, 2:] = np.diag(a / 2)

    B = np.zeros((2, n + 2))
    B[0, :2] = 1.0, 1.0
    B[1, :2] = 1 / E, E

    return DiscretePdae(
        G_H=G_H,
        G_P=G_H + G_d,
        G_M=G_M,
        A_mat=np.zeros((n + 2, n + 2)),
        K_mat=K,
        D_mat=G_M.copy(),
        B_mat=B,
    )


def _cross_gram(n: int) -> np.ndarray:
    """``int e^{-/+x} sin(k pi x) dx``, shape ``(2, n)``."""
    a = PipeBasis(n).wavenumbers
    alt = (-1.0) ** np.arange(1, n + 1)
    return np.vstack([a * (1 - alt / E), a * (1 - alt * E)]) / (1.0 + a ** 2)


def mode_weights(n: int) -> dict[str, np.ndarray]:
    """Diagonal Gram weights on the pure modes.

    ``"H"`` and ``"P"`` weight the sine coefficients (L2 and full H1),
    ``"M"`` the cosine coefficients including the constant.  Exact for
    vectors whose exponential coefficients vanish.
    """
    a = PipeBasis(n).wavenumbers
    return {
        "H": np.full(n, 0.5),
        "P": 0.5 * (1.0 + a ** 2),
        "M": np.concatenate([[1.0], np.full(n, 0.5)]),
    }


def multiplier_map(n: int) -> np.ndarray:
    """Matrix ``R`` with ``R^T dm = (B G_H^{-1} B^T)^{-1} B G_H^{-1} K^T dm``.

    Shape ``(n + 1, 2)``.  ``G_H`` is an arrow matrix (a dense 2x2 block for
    the exponentials bordering ``I/2`` on the sines), so ``G_H^{-1} B^T`` is
    obtained by block elimination in O(n) without assembling the system.
    """
    C = _cross_gram(n)
    a = PipeBasis(n).wavenumbers
    alt = (-1.0) ** np.arange(1, n + 1)
    E_blk = np.array([[(1 - E ** -2) / 2, 1.0], [1.0, (E ** 2 - 1) / 2]])
    B_exp = np.array([[1.0, 1.0], [1 / E, E]])
    schur = E_blk - 2.0 * C @ C.T
    x_exp = np.linalg.solve(schur, B_exp.T)
    x_sin = -2.0 * C.T @ x_exp
    S = B_exp @ x_exp
    # K restricted to its nonzero pattern: two exponential columns and diag(a/2)
    K_exp = np.vstack([[1 / E - 1, E - 1], np.column_stack([-(1 - alt / E), alt * E - 1]) / (1.0 + a ** 2)[:, None]])
    KX = K_exp @ x_exp
    KX[1:] += 0.5 * a[:, None] * x_sin
    return np.linalg.solve(S, KX.T).T


def p_basis_functions(n: int) -> tuple[list[Callable], list[Callable]]:
    """Pressure basis functions and their derivatives, in coefficient order."""
    funcs = [lambda x: np.exp(-x), lambda x: np.exp(x)]
    ders = [lambda x: -np.exp(-x), lambda x: np.exp(x)]
    for k in range(1, n + 1):
        funcs.append(lambda x, k=k: np.sin(k * np.pi * x))
        ders.append(lambda x, k=k: k * np.pi * np.cos(k * np.pi * x))
    return funcs, ders


def m_basis_functions(n: int) -> list[Callable]:
    return [lambda x: np.ones_like(np.asarray(x, float))] + [
        (lambda x, k=k: np.cos(k * np.pi * x)) for k in range(1, n + 1)
    ]


def evaluate_p(coeffs: np.ndarray, x) -> np.ndarray:
    coeffs = np.asarray(coeffs, float)
    x = np.asarray(x, float)
    k = np.arange(1, coeffs.size - 1)
    out = coeffs[0] * np.exp(-x) + coeffs[1] * np.exp(x)
    return out + np.sin(np.pi * np.multiply.outer(x, k)) @ coeffs[2:]


def evaluate_m(coeffs: np.ndarray, x) -> np.ndarray:
    coeffs = np.asarray(coeffs, float)
    x = np.asarray(x, float)
    k = np.arange(0, coeffs.size)
    return np.cos(np.pi * np.multiply.outer(x, k)) @ coeffs


class InitialDataPreset(enum.Enum):
    """Fourier laws of the four initial-data families.

    ``p`` is a sine series and ``m`` a cosine series without constant term.
    DATA42 and DATA43 violate ``d/dx p(0) = -m(0)``; DATA44 and DATA45
    satisfy it mode by mode with increasing smoothness.
    """

    DATA42 = "data42"
    DATA43 = "data43"
    DATA44 = "data44"
    DATA45 = "data45"

    @classmethod
    def parse(cls, text: str) -> "InitialDataPreset":
        try:
            return cls(text.strip().lower())
        except ValueError:
            valid = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown preset {text!r}; valid presets: {valid}") from None

    def p_law(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, float)
        if self is InitialDataPreset.DATA42:
            return k ** -1.55
        if self is InitialDataPreset.DATA43:
            return np.zeros_like(k)
        if self is InitialDataPreset.DATA44:
            return k ** -2.55
        return k ** -3.55

    def m_law(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, float)
        with np.errstate(divide="ignore"):
            if self is InitialDataPreset.DATA42:
                vals = np.zeros_like(k)
            elif self is InitialDataPreset.DATA43:
                vals = np.pi * k ** -0.55
            elif self is InitialDataPreset.DATA44:
                vals = -np.pi * k ** -1.55
            else:
                vals = -np.pi * k ** -2.55
        return np.where(k >= 1, vals, 0.0)


def initial_data(preset: InitialDataPreset, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Series coefficients truncated at mode ``n``.

    The exponential coefficients are zero, so ``B p = 0`` holds exactly.
    """
    PipeBasis(n)
    k = np.arange(1, n + 1)
    p = np.concatenate([[0.0, 0.0], preset.p_law(k)])
    m = preset.m_law(np.arange(0, n + 1))
    return p, m


def trace_multiplier_reference(m: np.ndarray) -> tuple[float, float]:
    """End-point values ``(m(0), m(1))`` of a cosine series.

    For the saddle-point multiplier of the pipe, ``lam = (-m(0), m(1))``.
    """
    m = np.asarray(m, float)
    alt = (-1.0) ** np.arange(m.size)
    return float(m.sum()), float(alt @ m)
