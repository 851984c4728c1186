import numpy as np
import pytest

from hyperpdae.core import DiscretePdae
from hyperpdae.pipe import build_pipe_system

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def pipe():
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = build_pipe_system(n)
        return cache[n]

    return get


def _spd(rng, n, shift=1.0):
    X = rng.standard_normal((n, n))
    return X @ X.T / n + shift * np.eye(n)


def random_system(seed=0, dim_p=7, dim_m=5, dim_q=2, with_A=True):
    """Small generic system satisfying all structural assumptions."""
    rng = np.random.default_rng(seed)
    G_H = _spd(rng, dim_p)
    G_P = G_H + _spd(rng, dim_p, shift=0.5)
    G_M = _spd(rng, dim_m)
    skew = rng.standard_normal((dim_m, dim_m))
    D = _spd(rng, dim_m) + 0.3 * (skew - skew.T)
    A = 0.3 * rng.standard_normal((dim_p, dim_p)) if with_A else np.zeros((dim_p, dim_p))
    return DiscretePdae(
        G_H=G_H, G_P=G_P, G_M=G_M, A_mat=A,
        K_mat=rng.standard_normal((dim_m, dim_p)),
        D_mat=D, B_mat=rng.standard_normal((dim_q, dim_p)),
    )


@pytest.fixture
def generic_system():
    return random_system()


@pytest.fixture(scope="session")
def figure_run():
    """Cached desk-scale ``(errors, rates)`` for a figure preset."""
    from hyperpdae.sweep import estimate_rates, figure_preset, run_sweep

    cache = {}

    def get(fig_id):
        if fig_id not in cache:
            errors = run_sweep(figure_preset(fig_id))
            cache[fig_id] = errors, estimate_rates(errors)
        return cache[fig_id]

    return get
