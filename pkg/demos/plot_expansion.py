"""
First-order expansion in eps
============================

With consistent and smooth data the limit solution approximates the
hyperbolic one to first order, and adding the correction term
``p0 + eps p1`` gains close to another order.
"""

import numpy as np

from hyperpdae import SweepConfig, estimate_rates, run_sweep
from hyperpdae.metrics import Measure
from hyperpdae.pipe import InitialDataPreset

config = SweepConfig(
    n_list=(1, 8, 64),
    j_max=20,
    preset=InitialDataPreset.DATA45,
    measures=(Measure.P_LinfL2, Measure.Phat_LinfL2, Measure.Mhat_L2L2),
)
errors = run_sweep(config)
rates = estimate_rates(errors)

for measure in config.measures:
    ns, alpha = rates.series(measure)
    print(f"{measure.value:14s}", "  ".join(f"n={n}: {a:.3f}" for n, a in zip(ns, alpha)))

###############################################################################
# Raw errors for the finest discretization.
eps, err = errors.series(64, Measure.Phat_LinfL2)
for e, v in zip(eps[::4], err[::4]):
    print(f"eps={e:.3e}  |p - phat| = {v:.3e}")
