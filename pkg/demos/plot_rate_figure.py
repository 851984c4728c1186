"""
Reproducing a rate figure
=========================

``figure_preset`` bundles the initial data and measures of one of the
rate plots.  The result can be written to CSV and to a small SVG plot;
the ``hyperpdae figure`` command does the same from the shell.
"""

from pathlib import Path

from hyperpdae import estimate_rates, figure_preset, run_sweep
from hyperpdae.io import write_errors_csv, write_rate_plot_svg, write_rates_csv

out = Path("demo_output")
out.mkdir(exist_ok=True)

config = figure_preset(2)
errors = run_sweep(config)
rates = estimate_rates(errors)

write_errors_csv(errors, out / "fig2_errors.csv")
write_rates_csv(rates, out / "fig2_rates.csv")
write_rate_plot_svg(rates, out / "fig2_rates.svg", title="Estimated eps-orders, Data42")

for measure in config.measures:
    ns, alpha = rates.series(measure)
    print(f"{measure.value:12s} n=1: {alpha[0]:.4f}  n={ns[-1]}: {alpha[-1]:.4f}")
print("written to", out.resolve())
