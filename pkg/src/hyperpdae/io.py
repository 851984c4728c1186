"""CSV and SVG output for error tables, rate tables and trajectories."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .core import Trajectory
from .metrics import ErrorTable, Measure
from .sweep import RateRow, RateTable

ERRORS_HEADER = ("n", "epsilon", "measure", "value")
RATES_HEADER = ("n", "measure", "alpha")
TRAJECTORY_HEADER = ("t", "variable", "index", "value")


def _fmt(x: float) -> str:
    # repr gives the shortest string that round-trips
    return repr(float(x))


def _open_for_write(path):
    path = Path(path)
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _write_rows(path, header, rows) -> None:
    with _open_for_write(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _read_rows(path, header):
    path = Path(path)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not rows or tuple(rows[0]) != header:
        raise ValueError(f"{path}: expected header {','.join(header)}")
    return rows[1:]


def write_errors_csv(table: ErrorTable, path) -> None:
    _write_rows(path, ERRORS_HEADER,
                ((r.n, _fmt(r.eps), r.measure.value, _fmt(r.value)) for r in table))


def read_errors_csv(path) -> ErrorTable:
    table = ErrorTable()
    for n, eps, measure, value in _read_rows(path, ERRORS_HEADER):
        table.add(int(n), float(eps), Measure.parse(measure), float(value))
    return table


def write_rates_csv(table: RateTable, path) -> None:
    _write_rows(path, RATES_HEADER, ((r.n, r.measure.value, _fmt(r.alpha)) for r in table))


def read_rates_csv(path) -> RateTable:
    rows = [RateRow(int(n), Measure.parse(m), float(a)) for n, m, a in _read_rows(path, RATES_HEADER)]
    return RateTable(rows)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    def rows():
        for i, t in enumerate(traj.t):
            for name, arr in (("p", traj.p), ("m", traj.m), ("lambda", traj.lam)):
                for j, v in enumerate(arr[i]):
                    yield _fmt(t), name, j, _fmt(v)

    _write_rows(path, TRAJECTORY_HEADER, rows())


def read_trajectory_csv(path) -> dict[str, np.ndarray]:
    """Return ``{"t": nodes, "p": ..., "m": ..., "lambda": ...}`` arrays."""
    data: dict[str, dict[float, dict[int, float]]] = {"p": {}, "m": {}, "lambda": {}}
    times: list[float] = []
    for t, name, idx, value in _read_rows(path, TRAJECTORY_HEADER):
        t = float(t)
        if not times or times[-1] != t:
            times.append(t)
        data[name].setdefault(t, {})[int(idx)] = float(value)
    out = {"t": np.array(times)}
    for name, per_t in data.items():
        width = max((len(v) for v in per_t.values()), default=0)
        out[name] = np.array([[per_t.get(t, {}).get(j, 0.0) for j in range(width)] for t in times])
    return out


_COLORS = ("#0072bd", "#d95319", "#edb120", "#7e2f8e", "#77ac30", "#4dbeee", "#a2142f", "#333333")


def write_rate_plot_svg(table: RateTable, path, title: str | None = None) -> None:
    """Plot alpha against log2(n), one polyline per measure (SVG 1.1, 960x480)."""
    if len(table) == 0:
        raise ValueError("cannot plot an empty rate table")
    width, height = 960, 480
    left, right, top, bottom = 70, 250, 40, 60
    pw, ph = width - left - right, height - top - bottom

    xs = [math.log2(r.n) for r in table]
    ys = [r.alpha for r in table]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1, x_hi + 1
    y_lo = min(0.0, math.floor(min(ys) * 4) / 4)
    y_hi = max(y_lo + 0.25, math.ceil(max(ys) * 4) / 4 + 0.25)

    def sx(v):
        return left + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return top + (y_hi - v) / (y_hi - y_lo) * ph

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{left + pw / 2:.1f}" y="24" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="16">{escape(title)}</text>')
    for k in range(int(math.floor(x_lo)), int(math.ceil(x_hi)) + 1):
        x = sx(k)
        parts.append(f'<line x1="{x:.1f}" y1="{top + ph}" x2="{x:.1f}" y2="{top + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.1f}" y="{top + ph + 20}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="12">{2 ** k}</text>')
    n_ticks = int(round((y_hi - y_lo) / 0.25))
    for i in range(n_ticks + 1):
        v = y_lo + 0.25 * i
        y = sy(v)
        parts.append(f'<line x1="{left}" y1="{y:.1f}" x2="{left + pw}" y2="{y:.1f}" stroke="#dddddd"/>')
        parts.append(f'<text x="{left - 8}" y="{y + 4:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="12">{v:.2f}</text>')
    parts.append(f'<text x="{left + pw / 2:.1f}" y="{height - 15}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="14">n (log2 scale)</text>')
    parts.append(f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
                 f'font-size="14" transform="rotate(-90 18 {top + ph / 2:.1f})">alpha</text>')

    for i, measure in enumerate(table.measures()):
        color = _COLORS[i % len(_COLORS)]
        ns, alphas = table.series(measure)
        pts = " ".join(f"{sx(math.log2(n)):.2f},{sy(a):.2f}" for n, a in zip(ns, alphas))
        parts.append(f'<g id="{measure.value}">')
        if len(ns) > 1:
            parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        for n, a in zip(ns, alphas):
            parts.append(f'<circle cx="{sx(math.log2(n)):.2f}" cy="{sy(a):.2f}" r="3" fill="{color}"/>')
        parts.append("</g>")
        ly = top + 15 + 20 * i
        lx = left + pw + 15
        parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 32}" y="{ly + 4}" font-family="sans-serif" font-size="12">'
                     f'{escape(measure.value)}</text>')
    parts.append("</svg>")
    with _open_for_write(path) as fh:
        fh.write("\n".join(parts) + "\n")
