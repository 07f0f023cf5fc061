"""CSV tables and static SVG plots of sweep results."""
from __future__ import annotations

import io
import os
from typing import Sequence, Union
from xml.sax.saxutils import escape

from .harness import SweepResult

CSV_HEADER = (
    "scenario",
    "L_km",
    "mean_fidelity",
    "sd_fidelity",
    "n_states",
    "mean_photons",
    "p_in_mw",
    "xi_per_km",
    "seed",
)

Destination = Union[str, os.PathLike, io.TextIOBase]


def fmt(x: float) -> str:
    """Nine significant digits, no trailing zeros."""
    s = f"{float(x):.9g}"
    return "0" if s == "-0" else s


def csv_text(results: Sequence[SweepResult]) -> str:
    if not results:
        raise ValueError("no results to write")
    rows = []
    for r in results:
        cfg = r.config
        ch = cfg.channel_template
        for L, m, sd in r.rows():
            rows.append(
                (
                    cfg.label,
                    L,
                    [
                        cfg.label,
                        fmt(L),
                        fmt(m),
                        fmt(sd),
                        str(r.n_states),
                        fmt(cfg.source.mean_photons),
                        fmt(ch.p_in_watts * 1000.0),
                        fmt(ch.xi_per_km),
                        str(cfg.master_seed),
                    ],
                )
            )
    rows.sort(key=lambda row: (row[0], row[1]))
    lines = [",".join(CSV_HEADER)] + [",".join(fields) for _, _, fields in rows]
    return "\n".join(lines) + "\n"


def _write(text: str, destination: Destination) -> None:
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_csv(results: Sequence[SweepResult], destination: Destination) -> None:
    """Write one row per (scenario, length), sorted by scenario label then length."""
    _write(csv_text(results), destination)


# plot geometry, in SVG user units
WIDTH, HEIGHT = 720, 460
LEFT, RIGHT, TOP, BOTTOM = 70, 190, 30, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")


def _n(v: float) -> str:
    return f"{v:.2f}"


def svg_text(results: Sequence[SweepResult], title: str = "Average fidelity vs fiber length") -> str:
    if not results:
        raise ValueError("no results to plot")
    x_max = max(max(r.lengths_km) for r in results)
    x_min = min(min(r.lengths_km) for r in results)
    if x_max == x_min:
        x_min, x_max = x_min - 1.0, x_max + 1.0
    pw = WIDTH - LEFT - RIGHT
    ph = HEIGHT - TOP - BOTTOM

    def sx(L):
        return LEFT + (L - x_min) / (x_max - x_min) * pw

    def sy(f):
        f = min(max(f, 0.0), 1.0)
        return TOP + (1.0 - f) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<title>{escape(title)}</title>',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for k in range(5):
        f = k / 4
        y = _n(sy(f))
        out.append(
            f'<line class="grid" x1="{LEFT}" y1="{y}" x2="{LEFT + pw}" y2="{y}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(f'<text x="{LEFT - 8}" y="{y}" text-anchor="end" dy="4">{f:.2f}</text>')
    for k in range(6):
        L = x_min + (x_max - x_min) * k / 5
        x = _n(sx(L))
        out.append(
            f'<text x="{x}" y="{TOP + ph + 18}" text-anchor="middle">{fmt(round(L, 6))}</text>'
        )
    out.append(
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>'
    )
    out.append(
        f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle">L (km)</text>'
    )
    out.append(
        f'<text x="18" y="{TOP + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {TOP + ph / 2:.2f})">average fidelity</text>'
    )

    for i, r in enumerate(results):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_n(sx(L))},{_n(sy(m))}" for L, m, _ in r.rows())
        out.append(f'<g class="series" stroke="{color}" fill="{color}">')
        out.append(f'<polyline points="{pts}" fill="none" stroke-width="1.5"/>')
        for L, m, sd in r.rows():
            x = _n(sx(L))
            out.append(
                f'<line class="errorbar" x1="{x}" y1="{_n(sy(m - sd))}" x2="{x}" '
                f'y2="{_n(sy(m + sd))}" stroke-width="1"/>'
            )
            out.append(f'<circle class="marker" cx="{x}" cy="{_n(sy(m))}" r="3"/>')
        out.append("</g>")
        ly = TOP + 10 + 20 * i
        lx = LEFT + pw + 15
        out.append(
            f'<line class="legend-swatch" x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{lx + 26}" y="{ly}" dy="4">{escape(r.config.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_plot(results: Sequence[SweepResult], destination: Destination) -> None:
    """Static SVG: one polyline per scenario with symmetric SD error bars."""
    _write(svg_text(results), destination)
