"""Minimal self-contained SVG line plots."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

DASHES = {"solid": None, "dashed": "8,5", "dashdot": "9,4,2,4", "dotted": "2,4"}


@dataclass
class Series:
    label: str
    x: Sequence[float]
    y: Sequence[float]
    color: str
    style: str = "solid"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    return [float(t) for t in np.arange(start, hi + 0.5 * step, step) if t <= hi + 1e-12]


def line_plot(
    series: Sequence[Series],
    *,
    xlim: tuple[float, float],
    ylim: tuple[float, float],
    xlabel: str = "",
    ylabel: str = "",
    title: str = "",
    width: int = 640,
    height: int = 420,
    xticks: Sequence[tuple[float, str]] | None = None,
) -> str:
    """Render curves as an SVG document string; points outside ``ylim`` are clipped."""
    ml, mr, mt, mb = 64, 20, 36, 52
    pw, ph = width - ml - mr, height - mt - mb
    (x0, x1), (y0, y1) = xlim, ylim

    def sx(x: float) -> float:
        return ml + (x - x0) / (x1 - x0) * pw

    def sy(y: float) -> float:
        return mt + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<defs><clipPath id="plot"><rect x="{ml}" y="{mt}" width="{pw}" height="{ph}"/></clipPath></defs>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if xticks is None:
        xticks = [(t, f"{t:g}") for t in _ticks(x0, x1)]
    for t, lab in xticks:
        X = sx(t)
        out.append(f'<line x1="{X:.2f}" y1="{mt + ph}" x2="{X:.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{mt + ph + 19}" text-anchor="middle">{escape(lab)}</text>')
    for t in _ticks(y0, y1):
        Y = sy(t)
        out.append(f'<line x1="{ml - 5}" y1="{Y:.2f}" x2="{ml}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{Y + 4:.2f}" text-anchor="end">{t:g}</text>')
    if xlabel:
        out.append(f'<text x="{ml + pw / 2}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(
            f'<text x="16" y="{mt + ph / 2}" text-anchor="middle" '
            f'transform="rotate(-90 16 {mt + ph / 2})">{escape(ylabel)}</text>'
        )
    if title:
        out.append(f'<text x="{ml + pw / 2}" y="22" text-anchor="middle">{escape(title)}</text>')

    for s in series:
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(s.x, s.y) if np.isfinite(y))
        dash = DASHES.get(s.style)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<polyline clip-path="url(#plot)" fill="none" stroke="{s.color}" '
            f'stroke-width="2"{dash_attr} points="{pts}"/>'
        )

    for i, s in enumerate(series):
        ly = mt + 14 + 18 * i
        dash = DASHES.get(s.style)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<line x1="{ml + pw - 150}" y1="{ly}" x2="{ml + pw - 118}" y2="{ly}" '
            f'stroke="{s.color}" stroke-width="2"{dash_attr}/>'
        )
        out.append(f'<text x="{ml + pw - 112}" y="{ly + 4}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
