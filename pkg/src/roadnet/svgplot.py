"""Minimal hand-emitted SVG line charts.

The L-function figure is a simple line-plus-band chart, so the markup is
built directly: an envelope band polygon, the observed polyline, axes
with ticks, and km labels.  No plotting dependency.
"""

from __future__ import annotations

import numpy as np

_MARGIN_LEFT = 64.0
_MARGIN_RIGHT = 16.0
_MARGIN_TOP = 24.0
_MARGIN_BOTTOM = 48.0


def _fmt(v: float) -> str:
    return format(v, ".2f")


def _ticks(vmax: float, n: int = 5) -> list[float]:
    if vmax <= 0:
        return [0.0]
    step = vmax / n
    return [step * i for i in range(n + 1)]


def l_function_svg(result, width: int = 640, height: int = 480) -> str:
    """SVG document for an LFunctionResult: envelope band, observed line,
    axes with km labels."""
    d = np.asarray(result.distances, dtype=np.float64)
    obs = np.asarray(result.l_observed, dtype=np.float64)
    low = np.asarray(result.envelope_low, dtype=np.float64)
    high = np.asarray(result.envelope_high, dtype=np.float64)

    xmax = float(d.max())
    ymax = float(max(obs.max(), high.max(), xmax)) or 1.0
    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(x: float) -> float:
        return _MARGIN_LEFT + plot_w * x / xmax

    def sy(y: float) -> float:
        return _MARGIN_TOP + plot_h * (1.0 - y / ymax)

    def path_points(xs, ys) -> str:
        return " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))

    band = path_points(d, low) + " " + path_points(d[::-1], high[::-1])
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<polygon points="{band}" fill="#c8d8ea" stroke="none"/>',
        f'<polyline points="{path_points(d, obs)}" fill="none" stroke="#1f4e79" stroke-width="1.5"/>',
        # axes
        f'<line x1="{_fmt(_MARGIN_LEFT)}" y1="{_fmt(sy(0.0))}" x2="{_fmt(width - _MARGIN_RIGHT)}" '
        f'y2="{_fmt(sy(0.0))}" stroke="black" stroke-width="1"/>',
        f'<line x1="{_fmt(_MARGIN_LEFT)}" y1="{_fmt(_MARGIN_TOP)}" x2="{_fmt(_MARGIN_LEFT)}" '
        f'y2="{_fmt(sy(0.0))}" stroke="black" stroke-width="1"/>',
    ]
    for t in _ticks(xmax):
        x = _fmt(sx(t))
        lines.append(
            f'<line x1="{x}" y1="{_fmt(sy(0.0))}" x2="{x}" y2="{_fmt(sy(0.0) + 5)}" '
            f'stroke="black" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{x}" y="{_fmt(sy(0.0) + 18)}" font-size="11" '
            f'text-anchor="middle">{_fmt(t)}</text>'
        )
    for t in _ticks(ymax):
        y = _fmt(sy(t))
        lines.append(
            f'<line x1="{_fmt(_MARGIN_LEFT - 5)}" y1="{y}" x2="{_fmt(_MARGIN_LEFT)}" y2="{y}" '
            f'stroke="black" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{_fmt(_MARGIN_LEFT - 8)}" y="{y}" font-size="11" '
            f'text-anchor="end" dominant-baseline="middle">{_fmt(t)}</text>'
        )
    lines.append(
        f'<text x="{_fmt(_MARGIN_LEFT + plot_w / 2)}" y="{_fmt(height - 10)}" font-size="12" '
        f'text-anchor="middle">distance (km)</text>'
    )
    lines.append(
        f'<text x="16" y="{_fmt(_MARGIN_TOP + plot_h / 2)}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {_fmt(_MARGIN_TOP + plot_h / 2)})">L(d) (km)</text>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
