"""Deterministic SVG scatter plots of 2-D data with linear decision boundaries.

The SVG is assembled as plain text with fixed float formatting and no
timestamps, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import numpy as np

from .data import LabeledDataset
from .errors import PlotError
from .models import LinearModel

__all__ = ["plot_boundary_svg", "render_boundary_svg"]

WIDTH, HEIGHT, MARGIN = 640.0, 480.0, 50.0
POS_COLOR, NEG_COLOR = "#d62728", "#1f77b4"  # red positives, blue negatives
LINE_COLORS = ("#1f77b4", "#2ca02c", "#d62728", "#ff7f0e", "#9467bd", "#8c564b")


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def _boundary_segment(model: LinearModel, x_lim, y_lim):
    """Clip the line alpha.x + beta = 0 to the data rectangle; None if the
    boundary does not cross it (or the model is degenerate)."""
    a0, a1 = model.alpha
    beta = model.beta
    if a0 == 0.0 and a1 == 0.0:
        return None
    points = []

    def push(px, py):
        eps = 1e-9
        if x_lim[0] - eps <= px <= x_lim[1] + eps and y_lim[0] - eps <= py <= y_lim[1] + eps:
            for qx, qy in points:
                if abs(qx - px) < 1e-9 and abs(qy - py) < 1e-9:
                    return
            points.append((px, py))

    if a1 != 0.0:
        for px in x_lim:
            push(px, -(beta + a0 * px) / a1)
    if a0 != 0.0:
        for py in y_lim:
            push(-(beta + a1 * py) / a0, py)
    if len(points) < 2:
        return None
    return points[0], points[1]


def render_boundary_svg(models, test: LabeledDataset) -> str:
    """Build the SVG document text; models is an ordered sequence of
    (name, LinearModel) pairs."""
    if test.dim != 2:
        raise PlotError(f"boundary plots need d=2 data, got d={test.dim}")
    models = list(models)
    for name, model in models:
        if not isinstance(model, LinearModel):
            raise PlotError(f"model {name!r}: only linear boundaries can be drawn")
        if model.dim != 2:
            raise PlotError(f"model {name!r} has dimension {model.dim}, expected 2")

    x, y = test.features[:, 0], test.features[:, 1]
    pad_x = 0.05 * max(float(x.max() - x.min()), 1e-9)
    pad_y = 0.05 * max(float(y.max() - y.min()), 1e-9)
    x_lim = (float(x.min()) - pad_x, float(x.max()) + pad_x)
    y_lim = (float(y.min()) - pad_y, float(y.max()) + pad_y)

    def to_px(px, py):
        sx = MARGIN + (px - x_lim[0]) / (x_lim[1] - x_lim[0]) * (WIDTH - 2 * MARGIN)
        sy = HEIGHT - MARGIN - (py - y_lim[0]) / (y_lim[1] - y_lim[0]) * (HEIGHT - 2 * MARGIN)
        return sx, sy

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0f}" '
        f'height="{HEIGHT:.0f}" viewBox="0 0 {WIDTH:.0f} {HEIGHT:.0f}">',
        f'<rect x="0" y="0" width="{WIDTH:.0f}" height="{HEIGHT:.0f}" fill="white"/>',
        f'<rect x="{_fmt(MARGIN)}" y="{_fmt(MARGIN)}" width="{_fmt(WIDTH - 2 * MARGIN)}" '
        f'height="{_fmt(HEIGHT - 2 * MARGIN)}" fill="none" stroke="#cccccc"/>',
    ]
    for xi, yi, label in zip(x, y, test.labels):
        sx, sy = to_px(float(xi), float(yi))
        color = POS_COLOR if label == 1 else NEG_COLOR
        parts.append(
            f'<circle cx="{_fmt(sx)}" cy="{_fmt(sy)}" r="2.0" fill="{color}" fill-opacity="0.5"/>'
        )
    for idx, (name, model) in enumerate(models):
        color = LINE_COLORS[idx % len(LINE_COLORS)]
        segment = _boundary_segment(model, x_lim, y_lim)
        if segment is not None:
            (p0x, p0y), (p1x, p1y) = segment
            s0, s1 = to_px(p0x, p0y), to_px(p1x, p1y)
            parts.append(
                f'<line x1="{_fmt(s0[0])}" y1="{_fmt(s0[1])}" x2="{_fmt(s1[0])}" '
                f'y2="{_fmt(s1[1])}" stroke="{color}" stroke-width="2.0"/>'
            )
    # legend, top-right inside the frame
    legend_x = WIDTH - MARGIN - 170.0
    legend_y = MARGIN + 10.0
    for idx, (name, _model) in enumerate(models):
        color = LINE_COLORS[idx % len(LINE_COLORS)]
        row_y = legend_y + 18.0 * idx
        parts.append(
            f'<line x1="{_fmt(legend_x)}" y1="{_fmt(row_y)}" x2="{_fmt(legend_x + 28.0)}" '
            f'y2="{_fmt(row_y)}" stroke="{color}" stroke-width="2.0"/>'
        )
        parts.append(
            f'<text x="{_fmt(legend_x + 34.0)}" y="{_fmt(row_y + 4.0)}" '
            f'font-family="sans-serif" font-size="12">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plot_boundary_svg(models, test: LabeledDataset, path) -> None:
    """Write the scatter-plus-boundaries figure for named linear models."""
    svg = render_boundary_svg(models, test)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
