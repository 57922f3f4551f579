"""
SVG line plots of observed and fitted series.

Output is deterministic: fixed palette, fixed number formatting and no
timestamps, so identical series give byte-identical files.
"""

import logging
from collections.abc import Sequence
from html import escape
from pathlib import Path

from .errors import EmptySeries, LengthMismatch, ReportIoError
from .schemas import NamedSeries

logger = logging.getLogger(__name__)

WIDTH = 720
HEIGHT = 400
PAD_LEFT = 64
PAD_RIGHT = 160
PAD_Y = 40
TICKS = 5

PALETTE = ("#4e79a7", "#e15759", "#59a14f", "#f28e2b", "#76b7b2", "#b07aa1")


def emit_plot(series: Sequence[NamedSeries], path: str | Path, title: str = "") -> None:
    """Write one polyline per series, with axes and a legend, to an SVG file.

    Raises:
        EmptySeries: No series, or a series without points
        ReportIoError: The file cannot be written
    """
    svg = render_svg(series, title)
    path = Path(path)
    try:
        path.write_text(svg, encoding="utf-8")
    except OSError as e:
        raise ReportIoError(f"Cannot write plot {path}: {e}") from e
    logger.info(f"Wrote plot with {len(series)} series", extra={"path": str(path)})


def render_svg(series: Sequence[NamedSeries], title: str = "") -> str:
    """SVG markup for the given series."""
    if not series:
        raise EmptySeries("nothing to plot")
    for s in series:
        if not s.values:
            raise EmptySeries(f"series '{s.name}' has no points")
        if len(s.t) != len(s.values):
            raise LengthMismatch(
                f"series '{s.name}' has {len(s.t)} times and {len(s.values)} values"
            )

    xs = [x for s in series for x in s.t]
    ys = [y for s in series for y in s.values]
    x_lo, x_hi = _padded(min(xs), max(xs))
    y_lo, y_hi = _padded(min(ys), max(ys))

    plot_w = WIDTH - PAD_LEFT - PAD_RIGHT
    plot_h = HEIGHT - 2 * PAD_Y

    def sx(x: float) -> float:
        return PAD_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return HEIGHT - PAD_Y - (y - y_lo) / (y_hi - y_lo) * plot_h

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" role="img" aria-label="{escape(title)}">',
        f"<title>{escape(title)}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        lines.append(
            f'<text x="{PAD_LEFT + plot_w / 2:.1f}" y="20" text-anchor="middle" '
            f'font-size="14">{escape(title)}</text>'
        )

    # axes
    x0, y0 = PAD_LEFT, HEIGHT - PAD_Y
    lines.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="#333"/>'
    )
    lines.append(f'<line x1="{x0}" y1="{PAD_Y}" x2="{x0}" y2="{y0}" stroke="#333"/>')
    for i in range(TICKS + 1):
        x = x_lo + (x_hi - x_lo) * i / TICKS
        y = y_lo + (y_hi - y_lo) * i / TICKS
        lines.append(
            f'<text x="{sx(x):.2f}" y="{y0 + 16}" font-size="10" '
            f'text-anchor="middle">{x:.4g}</text>'
        )
        lines.append(
            f'<text x="{x0 - 6}" y="{sy(y) + 3:.2f}" font-size="10" '
            f'text-anchor="end">{y:.4g}</text>'
        )

    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(
            f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(s.t, s.values, strict=True)
        )
        lines.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" '
            f'stroke-width="2"><title>{escape(s.name)}</title></polyline>'
        )

        legend_y = PAD_Y + 18 * i
        legend_x = WIDTH - PAD_RIGHT + 16
        lines.append(
            f'<line x1="{legend_x}" y1="{legend_y}" x2="{legend_x + 20}" '
            f'y2="{legend_y}" stroke="{color}" stroke-width="2"/>'
        )
        lines.append(
            f'<text x="{legend_x + 26}" y="{legend_y + 4}" font-size="11">'
            f"{escape(s.name)}</text>"
        )

    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _padded(lo: float, hi: float) -> tuple[float, float]:
    """Axis range with nonzero height, widened by 5% on each side."""
    if hi == lo:
        margin = max(abs(lo) * 0.05, 1.0)
    else:
        margin = (hi - lo) * 0.05
    return lo - margin, hi + margin
