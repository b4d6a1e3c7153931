"""Minimal static SVG emission for benchmark summaries.

Hand-rolled so output is byte-deterministic: one polyline per
(dataset, algorithm) series of mean representative counts against delta.
CSV remains the contract; this is a convenience view.
"""

from __future__ import annotations

from repsel.evaluation import BenchmarkSummary
from repsel.io import fmt_float

_COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd",
            "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f")

_WIDTH, _HEIGHT = 640, 420
_MARGIN = 60


def _scale(value, lo, hi, out_lo, out_hi):
    if hi == lo:
        return (out_lo + out_hi) / 2.0
    return out_lo + (value - lo) * (out_hi - out_lo) / (hi - lo)


def render_benchmark_svg(summaries: list[BenchmarkSummary],
                         metric: str = "rep_count") -> str:
    means = [s for s in summaries if s.statistic == "mean"]
    series: dict[tuple[str, str], list[tuple[float, float]]] = {}
    for s in means:
        series.setdefault((s.dataset, s.algorithm), []).append(
            (s.delta, getattr(s, metric)))
    for points in series.values():
        points.sort()
    xs = [x for pts in series.values() for x, _ in pts] or [0.0, 1.0]
    ys = [y for pts in series.values() for _, y in pts] or [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = 0.0, max(ys) if max(ys) > 0 else 1.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{_HEIGHT - _MARGIN}" x2="{_WIDTH - 20}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="20" x2="{_MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>',
        f'<text x="{_WIDTH // 2}" y="{_HEIGHT - 15}" font-size="13" '
        f'text-anchor="middle">delta</text>',
        f'<text x="18" y="{_HEIGHT // 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {_HEIGHT // 2})">mean {metric}</text>',
    ]
    for idx, ((dataset, algorithm), points) in enumerate(sorted(series.items())):
        colour = _COLOURS[idx % len(_COLOURS)]
        coords = []
        for x, y in points:
            px = _scale(x, x_lo, x_hi, _MARGIN, _WIDTH - 20)
            py = _scale(y, y_lo, y_hi, _HEIGHT - _MARGIN, 20)
            coords.append(f"{fmt_float(px)},{fmt_float(py)}")
            parts.append(f'<circle cx="{fmt_float(px)}" cy="{fmt_float(py)}" '
                         f'r="3" fill="{colour}"/>')
        parts.append(f'<polyline points="{" ".join(coords)}" fill="none" '
                     f'stroke="{colour}" stroke-width="1.5"/>')
        parts.append(f'<text x="{_WIDTH - 170}" y="{30 + 16 * idx}" font-size="12" '
                     f'fill="{colour}">{dataset}/{algorithm}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
