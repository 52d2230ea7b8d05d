"""Optional SVG line charts from result CSV files.

Usage: python3 -m strategia.plot TABLE.csv CHART.svg --x COL --y COL[,COL...]
No third-party plotting stack: the chart is a plain static SVG with one
polyline per requested y column. Rows whose x or y cell is not numeric are
skipped.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional

WIDTH, HEIGHT = 640, 400
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60, 16, 20, 44
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _numeric(value: str) -> Optional[float]:
    try:
        v = float(value)
    except (TypeError, ValueError):
        return None
    return v if v == v and abs(v) != float("inf") else None


def read_series(path: str, x: str, ys: list[str]) -> dict[str, list[tuple[float, float]]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in [x, *ys]:
            if col not in header:
                raise SystemExit(f"error: no column {col!r} in {path}; columns: {header}")
        series: dict[str, list[tuple[float, float]]] = {y: [] for y in ys}
        for row in reader:
            xv = _numeric(row[x])
            if xv is None:
                continue
            for y in ys:
                yv = _numeric(row[y])
                if yv is not None:
                    series[y].append((xv, yv))
    if all(not pts for pts in series.values()):
        raise SystemExit(f"error: no numeric ({x}, y) rows found in {path}")
    return series


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def render_svg(series: dict[str, list[tuple[float, float]]], x_label: str) -> str:
    points = [p for pts in series.values() for p in pts]
    x_lo, x_hi = min(p[0] for p in points), max(p[0] for p in points)
    y_lo, y_hi = min(p[1] for p in points), max(p[1] for p in points)
    y_lo = min(y_lo, 0.0)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(v: float) -> float:
        return MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return MARGIN_T + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for v in _ticks(y_lo, y_hi):
        y = sy(v)
        parts.append(
            f'<line x1="{MARGIN_L}" y1="{y:.1f}" x2="{WIDTH - MARGIN_R}" y2="{y:.1f}" '
            f'stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{MARGIN_L - 6}" y="{y + 4:.1f}" text-anchor="end">{v:.4g}</text>'
        )
    for v in _ticks(x_lo, x_hi):
        x = sx(v)
        parts.append(
            f'<line x1="{x:.1f}" y1="{MARGIN_T}" x2="{x:.1f}" '
            f'y2="{HEIGHT - MARGIN_B}" stroke="#eeeeee"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{HEIGHT - MARGIN_B + 16}" text-anchor="middle">{v:.4g}</text>'
        )
    parts.append(
        f'<line x1="{MARGIN_L}" y1="{HEIGHT - MARGIN_B}" x2="{WIDTH - MARGIN_R}" '
        f'y2="{HEIGHT - MARGIN_B}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
        f'y2="{HEIGHT - MARGIN_B}" stroke="black"/>'
    )
    parts.append(
        f'<text x="{(MARGIN_L + WIDTH - MARGIN_R) / 2:.1f}" y="{HEIGHT - 8}" '
        f'text-anchor="middle">{x_label}</text>'
    )
    for i, (name, pts) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        if pts:
            coords = " ".join(f"{sx(px):.1f},{sy(py):.1f}" for px, py in sorted(pts))
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>'
            )
        ly = MARGIN_T + 14 + 16 * i
        parts.append(
            f'<line x1="{WIDTH - MARGIN_R - 130}" y1="{ly - 4}" '
            f'x2="{WIDTH - MARGIN_R - 110}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{WIDTH - MARGIN_R - 104}" y="{ly}">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="strategia.plot", description="render a result CSV as a static SVG line chart"
    )
    parser.add_argument("csv_path", help="input CSV with a header row")
    parser.add_argument("svg_path", help="output SVG path")
    parser.add_argument("--x", required=True, help="x-axis column")
    parser.add_argument("--y", required=True, help="comma-separated y columns")
    args = parser.parse_args(argv)
    ys = [c.strip() for c in args.y.split(",") if c.strip()]
    if not ys:
        parser.error("--y needs at least one column")
    series = read_series(args.csv_path, args.x, ys)
    text = render_svg(series, args.x)
    with open(args.svg_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
