"""Minimal static SVG line charts (800x500, linear axes)."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 500
MARGIN = dict(left=70, right=20, top=40, bottom=50)
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"]


def line_chart(series: dict, path: str | Path, title: str = "", xlabel: str = "t",
               ylabel: str = "") -> Path:
    """``series`` maps a label to ``(x, y, band)``; ``band`` (a +-1 std array) may be None."""
    xs = np.concatenate([np.asarray(x, float) for x, _, _ in series.values()])
    lows, highs = [], []
    for _, y, band in series.values():
        y = np.asarray(y, float)
        b = np.zeros_like(y) if band is None else np.asarray(band, float)
        lows.append(y - b)
        highs.append(y + b)
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = min(0.0, float(np.min(np.concatenate(lows)))), float(np.max(np.concatenate(highs)))
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return MARGIN["left"] + (np.asarray(x, float) - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN["top"] + ph - (np.asarray(y, float) - y0) / (y1 - y0) * ph

    def pts(x, y):
        return " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px(x), py(y)))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>',
    ]
    bx, by = MARGIN["left"], MARGIN["top"] + ph
    out.append(f'<line x1="{bx}" y1="{by}" x2="{bx + pw}" y2="{by}" stroke="black"/>')
    out.append(f'<line x1="{bx}" y1="{MARGIN["top"]}" x2="{bx}" y2="{by}" stroke="black"/>')
    for frac in np.linspace(0, 1, 5):
        xv, yv = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
        out.append(f'<text x="{px(xv):.1f}" y="{by + 18}" text-anchor="middle" font-size="11">{xv:.4g}</text>')
        out.append(f'<text x="{bx - 6}" y="{py(yv):.1f}" text-anchor="end" font-size="11">{yv:.4g}</text>')
    out.append(f'<text x="{bx + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="14" y="{MARGIN["top"] + ph / 2}" font-size="12" '
                   f'transform="rotate(-90 14 {MARGIN["top"] + ph / 2})" text-anchor="middle">{escape(ylabel)}</text>')

    for i, (label, (x, y, band)) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        x, y = np.asarray(x, float), np.asarray(y, float)
        if band is not None:
            band = np.asarray(band, float)
            poly = pts(np.concatenate([x, x[::-1]]), np.concatenate([y + band, (y - band)[::-1]]))
            out.append(f'<polygon points="{poly}" fill="{color}" fill-opacity="0.15" stroke="none"/>')
        out.append(f'<polyline points="{pts(x, y)}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = MARGIN["top"] + 14 + 16 * i
        out.append(f'<line x1="{bx + pw - 170}" y1="{ly}" x2="{bx + pw - 150}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{bx + pw - 145}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    out.append("</svg>")

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(out) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path
