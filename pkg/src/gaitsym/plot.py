"""Minimal SVG line charts (one polyline per series, color legend)."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

# Named colors used in legends, with the stroke actually drawn.
COLORS = {
    "Blue": "#1f4fd8",
    "Red": "#d62728",
    "Green": "#2ca02c",
    "Yellow": "#e6b800",
    "Black": "#222222",
}

# right ankle, right wrist, left ankle, left wrist
JOINT_COLORS = ("Blue", "Red", "Green", "Yellow")

WIDTH, HEIGHT = 720, 400
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60, 20, 40, 90


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".") if v == v else "0"


def line_chart(
    series: Sequence[tuple[str, str, Sequence[float]]],
    title: str = "",
    xlabel: str = "frame",
    ylabel: str = "",
) -> str:
    """Render ``(label, color_name, values)`` triples as an SVG document.

    ``color_name`` must be a key of :data:`COLORS`; the legend reads
    ``"<color>: <label>"``.
    """
    arrays = [np.asarray(v, dtype=float) for _, _, v in series]
    n = max((a.size for a in arrays), default=0)
    finite = np.concatenate([a[np.isfinite(a)] for a in arrays]) if arrays else np.array([])
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(i):
        return MARGIN_L + (i / max(n - 1, 1)) * pw

    def sy(v):
        return MARGIN_T + (hi - v) / (hi - lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{escape(title)}</text>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="#888"/>',
    ]
    if lo < 0 < hi:
        y0 = sy(0.0)
        out.append(
            f'<line x1="{MARGIN_L}" y1="{y0:.2f}" x2="{MARGIN_L + pw}" y2="{y0:.2f}" '
            'stroke="#ccc" stroke-dasharray="4 3"/>'
        )
    for v, anchor_y in ((hi, MARGIN_T + 4), (lo, MARGIN_T + ph)):
        out.append(
            f'<text x="{MARGIN_L - 6}" y="{anchor_y}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{_fmt(v)}</text>'
        )
    out.append(
        f'<text x="{MARGIN_L}" y="{MARGIN_T + ph + 16}" font-family="sans-serif" font-size="11">0</text>'
    )
    out.append(
        f'<text x="{MARGIN_L + pw}" y="{MARGIN_T + ph + 16}" text-anchor="end" font-family="sans-serif" '
        f'font-size="11">{max(n - 1, 0)}</text>'
    )
    out.append(
        f'<text x="{MARGIN_L + pw / 2:.0f}" y="{MARGIN_T + ph + 32}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{escape(xlabel)}</text>'
    )
    if ylabel:
        cy = MARGIN_T + ph / 2
        out.append(
            f'<text x="16" y="{cy:.0f}" transform="rotate(-90 16 {cy:.0f})" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{escape(ylabel)}</text>'
        )

    for (label, color, _), a in zip(series, arrays):
        stroke = COLORS[color]
        pts = " ".join(f"{sx(i):.2f},{sy(v):.2f}" for i, v in enumerate(a) if np.isfinite(v))
        out.append(
            f'<polyline fill="none" stroke="{stroke}" stroke-width="1.6" points="{pts}">'
            f"<title>{escape(label)}</title></polyline>"
        )

    out.append('<g class="legend" font-family="sans-serif" font-size="12">')
    lx, ly = MARGIN_L, HEIGHT - 36
    for k, (label, color, _) in enumerate(series):
        x = lx + (k % 2) * 320
        y = ly + (k // 2) * 18
        out.append(f'<line x1="{x}" y1="{y - 4}" x2="{x + 22}" y2="{y - 4}" stroke="{COLORS[color]}" stroke-width="3"/>')
        out.append(f'<text x="{x + 28}" y="{y}">{escape(f"{color}: {label}")}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
