"""Minimal static SVG line charts (no external plotting dependency)."""

from __future__ import annotations

from html import escape

import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_W, _H = 640, 420
_L, _R, _T, _B = 70, 20, 40, 55


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + 0.5 * step, step)


def line_chart(series, *, title: str, xlabel: str, ylabel: str, comment: str = "") -> str:
    """Render ``series`` = [(label, x, y, dashed), ...] as an SVG document string."""
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = min(0.0, float(ys.min())), float(ys.max()) * 1.05 or 1.0
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    pw, ph = _W - _L - _R, _H - _T - _B

    def px(x):
        return _L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return _T + ph - (y - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">']
    if comment:
        out.append(f"<!-- {escape(comment.replace('--', '- -'))} -->")
    out.append(f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>')
    out.append(f'<text x="{_W / 2:.1f}" y="22" text-anchor="middle" font-size="15" font-family="sans-serif">{escape(title)}</text>')
    out.append(f'<rect x="{_L}" y="{_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for t in _ticks(x0, x1):
        if x0 <= t <= x1:
            out.append(f'<line x1="{px(t):.2f}" y1="{_T + ph}" x2="{px(t):.2f}" y2="{_T + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{px(t):.2f}" y="{_T + ph + 18}" text-anchor="middle" font-size="11" font-family="sans-serif">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        if y0 <= t <= y1:
            out.append(f'<line x1="{_L - 5}" y1="{py(t):.2f}" x2="{_L}" y2="{py(t):.2f}" stroke="black"/>')
            out.append(f'<text x="{_L - 8}" y="{py(t) + 4:.2f}" text-anchor="end" font-size="11" font-family="sans-serif">{t:.4g}</text>')
    out.append(f'<text x="{_L + pw / 2:.1f}" y="{_H - 12}" text-anchor="middle" font-size="13" font-family="sans-serif">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{_T + ph / 2:.1f}" text-anchor="middle" font-size="13" font-family="sans-serif" '
               f'transform="rotate(-90 16 {_T + ph / 2:.1f})">{escape(ylabel)}</text>')
    for i, (label, x, y, dashed) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(np.asarray(x, float), np.asarray(y, float)))
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"{dash}/>')
        ly = _T + 16 + 16 * i
        out.append(f'<line x1="{_L + pw - 150}" y1="{ly - 4}" x2="{_L + pw - 125}" y2="{ly - 4}" stroke="{color}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{_L + pw - 120}" y="{ly}" font-size="11" font-family="sans-serif">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
