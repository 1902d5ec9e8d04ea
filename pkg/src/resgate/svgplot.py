"""Tiny dependency-free SVG line charts for sweep output.

Deterministic text output: same data in, byte-identical file out.
"""

from __future__ import annotations

import math

_W, _H = 640, 400
_ML, _MR, _MT, _MB = 64, 16, 20, 44


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((s for s in (1.0, 2.0, 2.5, 5.0, 10.0)), key=lambda s: abs(s * mag - raw)) * mag
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return out or [lo]


def line_chart(
    xs,
    ys,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    log_y: bool = False,
) -> str:
    """Render one series as an SVG document string."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys) or not xs:
        raise ValueError("xs and ys must be equal-length and non-empty")
    if log_y:
        if any(y <= 0 for y in ys):
            raise ValueError("log_y requires positive values")
        ys_t = [math.log10(y) for y in ys]
    else:
        ys_t = ys

    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys_t), max(ys_t)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw = _W - _ML - _MR
    ph = _H - _MT - _MB

    def px(x: float) -> float:
        return _ML + pw * (x - x0) / (x1 - x0)

    def py(y: float) -> float:
        return _MT + ph * (y1 - y) / (y1 - y0)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="Helvetica,Arial,sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
    ]
    for t in _ticks(x0, x1):
        x = px(t)
        parts.append(f'<line x1="{x:.1f}" y1="{_MT + ph}" x2="{x:.1f}" y2="{_MT + ph + 4}" stroke="#333"/>')
        parts.append(f'<text x="{x:.1f}" y="{_MT + ph + 18}" text-anchor="middle">{_fmt(t)}</text>')
    for t in _ticks(y0, y1):
        y = py(t)
        lab = _fmt(10.0 ** t) if log_y else _fmt(t)
        parts.append(f'<line x1="{_ML - 4}" y1="{y:.1f}" x2="{_ML}" y2="{y:.1f}" stroke="#333"/>')
        parts.append(f'<text x="{_ML - 8}" y="{y + 4:.1f}" text-anchor="end">{lab}</text>')
    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys_t))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#1f6fb2" stroke-width="1.5"/>')
    if title:
        parts.append(f'<text x="{_W / 2:.0f}" y="14" text-anchor="middle" font-weight="bold">{title}</text>')
    if x_label:
        parts.append(f'<text x="{_ML + pw / 2:.0f}" y="{_H - 8}" text-anchor="middle">{x_label}</text>')
    if y_label:
        parts.append(
            f'<text x="14" y="{_MT + ph / 2:.0f}" text-anchor="middle" '
            f'transform="rotate(-90 14 {_MT + ph / 2:.0f})">{y_label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def save_chart(path, xs, ys, **kwargs) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(line_chart(xs, ys, **kwargs))
