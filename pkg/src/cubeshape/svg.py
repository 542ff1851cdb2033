"""Static SVG scatter of reduced shapes over the outline of F."""

from __future__ import annotations

import math
from typing import Iterable

from .field import FieldType

WIDTH, HEIGHT, PAD = 480, 640, 40
COLOURS = {FieldType.I: "#1f77b4", FieldType.II: "#d62728"}


def render(points: Iterable[tuple[FieldType, complex]], y_max: float | None = None) -> str:
    points = list(points)
    top = y_max or max([2.0] + [z.imag * 1.05 for _, z in points])
    x0, x1, y0 = -0.1, 0.6, math.sqrt(3) / 2 - 0.1

    def sx(x):
        return PAD + (x - x0) / (x1 - x0) * (WIDTH - 2 * PAD)

    def sy(y):
        return HEIGHT - PAD - (y - y0) / (top - y0) * (HEIGHT - 2 * PAD)

    arc = " ".join(f"{sx(math.cos(t)):.2f},{sy(math.sin(t)):.2f}"
                   for t in (math.pi / 2 - k * math.pi / 6 / 32 for k in range(33)))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<polyline fill="none" stroke="black" stroke-width="1.5" points="{arc}"/>',
        f'<line x1="{sx(0):.2f}" y1="{sy(1):.2f}" x2="{sx(0):.2f}" y2="{sy(top):.2f}" stroke="black"/>',
        f'<line x1="{sx(0.5):.2f}" y1="{sy(math.sqrt(3) / 2):.2f}" x2="{sx(0.5):.2f}" '
        f'y2="{sy(top):.2f}" stroke="black"/>',
    ]
    for ftype, z in points:
        if z.imag <= top:
            out.append(f'<circle class="shape type-{ftype}" cx="{sx(z.real):.2f}" cy="{sy(z.imag):.2f}" '
                       f'r="2.5" fill="{COLOURS[ftype]}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
