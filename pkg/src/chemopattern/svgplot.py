"""Minimal self-contained SVG line plots.

Just enough for the experiment figures: polylines, dashed styles, point
markers, vertical guide lines, shaded x-bands, axes with tick labels and
a legend. No external renderer; output is deterministic for identical
inputs.
"""
from __future__ import annotations

import math
from typing import Optional

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def _nice_ticks(lo: float, hi: float, target: int = 6):
    if not math.isfinite(lo) or not math.isfinite(hi):
        return [0.0]
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= m * mag:
            step = m * mag
            break
    t0 = math.ceil(lo / step) * step
    ticks = []
    t = t0
    while t <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    a = abs(v)
    if 1e-3 <= a < 1e5:
        s = f"{v:.6g}"
    else:
        s = f"{v:.3e}"
    return s


class LinePlot:
    def __init__(self, title: str = "", xlabel: str = "", ylabel: str = "",
                 width: int = 760, height: int = 480):
        self.title = title
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.width = width
        self.height = height
        self._series = []   # (xs, ys, color, label, dashed, linewidth)
        self._markers = []  # (xs, ys, color, label, radius)
        self._vlines = []   # (x, color, label)
        self._bands = []    # (x0, x1, color, label)
        self._ncolor = 0

    def _next_color(self) -> str:
        c = _PALETTE[self._ncolor % len(_PALETTE)]
        self._ncolor += 1
        return c

    def add_line(self, xs, ys, label: Optional[str] = None, color: Optional[str] = None,
                 dashed: bool = False, linewidth: float = 1.6):
        xs = [float(x) for x in xs]
        ys = [float(y) for y in ys]
        self._series.append((xs, ys, color or self._next_color(), label, dashed, linewidth))

    def add_markers(self, xs, ys, label: Optional[str] = None, color: Optional[str] = None,
                    radius: float = 3.5):
        xs = [float(x) for x in xs]
        ys = [float(y) for y in ys]
        self._markers.append((xs, ys, color or self._next_color(), label, radius))

    def add_vline(self, x: float, label: Optional[str] = None, color: str = "#555555"):
        self._vlines.append((float(x), color, label))

    def add_band(self, x0: float, x1: float, label: Optional[str] = None,
                 color: str = "#fce8b2"):
        self._bands.append((float(x0), float(x1), color, label))

    def _bounds(self):
        xs_all, ys_all = [], []
        for xs, ys, *_ in self._series:
            xs_all += [x for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]
            ys_all += [y for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]
        for xs, ys, *_ in self._markers:
            xs_all += xs
            ys_all += ys
        for x, *_ in self._vlines:
            xs_all.append(x)
        if not xs_all:
            return 0.0, 1.0, 0.0, 1.0
        x0, x1 = min(xs_all), max(xs_all)
        y0, y1 = (min(ys_all), max(ys_all)) if ys_all else (0.0, 1.0)
        if x1 == x0:
            x1 = x0 + 1.0
        if y1 == y0:
            y0, y1 = y0 - 1.0, y1 + 1.0
        pad = 0.05 * (y1 - y0)
        return x0, x1, y0 - pad, y1 + pad

    def render(self) -> str:
        W, H = self.width, self.height
        ml, mr, mt, mb = 72, 16, 36, 52
        pw, ph = W - ml - mr, H - mt - mb
        x0, x1, y0, y1 = self._bounds()
        sx = lambda x: ml + (x - x0) / (x1 - x0) * pw
        sy = lambda y: mt + (y1 - y) / (y1 - y0) * ph

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
            f'viewBox="0 0 {W} {H}">',
            f'<rect width="{W}" height="{H}" fill="white"/>',
        ]
        for bx0, bx1, color, _ in self._bands:
            ax, bx = sorted((max(x0, min(x1, bx0)), max(x0, min(x1, bx1))))
            out.append(f'<rect x="{sx(ax):.2f}" y="{mt}" width="{sx(bx)-sx(ax):.2f}" '
                       f'height="{ph}" fill="{color}" opacity="0.6"/>')
        # grid + ticks
        for t in _nice_ticks(x0, x1):
            px = sx(t)
            out.append(f'<line x1="{px:.2f}" y1="{mt}" x2="{px:.2f}" y2="{mt+ph}" '
                       f'stroke="#e0e0e0" stroke-width="1"/>')
            out.append(f'<text x="{px:.2f}" y="{mt+ph+16}" font-size="11" '
                       f'text-anchor="middle" fill="#333">{_fmt(t)}</text>')
        for t in _nice_ticks(y0, y1):
            py = sy(t)
            out.append(f'<line x1="{ml}" y1="{py:.2f}" x2="{ml+pw}" y2="{py:.2f}" '
                       f'stroke="#e0e0e0" stroke-width="1"/>')
            out.append(f'<text x="{ml-6}" y="{py+4:.2f}" font-size="11" '
                       f'text-anchor="end" fill="#333">{_fmt(t)}</text>')
        out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" '
                   f'stroke="#333" stroke-width="1"/>')
        for x, color, label in self._vlines:
            px = sx(x)
            out.append(f'<line x1="{px:.2f}" y1="{mt}" x2="{px:.2f}" y2="{mt+ph}" '
                       f'stroke="{color}" stroke-width="1.2" stroke-dasharray="2,3"/>')
            if label:
                out.append(f'<text x="{px+3:.2f}" y="{mt+12}" font-size="11" '
                           f'fill="{color}">{label}</text>')
        for xs, ys, color, _, dashed, lw in self._series:
            pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys)
                           if math.isfinite(x) and math.isfinite(y))
            dash = ' stroke-dasharray="6,4"' if dashed else ""
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                       f'stroke-width="{lw}"{dash}/>')
        for xs, ys, color, _, r in self._markers:
            for x, y in zip(xs, ys):
                out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="{r}" '
                           f'fill="{color}"/>')
        # title, axis labels
        if self.title:
            out.append(f'<text x="{W/2:.0f}" y="20" font-size="14" text-anchor="middle" '
                       f'fill="#111">{self.title}</text>')
        if self.xlabel:
            out.append(f'<text x="{ml+pw/2:.0f}" y="{H-12}" font-size="12" '
                       f'text-anchor="middle" fill="#111">{self.xlabel}</text>')
        if self.ylabel:
            out.append(f'<text x="16" y="{mt+ph/2:.0f}" font-size="12" text-anchor="middle" '
                       f'fill="#111" transform="rotate(-90 16 {mt+ph/2:.0f})">{self.ylabel}</text>')
        # legend
        entries = [(lab, col, dashed) for _, _, col, lab, dashed, _ in self._series if lab]
        entries += [(lab, col, False) for _, _, col, lab, _ in self._markers if lab]
        if entries:
            ly = mt + 8
            for lab, col, dashed in entries:
                dash = ' stroke-dasharray="6,4"' if dashed else ""
                out.append(f'<line x1="{ml+pw-150}" y1="{ly+4}" x2="{ml+pw-122}" y2="{ly+4}" '
                           f'stroke="{col}" stroke-width="2"{dash}/>')
                out.append(f'<text x="{ml+pw-116}" y="{ly+8}" font-size="11" '
                           f'fill="#111">{lab}</text>')
                ly += 16
        out.append("</svg>")
        return "\n".join(out)

    def write(self, path):
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.render())
            f.write("\n")
