"""Plain-text SVG step plots of sampled curves."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from ..errors import EmptyCurve, InvalidInput
from ..profiles import ProfileCurve
from ..space import GrowthCurve

WIDTH, HEIGHT = 640, 420
MARGIN = 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def _points(curve):
    if isinstance(curve, (ProfileCurve, GrowthCurve)):
        pts = curve.points
    else:
        pts = curve
    return [(float(t), float(v)) for t, v in pts]


def loglog_slope(points) -> float | None:
    """Least-squares slope of log v against log t over positive points."""
    xs, ys = [], []
    for t, v in points:
        if t > 0 and v > 0:
            xs.append(math.log(t))
            ys.append(math.log(v))
    if len(xs) < 2:
        return None
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return None
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def render_svg(curves, log: bool = True, title: str = "", xlabel: str = "t",
               ylabel: str = "value") -> str:
    """SVG text for labelled curves ``[(label, curve), ...]``.

    Points are drawn as steps (each value holds until the next sample).  On
    log axes nonpositive points are dropped and each legend entry carries
    the least-squares log-log slope, for information only.
    """
    series = []
    for label, curve in curves:
        pts = sorted(_points(curve))
        if log:
            pts = [(t, v) for t, v in pts if t > 0 and v > 0]
        if pts:
            series.append((str(label), pts))
    if not series:
        raise EmptyCurve("nothing to plot")
    tx = (lambda x: math.log10(x)) if log else (lambda x: x)
    xs = [tx(t) for _, pts in series for t, _ in pts]
    ys = [tx(v) for _, pts in series for _, v in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def px(x):
        return MARGIN + (tx(x) - x0) / (x1 - x0) * pw

    def py(y):
        return HEIGHT - MARGIN - (tx(y) - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
           f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>']
    scale = "log-log" if log else "linear"
    out.append(f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="14">'
               f'{escape(title)}</text>')
    out.append(f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 16}" text-anchor="middle" font-size="12">'
               f'{escape(xlabel)} ({scale})</text>')
    out.append(f'<text x="16" y="{HEIGHT / 2:.1f}" font-size="12" '
               f'transform="rotate(-90 16 {HEIGHT / 2:.1f})">{escape(ylabel)}</text>')
    for lo, hi, horizontal in ((x0, x1, True), (y0, y1, False)):
        for k in range(5):
            val = lo + (hi - lo) * k / 4
            shown = 10 ** val if log else val
            text = f"{shown:.3g}"
            if horizontal:
                x = MARGIN + pw * k / 4
                out.append(f'<text x="{x:.1f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle" '
                           f'font-size="10">{text}</text>')
            else:
                y = HEIGHT - MARGIN - ph * k / 4
                out.append(f'<text x="{MARGIN - 6}" y="{y + 3:.1f}" text-anchor="end" '
                           f'font-size="10">{text}</text>')
    for i, (label, pts) in enumerate(series):
        color = COLORS[i % len(COLORS)]
        d = [f"M {px(pts[0][0]):.2f} {py(pts[0][1]):.2f}"]
        for t2, v2 in pts[1:]:
            d.append(f"H {px(t2):.2f}")
            d.append(f"V {py(v2):.2f}")
        if len(pts) == 1:
            d.append(f"H {MARGIN + pw:.2f}")
        out.append(f'<path d="{" ".join(d)}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        legend = label
        if log:
            s = loglog_slope(pts)
            if s is not None:
                legend += f" (slope {s:.2f})"
        ly = MARGIN + 16 * i
        out.append(f'<line x1="{WIDTH - MARGIN - 170}" y1="{ly}" x2="{WIDTH - MARGIN - 150}" '
                   f'y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 145}" y="{ly + 4}" font-size="11">'
                   f'{escape(legend)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(curves, path, log: bool = True, **options) -> str:
    if not curves:
        raise EmptyCurve("no curves given")
    if not isinstance(log, bool):
        raise InvalidInput("log must be a boolean")
    text = render_svg(curves, log=log, **options)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text
