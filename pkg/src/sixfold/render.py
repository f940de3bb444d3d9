"""Deterministic SVG drawings of the model disk with optional curve overlays."""

from __future__ import annotations

import math
from fractions import Fraction

from .certificates import commtrick, model_for
from .curves import ChordalCurve, basic_chordal_curves, curve_family
from .polygon import PolygonModel
from .subsurface import d_convex_hull

SIZE = 640
RADIUS = 260
TYPE_COLOURS = {"p": "#1f5fa8", "q": "#2a8a3e", "r": "#b5472f"}
CURVE_COLOURS = ("#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")


class RenderError(KeyError):
    pass


def _xy(t, r: float = RADIUS) -> tuple[float, float]:
    a = 2 * math.pi * float(t)
    return SIZE / 2 + r * math.cos(a), SIZE / 2 - r * math.sin(a)


def _f(x: float) -> str:
    return f"{x:.2f}"


def _commtrick_overlay(m: PolygonModel) -> list[ChordalCurve]:
    c = basic_chordal_curves(m, "p")[0]
    cert = commtrick(c)
    d = cert.children[0].subject.curves[0][1]
    return [c.renamed("c"), c.rotated(2).renamed("a2c"), c.rotated(4).renamed("a4c"), d.renamed("d")]


def _hull(m: PolygonModel) -> list[ChordalCurve]:
    S = d_convex_hull(m, curve_family(m))
    return [("hull", S.hull_chords)]


CURVE_SETS = {
    "basic": lambda m: basic_chordal_curves(m),
    "family": curve_family,
    "lemma3.2": _commtrick_overlay,
    "hull": _hull,
}


def curves_for(m: PolygonModel, name: str) -> list[tuple[str, tuple]]:
    """Named overlays as (name, chords) pairs."""
    if name not in CURVE_SETS:
        raise RenderError("no such curve")
    return [c if isinstance(c, tuple) else (c.name, c.chords) for c in CURVE_SETS[name](m)]


def render_svg(m: PolygonModel, overlays=()) -> str:
    n = m.n_edges
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif">',
           f'<title>{m.tuple}</title>',
           f'<circle cx="{SIZE // 2}" cy="{SIZE // 2}" r="{RADIUS}" fill="#fafafa" stroke="#bbb"/>']
    for e in range(n):
        a, b = m.edge_interval(e)
        (x0, y0), (x1, y1) = _xy(a), _xy(b)
        colour = TYPE_COLOURS[m.edge_type(e)]
        out.append(f'<path d="M {_f(x0)} {_f(y0)} A {RADIUS} {RADIUS} 0 0 0 {_f(x1)} {_f(y1)}" '
                   f'stroke="{colour}" stroke-width="3" fill="none"/>')
        lx, ly = _xy((a + b) / 2, RADIUS + 18)
        out.append(f'<text x="{_f(lx)}" y="{_f(ly)}" font-size="9" text-anchor="middle" '
                   f'dominant-baseline="middle" fill="{colour}">{m.edge(e).label}</text>')
    for k in range(n):
        x, y = _xy(Fraction(k, n))
        out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="1.5" fill="#444"/>')
    mx, my = _xy(m.marked_point)
    out.append(f'<circle cx="{_f(mx)}" cy="{_f(my)}" r="5" fill="black"/>')
    out.append(f'<circle cx="{SIZE // 2}" cy="{SIZE // 2}" r="3" fill="black"/>')
    for i, (name, chords) in enumerate(overlays):
        colour = CURVE_COLOURS[i % len(CURVE_COLOURS)]
        out.append(f'<g stroke="{colour}" stroke-width="1.6" fill="none"><title>{name}</title>')
        for ch in chords:
            (x0, y0), (x1, y1) = _xy(ch.start), _xy(ch.end)
            # bend each chord towards the centre so nearly antipodal chords stay readable
            qx, qy = (x0 + x1 + SIZE) / 4, (y0 + y1 + SIZE) / 4
            out.append(f'<path d="M {_f(x0)} {_f(y0)} Q {_f(qx)} {_f(qy)} {_f(x1)} {_f(y1)}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(g: int, curve_set: str | None = None) -> str:
    m = model_for(g)
    curves = curves_for(m, curve_set) if curve_set else []
    return render_svg(m, curves)
