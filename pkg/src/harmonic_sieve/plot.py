"""Deterministic SVG figures of sieve terms drawn as waves on a number line.

Waves are drawn centred on the axis so that their zeros sit on the integers
they cross; the anchor offset only appears in the legend label.  Markers
are never derived from the sampled curves: a square is drawn at ``n``
exactly when :func:`~harmonic_sieve.numberline.crossers_of` is non-empty.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from xml.sax.saxutils import escape

from .numberline import (
    ConfigError,
    SieveConstruction,
    SieveTerm,
    SpawnRule,
    Variant,
    crossers_of,
    spawn_construction,
)


class FigureId(str, enum.Enum):
    PROGRESSION = "progression"
    FULL2 = "full2"
    FULL23 = "full23"
    FULL235 = "full235"
    FULL2357 = "full2357"
    FULL235711 = "full235711"
    ODD3 = "odd3"
    ODD35 = "odd35"
    ODD357 = "odd357"
    ODD35711 = "odd35711"
    ODD_ALL = "oddall"
    CUSTOM = "custom"


STANDARD_FIGURES = [f for f in FigureId if f is not FigureId.CUSTOM]

DEFAULT_COLORS = {
    "axis": "#000000",
    "term": "#000000",
    "highlight": "#d62728",
    "reference": "#d62728",
    "marker_fill": "#ffffff",
    "marker_stroke": "#000000",
    "residue_stroke": "#d62728",
    "background": "#ffffff",
}
BLUE = "#1f4fd6"

WIDTH, HEIGHT, MARGIN = 1200, 330, 40
AXIS_Y = 170
AMPLITUDE_PX = 100
LEGEND_COLUMNS = 7


@dataclass(frozen=True)
class PlotSpec:
    figure_id: FigureId = FigureId.CUSTOM
    x_range: tuple[float, float] = (0.0, 40.0)
    amplitude: float = 0.9
    sample_step: float = 0.01
    colors: dict = field(default_factory=lambda: dict(DEFAULT_COLORS))
    highlight_anchor: int | None = None
    reference_anchors: tuple[int, ...] = ()
    mark_residue: bool = False
    title: str = ""

    def __post_init__(self):
        x0, x1 = self.x_range
        if not (math.isfinite(x0) and math.isfinite(x1)) or x1 <= x0:
            raise ConfigError(f"x_range must be finite with positive width, got {self.x_range}")
        if x0 < 0:
            raise ConfigError("x_range must start at or after 0")
        if not self.sample_step > 0:
            raise ConfigError("sample_step must be > 0")
        if not 0 < self.amplitude <= 1:
            raise ConfigError("amplitude must lie in (0, 1]")


@dataclass(frozen=True)
class Waveform:
    term: SieveTerm

    @property
    def offset(self) -> int:
        return self.term.anchor

    def __call__(self, x: float, amplitude: float = 0.9) -> float:
        return waveform_value(self.term, x, amplitude)


def waveform_value(term: SieveTerm, x: float, amplitude: float = 0.9) -> float:
    if x < 0:
        raise ValueError("x must be >= 0")
    a = term.anchor
    return amplitude * math.sin(math.pi * (x - a) / term.period_units)


_FULL_SETS = {
    FigureId.FULL2: (2,),
    FigureId.FULL23: (2, 3),
    FigureId.FULL235: (2, 3, 5),
    FigureId.FULL2357: (2, 3, 5, 7),
    FigureId.FULL235711: (2, 3, 5, 7, 11),
}
_ODD_SETS = {
    FigureId.ODD3: (3,),
    FigureId.ODD35: (3, 5),
    FigureId.ODD357: (3, 5, 7),
    FigureId.ODD35711: (3, 5, 7, 11),
}


def figure_setup(figure_id: FigureId | str, **overrides) -> tuple[PlotSpec, SieveConstruction]:
    """Spec and construction for one of the standard figures."""
    try:
        fid = FigureId(figure_id)
    except ValueError:
        raise ConfigError(f"unknown figure id {figure_id!r}; choose from {[f.value for f in FigureId]}")
    spec = PlotSpec(fid)
    if overrides:
        spec = replace(spec, **overrides)
    bound = max(2, math.ceil(spec.x_range[1]))

    if fid is FigureId.PROGRESSION:
        cons = spawn_construction(Variant.FULL, SpawnRule.CASE_I, bound)
        spec = replace(spec, highlight_anchor=2, mark_residue=True, title="P(x): p = 2 in red, odd primes in black")
    elif fid in _FULL_SETS:
        anchors = [a for a in _FULL_SETS[fid] if a <= bound]
        cons = SieveConstruction.custom(Variant.FULL, bound, anchors)
        names = ", ".join(SieveTerm(a).label() for a in anchors)
        spec = replace(spec, highlight_anchor=anchors[-1] if anchors else None, title=f"P(x) = {{{names}}}")
    elif fid in _ODD_SETS:
        anchors = [a for a in _ODD_SETS[fid] if a <= bound]
        cons = SieveConstruction.custom(Variant.ODD_ONLY, bound, anchors)
        names = ", ".join(SieveTerm(a, Variant.ODD_ONLY).label() for a in anchors)
        colors = dict(spec.colors, highlight=BLUE)
        spec = replace(spec, highlight_anchor=anchors[-1] if anchors else None, colors=colors,
                       title=f"P_odd(x) = {{{names}}}")
    elif fid is FigureId.ODD_ALL:
        cons = spawn_construction(Variant.ODD_ONLY, SpawnRule.CASE_I, bound) if bound >= 3 else (
            SieveConstruction.custom(Variant.ODD_ONLY, bound, [])
        )
        spec = replace(spec, reference_anchors=(2,), title="P_odd(x): p = 2 in red, odd primes in black")
    else:
        cons = SieveConstruction.custom(Variant.FULL, bound, [])
    return spec, cons


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _px(spec: PlotSpec, x: float) -> float:
    x0, x1 = spec.x_range
    return MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)


def _samples(spec: PlotSpec, start: float) -> list[float]:
    x1 = spec.x_range[1]
    if start > x1:
        return []
    count = int(math.floor((x1 - start) / spec.sample_step + 1e-9))
    return [start + k * spec.sample_step for k in range(count + 1)]


def _polyline(spec: PlotSpec, term: SieveTerm, color: str, css: str) -> str:
    xs = _samples(spec, max(spec.x_range[0], float(term.anchor)))
    if not xs:
        return ""
    pts = " ".join(
        f"{_f(_px(spec, x))},{_f(AXIS_Y - AMPLITUDE_PX * waveform_value(term, x, spec.amplitude))}" for x in xs
    )
    return (
        f'<polyline class="{css}" data-anchor="{term.anchor}" fill="none" stroke="{color}" '
        f'stroke-width="1.2" points="{pts}"/>'
    )


def marker_positions(spec: PlotSpec, construction: SieveConstruction) -> list[int]:
    x0, x1 = spec.x_range
    lo = max(2, math.ceil(x0))
    hi = min(construction.bound, math.floor(x1))
    return [n for n in range(lo, hi + 1) if crossers_of(construction, n)]


def render_figure(spec: PlotSpec, construction: SieveConstruction) -> str:
    x0, x1 = spec.x_range
    if construction.bound < math.ceil(x1):
        raise ConfigError(f"construction bound {construction.bound} is below the plotted range end {x1}")
    c = spec.colors
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="DejaVu Sans, sans-serif">',
        f"<title>{escape(spec.title or spec.figure_id.value)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="{c["background"]}"/>',
    ]

    out.append('<g class="axis">')
    out.append(
        f'<line x1="{_f(_px(spec, x0))}" y1="{AXIS_Y}" x2="{_f(_px(spec, x1))}" y2="{AXIS_Y}" '
        f'stroke="{c["axis"]}" stroke-width="1"/>'
    )
    for n in range(math.ceil(x0), math.floor(x1) + 1):
        x = _f(_px(spec, n))
        out.append(f'<line x1="{x}" y1="{AXIS_Y - 4}" x2="{x}" y2="{AXIS_Y + 4}" stroke="{c["axis"]}"/>')
        out.append(f'<text x="{x}" y="{AXIS_Y + 125}" font-size="10" text-anchor="middle">{n}</text>')
    out.append("</g>")

    out.append('<g class="waves">')
    for a in spec.reference_anchors:
        if a <= x1:
            out.append(_polyline(spec, SieveTerm(a), c["reference"], "reference"))
    for term in construction.terms:
        if term.anchor > x1:
            continue
        color = c["highlight"] if term.anchor == spec.highlight_anchor else c["term"]
        out.append(_polyline(spec, term, color, "wave"))
    out.append("</g>")

    out.append('<g class="markers">')
    for n in marker_positions(spec, construction):
        stroke = c["marker_stroke"]
        if spec.mark_residue and crossers_of(construction, n) == [2]:
            stroke = c["residue_stroke"]
        x = _px(spec, n)
        out.append(
            f'<rect class="marker" data-n="{n}" x="{_f(x - 4)}" y="{AXIS_Y - 4}" width="8" height="8" '
            f'fill="{c["marker_fill"]}" stroke="{stroke}" stroke-width="1.2"/>'
        )
    out.append("</g>")

    entries = [(SieveTerm(a).label(), c["reference"]) for a in spec.reference_anchors]
    for term in construction.terms:
        if term.anchor <= x1:
            color = c["highlight"] if term.anchor == spec.highlight_anchor else c["term"]
            entries.append((term.label(), color))
    out.append('<g class="legend" font-size="11">')
    for i, (label, color) in enumerate(entries):
        row, col = divmod(i, LEGEND_COLUMNS)
        out.append(
            f'<text x="{MARGIN + 160 * col}" y="{18 + 15 * row}" fill="{color}">{escape(label)}</text>'
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(line for line in out if line) + "\n"


def write_figure(figure_id: FigureId | str, out: str | os.PathLike, **overrides) -> Path:
    """Render a figure to ``out``; a directory gets ``figure_<id>.svg`` inside it."""
    spec, cons = figure_setup(figure_id, **overrides)
    path = Path(out)
    if path.is_dir():
        path = path / f"figure_{spec.figure_id.value}.svg"
    path.write_text(render_figure(spec, cons), encoding="utf-8", newline="\n")
    return path
