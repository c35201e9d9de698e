"""ASCII and SVG pictures of a layout; output is a pure function of the input."""

from __future__ import annotations

import colorsys
import string
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .placement import Layout, bounding_box

GLYPHS = string.ascii_lowercase + string.ascii_uppercase + string.digits


@dataclass(frozen=True)
class RenderOptions:
    format: str = "ascii"
    cell_size_px: int = 24
    show_box_ids: bool = False

    def __post_init__(self):
        if self.format not in ("ascii", "svg"):
            raise ValueError(f"format must be 'ascii' or 'svg', not {self.format!r}")
        if self.cell_size_px < 4:
            raise ValueError("cell_size_px must be at least 4")


def glyph(box_id: int) -> str:
    return GLYPHS[box_id % len(GLYPHS)]


def box_color(box_id: int) -> str:
    hue = (box_id * 0.618033988749895) % 1.0
    r, g, b = colorsys.hls_to_rgb(hue, 0.72, 0.55)
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


def render_ascii(l: Layout, show_box_ids: bool = False) -> str:
    if not l.patches:
        return "(empty layout)\n"
    bb = bounding_box(l)
    occ = l.occupancy
    lines = []
    for row in range(bb.min_row, bb.max_row + 1):
        chars = []
        for col in range(bb.min_col, bb.max_col + 1):
            p = occ.get((col, row))
            chars.append(glyph(p.box_id) if p else ".")
        lines.append("".join(chars))
    if show_box_ids:
        for bid in sorted({p.box_id for p in l.patches}):
            lines.append(f"{glyph(bid)} = box {bid}")
    return "\n".join(lines) + "\n"


def render_svg(l: Layout, cell_size_px: int = 24, show_box_ids: bool = False) -> str:
    cs = cell_size_px
    if not l.patches:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="0" height="0"/>\n'
    bb = bounding_box(l)
    w, h = bb.width * cs, bb.height * cs
    font = max(cs * 0.4, 2)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff" stroke="#888888"/>',
    ]
    for p in l.patches:
        x = (p.col - bb.min_col) * cs
        y = (p.row - bb.min_row) * cs
        label = f"{p.box_id}:{p.qubit}" if show_box_ids else str(p.qubit)
        out.append(
            f'<rect x="{x}" y="{y}" width="{cs}" height="{cs}" fill="{box_color(p.box_id)}" stroke="#333333"/>'
        )
        out.append(
            f'<text x="{x + cs / 2:g}" y="{y + cs / 2:g}" font-size="{font:g}" text-anchor="middle" '
            f'dominant-baseline="central" font-family="monospace">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(l: Layout, options: RenderOptions | None = None) -> str:
    options = options or RenderOptions()
    if options.format == "svg":
        return render_svg(l, options.cell_size_px, options.show_box_ids)
    return render_ascii(l, options.show_box_ids)
