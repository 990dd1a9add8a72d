"""Text and SVG layer diagrams.

Level 1 draws a 3D polyform cell by cell, one grid per layer.  Level 2
draws a tile layout block by block, one grid of block ids per layer; on
encoding layers of an encoder the four edge segments are color coded.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .blocks import emit_layer_diagram
from .geometry import CUBE, GeometryError, Polyform
from .reduction import EncoderLayout, Layout
from .wang import WangTileSet

CELL_PX = 12
SLOT_PX = 34
GAP_PX = 16

FILL = "#9a9a9a"
STROKE = "#000000"
# fallback palette for edge colors without names
PALETTE = ("#d62728", "#2ca02c", "#1f77b4", "#e6c619", "#9467bd", "#8c564b",
           "#e377c2", "#17becf")


def _cube_box(p: Polyform) -> tuple[np.ndarray, np.ndarray]:
    """Drawing box: whole functional cubes covering the polyform."""
    if not len(p):
        return np.zeros(3, np.int64), np.full(3, CUBE, np.int64)
    lo = np.floor_divide(p.cells.min(axis=0), CUBE) * CUBE
    hi = -np.floor_divide(-(p.cells.max(axis=0) + 1), CUBE) * CUBE
    return lo, hi - lo


def render_level1(p: Polyform, fmt: str = "text") -> str:
    """Layer diagram of a 3D polyform; ``fmt`` is ``"text"`` or ``"svg"``.

    The drawing box is rounded out to whole 10-cell cubes.
    """
    if p.dim != 3:
        raise GeometryError("level-1 diagrams are 3-dimensional")
    lo, shape = _cube_box(p)
    if fmt == "text":
        return emit_layer_diagram(p, shape=shape, origin=lo)
    if fmt != "svg":
        raise ValueError(f"unknown format {fmt!r}")
    mask = p.to_mask(lo, shape) if len(p) else np.zeros(tuple(shape), bool)
    nx, ny, nz = mask.shape
    panel_w = nx * CELL_PX
    width = nz * panel_w + (nz + 1) * GAP_PX
    height = ny * CELL_PX + 2 * GAP_PX + 14
    out = [_svg_head(width, height)]
    for z in range(nz):
        x0 = GAP_PX + z * (panel_w + GAP_PX)
        y0 = GAP_PX + 14
        out.append(f'<text x="{x0}" y="{GAP_PX + 6}" font-size="12">Layer {z + 1}</text>')
        for y in range(ny):
            for x in range(nx):
                fill = FILL if mask[x, y, z] else "#ffffff"
                px = x0 + x * CELL_PX
                py = y0 + (ny - 1 - y) * CELL_PX
                out.append(f'<rect x="{px}" y="{py}" width="{CELL_PX}" height="{CELL_PX}" '
                           f'fill="{fill}" stroke="{STROKE}" stroke-width="0.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _svg_head(width: int, height: int) -> str:
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n<rect width="100%" height="100%" fill="#ffffff"/>')


def segment_of(layout: Layout, x: int, y: int, z: int) -> str | None:
    """Which Wang edge a slot encodes: ``"N"``, ``"E"``, ``"S"``, ``"W"`` or None."""
    if not isinstance(layout, EncoderLayout) or z % 2 or not 0 <= z < 2 * layout.p:
        return None
    t = layout.t
    if not 0 <= x < 4 * t:
        return None
    part = x // t
    if y == 2:
        return {1: "N", 2: "E"}.get(part)
    if y == 0:
        return {0: "W", 3: "S"}.get(part)
    return None


def _segment_color(layout: Layout, seg: str, z: int, wang: WangTileSet | None) -> str:
    if wang is None:
        return PALETTE["NESW".index(seg)]
    tile = wang.tiles[z // 2]
    c = {"N": tile.north, "E": tile.east, "S": tile.south, "W": tile.west}[seg]
    if wang.colors:
        return wang.colors[c]
    return PALETTE[c % len(PALETTE)]


def _extent(layout: Layout):
    xs = [x for x, _, _ in layout.slots]
    ys = [y for _, y, _ in layout.slots]
    return min(xs), max(xs), min(ys), max(ys)


def render_level2(layout: Layout, fmt: str = "text", wang: WangTileSet | None = None) -> str:
    """Block-id grid of every layer of a layout, bottom layer first.

    In text, empty slots are ``.``; each encoding layer of an encoder is
    followed by its north and south bit words.  In SVG, slots of the four
    edge segments are tinted with the edge color (taken from ``wang`` when
    given).
    """
    x0, x1, y0, y1 = _extent(layout)
    if fmt == "text":
        width = max(len(b) for b in layout.slots.values())
        chunks = [f"# {layout.name} ({layout.dim}D), columns x={x0}..{x1}, rows y={y1}..{y0}"]
        for z in layout.layers():
            layer = layout.layer(z)
            rows = [" ".join((layer.get((x, y)) or ".").ljust(width) for x in range(x0, x1 + 1)).rstrip()
                    for y in range(y1, y0 - 1, -1)]
            text = f"layer {z + 1}\n" + "\n".join(rows)
            if isinstance(layout, EncoderLayout) and z % 2 == 0 and z < 2 * layout.p:
                text += f"\nnorth {layout.north_words[z // 2]}\nsouth {layout.south_words[z // 2]}"
            chunks.append(text)
        return "\n\n".join(chunks) + "\n"
    if fmt != "svg":
        raise ValueError(f"unknown format {fmt!r}")
    nx, ny = x1 - x0 + 1, y1 - y0 + 1
    layers = layout.layers()
    panel_w = nx * SLOT_PX
    width = len(layers) * panel_w + (len(layers) + 1) * GAP_PX
    height = ny * SLOT_PX + 2 * GAP_PX + 14
    out = [_svg_head(width, height)]
    for n, z in enumerate(layers):
        px0 = GAP_PX + n * (panel_w + GAP_PX)
        py0 = GAP_PX + 14
        out.append(f'<text x="{px0}" y="{GAP_PX + 6}" font-size="12">Layer {z + 1}</text>')
        for (x, y), b in sorted(layout.layer(z).items()):
            seg = segment_of(layout, x, y, z)
            fill = _segment_color(layout, seg, z, wang) if seg else "#eeeeee"
            px = px0 + (x - x0) * SLOT_PX
            py = py0 + (y1 - y) * SLOT_PX
            out.append(f'<rect x="{px}" y="{py}" width="{SLOT_PX}" height="{SLOT_PX}" '
                       f'fill="{fill}" fill-opacity="0.45" stroke="{STROKE}" stroke-width="0.8"/>')
            out.append(f'<text x="{px + SLOT_PX // 2}" y="{py + SLOT_PX // 2 + 4}" font-size="11" '
                       f'text-anchor="middle">{escape(b)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
