"""Catalog of building blocks and the layer-diagram text format.

3D blocks are read from the layer diagrams shipped in ``data/blocks``; each
lives in its canonical position inside the functional cube ``[0,10)^3``.
4D blocks are either thick copies of 3D blocks or are composed frame by
frame from the onion shells of the cube.

Layer-diagram text::

    layer 1
    ##########      <- north row (y = 9)
    ...
    ##########      <- south row (y = 0)

    layer 2
    ...

``#`` is a filled cell, ``.`` an empty one, columns run west to east and
layers bottom first.  An optional first line ``origin x y z`` shifts the
whole diagram.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .geometry import (
    CUBE,
    GeometryError,
    Polyform,
    compose_frames,
    difference,
    overlap_witness,
    same_up_to_translation,
    thicken,
    translate,
)

FILLED = "#"
EMPTY = "."

PAIRS_3D = (("u", "U"), ("d", "D"), ("x", "X"), ("y0", "Y0"), ("y1", "Y1"),
            ("t", "T"), ("e", "E"), ("l", "L"))
IDS_3D = tuple(b for pair in PAIRS_3D for b in pair)
IDS_4D = ("c4", "C4", "D4", "v4", "V4", "w4", "W4", "E4")

# frame lists, one 3D frame per time step
FRAMES_4D = {
    "c4": ["0", "T1+T2+T3+T5", "T1+T3+T5", "T1+T5", "K", "K", "K", "K", "K", "K"],
    "C4": ["K", "T4", "T2+T4", "T2+T3+T4", "0", "0", "0", "0", "0", "0"],
    "D4": ["0", "0", "0", "0", "0", "K", "T4", "T2+T4", "T2+T3+T4", "0"],
    "v4": ["0", "T1+T2+T3+T4", "T1+T3+T4", "T1", "K", "K", "K", "K", "K", "K"],
    "V4": ["K", "T5", "T2+T5", "T2+T3+T4+T5", "0", "0", "0", "0", "0", "0"],
    "w4": ["0", "T1+T2+T3+T4", "T1+T2+T4", "T1+T2", "K", "K", "K", "K", "K", "K"],
    "W4": ["K", "T5", "T3+T5", "T3+T4+T5", "0", "0", "0", "0", "0", "0"],
    "E4": ["T1+T2+T3", "T1+T2+T3", "T1+T3", "T1", "K", "K", "K", "K", "K", "K",
           "T4+T5", "T4+T5", "T2+T4+T5", "T2+T3+T4+T5"],
}

# (partner, time shift applied to the partner)
PARTNERS_4D = {
    "C4": ("c4", 0),
    "D4": ("c4", 5),
    "V4": ("v4", 0),
    "W4": ("w4", 0),
}

FC = "FC"
FH = "FH"


class UnknownBlockError(KeyError):
    pass


class LayerDiagramError(ValueError):
    pass


# ---------------------------------------------------------------------------
# layer diagrams


@dataclass(frozen=True)
class LayerDiagram:
    """A 3D polyform together with the box it is drawn in."""

    polyform: Polyform
    shape: tuple[int, int, int]
    origin: tuple[int, int, int] = (0, 0, 0)

    def text(self) -> str:
        return emit_layer_diagram(self.polyform, shape=self.shape, origin=self.origin)


def read_layer_diagram(text: str) -> LayerDiagram:
    origin = (0, 0, 0)
    layers: list[list[str]] = []
    current: list[str] | None = None
    expected = 1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            current = None
            continue
        if line.startswith("origin"):
            if layers:
                raise LayerDiagramError(f"line {lineno}: origin must come first")
            try:
                origin = tuple(int(v) for v in line.split()[1:])
            except ValueError as exc:
                raise LayerDiagramError(f"line {lineno}: bad origin") from exc
            if len(origin) != 3:
                raise LayerDiagramError(f"line {lineno}: origin needs 3 coordinates")
            continue
        if line.startswith("layer"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) != expected:
                raise LayerDiagramError(f"line {lineno}: expected 'layer {expected}'")
            expected += 1
            current = []
            layers.append(current)
            continue
        if current is None:
            raise LayerDiagramError(f"line {lineno}: grid row outside a layer")
        bad = set(line) - {FILLED, EMPTY}
        if bad:
            raise LayerDiagramError(f"line {lineno}: illegal characters {sorted(bad)}")
        current.append(line)
    if not layers:
        raise LayerDiagramError("no layers")
    nrows = len(layers[0])
    ncols = len(layers[0][0]) if nrows else 0
    for k, rows in enumerate(layers, 1):
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise LayerDiagramError(f"layer {k}: ragged grid")
    mask = np.zeros((ncols, nrows, len(layers)), dtype=bool)
    for z, rows in enumerate(layers):
        for r, row in enumerate(rows):
            y = nrows - 1 - r
            for x, ch in enumerate(row):
                mask[x, y, z] = ch == FILLED
    return LayerDiagram(Polyform.from_mask(mask, origin), (ncols, nrows, len(layers)), origin)


def parse_layer_diagram(text: str) -> Polyform:
    return read_layer_diagram(text).polyform


def emit_layer_diagram(p: Polyform, shape=None, origin=None) -> str:
    """Layer-diagram text for a 3D polyform.

    By default the box starts at the origin (or at the polyform's minimum
    if it has negative coordinates) and ends at its maximum.
    """
    if p.dim != 3:
        raise GeometryError("layer diagrams are 3-dimensional")
    if origin is None:
        origin = np.minimum(p.cells.min(axis=0), 0) if len(p) else np.zeros(3, np.int64)
    origin = np.asarray(origin, dtype=np.int64)
    if shape is None:
        shape = p.cells.max(axis=0) + 1 - origin if len(p) else np.ones(3, np.int64)
    mask = p.to_mask(origin, shape) if len(p) else np.zeros(tuple(shape), dtype=bool)
    nx, ny, nz = mask.shape
    chunks = []
    if np.any(origin != 0):
        chunks.append("origin " + " ".join(str(int(v)) for v in origin))
    for z in range(nz):
        rows = ["".join(FILLED if mask[x, y, z] else EMPTY for x in range(nx))
                for y in range(ny - 1, -1, -1)]
        chunks.append(f"layer {z + 1}\n" + "\n".join(rows))
    return "\n\n".join(chunks) + "\n"


# ---------------------------------------------------------------------------
# catalog


def _data_name(block_id: str) -> str:
    return block_id if block_id.islower() else f"cap_{block_id}"


@lru_cache(maxsize=None)
def layer_diagram_text(block_id: str) -> str:
    """The shipped layer-diagram transcription of a 3D block."""
    if block_id not in IDS_3D:
        raise UnknownBlockError(block_id)
    ref = resources.files("wangreduce") / "data" / "blocks" / f"{_data_name(block_id)}.txt"
    return ref.read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def block(block_id: str) -> Polyform:
    """Canonical shape of a building block inside its functional (hyper)cube."""
    if block_id == FC:
        return Polyform.box((CUBE,) * 3)
    if block_id == FH:
        return Polyform.box((CUBE,) * 4)
    if block_id in IDS_3D:
        diagram = read_layer_diagram(layer_diagram_text(block_id))
        if diagram.shape != (CUBE,) * 3:
            raise LayerDiagramError(f"{block_id}: diagram is not 10x10x10")
        return diagram.polyform
    if block_id in FRAMES_4D:
        return compose_frames(FRAMES_4D[block_id])
    raise UnknownBlockError(block_id)


@lru_cache(maxsize=None)
def thick(block_id: str, frames: int = CUBE) -> Polyform:
    """A 3D block (or FC) held unchanged for ``frames`` time steps."""
    return thicken(block(FC if block_id == FH else block_id), frames)


def all_block_ids() -> tuple[str, ...]:
    return IDS_3D + IDS_4D + (FC, FH)


def partner(block_id: str) -> str | None:
    for a, b in PAIRS_3D:
        if block_id == a:
            return b
        if block_id == b:
            return a
    if block_id in PARTNERS_4D:
        return PARTNERS_4D[block_id][0]
    if block_id == "c4":
        return "C4"
    if block_id in ("v4", "w4"):
        return block_id.upper()
    if block_id == "E4":
        return "E4"
    return None


def _fills_exactly(p: Polyform, q: Polyform, region: Polyform) -> bool:
    if len(p) + len(q) != len(region):
        return False
    if overlap_witness(p, q) is not None:
        return False
    return len(difference(difference(region, p), q)) == 0


def pair_complements(a: str, b: str) -> bool:
    """True iff blocks ``a`` and ``b`` are disjoint and fill the functional cube."""
    pa, pb = block(a), block(b)
    if pa.dim != 3 or pb.dim != 3:
        return frame_complements(a, b, 0)
    return _fills_exactly(pa, pb, block(FC))


def frame_complements(a: str, b: str, time_shift: int = 0) -> bool:
    """True iff ``a`` and ``b`` shifted by ``time_shift`` frames are disjoint
    and fill a 10x10x10x10 hypercube (at any time offset)."""
    return complement_witness(a, b, time_shift) is None


def complement_witness(a: str, b: str, time_shift: int = 0):
    """None if the pair fills a hypercube, otherwise ``(kind, cell)`` with
    kind ``"overlap"`` or ``"gap"``."""
    pa = block(a)
    pb = block(b)
    if pa.dim == 3:
        pa = thick(a)
    if pb.dim == 3:
        pb = thick(b)
    pb = translate(pb, (0, 0, 0, time_shift))
    hit = overlap_witness(pa, pb)
    if hit is not None:
        return ("overlap", hit)
    cells = np.concatenate([pa.cells, pb.cells])
    w0 = int(cells[:, 3].min())
    region = translate(block(FH), (0, 0, 0, w0))
    stray = difference(Polyform(cells, 4), region)
    if len(stray):
        return ("overlap", tuple(int(v) for v in stray.cells[0]))
    gap = difference(region, Polyform(cells, 4))
    if len(gap):
        return ("gap", tuple(int(v) for v in gap.cells[0]))
    return None


def stacked_fill(block_id: str, period: int) -> bool:
    """True iff copies of a 4D block repeated every ``period`` frames fill
    every frame they touch exactly (used for the 14-frame E4)."""
    p = block(block_id)
    shifted = translate(p, (0, 0, 0, period))
    if overlap_witness(p, shifted) is not None:
        return False
    hi = int(p.cells[:, 3].max()) + 1
    if hi <= period:
        return False
    # overlap window: frames period..hi-1 must be full K in the union
    both = Polyform(np.concatenate([p.cells, shifted.cells]), 4)
    window = both.cells[(both.cells[:, 3] >= period) & (both.cells[:, 3] < hi)]
    return len(window) == (hi - period) * CUBE ** 3


def u_and_d_are_translates() -> bool:
    return same_up_to_translation(block("U"), block("D"))
