"""Compile a Wang tile set into polycube (3D) or polyhypercube (4D) tiles.

Tiles are laid out on a coarse grid of 10-cell building-block slots.  A
layout maps slot coordinates ``(x, y, z)`` to block ids; the tile geometry
is the disjoint union of each block translated to ``10 * slot``.  All slot
coordinates are relative to the tile's own frame:

* encoder: x = 0..4t-1 (west to east), y = 0 south row, 1 middle, 2 north
  row; z = 0..2p-1 layers, plus the bump slot at z = 2p.
* linker: the main body is the column x = 0, y = 0..2, z = 0..2p-1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import blocks
from .geometry import CUBE, OverlapError, Polyform, is_connected
from .wang import WangTileSet, encode_color

Slot = tuple[int, int, int]

# 3D block -> 4D block in the lifted encoder / linker
LIFT_4D = {"u": "D4", "d": "C4", "e": "w4", "E": "W4", "U": "c4", "D": "c4"}

BIT_BLOCK_3D = {"1": "u", "0": "d"}


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class Layout:
    """Slot map of one tile."""

    name: str
    dim: int
    slots: Mapping[Slot, str]

    def block_at(self, slot: Slot) -> str | None:
        return self.slots.get(slot)

    def count(self, block_id: str) -> int:
        return sum(1 for b in self.slots.values() if b == block_id)

    def layers(self) -> list[int]:
        return sorted({z for _, _, z in self.slots})

    def layer(self, z: int) -> dict[tuple[int, int], str]:
        return {(x, y): b for (x, y, zz), b in self.slots.items() if zz == z}

    def manifest(self) -> str:
        lines = [f"# {self.name} ({self.dim}D): slot x y z -> block"]
        for (x, y, z), b in sorted(self.slots.items(), key=lambda kv: (kv[0][2], kv[0][1], kv[0][0])):
            lines.append(f"{x} {y} {z} {b}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EncoderLayout(Layout):
    """Encoder slot map plus the bit words written on each encoding layer.

    ``north_words[e]`` / ``south_words[e]`` are the 4t-bit rows of encoding
    layer ``e`` (0-based, at tile layer z = 2e), read west to east.
    """

    t: int = 0
    p: int = 0
    north_words: tuple[str, ...] = ()
    south_words: tuple[str, ...] = ()

    @property
    def extents(self) -> tuple[int, int, int]:
        return (4 * self.t, 3, 2 * self.p)

    def encoding_layers(self) -> list[int]:
        return list(range(0, 2 * self.p, 2))

    def non_encoding_layers(self) -> list[int]:
        return list(range(1, 2 * self.p, 2))


@dataclass
class TileSet:
    dim: int
    wang: WangTileSet
    tiles: dict[str, Polyform] = field(default_factory=dict)
    layouts: dict[str, Layout] = field(default_factory=dict)

    @property
    def names(self) -> list[str]:
        return list(self.tiles)

    def __len__(self) -> int:
        return len(self.tiles)

    def all_connected(self) -> bool:
        return all(is_connected(p) for p in self.tiles.values())


# ---------------------------------------------------------------------------
# bit words


def north_word(W: WangTileSet, k: int) -> str:
    """[all ones][N][E][all zeros] for Wang tile ``k``."""
    tile = W.tiles[k]
    t = W.t
    return "1" * t + encode_color(tile.north, W.q) + encode_color(tile.east, W.q) + "0" * t


def south_word(W: WangTileSet, k: int) -> str:
    """[W][all zeros][all ones][S] for Wang tile ``k``."""
    tile = W.tiles[k]
    t = W.t
    return encode_color(tile.west, W.q) + "0" * t + "1" * t + encode_color(tile.south, W.q)


# ---------------------------------------------------------------------------
# assembly


def block_shape(block_id: str, dim: int) -> Polyform:
    if dim == 3:
        return blocks.block(block_id)
    if block_id in blocks.IDS_4D or block_id == blocks.FH:
        return blocks.block(block_id)
    return blocks.thick(block_id)


def _block_mask(block_id: str, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense occupancy of a block plus the corner it starts at."""
    shape = block_shape(block_id, dim)
    lo, hi = shape.bounds()
    return shape.to_mask(lo, hi - lo).astype(np.uint8), lo


def assemble(slots: Mapping[Slot, str], dim: int) -> Polyform:
    """Disjoint union of the blocks of a slot map.

    Blocks are painted into a dense counter spanning the slot box; any cell
    painted twice raises :class:`OverlapError` with that cell as witness.
    """
    if not slots:
        return Polyform.empty(dim)
    masks = {b: _block_mask(b, dim) for b in set(slots.values())}
    coarse = np.array(list(slots), dtype=np.int64)
    origin = np.concatenate([coarse.min(axis=0) * CUBE, np.zeros(dim - 3, np.int64)])
    time_lo = min(int(lo[3]) for _, lo in masks.values()) if dim == 4 else 0
    time_hi = max(int(lo[3]) + m.shape[3] for m, lo in masks.values()) if dim == 4 else 0
    if dim == 4:
        origin[3] = time_lo
    size = np.concatenate([(coarse.max(axis=0) - coarse.min(axis=0) + 1) * CUBE,
                           np.array([time_hi - time_lo] if dim == 4 else [], np.int64)])
    counts = np.zeros(tuple(int(v) for v in size), dtype=np.uint8)
    for (x, y, z), b in slots.items():
        mask, lo = masks[b]
        start = np.array([x, y, z] + [0] * (dim - 3), dtype=np.int64) * CUBE + lo - origin
        window = tuple(slice(int(a), int(a) + n) for a, n in zip(start, mask.shape))
        counts[window] += mask
    if counts.max() > 1:
        witness = np.argwhere(counts > 1)[0] + origin
        raise OverlapError(tuple(int(c) for c in witness))
    return Polyform.from_mask(counts.view(bool), origin)


def _check(W: WangTileSet) -> None:
    if not isinstance(W, WangTileSet):
        raise ReductionError("expected a WangTileSet")
    W.require_reducible()


def encoder3_layout(W: WangTileSet) -> EncoderLayout:
    _check(W)
    t, p = W.t, W.p
    slots: dict[Slot, str] = {}
    norths, souths = [], []
    for z in range(2 * p):
        if z % 2:
            for x in range(4 * t):
                for y in range(3):
                    slots[(x, y, z)] = "t"
            continue
        k = z // 2
        nw, sw = north_word(W, k), south_word(W, k)
        norths.append(nw)
        souths.append(sw)
        for x in range(4 * t):
            slots[(x, 0, z)] = BIT_BLOCK_3D[sw[x]]
            slots[(x, 1, z)] = blocks.FC
            slots[(x, 2, z)] = BIT_BLOCK_3D[nw[x]]
    slots[(1, 1, 0)] = "e"
    slots[(1, 1, 2 * p)] = "E"
    return EncoderLayout("encoder", 3, slots, t, p, tuple(norths), tuple(souths))


def encoder4_layout(W: WangTileSet) -> EncoderLayout:
    base = encoder3_layout(W)
    t, p = base.t, base.p
    slots = {s: LIFT_4D.get(b, b if b != blocks.FC else blocks.FH) for s, b in base.slots.items()}
    for z in base.encoding_layers():
        slots[(-1, 1, z)] = "V4"
        slots[(4 * t - 1, 1, z)] = "v4"
    slots[(2 * t - 1, 1, 0)] = "E4"
    return EncoderLayout("encoder", 4, slots, t, p, base.north_words, base.south_words)


def linker3_layout(W: WangTileSet, variant: str) -> Layout:
    """``variant`` is ``"U"`` or ``"D"``: the block attached north and south
    of the matching layer."""
    _check(W)
    if variant not in ("U", "D"):
        raise ReductionError(f"linker variant must be 'U' or 'D', got {variant!r}")
    p = W.p
    slots: dict[Slot, str] = {
        (0, -1, 0): variant,
        (0, 0, 0): blocks.FC,
        (0, 1, 0): "l",
        (0, 2, 0): blocks.FC,
        (0, 3, 0): variant,
    }
    for i in range(1, p + 1):
        z = 2 * i - 1
        small, big = ("y1", "Y1") if i == 1 else ("y0", "Y0")
        slots[(0, 0, z)] = "t"
        slots[(0, 1, z)] = small
        slots[(0, 2, z)] = blocks.FC
        for y in range(3, 7):
            slots[(0, y, z)] = "T"
        slots[(0, 7, z)] = big
    for j in range(1, p):
        z = 2 * j
        slots[(0, 0, z)] = blocks.FC
        slots[(0, 1, z)] = "x" if j == 1 else blocks.FC
        slots[(0, 2, z)] = blocks.FC
    slots[(1, 1, 2)] = "X"
    slots[(0, 1, 2 * p)] = "L"
    return Layout(f"linker_{variant}", 3, slots)


def linker4_layout(W: WangTileSet) -> Layout:
    base = linker3_layout(W, "U")
    slots = {s: LIFT_4D.get(b, b if b != blocks.FC else blocks.FH) for s, b in base.slots.items()}
    return Layout("linker", 4, slots)


# ---------------------------------------------------------------------------
# public builders


def build_encoder3(W: WangTileSet) -> tuple[Polyform, EncoderLayout]:
    layout = encoder3_layout(W)
    return assemble(layout.slots, 3), layout


def build_linker3(W: WangTileSet, variant: str = "U") -> Polyform:
    return assemble(linker3_layout(W, variant).slots, 3)


def build_filler3() -> Polyform:
    return blocks.block("U")


def build_tileset3(W: WangTileSet) -> TileSet:
    encoder, enc_layout = build_encoder3(W)
    ts = TileSet(3, W)
    ts.tiles["encoder"] = encoder
    ts.layouts["encoder"] = enc_layout
    for v in ("U", "D"):
        layout = linker3_layout(W, v)
        ts.tiles[layout.name] = assemble(layout.slots, 3)
        ts.layouts[layout.name] = layout
    ts.tiles["filler"] = build_filler3()
    ts.layouts["filler"] = Layout("filler", 3, {(0, 0, 0): "U"})
    return ts


def build_encoder4(W: WangTileSet) -> tuple[Polyform, EncoderLayout]:
    layout = encoder4_layout(W)
    return assemble(layout.slots, 4), layout


def build_linker4(W: WangTileSet) -> Polyform:
    return assemble(linker4_layout(W).slots, 4)


def build_filler4() -> Polyform:
    return blocks.block("c4")


def build_tileset4(W: WangTileSet) -> TileSet:
    encoder, enc_layout = build_encoder4(W)
    ts = TileSet(4, W)
    ts.tiles["encoder"] = encoder
    ts.layouts["encoder"] = enc_layout
    layout = linker4_layout(W)
    ts.tiles["linker"] = assemble(layout.slots, 4)
    ts.layouts["linker"] = layout
    ts.tiles["filler"] = build_filler4()
    ts.layouts["filler"] = Layout("filler", 4, {(0, 0, 0): "c4"})
    return ts


def build_tileset(W: WangTileSet, dim: int) -> TileSet:
    if dim == 3:
        return build_tileset3(W)
    if dim == 4:
        return build_tileset4(W)
    raise ReductionError(f"dimension must be 3 or 4, got {dim}")


def brick_match(W: WangTileSet, lower: int, upper_west: int, upper_east: int) -> bool:
    """Do the words of encoding layers agree across a brick seam?

    ``lower`` is the tile whose north row is covered, ``upper_west`` the tile
    of the encoder 2t blocks to the west on the next row (its east half sits
    above the west half of ``lower``), ``upper_east`` the one 2t blocks east.
    """
    t = W.t
    nw = north_word(W, lower)
    above = south_word(W, upper_west)[2 * t:] + south_word(W, upper_east)[:2 * t]
    return nw == above
