"""Integer-lattice cell sets (polyforms) with translation-only semantics.

Axis convention used everywhere in the package:

    axis 0 = x (east +), axis 1 = y (north +), axis 2 = z (up +, layers
    are indexed bottom first), axis 3 = w (time, frames, future +).

A :class:`Polyform` is immutable.  Its cells are stored as a read-only
``(N, dim)`` int64 array sorted lexicographically with no duplicates, so two
polyforms are equal exactly when their arrays are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy import ndimage

# Dense painting is used for canonicalisation while the bounding box stays
# below this many cells; beyond it we fall back to lexsort.
_DENSE_LIMIT = 64_000_000

CUBE = 10


class GeometryError(ValueError):
    """Raised on dimension mismatches, empty inputs and overlapping unions."""


class OverlapError(GeometryError):
    def __init__(self, witness: tuple[int, ...]):
        super().__init__(f"polyforms overlap at cell {witness}")
        self.witness = witness


def _as_cells(cells, dim: int | None = None) -> np.ndarray:
    arr = np.asarray(cells, dtype=np.int64)
    if arr.size == 0:
        if dim is None:
            raise GeometryError("cannot infer dimension of an empty cell list")
        return np.zeros((0, dim), dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise GeometryError(f"cells must be an (N, dim) array, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise GeometryError(f"expected {dim}-dimensional cells, got {arr.shape[1]}")
    return arr


def _canonical(cells: np.ndarray) -> np.ndarray:
    """Sort lexicographically and drop duplicates."""
    if len(cells) == 0:
        return cells
    lo = cells.min(axis=0)
    shape = cells.max(axis=0) - lo + 1
    if int(np.prod(shape)) <= _DENSE_LIMIT:
        grid = np.zeros(tuple(shape), dtype=bool)
        grid[tuple((cells - lo).T)] = True
        return np.argwhere(grid).astype(np.int64) + lo
    order = np.lexsort(cells.T[::-1])
    cells = cells[order]
    keep = np.ones(len(cells), dtype=bool)
    keep[1:] = np.any(cells[1:] != cells[:-1], axis=1)
    return cells[keep]


@dataclass(frozen=True, eq=False)
class Polyform:
    """A finite set of unit cells of Z^dim."""

    cells: np.ndarray
    dim: int

    def __init__(self, cells, dim: int | None = None, *, _trusted: bool = False):
        arr = _as_cells(cells, dim)
        if not _trusted:
            arr = _canonical(arr)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "cells", arr)
        object.__setattr__(self, "dim", int(arr.shape[1]))

    @classmethod
    def empty(cls, dim: int) -> "Polyform":
        return cls(np.zeros((0, dim), dtype=np.int64), dim, _trusted=True)

    @classmethod
    def box(cls, shape: Sequence[int], origin: Sequence[int] | None = None) -> "Polyform":
        origin = np.zeros(len(shape), dtype=np.int64) if origin is None else np.asarray(origin)
        cells = np.argwhere(np.ones(tuple(shape), dtype=bool)).astype(np.int64) + origin
        return cls(cells, len(shape), _trusted=True)

    @classmethod
    def from_mask(cls, mask: np.ndarray, origin: Sequence[int] | None = None) -> "Polyform":
        mask = np.asarray(mask, dtype=bool)
        origin = np.zeros(mask.ndim, np.int64) if origin is None else np.asarray(origin, dtype=np.int64)
        out = cls(np.argwhere(mask).astype(np.int64) + origin, mask.ndim, _trusted=True)
        # keep the mask: connectivity checks on big tiles reuse it
        object.__setattr__(out, "_dense", (origin, mask))
        return out

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return (tuple(int(v) for v in c) for c in self.cells)

    def __contains__(self, cell) -> bool:
        c = np.asarray(cell, dtype=np.int64)
        return bool(np.any(np.all(self.cells == c, axis=1)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polyform):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.cells, other.cells)

    def __hash__(self) -> int:
        return hash((self.dim, self.cells.tobytes()))

    def __repr__(self) -> str:
        return f"Polyform(dim={self.dim}, volume={len(self)})"

    @property
    def volume(self) -> int:
        return len(self.cells)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Inclusive lower corner and exclusive upper corner."""
        if len(self) == 0:
            raise GeometryError("empty polyform has no bounds")
        cached = self.__dict__.get("_bounds")
        if cached is None:
            cached = (self.cells.min(axis=0), self.cells.max(axis=0) + 1)
            object.__setattr__(self, "_bounds", cached)
        return cached[0].copy(), cached[1].copy()

    def to_mask(self, origin=None, shape=None) -> np.ndarray:
        lo, hi = self.bounds()
        origin = lo if origin is None else np.asarray(origin, dtype=np.int64)
        shape = hi - origin if shape is None else np.asarray(shape, dtype=np.int64)
        if np.any(lo < origin) or np.any(hi > origin + shape):
            raise GeometryError("polyform does not fit in the requested box")
        dense = self.__dict__.get("_dense")
        if dense is not None:
            return _rebox(dense[1], dense[0], origin, shape)
        rel = self.cells - origin
        mask = np.zeros(tuple(int(s) for s in shape), dtype=bool)
        mask[tuple(rel.T)] = True
        return mask

    def translate(self, v) -> "Polyform":
        return translate(self, v)

    def normalized(self) -> "Polyform":
        """Translate so the coordinate-wise minimum sits at the origin."""
        if len(self) == 0:
            return self
        return translate(self, -self.cells.min(axis=0))

    def slice(self, axis: int, value: int) -> "Polyform":
        """Cells with coordinate ``value`` on ``axis``, that axis dropped."""
        sel = self.cells[self.cells[:, axis] == value]
        return Polyform(np.delete(sel, axis, axis=1), self.dim - 1, _trusted=True)


def _rebox(mask: np.ndarray, at: np.ndarray, origin: np.ndarray, shape: np.ndarray) -> np.ndarray:
    """Copy ``mask`` (placed at ``at``) into a fresh box; cells outside the
    box must already be known to be empty."""
    out = np.zeros(tuple(int(s) for s in shape), dtype=bool)
    lo = np.maximum(at, origin)
    hi = np.minimum(at + np.array(mask.shape), origin + shape)
    if np.all(hi > lo):
        src = tuple(slice(int(a - b), int(c - b)) for a, c, b in zip(lo, hi, at))
        dst = tuple(slice(int(a - b), int(c - b)) for a, c, b in zip(lo, hi, origin))
        out[dst] = mask[src]
    return out


def translate(p: Polyform, v) -> Polyform:
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (p.dim,):
        raise GeometryError(f"translation of length {v.size} for a {p.dim}-dimensional polyform")
    # lexicographic order is preserved by translation
    return Polyform(p.cells + v, p.dim, _trusted=True)


def volume(p: Polyform) -> int:
    return p.volume


def _check_same_dim(p: Polyform, q: Polyform) -> None:
    if p.dim != q.dim:
        raise GeometryError(f"dimension mismatch: {p.dim} vs {q.dim}")


def _first_common(p: Polyform, q: Polyform) -> tuple[int, ...] | None:
    if len(p) == 0 or len(q) == 0:
        return None
    lo = np.minimum(p.cells.min(axis=0), q.cells.min(axis=0))
    hi = np.maximum(p.cells.max(axis=0), q.cells.max(axis=0)) + 1
    if int(np.prod(hi - lo)) <= _DENSE_LIMIT:
        mask = p.to_mask(lo, hi - lo)
        hit = mask[tuple((q.cells - lo).T)]
        if not hit.any():
            return None
        common = q.cells[hit]
    else:
        pv = p.cells.view([("", np.int64)] * p.dim).ravel()
        qv = q.cells.view([("", np.int64)] * q.dim).ravel()
        common_v = np.intersect1d(pv, qv)
        if len(common_v) == 0:
            return None
        common = common_v.view(np.int64).reshape(-1, p.dim)
    return tuple(int(c) for c in _lexmin(common))


def _lexmin(cells: np.ndarray) -> np.ndarray:
    return cells[np.lexsort(cells.T[::-1])[0]]


def overlap_witness(p: Polyform, q: Polyform) -> tuple[int, ...] | None:
    """Lexicographically smallest common cell, or None."""
    _check_same_dim(p, q)
    return _first_common(p, q)


def disjoint(p: Polyform, q: Polyform) -> bool:
    return overlap_witness(p, q) is None


def union(p: Polyform, q: Polyform) -> Polyform:
    """Disjoint union; overlapping operands raise :class:`OverlapError`."""
    witness = overlap_witness(p, q)
    if witness is not None:
        raise OverlapError(witness)
    return Polyform(np.concatenate([p.cells, q.cells]), p.dim)


def union_all(parts: Iterable[Polyform], dim: int) -> Polyform:
    """Disjoint union of many polyforms, checked in one pass."""
    parts = [p for p in parts if len(p)]
    if not parts:
        return Polyform.empty(dim)
    for p in parts:
        if p.dim != dim:
            raise GeometryError(f"dimension mismatch: {p.dim} vs {dim}")
    cells = np.concatenate([p.cells for p in parts])
    lo = cells.min(axis=0)
    shape = cells.max(axis=0) - lo + 1
    if int(np.prod(shape)) > _DENSE_LIMIT:
        merged = _canonical(cells)
        if len(merged) != len(cells):
            raise OverlapError(_duplicate_witness(cells))
        return Polyform(merged, dim, _trusted=True)
    flat = np.ravel_multi_index(tuple((cells - lo).T), tuple(shape))
    counts = np.bincount(flat, minlength=int(np.prod(shape))).reshape(tuple(shape))
    if counts.max() > 1:
        witness = np.argwhere(counts > 1)[0] + lo
        raise OverlapError(tuple(int(c) for c in witness))
    out = Polyform(np.argwhere(counts).astype(np.int64) + lo, dim, _trusted=True)
    object.__setattr__(out, "_bounds", (lo, lo + shape))
    return out


def _duplicate_witness(cells: np.ndarray) -> tuple[int, ...]:
    order = np.lexsort(cells.T[::-1])
    s = cells[order]
    dup = np.flatnonzero(np.all(s[1:] == s[:-1], axis=1))
    return tuple(int(c) for c in s[dup[0]])


def difference(p: Polyform, q: Polyform) -> Polyform:
    _check_same_dim(p, q)
    if len(p) == 0 or len(q) == 0:
        return p
    lo = np.minimum(p.cells.min(axis=0), q.cells.min(axis=0))
    hi = np.maximum(p.cells.max(axis=0), q.cells.max(axis=0)) + 1
    mask = q.to_mask(lo, hi - lo)
    keep = ~mask[tuple((p.cells - lo).T)]
    return Polyform(p.cells[keep], p.dim, _trusted=True)


def components(p: Polyform) -> list[Polyform]:
    """Face-adjacency components, ordered by their smallest cell."""
    if len(p) == 0:
        raise GeometryError("empty polyform")
    lo, hi = p.bounds()
    mask = p.to_mask(lo, hi - lo)
    structure = ndimage.generate_binary_structure(p.dim, 1)
    labels, n = ndimage.label(mask, structure=structure)
    lab = labels[tuple((p.cells - lo).T)]
    out = [Polyform(p.cells[lab == k], p.dim, _trusted=True) for k in range(1, n + 1)]
    out.sort(key=lambda c: tuple(c.cells[0]))
    return out


def component_count(p: Polyform) -> int:
    if len(p) == 0:
        raise GeometryError("empty polyform")
    lo, hi = p.bounds()
    structure = ndimage.generate_binary_structure(p.dim, 1)
    return int(ndimage.label(p.to_mask(lo, hi - lo), structure=structure)[1])


def is_connected(p: Polyform) -> bool:
    return component_count(p) == 1


def same_up_to_translation(p: Polyform, q: Polyform) -> bool:
    if p.dim != q.dim or len(p) != len(q):
        return False
    if len(p) == 0:
        return True
    return p.normalized() == q.normalized()


def thicken(p: Polyform, frames: int) -> Polyform:
    """Extend a 3D polyform unchanged through ``frames`` time steps w = 0..frames-1."""
    if frames < 1:
        raise GeometryError("frames must be >= 1")
    if p.dim != 3:
        raise GeometryError("thicken expects a 3-dimensional polyform")
    n = len(p)
    w = np.repeat(np.arange(frames, dtype=np.int64), n)
    cells = np.concatenate([np.tile(p.cells, (frames, 1)), w[:, None]], axis=1)
    # (x,y,z) order is kept and w is the last key, so re-sort
    return Polyform(cells, 4)


# ---------------------------------------------------------------------------
# onion decomposition of the 10x10x10 cube


@lru_cache(maxsize=None)
def _shell_index_grid() -> np.ndarray:
    idx = np.indices((CUBE, CUBE, CUBE))
    dist = np.minimum(idx, CUBE - 1 - idx).min(axis=0)
    grid = dist + 1
    grid.setflags(write=False)
    return grid


@dataclass(frozen=True)
class OnionDecomposition:
    """Shells T1..T5 of the 10x10x10 cube K, T1 outermost."""

    shells: tuple[Polyform, ...]

    def __getitem__(self, i: int) -> Polyform:
        """1-based shell access: ``onion[1]`` is T1."""
        if not 1 <= i <= len(self.shells):
            raise IndexError(i)
        return self.shells[i - 1]

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.shells)

    def union_of(self, indices: Iterable[int]) -> Polyform:
        return union_all((self[i] for i in sorted(set(indices))), 3)


@lru_cache(maxsize=None)
def onion_shells() -> OnionDecomposition:
    """Peel K layer by layer: T_i = outer surface of K minus T_1..T_{i-1}.

    Each peel is computed literally as "cells of the remaining set with a
    face neighbour outside it", not from a distance formula.
    """
    remaining = np.ones((CUBE, CUBE, CUBE), dtype=bool)
    shells = []
    structure = ndimage.generate_binary_structure(3, 1)
    while remaining.any():
        padded = np.pad(remaining, 1, constant_values=False)
        interior = ndimage.binary_erosion(padded, structure=structure)[1:-1, 1:-1, 1:-1]
        surface = remaining & ~interior
        shells.append(Polyform.from_mask(surface))
        remaining = remaining & ~surface
    return OnionDecomposition(tuple(shells))


FrameSpec = frozenset  # a frame is the set of shell indices it contains

FULL_FRAME: frozenset[int] = frozenset(range(1, 6))
EMPTY_FRAME: frozenset[int] = frozenset()


def parse_frame(expr) -> frozenset[int]:
    """Parse a frame expression: ``"K"``, ``"0"``/``""``/``"empty"``, or
    shells joined by ``+`` / ``|`` such as ``"T1+T3+T5"``.  Iterables of
    shell indices are accepted as-is."""
    if isinstance(expr, (set, frozenset, list, tuple)):
        idx = frozenset(int(i) for i in expr)
    else:
        text = str(expr).strip().replace(" ", "")
        if text in ("K", "k"):
            return FULL_FRAME
        if text in ("", "0", "empty", "{}", "∅"):
            return EMPTY_FRAME
        idx = set()
        for part in text.replace("|", "+").split("+"):
            if len(part) < 2 or part[0] not in "Tt" or not part[1:].isdigit():
                raise GeometryError(f"malformed frame expression {expr!r}")
            idx.add(int(part[1:]))
        idx = frozenset(idx)
    if not idx <= FULL_FRAME:
        raise GeometryError(f"shell indices must lie in 1..5, got {sorted(idx)}")
    return idx


def frame_cells(frame) -> Polyform:
    return onion_shells().union_of(parse_frame(frame))


def compose_frames(frames: Sequence) -> Polyform:
    """4D polyform whose w-slice j is the 3D frame ``frames[j]``."""
    parts = []
    for j, frame in enumerate(frames):
        f = frame_cells(frame)
        if len(f):
            w = np.full((len(f), 1), j, dtype=np.int64)
            parts.append(np.concatenate([f.cells, w], axis=1))
    if not parts:
        return Polyform.empty(4)
    return Polyform(np.concatenate(parts), 4)


def frames_of(p: Polyform, count: int | None = None) -> list[Polyform]:
    """The 3D w-slices of a 4D polyform, frames 0..count-1."""
    if p.dim != 4:
        raise GeometryError("frames_of expects a 4-dimensional polyform")
    if count is None:
        count = int(p.cells[:, 3].max()) + 1 if len(p) else 0
    return [p.slice(3, j) for j in range(count)]


# ---------------------------------------------------------------------------
# ".poly" text format


def dumps_poly(p: Polyform) -> str:
    lines = [f"dim {p.dim}"]
    lines.extend(" ".join(str(int(v)) for v in c) for c in p.cells)
    return "\n".join(lines) + "\n"


def loads_poly(text: str) -> Polyform:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("dim"):
        raise GeometryError("missing 'dim n' header")
    try:
        dim = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise GeometryError(f"bad header {lines[0]!r}") from exc
    if len(lines) == 1:
        return Polyform.empty(dim)
    body = "\n".join(lines[1:])
    cells = np.loadtxt(body.splitlines(), dtype=np.int64, ndmin=2)
    if cells.shape[1] != dim:
        raise GeometryError(f"cells have {cells.shape[1]} coordinates, header says {dim}")
    return Polyform(cells, dim)


def write_poly(p: Polyform, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"dim {p.dim}\n")
        np.savetxt(fh, p.cells, fmt="%d")


def read_poly(path) -> Polyform:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2 or header[0] != "dim":
            raise GeometryError(f"{path}: missing 'dim n' header")
        dim = int(header[1])
        cells = np.loadtxt(fh, dtype=np.int64, ndmin=2)
    if cells.size == 0:
        return Polyform.empty(dim)
    if cells.shape[1] != dim:
        raise GeometryError(f"{path}: cells have {cells.shape[1]} coordinates, header says {dim}")
    return Polyform(cells, dim)
