"""Tiling certificates: build them from periodic Wang tilings and verify them.

A certificate is a list of ``(tile id, translation)`` placements over a
finite region.  It is verified by reducing every placed cell into the region
and counting: each residue class must be hit exactly once.

The builders lay the tiles out as follows (coarse block units):

* Wang cell ``(i, j)`` gets an encoder whose slot origin is
  ``(2t(i - j), 6(i + j), -2k)`` where ``k`` is the 0-based tile index.  The
  shear makes the north-west neighbour the Wang north neighbour and the
  north-east neighbour the Wang east neighbour, so rows form a brick wall.
  The vertical lift puts encoding layer ``k`` at height 0, the matching layer.
* Directly north of every encoder, at height 0, sits a row of ``4t`` linkers.
  Each one bridges one bit of the encoder's north word and the matching bit of
  the south words above it; its variant equals that bit.
* Every u/d slot on a non-matching encoding layer gets a filler.

In 4D the same layout is used, linkers over a 1-bit are shifted 5 frames
into the future, and fillers sit at time 0 (0-bits) or 5 (1-bits).  The
region has time period 10.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .geometry import CUBE, Polyform, read_poly, write_poly
from .lattice import BoxRegion, QuotientRegion
from .reduction import TileSet, build_tileset
from .wang import WangAssignment, WangTileSet, mismatches

# dense coverage counter up to this many residue classes, sort-based beyond
_DENSE_COUNT_LIMIT = 200_000_000

TIME_PERIOD = 10
# slot of the l block inside a linker; its south-west bottom corner is the
# linker's representative point
LINKER_REP_SLOT = (0, 1, 0)


class TilingError(ValueError):
    pass


@dataclass(frozen=True)
class Placement:
    tile: str
    offset: tuple[int, ...]

    def line(self) -> str:
        return " ".join([self.tile] + [str(v) for v in self.offset])


@dataclass(frozen=True)
class TilingCertificate:
    region: QuotientRegion | BoxRegion
    tiles: Mapping[str, Polyform]
    placements: tuple[Placement, ...]
    params: Mapping[str, int] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.region.dim

    def count(self, tile: str) -> int:
        return sum(1 for pl in self.placements if pl.tile == tile)

    def with_placements(self, placements: Sequence[Placement]) -> "TilingCertificate":
        return replace(self, placements=tuple(placements))

    def without(self, index: int) -> "TilingCertificate":
        pls = list(self.placements)
        del pls[index]
        return self.with_placements(pls)

    def plus(self, placement: Placement) -> "TilingCertificate":
        return self.with_placements(self.placements + (placement,))

    def swapped(self, index: int, placement: Placement) -> "TilingCertificate":
        pls = list(self.placements)
        pls[index] = placement
        return self.with_placements(pls)

    def indices_of(self, tile_prefix: str) -> list[int]:
        return [n for n, pl in enumerate(self.placements) if pl.tile.startswith(tile_prefix)]


@dataclass(frozen=True)
class Verdict:
    """Outcome of :func:`verify_partition`.

    ``kind`` is ``"uncovered"``, ``"double-covered"`` or, for box regions,
    ``"outside"`` (a placed cell lies outside the box).
    """

    ok: bool
    kind: str | None = None
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return f"violation: {self.kind} at {self.witness}"


# ---------------------------------------------------------------------------
# verification


def _check_certificate(cert: TilingCertificate) -> None:
    for pl in cert.placements:
        tile = cert.tiles.get(pl.tile)
        if tile is None:
            raise TilingError(f"placement references unknown tile {pl.tile!r}")
        if tile.dim != cert.dim or len(pl.offset) != cert.dim:
            raise TilingError(f"dimension mismatch in placement {pl.line()!r}")


def _placed_indices(cert: TilingCertificate) -> np.ndarray:
    total = sum(len(cert.tiles[pl.tile]) for pl in cert.placements)
    out = np.empty(total, dtype=np.int64)
    pos = 0
    for pl in cert.placements:
        cells = cert.tiles[pl.tile].cells
        n = len(cells)
        out[pos:pos + n] = cert.region.index(cells + np.asarray(pl.offset, dtype=np.int64))
        pos += n
    return out


def verify_partition(cert: TilingCertificate) -> Verdict:
    """Exact-partition check of a certificate.

    The witness is the smallest residue-class index (in the region's own
    row-major order) that is not covered exactly once.
    """
    _check_certificate(cert)
    region = cert.region
    idx = _placed_indices(cert)
    if isinstance(region, BoxRegion) and np.any(idx < 0):
        for pl in cert.placements:
            cells = cert.tiles[pl.tile].cells + np.asarray(pl.offset, dtype=np.int64)
            bad = ~region.inside(cells)
            if bad.any():
                return Verdict(False, "outside", tuple(int(v) for v in cells[bad][0]))
    size = region.size
    if size <= _DENSE_COUNT_LIMIT:
        counts = np.bincount(idx, minlength=size)
        bad = np.flatnonzero(counts != 1)
        if len(bad) == 0:
            return Verdict(True)
        first = int(bad[0])
        kind = "uncovered" if counts[first] == 0 else "double-covered"
        return Verdict(False, kind, region.cell_of(first))
    idx.sort()
    dup = np.flatnonzero(idx[1:] == idx[:-1])
    first_dup = int(idx[dup[0]]) if len(dup) else None
    uniq = np.unique(idx)
    first_gap = None
    if len(uniq) < size:
        miss = np.flatnonzero(uniq != np.arange(len(uniq)))
        first_gap = int(miss[0]) if len(miss) else len(uniq)
    if first_dup is None and first_gap is None:
        return Verdict(True)
    if first_gap is None or (first_dup is not None and first_dup < first_gap):
        return Verdict(False, "double-covered", region.cell_of(first_dup))
    return Verdict(False, "uncovered", region.cell_of(first_gap))


def placed_volume(cert: TilingCertificate) -> int:
    return sum(len(cert.tiles[pl.tile]) for pl in cert.placements)


def volume_conserved(cert: TilingCertificate) -> bool:
    """Total placed volume equals the number of cells in the region."""
    return placed_volume(cert) == cert.region.size


# ---------------------------------------------------------------------------
# builders


def _lattice_rows(t: int, p: int, a: int, b: int, z_periods: int, dim: int) -> list[list[int]]:
    rows = [
        [a * 20 * t, a * 60, 0],
        [-b * 20 * t, b * 60, 0],
        [0, 0, 20 * p * z_periods],
    ]
    if dim == 4:
        rows = [r + [0] for r in rows] + [[0, 0, 0, TIME_PERIOD]]
    return rows


def _check_assignment(W: WangTileSet, A: WangAssignment, check: bool) -> None:
    for i, j in A.cells():
        if not 0 <= A[i, j] < W.p:
            raise TilingError(f"tile index {A[i, j]} at ({i},{j}) out of range")
    if check:
        bad = mismatches(W, A)
        if bad:
            (i, j), side = bad[0]
            raise TilingError(f"assignment is not a valid Wang tiling: {side} edge of ({i},{j})")


def encoder_origin(W: WangTileSet, i: int, j: int, k: int) -> tuple[int, int, int]:
    """Coarse slot origin of the encoder for Wang cell ``(i, j)`` holding tile ``k``."""
    t = W.t
    return (2 * t * (i - j), 6 * (i + j), -2 * k)


def _build(W: WangTileSet, A: WangAssignment, dim: int, check: bool, z_periods: int,
           tileset: TileSet | None) -> TilingCertificate:
    if not isinstance(A, WangAssignment):
        raise TilingError("expected a WangAssignment")
    if z_periods < 1:
        raise TilingError("z_periods must be >= 1")
    W.require_reducible()
    _check_assignment(W, A, check)
    ts = tileset if tileset is not None else build_tileset(W, dim)
    if ts.dim != dim:
        raise TilingError(f"tile set is {ts.dim}D, expected {dim}D")
    layout = ts.layouts["encoder"]
    t, p = W.t, W.p

    def cells_of(slot, extra=(0, 0, 0), time=0):
        v = tuple(CUBE * s + e for s, e in zip(slot, extra))
        return v + ((time,) if dim == 4 else ())

    placements: list[Placement] = []
    for m in range(z_periods):
        lift = 2 * p * m
        for i, j in A.cells():
            k = A[i, j]
            ox, oy, oz = encoder_origin(W, i, j, k)
            oz += lift
            placements.append(Placement("encoder", cells_of((ox, oy, oz))))
            north = layout.north_words[k]
            for s in range(4 * t):
                bit = north[s]
                slot = (ox + s, oy + 3, lift)
                if dim == 3:
                    placements.append(Placement("linker_U" if bit == "1" else "linker_D", cells_of(slot)))
                else:
                    placements.append(Placement("linker", cells_of(slot, time=5 if bit == "1" else 0)))
            for e in range(p):
                if e == k:
                    continue
                z = oz + 2 * e
                for row, word in ((0, layout.south_words[e]), (2, layout.north_words[e])):
                    for s in range(4 * t):
                        slot = (ox + s, oy + row, z)
                        bit = word[s]
                        if dim == 3:
                            extra = (0, 0, 0) if bit == "1" else (0, 0, -5)
                            placements.append(Placement("filler", cells_of(slot, extra)))
                        else:
                            placements.append(Placement("filler", cells_of(slot, time=5 if bit == "1" else 0)))
    region = QuotientRegion.from_rows(_lattice_rows(t, p, A.a, A.b, z_periods, dim))
    params = {"t": t, "p": p, "a": A.a, "b": A.b, "z_periods": z_periods}
    return TilingCertificate(region, dict(ts.tiles), tuple(placements), params)


def build_tiling3(W: WangTileSet, A: WangAssignment, *, check: bool = True, z_periods: int = 1,
                  tileset: TileSet | None = None) -> TilingCertificate:
    """Certificate for the 3D tiles of ``W`` built from the periodic Wang tiling ``A``.

    ``check=False`` skips the Wang adjacency check so that mismatched
    assignments can be built and shown to fail verification.  ``z_periods``
    repeats the construction that many times vertically inside the region.
    """
    return _build(W, A, 3, check, z_periods, tileset)


def build_tiling4(W: WangTileSet, A: WangAssignment, *, check: bool = True, z_periods: int = 1,
                  tileset: TileSet | None = None) -> TilingCertificate:
    """4D counterpart of :func:`build_tiling3`; the region has time period 10."""
    return _build(W, A, 4, check, z_periods, tileset)


def build_tiling(W: WangTileSet, A: WangAssignment, dim: int, **kwargs) -> TilingCertificate:
    if dim == 3:
        return build_tiling3(W, A, **kwargs)
    if dim == 4:
        return build_tiling4(W, A, **kwargs)
    raise TilingError(f"dimension must be 3 or 4, got {dim}")


# ---------------------------------------------------------------------------
# structural checks on built certificates


def _space_region(cert: TilingCertificate) -> QuotientRegion:
    """The region projected onto its first three coordinates."""
    region = cert.region
    if not isinstance(region, QuotientRegion):
        raise TilingError("structural checks need a quotient region")
    if cert.dim == 3:
        return region
    rows = [r[:3] for r in region.basis if any(r[:3])]
    return QuotientRegion.from_rows(rows)


def _param(cert: TilingCertificate, name: str) -> int:
    try:
        return int(cert.params[name])
    except KeyError as exc:
        raise TilingError(f"certificate has no {name!r} parameter") from exc


def _offsets(cert: TilingCertificate, prefix: str) -> np.ndarray:
    rows = [pl.offset[:3] for pl in cert.placements if pl.tile.startswith(prefix)]
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


def linker_points(cert: TilingCertificate) -> np.ndarray:
    """Spatial representative points of all linker placements."""
    offs = _offsets(cert, "linker")
    return offs + CUBE * np.array(LINKER_REP_SLOT, dtype=np.int64)


def linker_basis(cert: TilingCertificate) -> tuple[int, int, int]:
    return (CUBE, 6 * CUBE, 2 * CUBE * _param(cert, "p"))


def linker_lattice_check(cert: TilingCertificate) -> bool:
    """Do the linker representative points form the lattice
    ``{(10x, 60y, 20pz)}`` inside the region, with no gaps or repeats?

    In 4D the check runs on the spatial projection.
    """
    pts = linker_points(cert)
    if len(pts) == 0:
        raise TilingError("certificate has no linkers")
    region = _space_region(cert)
    basis = np.array(linker_basis(cert), dtype=np.int64)
    # the region's periods must lie in the linker lattice
    if np.any(region.hnf % basis[None, :]):
        return False
    if np.any((pts - pts[0]) % basis):
        return False
    idx = region.index(pts)
    if len(np.unique(idx)) != len(idx):
        return False
    return len(idx) * int(np.prod(basis)) == region.size


def encoder_column_check(cert: TilingCertificate) -> bool:
    """Are encoder placements vertically periodic with period 20p?

    Every encoder shifted up by 20p cells must coincide, modulo the region,
    with another encoder.  In 4D the check runs on the spatial projection
    (each time slice carries the same encoders).
    """
    offs = _offsets(cert, "encoder")
    if len(offs) == 0:
        return False
    region = _space_region(cert)
    step = np.array([0, 0, 2 * CUBE * _param(cert, "p")], dtype=np.int64)
    here = set(region.index(offs).tolist())
    return all(set(region.index(offs + s).tolist()) <= here for s in (step, -step))


def time_alignment_check(cert: TilingCertificate) -> bool:
    """4D only: all encoder time offsets agree modulo 10."""
    if cert.dim != 4:
        raise TilingError("time alignment is a 4D check")
    ws = {pl.offset[3] % TIME_PERIOD for pl in cert.placements if pl.tile == "encoder"}
    return len(ws) <= 1


def matching_layer_check(cert: TilingCertificate) -> bool:
    """Do the encoders form a brick wall in plan view?

    Each encoder must have encoders at ``(+-20t, 60)`` cells (its north-east
    and north-west neighbours), and the encoders must be pairwise distinct
    in plan modulo the region.
    """
    offs = _offsets(cert, "encoder")
    if len(offs) == 0:
        return False
    t = _param(cert, "t")
    region = _space_region(cert)
    rows = [r[:2] for r in region.basis if any(r[:2])]
    plan = QuotientRegion.from_rows(rows)
    xy = offs[:, :2]
    here = plan.index(xy)
    per_column = _param(cert, "z_periods")
    if len(here) != per_column * len(np.unique(here)):
        return False
    known = set(here.tolist())
    for step in ((20 * t, 60), (-20 * t, 60)):
        if not set(plan.index(xy + np.array(step)).tolist()) <= known:
            return False
    return True


def shift_encoder(cert: TilingCertificate, index: int, frames: int) -> TilingCertificate:
    """Copy of a 4D certificate with the ``index``-th encoder moved in time."""
    enc = cert.indices_of("encoder")
    n = enc[index]
    pl = cert.placements[n]
    off = list(pl.offset)
    off[3] += frames
    return cert.swapped(n, Placement(pl.tile, tuple(off)))


def flip_linker(cert: TilingCertificate, index: int) -> TilingCertificate:
    """Copy of a 3D certificate with the ``index``-th linker's variant flipped."""
    lk = cert.indices_of("linker_")
    n = lk[index]
    pl = cert.placements[n]
    other = "linker_D" if pl.tile == "linker_U" else "linker_U"
    return cert.swapped(n, Placement(other, pl.offset))


# ---------------------------------------------------------------------------
# certificate files


def dumps_certificate(cert: TilingCertificate, tile_paths: Mapping[str, str]) -> str:
    region = cert.region
    if not isinstance(region, QuotientRegion):
        raise TilingError("only quotient-region certificates can be written")
    lines = ["# tiling certificate", f"dim {cert.dim}"]
    for name, value in cert.params.items():
        lines.append(f"param {name} {int(value)}")
    for row in region.basis:
        lines.append("lattice " + " ".join(str(v) for v in row))
    for name in cert.tiles:
        lines.append(f"tile {name} {tile_paths[name]}")
    lines.append(f"placements {len(cert.placements)}")
    lines.extend(pl.line() for pl in cert.placements)
    return "\n".join(lines) + "\n"


def write_certificate(cert: TilingCertificate, path, tile_dir: str = "tiles") -> None:
    """Write the certificate and its tiles (as ``.poly`` files under
    ``tile_dir``, relative to the certificate's directory)."""
    base = os.path.dirname(os.path.abspath(path))
    os.makedirs(os.path.join(base, tile_dir), exist_ok=True)
    paths = {}
    for name, tile in cert.tiles.items():
        rel = f"{tile_dir}/{name}.poly"
        write_poly(tile, os.path.join(base, rel))
        paths[name] = rel
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_certificate(cert, paths))


def read_certificate(path) -> TilingCertificate:
    base = os.path.dirname(os.path.abspath(path))
    dim = None
    params: dict[str, int] = {}
    rows: list[list[int]] = []
    tiles: dict[str, Polyform] = {}
    placements: list[Placement] = []
    expected = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if expected is not None:
                    placements.append(Placement(parts[0], tuple(int(v) for v in parts[1:])))
                elif parts[0] == "dim":
                    dim = int(parts[1])
                elif parts[0] == "param":
                    params[parts[1]] = int(parts[2])
                elif parts[0] == "lattice":
                    rows.append([int(v) for v in parts[1:]])
                elif parts[0] == "tile":
                    tiles[parts[1]] = read_poly(os.path.join(base, parts[2]))
                elif parts[0] == "placements":
                    expected = int(parts[1])
                else:
                    raise TilingError(f"{path}:{lineno}: unknown header line {parts[0]!r}")
            except (IndexError, ValueError) as exc:
                raise TilingError(f"{path}:{lineno}: malformed line") from exc
    if dim is None or not rows or expected is None:
        raise TilingError(f"{path}: incomplete header")
    if len(placements) != expected:
        raise TilingError(f"{path}: expected {expected} placements, found {len(placements)}")
    region = QuotientRegion.from_rows(rows)
    if region.dim != dim:
        raise TilingError(f"{path}: lattice rows do not match dim {dim}")
    return TilingCertificate(region, tiles, tuple(placements), params)


__all__ = [
    "Placement", "TilingCertificate", "TilingError", "Verdict",
    "build_tiling", "build_tiling3", "build_tiling4", "dumps_certificate",
    "encoder_column_check", "encoder_origin", "flip_linker", "linker_basis",
    "linker_lattice_check", "linker_points", "matching_layer_check", "placed_volume",
    "read_certificate", "shift_encoder", "time_alignment_check", "verify_partition",
    "volume_conserved", "write_certificate",
]
