"""Wang tile sets, the color bit code, and a periodic (torus) solver."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterator, Sequence


class WangError(ValueError):
    pass


@dataclass(frozen=True)
class WangTile:
    north: int
    east: int
    south: int
    west: int

    def edges(self) -> tuple[int, int, int, int]:
        return (self.north, self.east, self.south, self.west)


def code_length(q: int) -> int:
    """Bits per color word: ceil(log2 q) data bits plus a 0 prefix and 1 suffix."""
    if q < 1:
        raise WangError("q must be >= 1")
    return math.ceil(math.log2(q)) + 2 if q > 1 else 2


def encode_color(c: int, q: int) -> str:
    """Bit word of color ``c`` among ``q`` colors, e.g. ``encode_color(2, 4) == "0101"``."""
    if not 0 <= c < q:
        raise WangError(f"color {c} out of range for q={q}")
    bits = code_length(q) - 2
    body = format(c, f"0{bits}b") if bits else ""
    return "0" + body + "1"


@dataclass(frozen=True)
class WangTileSet:
    q: int
    tiles: tuple[WangTile, ...]
    colors: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.q < 1:
            raise WangError("q must be >= 1")
        if not self.tiles:
            raise WangError("a tile set needs at least one tile")
        for i, tile in enumerate(self.tiles):
            for c in tile.edges():
                if not 0 <= c < self.q:
                    raise WangError(f"tile {i}: color {c} out of range for q={self.q}")
        if self.colors and len(self.colors) != self.q:
            raise WangError("colors list must have q entries")

    @property
    def p(self) -> int:
        return len(self.tiles)

    @property
    def t(self) -> int:
        return code_length(self.q)

    def require_reducible(self) -> None:
        if self.p < 2:
            raise WangError("the reduction needs at least two Wang tiles (p >= 2)")

    def color_name(self, c: int) -> str:
        return self.colors[c] if self.colors else str(c)

    def to_dict(self) -> dict:
        d = {"q": self.q,
             "tiles": [{"n": t.north, "e": t.east, "s": t.south, "w": t.west} for t in self.tiles]}
        if self.colors:
            d["colors"] = list(self.colors)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "WangTileSet":
        try:
            tiles = tuple(WangTile(int(t["n"]), int(t["e"]), int(t["s"]), int(t["w"]))
                          for t in d["tiles"])
            return cls(int(d["q"]), tiles, tuple(d.get("colors", ())))
        except (KeyError, TypeError) as exc:
            raise WangError(f"malformed Wang set: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "WangTileSet":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise WangError(f"not a Wang set file: {exc}") from exc


def load_wang(path) -> WangTileSet:
    with open(path, encoding="utf-8") as fh:
        return WangTileSet.loads(fh.read())


def sample_set() -> WangTileSet:
    """The three-tile, four-color example set shipped with the package."""
    ref = resources.files("wangreduce") / "data" / "sample.wang"
    return WangTileSet.loads(ref.read_text(encoding="utf-8"))


def uniform_set(p: int = 2, q: int = 1) -> WangTileSet:
    """``p`` copies of a tile with color 0 on every edge."""
    return WangTileSet(q, tuple(WangTile(0, 0, 0, 0) for _ in range(p)))


# ---------------------------------------------------------------------------
# torus assignments


@dataclass(frozen=True)
class WangAssignment:
    """Tile indices on an a x b torus; ``grid[i][j]`` is the tile at column i
    (east +) and row j (north +)."""

    a: int
    b: int
    grid: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.grid) != self.a or any(len(col) != self.b for col in self.grid):
            raise WangError("assignment grid does not match its torus dimensions")

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.grid[i % self.a][j % self.b]

    def cells(self) -> Iterator[tuple[int, int]]:
        return itertools.product(range(self.a), range(self.b))

    def with_tile(self, i: int, j: int, tile: int) -> "WangAssignment":
        cols = [list(c) for c in self.grid]
        cols[i][j] = tile
        return WangAssignment(self.a, self.b, tuple(tuple(c) for c in cols))

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "grid": [list(c) for c in self.grid]}

    @classmethod
    def from_dict(cls, d: dict) -> "WangAssignment":
        return cls(int(d["a"]), int(d["b"]), tuple(tuple(int(v) for v in c) for c in d["grid"]))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "WangAssignment":
        """Build from ``rows[j][i]`` (row-major, south row first)."""
        b = len(rows)
        a = len(rows[0])
        return cls(a, b, tuple(tuple(rows[j][i] for j in range(b)) for i in range(a)))


def mismatches(W: WangTileSet, A: WangAssignment) -> list[tuple[tuple[int, int], str]]:
    """Every violated adjacency as ``((i, j), "east"|"north")``."""
    bad = []
    for i, j in A.cells():
        k = A[i, j]
        if not 0 <= k < W.p:
            raise WangError(f"tile index {k} at ({i},{j}) out of range")
        tile = W.tiles[k]
        right = A[i + 1, j]
        up = A[i, j + 1]
        if not 0 <= right < W.p or not 0 <= up < W.p:
            raise WangError("tile index out of range")
        if tile.east != W.tiles[right].west:
            bad.append(((i, j), "east"))
        if tile.north != W.tiles[up].south:
            bad.append(((i, j), "north"))
    return bad


def verify_wang(W: WangTileSet, A: WangAssignment) -> bool:
    return not mismatches(W, A)


def solve_torus(W: WangTileSet, a: int, b: int) -> WangAssignment | None:
    """First valid assignment on the a x b torus, or None.

    Cells are filled row by row (south to north, west to east) and each
    candidate is checked against its west and south neighbours; wrap-around
    constraints are checked when the last column / row is reached.  A
    forward check prunes a cell whose east (or north) neighbour would have
    no compatible tile.  Tiles are tried in input order, so the result is
    deterministic.
    """
    if a < 1 or b < 1:
        raise WangError("torus dimensions must be >= 1")
    tiles = W.tiles
    p = len(tiles)
    by_west: dict[int, list[int]] = {}
    by_south: dict[int, list[int]] = {}
    for k, tile in enumerate(tiles):
        by_west.setdefault(tile.west, []).append(k)
        by_south.setdefault(tile.south, []).append(k)
    grid = [[-1] * b for _ in range(a)]
    order = [(i, j) for j in range(b) for i in range(a)]

    def fits(k: int, i: int, j: int) -> bool:
        tile = tiles[k]
        if i > 0 and tiles[grid[i - 1][j]].east != tile.west:
            return False
        if j > 0 and tiles[grid[i][j - 1]].north != tile.south:
            return False
        # on a 1-wide torus the wrap-around neighbour is the cell itself
        if i == a - 1 and tile.east != tiles[k if a == 1 else grid[0][j]].west:
            return False
        if j == b - 1 and tile.north != tiles[k if b == 1 else grid[i][0]].south:
            return False
        # forward check on the east and north neighbours still to be placed
        if i < a - 1 and tile.east not in by_west:
            return False
        if j < b - 1 and tile.north not in by_south:
            return False
        return True

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        i, j = order[pos]
        for k in range(p):
            if fits(k, i, j):
                grid[i][j] = k
                if search(pos + 1):
                    return True
        grid[i][j] = -1
        return False

    if not search(0):
        return None
    return WangAssignment(a, b, tuple(tuple(col) for col in grid))


def find_periodic(W: WangTileSet, max_side: int = 4) -> WangAssignment | None:
    """Smallest torus (by area, then a) admitting a valid assignment."""
    shapes = sorted(((a, b) for a in range(1, max_side + 1) for b in range(1, max_side + 1)),
                    key=lambda ab: (ab[0] * ab[1], ab[0], ab[1]))
    for a, b in shapes:
        A = solve_torus(W, a, b)
        if A is not None:
            return A
    return None
