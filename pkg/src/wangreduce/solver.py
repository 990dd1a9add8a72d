"""Bounded exact-cover search for translational tilings of small regions.

Each candidate placement (tile, offset) is a row covering a set of region
cells.  The search is Knuth's Algorithm X over dict-of-sets columns, always
branching on the cell with the fewest candidates (ties broken by the
lowest cell index), so the traversal is deterministic.

:func:`naive_count` is an independent brute-force enumerator used as the
oracle for :func:`cross_validate`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .geometry import Polyform
from .lattice import BoxRegion, QuotientRegion
from .tiling import Placement, TilingCertificate

FIRST = "first"
COUNT = "count"

DEFAULT_MAX_CELLS = 100_000
ORACLE_MAX_CELLS = 64


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SolveResult:
    """``status`` is ``"solution"``, ``"none"``, ``"count"`` or ``"budget-exhausted"``."""

    status: str
    nodes: int
    certificate: TilingCertificate | None = None
    count: int | None = None

    @property
    def exhausted(self) -> bool:
        return self.status == "budget-exhausted"


class _BudgetExhausted(Exception):
    pass


def _named(tiles) -> dict[str, Polyform]:
    if isinstance(tiles, Mapping):
        named = dict(tiles)
    else:
        named = {f"tile{n}": p for n, p in enumerate(tiles)}
    if not named:
        raise SolverError("no tiles given")
    for name, p in named.items():
        if len(p) == 0:
            raise SolverError(f"tile {name!r} is empty")
    return named


def _offsets(tile: Polyform, region) -> np.ndarray:
    """Candidate translations of ``tile`` in ``region``."""
    if isinstance(region, QuotientRegion):
        grid = np.indices(region.box).reshape(region.dim, -1).T
        return grid
    lo, hi = tile.bounds()
    origin = np.zeros(region.dim, np.int64) if region.origin is None else np.asarray(region.origin)
    start = origin - lo
    stop = origin + np.asarray(region.shape) - hi  # hi is exclusive
    if np.any(stop < start):
        return np.zeros((0, region.dim), dtype=np.int64)
    ranges = [np.arange(a, b + 1) for a, b in zip(start, stop)]
    return np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, region.dim)


def placement_rows(tiles: Mapping[str, Polyform], region) -> list[tuple[str, tuple[int, ...], tuple[int, ...]]]:
    """All distinct ``(tile, offset, covered cell indices)`` rows.

    Placements that cover a cell twice (possible in small quotients) are
    dropped, as are repeats of an already listed cell set of the same tile.
    """
    rows = []
    for name, tile in tiles.items():
        if tile.dim != region.dim:
            raise SolverError(f"tile {name!r} is {tile.dim}D, region is {region.dim}D")
        seen: set[tuple[int, ...]] = set()
        for off in _offsets(tile, region):
            idx = region.index(tile.cells + off)
            if np.any(idx < 0):
                continue
            key = tuple(sorted(int(v) for v in idx))
            if len(set(key)) != len(key) or key in seen:
                continue
            seen.add(key)
            rows.append((name, tuple(int(v) for v in off), key))
    return rows


def solve(tiles, region, mode: str = FIRST, budget: int | None = None,
          max_cells: int = DEFAULT_MAX_CELLS) -> SolveResult:
    """Decide (``first``) or count (``count``) translational tilings of ``region``.

    ``tiles`` is a sequence of polyforms or a name -> polyform mapping.
    ``budget`` caps the number of search nodes; running out is reported as
    ``"budget-exhausted"``, never as ``"none"``.
    """
    if mode not in (FIRST, COUNT):
        raise SolverError(f"mode must be 'first' or 'count', got {mode!r}")
    if not isinstance(region, (BoxRegion, QuotientRegion)):
        raise SolverError("region must be a BoxRegion or QuotientRegion")
    if region.size > max_cells:
        raise SolverError(f"region has {region.size} cells, limit is {max_cells}")
    named = _named(tiles)
    rows = placement_rows(named, region)

    X: dict[int, set[int]] = {c: set() for c in range(region.size)}
    for r, (_, _, cells) in enumerate(rows):
        for c in cells:
            X[c].add(r)
    Y = [cells for _, _, cells in rows]

    nodes = 0
    count = 0
    partial: list[int] = []
    found: list[int] | None = None

    def cover(r: int) -> list[set[int]]:
        removed = []
        for j in Y[r]:
            for i in X[j]:
                for k in Y[i]:
                    if k != j:
                        X[k].discard(i)
            removed.append(X.pop(j))
        return removed

    def uncover(r: int, removed: list[set[int]]) -> None:
        for j in reversed(Y[r]):
            X[j] = removed.pop()
            for i in X[j]:
                for k in Y[i]:
                    if k != j:
                        X[k].add(i)

    def search() -> bool:
        nonlocal nodes, count, found
        nodes += 1
        if budget is not None and nodes > budget:
            raise _BudgetExhausted
        if not X:
            if mode == FIRST:
                found = list(partial)
                return True
            count += 1
            return False
        col = min(X, key=lambda c: (len(X[c]), c))
        for r in sorted(X[col]):
            partial.append(r)
            removed = cover(r)
            stop = search()
            uncover(r, removed)
            partial.pop()
            if stop:
                return True
        return False

    try:
        search()
    except _BudgetExhausted:
        return SolveResult("budget-exhausted", nodes - 1)
    if mode == COUNT:
        return SolveResult("count", nodes, count=count)
    if found is None:
        return SolveResult("none", nodes)
    placements = tuple(Placement(rows[r][0], rows[r][1]) for r in sorted(found))
    return SolveResult("solution", nodes, TilingCertificate(region, named, placements))


def naive_count(tiles, region, max_cells: int = ORACLE_MAX_CELLS) -> int:
    """Count tilings by plain depth-first search.

    Always fills the lowest uncovered cell and tries every placement that
    covers it; placements are enumerated directly from cell coordinates
    without the exact-cover machinery.
    """
    named = _named(tiles)
    if region.size > max_cells:
        raise SolverError(f"oracle is limited to {max_cells} cells")
    all_cells = [region.cell_of(i) for i in range(region.size)]
    placements: list[frozenset[int]] = []
    for name, tile in named.items():
        cells = [tuple(int(v) for v in c) for c in tile.cells]
        seen = set()
        for target in all_cells:
            # anchor the tile's first cell on every region cell
            shift = [t - c for t, c in zip(target, cells[0])]
            moved = np.array([[c + s for c, s in zip(cell, shift)] for cell in cells], dtype=np.int64)
            idx = region.index(moved)
            if any(i < 0 for i in idx):
                continue
            cover = frozenset(int(i) for i in idx)
            if len(cover) != len(cells) or cover in seen:
                continue
            seen.add(cover)
            placements.append(cover)

    def dfs(filled: frozenset[int]) -> int:
        if len(filled) == region.size:
            return 1
        first = next(i for i in range(region.size) if i not in filled)
        total = 0
        for cover in placements:
            if first in cover and not (cover & filled):
                total += dfs(filled | cover)
        return total

    return dfs(frozenset())


def cross_validate(tiles, region, max_cells: int = ORACLE_MAX_CELLS) -> bool:
    """Does the exact-cover count agree with the naive oracle?"""
    res = solve(tiles, region, COUNT, max_cells=max_cells)
    return res.count == naive_count(tiles, region, max_cells=max_cells)

