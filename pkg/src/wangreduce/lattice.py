"""Finite regions tilings are checked on: Z^n modulo a period lattice, or a box.

A :class:`QuotientRegion` keeps its lattice in row-style Hermite normal form
``H`` (upper triangular, positive diagonal).  Reducing a vector coordinate by
coordinate against the rows of ``H`` lands it in the box
``prod_i [0, H[i, i])``, which is a fundamental domain with exactly
``|det L|`` cells.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class LatticeError(ValueError):
    pass


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style HNF of the lattice spanned by ``rows``.

    Returns ``n`` rows (``n`` = ambient dimension) forming an upper
    triangular basis with positive diagonal and off-diagonal entries above
    the diagonal reduced into ``[0, H[j][j])``.  Raises if the rows do not
    span a full-rank lattice.
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        raise LatticeError("empty basis")
    n = len(m[0])
    if any(len(r) != n for r in m):
        raise LatticeError("basis rows have different lengths")
    out: list[list[int]] = []
    pool = m
    for col in range(n):
        pool = [r for r in pool if any(r)]
        while True:
            nz = [r for r in pool if r[col] != 0]
            if len(nz) <= 1:
                break
            pivot = min(nz, key=lambda r: abs(r[col]))
            for r in nz:
                if r is pivot:
                    continue
                q = r[col] // pivot[col]
                for k in range(n):
                    r[k] -= q * pivot[k]
        nz = [r for r in pool if r[col] != 0]
        if not nz:
            raise LatticeError("lattice is not full rank")
        pivot = nz[0]
        if pivot[col] < 0:
            pivot = [-v for v in pivot]
            pool = [r for r in pool if r is not nz[0]]
        else:
            pool = [r for r in pool if r is not pivot]
        out.append(pivot)
    for i in range(n):
        for j in range(i + 1, n):
            q = out[i][j] // out[j][j]
            if q:
                out[i] = [a - q * b for a, b in zip(out[i], out[j])]
    return out


@dataclass(frozen=True)
class QuotientRegion:
    """Z^n modulo the lattice spanned by ``basis`` (rows)."""

    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        h = hermite_normal_form(self.basis)
        object.__setattr__(self, "_hnf", np.array(h, dtype=np.int64))

    @classmethod
    def from_rows(cls, rows) -> "QuotientRegion":
        return cls(tuple(tuple(int(v) for v in r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.basis[0])

    @property
    def hnf(self) -> np.ndarray:
        return self._hnf

    @property
    def box(self) -> tuple[int, ...]:
        return tuple(int(v) for v in np.diag(self._hnf))

    @property
    def size(self) -> int:
        """Number of residue classes, ``|det L|``."""
        return int(np.prod(self.box, dtype=object))

    def contains(self, v) -> bool:
        """Is ``v`` a lattice vector?"""
        return not np.any(self.reduce(np.asarray(v, dtype=np.int64).reshape(1, -1)))

    def reduce(self, cells: np.ndarray) -> np.ndarray:
        cells = np.array(cells, dtype=np.int64, copy=True)
        if cells.ndim != 2 or cells.shape[1] != self.dim:
            raise LatticeError(f"expected (N, {self.dim}) cells")
        h = self._hnf
        for i in range(self.dim):
            k = np.floor_divide(cells[:, i], h[i, i])
            if np.any(k):
                cells -= k[:, None] * h[i]
        return cells

    def index(self, cells: np.ndarray) -> np.ndarray:
        r = self.reduce(cells)
        return np.ravel_multi_index(tuple(r.T), self.box)

    def cell_of(self, index: int) -> tuple[int, ...]:
        return tuple(int(v) for v in np.unravel_index(int(index), self.box))

    def describe(self) -> str:
        return "Z^%d / <%s>" % (self.dim, ", ".join(str(tuple(r)) for r in self.basis))


@dataclass(frozen=True)
class BoxRegion:
    """The cells ``origin + [0, shape)``; tiles may not stick out."""

    shape: tuple[int, ...]
    origin: tuple[int, ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def _origin(self) -> np.ndarray:
        return np.zeros(self.dim, np.int64) if self.origin is None else np.asarray(self.origin, np.int64)

    def inside(self, cells: np.ndarray) -> np.ndarray:
        rel = np.asarray(cells, dtype=np.int64) - self._origin
        return np.all((rel >= 0) & (rel < np.asarray(self.shape)), axis=1)

    def index(self, cells: np.ndarray) -> np.ndarray:
        """Flat index of each cell, or -1 for cells outside the box."""
        cells = np.asarray(cells, dtype=np.int64)
        ok = self.inside(cells)
        out = np.full(len(cells), -1, dtype=np.int64)
        if ok.any():
            rel = cells[ok] - self._origin
            out[ok] = np.ravel_multi_index(tuple(rel.T), self.shape)
        return out

    def cell_of(self, index: int) -> tuple[int, ...]:
        rel = np.unravel_index(int(index), self.shape)
        return tuple(int(a + b) for a, b in zip(rel, self._origin))

    def describe(self) -> str:
        return "box " + "x".join(map(str, self.shape))


def parse_box(text: str) -> BoxRegion:
    """``"3x3"`` or ``"10x10x10"``."""
    try:
        shape = tuple(int(v) for v in text.lower().split("x"))
    except ValueError as exc:
        raise LatticeError(f"bad box {text!r}") from exc
    if not shape or any(s < 1 for s in shape):
        raise LatticeError(f"bad box {text!r}")
    return BoxRegion(shape)


def read_lattice(path) -> QuotientRegion:
    """Lattice file: one basis row per line, whitespace separated."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                if line.startswith("lattice"):
                    line = line[len("lattice"):]
                rows.append([int(v) for v in line.split()])
    return QuotientRegion.from_rows(rows)
