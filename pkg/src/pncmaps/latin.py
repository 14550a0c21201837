"""Grid maps, clusterings and the isotopy operations used on them.

Rows are indexed by node A's symbol, columns by node B's symbol. Empty cells
of a partial grid hold -1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .constellation import PskConfig

EMPTY = -1

Cell = tuple[int, int]


@dataclass(frozen=True, eq=False)
class GridMap:
    cells: np.ndarray
    t: int
    provenance: dict | None = field(default=None)

    def __post_init__(self):
        arr = np.array(self.cells, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("grid must be two-dimensional")
        if arr.size and (arr.max() >= self.t or arr.min() < EMPTY):
            raise ValueError(f"symbols must lie in 0..{self.t - 1} (or be empty)")
        arr.setflags(write=False)
        object.__setattr__(self, "cells", arr)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], t: int | None = None, provenance=None) -> "GridMap":
        arr = np.array([[EMPTY if v is None else int(v) for v in r] for r in rows], dtype=np.int64)
        if t is None:
            t = int(arr.max()) + 1 if arr.size else 0
        return cls(arr, t, provenance)

    @classmethod
    def parse(cls, text: str, t: int | None = None) -> "GridMap":
        """Parse rows separated by '/' or newlines; '_' or '.' marks an empty cell."""
        rows = [r.split() for r in text.replace("/", "\n").strip().splitlines() if r.strip()]
        return cls.from_rows([[None if v in "_." else int(v) for v in r] for r in rows], t)

    @property
    def rows(self) -> int:
        return self.cells.shape[0]

    @property
    def cols(self) -> int:
        return self.cells.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    @property
    def is_partial(self) -> bool:
        return bool((self.cells == EMPTY).any())

    def __getitem__(self, idx):
        return self.cells[idx]

    def __eq__(self, other):
        if not isinstance(other, GridMap):
            return NotImplemented
        return self.t == other.t and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.t, self.cells.shape, self.cells.tobytes()))

    def __repr__(self):
        body = "/".join(" ".join("_" if v == EMPTY else str(v) for v in r) for r in self.cells)
        return f"GridMap(t={self.t}, {body})"

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "t": self.t,
            "cells": [[None if v == EMPTY else int(v) for v in r] for r in self.cells],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, d: dict) -> "GridMap":
        g = cls.from_rows(d["cells"], int(d["t"]), d.get("provenance"))
        if g.shape != (d["rows"], d["cols"]):
            raise ValueError("rows/cols do not match cells")
        return g

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class Clustering:
    """Partition of the grid cells into blocks, in canonical order.

    Each block is a sorted tuple of cells; blocks are ordered by their least
    cell. Symbol names are erased, so `blocks` is itself the canonical key.
    """

    shape: tuple[int, int]
    blocks: tuple[tuple[Cell, ...], ...]

    @classmethod
    def from_blocks(cls, shape, blocks: Iterable[Iterable[Cell]]) -> "Clustering":
        bl = [tuple(sorted((int(r), int(c)) for r, c in b)) for b in blocks]
        bl = [b for b in bl if b]
        bl.sort()
        seen = [c for b in bl for c in b]
        rows, cols = shape
        if len(seen) != len(set(seen)) or len(seen) != rows * cols:
            raise ValueError("blocks must partition the grid")
        return cls((int(rows), int(cols)), tuple(bl))

    @classmethod
    def from_labels(cls, labels: np.ndarray) -> "Clustering":
        labels = np.asarray(labels)
        groups: dict[int, list[Cell]] = {}
        for (r, c), v in np.ndenumerate(labels):
            if v == EMPTY:
                raise ValueError("clustering needs a fully filled grid")
            groups.setdefault(int(v), []).append((r, c))
        return cls.from_blocks(labels.shape, groups.values())

    @property
    def key(self) -> tuple:
        return self.blocks

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def labels(self) -> np.ndarray:
        """Grid of canonical block indices."""
        out = np.empty(self.shape, dtype=np.int64)
        for i, b in enumerate(self.blocks):
            for r, c in b:
                out[r, c] = i
        return out

    def to_grid(self) -> GridMap:
        return GridMap(self.labels(), self.n_blocks)

    def to_json(self) -> list:
        return [[list(c) for c in b] for b in self.blocks]

    @classmethod
    def from_json(cls, shape, blocks) -> "Clustering":
        return cls.from_blocks(shape, [[tuple(c) for c in b] for b in blocks])


def check_exclusive_law(g: GridMap) -> bool:
    """True iff the filled grid repeats no symbol in any row or column."""
    if g.is_partial:
        raise ValueError("exclusive law is defined on filled grids")
    return is_partial_latin(g)


def is_partial_latin(g: GridMap) -> bool:
    """No filled symbol repeats within a row or a column."""
    a = g.cells
    for line in list(a) + list(a.T):
        vals = line[line != EMPTY]
        if len(vals) != len(np.unique(vals)):
            return False
    return True


def to_clustering(g: GridMap) -> Clustering:
    return Clustering.from_labels(g.cells)


def cyclic_column_shift(g: GridMap, k: int) -> GridMap:
    """Output column j is input column (j + k) mod M."""
    return GridMap(np.roll(g.cells, -k, axis=1), g.t)


def transpose(g: GridMap) -> GridMap:
    return GridMap(g.cells.T.copy(), g.t)


def add_symbol_offset(g: GridMap, c: int) -> GridMap:
    a = g.cells.copy()
    a[a != EMPTY] += c
    return GridMap(a, g.t + c)


def delete_columns(g: GridMap, keep: Sequence[int]) -> GridMap:
    keep = list(keep)
    if not keep:
        raise ValueError("keep must be nonempty")
    if any(b <= a for a, b in zip(keep, keep[1:])) or keep[0] < 0 or keep[-1] >= g.cols:
        raise ValueError("keep must be strictly increasing column indices")
    return GridMap(g.cells[:, keep], g.t)


def xor_square(cfg: PskConfig) -> GridMap:
    i = np.arange(cfg.m)
    return GridMap(i[:, None] ^ i[None, :], cfg.m)


def shift_clustering(c: Clustering, k: int) -> Clustering:
    return Clustering.from_labels(np.roll(c.labels(), -k, axis=1))


def transpose_clustering(c: Clustering) -> Clustering:
    return Clustering.from_labels(c.labels().T)


def diagonal_shift_clustering(c: Clustering, k: int = 1) -> Clustering:
    """Move cell (i, j) to (i + k, j + k)."""
    return Clustering.from_labels(np.roll(c.labels(), (k, k), axis=(0, 1)))


def is_diagonal_invariant(c: Clustering) -> bool:
    return diagonal_shift_clustering(c) == c


def relabel_first_appearance(a: np.ndarray) -> np.ndarray:
    """Rename symbols in row-major order of first appearance."""
    out = np.full(a.shape, EMPTY, dtype=np.int64)
    names: dict[int, int] = {}
    for idx, v in np.ndenumerate(a):
        if v == EMPTY:
            continue
        if v not in names:
            names[v] = len(names)
        out[idx] = names[v]
    return out
