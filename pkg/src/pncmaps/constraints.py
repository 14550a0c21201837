"""Singularity-removal constraints and constrained partial Latin squares.

At a singular fade every group of colliding cells must carry one symbol,
otherwise the minimum cluster distance is zero. For k1 != k2 the collisions
come in two closed-form pair families per row index i; on the unit circle
they are symmetric pairs plus one wrap-around chain of M cells.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellation import PskConfig
from .fades import PhaseClass, SingularFade
from .latin import EMPTY, Cell, GridMap

FAMILY_A = "A"
FAMILY_B = "B"


@dataclass(frozen=True)
class ConstraintSet:
    fade: SingularFade
    groups: tuple[tuple[Cell, ...], ...]

    @property
    def order(self) -> int:
        return self.fade.order

    def to_json(self) -> dict:
        return {"fade": self.fade.to_json(), "groups": [[list(c) for c in g] for g in self.groups]}

    @classmethod
    def from_json(cls, order: int, d: dict) -> "ConstraintSet":
        fade = SingularFade.from_json(order, d["fade"])
        return cls(fade, _canonical_groups([[tuple(c) for c in g] for g in d["groups"]]))

    def cell_sets(self) -> set[frozenset]:
        return {frozenset(g) for g in self.groups}


@dataclass(frozen=True)
class Cpls:
    """Constrained partial Latin square: one fresh symbol per constraint group."""

    grid: GridMap
    plex_degree: int | None
    symbol_count: int
    groups: tuple[tuple[Cell, ...], ...]


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> list[list]:
        out: dict = {}
        for x in list(self.parent):
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def _canonical_groups(groups) -> tuple[tuple[Cell, ...], ...]:
    gs = [tuple(sorted(set(g))) for g in groups]
    return tuple(sorted(g for g in gs if len(g) >= 2))


def formula_pairs(fade: SingularFade) -> list[tuple[str, int, Cell, Cell]]:
    """Closed-form colliding pairs (family, i, cell, cell) for k1 != k2.

    With k = k1, l = k2, h = M/2 and indices mod M, for each row i:
      family A: (i, i - m - h - p) ~ (i - k, i - m + h - q)
      family B: (i, i - m - q)     ~ (i - k, i - m - p)
    where p = (k - l)/2, q = (k + l)/2 for equal parity and
    p = (k + 1 - l)/2, q = (k + 1 + l)/2 for mixed parity.
    """
    M, k, l, m = fade.order, fade.k1, fade.k2, fade.m
    if k == l:
        raise ValueError("pair families are defined for k1 != k2")
    h = M // 2
    kk = k if fade.phase_class is PhaseClass.ALIGNED else k + 1
    p, q = (kk - l) // 2, (kk + l) // 2
    out = []
    for i in range(M):
        a = ((i, (i - m - h - p) % M), ((i - k) % M, (i - m + h - q) % M))
        b = ((i, (i - m - q) % M), ((i - k) % M, (i - m - p) % M))
        out.append((FAMILY_A, i, *a))
        out.append((FAMILY_B, i, *b))
    return out


def _unit_circle_links(fade: SingularFade) -> list[tuple[Cell, Cell]]:
    M, m = fade.order, fade.m
    links = []
    for a in range(M):
        for b in range(M):
            links.append(((a, b), ((b + m) % M, (a - m) % M)))
    chain = [((b + m + M // 2) % M, b) for b in range(M)]
    links += list(zip(chain, chain[1:]))
    return links


def _validate_fade(cfg: PskConfig, fade: SingularFade):
    if fade.order != cfg.m:
        raise ValueError(f"fade is for M={fade.order}, config has M={cfg.m}")
    if fade.k1 == fade.k2 and fade.k1 != 1:
        raise ValueError("unit-circle fades are indexed with k1 = k2 = 1")


def generate_constraints(cfg: PskConfig, fade: SingularFade) -> ConstraintSet:
    """Groups of cells that collide at `fade` (merged into connected groups)."""
    _validate_fade(cfg, fade)
    uf = _UnionFind()
    if fade.k1 == fade.k2:
        links = _unit_circle_links(fade)
    else:
        links = [(c1, c2) for _, _, c1, c2 in formula_pairs(fade)]
    for c1, c2 in links:
        if c1 != c2:
            uf.union(c1, c2)
    return ConstraintSet(fade, _canonical_groups(uf.groups()))


def combine_constraints(cs: ConstraintSet) -> ConstraintSet:
    """Merge each pair constraint at row index i with its partner at i + M/2.

    The 4-plex with 2M two-cell groups becomes a 4-plex with M four-cell
    groups, so the partial square uses M symbols.
    """
    fade = cs.fade
    M = fade.order
    if fade.k1 == fade.k2 or M // 2 in (fade.k1, fade.k2):
        raise ValueError("combining needs k1 != k2 and neither equal to M/2")
    pairs = {(fam, i): (c1, c2) for fam, i, c1, c2 in formula_pairs(fade)}
    groups = []
    for fam in (FAMILY_A, FAMILY_B):
        for i in range(M // 2):
            groups.append(pairs[(fam, i)] + pairs[(fam, i + M // 2)])
    merged = _canonical_groups(groups)
    if len({c for g in merged for c in g}) != sum(len(g) for g in merged):
        raise ValueError("combined groups overlap")
    return ConstraintSet(fade, merged)


def build_cpls(cs: ConstraintSet, rows: int | None = None, cols: int | None = None) -> Cpls:
    """Partial grid with symbol g on every cell of group g."""
    rows = rows or cs.order
    cols = cols or cs.order
    a = np.full((rows, cols), EMPTY, dtype=np.int64)
    for s, g in enumerate(cs.groups):
        for r, c in g:
            if a[r, c] != EMPTY:
                raise ValueError(f"cell {(r, c)} appears in two groups")
            a[r, c] = s
    grid = GridMap(a, max(len(cs.groups), 1))
    for line in list(a) + list(a.T):
        vals = line[line != EMPTY]
        if len(vals) != len(np.unique(vals)):
            raise ValueError("a constraint group has two cells in one row or column")
    filled = a != EMPTY
    per_row = set(filled.sum(axis=1).tolist())
    per_col = set(filled.sum(axis=0).tolist())
    plex = per_row.pop() if len(per_row) == 1 and per_row == per_col else None
    return Cpls(grid, plex, len(cs.groups), cs.groups)


def collision_groups(cfg: PskConfig, z: complex, tol: float = 1e-9) -> list:
    """Brute-force scan: connected groups of cells whose relay points coincide at z."""
    from .constellation import effective_constellation

    pts = effective_constellation(cfg, z)
    M = cfg.m
    flat = pts.ravel()
    close = np.abs(flat[:, None] - flat[None, :]) < tol
    uf = _UnionFind()
    for i, j in zip(*np.nonzero(np.triu(close, 1))):
        uf.union((int(i) // M, int(i) % M), (int(j) // M, int(j) % M))
    return list(_canonical_groups(uf.groups()))
