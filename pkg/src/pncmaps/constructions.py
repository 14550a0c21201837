"""Explicit Latin-square constructions.

* odd-pair squares: for odd k, l a single square removes every fade of the
  circles (nk, nl), n odd, for half of the phase indices; the two variants
  (even_start / odd_start) split the phases between them.
* quadruplicate lift: a square for M/2-PSK and fade (k/2, l/2) is spread
  over the four parity sub-grids of an M x M square that removes (k, l).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constellation import PskConfig
from .fades import SingularFade
from .latin import EMPTY, GridMap, add_symbol_offset, check_exclusive_law, cyclic_column_shift


class Variant(str, Enum):
    EVEN_START = "even_start"
    ODD_START = "odd_start"


@dataclass(frozen=True)
class OddPairSquare:
    k: int
    l: int
    variant: Variant
    grid: GridMap


@dataclass(frozen=True)
class Quadruplicate:
    ee: np.ndarray
    oo: np.ndarray
    eo: np.ndarray
    oe: np.ndarray

    @classmethod
    def split(cls, g: GridMap) -> "Quadruplicate":
        a = g.cells
        return cls(a[0::2, 0::2], a[1::2, 1::2], a[0::2, 1::2], a[1::2, 0::2])

    def assemble(self, t: int) -> GridMap:
        h = self.ee.shape[0]
        out = np.empty((2 * h, 2 * h), dtype=np.int64)
        out[0::2, 0::2] = self.ee
        out[1::2, 1::2] = self.oo
        out[0::2, 1::2] = self.eo
        out[1::2, 0::2] = self.oe
        return GridMap(out, t)


def construct_odd_pair(cfg: PskConfig, k: int, l: int, variant: Variant | str) -> OddPairSquare:
    """Walk each symbol s from (0, s) by steps of (k, +l) or (k, -l).

    even_start moves even symbols with +l and odd ones with -l; odd_start
    does the reverse. All arithmetic is mod M.
    """
    M = cfg.m
    variant = Variant(variant)
    if k % 2 == 0 or l % 2 == 0:
        raise ValueError("k and l must both be odd")
    if not (1 <= k <= M // 2 and 1 <= l <= M // 2):
        raise ValueError(f"k and l must lie in 1..{M // 2}")
    a = np.full((M, M), EMPTY, dtype=np.int64)
    a[0] = np.arange(M)
    plus_parity = 0 if variant is Variant.EVEN_START else 1
    for s in range(M):
        sign = 1 if s % 2 == plus_parity else -1
        for t in range(1, M + 1):
            r, c = (k * t) % M, (s + sign * l * t) % M
            if t == M:
                if a[r, c] != s:
                    raise AssertionError("walk does not return to row 0")
                continue
            if a[r, c] not in (EMPTY, s):
                raise AssertionError(f"walk collision at {(r, c)}")
            a[r, c] = s
    grid = GridMap(a, M)
    if not check_exclusive_law(grid):
        raise AssertionError("construction is not Latin")
    return OddPairSquare(k, l, variant, grid)


def odd_orbit_circles(cfg: PskConfig, k: int, l: int) -> list[tuple[int, int]]:
    """Circles (nk, nl) for odd n, each index folded into 1..M/2."""
    M = cfg.m

    def fold(x):
        x %= M
        return min(x, M - x)

    out = set()
    for n in range(1, M // 2, 2):
        out.add((fold(n * k), fold(n * l)))
    return sorted(out)


def removed_fades_of_odd_pair(cfg: PskConfig, k: int, l: int) -> dict[Variant, list[SingularFade]]:
    """Fades on the orbit circles of (k, l) removed by each variant (checked by distance)."""
    from .metrics import removes
    from .latin import to_clustering

    out = {}
    for variant in Variant:
        c = to_clustering(construct_odd_pair(cfg, k, l, variant).grid)
        fades = []
        for k1, k2 in odd_orbit_circles(cfg, k, l):
            for m in range(cfg.m):
                f = SingularFade.make(cfg.m, k1, k2, m)
                if removes(c, f):
                    fades.append(f)
        out[variant] = fades
    return out


def lift_quadruplicate(base: GridMap, k: int, l: int) -> GridMap:
    """Latin square for M-PSK from a square `base` for M/2-PSK.

    `base` must remove the M/2-level fade (k/2, l/2) at phase index 0.
    When k/2 + l/2 is even, the result removes (k, l) at m = 0:
        ee = oo = base, eo = oe = base + M/2.
    When k/2 + l/2 is odd (offset class below), the result removes (k, l)
    at m = 1 (aligned, theta = 2 pi/M):
        oe = base, eo = base shifted to phase index -1, ee = oo = base + M/2.
    """
    h = base.rows
    if base.shape != (h, h) or base.t != h or base.is_partial:
        raise ValueError("base must be a filled M/2 x M/2 square over Z_{M/2}")
    M = 2 * h
    if k % 2 or l % 2 or k == l or M // 2 in (k, l):
        raise ValueError("need even k != l, both different from M/2")
    hi = add_symbol_offset(base, h).cells
    lo = base.cells
    if (k // 2 + l // 2) % 2 == 0:
        q = Quadruplicate(ee=lo, oo=lo, eo=hi, oe=hi)
    else:
        q = Quadruplicate(ee=hi, oo=hi, eo=cyclic_column_shift(base, -1).cells, oe=lo)
    out = q.assemble(M)
    if not check_exclusive_law(out):
        raise AssertionError("lifted square is not Latin")
    return out


def lifted_fade(M: int, k: int, l: int) -> SingularFade:
    """The fade at M that `lift_quadruplicate` targets for circle (k, l)."""
    m = 0 if (k // 2 + l // 2) % 2 == 0 else 1
    return SingularFade.make(M, k, l, m)


def base_fade_for_lift(M: int, k: int, l: int) -> SingularFade:
    return SingularFade.make(M // 2, k // 2, l // 2, 0)
