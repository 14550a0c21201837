"""Assembly of the complete singular-fade -> clustering map book.

One seed square per group of circles is enough:
  * unit circle: the XOR square;
  * odd-odd circles: one odd-pair construction per orbit {(nk, nl)};
  * even-even circles with k, l != M/2: quadruplicate lift of the M/2 book;
  * every other inside circle: completion search on its constraint square.
Every fade of a seeded inside circle gets the seed shifted by whole columns,
and each outside fade gets the transpose of its reciprocal's square.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .completion import (
    SolverLimits,
    Status,
    complete_min_symbols,
    diagonal_invariant_completions,
)
from .constellation import PskConfig
from .constraints import build_cpls, generate_constraints
from .constructions import (
    Variant,
    base_fade_for_lift,
    construct_odd_pair,
    lift_quadruplicate,
    lifted_fade,
    odd_orbit_circles,
)
from .fades import (
    Region,
    SingularFade,
    circles,
    classify,
    enumerate_singular_fades,
    rectangle_singular_fades,
    reciprocal_fade,
)
from .latin import (
    Clustering,
    GridMap,
    check_exclusive_law,
    cyclic_column_shift,
    delete_columns,
    is_diagonal_invariant,
    relabel_first_appearance,
    shift_clustering,
    to_clustering,
    transpose,
    transpose_clustering,
    xor_square,
)
from .metrics import ClusterDistanceTable, removes

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Provenance:
    seed: int
    shift: int
    transposed: bool

    def to_json(self) -> dict:
        return {"seed": self.seed, "shift": self.shift, "transposed": self.transposed}


@dataclass(frozen=True)
class Seed:
    id: int
    circle: tuple[int, int]
    m0: int
    source: str
    grid: GridMap

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "circle": list(self.circle),
            "m0": self.m0,
            "source": self.source,
            "grid": self.grid.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Seed":
        return cls(int(d["id"]), tuple(d["circle"]), int(d["m0"]), d["source"], GridMap.from_json(d["grid"]))


@dataclass(frozen=True)
class AssemblyOptions:
    limits: SolverLimits = field(default_factory=SolverLimits)
    candidate_cap: int = 2_000
    diagonal_node_budget: int = 200_000
    prefer_diagonal_invariant: bool = True
    lower: "MapBook | None" = None


@dataclass
class MapBook:
    cfg: PskConfig
    clusterings: list[Clustering]
    assignment: dict[SingularFade, int]
    provenance: dict[SingularFade, Provenance]
    seeds: list[Seed]
    failed_circles: list[tuple[int, int]] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return bool(self.failed_circles)

    def clustering_of(self, fade: SingularFade) -> Clustering:
        return self.clusterings[self.assignment[fade]]

    def grid(self, idx: int) -> GridMap:
        """Representative square of clustering idx (symbol = canonical block index)."""
        return self.clusterings[idx].to_grid()

    def distance_table(self) -> ClusterDistanceTable:
        if not hasattr(self, "_table"):
            self._table = ClusterDistanceTable(self.clusterings, self.cfg)
        return self._table

    def to_json(self) -> dict:
        fades = sorted(self.assignment)
        return {
            "m": self.cfg.m,
            "clusterings": [c.to_json() for c in self.clusterings],
            "assignment": [
                {
                    "fade": f.to_json(),
                    "clustering": self.assignment[f],
                    "provenance": self.provenance[f].to_json(),
                }
                for f in fades
            ],
            "seeds": [s.to_json() for s in self.seeds],
            "failed_circles": [list(c) for c in self.failed_circles],
        }

    @classmethod
    def from_json(cls, d: dict) -> "MapBook":
        cfg = PskConfig(int(d["m"]))
        shape = (cfg.m, cfg.m)
        cl = [Clustering.from_json(shape, b) for b in d["clusterings"]]
        assignment, prov = {}, {}
        for e in d["assignment"]:
            f = SingularFade.from_json(cfg.m, e["fade"])
            assignment[f] = int(e["clustering"])
            p = e["provenance"]
            prov[f] = Provenance(int(p["seed"]), int(p["shift"]), bool(p["transposed"]))
        seeds = [Seed.from_json(s) for s in d.get("seeds", [])]
        failed = [tuple(c) for c in d.get("failed_circles", [])]
        return cls(cfg, cl, assignment, prov, seeds, failed)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)

    @classmethod
    def load(cls, path) -> "MapBook":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def replay(book: MapBook, fade: SingularFade) -> Clustering:
    """Recompute a fade's clustering from its seed: shift, then transpose."""
    p = book.provenance[fade]
    g = cyclic_column_shift(book.seeds[p.seed].grid, p.shift)
    if p.transposed:
        g = transpose(g)
    return to_clustering(g)


class _Builder:
    def __init__(self, cfg: PskConfig, options: AssemblyOptions):
        self.cfg = cfg
        self.opts = options
        self.index: dict[tuple, int] = {}
        self.clusterings: list[Clustering] = []
        self.assignment: dict[SingularFade, int] = {}
        self.provenance: dict[SingularFade, Provenance] = {}
        self.seeds: list[Seed] = []
        self.failed: list[tuple[int, int]] = []
        self.known_fast: set[bytes] = set()

    def intern(self, c: Clustering) -> int:
        if c.key not in self.index:
            self.index[c.key] = len(self.clusterings)
            self.clusterings.append(c)
            self.known_fast.add(_fast_key(c.labels()))
        return self.index[c.key]

    def add_seed(self, circle, m0, source, grid) -> Seed:
        s = Seed(len(self.seeds), circle, m0, source, grid)
        self.seeds.append(s)
        return s

    def spread(self, seed: Seed, circle: tuple[int, int]):
        M = self.cfg.m
        for m in range(M):
            f = SingularFade.make(M, *circle, m)
            shift = (m - seed.m0) % M
            g = cyclic_column_shift(seed.grid, shift)
            self.assignment[f] = self.intern(to_clustering(g))
            self.provenance[f] = Provenance(seed.id, shift, False)

    def transpose_outside(self):
        for f in enumerate_singular_fades(self.cfg):
            if classify(f) is not Region.OUTSIDE:
                continue
            r = reciprocal_fade(f)
            if r not in self.provenance:
                continue
            p = self.provenance[r]
            g = transpose(cyclic_column_shift(self.seeds[p.seed].grid, p.shift))
            self.assignment[f] = self.intern(to_clustering(g))
            self.provenance[f] = Provenance(p.seed, p.shift, True)

    def family_new_count(self, labels: np.ndarray) -> int:
        M = self.cfg.m
        fam = set()
        for a in range(M):
            s = np.roll(labels, -a, axis=1)
            fam.add(_fast_key(s))
            fam.add(_fast_key(s.T))
        return len(fam - self.known_fast)

    def choose(self, candidates: list[GridMap]) -> GridMap:
        """Fewest new clusterings (own shifts and transposes counted), then canonical key."""
        scored = [(self.family_new_count(g.cells), i) for i, g in enumerate(candidates)]
        best = min(s for s, _ in scored)
        tied = [candidates[i] for s, i in scored if s == best]
        return min(tied, key=lambda g: to_clustering(g).key)


def _fast_key(labels: np.ndarray) -> bytes:
    return relabel_first_appearance(labels).tobytes()


def _odd_orbit_generator(cfg: PskConfig, k1: int, k2: int) -> tuple[int, int]:
    orbit = odd_orbit_circles(cfg, k1, k2)
    return min(c for c in orbit if c[0] < c[1])


def _is_liftable(cfg: PskConfig, k1: int, k2: int) -> bool:
    M = cfg.m
    return M >= 8 and k1 % 2 == 0 and k2 % 2 == 0 and k1 != k2 and M // 2 not in (k1, k2)


def circle_category(cfg: PskConfig, k1: int, k2: int) -> str:
    if k1 == k2:
        return "unit"
    if k1 % 2 and k2 % 2:
        return "odd"
    if _is_liftable(cfg, k1, k2):
        return "lift"
    return "search"


def _search_candidates(builder: _Builder, cpls) -> tuple[list[GridMap], dict]:
    opts = builder.opts
    info: dict = {}
    cap = min(opts.candidate_cap, opts.limits.solution_cap)
    if opts.prefer_diagonal_invariant:
        diag, nodes, status = diagonal_invariant_completions(cpls, cap, opts.diagonal_node_budget)
        info["diagonal"] = (len(diag), nodes, status.value)
        if diag:
            return diag, info
    limits = SolverLimits(cap, opts.limits.node_budget, opts.limits.t_max)
    res = complete_min_symbols(cpls, enumerate_all=True, limits=limits)
    info["generic"] = (res.t_min, len(res.squares), res.nodes_explored, res.status.value)
    cands = res.squares
    if opts.prefer_diagonal_invariant:
        inv = [g for g in cands if is_diagonal_invariant(to_clustering(g))]
        cands = inv or cands
    if res.status is Status.NODE_BUDGET and not cands:
        info["failed"] = True
    return cands, info


def assemble(cfg: PskConfig, options: AssemblyOptions | None = None) -> MapBook:
    opts = options or AssemblyOptions()
    M = cfg.m
    b = _Builder(cfg, opts)

    xor = b.add_seed((1, 1), 0, "xor", xor_square(cfg))
    b.spread(xor, (1, 1))

    inside = [c for c in circles(cfg) if c[0] < c[1]]
    odd_seeds: dict[tuple[int, int], Seed] = {}
    lower = opts.lower
    for k1, k2 in inside:
        cat = circle_category(cfg, k1, k2)
        seed = None
        if cat == "odd":
            gen = _odd_orbit_generator(cfg, k1, k2)
            grid = construct_odd_pair(cfg, gen[0], gen[1], Variant.EVEN_START).grid
            c = to_clustering(grid)
            m0 = next((m for m in range(M) if removes(c, SingularFade.make(M, k1, k2, m))), None)
            if m0 is not None:
                if gen not in odd_seeds:
                    odd_seeds[gen] = b.add_seed(gen, m0 if gen == (k1, k2) else 0, "construction", grid)
                s = odd_seeds[gen]
                # a construction seed serves several circles; record each circle's anchor
                seed = Seed(s.id, (k1, k2), m0, s.source, s.grid)
            else:
                log.warning("construction misses circle %s; searching", (k1, k2))
        elif cat == "lift":
            if lower is None:
                lower = assemble(PskConfig(M // 2), AssemblyOptions(
                    opts.limits, opts.candidate_cap, opts.diagonal_node_budget,
                    opts.prefer_diagonal_invariant))
            bf = base_fade_for_lift(M, k1, k2)
            base_c = lower.clustering_of(bf) if bf in lower.assignment else None
            if base_c is not None and base_c.n_blocks == M // 2:
                grid = lift_quadruplicate(base_c.to_grid(), k1, k2)
                tf = lifted_fade(M, k1, k2)
                if removes(to_clustering(grid), tf):
                    seed = b.add_seed((k1, k2), tf.m, "lift", grid)
            if seed is None:
                log.warning("lift unavailable for circle %s; searching", (k1, k2))
        if seed is None:
            f0 = SingularFade.make(M, k1, k2, 0)
            cpls = build_cpls(generate_constraints(cfg, f0))
            cands, info = _search_candidates(b, cpls)
            log.info("circle %s search: %s", (k1, k2), info)
            if not cands:
                b.failed.append((k1, k2))
                continue
            seed = b.add_seed((k1, k2), 0, "search", b.choose(cands))
        b.spread(seed, (k1, k2))
    b.transpose_outside()
    return MapBook(cfg, b.clusterings, b.assignment, b.provenance, b.seeds, b.failed)


@dataclass
class FadeCheck:
    fade: SingularFade
    removed: bool
    latin: bool
    replay_ok: bool

    @property
    def ok(self) -> bool:
        return self.removed and self.latin and self.replay_ok


@dataclass
class VerifyReport:
    checks: list[FadeCheck]
    missing: list[SingularFade]

    @property
    def passed(self) -> int:
        return sum(c.ok for c in self.checks)

    @property
    def total(self) -> int:
        return len(self.checks) + len(self.missing)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def failures(self) -> list[FadeCheck]:
        return [c for c in self.checks if not c.ok]


def verify(book: MapBook, fades: Iterable[SingularFade] | None = None) -> VerifyReport:
    """Re-check every assignment: removal, exclusive law and provenance replay."""
    fades = list(fades) if fades is not None else enumerate_singular_fades(book.cfg)
    checks, missing = [], []
    latin_ok = {i: check_exclusive_law(book.grid(i)) for i in range(len(book.clusterings))}
    for f in fades:
        if f not in book.assignment:
            missing.append(f)
            continue
        idx = book.assignment[f]
        c = book.clusterings[idx]
        try:
            rep = replay(book, f) == c
        except (KeyError, IndexError):
            rep = False
        checks.append(FadeCheck(f, removes(c, f), latin_ok[idx], rep))
    return VerifyReport(checks, missing)


@dataclass
class CoherenceReport:
    shift_pairs: int
    shift_ok: int
    transpose_pairs: int
    transpose_ok: int
    failures: list[tuple[str, SingularFade, SingularFade]]

    @property
    def ok(self) -> bool:
        return self.shift_ok == self.shift_pairs and self.transpose_ok == self.transpose_pairs


def coherence_report(book: MapBook) -> CoherenceReport:
    """Same-circle pairs must differ by the column shift m' - m; reciprocal pairs by transposition."""
    M = book.cfg.m
    by_circle: dict[tuple[int, int], list[SingularFade]] = {}
    for f in sorted(book.assignment):
        by_circle.setdefault(f.circle, []).append(f)
    failures = []
    sp = so = tp = to = 0
    for fades in by_circle.values():
        for i, f in enumerate(fades):
            for g in fades[i + 1:]:
                sp += 1
                if shift_clustering(book.clustering_of(f), (g.m - f.m) % M) == book.clustering_of(g):
                    so += 1
                else:
                    failures.append(("shift", f, g))
    for f in sorted(book.assignment):
        r = reciprocal_fade(f)
        if r < f or r not in book.assignment:
            continue
        tp += 1
        if transpose_clustering(book.clustering_of(f)) == book.clustering_of(r):
            to += 1
        else:
            failures.append(("transpose", f, r))
    return CoherenceReport(sp, so, tp, to, failures)


@dataclass(frozen=True)
class SeedCounts:
    constructed_seeds: int
    circles_covered: int
    total_seeds: int


def seed_count_formulas(m: int) -> SeedCounts:
    return SeedCounts(m * m // 32 - m // 8 + 1, m * m // 8 - m + 3, 3 * m * m // 32 + m // 8)


def seed_count_report(cfg: PskConfig) -> SeedCounts:
    """Seed counts from the circle categories, checked against the closed forms."""
    M = cfg.m
    if M < 8:
        raise ValueError("the closed-form seed counts hold for M >= 8")
    inside = [c for c in circles(cfg) if c[0] < c[1]]
    cats = [circle_category(cfg, *c) for c in inside]
    orbits = {_odd_orbit_generator(cfg, *c) for c, k in zip(inside, cats) if k == "odd"}
    n_odd = cats.count("odd")
    n_lift = cats.count("lift")
    constructed = 1 + len(orbits) + n_lift
    covered = 1 + 2 * (n_odd + n_lift)
    total = constructed + cats.count("search")
    counts = SeedCounts(constructed, covered, total)
    expected = seed_count_formulas(M)
    if counts != expected:
        raise AssertionError(f"seed counts {counts} differ from closed forms {expected}")
    return counts


def seed_usage(book: MapBook) -> int:
    return len(book.seeds)


def latin_rectangle(square: GridMap, fade: SingularFade, n: int, offset: int = 0) -> GridMap:
    """Keep B's n-PSK columns (every (M/n)-th index from `offset`) of a square removing `fade`."""
    M = square.rows
    if n >= M or n < 2 or n & (n - 1) or M % n:
        raise ValueError("n must be a power of two below M")
    keep = sorted((offset + i * (M // n)) % M for i in range(n))
    singular = set(rectangle_singular_fades(PskConfig(M), keep))
    if fade not in singular:
        raise ValueError(f"{fade.label()} is not singular for the ({M},{n}) system")
    rect = delete_columns(square, keep)
    if not check_exclusive_law(rect):
        raise AssertionError("rectangle violates the exclusive law")
    if not removes(to_clustering(rect), fade, b_indices=keep):
        raise ValueError("the source square does not remove the fade on the kept columns")
    return rect


def rectangle_columns(m: int, n: int, offset: int = 0) -> list[int]:
    return sorted((offset + i * (m // n)) % m for i in range(n))
