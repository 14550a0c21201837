"""Completion of constrained partial Latin squares with the fewest symbols.

Cells that share a symbol in the partial grid form one variable; every empty
cell is a variable of its own. A completion assigns symbols of Z_t to the
variables so that no row or column repeats a symbol. Symbols are
interchangeable, so the search only ever opens the next unused symbol: each
completion it returns is a distinct clustering, written with symbols renamed
in row-major order of first appearance.
"""

from __future__ import annotations

import math
import os
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

import numpy as np

from .latin import EMPTY, Clustering, GridMap, relabel_first_appearance, to_clustering

DEFAULT_SOLUTION_CAP = 10_000
DEFAULT_NODE_BUDGET = 100_000_000


class Status(str, Enum):
    COMPLETE = "complete"
    INFEASIBLE = "exhausted_no_solution_at_t"
    SOLUTION_CAP = "solution_cap_reached"
    NODE_BUDGET = "node_budget_exhausted"


@dataclass(frozen=True)
class SolverLimits:
    solution_cap: int = DEFAULT_SOLUTION_CAP
    node_budget: int = DEFAULT_NODE_BUDGET
    t_max: int | None = None

    @classmethod
    def from_env(cls, env=None) -> "SolverLimits":
        env = os.environ if env is None else env
        t_max = env.get("PNC_T_MAX")
        return cls(
            solution_cap=int(env.get("PNC_SOLUTION_CAP", DEFAULT_SOLUTION_CAP)),
            node_budget=int(env.get("PNC_NODE_BUDGET", DEFAULT_NODE_BUDGET)),
            t_max=int(t_max) if t_max else None,
        )


@dataclass
class CompletionResult:
    t_min: int | None
    squares: list[GridMap]
    nodes_explored: int
    status: Status
    infeasible_t: list[int] = field(default_factory=list)

    @property
    def clusterings(self) -> list[Clustering]:
        return [to_clustering(g) for g in self.squares]

    @property
    def clustering_count(self) -> int:
        return len({c.key for c in self.clusterings})

    @property
    def labelled_count(self) -> int:
        """Completions counted with literal symbols of Z_t (t!/(t-b)! per clustering)."""
        if self.t_min is None:
            return 0
        t = self.t_min
        return sum(math.perm(t, c.n_blocks) for c in self.clusterings)


class _BudgetExceeded(Exception):
    pass


class _Search:
    def __init__(self, partial: np.ndarray, t: int, node_budget: int):
        self.a = np.asarray(partial)
        self.rows, self.cols = self.a.shape
        self.t = t
        self.node_budget = node_budget
        self.nodes = 0
        var_of: dict = {}
        self.var_cells: list[list[tuple[int, int]]] = []
        for (r, c), v in np.ndenumerate(self.a):
            key = ("s", int(v)) if v != EMPTY else ("e", r, c)
            if key not in var_of:
                var_of[key] = len(self.var_cells)
                self.var_cells.append([])
            self.var_cells[var_of[key]].append((r, c))
        self.var_rows = [[r for r, _ in cells] for cells in self.var_cells]
        self.var_cols = [[c for _, c in cells] for cells in self.var_cells]
        self.consistent = all(
            len(set(rs)) == len(rs) and len(set(cs)) == len(cs)
            for rs, cs in zip(self.var_rows, self.var_cols)
        )

    def solutions(self) -> Iterator[np.ndarray]:
        if not self.consistent or self.t < 1:
            return
        n = len(self.var_cells)
        row_used = [0] * self.rows
        col_used = [0] * self.cols
        value = [-1] * n
        unassigned = set(range(n))
        full = (1 << self.t) - 1
        exact = self.t == self.rows == self.cols
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 100))

        def domain(v, open_mask):
            used = 0
            for r in self.var_rows[v]:
                used |= row_used[r]
            for c in self.var_cols[v]:
                used |= col_used[c]
            return open_mask & ~used

        def rec(max_used):
            self.nodes += 1
            if self.nodes > self.node_budget:
                raise _BudgetExceeded
            if not unassigned:
                out = np.empty((self.rows, self.cols), dtype=np.int64)
                for v, cells in enumerate(self.var_cells):
                    for r, c in cells:
                        out[r, c] = value[v]
                yield relabel_first_appearance(out)
                return
            open_mask = full & ((1 << min(self.t, max_used + 2)) - 1)
            best, best_dom, best_size = -1, 0, 1 << 30
            if exact:
                row_can = [0] * self.rows
                col_can = [0] * self.cols
            for v in unassigned:
                d = domain(v, open_mask)
                size = bin(d).count("1")
                if size < best_size or (size == best_size and v < best):
                    best, best_dom, best_size = v, d, size
                    if size == 0:
                        return
                if exact:
                    # symbols above max_used are interchangeable, so any of them may go here
                    dd = d | domain(v, full & ~open_mask)
                    for r in self.var_rows[v]:
                        row_can[r] |= dd
                    for c in self.var_cols[v]:
                        col_can[c] |= dd
            if exact:
                # with exactly t symbols per line, every unused symbol needs a home
                for r in range(self.rows):
                    if full & ~row_used[r] & ~row_can[r]:
                        return
                for c in range(self.cols):
                    if full & ~col_used[c] & ~col_can[c]:
                        return
            unassigned.discard(best)
            d = best_dom
            while d:
                bit = d & -d
                d ^= bit
                s = bit.bit_length() - 1
                value[best] = s
                for r in self.var_rows[best]:
                    row_used[r] |= bit
                for c in self.var_cols[best]:
                    col_used[c] |= bit
                yield from rec(max(max_used, s))
                for r in self.var_rows[best]:
                    row_used[r] &= ~bit
                for c in self.var_cols[best]:
                    col_used[c] &= ~bit
            value[best] = -1
            unassigned.add(best)

        yield from rec(-1)


def _partial_cells(cpls) -> np.ndarray:
    grid = cpls.grid if hasattr(cpls, "grid") else cpls
    return grid.cells if isinstance(grid, GridMap) else np.asarray(grid)


def completions_at(cpls, t: int, limit: int | None = None,
                   node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[list[GridMap], int, Status]:
    """All completions over Z_t (one per clustering), up to `limit`."""
    search = _Search(_partial_cells(cpls), t, node_budget)
    found: list[GridMap] = []
    try:
        for sol in search.solutions():
            found.append(GridMap(sol, t))
            if limit is not None and len(found) >= limit:
                return found, search.nodes, Status.SOLUTION_CAP
    except _BudgetExceeded:
        return found, search.nodes, Status.NODE_BUDGET
    return found, search.nodes, (Status.COMPLETE if found else Status.INFEASIBLE)


def is_completable(cpls, t: int, node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    found, _, status = completions_at(cpls, t, limit=1, node_budget=node_budget)
    if status is Status.NODE_BUDGET:
        raise RuntimeError(f"node budget exhausted deciding completability at t={t}")
    return bool(found)


def complete_min_symbols(cpls, t_max: int | None = None, enumerate_all: bool = False,
                         limits: SolverLimits | None = None) -> CompletionResult:
    """Try t = M, M+1, ..., t_max and return the completions at the first feasible t."""
    limits = limits or SolverLimits()
    a = _partial_cells(cpls)
    rows, cols = a.shape
    t_lo = max(rows, cols)
    t_max = t_max or limits.t_max or rows * cols
    if t_max < t_lo:
        raise ValueError(f"t_max must be at least {t_lo}")
    nodes = 0
    infeasible = []
    for t in range(t_lo, t_max + 1):
        cap = limits.solution_cap if enumerate_all else 1
        found, n, status = completions_at(a, t, cap, limits.node_budget - nodes)
        nodes += n
        if status is Status.NODE_BUDGET:
            return CompletionResult(t if found else None, found, nodes, status, infeasible)
        if found:
            if status is Status.SOLUTION_CAP and not enumerate_all:
                status = Status.COMPLETE
            return CompletionResult(t, found, nodes, status, infeasible)
        infeasible.append(t)
    return CompletionResult(None, [], nodes, Status.INFEASIBLE, infeasible)


def diagonal_invariant_completions(cpls, limit: int | None = None,
                                   node_budget: int = DEFAULT_NODE_BUDGET
                                   ) -> tuple[list[GridMap], int, Status]:
    """Completions over Z_M whose clustering is invariant under (i, j) -> (i+1, j+1).

    Such a square has one block through each cell of row 0. Naming block x
    after its row-0 cell (0, x), the diagonal step permutes blocks by some
    pi, and the square is L(r, c) = pi^r((c - r) mod M) with pi^M = id.
    The search builds pi one arrow at a time, extending the diagonal chains
    x, pi(x), pi^2(x), ... and checking columns and constraint groups as
    cells appear. Rows are Latin automatically.
    """
    a = _partial_cells(cpls)
    M = a.shape[0]
    if a.shape != (M, M):
        raise ValueError("diagonal invariance needs a square grid")
    group_of = [[-1] * M for _ in range(M)]
    names: dict[int, int] = {}
    for (r, c), v in np.ndenumerate(a):
        if v != EMPTY:
            group_of[r][c] = names.setdefault(int(v), len(names))
    n_groups = len(names)

    lab = [[-1] * M for _ in range(M)]
    col_used = [0] * M
    group_val = [-1] * n_groups
    group_cnt = [0] * n_groups
    pi = [-1] * M
    inv = [-1] * M
    depth = [0] * M         # chain x is known down to row depth[x]
    front = list(range(M))  # value of chain x at row depth[x]
    found: list[GridMap] = []
    nodes = 0

    def place(r, c, v, trail):
        bit = 1 << v
        if col_used[c] & bit:
            return False
        g = group_of[r][c]
        if g >= 0 and group_val[g] not in (-1, v):
            return False
        col_used[c] |= bit
        lab[r][c] = v
        if g >= 0:
            if group_cnt[g] == 0:
                group_val[g] = v
            group_cnt[g] += 1
        trail.append((r, c, v))
        return True

    def unplace(trail):
        while trail:
            r, c, v = trail.pop()
            col_used[c] &= ~(1 << v)
            lab[r][c] = -1
            g = group_of[r][c]
            if g >= 0:
                group_cnt[g] -= 1
                if group_cnt[g] == 0:
                    group_val[g] = -1

    for x in range(M):
        if not place(0, x, x, []):
            return [], 0, Status.INFEASIBLE

    def path_start(f):
        s = f
        while inv[s] >= 0:
            s = inv[s]
        return s

    def rec(n_assigned):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise _BudgetExceeded
        if n_assigned == M:
            found.append(GridMap(relabel_first_appearance(np.array(lab)), M))
            return limit is not None and len(found) >= limit
        # extend the open path with the most chains waiting on it
        waiting: dict[int, int] = {}
        for x in range(M):
            if depth[x] < M - 1:
                waiting[front[x]] = waiting.get(front[x], 0) + 1
        if waiting:
            f = max(waiting, key=lambda k: (waiting[k], -k))
        else:
            f = next(i for i in range(M) if pi[i] < 0)
        start = path_start(f)
        for v in range(M):
            if inv[v] >= 0:
                continue
            if v == start:
                cyc, s = 1, start
                while s != f:
                    s, cyc = pi[s], cyc + 1
                if M % cyc:
                    continue
            pi[f], inv[v] = v, f
            trail: list = []
            saved = []
            ok = True
            for x in range(M):
                if not ok:
                    break
                if depth[x] < M - 1 and front[x] == f:
                    saved.append((x, depth[x], front[x]))
                    while depth[x] < M - 1 and pi[front[x]] >= 0:
                        nv = pi[front[x]]
                        d = depth[x] + 1
                        if not place(d, (x + d) % M, nv, trail):
                            ok = False
                            break
                        depth[x], front[x] = d, nv
            if ok and rec(n_assigned + 1):
                return True
            for x, d, fr in saved:
                depth[x], front[x] = d, fr
            unplace(trail)
            pi[f], inv[v] = -1, -1
        return False

    try:
        capped = rec(0)
    except _BudgetExceeded:
        return found, nodes, Status.NODE_BUDGET
    if capped:
        return found, nodes, Status.SOLUTION_CAP
    return found, nodes, (Status.COMPLETE if found else Status.INFEASIBLE)
