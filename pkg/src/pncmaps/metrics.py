"""Cluster distances, fade removal and the max-min map-selection rule."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constellation import FadeState, PskConfig, _as_complex, effective_constellation
from .fades import SingularFade
from .latin import Clustering

REMOVAL_TOL = 1e-9


@dataclass(frozen=True)
class DistanceReport:
    clustering_id: int | None
    z: complex
    d_min_cluster: float
    witness: tuple[tuple[int, int], tuple[int, int]] | None

    def recompute(self, cfg: PskConfig, b_indices=None) -> float:
        pts = effective_constellation(cfg, self.z, b_indices)
        (a, b), (a2, b2) = self.witness
        return float(abs(pts[a, b] - pts[a2, b2]))


def _order_of(c: Clustering, cfg: PskConfig | None) -> PskConfig:
    return cfg if cfg is not None else PskConfig(c.shape[0])


def min_cluster_distance(c: Clustering, cfg: PskConfig | None, z,
                         b_indices: Sequence[int] | None = None,
                         clustering_id: int | None = None) -> DistanceReport:
    """Smallest relay-point distance between cells in different blocks."""
    cfg = _order_of(c, cfg)
    zc = _as_complex(z)
    pts = effective_constellation(cfg, zc, b_indices)
    if pts.shape != c.shape:
        raise ValueError(f"clustering shape {c.shape} does not match constellation {pts.shape}")
    lab = c.labels().ravel()
    v = pts.ravel()
    d = np.abs(v[:, None] - v[None, :])
    d[lab[:, None] == lab[None, :]] = np.inf
    if not np.isfinite(d).any():
        return DistanceReport(clustering_id, zc, math.inf, None)
    i, j = np.unravel_index(int(np.argmin(d)), d.shape)
    n = c.shape[1]
    return DistanceReport(clustering_id, zc, float(d[i, j]), ((i // n, i % n), (j // n, j % n)))


def removes(c: Clustering, fade: SingularFade, b_indices: Sequence[int] | None = None) -> bool:
    cfg = PskConfig(fade.order)
    return min_cluster_distance(c, cfg, fade.value(), b_indices).d_min_cluster > REMOVAL_TOL


class ClusterDistanceTable:
    """Batched min cluster distance of several clusterings at many fades."""

    def __init__(self, clusterings: Sequence[Clustering], cfg: PskConfig):
        self.cfg = cfg
        m = cfg.m
        from .constellation import psk_points

        p = psk_points(cfg)
        a, b = np.divmod(np.arange(m * m), m)
        iu, ju = np.triu_indices(m * m, 1)
        self.da = p[a[iu]] - p[a[ju]]
        self.db = p[b[iu]] - p[b[ju]]
        masks = []
        for c in clusterings:
            lab = c.labels().ravel()
            masks.append(lab[iu] != lab[ju])
        self.masks = masks

    def distances(self, zs) -> np.ndarray:
        """Array (len(zs), n_clusterings)."""
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        out = np.empty((len(zs), len(self.masks)))
        for k, mask in enumerate(self.masks):
            da, db = self.da[mask], self.db[mask]
            for s in range(0, len(zs), 256):
                chunk = zs[s:s + 256]
                out[s:s + len(chunk), k] = np.abs(da[None, :] + chunk[:, None] * db[None, :]).min(axis=1)
        return out

    def select(self, zs) -> tuple[np.ndarray, np.ndarray]:
        d = self.distances(zs)
        idx = np.argmax(d, axis=1)  # first maximum = smallest id
        return idx, d[np.arange(len(idx)), idx]


def select_map(book, cfg: PskConfig | None, z) -> int:
    """Id of the book clustering with the largest minimum cluster distance at z."""
    cfg = cfg or book.cfg
    table = book.distance_table() if hasattr(book, "distance_table") else ClusterDistanceTable(book.clusterings, cfg)
    idx, _ = table.select([_as_complex(z)])
    return int(idx[0])


@dataclass(frozen=True)
class PlaneGrid:
    gamma_max: float
    n_gamma: int
    n_theta: int

    def samples(self) -> list[FadeState]:
        if self.n_gamma < 1 or self.n_theta < 1:
            raise ValueError("grid needs at least one sample per axis")
        out = []
        for i in range(self.n_gamma):
            g = (i + 0.5) * self.gamma_max / self.n_gamma
            for j in range(self.n_theta):
                th = -math.pi + (j + 0.5) * 2 * math.pi / self.n_theta
                out.append(FadeState(g, th))
        return out


def quantize_plane(book, cfg: PskConfig | None, grid: PlaneGrid) -> list[tuple[float, float, int, float]]:
    """(gamma, theta, clustering_id, d_min) at the centre of every grid cell."""
    cfg = cfg or book.cfg
    samples = grid.samples()
    table = book.distance_table() if hasattr(book, "distance_table") else ClusterDistanceTable(book.clusterings, cfg)
    idx, dist = table.select([s.z for s in samples])
    return [(s.gamma, s.theta, int(i), float(d)) for s, i, d in zip(samples, idx, dist)]


def regions_to_csv(rows, fh=None) -> str:
    buf = fh or io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["γ", "θ", "clustering_id", "d_min"])
    for g, th, i, d in rows:
        w.writerow([f"{g:.12g}", f"{th:.12g}", i, f"{d:.12g}"])
    return buf.getvalue() if fh is None else ""
