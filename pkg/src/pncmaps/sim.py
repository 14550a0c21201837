"""Monte Carlo simulation of the two-phase relay protocol.

MA phase: y_R = h_A x_A + h_B x_B + n, jointly ML-decoded at the relay.
The relay maps the decoded pair through a clustering and broadcasts the
cluster index on a t-PSK constellation (t = number of clusters). Each end
node ML-decodes the broadcast symbol and inverts its own row (A) or column
(B) of the map to recover the partner's symbol.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .constellation import PskConfig, psk_points
from .latin import GridMap, xor_square

DECODE_FAILURE = -1
CHUNK = 50_000


class ChannelModel(str, Enum):
    FIXED_FADE = "fixed_fade"
    RAYLEIGH_BLOCK = "rayleigh_block"


@dataclass(frozen=True)
class ChannelSample:
    h_a: complex
    h_b: complex
    hp_a: complex = 1.0
    hp_b: complex = 1.0
    sigma2: float = 0.0


@dataclass(frozen=True)
class SimConfig:
    m: int
    trials: int
    snr_db: Sequence[float]
    channel: ChannelModel = ChannelModel.FIXED_FADE
    fade: complex = 1.0
    seed: int = 0
    schemes: tuple[str, ...] = ("adaptive", "xor")

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        object.__setattr__(self, "channel", ChannelModel(self.channel))


def sigma2_from_snr(snr_db: float) -> float:
    """Noise variance for unit-energy symbols."""
    return 10.0 ** (-snr_db / 10.0)


def bc_points(t: int) -> np.ndarray:
    return psk_points(PskConfig(t)) if t & (t - 1) == 0 else np.exp(1j * (2 * np.arange(t) + 1) * np.pi / t)


def relay_ml_decode(cfg: PskConfig, y_r, h_a, h_b) -> np.ndarray:
    """ML pair estimate(s) as pair indices a*M + b; ties go to the smaller index."""
    p = psk_points(cfg)
    y = np.atleast_1d(np.asarray(y_r, dtype=complex))
    h_a = np.broadcast_to(np.asarray(h_a, dtype=complex), y.shape)
    h_b = np.broadcast_to(np.asarray(h_b, dtype=complex), y.shape)
    cand = h_a[:, None, None] * p[None, :, None] + h_b[:, None, None] * p[None, None, :]
    d = np.abs(y[:, None, None] - cand).reshape(len(y), -1)
    return np.argmin(d, axis=1)


def relay_ml_decode_pair(cfg: PskConfig, y_r: complex, h_a: complex, h_b: complex) -> tuple[int, int]:
    idx = int(relay_ml_decode(cfg, y_r, h_a, h_b)[0])
    return divmod(idx, cfg.m)


def _inverse_tables(grid: np.ndarray, t: int) -> tuple[np.ndarray, np.ndarray]:
    """inv_a[x_a, s] = x_b with grid[x_a, x_b] = s (A's view); inv_b[x_b, s] = x_a."""
    M, N = grid.shape
    inv_a = np.full((M, t), DECODE_FAILURE, dtype=np.int64)
    inv_b = np.full((N, t), DECODE_FAILURE, dtype=np.int64)
    for a in range(M):
        for b in range(N):
            s = grid[a, b]
            if inv_a[a, s] != DECODE_FAILURE or inv_b[b, s] != DECODE_FAILURE:
                raise ValueError("map violates the exclusive law; inversion is ambiguous")
            inv_a[a, s] = b
            inv_b[b, s] = a
    return inv_a, inv_b


def end_node_decode(grid: GridMap, own: int, y: complex, h: complex, side: str) -> int:
    """Partner symbol recovered by node `side` ('A' or 'B'), or -1 on failure."""
    pts = bc_points(grid.t)
    s = int(np.argmin(np.abs(y - h * pts)))
    inv_a, inv_b = _inverse_tables(grid.cells, grid.t)
    return int(inv_a[own, s] if side == "A" else inv_b[own, s])


@dataclass
class _Map:
    grid: np.ndarray
    t: int
    pts: np.ndarray
    inv_a: np.ndarray
    inv_b: np.ndarray

    @classmethod
    def of(cls, g: GridMap) -> "_Map":
        inv_a, inv_b = _inverse_tables(g.cells, g.t)
        return cls(g.cells, g.t, bc_points(g.t), inv_a, inv_b)


def _errors_for_map(mp: _Map, xa, xb, pair_hat, m, noise_a, noise_b, hp_a, hp_b) -> int:
    a_hat, b_hat = np.divmod(pair_hat, m)
    s = mp.grid[a_hat, b_hat]
    x_r = mp.pts[s]
    y_a = hp_a * x_r + noise_a
    y_b = hp_b * x_r + noise_b
    s_a = np.argmin(np.abs(y_a[:, None] - hp_a[:, None] * mp.pts[None, :]), axis=1)
    s_b = np.argmin(np.abs(y_b[:, None] - hp_b[:, None] * mp.pts[None, :]), axis=1)
    b_at_a = mp.inv_a[xa, s_a]
    a_at_b = mp.inv_b[xb, s_b]
    return int(np.count_nonzero(b_at_a != xb) + np.count_nonzero(a_at_b != xa))


def simulate_chunk(cfg: PskConfig, maps: dict[str, object], n: int, sigma2: float,
                   channel: ChannelModel, fade: complex, rng: np.random.Generator,
                   selector=None) -> dict[str, int]:
    """Errors per scheme over n trials. A scheme maps to a _Map or to 'adaptive'."""
    m = cfg.m
    p = psk_points(cfg)
    xa = rng.integers(0, m, n)
    xb = rng.integers(0, m, n)
    s = np.sqrt(sigma2 / 2)

    def cn(scale=1.0):
        return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))

    if channel is ChannelModel.FIXED_FADE:
        h_a = np.ones(n, complex)
        h_b = np.full(n, fade, complex)
        hp_a = np.ones(n, complex)
        hp_b = np.ones(n, complex)
    else:
        r = np.sqrt(0.5)
        h_a, h_b, hp_a, hp_b = cn(r), cn(r), cn(r), cn(r)
    n_r, n_a, n_b = cn(s), cn(s), cn(s)
    y_r = h_a * p[xa] + h_b * p[xb] + n_r
    pair_hat = relay_ml_decode(cfg, y_r, h_a, h_b)
    out = {}
    for name, mp in maps.items():
        if isinstance(mp, _Map):
            out[name] = _errors_for_map(mp, xa, xb, pair_hat, m, n_a, n_b, hp_a, hp_b)
        else:
            ids, table = mp
            sel = ids(h_b / h_a)
            err = 0
            for k in np.unique(sel):
                w = sel == k
                err += _errors_for_map(table[k], xa[w], xb[w], pair_hat[w], m, n_a[w], n_b[w], hp_a[w], hp_b[w])
            out[name] = err
    return out


@dataclass
class SerRow:
    snr_db: float
    scheme: str
    trials: int
    errors: int

    @property
    def ser(self) -> float:
        return self.errors / (2 * self.trials)


def _scheme_maps(simcfg: SimConfig, book) -> dict[str, object]:
    cfg = PskConfig(simcfg.m)
    maps: dict[str, object] = {}
    for name in simcfg.schemes:
        if name == "xor":
            maps[name] = _Map.of(xor_square(cfg))
        elif name == "adaptive":
            table = [_Map.of(c.to_grid()) for c in book.clusterings]
            dt = book.distance_table()
            if simcfg.channel is ChannelModel.FIXED_FADE:
                k = int(dt.select([simcfg.fade])[0][0])
                maps[name] = table[k]
            else:
                maps[name] = (lambda z, dt=dt: dt.select(z)[0], table)
        else:
            raise ValueError(f"unknown scheme {name!r}")
    return maps


def run_ser_sweep(simcfg: SimConfig, book) -> list[SerRow]:
    """SER per (snr, scheme). Chunk streams derive from (seed, snr index, chunk index)."""
    cfg = PskConfig(simcfg.m)
    maps = _scheme_maps(simcfg, book)
    rows = []
    root = np.random.SeedSequence(simcfg.seed)
    snr_seqs = root.spawn(len(simcfg.snr_db))
    for snr, seq in zip(simcfg.snr_db, snr_seqs):
        sigma2 = sigma2_from_snr(snr)
        n_chunks = -(-simcfg.trials // CHUNK)
        totals = dict.fromkeys(maps, 0)
        for ci, cseq in enumerate(seq.spawn(n_chunks)):
            n = min(CHUNK, simcfg.trials - ci * CHUNK)
            rng = np.random.default_rng(cseq)
            errs = simulate_chunk(cfg, maps, n, sigma2, simcfg.channel, simcfg.fade, rng)
            for k, v in errs.items():
                totals[k] += v
        for name in maps:
            rows.append(SerRow(float(snr), name, simcfg.trials, totals[name]))
    return rows


def ser_to_csv(rows: list[SerRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["snr_db", "scheme", "trials", "errors", "ser"])
    for r in rows:
        w.writerow([f"{r.snr_db:g}", r.scheme, r.trials, r.errors, f"{r.ser:.6e}"])
    return buf.getvalue()


def zero_noise_check(cfg: PskConfig, grid: GridMap, z: complex) -> bool:
    """Noiseless end-to-end decoding is exact for every message pair with this map at z."""
    m = cfg.m
    p = psk_points(cfg)
    xa, xb = np.divmod(np.arange(m * m), m)
    y_r = p[xa] + z * p[xb]
    pair_hat = relay_ml_decode(cfg, y_r, 1.0, z)
    mp = _Map.of(grid)
    zeros = np.zeros(m * m, complex)
    ones = np.ones(m * m, complex)
    return _errors_for_map(mp, xa, xb, pair_hat, m, zeros, zeros, ones, ones) == 0
