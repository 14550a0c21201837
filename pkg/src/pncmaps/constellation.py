"""M-PSK geometry: signal points, difference constellation, relay constellation."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

ZERO_TOL = 1e-9


@dataclass(frozen=True)
class PskConfig:
    """An M-PSK signal set with M = 2**bits points."""

    m: int
    bits: int = field(default=-1)

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 2 or self.m & (self.m - 1):
            raise ValueError(f"M must be a power of two >= 2, got {self.m!r}")
        lam = int(self.m).bit_length() - 1
        if self.bits == -1:
            object.__setattr__(self, "bits", lam)
        elif self.bits != lam:
            raise ValueError(f"bits={self.bits} inconsistent with M={self.m}")


@dataclass(frozen=True)
class FadeState:
    """Fade coefficient z = gamma * exp(j theta), theta normalised to [-pi, pi)."""

    gamma: float
    theta: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def z(self) -> complex:
        return self.gamma * cmath.exp(1j * self.theta)

    @classmethod
    def from_complex(cls, z: complex) -> "FadeState":
        return cls(abs(z), cmath.phase(z))


@dataclass(frozen=True)
class DiffPoint:
    """Nonzero point of the difference constellation on ring n (radius 2 sin(pi n / M))."""

    n: int
    k: int
    value: complex


def wrap_angle(theta: float) -> float:
    t = math.fmod(theta + math.pi, 2 * math.pi)
    if t < 0:
        t += 2 * math.pi
    return t - math.pi


def _as_complex(z) -> complex:
    if isinstance(z, FadeState):
        return z.z
    if hasattr(z, "value") and callable(getattr(z, "value")):
        return z.value()
    return complex(z)


def psk_point(cfg: PskConfig, k: int) -> complex:
    if not 0 <= k < cfg.m:
        raise IndexError(f"symbol index {k} out of range for M={cfg.m}")
    return cmath.exp(1j * (2 * k + 1) * math.pi / cfg.m)


def psk_points(cfg: PskConfig) -> np.ndarray:
    k = np.arange(cfg.m)
    return np.exp(1j * (2 * k + 1) * np.pi / cfg.m)


def ring_phase_offset(m: int, n: int) -> float:
    """Phase of the k=0 point on ring n.

    psk(a) - psk(b) = 2 sin((a-b) pi/M) exp(j(pi/2 + (a+b+1) pi/M)), so every
    ring is a rotated copy of the M-th roots of unity; the rotation is 0 for
    odd n and pi/M for even n whenever M >= 4, and pi/2 for BPSK.
    """
    step = 2 * math.pi / m
    return math.fmod(math.pi / 2 + (n + 1) * math.pi / m, step)


def difference_constellation(cfg: PskConfig) -> list[DiffPoint]:
    """Nonzero differences s - s' of the signal set, M points on each of M/2 rings.

    The zero difference is implicit (see `difference_values`).
    """
    m = cfg.m
    out = []
    for n in range(1, m // 2 + 1):
        r = 2 * math.sin(math.pi * n / m)
        off = ring_phase_offset(m, n)
        for k in range(m):
            out.append(DiffPoint(n, k, r * cmath.exp(1j * (2 * k * math.pi / m + off))))
    return out


def difference_values(cfg: PskConfig) -> np.ndarray:
    """All distinct values of s - s' including 0."""
    return np.array([0j] + [p.value for p in difference_constellation(cfg)])


def effective_constellation(cfg: PskConfig, z, b_indices=None) -> np.ndarray:
    """Relay constellation x_a + z x_b as an (M, N) array indexed by (a, b).

    `b_indices` restricts B to a subset of the M-PSK points (Latin rectangles).
    """
    pts = psk_points(cfg)
    pb = pts if b_indices is None else pts[np.asarray(b_indices)]
    return pts[:, None] + _as_complex(z) * pb[None, :]


def distinct_count(values: np.ndarray, tol: float = ZERO_TOL) -> int:
    """Number of distinct points in a multiset of complex values (single-link at tol)."""
    v = np.asarray(values).ravel()
    d = np.abs(v[:, None] - v[None, :]) < tol
    seen = np.zeros(len(v), bool)
    count = 0
    for i in range(len(v)):
        if seen[i]:
            continue
        count += 1
        stack = [i]
        seen[i] = True
        while stack:
            j = stack.pop()
            nb = np.nonzero(d[j] & ~seen)[0]
            seen[nb] = True
            stack.extend(nb.tolist())
    return count


def dmin(cfg: PskConfig, z) -> float:
    """Minimum distance between the M^2 points of the relay constellation."""
    v = effective_constellation(cfg, z).ravel()
    d = np.abs(v[:, None] - v[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())
