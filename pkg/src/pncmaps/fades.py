"""Closed-form enumeration and classification of singular fade states.

A singular fade state is a value of z at which two distinct symbol pairs
collide at the relay: x_a + z x_b = x_a' + z x_b'. For M-PSK every such z has
radius sin(k1 pi/M) / sin(k2 pi/M) with 1 <= k1, k2 <= M/2 and phase
2 m pi/M (k1, k2 of equal parity, "aligned") or 2 m pi/M + pi/M ("offset").
All the unit-radius fades are stored with k1 = k2 = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .constellation import FadeState, PskConfig


class PhaseClass(str, Enum):
    ALIGNED = "aligned"
    OFFSET = "offset"


class Region(str, Enum):
    INSIDE = "inside"
    ON_UNIT = "on_unit"
    OUTSIDE = "outside"


def phase_class_for(k1: int, k2: int) -> PhaseClass:
    return PhaseClass.ALIGNED if (k1 - k2) % 2 == 0 else PhaseClass.OFFSET


@dataclass(frozen=True, order=True)
class SingularFade:
    """Exact symbolic singular fade state of an `order`-PSK system."""

    order: int
    k1: int
    k2: int
    m: int
    phase_class: PhaseClass

    def __post_init__(self):
        half = self.order // 2
        if not (1 <= self.k1 <= half and 1 <= self.k2 <= half):
            raise ValueError(f"k1, k2 must lie in 1..{half}: {self}")
        if not 0 <= self.m < self.order:
            raise ValueError(f"m must lie in 0..{self.order - 1}: {self}")
        pc = PhaseClass(self.phase_class)
        object.__setattr__(self, "phase_class", pc)
        if pc is not phase_class_for(self.k1, self.k2):
            raise ValueError(f"phase class {pc.value} inconsistent with k1={self.k1}, k2={self.k2}")

    @classmethod
    def make(cls, order: int, k1: int, k2: int, m: int) -> "SingularFade":
        """Build a fade with the phase class implied by (k1, k2); k1 = k2 maps to the unit circle."""
        if k1 == k2:
            k1 = k2 = 1
        return cls(order, k1, k2, m % order, phase_class_for(k1, k2))

    @property
    def circle(self) -> tuple[int, int]:
        return (self.k1, self.k2)

    @property
    def phase_units(self) -> int:
        """theta in units of pi/M, in 0..2M-1."""
        return 2 * self.m + (1 if self.phase_class is PhaseClass.OFFSET else 0)

    @property
    def gamma(self) -> float:
        if self.k1 == self.k2:
            return 1.0
        return math.sin(self.k1 * math.pi / self.order) / math.sin(self.k2 * math.pi / self.order)

    @property
    def theta(self) -> float:
        """Phase in [0, 2 pi)."""
        return self.phase_units * math.pi / self.order

    def value(self) -> complex:
        return self.gamma * cmath.exp(1j * self.theta)

    def fade_state(self) -> FadeState:
        return FadeState(self.gamma, self.theta)

    @property
    def region(self) -> Region:
        return classify(self)

    def to_json(self) -> dict:
        return {"k1": self.k1, "k2": self.k2, "m": self.m, "phase_class": self.phase_class.value}

    @classmethod
    def from_json(cls, order: int, d: dict) -> "SingularFade":
        pc = d.get("phase_class", d.get("class"))
        return cls(order, int(d["k1"]), int(d["k2"]), int(d["m"]), PhaseClass(pc))

    def label(self) -> str:
        return f"({self.k1},{self.k2},m={self.m},{self.phase_class.value})"


def circles(cfg: PskConfig) -> list[tuple[int, int]]:
    """All (k1, k2) circle labels: the unit circle (1, 1) and every k1 != k2."""
    half = cfg.m // 2
    out = [(1, 1)]
    out += [(a, b) for a in range(1, half + 1) for b in range(1, half + 1) if a != b]
    return sorted(out)


def circle_radius(cfg: PskConfig, k1: int, k2: int) -> float:
    return math.sin(k1 * math.pi / cfg.m) / math.sin(k2 * math.pi / cfg.m)


def circle_fades(cfg: PskConfig, k1: int, k2: int) -> list[SingularFade]:
    return [SingularFade.make(cfg.m, k1, k2, m) for m in range(cfg.m)]


def enumerate_singular_fades(cfg: PskConfig) -> list[SingularFade]:
    """All nonzero singular fade states, sorted by (k1, k2, m)."""
    out = []
    for k1, k2 in circles(cfg):
        out.extend(circle_fades(cfg, k1, k2))
    return out


def expected_fade_count(m: int) -> int:
    return m * (m * m // 4 - m // 2 + 1)


def classify(fade: SingularFade) -> Region:
    if fade.k1 < fade.k2:
        return Region.INSIDE
    if fade.k1 == fade.k2:
        return Region.ON_UNIT
    return Region.OUTSIDE


def reciprocal_fade(fade: SingularFade) -> SingularFade:
    """The fade (1/gamma) exp(-j theta)."""
    m = fade.order
    if fade.phase_class is PhaseClass.ALIGNED:
        new_m = (-fade.m) % m
    else:
        new_m = (-fade.m - 1) % m
    return SingularFade(m, fade.k2, fade.k1, new_m, fade.phase_class)


def collision_fade(m: int, a: int, a2: int, b: int, b2: int) -> SingularFade:
    """Exact fade at which cells (a, b) and (a2, b2) of an M-PSK relay collide.

    Requires a != a2 and b != b2. Solves psk(a) + z psk(b) = psk(a2) + z psk(b2)
    on integer indices: z = -s (sin(k1 pi/M)/sin(k2 pi/M)) exp(j pi (a+a2-b-b2)/M)
    with s the product of the signs of the two index differences.
    """
    d1, d2 = a - a2, b - b2
    if d1 % m == 0 or d2 % m == 0:
        raise ValueError("both index differences must be nonzero")
    k1 = min(abs(d1) % m, m - abs(d1) % m)
    k2 = min(abs(d2) % m, m - abs(d2) % m)
    p = (a + a2 - b - b2) + m * (1 + (d1 < 0) + (d2 < 0))
    p %= 2 * m
    if k1 == k2:
        k1 = k2 = 1
    # p parity always agrees with the (k1, k2) parity class
    return SingularFade(m, k1, k2, p // 2, phase_class_for(k1, k2))


def rectangle_singular_fades(cfg: PskConfig, b_indices) -> list[SingularFade]:
    """Singular fades when A uses M-PSK and B uses the M-PSK subset `b_indices`."""
    b_indices = list(b_indices)
    found = set()
    for a in range(cfg.m):
        for a2 in range(cfg.m):
            if a == a2:
                continue
            for b in b_indices:
                for b2 in b_indices:
                    if b != b2:
                        found.add(collision_fade(cfg.m, a, a2, b, b2))
    return sorted(found)
