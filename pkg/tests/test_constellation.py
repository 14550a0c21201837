import cmath
import itertools
import math

import numpy as np
import pytest

from pncmaps.constellation import (
    FadeState,
    PskConfig,
    difference_constellation,
    difference_values,
    distinct_count,
    dmin,
    effective_constellation,
    psk_point,
    psk_points,
)
from pncmaps.fades import enumerate_singular_fades


def test_config_validation():
    assert PskConfig(8).bits == 3
    for bad in (0, 1, 3, 6, 12):
        with pytest.raises(ValueError):
            PskConfig(bad)
    with pytest.raises(ValueError):
        PskConfig(8, bits=2)


def test_psk_point_examples():
    assert psk_point(PskConfig(2), 0) == pytest.approx(1j)
    assert psk_point(PskConfig(4), 0) == pytest.approx((1 + 1j) / math.sqrt(2))
    assert psk_point(PskConfig(8), 3) == pytest.approx(cmath.exp(7j * math.pi / 8))
    with pytest.raises(IndexError):
        psk_point(PskConfig(4), 4)
    assert np.allclose(np.abs(psk_points(PskConfig(16))), 1)


def test_fade_state_normalises_theta():
    assert FadeState(1.0, math.pi).theta == pytest.approx(-math.pi)
    assert FadeState(2.0, 3 * math.pi / 2).theta == pytest.approx(-math.pi / 2)
    with pytest.raises(ValueError):
        FadeState(-1, 0)


@pytest.mark.parametrize("m", [2, 4, 8, 16])
def test_difference_constellation_matches_enumeration(m):
    cfg = PskConfig(m)
    pts = psk_points(cfg)
    brute = {complex(round(d.real, 9), round(d.imag, 9)) for d in (pts[:, None] - pts[None, :]).ravel()}
    brute.discard(0j)
    closed = difference_constellation(cfg)
    assert len(closed) == m * m // 2
    assert {complex(round(p.value.real, 9), round(p.value.imag, 9)) for p in closed} == brute
    for p in closed:
        assert abs(abs(p.value) - 2 * math.sin(math.pi * p.n / m)) < 1e-12
    for n in range(1, m // 2 + 1):
        assert sum(p.n == n for p in closed) == m


def test_difference_ring_phases_m4_m8():
    for m in (4, 8):
        for p in difference_constellation(PskConfig(m)):
            base = 2 * p.k * math.pi / m + (math.pi / m if p.n % 2 == 0 else 0)
            assert abs(cmath.phase(p.value / cmath.exp(1j * base))) < 1e-12


def test_bpsk_differences():
    vals = [p.value for p in difference_constellation(PskConfig(2))]
    assert sorted(vals, key=lambda v: v.imag) == pytest.approx([-2j, 2j])
    assert len(difference_values(PskConfig(2))) == 3


def test_effective_constellation_examples():
    assert distinct_count(effective_constellation(PskConfig(4), (1 + 1j) / 2)) == 12
    assert distinct_count(effective_constellation(PskConfig(2), 1.0)) == 3
    for m in (2, 4, 8):
        pts = effective_constellation(PskConfig(m), 0.0)
        assert distinct_count(pts) == m


def test_dmin_examples():
    cfg = PskConfig(4)
    assert dmin(cfg, (1 + 1j) / 2) < 1e-12
    assert dmin(cfg, 1.0) < 1e-12
    z = 0.5 * cmath.exp(1j * math.pi / 5)
    d = dmin(cfg, z)
    pts = psk_points(cfg)
    brute = min(
        abs((pts[a] - pts[a2]) + z * (pts[b] - pts[b2]))
        for a, b, a2, b2 in itertools.product(range(4), repeat=4)
        if (a, b) != (a2, b2)
    )
    assert d == pytest.approx(brute) and d > 0.1


@pytest.mark.parametrize("m", [2, 4, 8])
def test_dmin_zero_exactly_at_singular_fades(m):
    cfg = PskConfig(m)
    for f in enumerate_singular_fades(cfg):
        assert dmin(cfg, f.value()) < 1e-9


def test_dmin_rotation_invariance():
    cfg = PskConfig(8)
    rng = np.random.default_rng(3)
    for _ in range(20):
        z = complex(*rng.normal(size=2))
        assert dmin(cfg, z) == pytest.approx(dmin(cfg, z * cmath.exp(2j * math.pi / 8)))
