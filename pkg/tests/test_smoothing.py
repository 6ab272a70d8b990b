import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zerohopf.basis import build_basis
from zerohopf.smoothing import ProjectedPath, moving_average, project_trajectory, smooth
from zerohopf.spectrum import zero_hopf_point

from conftest import CASES, point_run

W0 = 1.3856406460551018
PERIOD = 2 * math.pi / W0


def make_path(t, r, z):
    n = len(t)
    zeros = np.zeros(n)
    return ProjectedPath(t, r, z, zeros, r, zeros, z)


def test_constant_path_unchanged():
    t = np.linspace(0, 50, 1001)
    p = smooth(make_path(t, np.full_like(t, 0.2), np.full_like(t, -0.1)), 1.0, W0)
    assert np.allclose(p.r_s, 0.2, atol=1e-15) and np.allclose(p.z_s, -0.1, atol=1e-15)


@pytest.mark.parametrize("dt", [0.01, 0.0137, 0.05])
def test_sinusoid_averages_out_over_one_period(dt):
    t = np.arange(0, 60, dt)
    r = 0.5 + 0.1 * np.sin(W0 * t)
    p = smooth(make_path(t, r, r.copy()), 1.0, W0)
    inner = (t > t[0] + PERIOD / 2) & (t < t[-1] - PERIOD / 2)
    assert np.max(np.abs(p.r_s[inner] - 0.5)) < 1e-6


def test_length_preserved_and_endpoints_kept():
    t = np.linspace(0, 30, 301)
    r = np.abs(np.sin(t))
    p = smooth(make_path(t, r, -r), 2.0, W0)
    assert len(p.r_s) == len(t)
    assert p.r_s[0] == r[0] and p.r_s[-1] == r[-1]


def test_too_short_path_rejected():
    t = np.linspace(0, 2 * PERIOD, 50)
    with pytest.raises(ValueError):
        smooth(make_path(t, np.ones_like(t), np.ones_like(t)), 1.0, W0)
    t = np.linspace(0, 10 * PERIOD, 50)
    with pytest.raises(ValueError):
        smooth(make_path(t, np.ones_like(t), np.ones_like(t)), 0.0, W0)


def test_path_invariants():
    t = np.linspace(0, 1, 5)
    with pytest.raises(ValueError):
        make_path(t, -np.ones(5), np.zeros(5))
    with pytest.raises(ValueError):
        make_path(t[::-1], np.ones(5), np.zeros(5))


samples = st.lists(st.floats(0, 10), min_size=60, max_size=200)


@given(samples, st.floats(0.2, 3.0))
@settings(max_examples=100)
def test_convex_combination_properties(vals, periods):
    y = np.array(vals)
    t = np.linspace(0, 40, len(y))
    ys = moving_average(t, y, periods * PERIOD)
    assert np.all(ys >= y.min() - 1e-12) and np.all(ys <= y.max() + 1e-12)
    assert np.all(ys >= 0)


@given(samples, samples)
@settings(max_examples=50)
def test_linearity(a, b):
    n = min(len(a), len(b))
    ya, yb = np.array(a[:n]), np.array(b[:n])
    t = np.linspace(0, 40, n)
    lhs = moving_average(t, 2 * ya - 3 * yb, PERIOD)
    rhs = 2 * moving_average(t, ya, PERIOD) - 3 * moving_average(t, yb, PERIOD)
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_shift_equivariance_on_interior():
    dt = 0.02
    t = np.arange(0, 80, dt)
    f = lambda s: np.sin(0.7 * s) + 0.3 * np.cos(2.3 * s)
    width = PERIOD
    shift = 50
    a = moving_average(t, f(t), width)
    b = moving_average(t, f(t + shift * dt), width)
    inner = slice(int(width / dt) + 1, len(t) - shift - int(width / dt) - 1)
    assert np.allclose(b[inner], a[inner.start + shift: inner.stop + shift], atol=1e-12)


@pytest.mark.slow
def test_pm1_smoothed_path_settles():
    cfg = CASES["I"]
    basis = build_basis(zero_hopf_point(cfg.epsilon, cfg.a))
    path = smooth(project_trajectory(point_run("pm1", 0.1, 20000.0), basis), 1.0, basis.omega0)
    tail = path.t > 18000
    assert path.r_s[tail].min() > 0
    assert np.ptp(path.r_s[tail]) < 1e-4 and np.ptp(path.z_s[tail]) < 1e-4
