import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from zerohopf.errors import ConfigError, NumericalError
from zerohopf.spectrum import (
    ZeroRootTag,
    classify_zero_eigenvalue,
    delta_derivative_at_zero,
    epsilon0,
    eval_delta,
    eval_delta_prime,
    refine_root,
    third_derivative_branch,
    zero_hopf_point,
)

CRITICAL = [(0.3, 0.1, 1.386, 2.060), (0.6, 0.5, 1.375, 2.180), (0.3, -0.2, 1.396, 1.757)]

valid_pairs = st.tuples(st.floats(0.05, 1.3), st.floats(-1.0, 1.0)).filter(lambda p: p[0] ** 2 - p[1] ** 2 < 1.9)


def test_delta_at_zero():
    assert eval_delta(0, 3.7, 0.3, 0.1, 1.0) == 0
    assert eval_delta(0, 3.7, 0.3, 0.1, 0.5) == pytest.approx(0.5)


def test_delta_near_case_one_with_rounded_values():
    assert abs(eval_delta(1.3856j, 2.0606, 0.3, 0.1, 1.0)) < 1e-3
    zh = zero_hopf_point(0.3, 0.1)
    assert abs(eval_delta(1j * zh.omega0, zh.tau0, 0.3, 0.1, 1.0)) < 1e-12


def test_negative_delay_rejected():
    with pytest.raises(ValueError):
        eval_delta(0.1, -1.0, 0.3, 0.1, 1.0)


@pytest.mark.parametrize("eps, a, w, t", CRITICAL)
def test_critical_points(eps, a, w, t):
    zh = zero_hopf_point(eps, a)
    assert zh.omega0 == pytest.approx(w, abs=5e-3)
    assert zh.tau0 == pytest.approx(t, abs=5e-3)
    assert abs(eval_delta(1j * zh.omega0, zh.tau0, eps, a, 1.0)) < 1e-10


@given(valid_pairs)
@settings(max_examples=200)
def test_zero_hopf_invariants(pair):
    eps, a = pair
    assume(abs(eps + a) > 1e-3)
    try:
        zh = zero_hopf_point(eps, a)
    except ConfigError:
        return  # tau0 coincides with eps + a
    assert abs(zh.omega0 ** 2 - (2 - eps ** 2 + a ** 2)) < 1e-12
    assert abs(eval_delta(1j * zh.omega0, zh.tau0, eps, a, 1.0)) < 1e-10
    assert eval_delta(0, zh.tau0, eps, a, 1.0) == 0
    w, t = zh.omega0, zh.tau0
    lhs = (1 + 1j * a * w) * cmath.exp(-1j * w * t)
    assert abs(lhs - (1 - w * w - 1j * eps * w)) < 1e-10


def test_zero_hopf_precondition():
    with pytest.raises(ConfigError):
        zero_hopf_point(2.0, 0.1)


@given(st.complex_numbers(max_magnitude=5), st.floats(0, 4), st.floats(0.1, 2), st.floats(-1, 1), st.floats(0, 2))
def test_conjugate_symmetry(lam, tau, eps, a, b):
    assert eval_delta(lam.conjugate(), tau, eps, a, b) == pytest.approx(eval_delta(lam, tau, eps, a, b).conjugate(), rel=1e-12, abs=1e-12)


@given(st.floats(0, 4), st.floats(0.1, 2), st.floats(-1, 1), st.floats(0, 2))
def test_derivative_closed_form_matches_finite_difference(tau, eps, a, b):
    h = 1e-5
    fd = (eval_delta(h, tau, eps, a, b) - eval_delta(-h, tau, eps, a, b)) / (2 * h)
    assert delta_derivative_at_zero(1, tau, eps, a, b) == pytest.approx(fd.real, abs=1e-7)
    assert eval_delta_prime(0, tau, eps, a, b).real == pytest.approx(fd.real, abs=1e-7)


def test_epsilon0_value_and_residual():
    e0, sign = epsilon0(return_branch=True)
    assert e0 == pytest.approx(1.632993162, abs=1e-8)
    assert abs(third_derivative_branch(e0, sign)) < 1e-12


def test_epsilon0_dense_scan_oracle():
    grid = np.arange(math.sqrt(2.0), 3.0, 1e-5)
    crossings = []
    for sign in (+1, -1):
        f = np.array([third_derivative_branch(e, sign) for e in grid])
        idx = np.flatnonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)
        crossings += [(grid[i], sign) for i in idx]
    assert len(crossings) == 1
    e0, sign = epsilon0(return_branch=True)
    assert crossings[0][1] == sign
    assert abs(crossings[0][0] - e0) < 1e-5


@pytest.mark.parametrize(
    "eps, a, b, tau, tag",
    [
        (0.3, 0.1, 1.0, 0.4, ZeroRootTag.DOUBLE),
        (0.3, 0.1, 0.9, 1.0, ZeroRootTag.NONE),
        (0.3, 0.1, 1.0, 1.0, ZeroRootTag.SIMPLE),
        (1.5, math.sqrt(1.5 ** 2 - 2), 1.0, 1.5 + math.sqrt(1.5 ** 2 - 2), ZeroRootTag.TRIPLE),
    ],
)
def test_classify_examples(eps, a, b, tau, tag):
    assert classify_zero_eigenvalue(eps, a, b, tau).tag == tag


def test_classify_zero_hopf_rounded_delay():
    res = classify_zero_eigenvalue(0.3, 0.1, 1.0, 2.0606, tau_tol=1e-3)
    assert res.tag == ZeroRootTag.ZERO_HOPF
    assert res.detail.omega0 == pytest.approx(1.386, abs=5e-4)
    exact = zero_hopf_point(0.3, 0.1).tau0
    assert classify_zero_eigenvalue(0.3, 0.1, 1.0, exact).tag == ZeroRootTag.ZERO_HOPF


def test_classify_quadruple():
    e0 = epsilon0()
    a = math.sqrt(e0 * e0 - 2)
    assert classify_zero_eigenvalue(e0, a, 1.0, e0 + a).tag == ZeroRootTag.QUADRUPLE


@pytest.mark.parametrize(
    "eps, a, tau",
    [
        (0.3, 0.1, 0.4),
        (0.3, 0.1, 1.0),
        (1.5, math.sqrt(1.5 ** 2 - 2), 1.5 + math.sqrt(1.5 ** 2 - 2)),
        (1.6329931618554507, math.sqrt(1.6329931618554507 ** 2 - 2), 1.6329931618554507 + math.sqrt(1.6329931618554507 ** 2 - 2)),
    ],
)
def test_classification_consistent_with_derivatives(eps, a, tau):
    k = classify_zero_eigenvalue(eps, a, 1.0, tau).multiplicity
    for j in range(k):
        assert abs(delta_derivative_at_zero(j, tau, eps, a, 1.0)) < 1e-9
    assert abs(delta_derivative_at_zero(k, tau, eps, a, 1.0)) >= 1e-6


def test_refine_root_examples():
    zh = zero_hopf_point(0.3, 0.1)
    assert refine_root(0, zh.tau0, 0.3, 0.1, 1.0) == 0
    lam = refine_root(1.4j, zh.tau0, 0.3, 0.1, 1.0)
    assert abs(lam.real) < 1e-10 and abs(lam.imag - zh.omega0) < 1e-10


def test_refine_root_from_half_lands_in_closed_left_plane():
    zh = zero_hopf_point(0.3, 0.1)
    lam = refine_root(0.5, zh.tau0, 0.3, 0.1, 1.0)
    assert abs(eval_delta(lam, zh.tau0, 0.3, 0.1, 1.0)) < 1e-12
    assert lam.real <= 1e-12
    # no root with positive real part in [0, 1] x [-1, 1]: argument principle on the box
    s = np.linspace(0, 1, 2001)
    edges = np.concatenate([s + 1e-3 - 1j, 1 + 1j * (2 * s - 1), (1 - s) + 1j, 1e-3 + 1j * (1 - 2 * s)])
    vals = np.array([eval_delta(z, zh.tau0, 0.3, 0.1, 1.0) for z in edges])
    winding = np.sum(np.diff(np.unwrap(np.angle(vals)))) / (2 * math.pi)
    assert round(winding) == 0


def test_refine_root_singular_derivative():
    # double zero root at tau = eps + a: derivative vanishes at 0
    with pytest.raises(NumericalError):
        refine_root(1e-12, 0.4, 0.3, 0.1, 1.0, tol=1e-30)
