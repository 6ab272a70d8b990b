import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zerohopf.model import OscillatorConfig, State2, even_part_g, rhs, taylor_g

from conftest import CASES

finite = st.floats(-5, 5, allow_nan=False)


def poly_by_monomials(p, q, cfg):
    """Independent evaluation from an explicit monomial table."""
    table = [
        (cfg.b, 1, 0), (cfg.a, 0, 1),
        (cfg.g11 / 2, 2, 0), (cfg.g12, 1, 1), (cfg.g22 / 2, 0, 2),
        (cfg.g111 / 6, 3, 0), (cfg.g112 / 2, 2, 1), (cfg.g122 / 2, 1, 2), (cfg.g222 / 6, 0, 3),
    ]
    return sum(c * p ** i * q ** j for c, i, j in table)


def test_g_vanishes_at_origin():
    assert taylor_g(0.0, 0.0, CASES["I"]) == 0.0


def test_g_linear_term_only():
    assert taylor_g(1.0, 0.0, OscillatorConfig(1.0, 0.0)) == 1.0


def test_g_case_one_hand_value():
    cfg = CASES["I"]
    assert taylor_g(0.5, -0.25, cfg) == pytest.approx(0.4125, abs=1e-15)
    assert poly_by_monomials(0.5, -0.25, cfg) == pytest.approx(0.4125, abs=1e-15)


@pytest.mark.parametrize(
    "now, delayed, eps, expected",
    [((0, 0), (0, 0), 0.3, (0, 0)), ((1, 0), (0, 0), 0.3, (0, -1)), ((0, 1), (0, 0), 0.3, (1, 0.3))],
)
def test_rhs_examples(now, delayed, eps, expected):
    out = rhs(State2(*now), State2(*delayed), OscillatorConfig(eps, 0.1, g11=-0.4))
    assert out == pytest.approx(expected, abs=1e-15)


cfgs = st.builds(
    OscillatorConfig,
    epsilon=st.floats(0.01, 3),
    a=finite,
    b=finite,
    tau=st.floats(0.01, 5),
    g11=finite, g12=finite, g22=finite, g111=finite, g112=finite, g122=finite, g222=finite,
)


@given(cfgs, finite, finite)
@settings(max_examples=200)
def test_g_matches_monomial_table(cfg, p, q):
    assert taylor_g(p, q, cfg) == pytest.approx(poly_by_monomials(p, q, cfg), rel=1e-12, abs=1e-10)


@given(cfgs, finite, finite)
def test_g_parity(cfg, p, q):
    lhs = taylor_g(p, q, cfg) + taylor_g(-p, -q, cfg)
    assert lhs == pytest.approx(2 * even_part_g(p, q, cfg), rel=1e-12, abs=1e-10)


@given(cfgs, finite, finite, finite, finite)
def test_rhs_uses_delay_only_through_g(cfg, u1, u2, p, q):
    out = rhs(State2(u1, u2), State2(p, q), cfg)
    base = rhs(State2(u1, u2), State2(0.0, 0.0), cfg)
    assert out.u1 == u2
    assert out.u2 - base.u2 == pytest.approx(taylor_g(p, q, cfg), rel=1e-9, abs=1e-9)


@given(cfgs)
def test_origin_is_equilibrium(cfg):
    assert rhs(State2(0.0, 0.0), State2(0.0, 0.0), cfg) == (0.0, 0.0)


@pytest.mark.parametrize("field, value", [("epsilon", 0.0), ("epsilon", -1.0), ("tau", 0.0), ("g11", math.inf), ("a", math.nan)])
def test_invalid_config_rejected(field, value):
    kwargs = {"epsilon": 0.3, "a": 0.1, field: value}
    with pytest.raises(ValueError):
        OscillatorConfig(**kwargs)


def test_config_is_immutable_and_round_trips():
    cfg = CASES["II"]
    with pytest.raises(Exception):
        cfg.epsilon = 1.0
    assert OscillatorConfig.from_mapping(cfg.to_dict()) == cfg
    with pytest.raises(ValueError):
        OscillatorConfig.from_mapping({"epsilon": 0.3, "a": 0.1, "gamma": 1.0})


def test_packed_order():
    cfg = OscillatorConfig(0.3, 0.1, b=0.9, g11=1, g12=2, g22=3, g111=4, g112=5, g122=6, g222=7)
    assert np.array_equal(cfg.packed(), [0.3, 0.1, 0.9, 1, 2, 3, 4, 5, 6, 7])
