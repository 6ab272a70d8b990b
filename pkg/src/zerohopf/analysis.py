"""End-to-end pipeline from a configuration to unfolding invariants and curves."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from .basis import CenterBasis, build_basis, gram_matrix
from .bifurcation import CurveSet, curves
from .errors import ConfigError
from .model import OscillatorConfig
from .normalform import (
    CylindricalCoefficients,
    NormalFormCoefficients,
    UnfoldingCoefficients,
    cylindrical,
    hypothesis_flags,
    normal_form,
    unfolding,
)
from .spectrum import ZeroHopfPoint, zero_hopf_point

__all__ = ["Analysis", "analyze", "flatten_report"]


@dataclass(frozen=True)
class Analysis:
    config: OscillatorConfig
    point: ZeroHopfPoint
    basis: CenterBasis
    coeffs: NormalFormCoefficients
    cyl: CylindricalCoefficients
    unf: UnfoldingCoefficients
    curves: CurveSet


def analyze(cfg: OscillatorConfig) -> Analysis:
    """Run spectrum, basis, normal form and bifurcation stages for ``cfg``.

    Raises
    ------
    ConfigError
        If ``b != 1`` (the origin is not critical) or no zero-Hopf point exists.
    DegeneracyError
        If the nondegeneracy conditions fail.
    """
    if abs(cfg.b - 1.0) > 1e-12:
        raise ConfigError("criticality requires b = 1")
    zh = zero_hopf_point(cfg.epsilon, cfg.a)
    basis = build_basis(zh)
    coeffs = normal_form(basis, cfg)
    cyl = cylindrical(coeffs)
    unf = unfolding(cyl)
    return Analysis(cfg, zh, basis, coeffs, cyl, unf, curves(coeffs))


def _put(out: dict, key: str, value: Any) -> None:
    if isinstance(value, complex):
        out[key + ".re"] = value.real
        out[key + ".im"] = value.imag
    elif isinstance(value, dict):
        for k, v in value.items():
            _put(out, f"{key}.{k}", v)
    elif isinstance(value, (tuple, list)):
        for i, v in enumerate(value):
            _put(out, f"{key}.{i}", v)
    else:
        out[key] = value


def flatten_report(an: Analysis) -> dict[str, Any]:
    """Flat dotted-key view of an analysis, in a stable order."""
    out: dict[str, Any] = {}
    _put(out, "oscillator", an.config.to_dict())
    zh = an.point
    _put(out, "zerohopf", {"omega0": zh.omega0, "tau0": zh.tau0, "period": zh.period,
                           "residual": zh.residual, "branch": zh.branch})
    _put(out, "coefficients", an.coeffs.as_dict())
    _put(out, "coefficients.row2_imag", an.coeffs.row2_imag)
    _put(out, "cylindrical", asdict(an.cyl))
    u = an.unf
    _put(out, "unfolding", {
        "A": u.Acoef, "B": u.Bcoef, "caseTag": u.case_tag,
        "chi1_mu1": u.chi1_mu1, "chi1_mu2": u.chi1_mu2, "chi2_mu1sq": u.chi2_mu1sq,
        "delta_mu1": u.delta_mu1, "eta2_mu1sq": u.eta2_mu1sq,
        "z_scale": u.z_scale, "r_scale": u.r_scale,
    })
    c = an.curves
    _put(out, "curves", {"hb1": c.hb1, "hb2": c.hb2, "tb": c.tb, "het": c.het})
    _put(out, "hypothesis", hypothesis_flags(an.coeffs.a13.real, an.coeffs.a23, an.coeffs.a24))
    g = gram_matrix(an.basis, 400)
    _put(out, "diagnostics", {
        "gram_max_deviation": float(np.max(np.abs(g - np.eye(3)))),
        "h_residual_max": max((v for d in an.coeffs.h_residuals.values() for v in d.values()), default=math.nan),
    })
    _put(out, "diagnostics.h_residuals", an.coeffs.h_residuals)
    return out
