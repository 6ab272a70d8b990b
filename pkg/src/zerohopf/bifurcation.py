"""Local bifurcation curves and region classification in the unfolding plane.

All curves are leading-order forms in ``(mu1, mu2) = (b - 1, tau - tau0)``.
Classification works on the truncated unfolding

    r' = r (chi1 + A z),    z' = chi2 + B r^2 - z^2,

where only ``chi2 >= 0`` is reachable because ``chi2 = (a21 mu1 / 2)^2``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegeneracyError
from .normalform import NormalFormCoefficients, UnfoldingCoefficients, hypothesis_flags

__all__ = [
    "CurveSet",
    "Prediction",
    "RegionReport",
    "AmplitudeEquilibrium",
    "curves",
    "classify",
    "het_band",
    "amplitude_equilibria",
    "expected_verdict",
    "REGION_TABLE",
]

MU_WARN = 0.05


def _check_hypothesis(coeffs: NormalFormCoefficients) -> None:
    flags = hypothesis_flags(coeffs.a13.real, coeffs.a23, coeffs.a24)
    if not all(flags.values()):
        bad = [k for k, v in flags.items() if not v]
        raise DegeneracyError(f"nondegeneracy hypothesis fails: {', '.join(bad)}")


@dataclass(frozen=True)
class CurveSet:
    """Linear forms ``c1 mu1 + c2 mu2`` whose zero sets are the curves.

    The heteroclinic curve is ``c1 mu1 + c2 mu2 = q mu1^2``.
    """

    hb1: tuple[float, float]
    hb2: tuple[float, float]
    tb: tuple[float, float]
    het: tuple[float, float, float]
    note: str = "leading order; O(|mu|^2) corrections omitted"

    def lhs(self, name: str, mu1, mu2):
        c1, c2 = getattr(self, name)[:2]
        return c1 * np.asarray(mu1) + c2 * np.asarray(mu2)

    def het_residual(self, mu1, mu2):
        c1, c2, q = self.het
        mu1 = np.asarray(mu1)
        return c1 * mu1 + c2 * np.asarray(mu2) - q * mu1 * mu1

    def mu2_on(self, name: str, mu1) -> np.ndarray:
        """``mu2`` on a curve as a function of ``mu1``."""
        mu1 = np.asarray(mu1, dtype=float)
        if name == "het":
            c1, c2, q = self.het
            return (q * mu1 * mu1 - c1 * mu1) / c2
        c1, c2 = getattr(self, name)
        return -c1 * mu1 / c2

    def mu1_on(self, name: str, mu2: float) -> list[float]:
        """Real ``mu1`` crossings of a curve at fixed ``mu2``."""
        if name == "het":
            c1, c2, q = self.het
            if q == 0:
                return [-c2 * mu2 / c1]
            roots = np.roots([q, -c1, -c2 * mu2])
            return sorted(float(r.real) for r in roots if abs(r.imag) <= 1e-14 * max(1.0, abs(r.real)))
        c1, c2 = getattr(self, name)
        return [-c2 * mu2 / c1]


def curves(coeffs: NormalFormCoefficients) -> CurveSet:
    """Hopf, torus and heteroclinic curves to leading order.

    Raises
    ------
    DegeneracyError
        On a nondegeneracy failure or a vanishing heteroclinic denominator.
    """
    _check_hypothesis(coeffs)
    re11, re12, re13 = coeffs.a11.real, coeffs.a12.real, coeffs.a13.real
    a21, a24 = coeffs.a21, coeffs.a24
    denom = 8.0 * a24 + 12.0 * re13
    if abs(denom) <= 1e-12:
        raise DegeneracyError("heteroclinic curve denominator 8 a24 + 12 Re a13 vanishes")
    tb = (re11 - a21 / (2.0 * a24) * re13, re12)
    q = a21 * a21 * re13 / denom
    return CurveSet(
        hb1=(re11, re12),
        hb2=(a21 * re13 - a24 * re11, -a24 * re12),
        tb=tb,
        het=(tb[0], tb[1], q),
    )


class Prediction(str, enum.Enum):
    TRIVIAL_STABLE = "TrivialStable"
    TRIVIAL_UNSTABLE = "TrivialUnstable"
    NONTRIVIAL_EQUILIBRIUM = "NontrivialEquilibrium"
    OFFSET_EQUILIBRIUM = "OffsetEquilibrium"
    SADDLE_STRUCTURE = "SaddleStructure"
    TORUS_CANDIDATE = "TorusCandidate"
    SOURCE_BEYOND_HET = "SourceBeyondHET"


# Observable behaviour of the delay equation expected for each prediction.
REGION_TABLE = {
    Prediction.TRIVIAL_STABLE: "DecaysToZero",
    Prediction.OFFSET_EQUILIBRIUM: "SteadyOffset",
    Prediction.NONTRIVIAL_EQUILIBRIUM: "Periodic",
    Prediction.TORUS_CANDIDATE: "Undetermined",
    Prediction.SOURCE_BEYOND_HET: "Growing",
    Prediction.SADDLE_STRUCTURE: "Growing",
    Prediction.TRIVIAL_UNSTABLE: "Growing",
}


def expected_verdict(pred: Prediction) -> str:
    return REGION_TABLE[Prediction(pred)]


@dataclass(frozen=True)
class AmplitudeEquilibrium:
    """Equilibrium of the truncated unfolding, in unfolding coordinates."""

    r: float
    z: float
    trace: float
    det: float
    kind: str  # "trivial", "offset" or "nontrivial"

    @property
    def stable(self) -> bool:
        return self.det > 0 and self.trace < 0

    @property
    def source(self) -> bool:
        return self.det > 0 and self.trace > 0

    @property
    def saddle(self) -> bool:
        return self.det < 0


def amplitude_equilibria(chi1: float, chi2: float, A: float, B: int, z_trivial: float) -> list[AmplitudeEquilibrium]:
    """All equilibria with ``r >= 0``.

    On the ``r = 0`` axis the one at ``z_trivial`` is the image of the origin
    of the delay equation, the other an offset constant solution.
    """
    out = []
    if chi2 >= 0:
        root = math.sqrt(chi2)
        zs = sorted({root, -root}, key=lambda v: abs(v - z_trivial))
        for i, z in enumerate(zs):
            a = chi1 + A * z
            b = -2.0 * z
            out.append(AmplitudeEquilibrium(0.0, z, a + b, a * b, "trivial" if i == 0 else "offset"))
    ze = -chi1 / A
    r2 = (ze * ze - chi2) / B
    if r2 > 0:
        r = math.sqrt(r2)
        out.append(AmplitudeEquilibrium(r, ze, -2.0 * ze, -2.0 * A * B * r2, "nontrivial"))
    return out


@dataclass(frozen=True)
class RegionReport:
    mu1: float
    mu2: float
    caseTag: str
    chi1: float
    chi2: float
    sideOfCurves: dict
    prediction: Prediction
    equilibria: tuple = field(default=(), compare=False)
    nontrivial: Optional[tuple[float, float]] = None  # (r, z) in center-manifold amplitudes


def classify(mu1: float, mu2: float, coeffs: NormalFormCoefficients, unf: UnfoldingCoefficients) -> RegionReport:
    """Predict the local phase portrait at ``(mu1, mu2)``.

    The attracting object is chosen in this order: a stable ``r > 0``
    equilibrium, a stable trivial equilibrium, a stable offset equilibrium.
    With no stable equilibrium, a repelling ``r > 0`` equilibrium in the
    torus-capable case (``A > 0``, ``B = -1``) is a torus candidate when
    ``chi1`` lies between the torus and heteroclinic curves and beyond them
    otherwise; a saddle ``r > 0`` equilibrium yields a saddle structure.
    """
    if max(abs(mu1), abs(mu2)) > MU_WARN:
        warnings.warn(f"|mu| = {max(abs(mu1), abs(mu2)):.3g} exceeds {MU_WARN}; local analysis may not apply")
    cs = curves(coeffs)
    A, B = unf.Acoef, unf.Bcoef
    chi1 = unf.chi1(mu1, mu2)
    chi2 = unf.chi2(mu1)
    z_triv = unf.from_original(0.0, 0.0, mu1)[1]
    eqs = amplitude_equilibria(chi1, chi2, A, B, z_triv)
    sides = {
        "hb1": float(cs.lhs("hb1", mu1, mu2)),
        "hb2": float(cs.lhs("hb2", mu1, mu2)),
        "tb": float(cs.lhs("tb", mu1, mu2)),
        "het": float(cs.het_residual(mu1, mu2)),
        # chi2 = 0 line, where the two r = 0 equilibria meet and swap roles
        "fold": float(mu1),
    }
    by_kind = {e.kind: e for e in eqs}
    nt = by_kind.get("nontrivial")
    triv = by_kind.get("trivial")
    off = by_kind.get("offset")

    if nt is not None and nt.stable:
        pred = Prediction.NONTRIVIAL_EQUILIBRIUM
    elif triv is not None and triv.stable:
        pred = Prediction.TRIVIAL_STABLE
    elif off is not None and off.stable:
        pred = Prediction.OFFSET_EQUILIBRIUM
    elif nt is not None and nt.source and A > 0 and B == -1:
        het_level = cs.het[2] * mu1 * mu1
        between = 0.0 < chi1 < het_level or het_level < chi1 < 0.0
        pred = Prediction.TORUS_CANDIDATE if between else Prediction.SOURCE_BEYOND_HET
    elif nt is not None and nt.saddle:
        pred = Prediction.SADDLE_STRUCTURE
    else:
        pred = Prediction.TRIVIAL_UNSTABLE

    nontrivial = unf.to_original(nt.r, nt.z, mu1) if nt is not None else None
    return RegionReport(mu1, mu2, unf.case_tag, chi1, chi2, sides, pred, tuple(eqs), nontrivial)


def het_band(coeffs: NormalFormCoefficients, mu2: float) -> tuple[float, float]:
    """``mu1`` interval between the torus curve and the heteroclinic curve at fixed ``mu2``.

    The heteroclinic crossing closest to the torus crossing is used.

    Raises
    ------
    ValueError
        If either curve has no real crossing.
    """
    cs = curves(coeffs)
    tb = cs.mu1_on("tb", mu2)
    het = cs.mu1_on("het", mu2)
    if not tb or not het:
        raise ValueError(f"no crossing at mu2 = {mu2}")
    m_tb = tb[0]
    m_het = min(het, key=lambda m: abs(m - m_tb))
    return (min(m_tb, m_het), max(m_tb, m_het))
