"""Cubic normal form on the three-dimensional center manifold.

Coordinates on the manifold are ``(x1, x2 = conj(x1), x3)`` with respect to
the basis ``Phi``. The reduced field is

    x1' = i w x1 + (a11 mu1 + a12 mu2) x1 + a13 x1 x3 + K1 x1^2 x2 + K2 x1 x3^2
    x3' = a21 mu1 x3 + a23 x1 x2 + a24 x3^2 + K3 x1 x2 x3 + K4 x3^3

where each cubic coefficient ``K`` is a signed sum of six contributions
(``b + c + d - e - m + n``). These come from the cubic nonlinearity and from
the second-order coordinate changes on and off the manifold.

The closed-form coefficient expressions are written so that they accept
either Python complex numbers or ``mpmath`` numbers. This allows an
independent high-precision re-evaluation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Mapping

import numpy as np

from .basis import CenterBasis, ExpPoly, bilinear_exact
from .errors import DegeneracyError, NumericalError
from .model import OscillatorConfig
from .spectrum import eval_delta

__all__ = [
    "QuadraticForcing",
    "HSolution",
    "SecondOrder",
    "NormalFormCoefficients",
    "CylindricalCoefficients",
    "UnfoldingCoefficients",
    "basis_constants",
    "second_order",
    "second_order_formulas",
    "quadratic_forcing",
    "forcing_field",
    "solve_h",
    "third_order",
    "third_order_formulas",
    "normal_form",
    "cylindrical",
    "unfolding",
    "HYPOTHESIS_TOL",
]

HYPOTHESIS_TOL = 1e-10
H_RESIDUAL_TOL = 1e-9
MONOMIALS = ("200", "020", "110", "101", "011", "002")


def basis_constants(basis: CenterBasis, cfg: OscillatorConfig) -> dict[str, Any]:
    """Scalars shared by all coefficient formulas."""
    E = cmath.exp(1j * basis.wt)
    return dict(
        w=basis.omega0,
        t=basis.tau0,
        eps=basis.epsilon,
        a=basis.a,
        E=E,
        Em=E.conjugate(),
        D=basis.Dfac,
        s=basis.sigma,
        Db=basis.Dfac.conjugate(),
        sb=basis.sigma.conjugate(),
        D1=basis.D1fac,
        g11=cfg.g11, g12=cfg.g12, g22=cfg.g22,
        g111=cfg.g111, g112=cfg.g112, g122=cfg.g122, g222=cfg.g222,
    )


# --- second order ---------------------------------------------------------------


@dataclass(frozen=True)
class SecondOrder:
    a11: complex
    a12: complex
    a13: complex
    a21: float
    a22: float
    a23: float
    a24: float


def second_order_formulas(k: Mapping[str, Any]) -> dict[str, Any]:
    """Second-order coefficients from the basis constants ``k``."""
    I = 1j
    w, t, eps, a = k["w"], k["t"], k["eps"], k["a"]
    Db, sb, Em = k["Db"], k["sb"], k["Em"]
    g11, g12, g22 = k["g11"], k["g12"], k["g22"]
    a21 = t / (t - eps - a)
    return dict(
        a11=t * Db * sb * Em,
        a12=Db * (I * w - sb * w ** 2),
        a13=t * Db * sb * (g11 * Em + I * w * g12 * Em),
        a21=a21,
        a22=0 * a21,
        a23=a21 * (g11 + w ** 2 * g22),
        a24=a21 * g11 / 2,
    )


def second_order(basis: CenterBasis, cfg: OscillatorConfig) -> SecondOrder:
    v = second_order_formulas(basis_constants(basis, cfg))
    return SecondOrder(
        complex(v["a11"]), complex(v["a12"]), complex(v["a13"]),
        float(v["a21"]), 0.0, float(v["a23"]), float(v["a24"]),
    )


# --- quadratic forcing and the off-manifold correction -------------------------------


@dataclass(frozen=True)
class QuadraticForcing:
    """Monomial coefficients of the quadratic nonlinearity restricted to ``Phi x``."""

    A200: np.ndarray
    A020: np.ndarray
    A110: np.ndarray
    A101: np.ndarray
    A011: np.ndarray
    A002: np.ndarray

    def __getitem__(self, key: str) -> np.ndarray:
        return getattr(self, "A" + key)

    def is_zero(self) -> bool:
        return all(not np.any(self[p]) for p in MONOMIALS)


def quadratic_forcing(basis: CenterBasis, cfg: OscillatorConfig) -> QuadraticForcing:
    w, t = basis.omega0, basis.tau0
    Em = cmath.exp(-1j * basis.wt)
    g11, g12, g22 = cfg.quadratic
    c200 = t * Em * Em * (0.5 * g11 + 1j * w * g12 - 0.5 * w * w * g22)
    c110 = t * (g11 + w * w * g22)
    c101 = t * Em * (g11 + 1j * w * g12)
    c002 = 0.5 * t * g11

    def vec(c):
        return np.array([0.0, c], dtype=complex)

    return QuadraticForcing(
        vec(c200), vec(np.conj(c200)), vec(c110), vec(c101), vec(np.conj(c101)), vec(c002)
    )


def forcing_field(basis: CenterBasis, cfg: OscillatorConfig, x1: complex, x2: complex, x3: complex) -> np.ndarray:
    """Quadratic nonlinearity evaluated directly on ``Phi (x1, x2, x3)``.

    Only the delayed slot enters, so the value depends on ``Phi(-1)``.
    """
    u = basis.phi(-1.0) @ np.array([x1, x2, x3], dtype=complex)
    p, q = u
    g11, g12, g22 = cfg.quadratic
    return np.array([0.0, basis.tau0 * (0.5 * g11 * p * p + g12 * p * q + 0.5 * g22 * q * q)])


@dataclass
class HSolution:
    """Second-order off-manifold correction ``h_p(theta)`` for each monomial ``p``.

    ``functions`` holds closed-form representations. ``at_m1`` and ``at_0`` are
    their values at ``theta = -1`` and ``theta = 0``. ``residuals`` maps each
    solved monomial to its ODE, boundary, orthogonality and solvability
    residual norms.
    """

    functions: dict[str, ExpPoly]
    residuals: dict[str, dict[str, float]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.at_m1 = {p: np.asarray(f(-1.0)) for p, f in self.functions.items()}
        self.at_0 = {p: np.asarray(f(0.0)) for p, f in self.functions.items()}

    def max_residual(self) -> float:
        return max((v for r in self.residuals.values() for v in r.values()), default=0.0)


def _eigenvalue_for(p: str, wt: float) -> complex:
    return {"200": 2j * wt, "101": 1j * wt, "110": 0j, "002": 0j}[p]


def _solve_one(basis: CenterBasis, Ap: np.ndarray, lam: complex, singular: bool) -> tuple[ExpPoly, dict[str, float]]:
    w, wt = basis.omega0, basis.wt
    A, B = basis.matA, basis.matB
    c = basis.psi0 @ Ap
    modes = (
        (np.array([1.0, 1j * w]), 1j * wt),
        (np.array([1.0, -1j * w]), -1j * wt),
        (np.array([1.0, 0.0], dtype=complex), 0j),
    )
    terms = []
    for (v, kappa), cj in zip(modes, c):
        if cj == 0:
            continue
        if abs(kappa - lam) < 1e-12:
            terms.append((cj * v, lam, 1))
        else:
            terms.append((cj * v / (kappa - lam), kappa, 0))
    part = ExpPoly(tuple(terms))
    bc_rhs = Ap - (part.derivative(0.0) - A @ part(0.0) - B @ part(-1.0))
    M = lam * np.eye(2) - A - B * cmath.exp(-lam)
    units = [ExpPoly(((np.eye(2, dtype=complex)[j], lam, 0),)) for j in range(2)]
    if not singular:
        K = np.linalg.solve(M, bc_rhs)
        solvability = 0.0
    else:
        O = np.array([[bilinear_exact(i, u, basis) for u in units] for i in range(3)])
        o_rhs = -np.array([bilinear_exact(i, part, basis) for i in range(3)])
        aug = np.vstack([M, O])
        rhs = np.concatenate([bc_rhs, o_rhs])
        K = np.linalg.lstsq(aug, rhs, rcond=None)[0]
        solvability = float(np.linalg.norm(aug @ K - rhs))
    h = part + ExpPoly(((K, lam, 0),))

    th = np.linspace(-1.0, 0.0, 20)
    forcing = basis.phi(th) @ c
    ode = np.max(np.abs(h.derivative(th) - lam * h(th) - forcing))
    bnd = np.max(np.abs(h.derivative(0.0) - A @ h(0.0) - B @ h(-1.0) - Ap))
    orth = max(abs(bilinear_exact(i, h, basis)) for i in range(3))
    return h, dict(ode=float(ode), boundary=float(bnd), orthogonality=float(orth), solvability=solvability)


def solve_h(basis: CenterBasis, qf: QuadraticForcing, check: bool = True) -> HSolution:
    """Closed-form solution of the linear problems for the correction ``h``.

    Raises
    ------
    NumericalError
        If ``2 i omega0`` is (nearly) a characteristic root, or if a residual
        exceeds its tolerance.
    """
    w, t = basis.omega0, basis.tau0
    res_2iw = abs(eval_delta(2j * w, t, basis.epsilon, basis.a, 1.0))
    if res_2iw <= 1e-8:
        raise NumericalError("resonance: 2 i omega0 is a characteristic root")
    funcs: dict[str, ExpPoly] = {}
    residuals: dict[str, dict[str, float]] = {}
    for p in ("200", "101", "110", "002"):
        h, r = _solve_one(basis, qf[p], _eigenvalue_for(p, basis.wt), singular=(p != "200"))
        funcs[p] = h
        residuals[p] = r
    funcs["020"] = funcs["200"].conj()
    funcs["011"] = funcs["101"].conj()
    sol = HSolution(funcs, residuals)
    if check and sol.max_residual() > H_RESIDUAL_TOL * max(1.0, _scale(qf)):
        raise NumericalError(f"h-solve residual too large: {sol.max_residual():.3e}")
    return sol


def _scale(qf: QuadraticForcing) -> float:
    return max(float(np.max(np.abs(qf[p]))) for p in MONOMIALS)


# --- third order -----------------------------------------------------------------


def third_order_formulas(k: Mapping[str, Any], hm1: Mapping[str, Any]) -> dict[str, Any]:
    """Cubic coefficient blocks.

    Parameters
    ----------
    k : mapping
        Basis constants as returned by :func:`basis_constants` (any numeric
        type supporting complex arithmetic).
    hm1 : mapping
        ``h_p(-1)`` as 2-sequences for every monomial ``p``.
    """
    I = 1j
    w, t, eps = k["w"], k["t"], k["eps"]
    E, Em = k["E"], k["Em"]
    P1 = k["Db"] * k["sb"]
    P2 = k["D"] * k["s"]
    D1 = k["D1"]
    g11, g12, g22 = k["g11"], k["g12"], k["g22"]
    g111, g112, g122, g222 = k["g111"], k["g112"], k["g122"], k["g222"]
    Em2 = Em * Em
    out: dict[str, Any] = {}

    # cubic nonlinearity
    out["b11"] = t * P1 * Em * (
        -2 * I * eps * w * E + g111 / 3 + g112 * (2 * w ** 2 - I * w) / 2
        + g122 * (2 * w ** 2 + I * w) / 2 - I * w ** 3 / 3 * g222
    )
    out["b12"] = t * P1 * Em * (-I * eps * w * E + g111 / 3 + I * w / 2 * g112)
    out["b21"] = -t * D1 * (g111 + 2 * w ** 2 / 3 * g122)
    out["b22"] = -t / 6 * D1 * g111

    # quadratic terms composed with the on-manifold change of variables
    out["c11"] = -t ** 2 * P1 / (3 * I * w) * (
        6 * P1 * Em2 * (g11 ** 2 - w ** 4 * g22 ** 2 + 2 * I * w ** 3 * g12 * g22 + 2 * I * w * g11 * g12)
        + 2 * P2 * (-7 * g11 ** 2 - 10 * w ** 2 * g11 * g22 - 4 * w ** 2 * g12 ** 2 - 7 * w ** 2 * g22 ** 2)
        + 3 * D1 * Em * (g11 ** 2 + I * w * g11 * g12 + I * w ** 3 * g12 * g22 - w ** 2 * g11 * g22 + 2 * w ** 2 * g12 ** 2)
    )
    out["c12"] = -2 * t * P1 / (I * w) * (
        P1 * Em2 * (g11 ** 2 + 2 * I * w * g11 * g12 - w ** 2 * g11 * g22)
        + P2 * (-2 * g11 ** 2 - w ** 2 * g11 * g22 - w ** 2 * g12 ** 2)
        + D1 * Em * (g11 ** 2 + 2 * I * w * g11 * g12)
    )
    out["c21"] = 2 * t ** 2 * D1 / (I * w) * (
        P1 * Em * (3 * g11 ** 2 + 3 * I * w * g11 * g12 + 2 * w ** 2 * g12 ** 2 + w ** 2 * g11 * g22 + 3 * I * w ** 3 * g12 * g22)
        + P2 * E * (-3 * g11 ** 2 + 3 * I * w * g11 * g12 - 2 * w ** 2 * g12 ** 2 - w ** 2 * g11 * g22 + 3 * I * w ** 3 * g12 * g22)
    )
    out["c22"] = 2 * t * D1 * g11 / (I * w) * (
        P1 * Em * (g11 + I * w * g12) + P2 * E * (-g11 + I * w * g12)
    )

    # quadratic terms composed with the off-manifold correction
    h200, h110, h101 = hm1["200"], hm1["110"], hm1["101"]
    h011, h002 = hm1["011"], hm1["002"]
    out["d11"] = t * P1 / 2 * (
        g11 * (E * h200[0] + Em * h110[0])
        + g12 * (E * h200[1] + Em * h110[1] + I * w * Em * h110[0] - I * w * E * h200[0])
        + I * w * g22 * (Em * h110[1] - E * h200[1])
    )
    out["d12"] = t * P1 / 2 * (
        g11 * (Em * h002[0] + h101[0]) + I * w * g22 * Em * h002[1]
        + g12 * (Em * h002[1] + h101[1] + I * w * Em * h002[0])
    )
    out["d21"] = -t * D1 / 2 * (
        g11 * (Em * h011[0] + E * h101[0] + h110[0])
        + I * w * g22 * (Em * h011[1] - E * h101[1])
        + g12 * (E * h011[1] + E * h101[1] + h110[1] + I * w * Em * h011[0] - I * w * E * h101[0])
    )
    out["d22"] = -t * D1 / 2 * (g11 * h002[0] + g12 * h002[1])

    # transport of the on-manifold change of variables
    out["e11"] = -2 * t ** 2 * P1 / (9 * I * w) * (
        P1 * Em * (
            27 * g11 ** 2 * Em - 27 * w ** 4 * g22 ** 2 * Em + 18 * I * w * g11 * g12 * Em
            + 18 * I * w ** 3 * g12 * g22 * Em + 36 * I * w * g11 * g12 + 36 * I * w ** 3 * g12 * g22
        )
        + P2 * (-19 * g11 ** 2 - 34 * w ** 2 * g11 * g22 - 19 * w ** 4 * g22 ** 2 - 4 * w ** 2 * g12 ** 2)
    )
    out["e12"] = -t ** 2 * P1 / (I * w) * (
        P1 * Em * (2 * g11 ** 2 * Em + 4 * I * w * g11 * g12 - 2 * w ** 2 * g11 * g22 * Em)
        + P2 * (-3 * g11 ** 2 - 2 * w ** 2 * g11 * g22 - w ** 2 * g12 ** 2)
    )
    out["e21"] = t ** 2 * D1 / (I * w) * (
        P1 * Em * (5 * g11 ** 2 + 3 * w ** 2 * g11 * g22 + 5 * I * w ** 3 * g12 * g22 + 5 * I * w * g11 * g12 + 2 * w ** 2 * g12 ** 2)
        - P2 * E * (5 * g11 ** 2 + 3 * w ** 2 * g11 * g22 - 5 * I * w ** 3 * g12 * g22 - 5 * I * w * g11 * g12 + 2 * w ** 2 * g12 ** 2)
    )
    out["e22"] = 2 * t ** 2 * D1 * g11 / (I * w) * (
        P1 * Em * (g11 + I * w * g12) - P2 * E * (g11 - I * w * g12)
    )

    out["m11"] = -t ** 2 * P1 / (3 * I * w) * (
        P1 * Em * (
            -6 * g11 ** 2 * Em + 12 * I * w * g11 * g12 * Em + 6 * w ** 4 * g22 ** 2 * Em
            + 12 * I * w ** 3 * g12 * g22 * Em - 24 * I * w ** 3 * g12 * g22 - 24 * I * w * g11 * g12
        )
        + P2 * (14 * g11 ** 2 + 20 * w ** 2 * g11 * g22 + 14 * w ** 4 * g22 ** 2 + 8 * w ** 2 * g12 ** 2)
        + D1 * Em * (-3 * g11 ** 2 - 3 * I * w * g12 * g22 + 3 * w ** 2 * g11 * g22 - 3 * I * w * g11 * g12 - 6 * w * g12 ** 2)
    )
    out["m12"] = 2 * t * P1 / (I * w) * (
        P1 * Em * (g11 ** 2 * Em + 2 * I * w * g11 * g12 - w ** 2 * g11 * g22 * Em)
        + P2 * (-2 * g11 ** 2 - w ** 2 * g11 * g22 - w ** 2 * g12 ** 2)
        + D1 * Em * (2 * g11 ** 2 + 2 * I * w * g11 * g12)
    )
    out["m21"] = -2 * t ** 2 * D1 / (I * w) * (
        P1 * Em * (3 * g11 ** 2 + w ** 2 * g11 * g22 + 3 * I * w ** 3 * g12 * g22 + 2 * w ** 2 * g12 ** 2 + 3 * I * w * g11 * g12)
        - P2 * E * (3 * g11 ** 2 + w ** 2 * g11 * g22 - 3 * I * w ** 3 * g12 * g22 + 2 * w ** 2 * g12 ** 2 - 3 * I * w * g11 * g12)
    )
    out["m22"] = -2 * t ** 2 * D1 * g11 / (I * w) * (
        P1 * Em * (g11 + I * w * g12) - P2 * E * (g11 - I * w * g12)
    )

    out["n11"] = -t ** 2 * P1 / (9 * I * w) * (
        P1 * Em * (36 * g11 ** 2 * Em + 72 * I * w * g11 * g12 + 72 * I * w ** 3 * g12 * g22 - 36 * w ** 4 * g22 ** 2 * Em)
        + P2 * (4 * g11 ** 2 - 8 * w ** 2 * g11 * g22 + 4 * w ** 4 * g22 ** 2 + 16 * w ** 2 * g12 ** 2)
        + D1 * Em * (-9 * g11 ** 2 - 9 * I * w * g11 * g12 + 9 * w ** 2 * g11 * g22 - 9 * I * w ** 3 * g12 * g22 - 18 * w ** 2 * g12 ** 2)
    )
    out["n12"] = t ** 2 * P1 / (I * w) * (
        P2 * (g11 ** 2 + w ** 2 * g12 ** 2) + D1 * g11 * Em * (-4 * g11 - 4 * I * w * g12)
    )
    out["n21"] = -t ** 2 * D1 / (I * w) * (
        P1 * Em * (g11 ** 2 + I * w * g11 * g12 - w ** 2 * g11 * g22 + I * w ** 3 * g12 * g22 + 2 * w ** 2 * g12 ** 2)
        - P2 * E * (g11 ** 2 - I * w * g11 * g12 - w ** 2 * g11 * g22 - I * w ** 3 * g12 * g22 + 2 * w ** 2 * g12 ** 2)
    )
    out["n22"] = 0 * D1
    return out


_ROW1 = tuple(f"{blk}{j}" for blk in "bcdemn" for j in ("11", "12"))
_ROW2 = tuple(f"{blk}{j}" for blk in "bcdemn" for j in ("21", "22"))


def third_order(basis: CenterBasis, cfg: OscillatorConfig, qf: QuadraticForcing, h: HSolution) -> dict[str, Any]:
    """Evaluate all cubic blocks.

    Row-two entries are real in exact arithmetic. Their real parts are kept
    and the discarded imaginary parts are returned under ``"row2_imag"``.
    """
    raw = third_order_formulas(basis_constants(basis, cfg), h.at_m1)
    out: dict[str, Any] = {key: complex(raw[key]) for key in _ROW1}
    imag = {}
    for key in _ROW2:
        v = complex(raw[key])
        out[key] = v.real
        imag[key] = v.imag
    out["row2_imag"] = imag
    return out


@dataclass(frozen=True)
class NormalFormCoefficients:
    a11: complex
    a12: complex
    a13: complex
    a21: float
    a22: float
    a23: float
    a24: float
    b11: complex
    b12: complex
    c11: complex
    c12: complex
    d11: complex
    d12: complex
    e11: complex
    e12: complex
    m11: complex
    m12: complex
    n11: complex
    n12: complex
    b21: float
    b22: float
    c21: float
    c22: float
    d21: float
    d22: float
    e21: float
    e22: float
    m21: float
    m22: float
    n21: float
    n22: float
    omega0: float = float("nan")
    tau0: float = float("nan")
    row2_imag: dict = field(default_factory=dict, compare=False)
    h_residuals: dict = field(default_factory=dict, compare=False)

    def cubic_sum(self, col: str) -> complex:
        """``b + c + d - e - m + n`` for a coefficient column such as ``"11"``."""
        g = lambda blk: getattr(self, blk + col)
        return g("b") + g("c") + g("d") - g("e") - g("m") + g("n")

    def as_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("row2_imag")
        d.pop("h_residuals")
        return d


def normal_form(basis: CenterBasis, cfg: OscillatorConfig) -> NormalFormCoefficients:
    """Full coefficient table for a configuration at criticality."""
    so = second_order(basis, cfg)
    qf = quadratic_forcing(basis, cfg)
    h = solve_h(basis, qf)
    blocks = third_order(basis, cfg, qf, h)
    imag = blocks.pop("row2_imag")
    return NormalFormCoefficients(
        **asdict(so), **blocks, omega0=basis.omega0, tau0=basis.tau0,
        row2_imag=imag, h_residuals=h.residuals,
    )


# --- reductions -------------------------------------------------------------------


@dataclass(frozen=True)
class CylindricalCoefficients:
    """Amplitude equations ``r' = alpha1 r + beta11 r z + beta30 r^3 + beta12 r z^2`` and
    ``z' = alpha2 z + gamma20 r^2 + gamma02 z^2 + gamma03 z^3``. ``gamma21`` is carried but unused."""

    re_a11: float
    im_a11: float
    re_a12: float
    im_a12: float
    a21: float
    a22: float
    beta11: float
    beta30: float
    beta12: float
    gamma20: float
    gamma02: float
    gamma21: float
    gamma03: float
    omega0: float = float("nan")

    def alpha1(self, mu1: float, mu2: float) -> float:
        return self.re_a11 * mu1 + self.re_a12 * mu2

    def alpha2(self, mu1: float, mu2: float) -> float:
        return self.a21 * mu1 + self.a22 * mu2

    def phase_rate(self, mu1: float, mu2: float, r: float) -> float:
        """Azimuthal rate, reported as computed and not used downstream."""
        return -self.omega0 + (self.im_a11 * mu1 + self.im_a12 * mu2) * r


def cylindrical(coeffs: NormalFormCoefficients) -> CylindricalCoefficients:
    return CylindricalCoefficients(
        re_a11=coeffs.a11.real,
        im_a11=coeffs.a11.imag,
        re_a12=coeffs.a12.real,
        im_a12=coeffs.a12.imag,
        a21=coeffs.a21,
        a22=coeffs.a22,
        beta11=coeffs.a13.real,
        beta30=coeffs.cubic_sum("11").real,
        beta12=coeffs.cubic_sum("12").real,
        gamma20=coeffs.a23,
        gamma02=coeffs.a24,
        gamma21=float(np.real(coeffs.cubic_sum("21"))),
        gamma03=float(np.real(coeffs.cubic_sum("22"))),
        omega0=coeffs.omega0,
    )


@dataclass(frozen=True)
class UnfoldingCoefficients:
    """Truncated unfolding ``r' = r (chi1 + A z)``, ``z' = chi2 + B r^2 - z^2``.

    ``chi1 = chi1_mu1 mu1 + chi1_mu2 mu2`` and ``chi2 = chi2_mu1sq mu1^2``.
    The shift that removes the linear ``z`` term is ``delta = delta_mu1 mu1``
    and the constant it leaves in the unscaled ``z`` equation is
    ``eta2_mu1sq mu1^2``.
    """

    Acoef: float
    Bcoef: int
    chi1_mu1: float
    chi1_mu2: float
    chi2_mu1sq: float
    delta_mu1: float
    eta1_mu1: float
    eta1_mu2: float
    eta2_mu1sq: float
    z_scale: float
    r_scale: float
    hypothesis: dict = field(default_factory=dict, compare=False)

    def chi1(self, mu1: float, mu2: float) -> float:
        return self.chi1_mu1 * mu1 + self.chi1_mu2 * mu2

    def chi2(self, mu1: float) -> float:
        return self.chi2_mu1sq * mu1 * mu1

    def delta(self, mu1: float) -> float:
        return self.delta_mu1 * mu1

    def to_original(self, rhat: float, zhat: float, mu1: float) -> tuple[float, float]:
        """Map unfolding coordinates back to center-manifold amplitudes ``(r, z)``."""
        return rhat / self.r_scale, zhat / self.z_scale + self.delta(mu1)

    def from_original(self, r: float, z: float, mu1: float) -> tuple[float, float]:
        return r * self.r_scale, (z - self.delta(mu1)) * self.z_scale

    @property
    def case_tag(self) -> str:
        if self.Acoef < 0:
            return "I" if self.Bcoef == 1 else "II"
        return "IV" if self.Bcoef == 1 else "III"


def hypothesis_flags(re_a13: float, a23: float, a24: float) -> dict[str, bool]:
    return {
        "re_a13_nonzero": abs(re_a13) > HYPOTHESIS_TOL,
        "a23_nonzero": abs(a23) > HYPOTHESIS_TOL,
        "a24_nonzero": abs(a24) > HYPOTHESIS_TOL,
    }


def unfolding(cyl: CylindricalCoefficients) -> UnfoldingCoefficients:
    """Reduce the amplitude equations to the two-parameter quadratic unfolding.

    Raises
    ------
    DegeneracyError
        If any of ``Re a13``, ``a23``, ``a24`` vanishes.
    """
    re_a13, a23, a24, a21 = cyl.beta11, cyl.gamma20, cyl.gamma02, cyl.a21
    flags = hypothesis_flags(re_a13, a23, a24)
    if not all(flags.values()):
        bad = [k for k, v in flags.items() if not v]
        raise DegeneracyError(f"nondegeneracy hypothesis fails: {', '.join(bad)}")
    chi1_mu1 = cyl.re_a11 - a21 / (2.0 * a24) * re_a13
    return UnfoldingCoefficients(
        Acoef=-re_a13 / a24,
        Bcoef=-int(math.copysign(1, a23 * a24)),
        chi1_mu1=chi1_mu1,
        chi1_mu2=cyl.re_a12,
        chi2_mu1sq=a21 * a21 / 4.0,
        delta_mu1=-a21 / (2.0 * a24),
        eta1_mu1=chi1_mu1,
        eta1_mu2=cyl.re_a12,
        eta2_mu1sq=-a21 * a21 / (4.0 * a24),
        z_scale=-a24,
        r_scale=math.sqrt(abs(a23 * a24)),
        hypothesis=flags,
    )
