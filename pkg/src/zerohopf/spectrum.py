"""Characteristic function of the linearization and the zero-root classification.

Linearizing about the origin gives

    Delta(lam) = lam^2 - eps lam + 1 - (a lam + b) exp(-lam tau).

At ``b = 1`` the origin always has a zero root. Its multiplicity and the
presence of a purely imaginary pair decide which degenerate case applies.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Optional

from scipy.optimize import bisect

from .errors import ConfigError, NumericalError

__all__ = [
    "ZeroHopfPoint",
    "ZeroRootTag",
    "ZeroRootClass",
    "eval_delta",
    "eval_delta_prime",
    "delta_derivative_at_zero",
    "third_derivative_branch",
    "classify_zero_eigenvalue",
    "epsilon0",
    "zero_hopf_point",
    "refine_root",
]

EQ_TOL = 1e-10


def eval_delta(lam: complex, tau: float, eps: float, a: float, b: float) -> complex:
    """Characteristic function at ``lam``."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    return lam * lam - eps * lam + 1.0 - (a * lam + b) * cmath.exp(-lam * tau)


def eval_delta_prime(lam: complex, tau: float, eps: float, a: float, b: float) -> complex:
    """Derivative of the characteristic function with respect to ``lam``."""
    e = cmath.exp(-lam * tau)
    return 2.0 * lam - eps - a * e + tau * (a * lam + b) * e


def delta_derivative_at_zero(j: int, tau: float, eps: float, a: float, b: float) -> float:
    """Closed-form ``j``-th derivative of the characteristic function at zero."""
    poly = {0: 1.0, 1: -eps, 2: 2.0}.get(j, 0.0)
    lin = j * a * (-tau) ** (j - 1) if j >= 1 else 0.0
    return poly - b * (-tau) ** j - lin


def third_derivative_branch(eps: float, sign: int) -> float:
    """Third derivative at zero on the double-zero locus, as a function of ``eps``.

    ``sign = -1`` corresponds to ``a = +sqrt(eps^2 - 2)`` and ``sign = +1`` to
    ``a = -sqrt(eps^2 - 2)``.
    """
    s = eps * eps - 2.0
    if s < 0:
        raise ValueError("branch only defined for eps^2 >= 2")
    return 6.0 * eps - 2.0 * eps ** 3 + sign * 2.0 * s * math.sqrt(s)


def epsilon0(return_branch: bool = False):
    """Damping value at which the zero root becomes quadruple.

    Both signs of the third-derivative expression are scanned on
    ``[1.5, 1.7]``; exactly one changes sign there and its root is returned.

    Parameters
    ----------
    return_branch : bool
        Also return the sign (+1 or -1) of the branch that produced the root.
    """
    lo, hi = 1.5, 1.7
    found = []
    for sign in (+1, -1):
        f_lo = third_derivative_branch(lo, sign)
        f_hi = third_derivative_branch(hi, sign)
        if f_lo * f_hi < 0:
            root = bisect(third_derivative_branch, lo, hi, args=(sign,), xtol=1e-15, maxiter=200)
            if abs(third_derivative_branch(root, sign)) >= 1e-13:
                raise NumericalError("bisection did not reach the residual target")
            found.append((root, sign))
    if len(found) != 1:
        raise NumericalError(f"expected one sign change in [1.5, 1.7], found {len(found)}")
    root, sign = found[0]
    return (root, sign) if return_branch else root


@dataclass(frozen=True)
class ZeroHopfPoint:
    """Critical delay and frequency for a simple zero plus imaginary pair."""

    omega0: float
    tau0: float
    epsilon: float
    a: float
    residual: float = 0.0
    branch: str = "principal"

    def __post_init__(self) -> None:
        if not (self.omega0 > 0 and self.tau0 > 0):
            raise ValueError("omega0 and tau0 must be positive")
        if abs(self.omega0 ** 2 - (2.0 - self.epsilon ** 2 + self.a ** 2)) > 1e-12 * max(1.0, self.omega0 ** 2):
            raise ValueError("omega0 inconsistent with eps and a")
        if abs(self.tau0 - (self.epsilon + self.a)) <= EQ_TOL:
            raise ValueError("zero root is not simple (tau0 = eps + a)")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega0


def zero_hopf_point(eps: float, a: float, tol: float = 1e-10) -> ZeroHopfPoint:
    """Critical pair ``(omega0, tau0)`` for given damping and velocity gain.

    Raises
    ------
    ConfigError
        If ``eps^2 - a^2 >= 2`` (no imaginary pair).
    NumericalError
        If neither arccos branch satisfies the characteristic equation.
    """
    if not eps * eps - a * a < 2.0:
        raise ConfigError(f"no zero-Hopf point: eps^2 - a^2 = {eps * eps - a * a:.6g} >= 2")
    w = math.sqrt(2.0 - eps * eps + a * a)
    # exp(i w tau0) = (1 + i a w) / (1 - w^2 - i eps w); its real part is the
    # arccos argument. The sine picks the branch and keeps the angle
    # well-conditioned where the cosine is near -1 or 1.
    ratio = (1.0 + 1j * a * w) / (1.0 - w * w - 1j * eps * w)
    theta = math.atan2(ratio.imag, ratio.real) % (2.0 * math.pi)
    branches = [("principal", theta)] if theta <= math.pi else [("complement", theta)]
    c = min(1.0, max(-1.0, (1.0 - (1.0 + eps * a) * w * w) / (a * a * w * w + 1.0)))
    branches += [("principal", math.acos(c)), ("complement", 2.0 * math.pi - math.acos(c))]
    for branch, angle in branches:
        tau0 = angle / w
        if tau0 <= 0:
            continue
        res = abs(eval_delta(1j * w, tau0, eps, a, 1.0))
        if res < tol:
            if abs(tau0 - (eps + a)) <= EQ_TOL:
                raise ConfigError("tau0 = eps + a: zero root is double at the critical delay")
            return ZeroHopfPoint(w, tau0, eps, a, residual=res, branch=branch)
    raise NumericalError("arccos branch correction failed; parameters outside the zero-Hopf regime")


class ZeroRootTag(str, enum.Enum):
    NONE = "None"
    SIMPLE = "Simple"
    DOUBLE = "Double"
    TRIPLE = "Triple"
    QUADRUPLE = "Quadruple"
    ZERO_HOPF = "ZeroHopf"


@dataclass(frozen=True)
class ZeroRootClass:
    tag: ZeroRootTag
    detail: Optional[ZeroHopfPoint] = None

    @property
    def multiplicity(self) -> int:
        return {
            ZeroRootTag.NONE: 0,
            ZeroRootTag.SIMPLE: 1,
            ZeroRootTag.ZERO_HOPF: 1,
            ZeroRootTag.DOUBLE: 2,
            ZeroRootTag.TRIPLE: 3,
            ZeroRootTag.QUADRUPLE: 4,
        }[self.tag]


def classify_zero_eigenvalue(
    eps: float, a: float, b: float, tau: float, tol: float = EQ_TOL, tau_tol: float = EQ_TOL
) -> ZeroRootClass:
    """Classify the zero root of the characteristic function.

    Parameters
    ----------
    tol : float
        Absolute tolerance for the defining equalities.
    tau_tol : float
        Tolerance for recognising ``tau`` as the critical delay of the
        imaginary pair. Loosen it when ``tau`` is only known to a few digits.
    """
    if abs(b - 1.0) > tol:
        return ZeroRootClass(ZeroRootTag.NONE)
    if abs(tau - (eps + a)) > tol:
        if eps * eps - a * a < 2.0:
            zh = zero_hopf_point(eps, a)
            if abs(tau - zh.tau0) <= tau_tol:
                return ZeroRootClass(ZeroRootTag.ZERO_HOPF, zh)
        return ZeroRootClass(ZeroRootTag.SIMPLE)
    if abs(eps * eps - a * a - 2.0) > tol:
        return ZeroRootClass(ZeroRootTag.DOUBLE)
    # on the triple locus the third derivative is (eps + a)^2 (eps - 2a)
    if abs(eps - epsilon0()) <= tol and abs(eps - 2.0 * a) <= 10 * tol:
        return ZeroRootClass(ZeroRootTag.QUADRUPLE)
    return ZeroRootClass(ZeroRootTag.TRIPLE)


def refine_root(
    guess: complex, tau: float, eps: float, a: float, b: float, tol: float = 1e-12, maxiter: int = 50
) -> complex:
    """Newton refinement of a characteristic root.

    Raises
    ------
    NumericalError
        On a vanishing derivative or when ``maxiter`` is exhausted.
    """
    lam = complex(guess)
    for _ in range(maxiter + 1):
        f = eval_delta(lam, tau, eps, a, b)
        if abs(f) < tol:
            return lam
        d = eval_delta_prime(lam, tau, eps, a, b)
        if abs(d) <= 1e-8:
            raise NumericalError(f"derivative singular near {lam}")
        lam = lam - f / d
    raise NumericalError(f"Newton did not converge from {guess} in {maxiter} iterations")
