"""Center eigenbasis, adjoint basis, bilinear pairing and projection.

Time is rescaled by the critical delay so that history segments live on
``theta in [-1, 0]``. In these units the linearized system reads
``u'(s) = A u(s) + B u(s - 1)`` with

    A = [[0, tau0], [-tau0, eps tau0]],    B = [[0, 0], [tau0, a tau0]].

Columns of ``Phi`` are ``phi1``, ``conj(phi1)`` and ``phi2``; rows of ``Psi``
are ``conj(psi1)``, ``psi1`` and ``psi2``. The pairing is

    <psi, phi> = psi(0) phi(0) + int_{-1}^{0} psi(xi + 1) B phi(xi) dxi.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.integrate import simpson
from scipy.signal import oaconvolve

from .errors import NumericalError
from .spectrum import ZeroHopfPoint

__all__ = [
    "CenterBasis",
    "Segment",
    "CenterCoords",
    "ExpPoly",
    "ROWS",
    "build_basis",
    "bilinear",
    "bilinear_exact",
    "gram_matrix",
    "project",
    "project_series",
    "segment_from_coords",
]

ROWS = ("psi1bar", "psi1", "psi2")
X3_IMAG_TOL = 1e-6


@dataclass(frozen=True)
class CenterBasis:
    omega0: float
    tau0: float
    epsilon: float
    a: float
    sigma: complex
    Dfac: complex
    D1fac: float
    matA: np.ndarray = field(repr=False)
    matB: np.ndarray = field(repr=False)

    @property
    def wt(self) -> float:
        """Product ``omega0 * tau0``, the imaginary eigenvalue in scaled time."""
        return self.omega0 * self.tau0

    def phi(self, theta) -> np.ndarray:
        """Center eigenfunctions, shape ``theta.shape + (2, 3)``."""
        th = np.asarray(theta, dtype=float)
        e = np.exp(1j * self.wt * th)
        out = np.zeros(th.shape + (2, 3), dtype=complex)
        out[..., 0, 0] = e
        out[..., 1, 0] = 1j * self.omega0 * e
        out[..., 0, 1] = np.conj(e)
        out[..., 1, 1] = -1j * self.omega0 * np.conj(e)
        out[..., 0, 2] = 1.0
        return out

    def adjoint_rows(self) -> list[tuple[np.ndarray, complex]]:
        """Each adjoint row as ``(c, rho)`` with ``psi(s) = c exp(rho s)``."""
        D, s = self.Dfac, self.sigma
        Db, sb = D.conjugate(), s.conjugate()
        return [
            (np.array([Db, Db * sb]), -1j * self.wt),
            (np.array([D, D * s]), 1j * self.wt),
            (np.array([self.D1fac * (self.epsilon + self.a), -self.D1fac], dtype=complex), 0j),
        ]

    def psi(self, s) -> np.ndarray:
        """Adjoint eigenfunctions, shape ``s.shape + (3, 2)``."""
        s = np.asarray(s, dtype=float)
        out = np.empty(s.shape + (3, 2), dtype=complex)
        for i, (c, rho) in enumerate(self.adjoint_rows()):
            out[..., i, :] = c * np.exp(rho * s)[..., None]
        return out

    @property
    def psi0(self) -> np.ndarray:
        return self.psi(0.0)


def build_basis(zh: ZeroHopfPoint) -> CenterBasis:
    """Assemble the eigenbasis constants for a zero-Hopf point."""
    w, t, eps, a = zh.omega0, zh.tau0, zh.epsilon, zh.a
    if abs(eps + a - t) < 1e-12:
        raise NumericalError("D1 is singular: eps + a equals tau0")
    E = cmath.exp(1j * w * t)
    sigma = 1j * w / (1.0 - E)
    D = 1.0 / (1.0 - 1j * sigma * w + t * sigma * E * (1.0 - 1j * a * w))
    D1 = 1.0 / (eps + a - t)
    A = np.array([[0.0, t], [-t, eps * t]])
    B = np.array([[0.0, 0.0], [t, a * t]])
    A.setflags(write=False)
    B.setflags(write=False)
    return CenterBasis(w, t, eps, a, sigma, D, D1, A, B)


@dataclass(frozen=True)
class Segment:
    """History samples ``u(theta)`` on a uniform grid of ``[-1, 0]``.

    ``samples[0]`` is ``theta = -1`` and ``samples[-1]`` is ``theta = 0``.
    """

    samples: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("segment samples must have shape (N + 1, 2)")
        n = arr.shape[0] - 1
        if n < 2 or n % 2:
            raise ValueError(f"segment needs an even number N >= 2 of intervals, got {n}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("segment contains non-finite values")
        object.__setattr__(self, "samples", arr)

    @property
    def count(self) -> int:
        return self.samples.shape[0]

    @property
    def theta(self) -> np.ndarray:
        return np.linspace(-1.0, 0.0, self.count)

    @classmethod
    def from_function(cls, fn, n: int) -> "Segment":
        th = np.linspace(-1.0, 0.0, n + 1)
        return cls(np.asarray(fn(th)))


@dataclass(frozen=True)
class CenterCoords:
    x1: complex
    x3: float
    r: float
    z: float
    xi: float
    x3_imag: float = 0.0


def _row_index(row) -> int:
    if isinstance(row, str):
        return ROWS.index(row)
    return int(row)


def bilinear(psi_row, seg: Segment, basis: CenterBasis) -> complex:
    """Pairing of one adjoint row with a sampled segment (composite Simpson)."""
    c, rho = basis.adjoint_rows()[_row_index(psi_row)]
    th = seg.theta
    u = seg.samples
    Bu = u @ basis.matB.T
    integrand = np.exp(rho * (th + 1.0)) * (Bu @ c)
    return complex(c @ u[-1] + simpson(integrand, x=th))


def gram_matrix(basis: CenterBasis, n: int = 1000) -> np.ndarray:
    """``<Psi, Phi>`` by Simpson quadrature with ``n`` intervals."""
    th = np.linspace(-1.0, 0.0, n + 1)
    P = basis.phi(th)
    G = np.empty((3, 3), dtype=complex)
    for j in range(3):
        seg = Segment(P[:, :, j])
        for i in range(3):
            G[i, j] = bilinear(i, seg, basis)
    return G


def _coords(x1: complex, x3c: complex) -> CenterCoords:
    if abs(x3c.imag) >= X3_IMAG_TOL:
        raise NumericalError(f"imaginary part of x3 too large: {x3c.imag:.3e}")
    w1, w2 = x1.real, -x1.imag
    return CenterCoords(x1, x3c.real, math.hypot(w1, w2), x3c.real, math.atan2(w2, w1), x3c.imag)


def project(seg: Segment, basis: CenterBasis) -> CenterCoords:
    """Center coordinates of a segment with polar form ``x1 = r (cos xi - i sin xi)``."""
    return _coords(bilinear(0, seg, basis), bilinear(2, seg, basis))


def segment_from_coords(basis: CenterBasis, x1: complex, x3: float, n: int) -> Segment:
    """Real segment ``Phi(theta) (x1, conj(x1), x3)``."""
    th = np.linspace(-1.0, 0.0, n + 1)
    v = np.array([x1, np.conj(x1), x3], dtype=complex)
    return Segment(np.real(basis.phi(th) @ v))


def project_series(states: np.ndarray, n: int, basis: CenterBasis) -> tuple[np.ndarray, np.ndarray]:
    """Project every full-delay window of a uniformly sampled trajectory.

    Parameters
    ----------
    states : ndarray, shape (K, 2)
        Samples with ``n`` grid intervals per delay.
    n : int
        Samples per delay, even.

    Returns
    -------
    x1, x3 : ndarray
        Coordinates for windows ending at indices ``n, n + 1, ..., K - 1``.
    """
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    states = np.asarray(states, dtype=float)
    if states.shape[0] <= n:
        return np.empty(0, complex), np.empty(0)
    th = np.linspace(-1.0, 0.0, n + 1)
    h = 1.0 / n
    wts = np.ones(n + 1)
    wts[1:-1:2] = 4.0
    wts[2:-1:2] = 2.0
    wts *= h / 3.0
    bu = states @ basis.matB[1]  # only the second component of B u is nonzero
    rows = basis.adjoint_rows()
    out = []
    for i in (0, 2):
        c, rho = rows[i]
        kern = wts * np.exp(rho * (th + 1.0)) * c[1]
        # sum_j kern[j] * bu[k - n + j] for k >= n
        integral = oaconvolve(bu, kern[::-1], mode="valid")
        out.append(states[n:] @ c + integral)
    x3 = out[1]
    if np.max(np.abs(x3.imag), initial=0.0) >= X3_IMAG_TOL:
        raise NumericalError("imaginary part of x3 too large")
    return out[0], x3.real


# --- closed-form exponential polynomials --------------------------------------


@dataclass(frozen=True)
class ExpPoly:
    """Vector function ``sum_k v_k theta^{m_k} exp(kappa_k theta)`` with ``m_k`` in {0, 1}."""

    terms: tuple = ()

    @staticmethod
    def zero() -> "ExpPoly":
        return ExpPoly(())

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        return ExpPoly(self.terms + other.terms)

    def __call__(self, theta) -> np.ndarray:
        th = np.asarray(theta, dtype=float)
        out = np.zeros(th.shape + (2,), dtype=complex)
        for v, kappa, m in self.terms:
            out += np.asarray(v) * (th ** m * np.exp(kappa * th))[..., None]
        return out

    def derivative(self, theta) -> np.ndarray:
        th = np.asarray(theta, dtype=float)
        out = np.zeros(th.shape + (2,), dtype=complex)
        for v, kappa, m in self.terms:
            e = np.exp(kappa * th)
            s = kappa * e if m == 0 else e + kappa * th * e
            out += np.asarray(v) * s[..., None]
        return out

    def conj(self) -> "ExpPoly":
        return ExpPoly(tuple((np.conj(v), complex(kappa).conjugate(), m) for v, kappa, m in self.terms))


def _moment(m: int, s: complex) -> complex:
    """``int_{-1}^{0} xi^m exp(s xi) dxi`` for ``m`` in {0, 1}."""
    if abs(s) < 1e-12:
        return 1.0 if m == 0 else -0.5
    em = cmath.exp(-s)
    if m == 0:
        return (1.0 - em) / s
    return em / s - (1.0 - em) / (s * s)


def bilinear_exact(psi_row, f: ExpPoly, basis: CenterBasis) -> complex:
    """Pairing of an adjoint row with an exponential polynomial, in closed form."""
    c, rho = basis.adjoint_rows()[_row_index(psi_row)]
    total = complex(c @ f(0.0))
    er = cmath.exp(rho)
    cB = c @ basis.matB
    for v, kappa, m in f.terms:
        total += er * complex(cB @ np.asarray(v)) * _moment(m, rho + kappa)
    return total
