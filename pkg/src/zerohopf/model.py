"""Delayed-feedback van der Pol oscillator.

The second-order equation

    x'' + eps (x^2 - 1) x' + x = g(x(t - tau), x'(t - tau))

is written as a first-order system in ``(u1, u2) = (x, x')``. The feedback
``g`` is a cubic polynomial in the delayed position ``p`` and delayed velocity
``q``, with partial derivatives at the origin named by slot: ``g11`` is
d^2 g / dp^2, ``g12`` is d^2 g / dp dq, ``g122`` is d^3 g / dp dq^2 and so on.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Mapping, NamedTuple

import numpy as np

__all__ = ["OscillatorConfig", "State2", "taylor_g", "rhs", "even_part_g"]


class State2(NamedTuple):
    """Position/velocity pair."""

    u1: float
    u2: float


@dataclass(frozen=True)
class OscillatorConfig:
    """Parameters of the oscillator and its cubic feedback polynomial.

    Attributes
    ----------
    epsilon : float
        Damping strength, must be positive.
    a, b : float
        Linear feedback gains on delayed velocity and delayed position.
    tau : float
        Delay, must be positive.
    g11, g12, g22 : float
        Second partial derivatives of the feedback at the origin.
    g111, g112, g122, g222 : float
        Third partial derivatives of the feedback at the origin.
    """

    epsilon: float
    a: float
    b: float = 1.0
    tau: float = 1.0
    g11: float = 0.0
    g12: float = 0.0
    g22: float = 0.0
    g111: float = 0.0
    g112: float = 0.0
    g122: float = 0.0
    g222: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise TypeError(f"{f.name} must be a real number, got {type(v).__name__}")
            if not math.isfinite(v):
                raise ValueError(f"{f.name} must be finite, got {v}")
            object.__setattr__(self, f.name, float(v))
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "OscillatorConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown oscillator fields: {sorted(unknown)}")
        return cls(**dict(data))

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    def with_(self, **changes: float) -> "OscillatorConfig":
        return replace(self, **changes)

    def unfolded(self, mu1: float, mu2: float, tau0: float) -> "OscillatorConfig":
        """Configuration at unfolding parameters ``b = 1 + mu1``, ``tau = tau0 + mu2``."""
        return replace(self, b=1.0 + mu1, tau=tau0 + mu2)

    @property
    def quadratic(self) -> tuple[float, float, float]:
        return (self.g11, self.g12, self.g22)

    @property
    def cubic(self) -> tuple[float, float, float, float]:
        return (self.g111, self.g112, self.g122, self.g222)

    def packed(self) -> np.ndarray:
        """Flat parameter vector in the order used by the compiled integrator."""
        return np.array(
            [self.epsilon, self.a, self.b, self.g11, self.g12, self.g22,
             self.g111, self.g112, self.g122, self.g222],
            dtype=np.float64,
        )


def taylor_g(u1d: float, u2d: float, cfg: OscillatorConfig) -> float:
    """Cubic feedback polynomial evaluated at delayed position ``u1d`` and velocity ``u2d``."""
    p, q = u1d, u2d
    return (
        cfg.a * q
        + cfg.b * p
        + 0.5 * cfg.g11 * p * p
        + cfg.g12 * p * q
        + 0.5 * cfg.g22 * q * q
        + cfg.g111 * p ** 3 / 6.0
        + 0.5 * cfg.g112 * p * p * q
        + 0.5 * cfg.g122 * p * q * q
        + cfg.g222 * q ** 3 / 6.0
    )


def even_part_g(u1d: float, u2d: float, cfg: OscillatorConfig) -> float:
    """Quadratic (even-degree) part of the feedback polynomial."""
    p, q = u1d, u2d
    return 0.5 * cfg.g11 * p * p + cfg.g12 * p * q + 0.5 * cfg.g22 * q * q


def rhs(now: State2, delayed: State2, cfg: OscillatorConfig) -> State2:
    """Vector field of the first-order system."""
    u1, u2 = now
    return State2(
        u2,
        -u1 - cfg.epsilon * (u1 * u1 - 1.0) * u2 + taylor_g(delayed[0], delayed[1], cfg),
    )
