"""Projected amplitude paths and ripple removal by a centered moving average."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .basis import CenterBasis, project_series
from .dde import Trajectory

__all__ = ["ProjectedPath", "project_trajectory", "moving_average", "smooth"]


@dataclass(frozen=True)
class ProjectedPath:
    """Center-coordinate image of a trajectory, one row per recorded time."""

    t: np.ndarray
    r: np.ndarray
    z: np.ndarray
    xi: np.ndarray
    x1_re: np.ndarray
    x1_im: np.ndarray
    x3: np.ndarray
    r_s: Optional[np.ndarray] = None
    z_s: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        n = len(self.t)
        for name in ("r", "z", "xi", "x1_re", "x1_im", "x3"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has the wrong length")
        if n > 1 and not np.all(np.diff(self.t) > 0):
            raise ValueError("times must be strictly increasing")
        if np.any(self.r < 0):
            raise ValueError("r must be non-negative")

    def __len__(self) -> int:
        return len(self.t)

    @classmethod
    def from_coords(cls, t: np.ndarray, x1: np.ndarray, x3: np.ndarray) -> "ProjectedPath":
        w1, w2 = x1.real, -x1.imag
        return cls(
            t=np.asarray(t, float),
            r=np.hypot(w1, w2),
            z=np.asarray(x3, float),
            xi=np.arctan2(w2, w1),
            x1_re=x1.real.copy(),
            x1_im=x1.imag.copy(),
            x3=np.asarray(x3, float),
        )


def project_trajectory(traj: Trajectory, basis: CenterBasis) -> ProjectedPath:
    """Project every delay window of a trajectory.

    The first row corresponds to the window ending at ``t0`` (pure history),
    so the path covers the whole recorded interval.
    """
    full = traj.with_history()
    n = traj.stepsPerDelay
    if traj.history is None:
        t = traj.times[n:]
    else:
        t = traj.times
    x1, x3 = project_series(full, n, basis)
    return ProjectedPath.from_coords(t, x1, x3)


def moving_average(t: np.ndarray, y: np.ndarray, width: float) -> np.ndarray:
    """Centered running mean of ``y`` over ``[t - width/2, t + width/2]``.

    ``y`` is treated as piecewise linear between samples, so the window
    need not align with the grid. Near the ends the window shrinks
    symmetrically; the first and last samples are returned unchanged.
    """
    t = np.asarray(t, float)
    y = np.asarray(y, float)
    if width <= 0:
        raise ValueError("width must be positive")
    C = np.concatenate([[0.0], cumulative_trapezoid(y, t)])
    half = np.minimum.reduce([np.full_like(t, 0.5 * width), t - t[0], t[-1] - t])
    lo, hi = t - half, t + half

    def integral_to(s):
        i = np.clip(np.searchsorted(t, s, side="right") - 1, 0, len(t) - 2)
        ds = s - t[i]
        dt = t[i + 1] - t[i]
        slope = (y[i + 1] - y[i]) / dt
        return C[i] + y[i] * ds + 0.5 * slope * ds * ds

    out = y.copy()
    inner = half > 0
    out[inner] = (integral_to(hi[inner]) - integral_to(lo[inner])) / (2.0 * half[inner])
    return out


def smooth(path: ProjectedPath, windowPeriods: float, omega0: float) -> ProjectedPath:
    """Average ``r`` and ``z`` over ``windowPeriods`` fast periods ``2 pi / omega0``.

    Raises
    ------
    ValueError
        If the path spans fewer than three fast periods or the window is
        not positive.
    """
    if windowPeriods <= 0:
        raise ValueError("windowPeriods must be positive")
    period = 2.0 * math.pi / omega0
    if len(path) < 3 or path.t[-1] - path.t[0] < 3.0 * period:
        raise ValueError("path too short: need at least three fast periods")
    width = windowPeriods * period
    return replace(path, r_s=moving_average(path.t, path.r, width), z_s=moving_average(path.t, path.z, width))
