"""Fixed-step method-of-steps integrator for single-delay two-state systems.

The step is ``h = tau / N`` so every main-step delayed lookup lands on a
stored grid point. Stage values at half steps are cubic Hermite interpolants
built from stored states and derivatives. Only the last ``N + 1`` grid
points are kept in a ring buffer. Output is recorded every
``record_stride`` steps.
"""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numba
import numpy as np

from .basis import Segment
from .errors import ConfigError
from .model import OscillatorConfig
from .spectrum import zero_hopf_point

__all__ = [
    "HistorySpec",
    "Trajectory",
    "Verdict",
    "AmplitudeMetrics",
    "oscillator_rhs",
    "integrate",
    "simulate",
    "segment_at",
    "amplitude_metrics",
    "peak_times",
    "BLOWUP_NORM",
]

BLOWUP_NORM = 1e6
MIN_STEPS_PER_DELAY = 40


@numba.njit(cache=True)
def oscillator_rhs(u1, u2, d1, d2, p):
    """Oscillator vector field. ``p`` is :meth:`OscillatorConfig.packed`."""
    g = (
        p[2] * d1 + p[1] * d2
        + 0.5 * p[3] * d1 * d1 + p[4] * d1 * d2 + 0.5 * p[5] * d2 * d2
        + p[6] * d1 * d1 * d1 / 6.0 + 0.5 * p[7] * d1 * d1 * d2
        + 0.5 * p[8] * d1 * d2 * d2 + p[9] * d2 * d2 * d2 / 6.0
    )
    return u2, -u1 - p[0] * (u1 * u1 - 1.0) * u2 + g


@numba.njit(cache=True)
def _hermite(d0, s0, d1, s1, h, s):
    s2 = s * s
    s3 = s2 * s
    return (
        (2.0 * s3 - 3.0 * s2 + 1.0) * d0
        + (s3 - 2.0 * s2 + s) * h * s0
        + (-2.0 * s3 + 3.0 * s2) * d1
        + (s3 - s2) * h * s1
    )


@numba.njit(cache=True)
def _march(f, p, n, h, nsteps, hist, stride, interp_main, blowup):
    # ring slot of grid index i (i >= -n) is (i + n) % (n + 1)
    m = n + 1
    ring = hist.copy()  # columns: x, v, dx, dv
    nout = nsteps // stride + 1
    out = np.empty((nout, 2))
    u1 = hist[n, 0]
    u2 = hist[n, 1]
    out[0, 0] = u1
    out[0, 1] = u2
    # derivative of the solution leaving t = 0 (history supplies the left one)
    r01, r02 = f(u1, u2, hist[0, 0], hist[0, 1], p)
    k11, k12 = r01, r02
    done = 0
    blown = False
    for k in range(nsteps):
        j0 = k % m
        j1 = (k + 1) % m
        d01 = ring[j0, 0]
        d02 = ring[j0, 1]
        s01 = ring[j0, 2]
        s02 = ring[j0, 3]
        if k == n:
            s01 = r01
            s02 = r02
        d11 = ring[j1, 0]
        d12 = ring[j1, 1]
        s11 = ring[j1, 2]
        s12 = ring[j1, 3]
        if interp_main:
            a1 = _hermite(d01, s01, d11, s11, h, 0.0)
            a2 = _hermite(d02, s02, d12, s12, h, 0.0)
            b1 = _hermite(d01, s01, d11, s11, h, 1.0)
            b2 = _hermite(d02, s02, d12, s12, h, 1.0)
            k11, k12 = f(u1, u2, a1, a2, p)
        else:
            b1 = d11
            b2 = d12
        m1 = _hermite(d01, s01, d11, s11, h, 0.5)
        m2 = _hermite(d02, s02, d12, s12, h, 0.5)
        k21, k22 = f(u1 + 0.5 * h * k11, u2 + 0.5 * h * k12, m1, m2, p)
        k31, k32 = f(u1 + 0.5 * h * k21, u2 + 0.5 * h * k22, m1, m2, p)
        k41, k42 = f(u1 + h * k31, u2 + h * k32, b1, b2, p)
        u1 = u1 + h / 6.0 * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
        u2 = u2 + h / 6.0 * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
        if not (abs(u1) <= blowup and abs(u2) <= blowup):
            blown = True
            break
        # derivative at the new grid point; its delayed partner sits in slot j1
        k11, k12 = f(u1, u2, d11, d12, p)
        ring[j0, 0] = u1
        ring[j0, 1] = u2
        ring[j0, 2] = k11
        ring[j0, 3] = k12
        done = k + 1
        if done % stride == 0:
            out[done // stride, 0] = u1
            out[done // stride, 1] = u2
    return out[: done // stride + 1], done, blown


@dataclass(frozen=True)
class HistorySpec:
    """Initial history on ``[-tau, 0]``.

    ``kind`` is ``"constant"`` (values ``x0``, ``v0``) or ``"function"``, where
    ``fn(t)`` returns states of shape ``t.shape + (2,)`` and ``dfn(t)`` their
    time derivatives.
    """

    kind: str = "constant"
    x0: float = 0.0
    v0: float = 0.0
    fn: Optional[Callable] = field(default=None, compare=False)
    dfn: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind == "constant":
            if not (math.isfinite(self.x0) and math.isfinite(self.v0)):
                raise ConfigError("history values must be finite")
        elif self.kind == "function":
            if self.fn is None or self.dfn is None:
                raise ConfigError("function history needs fn and dfn")
        else:
            raise ConfigError(f"unknown history kind {self.kind!r}")

    @classmethod
    def constant(cls, x0: float, v0: float = 0.0) -> "HistorySpec":
        return cls("constant", float(x0), float(v0))

    @classmethod
    def function(cls, fn: Callable, dfn: Callable) -> "HistorySpec":
        return cls("function", fn=fn, dfn=dfn)

    def sample(self, tau: float, n: int) -> np.ndarray:
        """Grid values and derivatives at ``t = -tau, ..., 0``, shape ``(n + 1, 4)``."""
        t = np.linspace(-tau, 0.0, n + 1)
        out = np.zeros((n + 1, 4))
        if self.kind == "constant":
            out[:, 0] = self.x0
            out[:, 1] = self.v0
        else:
            out[:, :2] = np.asarray(self.fn(t), dtype=float)
            out[:, 2:] = np.asarray(self.dfn(t), dtype=float)
        if not np.all(np.isfinite(out)):
            raise ConfigError("history is not finite on [-tau, 0]")
        return out


@dataclass(frozen=True)
class Trajectory:
    """Recorded solution on the grid ``t0 + k * step``.

    ``stepsPerDelay`` counts recorded samples per delay, so
    ``stepsPerDelay * step == delay``. ``integrationSteps`` is the RK4 step
    count per delay. ``history`` holds the recorded-grid history samples on
    ``[-delay, 0]``.
    """

    t0: float
    step: float
    delay: float
    states: np.ndarray
    stepsPerDelay: int
    integrationSteps: int
    blew_up: bool = False
    history: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.step * np.arange(len(self.states))

    @property
    def t_end(self) -> float:
        return self.t0 + self.step * (len(self.states) - 1)

    def digest(self) -> str:
        """Hash of the recorded states, for determinism checks and manifests."""
        return hashlib.sha256(np.ascontiguousarray(self.states).tobytes()).hexdigest()

    def with_history(self) -> np.ndarray:
        """History followed by the trajectory, sharing the point ``t0``."""
        if self.history is None:
            return self.states
        return np.vstack([self.history[:-1], self.states])


def integrate(
    f,
    params: np.ndarray,
    tau: float,
    hist: HistorySpec,
    t_end: float,
    n: int,
    record_stride: int = 1,
    interp_main: bool = False,
) -> Trajectory:
    """Integrate ``u' = f(u(t), u(t - tau))`` from ``t = 0`` to ``t_end``.

    Parameters
    ----------
    f : numba-compiled callable
        ``f(u1, u2, d1, d2, params) -> (du1, du2)``.
    n : int
        RK4 steps per delay.
    record_stride : int
        Keep every ``record_stride``-th grid point. Must divide ``n``.
    interp_main : bool
        Read main-step delayed values through the Hermite interpolant at its
        nodes instead of the stored values. Results are bit-identical; the
        switch exists to verify that.
    """
    if not tau > 0:
        raise ConfigError(f"delay must be positive, got {tau}")
    if n < 2:
        raise ConfigError("need at least two steps per delay")
    if record_stride < 1 or n % record_stride:
        raise ConfigError("record_stride must divide the steps per delay")
    h = tau / n
    nsteps = int(round(t_end / h))
    hs = hist.sample(tau, n)
    out, _, blown = _march(f, np.asarray(params, dtype=np.float64), n, h, nsteps, hs, record_stride, interp_main, BLOWUP_NORM)
    return Trajectory(
        t0=0.0,
        step=h * record_stride,
        delay=tau,
        states=out,
        stepsPerDelay=n // record_stride,
        integrationSteps=n,
        blew_up=bool(blown),
        history=hs[::record_stride, :2].copy(),
    )


def simulate(
    cfg: OscillatorConfig,
    mu1: float,
    mu2: float,
    hist: HistorySpec,
    t_end: float,
    n: int = 2048,
    record_stride: int = 1,
) -> Trajectory:
    """Integrate the oscillator at ``b = 1 + mu1`` and ``tau = tau0 + mu2``.

    ``tau0`` is the critical delay of ``(cfg.epsilon, cfg.a)``; the
    configuration's own ``b`` and ``tau`` are ignored.
    """
    if n < MIN_STEPS_PER_DELAY:
        raise ConfigError(f"need at least {MIN_STEPS_PER_DELAY} steps per delay, got {n}")
    zh = zero_hopf_point(cfg.epsilon, cfg.a)
    tau = zh.tau0 + mu2
    if not tau > 0:
        raise ConfigError(f"delay tau0 + mu2 = {tau} must be positive")
    run = cfg.with_(b=1.0 + mu1, tau=tau)
    return integrate(oscillator_rhs, run.packed(), tau, hist, t_end, n, record_stride)


def segment_at(traj: Trajectory, t: float) -> Segment:
    """Recorded samples on ``[t - delay, t]`` as a segment on ``theta in [-1, 0]``.

    Raises
    ------
    ValueError
        If ``t`` is off the recorded grid or the window is not available.
    """
    k = (t - traj.t0) / traj.step
    kr = int(round(k))
    if abs(k - kr) > 1e-9 * max(1.0, abs(k)):
        raise ValueError(f"t = {t} is not on the recorded grid")
    n = traj.stepsPerDelay
    full = traj.with_history()
    offset = 0 if traj.history is None else len(traj.history) - 1
    lo = kr + offset - n
    if lo < 0 or kr + offset >= len(full):
        raise ValueError(f"t = {t} outside the available range")
    return Segment(full[lo: kr + offset + 1].copy())


class Verdict(str, enum.Enum):
    DECAYS_TO_ZERO = "DecaysToZero"
    PERIODIC = "Periodic"
    STEADY_OFFSET = "SteadyOffset"
    GROWING = "Growing"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class AmplitudeMetrics:
    steadyAmplitude: float
    period: float
    verdict: Verdict
    peak_spread: float = float("nan")
    period_spread: float = float("nan")
    offset: float = float("nan")
    ripple: float = float("nan")


def peak_times(x: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Local maxima refined by a parabola through each peak and its neighbours."""
    i = np.flatnonzero((x[1:-1] > x[:-2]) & (x[1:-1] >= x[2:])) + 1
    if i.size == 0:
        return np.empty(0), np.empty(0)
    y0, y1, y2 = x[i - 1], x[i], x[i + 1]
    den = y0 - 2.0 * y1 + y2
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = np.where(den != 0, 0.5 * (y0 - y2) / den, 0.0)
    return (i + shift) * dt, y1 - 0.25 * (y0 - y2) * shift


DECAY_AMPLITUDE = 1e-4
PEAK_SPREAD_TOL = 0.02
PERIOD_SPREAD_TOL = 0.01
OFFSET_RIPPLE_TOL = 0.01


def amplitude_metrics(traj: Trajectory, tailFraction: float = 0.2) -> AmplitudeMetrics:
    """Summarise the long-time behaviour of the position ``x``.

    Verdicts, in order of precedence: ``Growing`` for a blown-up run or a
    trailing maximum above twice the mid-run maximum; ``DecaysToZero`` when
    the trailing amplitude is below 1e-4; ``Periodic`` when successive peak
    heights vary by under 2 % and successive periods by under 1 %;
    ``SteadyOffset`` when the trailing signal is a nonzero constant up to a
    ripple below 1 % of its mean; otherwise ``Undetermined``.
    """
    if not 0.0 < tailFraction <= 0.5:
        raise ValueError("tailFraction must lie in (0, 0.5]")
    nan = float("nan")
    x = traj.states[:, 0]
    if traj.blew_up or not np.all(np.isfinite(x)):
        return AmplitudeMetrics(float(np.nanmax(np.abs(x))) if x.size else nan, nan, Verdict.GROWING)
    K = len(x)
    w = max(3, int(tailFraction * K))
    tail = x[K - w:]
    mid_lo = max(0, int(0.5 * K - w / 2))
    mid = x[mid_lo: mid_lo + w]
    amp = float(np.max(np.abs(tail)))
    offset = float(np.mean(tail))
    ripple = 0.5 * float(np.ptp(tail))
    if amp < DECAY_AMPLITUDE:
        return AmplitudeMetrics(amp, nan, Verdict.DECAYS_TO_ZERO, offset=offset, ripple=ripple)
    if amp > 2.0 * float(np.max(np.abs(mid))):
        return AmplitudeMetrics(amp, nan, Verdict.GROWING, offset=offset, ripple=ripple)
    tp, yp = peak_times(tail, traj.step)
    period = nan
    peak_spread = period_spread = nan
    if tp.size >= 5:
        gaps = np.diff(tp)
        period = float(np.mean(gaps))
        peak_spread = float(np.ptp(yp) / np.mean(np.abs(yp)))
        period_spread = float(np.ptp(gaps) / period)
        if peak_spread < PEAK_SPREAD_TOL and period_spread < PERIOD_SPREAD_TOL and ripple > OFFSET_RIPPLE_TOL * abs(offset):
            return AmplitudeMetrics(amp, period, Verdict.PERIODIC, peak_spread, period_spread, offset, ripple)
    if ripple <= OFFSET_RIPPLE_TOL * abs(offset):
        return AmplitudeMetrics(amp, period, Verdict.STEADY_OFFSET, peak_spread, period_spread, offset, ripple)
    return AmplitudeMetrics(amp, period, Verdict.UNDETERMINED, peak_spread, period_spread, offset, ripple)
