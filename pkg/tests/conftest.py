import functools

import pytest

from zerohopf import OscillatorConfig, analyze
from zerohopf.dde import HistorySpec, simulate

CASES = {
    "I": OscillatorConfig(0.3, 0.1, g11=-0.4, g12=0.2, g22=0.4),
    "II": OscillatorConfig(0.6, 0.5, g11=0.4, g12=-0.1, g22=2.0),
    "III": OscillatorConfig(0.3, -0.2, g11=-0.4, g12=-0.2, g22=-0.4),
}

POINTS = {
    "pm1": ("I", -0.0018, 0.0032),
    "pm2": ("I", -0.0018, 0.0),
    "pm3": ("II", 0.00325, 0.00192),
    "pm4": ("III", 0.001, -0.003),
    "pm5": ("III", 0.0019, -0.003),
    "pm6": ("III", 0.0015525, -0.003),
}

# Acceptance-run settings shared by dynamics and consistency checks.
HISTORIES = (0.01, 0.05, 0.1, 0.2)
T_END = {"pm1": 20000.0, "pm2": 10000.0, "pm4": 20000.0, "pm5": 20000.0}
STEPS = 2048
STRIDE = 16

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def case_analysis(case: str):
    return analyze(CASES[case])


@functools.lru_cache(maxsize=None)
def point_run(point: str, x0: float, t_end: float):
    case, mu1, mu2 = POINTS[point]
    return simulate(CASES[case], mu1, mu2, HistorySpec.constant(x0), t_end, STEPS, STRIDE)


@pytest.fixture(params=sorted(CASES), scope="session")
def case_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
