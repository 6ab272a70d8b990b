"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is echoed in the terminal summary.
Run standalone with ``python3 tests/test_acceptance.py``.
"""

import math

import numpy as np
import pytest

from zerohopf import OscillatorConfig, analyze
from zerohopf.basis import build_basis, gram_matrix
from zerohopf.bifurcation import classify, expected_verdict
from zerohopf.dde import HistorySpec, Verdict, amplitude_metrics, integrate, simulate
from zerohopf.errors import ConfigError, NumericalError
from zerohopf.normalform import quadratic_forcing, solve_h
from zerohopf.smoothing import project_trajectory, smooth
from zerohopf.spectrum import epsilon0, eval_delta, zero_hopf_point

from conftest import ACCEPTANCE_LINES, CASES, HISTORIES, POINTS, STEPS, STRIDE, T_END, case_analysis, point_run
from test_dde import delayed_decay, exact_delayed_decay

SEED = 20240917


def record(criterion: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, detail


def rng():
    return np.random.default_rng(SEED)


def random_valid_pairs(n):
    g = rng()
    out = []
    while len(out) < n:
        eps, a = g.uniform(0.05, 1.3), g.uniform(-1.0, 1.0)
        if eps * eps - a * a < 1.9 and abs(eps + a) > 0.05:
            try:
                out.append(zero_hopf_point(eps, a))
            except (ConfigError, NumericalError):
                continue
    return out


def test_criterion_1_critical_points():
    expected = {"I": (1.386, 2.060), "II": (1.375, 2.180), "III": (1.396, 1.757)}
    ok, parts = True, []
    for case, (w, t) in expected.items():
        cfg = CASES[case]
        zh = zero_hopf_point(cfg.epsilon, cfg.a)
        res = abs(eval_delta(1j * zh.omega0, zh.tau0, cfg.epsilon, cfg.a, 1.0))
        good = abs(zh.omega0 - w) <= 5e-3 and abs(zh.tau0 - t) <= 5e-3 and res < 1e-10
        ok &= good
        parts.append(f"{case}: ({zh.omega0:.4f}, {zh.tau0:.4f}) res {res:.1e}")
    record("1", ok, "; ".join(parts))


def test_criterion_2_epsilon0():
    e0 = epsilon0()
    record("2", abs(e0 - 1.632993162) <= 1e-8, f"epsilon0 = {e0:.12f}")


def test_criterion_3_unfolding_invariants():
    expected = {"I": (-3.358, 1), "II": (-1.517, -1), "III": (3.024, -1)}
    ok, parts = True, []
    for case, (A, B) in expected.items():
        unf = case_analysis(case).unf
        good_a = abs(unf.Acoef - A) <= 5e-3
        good_b = unf.Bcoef == B
        ok &= good_a and good_b
        parts.append(f"{case}: A = {unf.Acoef:.4f} (want {A}{'' if good_a else ', off'}), B = {unf.Bcoef:+d}{'' if good_b else ' (off)'}")
    record("3", ok, "; ".join(parts))


def test_criterion_4_gram_identity():
    worst = 0.0
    for zh in random_valid_pairs(50):
        worst = max(worst, float(np.max(np.abs(gram_matrix(build_basis(zh), 1000) - np.eye(3)))))
    record("4", worst < 1e-8, f"max |<Psi,Phi> - I| over 50 pairs = {worst:.2e}")


def test_criterion_5_h_residuals():
    g = np.random.default_rng(SEED + 1)
    worst, count = 0.0, 0
    for zh in random_valid_pairs(50):
        cfg = OscillatorConfig(zh.epsilon, zh.a, g11=g.uniform(-2, 2), g12=g.uniform(-2, 2), g22=g.uniform(-2, 2))
        basis = build_basis(zh)
        h = solve_h(basis, quadratic_forcing(basis, cfg), check=False)
        worst = max(worst, max(v for r in h.residuals.values() for v in r.values()))
        count += 1
    record("5", worst < 1e-9 and count == 50, f"max ODE/boundary/orthogonality residual over {count} configs = {worst:.2e}")


def test_criterion_6_position_only_feedback():
    g = np.random.default_rng(SEED + 2)
    bs, n = [], 0
    while n < 100:
        eps = g.uniform(0.05, 1.35)
        g11 = g.choice([-1, 1]) * g.uniform(0.01, 3)
        try:
            an = analyze(OscillatorConfig(eps, 0.0, g11=g11, g111=g.uniform(-2, 2)))
        except (ConfigError, NumericalError):
            continue
        bs.append(an.unf.Bcoef)
        n += 1
    unf = case_analysis("I").unf
    chi2_min = min(unf.chi2(m) for m in g.uniform(-0.05, 0.05, 1000))
    ok = all(b == -1 for b in bs) and chi2_min >= 0
    record("6", ok, f"B = -1 in {bs.count(-1)}/100 position-only configs; min chi2 over 1000 mu1 = {chi2_min:.2e}")


def test_criterion_7_integrator_order():
    errs, x2 = [], None
    for n in (20, 40, 80, 160):
        tr = integrate(delayed_decay, np.zeros(1), 1.0, HistorySpec.constant(1.0), 5.0, n)
        errs.append(float(np.max(np.abs(tr.states[:, 0] - exact_delayed_decay(tr.times)))))
        if n == 160:
            x2 = tr.states[2 * n, 0]
    ratios = [errs[i] / errs[i + 1] for i in range(3)]
    ok = min(ratios) >= 14 and abs(x2 + 0.5) <= 10 * errs[-1]
    record("7", ok, f"error ratios {', '.join(f'{r:.2f}' for r in ratios)}; x(2) = {x2:.15f}")


def _smoothed_endpoint(traj, basis):
    path = smooth(project_trajectory(traj, basis), 1.0, basis.omega0)
    # last sample whose averaging window fits entirely inside the run
    k = np.searchsorted(path.t, path.t[-1] - 0.5 * 2 * math.pi / basis.omega0) - 1
    return path.r_s[k], path.z_s[k]


@pytest.mark.slow
def test_criterion_8a_pm1_periodic():
    basis = case_analysis("I").basis
    verdicts, periods, ends = [], [], []
    for x0 in HISTORIES:
        tr = point_run("pm1", x0, T_END["pm1"])
        m = amplitude_metrics(tr)
        verdicts.append(m.verdict)
        periods.append(m.period)
        ends.append(_smoothed_endpoint(tr, basis))
    ends = np.array(ends)
    centre = ends.mean(axis=0)
    spread = float(np.max(np.abs(ends - centre)))
    fast = 2 * math.pi / basis.omega0
    ok = (
        all(v == Verdict.PERIODIC for v in verdicts)
        and spread <= 1e-2
        and centre[0] > 0
        and all(abs(p - fast) <= 0.1 * fast for p in periods)
    )
    record(
        "8a",
        ok,
        f"verdicts {[v.value for v in verdicts]}; (r*, z*) = ({centre[0]:.5f}, {centre[1]:.5f}), spread {spread:.1e}; "
        f"period {np.mean(periods):.4f} vs 2pi/omega0 = {fast:.4f}",
    )


@pytest.mark.slow
def test_criterion_8b_pm2_decays():
    verdicts, amp3000 = [], []
    fast = 2 * math.pi / case_analysis("I").point.omega0
    for x0 in HISTORIES:
        tr = point_run("pm2", x0, T_END["pm2"])
        verdicts.append(amplitude_metrics(tr).verdict)
        window = (tr.times > 3000.0 - 5 * fast) & (tr.times <= 3000.0)
        amp3000.append(float(np.max(np.abs(tr.states[window, 0]))))
    ok_verdict = all(v == Verdict.DECAYS_TO_ZERO for v in verdicts)
    ok_time = all(a < 1e-4 for a in amp3000)
    record(
        "8b",
        ok_verdict and ok_time,
        f"verdicts {[v.value for v in verdicts]} at t = {T_END['pm2']:.0f}; "
        f"amplitude near t = 3000: {', '.join(f'{a:.1e}' for a in amp3000)} (need < 1e-4)",
    )


@pytest.mark.slow
def test_criterion_8c_pm4_periodic():
    basis = case_analysis("III").basis
    verdicts, rs = [], []
    for x0 in HISTORIES:
        tr = point_run("pm4", x0, T_END["pm4"])
        verdicts.append(amplitude_metrics(tr).verdict)
        rs.append(_smoothed_endpoint(tr, basis)[0])
    ok = all(v == Verdict.PERIODIC for v in verdicts) and min(rs) > 0
    record("8c", ok, f"verdicts {[v.value for v in verdicts]}; smoothed r at end {', '.join(f'{r:.1e}' for r in rs)}")


@pytest.mark.slow
def test_criterion_8d_pm5_source():
    case, mu1, mu2 = POINTS["pm5"]
    an = case_analysis(case)
    rep = classify(mu1, mu2, an.coeffs, an.unf)
    if rep.nontrivial is None:
        record("8d", False, f"no r > 0 equilibrium exists at pm5 (prediction {rep.prediction.value}); nothing to start near")
    r_eq, z_eq = rep.nontrivial
    basis = an.basis
    w = basis.omega0
    left = []
    for k, d in enumerate((0.01, 0.02, 0.03, 0.04)):
        x1 = (r_eq + d) * complex(math.cos(k), -math.sin(k))

        def fn(t, x1=x1):
            e = x1 * np.exp(1j * w * t)
            return np.stack([2 * e.real + z_eq, 2 * (1j * w * e).real], axis=-1)

        def dfn(t, x1=x1):
            e = x1 * np.exp(1j * w * t)
            return np.stack([2 * (1j * w * e).real, 2 * (-w * w * e).real], axis=-1)

        tr = simulate(CASES[case], mu1, mu2, HistorySpec.function(fn, dfn), T_END["pm5"], STEPS, STRIDE)
        path = project_trajectory(tr, basis)
        dist = np.hypot(path.r - r_eq, path.z - z_eq)
        left.append(bool(tr.blew_up or np.any(dist > 2 * d)))
    record("8d", all(left), f"{sum(left)}/4 trajectories left the ball of twice their initial distance")


def test_criterion_8e_pm6_excluded():
    ACCEPTANCE_LINES.append("[SKIP] criterion 8e: pm6 is a demo only (scripts/run_point.py pm6), not part of pass/fail")


def _observed_verdict(point):
    verdicts = {amplitude_metrics(point_run(point, x0, T_END[point])).verdict.value for x0 in HISTORIES}
    return verdicts.pop() if len(verdicts) == 1 else "Mixed:" + "/".join(sorted(verdicts))


@pytest.mark.slow
def test_criterion_9_classifier_consistency():
    rows, agree = [], 0
    for point in ("pm1", "pm2", "pm4", "pm5"):
        case, mu1, mu2 = POINTS[point]
        an = case_analysis(case)
        pred = classify(mu1, mu2, an.coeffs, an.unf).prediction
        want = expected_verdict(pred)
        seen = _observed_verdict(point)
        agree += want == seen
        rows.append(f"{point} {pred.value}->{want} vs {seen}")
    record("9", agree == 4, f"{agree}/4 agree: " + "; ".join(rows))


if __name__ == "__main__":
    import sys

    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
