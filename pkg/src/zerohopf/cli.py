"""Command-line front end: analyze, simulate, classify, curves, sweep.

Exit codes: 0 success, 2 configuration error, 3 degeneracy error,
4 numerical failure (including any blown-up history in a simulate batch).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from . import __version__
from .analysis import Analysis, analyze, flatten_report
from .basis import build_basis
from .bifurcation import classify
from .config import RunConfig, load_config
from .dde import amplitude_metrics, simulate
from .errors import ConfigError, DegeneracyError, NumericalError, ZeroHopfError
from .smoothing import project_trajectory, smooth
from .spectrum import zero_hopf_point

__all__ = [
    "main",
    "build_parser",
    "cmd_analyze",
    "cmd_simulate",
    "cmd_classify",
    "cmd_curves",
    "cmd_sweep",
    "RAW_COLUMNS",
    "PROJECTED_COLUMNS",
    "SWEEP_COLUMNS",
    "CSV_SCHEMA_VERSION",
]

CSV_SCHEMA_VERSION = 1
RAW_COLUMNS = ("t", "x", "xdot")
PROJECTED_COLUMNS = ("t", "r", "z", "xi", "r_smooth", "z_smooth", "x1_re", "x1_im", "x3")
CURVE_COLUMNS = ("mu1", "mu2")
CROSSING_COLUMNS = ("mu2", "tb_mu1", "het_mu1")
SWEEP_COLUMNS = ("mu1", "mu2", "caseTag", "chi1", "chi2", "side_hb1", "side_hb2", "side_tb", "side_het", "side_fold", "prediction")

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_NUMERICAL = 0, 2, 3, 4


def fmt(v: Any) -> str:
    """Text form that parses back to the identical value."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(v) for v in row])
            n += 1
    return n


def write_array_csv(path: Path, columns: Sequence[str], data: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, data, delimiter=",", header=",".join(columns), comments="", fmt="%.17g")


def render(items: dict[str, Any], style: str) -> str:
    if style == "csv":
        lines = ["key,value"] + [f"{k},{fmt(v)}" for k, v in items.items()]
    else:
        lines = [f"{k} = {fmt(v)}" for k, v in items.items()]
    return "\n".join(lines) + "\n"


def _emit(items: dict[str, Any], cfg: RunConfig, stem: str, out: Optional[Path], stream) -> None:
    text = render(items, cfg.format)
    stream.write(text)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{stem}.{'csv' if cfg.format == 'csv' else 'kv'}").write_text(text)


# --- commands ---------------------------------------------------------------------


def cmd_analyze(cfg: RunConfig, out: Optional[Path] = None, stream=sys.stdout) -> Analysis:
    """Full coefficient report at criticality."""
    an = analyze(cfg.oscillator)
    _emit(flatten_report(an), cfg, "analysis", out, stream)
    return an


def _report_items(rep) -> dict[str, Any]:
    items = {
        "mu1": rep.mu1,
        "mu2": rep.mu2,
        "caseTag": rep.caseTag,
        "chi1": rep.chi1,
        "chi2": rep.chi2,
        "prediction": rep.prediction.value,
    }
    for k, v in rep.sideOfCurves.items():
        items[f"side.{k}"] = v
    for e in rep.equilibria:
        for f in ("r", "z", "trace", "det"):
            items[f"equilibrium.{e.kind}.{f}"] = getattr(e, f)
    if rep.nontrivial is not None:
        items["nontrivial.r"], items["nontrivial.z"] = rep.nontrivial
    return items


def cmd_classify(cfg: RunConfig, out: Optional[Path] = None, stream=sys.stdout, an: Optional[Analysis] = None):
    """Predicted local phase portrait at the configured ``(mu1, mu2)``."""
    an = an or analyze(cfg.oscillator)
    rep = classify(cfg.mu1, cfg.mu2, an.coeffs, an.unf)
    _emit(_report_items(rep), cfg, "classification", out, stream)
    return rep


def cmd_curves(cfg: RunConfig, out: Path, an: Optional[Analysis] = None) -> dict[str, Path]:
    """Sampled ``(mu1, mu2)`` points on HB1, HB2, TB and HET, plus row crossings."""
    an = an or analyze(cfg.oscillator)
    cs = an.curves
    spec = cfg.curves
    mu1 = np.linspace(spec.mu1Min, spec.mu1Max, spec.samples)
    if spec.mu1Min < 0 < spec.mu1Max and not np.any(mu1 == 0.0):
        mu1 = np.sort(np.append(mu1, 0.0))
    paths = {}
    for name in ("hb1", "hb2", "tb", "het"):
        p = out / f"curve_{name}.csv"
        write_array_csv(p, CURVE_COLUMNS, np.column_stack([mu1, cs.mu2_on(name, mu1)]))
        paths[name] = p
    if spec.mu2Rows:
        rows = []
        for m2 in spec.mu2Rows:
            tb = cs.mu1_on("tb", m2)
            het = cs.mu1_on("het", m2) or [math.nan]
            for h in het:
                rows.append((m2, tb[0], h))
        paths["crossings"] = out / "curve_crossings.csv"
        write_csv(paths["crossings"], CROSSING_COLUMNS, rows)
    return paths


def sweep_rows(an: Analysis, mu1s: Sequence[float], mu2s: Sequence[float]) -> list[tuple]:
    rows = []
    for m1 in mu1s:
        for m2 in mu2s:
            rep = classify(m1, m2, an.coeffs, an.unf)
            s = rep.sideOfCurves
            rows.append((m1, m2, rep.caseTag, rep.chi1, rep.chi2, s["hb1"], s["hb2"], s["tb"], s["het"], s["fold"], rep.prediction.value))
    return rows


def cmd_sweep(cfg: RunConfig, out: Path, an: Optional[Analysis] = None) -> Path:
    """Classification over the configured ``(mu1, mu2)`` grid."""
    if cfg.sweep is None:
        raise ConfigError("sweep needs a 'sweep' section with mu1 and mu2 axes")
    an = an or analyze(cfg.oscillator)
    rows = sweep_rows(an, cfg.sweep[0].values(), cfg.sweep[1].values())
    p = out / "sweep.csv"
    write_csv(p, SWEEP_COLUMNS, rows)
    return p


def cmd_simulate(cfg: RunConfig, out: Path) -> dict[str, Any]:
    """Integrate every history, write raw and projected CSVs and a manifest.

    A blown-up history is recorded in the manifest; the batch continues.
    """
    if not cfg.histories:
        raise ConfigError("simulate needs at least one history")
    osc = cfg.oscillator
    zh = zero_hopf_point(osc.epsilon, osc.a)
    basis = build_basis(zh)
    out.mkdir(parents=True, exist_ok=True)
    runs = []
    for i, hist in enumerate(cfg.history_specs()):
        traj = simulate(osc, cfg.mu1, cfg.mu2, hist, cfg.tEnd, cfg.stepsPerDelay, cfg.recordStride)
        metrics = amplitude_metrics(traj)
        k = cfg.outputStride
        raw = out / f"raw_{i:02d}.csv"
        write_array_csv(raw, RAW_COLUMNS, _thin(np.column_stack([traj.times, traj.states]), k))
        path = project_trajectory(traj, basis)
        smoothed = True
        try:
            path = smooth(path, cfg.smoothingPeriods, zh.omega0)
        except ValueError:
            smoothed = False
        r_s = path.r_s if smoothed else np.full(len(path), math.nan)
        z_s = path.z_s if smoothed else np.full(len(path), math.nan)
        proj = out / f"projected_{i:02d}.csv"
        write_array_csv(proj, PROJECTED_COLUMNS, _thin(np.column_stack(
            [path.t, path.r, path.z, path.xi, r_s, z_s, path.x1_re, path.x1_im, path.x3]), k))
        runs.append({
            "index": i,
            "history": asdict(hist) | {"fn": None, "dfn": None},
            "raw": raw.name,
            "projected": proj.name,
            "blewUp": traj.blew_up,
            "tReached": traj.t_end,
            "digest": traj.digest(),
            "verdict": metrics.verdict.value,
            "steadyAmplitude": metrics.steadyAmplitude,
            "period": metrics.period,
            "offset": metrics.offset,
            "smoothed": smoothed,
            "final": {"r": float(path.r[-1]), "z": float(path.z[-1]),
                      "r_smooth": float(r_s[-1]), "z_smooth": float(z_s[-1])},
        })
    manifest = {
        "version": __version__,
        "csvSchemaVersion": CSV_SCHEMA_VERSION,
        "rawColumns": list(RAW_COLUMNS),
        "projectedColumns": list(PROJECTED_COLUMNS),
        "config": cfg.to_dict(),
        "omega0": zh.omega0,
        "tau0": zh.tau0,
        "delay": zh.tau0 + cfg.mu2,
        "integrator": {"method": "RK4 method of steps, Hermite half-step interpolation",
                       "stepsPerDelay": cfg.stepsPerDelay, "recordStride": cfg.recordStride,
                       "outputStride": cfg.outputStride},
        "runs": runs,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, default=_json_default) + "\n")
    return manifest


def _thin(rows: np.ndarray, k: int) -> np.ndarray:
    """Every ``k``-th row, always keeping the last one."""
    if k == 1 or len(rows) == 0:
        return rows
    idx = np.arange(0, len(rows), k)
    if idx[-1] != len(rows) - 1:
        idx = np.append(idx, len(rows) - 1)
    return rows[idx]


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.bool_):
        return bool(v)
    raise TypeError(type(v).__name__)


# --- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON config file or bundled preset name (caseI, pm1, ...)")
    common.add_argument("--out", type=Path, default=None, help="output directory (default: config 'outputs')")
    common.add_argument("--steps-per-delay", type=int, default=None, help="RK4 steps per delay")
    common.add_argument("--t-end", type=float, default=None, help="integration horizon")
    common.add_argument("--format", choices=("csv", "kv"), default=None, help="report format")
    p = argparse.ArgumentParser(prog="zerohopf", description="Zero-Hopf analysis of the delayed van der Pol oscillator")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (
        ("analyze", "normal-form coefficients, unfolding invariants and curve coefficients"),
        ("simulate", "integrate each history and write raw and projected CSVs"),
        ("classify", "predicted phase portrait at (mu1, mu2)"),
        ("curves", "sampled bifurcation curves"),
        ("sweep", "classification over a (mu1, mu2) grid"),
    ):
        sub.add_parser(name, parents=[common], help=text)
    return p


def _resolve(args) -> RunConfig:
    cfg = load_config(args.config)
    changes: dict[str, Any] = {}
    if args.steps_per_delay is not None:
        changes["stepsPerDelay"] = args.steps_per_delay
        if args.steps_per_delay % cfg.recordStride or (args.steps_per_delay // cfg.recordStride) % 2:
            changes["recordStride"] = 1
    if args.t_end is not None:
        changes["tEnd"] = args.t_end
    if args.format is not None:
        changes["format"] = args.format
    if args.out is not None:
        changes["outputs"] = str(args.out)
    return cfg.with_(**changes) if changes else cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        out = Path(cfg.outputs)
        if args.command == "analyze":
            cmd_analyze(cfg, out)
        elif args.command == "classify":
            cmd_classify(cfg, out)
        elif args.command == "curves":
            for name, p in cmd_curves(cfg, out).items():
                print(f"{name}: {p}")
        elif args.command == "sweep":
            print(cmd_sweep(cfg, out))
        elif args.command == "simulate":
            manifest = cmd_simulate(cfg, out)
            for run in manifest["runs"]:
                print(f"history {run['index']}: {run['verdict']}" + (" (blew up)" if run["blewUp"] else ""))
            if any(run["blewUp"] for run in manifest["runs"]):
                print("error: at least one history blew up", file=sys.stderr)
                return EXIT_NUMERICAL
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegeneracyError as exc:
        print(f"degeneracy error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (NumericalError, ZeroHopfError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
