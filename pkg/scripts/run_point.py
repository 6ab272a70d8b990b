"""Simulate a bundled parameter point and compare the outcome with the local prediction.

Usage: python3 scripts/run_point.py pm1 [--t-end 20000] [--out out/pm1]
"""

import argparse
from pathlib import Path

from zerohopf import analyze
from zerohopf.bifurcation import classify, expected_verdict
from zerohopf.cli import cmd_simulate
from zerohopf.config import load_config, preset_names


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("point", choices=[n for n in preset_names() if n.startswith("pm")])
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--out", type=Path, default=None)
    args = p.parse_args()

    cfg = load_config(args.point)
    if args.t_end is not None:
        cfg = cfg.with_(tEnd=args.t_end)
    out = args.out or Path(cfg.outputs)
    an = analyze(cfg.oscillator)
    rep = classify(cfg.mu1, cfg.mu2, an.coeffs, an.unf)
    print(f"{args.point}: mu = ({cfg.mu1}, {cfg.mu2}), chi1 = {rep.chi1:.4g}, chi2 = {rep.chi2:.4g}")
    print(f"prediction {rep.prediction.value}, expecting {expected_verdict(rep.prediction)}")
    if rep.nontrivial is not None:
        print(f"r > 0 equilibrium at (r, z) = ({rep.nontrivial[0]:.6g}, {rep.nontrivial[1]:.6g})")
    manifest = cmd_simulate(cfg, out)
    for run in manifest["runs"]:
        h = run["history"]
        f = run["final"]
        print(f"  x0 = {h['x0']:+.3g}: {run['verdict']:<13} t = {run['tReached']:.0f}"
              f"  smoothed (r, z) = ({f['r_smooth']:.5g}, {f['z_smooth']:.5g})")
    print(f"wrote {out}/manifest.json")


if __name__ == "__main__":
    main()
