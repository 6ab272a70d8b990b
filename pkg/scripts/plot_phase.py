"""Plot smoothed (r, z) paths and x(t) from a simulate output directory (needs matplotlib).

Usage: python3 scripts/plot_phase.py out/pm1 [--save pm1.png]
"""

import argparse
import json
from pathlib import Path

import numpy as np


def main() -> None:
    import matplotlib.pyplot as plt

    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("directory", type=Path)
    p.add_argument("--save", type=Path, default=None)
    args = p.parse_args()

    manifest = json.loads((args.directory / "manifest.json").read_text())
    fig, (ax_rz, ax_x) = plt.subplots(1, 2, figsize=(11, 4.5))
    for run in manifest["runs"]:
        label = f"x0 = {run['history']['x0']:+g} ({run['verdict']})"
        proj = np.genfromtxt(args.directory / run["projected"], delimiter=",", names=True)
        raw = np.genfromtxt(args.directory / run["raw"], delimiter=",", names=True)
        ax_rz.plot(proj["r_smooth"], proj["z_smooth"], lw=1, label=label)
        ax_x.plot(raw["t"], raw["x"], lw=0.5, label=label)
    ax_rz.set_xlabel("r (smoothed)")
    ax_rz.set_ylabel("z (smoothed)")
    ax_x.set_xlabel("t")
    ax_x.set_ylabel("x")
    ax_rz.legend(fontsize=8, loc="upper right")
    fig.suptitle(manifest["config"].get("name", args.directory.name))
    fig.tight_layout()
    if args.save:
        fig.savefig(args.save, dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
