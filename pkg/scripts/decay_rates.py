"""Rightmost characteristic roots near the critical point and the implied decay times.

Explains how slowly trajectories settle at small (mu1, mu2): the real parts are
O(|mu|), so e-folding times are in the thousands.
"""

import math

from zerohopf import analyze
from zerohopf.config import load_config
from zerohopf.spectrum import refine_root


def main() -> None:
    for point in ("pm1", "pm2", "pm3", "pm4", "pm5", "pm6"):
        cfg = load_config(point)
        osc = cfg.oscillator
        zh = analyze(osc).point
        tau, b = zh.tau0 + cfg.mu2, 1.0 + cfg.mu1
        hopf = refine_root(1j * zh.omega0, tau, osc.epsilon, osc.a, b)
        zero = refine_root(-1e-6, tau, osc.epsilon, osc.a, b)
        parts = []
        for label, lam in (("hopf", hopf), ("zero", zero)):
            efold = math.inf if lam.real == 0 else 1.0 / abs(lam.real)
            parts.append(f"{label} {lam.real:+.3e}{lam.imag:+.4f}i (e-fold {efold:.0f})")
        print(f"{point}: " + ", ".join(parts))


if __name__ == "__main__":
    main()
