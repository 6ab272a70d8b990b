"""Print critical points, unfolding invariants and curve coefficients for the bundled cases.

Also shows A recomputed with the second partials mapped to (g11/2, 2 g12, g22/2),
the convention under which the reference A values are reproduced.
"""

from zerohopf import analyze
from zerohopf.config import load_config


def main() -> None:
    header = f"{'case':<8}{'omega0':>10}{'tau0':>10}{'A':>10}{'A(alt)':>10}{'B':>4}  tag"
    print(header)
    print("-" * len(header))
    for name in ("caseI", "caseII", "caseIII"):
        cfg = load_config(name).oscillator
        an = analyze(cfg)
        alt = analyze(cfg.with_(g11=cfg.g11 / 2, g12=2 * cfg.g12, g22=cfg.g22 / 2)).unf.Acoef
        u = an.unf
        print(f"{name:<8}{an.point.omega0:>10.5f}{an.point.tau0:>10.5f}{u.Acoef:>10.5f}{alt:>10.5f}{u.Bcoef:>+4d}  {u.case_tag}")
    print()
    for name in ("caseI", "caseII", "caseIII"):
        cs = analyze(load_config(name).oscillator).curves
        print(f"{name}: hb1 {cs.hb1}, hb2 {cs.hb2}, tb {cs.tb}, het q = {cs.het[2]:.6g}")


if __name__ == "__main__":
    main()
