"""Isometry ratio under two refinements: halving the grid step vs doubling the quadrature reach.

Usage: python3 scripts/convergence_table.py [--wavelet vector-gaussian] [--field gaussian]
"""

from __future__ import annotations

import argparse
import warnings
from dataclasses import replace

from cliffwave.config import RunConfig
from cliffwave.corpus import NAMED
from cliffwave.cwt import plancherel_check
from cliffwave.wavelets import admissibility, builtin


def ratio(cfg: RunConfig, wavelet: str, field: str) -> float:
    grid = cfg.grid()
    psi = builtin(wavelet, grid)
    C = admissibility(psi, strict=False).C_psi
    return plancherel_check(NAMED[field](grid), psi, cfg.cwt_grid(grid), C).ratio


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--wavelet", default="vector-gaussian", choices=["vector-gaussian", "mexican-hat"])
    parser.add_argument("--field", default="gaussian", choices=sorted(NAMED))
    args = parser.parse_args(argv)

    base = RunConfig()
    rows = [
        ("reference", base),
        ("step / 2", replace(base, points=2 * base.points - 1)),
        ("reach x 2", base.refined()),
    ]
    print(f"# wavelet={args.wavelet} field={args.field}")
    print(f"{'setting':<12} {'points':>6} {'span':>6} {'scales':>16} {'spins':>5} {'ratio':>10}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for label, cfg in rows:
            s = cfg.scales
            span = f"{s.min:.4g}..{s.max:.4g}"
            print(f"{label:<12} {cfg.points:>6} {cfg.span:>6g} {span:>16} {cfg.spins:>5} {ratio(cfg, args.wavelet, args.field):>10.6f}")


if __name__ == "__main__":
    main()
