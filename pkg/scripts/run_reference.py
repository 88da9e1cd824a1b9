"""Run the verification suite on a config and print a per-check summary.

Usage: python3 scripts/run_reference.py [configs/reference.json] [--out reports]
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from cliffwave.config import load_config
from cliffwave.suite import run_verification_suite

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("config", nargs="?", default=str(ROOT / "configs" / "reference.json"))
    parser.add_argument("--out", default=None, help="report directory (default: from config)")
    args = parser.parse_args(argv)

    cfg = load_config(args.config)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = run_verification_suite(cfg)
    for r in report.rows:
        if r.status != "pass":
            label = "/".join(x for x in (r.wavelet, r.field, f"k={r.axis}" if r.axis else "") if x)
            print(f"{r.status.upper():<5} {r.suite}/{r.check} [{label}] {r.value:.6g} {r.note}".rstrip())
    for path in report.write(args.out, gnuplot=True):
        print(f"wrote {path}")
    print(" ".join(f"{k}={v}" for k, v in report.counts.items()))
    return 0 if report.passed else 2


if __name__ == "__main__":
    sys.exit(main())
