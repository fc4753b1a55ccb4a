"""Sweep the dephasing parameter and tabulate the co-positivity witness.

Prints p, the lowest eigenvalue of the transposed Choi matrix, the witness
expectation and the verdict, one row per grid point.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from qcd import ccop
from qcd import channels as ch


@dataclass
class SweepConfig:
    points: int = 11
    tol: float = ccop.DEFAULT_TOL


def run(cfg: SweepConfig) -> list[tuple[float, float, float, bool]]:
    rows = []
    for p in np.linspace(0.0, 1.0, cfg.points):
        lam, _ = ccop.min_pt_eigenpair(ch.choi(ch.dephasing(p)))
        verdict = ccop.detect_non_ccop(ch.dephasing(p), cfg.tol)
        rows.append((float(p), lam, verdict.expectation, verdict.detected))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=SweepConfig.points)
    parser.add_argument("--tol", type=float, default=SweepConfig.tol)
    args = parser.parse_args()
    print(f"{'p':>6} {'lambda_min':>12} {'Tr[W C]':>12} {'-|2p-1|/2':>12}  detected")
    for p, lam, expectation, detected in run(SweepConfig(args.points, args.tol)):
        print(f"{p:6.3f} {lam:12.8f} {expectation:12.8f} {-abs(2 * p - 1) / 2:12.8f}  {detected}")


if __name__ == "__main__":
    main()
