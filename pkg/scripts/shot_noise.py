"""Finite-shot estimates of the V witness on its Choi state mixed with white noise.

With ``--noise 0`` the Choi state is a stabilizer state and every Pauli term
has a deterministic outcome, so the standard error is exactly zero.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from qcd import be
from qcd import channels as ch
from qcd import measure


@dataclass
class ShotConfig:
    noise: float = 0.2
    shots: tuple[int, ...] = (1000, 4000, 10000, 100000)
    seeds: int = 50
    k_sigma: float = measure.DEFAULT_K_SIGMA


def run(cfg: ShotConfig) -> list[tuple[int, float, float, float, float]]:
    gate = ch.gate_V()
    w = be.be_witness(gate)
    state = (1 - cfg.noise) * ch.choi_vector_of_gate(gate).projector() + cfg.noise * np.eye(16) / 16
    decomp = measure.pauli_decompose(w)
    exact = measure.exact_expectation(w, state)
    rows = []
    for n in cfg.shots:
        ests = [measure.simulate_shots(decomp, state, n, s) for s in range(cfg.seeds)]
        mean = float(np.mean([e.estimate for e in ests]))
        se = float(np.mean([e.stderr for e in ests]))
        rate = float(np.mean([measure.detection_decision(e, cfg.k_sigma).detected for e in ests]))
        rows.append((n, exact, mean, se, rate))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--noise", type=float, default=ShotConfig.noise)
    parser.add_argument("--seeds", type=int, default=ShotConfig.seeds)
    parser.add_argument("--shots", type=int, nargs="+", default=list(ShotConfig.shots))
    parser.add_argument("--k-sigma", type=float, default=ShotConfig.k_sigma)
    args = parser.parse_args()
    cfg = ShotConfig(args.noise, tuple(args.shots), args.seeds, args.k_sigma)
    print(f"{'shots':>8} {'exact':>10} {'mean est':>10} {'mean SE':>10} {'SE*sqrt(n)':>11} detect-rate")
    for n, exact, mean, se, rate in run(cfg):
        print(f"{n:8d} {exact:10.5f} {mean:10.5f} {se:10.6f} {se * np.sqrt(n):11.5f} {rate:.2f}")


if __name__ == "__main__":
    main()
