"""Bi-entangling analysis of the two-qubit gate V, with SWAP, identity and CNOT for comparison."""

import argparse
from dataclasses import dataclass

from qcd import be
from qcd import channels as ch
from qcd import measure


@dataclass
class GateTableConfig:
    show_pauli: bool = False


GATES = {
    "V": ch.gate_V,
    "SWAP": lambda: ch.swap_gate(2),
    "identity": lambda: ch.identity_gate(2),
    "CNOT": ch.cnot_gate,
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--show-pauli", action="store_true", help="print the Pauli expansion of W_BE for V")
    cfg = GateTableConfig(show_pauli=parser.parse_args().show_pauli)

    for name, make in GATES.items():
        gate = make()
        info = be.analyze(gate)
        verdict = be.detect_non_be(gate)
        print(f"== {name}")
        for cut, coeffs in info.schmidt.items():
            print(f"   {cut}: " + " ".join(f"{c:.6f}" for c in coeffs))
        print(f"   alpha_BE={info.alpha_be:.10f}  alpha_sep={info.alpha_sep:.10f}")
        print(f"   <W_BE>={verdict.expectation:+.10f}  detected={verdict.detected}")

    if cfg.show_pauli:
        print("== Pauli expansion of W_BE for V")
        for c, s in measure.pauli_decompose(be.be_witness(ch.gate_V())).sorted_terms():
            print(f"   {c:+.6f} {s}")


if __name__ == "__main__":
    main()
