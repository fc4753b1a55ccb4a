"""``qcd`` command line: build Choi states, run detections, decompose witnesses.

Exit codes: 0 analysis completed (the verdict is in the report), 1 no
witness to decompose or failed ``--verify``, 2 invalid spec or arguments,
3 I/O failure, 4 spec incompatible with the detection class, 5 witness is
not a qubit operator.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import be, ccop
from . import channels as ch_mod
from . import measure
from . import tensor_core as tc
from .errors import DimensionError, InvalidChannelError, NoWitness
from .report import complex_matrix_to_json, to_json

EXIT_OK, EXIT_NO_WITNESS, EXIT_SPEC, EXIT_IO, EXIT_MISMATCH, EXIT_NOT_QUBIT = 0, 1, 2, 3, 4, 5
INDEX_MAP = "A=0, B=1 (outputs); C=2, D=3 (references); pairs A-C, B-D"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_json(path: str):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return raw, json.loads(raw)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_SPEC, f"{path}: malformed JSON: {exc}") from exc


def load_spec(path: str) -> tuple[ch_mod.ChannelSpec, str]:
    raw, obj = _read_json(path)
    try:
        spec = ch_mod.parse_spec(obj)
    except InvalidChannelError as exc:
        raise CliError(EXIT_SPEC, f"{path}: invalid spec: {exc}") from exc
    return spec, "sha256:" + hashlib.sha256(raw).hexdigest()


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text + "\n")
        return
    try:
        Path(out_path).write_text(text + "\n")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out_path}: {exc.strerror or exc}") from exc


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("QCD_SEED")
    if env is None:
        return 0
    try:
        value = int(env)
    except ValueError as exc:
        raise CliError(EXIT_SPEC, f"QCD_SEED={env!r} is not an integer") from exc
    if value < 0:
        raise CliError(EXIT_SPEC, "QCD_SEED must be non-negative")
    return value


def _pauli_terms(decomp: measure.PauliDecomposition) -> list[dict]:
    return [{"string": s, "coeff": c} for c, s in decomp.sorted_terms()]


def _is_qubit_space(dim: int) -> bool:
    return dim >= 2 and dim & (dim - 1) == 0


def _sampled_fragment(w: np.ndarray, state: np.ndarray, shots: int, seed: int, k_sigma: float) -> dict:
    decomp = measure.pauli_decompose(w)
    est = measure.simulate_shots(decomp, state, shots, seed)
    verdict = measure.detection_decision(est, k_sigma)
    return {
        "pauli_terms": _pauli_terms(decomp),
        "shots_per_term": est.shots_per_term,
        "seed": est.seed,
        "estimate": est.estimate,
        "stderr": est.stderr,
        "detected": verdict.detected,
    }


# witness construction shared by detect and decompose


def _ccop_parts(spec: ch_mod.ChannelSpec, tol: float):
    c = ch_mod.choi(spec.channel)
    try:
        return c, ccop.ccop_witness(c, tol)
    except NoWitness:
        return c, None


def _require_gate(spec: ch_mod.ChannelSpec) -> ch_mod.GateSpec:
    if spec.gate is None or len(spec.gate.dims) != 2 or spec.gate.dims[0] != spec.gate.dims[1]:
        raise CliError(
            EXIT_MISMATCH,
            "class 'be' needs a unitary gate on two qudits of equal dimension",
        )
    return spec.gate


# subcommands


def cmd_choi(args) -> int:
    spec, _ = load_spec(args.spec)
    c = ch_mod.choi(spec.channel)
    w, _ = tc.hermitian_eig(c.matrix)
    doc = {
        "dims": list(c.dims),
        "outputs": list(c.outputs),
        "matrix": complex_matrix_to_json(c.matrix),
        "eigenvalues": [float(x) for x in w],
    }
    _emit(to_json(doc), args.out)
    return EXIT_OK


def cmd_detect(args) -> int:
    spec, digest = load_spec(args.spec)
    seed = _resolve_seed(args.seed)
    if args.shots is not None and args.shots < 1:
        raise CliError(EXIT_SPEC, "--shots must be at least 1")
    if args.k_sigma <= 0:
        raise CliError(EXIT_SPEC, "--k-sigma must be positive")
    sampled = None

    if args.klass == "ccop":
        c, wit = _ccop_parts(spec, args.tol)
        verdict = ccop.detect_non_ccop(spec.channel, args.tol)
        pauli: list = []
        if wit is not None and _is_qubit_space(wit.matrix.shape[0]):
            pauli = _pauli_terms(measure.pauli_decompose(wit.matrix))
        result = {
            "class": "ccop",
            "detected": verdict.detected,
            "expectation": verdict.expectation,
            "lambda_min": wit.lambda_min if wit is not None else verdict.expectation,
            "witness_pauli": pauli,
            "annotations": list(verdict.annotations),
        }
        if args.shots is not None and wit is not None and _is_qubit_space(c.matrix.shape[0]):
            sampled = _sampled_fragment(wit.matrix, c.matrix, args.shots, seed, args.k_sigma)
    else:
        gate = _require_gate(spec)
        analysis = be.analyze(gate)
        u_vec = ch_mod.choi_vector_of_gate(gate)
        c_u = u_vec.projector()
        verdict = be.detect_non_be(gate, args.tol)
        result = {
            "class": "be",
            "alpha_be": analysis.alpha_be,
            "alpha_sep": analysis.alpha_sep,
            "schmidt": {k: [float(x) for x in v] for k, v in analysis.schmidt.items()},
            "detected": verdict.detected,
            "expectation": verdict.expectation,
            "expectation_sep": measure.exact_expectation(analysis.witness_sep, c_u),
            "index_map": INDEX_MAP,
        }
        if args.shots is not None and _is_qubit_space(c_u.shape[0]):
            sampled = _sampled_fragment(analysis.witness_be, c_u, args.shots, seed, args.k_sigma)

    report = {
        "tool": "qcd",
        "version": __version__,
        "input": {"digest": digest, "kind": spec.kind},
        "tolerances": {"tol": args.tol, "k_sigma": args.k_sigma},
        "seed": seed,
        "result": result,
        "sampled": sampled,
    }
    _emit(to_json(report), args.report)
    return EXIT_OK


def _load_witness(path: str) -> np.ndarray:
    _, obj = _read_json(path)
    rows = obj.get("matrix") if isinstance(obj, dict) else obj
    try:
        w = ch_mod.parse_matrix(rows)
    except InvalidChannelError as exc:
        raise CliError(EXIT_SPEC, f"{path}: invalid witness: {exc}") from exc
    if w.shape[0] != w.shape[1] or not tc.is_hermitian(w):
        raise CliError(EXIT_SPEC, f"{path}: witness must be a square Hermitian matrix")
    return w


def cmd_decompose(args) -> int:
    if args.witness is not None:
        w = _load_witness(args.witness)
    elif args.spec is not None:
        spec, _ = load_spec(args.spec)
        if args.klass == "ccop":
            _, wit = _ccop_parts(spec, args.tol)
            if wit is None:
                sys.stderr.write("no witness: the Choi matrix is PPT, nothing to decompose\n")
                return EXIT_NO_WITNESS
            w = wit.matrix
        else:
            w = be.be_witness(_require_gate(spec))
    else:
        raise CliError(EXIT_SPEC, "give either --witness PATH or a spec path with --class")

    if not _is_qubit_space(w.shape[0]):
        raise CliError(
            EXIT_NOT_QUBIT,
            f"witness dimension {w.shape[0]} is not a power of 2; qudit witnesses are "
            "evaluated exactly and cannot be decomposed into Pauli strings",
        )
    decomp = measure.pauli_decompose(w)
    lines = [f"{c:+.17g} {s}" for c, s in decomp.sorted_terms()]
    _emit("\n".join(lines), args.out)
    if args.verify:
        err = float(np.max(np.abs(decomp.reconstruct() - w)))
        ok = err <= 1e-10
        sys.stderr.write(f"verify: max reconstruction error {err:.3e} ({'ok' if ok else 'FAILED'})\n")
        if not ok:
            return EXIT_NO_WITNESS
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcd", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qcd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("choi", help="write the Choi matrix of a channel and its eigenvalues")
    p.add_argument("spec")
    p.add_argument("--out", "-o", help="output path (default: stdout)")
    p.set_defaults(func=cmd_choi)

    p = sub.add_parser("detect", help="run a witness detection and write a JSON report")
    p.add_argument("klass", choices=("ccop", "be"), metavar="{ccop,be}")
    p.add_argument("spec")
    p.add_argument("--tol", type=float, default=ccop.DEFAULT_TOL)
    p.add_argument("--shots", type=int, help="also simulate this many shots per Pauli term")
    p.add_argument("--seed", type=int)
    p.add_argument("--k-sigma", type=float, default=measure.DEFAULT_K_SIGMA)
    p.add_argument("--report", help="report path (default: stdout)")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("decompose", help="print a witness as Pauli terms")
    p.add_argument("spec", nargs="?")
    p.add_argument("--class", dest="klass", choices=("ccop", "be"), default="ccop")
    p.add_argument("--witness", help="JSON witness matrix instead of a channel spec")
    p.add_argument("--tol", type=float, default=ccop.DEFAULT_TOL)
    p.add_argument("--verify", action="store_true", help="check the terms reconstruct the witness")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"qcd: {exc}\n")
        return exc.code
    except (InvalidChannelError, DimensionError) as exc:
        sys.stderr.write(f"qcd: {exc}\n")
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
