"""Local Pauli measurement of witnesses, exact and with finite shots.

The witness is expanded as ``W = Σ_P c_P P`` over Pauli strings. Each
non-identity string is measured with an equal number of shots, each shot
being the product of the single-qubit ±1 outcomes in that string's local
eigenbasis. This per-string scheme is one standard choice of how to gather
the expectation from local settings, not the only one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import tensor_core as tc
from .errors import DimensionError, NotHermitianError
from .report import Verdict

PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
# rows map the letter's eigenbasis onto the computational basis: B P B† = Z
_BASIS_CHANGE = {
    "I": np.eye(2, dtype=complex),
    "Z": np.eye(2, dtype=complex),
    "X": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "Y": np.array([[1, -1j], [1, 1j]], dtype=complex) / math.sqrt(2),
}
DROP_BELOW = 1e-12
DEFAULT_K_SIGMA = 3.0


@dataclass(frozen=True)
class PauliDecomposition:
    terms: tuple[tuple[float, str], ...]
    n_qubits: int

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((2**self.n_qubits,) * 2, dtype=complex)
        for coeff, string in self.terms:
            out += coeff * pauli_matrix(string)
        return out

    def sorted_terms(self) -> list[tuple[float, str]]:
        """Descending |coefficient|, ties broken by the string."""
        return sorted(self.terms, key=lambda t: (-round(abs(t[0]), 12), t[1]))


@dataclass(frozen=True)
class ShotEstimate:
    estimate: float
    stderr: float
    shots_per_term: int
    seed: int


def pauli_matrix(string: str) -> np.ndarray:
    return tc.kron(*(PAULIS[ch] for ch in string))


def n_qubits_of(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of 2")
    return n


def pauli_decompose(w: np.ndarray, n_qubits: int | None = None) -> PauliDecomposition:
    """``c_P = Tr[w P] / 2^n`` for every Pauli string, dropping |c_P| < 1e-12."""
    w = np.asarray(w, dtype=complex)
    n = n_qubits_of(w.shape[0]) if n_qubits is None else n_qubits
    if w.shape != (2**n, 2**n):
        raise DimensionError(f"matrix of shape {w.shape} is not a {n}-qubit operator")
    if not tc.is_hermitian(w):
        raise NotHermitianError("only Hermitian operators have real Pauli coefficients")
    # contract one qubit at a time: t[..., P_k, ...] = Σ_ij w[i..., j...] P_k[j, i]
    basis = np.stack([PAULIS[ch] for ch in "IXYZ"])  # (4, 2, 2)
    t = w.reshape((2,) * (2 * n))
    for k in range(n):
        # layout is (P_0..P_{k-1}, r_k..r_{n-1}, c_k..c_{n-1}): r_k sits at k, c_k at n
        t = np.tensordot(t, basis, axes=([k, n], [2, 1]))
        t = np.moveaxis(t, -1, k)
    coeffs = t.reshape(-1).real / 2**n
    terms = tuple(
        (float(c), "".join(s))
        for c, s in zip(coeffs, itertools.product("IXYZ", repeat=n))
        if abs(c) >= DROP_BELOW
    )
    return PauliDecomposition(terms, n)


def exact_expectation(w: np.ndarray, state: np.ndarray) -> float:
    w, state = np.asarray(w), np.asarray(state)
    if w.shape != state.shape or w.ndim != 2:
        raise DimensionError(f"operator {w.shape} and state {state.shape} do not match")
    val = np.trace(w @ state)
    if abs(val.imag) >= 1e-10:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def _outcome_distribution(string: str, state: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Probabilities of the 2^n local outcomes and the ±1 product attached to each."""
    b = tc.kron(*(_BASIS_CHANGE[ch] for ch in string))
    probs = np.clip(np.diag(b @ state @ b.conj().T).real, 0.0, None)
    probs /= probs.sum()
    signs = np.ones(1)
    for ch in string:
        signs = np.kron(signs, [1, 1] if ch == "I" else [1, -1])
    return probs, signs


def simulate_shots(
    decomp: PauliDecomposition, state: np.ndarray, shots_per_term: int, seed: int
) -> ShotEstimate:
    """Estimate ``Tr[W state]`` from ``shots_per_term`` samples of every non-identity string.

    Term ``i`` draws from ``default_rng([seed, i])`` so the result depends
    only on ``(seed, shots_per_term)``, not on evaluation order.
    """
    state = np.asarray(state, dtype=complex)
    if state.shape != (2**decomp.n_qubits,) * 2:
        n_qubits_of(state.shape[0])
        raise DimensionError(
            f"state of shape {state.shape} for a {decomp.n_qubits}-qubit decomposition"
        )
    if shots_per_term < 1:
        raise ValueError("shots_per_term must be at least 1")
    estimate, variance = 0.0, 0.0
    identity = "I" * decomp.n_qubits
    for i, (coeff, string) in enumerate(decomp.terms):
        if string == identity:
            estimate += coeff
            continue
        probs, signs = _outcome_distribution(string, state)
        counts = np.random.default_rng([seed, i]).multinomial(shots_per_term, probs)
        n_plus = int(counts[signs > 0].sum())
        mean = (2 * n_plus - shots_per_term) / shots_per_term
        if shots_per_term > 1:
            # unbiased sample variance of ±1 outcomes
            s2 = shots_per_term * (1 - mean**2) / (shots_per_term - 1)
            variance += coeff**2 * s2 / shots_per_term
        estimate += coeff * mean
    return ShotEstimate(estimate, math.sqrt(variance), shots_per_term, seed)


def detection_decision(est: ShotEstimate, k_sigma: float = DEFAULT_K_SIGMA) -> Verdict:
    if k_sigma <= 0:
        raise ValueError("k_sigma must be positive")
    margin = k_sigma * est.stderr
    return Verdict(
        est.estimate + margin < 0,
        est.estimate,
        margin,
        [f"{k_sigma:g}-sigma decision from {est.shots_per_term} shots per term"],
    )
