"""Detection of channels that are not completely co-positive.

A channel is CCOP iff transposition composed with it is still CP, i.e. iff
its Choi matrix transposed on the output is positive. If that matrix has a
negative eigenvalue with eigenvector ``|v>``, then
``W = (|v><v|)^{T_out}`` is non-negative on every PPT state and
``Tr[W C] = lambda_min < 0`` on the channel's Choi state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels as ch_mod
from . import tensor_core as tc
from .errors import NoWitness
from .report import Verdict

DEFAULT_TOL = 1e-9

NON_EB_NOTE = (
    "not entanglement breaking: the Choi state is NPT, hence entangled"
)
PPT_NOTE = "Choi is PPT"


@dataclass(frozen=True)
class CcopWitness:
    matrix: np.ndarray
    lambda_min: float
    eigvec: tc.PureState
    multiplicity: int = 1


def min_pt_eigenpair(c: ch_mod.ChoiState) -> tuple[float, tc.PureState]:
    w, v = tc.hermitian_eig(ch_mod.compose_transpose_choi(c))
    return float(w[0]), tc.PureState(v[:, 0], c.dims)


def ccop_witness(c: ch_mod.ChoiState, tol: float = DEFAULT_TOL) -> CcopWitness:
    """Transposed projector onto the most negative eigenvector.

    Raises ``NoWitness`` if no eigenvalue lies below ``-tol``. With a
    degenerate lowest eigenvalue the first eigenvector returned by the
    solver is used; ``multiplicity`` records the degeneracy.
    """
    w, v = tc.hermitian_eig(ch_mod.compose_transpose_choi(c))
    lam = float(w[0])
    if lam >= -tol:
        raise NoWitness(lam, tol)
    vec = tc.PureState(v[:, 0], c.dims)
    mult = int(np.sum(w - lam <= max(tol, 1e-9)))
    matrix = tc.partial_transpose(vec.projector(), c.dims, c.outputs)
    return CcopWitness(matrix, lam, vec, mult)


def detect_non_ccop(ch: ch_mod.KrausChannel, tol: float = DEFAULT_TOL) -> Verdict:
    c = ch_mod.choi(ch)
    try:
        wit = ccop_witness(c, tol)
    except NoWitness as exc:
        return Verdict(False, exc.lambda_min, tol, [PPT_NOTE])
    expectation = float(np.trace(wit.matrix @ c.matrix).real)
    notes = []
    detected = expectation < -tol
    if detected:
        notes.append(NON_EB_NOTE)
    if wit.multiplicity > 1:
        notes.append(
            f"lowest eigenvalue has multiplicity {wit.multiplicity}; witness eigenvector is not unique"
        )
    return Verdict(detected, expectation, tol, notes)
