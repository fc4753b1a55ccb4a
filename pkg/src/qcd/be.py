"""Detection of two-qudit gates that are not bi-entangling.

Subsystems of a gate's Choi vector are A=0, B=1 (outputs) and C=2, D=3
(references), paired A-C and B-D. Bi-entangling Choi states are mixtures of
states biseparable across AC|BD, AD|BC or AB|CD, so the largest overlap of
``|U>`` with that set is the largest Schmidt coefficient over the three cuts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels as ch_mod
from . import tensor_core as tc
from .errors import DimensionError
from .report import Verdict

CUT_AC_BD = tc.Bipartition((0, 2), (1, 3))
CUT_AD_BC = tc.Bipartition((0, 3), (1, 2))
CUT_AB_CD = tc.Bipartition((0, 1), (2, 3))
CUTS = {c.label: c for c in (CUT_AC_BD, CUT_AD_BC, CUT_AB_CD)}

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class BeAnalysis:
    schmidt: dict[str, np.ndarray]
    alpha_be: float
    alpha_sep: float
    witness_be: np.ndarray
    witness_sep: np.ndarray


@dataclass(frozen=True)
class BiseparableSample:
    vector: tc.PureState
    cut: tc.Bipartition


def _check_four_partite(u_vec: tc.PureState) -> None:
    if len(u_vec.dims) != 4:
        raise DimensionError(f"expected four subsystems A,B,C,D, got dims {u_vec.dims}")


def bipartition_schmidt(u_vec: tc.PureState) -> dict[str, np.ndarray]:
    _check_four_partite(u_vec)
    return {label: tc.schmidt_coefficients(u_vec, cut) for label, cut in CUTS.items()}


def alpha_be(u_vec: tc.PureState) -> float:
    return max(float(s[0]) for s in bipartition_schmidt(u_vec).values())


def alpha_sep(u_vec: tc.PureState) -> float:
    _check_four_partite(u_vec)
    return float(tc.schmidt_coefficients(u_vec, CUT_AC_BD)[0])


def _witness(alpha: float, u_vec: tc.PureState) -> np.ndarray:
    n = u_vec.amplitudes.size
    return alpha**2 * np.eye(n) - u_vec.projector()


def be_witness(g: ch_mod.GateSpec) -> np.ndarray:
    """``alpha_BE^2 I - |U><U|`` on the four-partite space."""
    u_vec = ch_mod.choi_vector_of_gate(g)
    return _witness(alpha_be(u_vec), u_vec)


def sep_witness(g: ch_mod.GateSpec) -> np.ndarray:
    """Same construction using only the AC|BD cut (separable-map comparator)."""
    u_vec = ch_mod.choi_vector_of_gate(g)
    return _witness(alpha_sep(u_vec), u_vec)


def analyze(g: ch_mod.GateSpec) -> BeAnalysis:
    u_vec = ch_mod.choi_vector_of_gate(g)
    schmidt = bipartition_schmidt(u_vec)
    a_be = max(float(s[0]) for s in schmidt.values())
    a_sep = float(schmidt[CUT_AC_BD.label][0])
    return BeAnalysis(schmidt, a_be, a_sep, _witness(a_be, u_vec), _witness(a_sep, u_vec))


def detect_non_be(g: ch_mod.GateSpec, tol: float = DEFAULT_TOL) -> Verdict:
    u_vec = ch_mod.choi_vector_of_gate(g)
    w = _witness(alpha_be(u_vec), u_vec)
    amps = u_vec.amplitudes
    expectation = float(np.vdot(amps, w @ amps).real)
    return Verdict(expectation < -tol, expectation, tol)


def channel_cut_spectra(ch: ch_mod.KrausChannel, tol: float = 1e-10) -> list[tuple[float, dict[str, np.ndarray]]]:
    """Three-cut Schmidt data of each eigenvector of a two-qudit channel's Choi state.

    No verdict is attached: the witness above presumes a pure Choi state.
    """
    if len(ch.dims) != 2:
        raise DimensionError(f"expected a two-qudit channel, got dims {ch.dims}")
    c = ch_mod.choi(ch)
    w, v = tc.hermitian_eig(c.matrix)
    out = []
    for lam, col in zip(w[::-1], v.T[::-1]):
        if lam <= tol:
            break
        out.append((float(lam), bipartition_schmidt(tc.PureState(col, c.dims))))
    return out


def sample_biseparable(
    cut: tc.Bipartition, rng_seed, dims: tuple[int, ...] = (2, 2, 2, 2)
) -> BiseparableSample:
    """Haar-random product of a pure state on each block of ``cut``, in A,B,C,D order."""
    cut.check(len(dims))
    rng = np.random.default_rng(rng_seed)
    left = tc.random_pure_state([dims[i] for i in cut.left], rng)
    right = tc.random_pure_state([dims[i] for i in cut.right], rng)
    joint = tc.PureState(
        np.kron(left.amplitudes, right.amplitudes), left.dims + right.dims
    )
    order = cut.left + cut.right
    inverse = [order.index(k) for k in range(len(dims))]
    return BiseparableSample(tc.permute_subsystems(joint, inverse), cut)
