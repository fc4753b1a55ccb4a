"""Dense linear algebra on small multi-subsystem Hilbert spaces.

Matrices are plain complex ``numpy`` arrays. Subsystems are ordered
big-endian: in the basis label ``|a b c d>`` subsystem 0 (``a``) is the most
significant digit, so ``kron(A, B)`` puts ``A`` on subsystem 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import unitary_group

from .errors import DimensionError, NotHermitianError

TOL = 1e-10
JACOBI_THRESHOLD = 1e-12
LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        if math.prod(dims) != amps.size:
            raise DimensionError(f"dims {dims} do not match {amps.size} amplitudes")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class Bipartition:
    """A split of subsystem indices into two nonempty complementary blocks."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(int(i) for i in self.left))
        object.__setattr__(self, "right", tuple(int(i) for i in self.right))
        if not self.left or not self.right:
            raise DimensionError("both sides of a bipartition must be nonempty")
        if set(self.left) & set(self.right):
            raise DimensionError(f"{self.left} and {self.right} overlap")

    def check(self, n_subsystems: int) -> None:
        if sorted(self.left + self.right) != list(range(n_subsystems)):
            raise DimensionError(
                f"bipartition {self.label} does not cover {n_subsystems} subsystems"
            )

    @property
    def label(self) -> str:
        return "".join(LETTERS[i] for i in self.left) + "|" + "".join(
            LETTERS[i] for i in self.right
        )


def kron(*ops: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def is_hermitian(m: np.ndarray, tol: float = TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(
        np.all(np.abs(m - m.conj().T) <= tol)
    )


def _check_square(m: np.ndarray, dims: Sequence[int]) -> int:
    n = math.prod(dims)
    if m.shape != (n, n):
        raise DimensionError(f"matrix of shape {m.shape} does not act on dims {tuple(dims)}")
    return n


def _subsystem_indices(subsystems: int | Iterable[int], n: int) -> list[int]:
    idx = [subsystems] if isinstance(subsystems, (int, np.integer)) else list(subsystems)
    for i in idx:
        if not 0 <= i < n:
            raise DimensionError(f"subsystem {i} out of range for {n} subsystems")
    return [int(i) for i in idx]


def max_entangled(d: int) -> PureState:
    """(1/sqrt d) sum_k |k>|k> on two d-level systems."""
    if d < 2:
        raise DimensionError(f"maximally entangled state needs d >= 2, got {d}")
    amps = np.eye(d, dtype=complex).reshape(-1) / math.sqrt(d)
    return PureState(amps, (d, d))


def partial_transpose(
    m: np.ndarray, dims: Sequence[int], subsystem: int | Iterable[int] = 0
) -> np.ndarray:
    """Transpose the row/column indices of the given subsystem(s) only."""
    m = np.asarray(m, dtype=complex)
    n = len(dims)
    _check_square(m, dims)
    idx = _subsystem_indices(subsystem, n)
    t = m.reshape(tuple(dims) * 2)
    axes = list(range(2 * n))
    for i in idx:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return t.transpose(axes).reshape(m.shape)


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    n = len(dims)
    _check_square(m, dims)
    keep = sorted(set(_subsystem_indices(keep, n)))
    t = m.reshape(tuple(dims) * 2)
    # trace from the highest index down so lower axis numbers stay valid
    n_left = n
    for i in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=i, axis2=i + n_left)
        n_left -= 1
    k = math.prod(dims[i] for i in keep)
    return t.reshape(k, k)


def permute_subsystems(v: PureState, perm: Sequence[int]) -> PureState:
    """Reorder subsystems so that output subsystem ``k`` is input subsystem ``perm[k]``."""
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(len(v.dims))):
        raise DimensionError(f"{perm} is not a permutation of {len(v.dims)} subsystems")
    t = v.amplitudes.reshape(v.dims).transpose(perm)
    return PureState(t.reshape(-1), tuple(v.dims[p] for p in perm))


def permute_operator(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Operator counterpart of :func:`permute_subsystems`."""
    n = len(dims)
    _check_square(m, dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"{perm} is not a permutation of {n} subsystems")
    t = np.asarray(m).reshape(tuple(dims) * 2)
    return t.transpose(perm + [n + p for p in perm]).reshape(m.shape)


def _offdiag_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def hermitian_eig(m: np.ndarray, tol: float = TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and orthonormal
    eigenvectors in the columns of ``v``. Within a degenerate eigenspace the
    basis is whatever the rotations converge to.
    """
    a = np.array(m, dtype=complex)
    if not is_hermitian(a, tol):
        raise NotHermitianError("hermitian_eig needs a Hermitian matrix")
    n = a.shape[0]
    a = (a + a.conj().T) / 2
    v = np.eye(n, dtype=complex)
    threshold = JACOBI_THRESHOLD * max(1.0, float(np.linalg.norm(a)))

    for _ in range(100):
        if _offdiag_norm(a) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                # phase on column q makes a[p, q] real and positive
                phase = apq / mag
                a[:, q] *= phase.conjugate()
                a[q, :] *= phase
                v[:, q] *= phase.conjugate()
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise RuntimeError("Jacobi sweeps did not converge")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def schmidt_coefficients(v: PureState, cut: Bipartition) -> np.ndarray:
    """Schmidt coefficients of ``v`` across ``cut``, in descending order."""
    cut.check(len(v.dims))
    moved = permute_subsystems(v, cut.left + cut.right)
    d_left = math.prod(v.dims[i] for i in cut.left)
    return np.linalg.svd(moved.amplitudes.reshape(d_left, -1), compute_uv=False)


# random objects for property tests and Monte Carlo checks


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng) if d > 1 else np.ones((1, 1), complex)


def random_pure_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    n = math.prod(dims)
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return PureState(z / np.linalg.norm(z), tuple(dims))


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-induced random density matrix (Hilbert-Schmidt measure at full rank)."""
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
