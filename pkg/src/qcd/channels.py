"""Kraus-form channels, their Choi states, and the concrete channels used here.

Choi convention: ``C = (M ⊗ I)[|α><α|]``, channel output first and reference
second. For a two-qudit gate on A, B the four-partite order is A, B, C, D
with A paired to C and B paired to D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import tensor_core as tc
from .errors import DimensionError, InvalidChannelError, NotUnitaryError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True)
class KrausChannel:
    """CP map ``rho -> sum_k K_k rho K_k^†``.

    ``dims`` splits the input space into qudits; it defaults to a single
    qudit of the full dimension.
    """

    kraus_ops: tuple[np.ndarray, ...]
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise InvalidChannelError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.ndim != 2 or k.shape != (d, d):
                raise InvalidChannelError(
                    f"Kraus operators must all be {d}x{d}, got shape {k.shape}"
                )
        dims = tuple(int(x) for x in self.dims) or (d,)
        if math.prod(dims) != d:
            raise DimensionError(f"dims {dims} do not multiply to {d}")
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]


@dataclass(frozen=True)
class GateSpec:
    unitary: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=complex)
        dims = tuple(int(x) for x in self.dims)
        if u.ndim != 2 or u.shape[0] != u.shape[1] or math.prod(dims) != u.shape[0]:
            raise DimensionError(f"gate of shape {u.shape} does not act on dims {dims}")
        if not np.allclose(u.conj().T @ u, np.eye(u.shape[0]), rtol=0, atol=tc.TOL):
            raise NotUnitaryError("gate matrix is not unitary within 1e-10")
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "dims", dims)


@dataclass(frozen=True)
class ChoiState:
    matrix: np.ndarray
    dims: tuple[int, ...]
    outputs: tuple[int, ...]
    references: tuple[int, ...] = field(default=())

    def check(self, tol: float = tc.TOL) -> None:
        """Raise ``InvalidChannelError`` unless Hermitian, PSD and unit trace."""
        if not tc.is_hermitian(self.matrix, tol):
            raise InvalidChannelError("Choi matrix is not Hermitian")
        tr = np.trace(self.matrix)
        if abs(tr - 1) > tol:
            raise InvalidChannelError(f"Choi matrix has trace {tr}")
        w, _ = tc.hermitian_eig(self.matrix)
        if w[0] < -tol:
            raise InvalidChannelError(f"Choi matrix has eigenvalue {w[0]:.3e}")


@dataclass(frozen=True)
class Validation:
    ok: bool
    deviation: float

    def __bool__(self) -> bool:
        return self.ok


def validate(ch: KrausChannel, tol: float = tc.TOL) -> Validation:
    """Check trace preservation; ``deviation`` is max |(Σ K†K − I)_ij|."""
    total = sum(k.conj().T @ k for k in ch.kraus_ops)
    deviation = float(np.max(np.abs(total - np.eye(ch.dim))))
    return Validation(deviation <= tol, deviation)


def apply(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim, ch.dim):
        raise DimensionError(f"state of shape {rho.shape} for a {ch.dim}-dim channel")
    return sum(k @ rho @ k.conj().T for k in ch.kraus_ops)


def choi(ch: KrausChannel, tol: float = tc.TOL) -> ChoiState:
    check = validate(ch, tol)
    if not check:
        raise InvalidChannelError(f"channel is not trace preserving (deviation {check.deviation:.3e})")
    d = ch.dim
    alpha = tc.max_entangled(d).projector()
    eye = np.eye(d)
    mat = sum(np.kron(k, eye) @ alpha @ np.kron(k, eye).conj().T for k in ch.kraus_ops)
    n = len(ch.dims)
    return ChoiState(
        mat,
        ch.dims + ch.dims,
        outputs=tuple(range(n)),
        references=tuple(range(n, 2 * n)),
    )


def compose_transpose_choi(c: ChoiState) -> np.ndarray:
    """Choi matrix of T∘M: the Choi matrix transposed on the channel output."""
    return tc.partial_transpose(c.matrix, c.dims, c.outputs)


def choi_vector_of_gate(g: GateSpec) -> tc.PureState:
    """``(U_AB ⊗ I_CD) |α>_AC |α>_BD`` in subsystem order A, B, C, D."""
    if len(g.dims) != 2:
        raise DimensionError(f"expected a two-qudit gate, got dims {g.dims}")
    da, db = g.dims
    pairs = tc.PureState(
        np.kron(tc.max_entangled(da).amplitudes, tc.max_entangled(db).amplitudes),
        (da, da, db, db),
    )
    # pairs is ordered A, C, B, D
    abcd = tc.permute_subsystems(pairs, (0, 2, 1, 3))
    amps = np.kron(g.unitary, np.eye(da * db)) @ abcd.amplitudes
    return tc.PureState(amps, (da, db, da, db))


def dephasing(p: float) -> KrausChannel:
    if not 0.0 <= p <= 1.0:
        raise InvalidChannelError(f"dephasing probability must lie in [0, 1], got {p}")
    return KrausChannel((math.sqrt(p) * np.eye(2), math.sqrt(1 - p) * SIGMA_Z))


def unitary_channel(g: GateSpec) -> KrausChannel:
    return KrausChannel((g.unitary,), g.dims)


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=complex),))


def gate_V() -> GateSpec:
    """Modified swap: swaps |01> and |10> and puts a -1 on |11>."""
    v = np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]], dtype=complex
    )
    return GateSpec(v, (2, 2))


def swap_gate(d: int) -> GateSpec:
    s = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1
    return GateSpec(s, (d, d))


def identity_gate(d: int) -> GateSpec:
    return GateSpec(np.eye(d * d, dtype=complex), (d, d))


def cnot_gate() -> GateSpec:
    u = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    return GateSpec(u, (2, 2))


def random_channel(
    d: int, n_kraus: int, rng: np.random.Generator, dims: Sequence[int] = ()
) -> KrausChannel:
    """Split a Haar-random isometry C^d -> C^(d*n_kraus) into Kraus operators."""
    iso = tc.haar_unitary(d * n_kraus, rng)[:, :d]
    return KrausChannel(tuple(iso[k * d:(k + 1) * d] for k in range(n_kraus)), tuple(dims))


# channel specification files


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    channel: KrausChannel
    gate: GateSpec | None = None


def parse_matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InvalidChannelError("a matrix must be a nonempty array of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InvalidChannelError("matrix has ragged rows")
    out = np.empty((len(rows), width), dtype=complex)
    for i, row in enumerate(rows):
        for j, z in enumerate(row):
            if (
                not isinstance(z, list)
                or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            ):
                raise InvalidChannelError(f"entry ({i}, {j}) is not a [re, im] pair")
            out[i, j] = complex(z[0], z[1])
    return out


def _gate_dims(d: int, dims) -> tuple[int, ...]:
    if dims is not None:
        if not isinstance(dims, list) or not all(isinstance(x, int) and x >= 1 for x in dims):
            raise InvalidChannelError("dims must be a list of positive integers")
        return tuple(dims)
    root = math.isqrt(d)
    return (root, root) if root >= 2 and root * root == d else (d,)


def parse_spec(obj) -> ChannelSpec:
    """Build a channel from a decoded JSON spec; raises ``InvalidChannelError``."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidChannelError('spec must be an object with a "kind" field')
    kind = obj["kind"]
    try:
        if kind == "dephasing":
            p = obj.get("p")
            if not isinstance(p, (int, float)) or isinstance(p, bool):
                raise InvalidChannelError('dephasing spec needs a numeric "p"')
            return ChannelSpec(kind, dephasing(float(p)))
        if kind == "unitary":
            u = parse_matrix(obj.get("matrix"))
            if u.shape[0] != u.shape[1]:
                raise InvalidChannelError("unitary matrix must be square")
            gate = GateSpec(u, _gate_dims(u.shape[0], obj.get("dims")))
            return ChannelSpec(kind, unitary_channel(gate), gate)
        if kind == "kraus":
            ops = obj.get("kraus")
            if not isinstance(ops, list) or not ops:
                raise InvalidChannelError('kraus spec needs a nonempty "kraus" list')
            mats = [parse_matrix(k) for k in ops]
            dims = obj.get("dims")
            channel = KrausChannel(tuple(mats), _gate_dims(mats[0].shape[0], dims) if dims else ())
            check = validate(channel)
            if not check:
                raise InvalidChannelError(
                    f"Kraus operators are not trace preserving (deviation {check.deviation:.3e})"
                )
            return ChannelSpec(kind, channel)
        if kind == "builtin":
            return _parse_builtin(obj)
    except (DimensionError, NotUnitaryError) as exc:
        raise InvalidChannelError(str(exc)) from exc
    raise InvalidChannelError(f"unknown spec kind {kind!r}")


def _parse_builtin(obj) -> ChannelSpec:
    name = obj.get("name")
    dim = obj.get("dim", 2)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2:
        raise InvalidChannelError('builtin "dim" must be an integer >= 2')
    if name == "V":
        if dim != 2:
            raise InvalidChannelError("gate V acts on qubits only (dim 2)")
        gate = gate_V()
    elif name == "swap":
        gate = swap_gate(dim)
    elif name == "identity":
        dims = _gate_dims(dim, None)
        gate = GateSpec(np.eye(dim, dtype=complex), dims) if len(dims) == 2 else None
        if gate is None:
            return ChannelSpec("builtin", identity_channel(dim))
    else:
        raise InvalidChannelError(f"unknown builtin {name!r}")
    return ChannelSpec("builtin", unitary_channel(gate), gate)
