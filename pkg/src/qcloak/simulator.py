"""Exact statevector simulation and seeded shot sampling.

Basis-index convention: bit ``i`` of an amplitude index is the state of
qubit ``i``.  Gates are applied to the amplitude tensor directly; controlled
gates only touch the slice where every control is 1.
"""
from __future__ import annotations

from math import cos, pi, sin, sqrt
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .circuit import Counts, GateInstance, GateKind, QuantumCircuit, check_circuit

MAX_QUBITS = 16
NORM_TOL = 1e-10

_INV_SQRT2 = 1 / sqrt(2)

_FIXED = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _INV_SQRT2,
    GateKind.S: np.diag([1, 1j]).astype(complex),
    GateKind.SDG: np.diag([1, -1j]).astype(complex),
    GateKind.T: np.diag([1, np.exp(1j * pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(-1j * pi / 4)]),
    # little-endian over (a, b): |ab> index = a + 2b
    GateKind.SWAP: np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}

# controlled kinds -> kind of the gate applied to their targets
_BASE = {
    GateKind.CX: GateKind.X,
    GateKind.CY: GateKind.Y,
    GateKind.CZ: GateKind.Z,
    GateKind.CP: GateKind.P,
    GateKind.CS: GateKind.S,
    GateKind.CCX: GateKind.X,
    GateKind.CSWAP: GateKind.SWAP,
}


def _rotation(kind: GateKind, theta: float) -> np.ndarray:
    c, s = cos(theta / 2), sin(theta / 2)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind is GateKind.RZ:
        return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    if kind is GateKind.P:
        return np.diag([1, np.exp(1j * theta)])
    raise KeyError(kind)


def target_matrix(kind: GateKind, params: Sequence[float] = ()) -> np.ndarray:
    """Matrix applied to the target operands (controls stripped)."""
    base = _BASE.get(kind, kind)
    if base in _FIXED:
        return _FIXED[base]
    return _rotation(base, params[0])


def gate_matrix(kind: GateKind, params: Sequence[float] = ()) -> np.ndarray:
    """Full ``2^k x 2^k`` unitary over the gate's operands.

    Local index bit ``j`` is the state of operand ``j`` (same little-endian
    convention as the statevector).
    """
    k = kind.arity
    dim = 2 ** k
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        psi = np.zeros(dim, dtype=complex)
        psi[col] = 1.0
        out[:, col] = _apply(psi.reshape([2] * k), GateInstance(kind, tuple(range(k)), tuple(params)), k).reshape(-1)
    return out


def _axis(qubit: int, n: int) -> int:
    return n - 1 - qubit


def _apply(psi: np.ndarray, g: GateInstance, n: int) -> np.ndarray:
    """Apply ``g`` to the amplitude tensor ``psi`` (shape ``[2]*n``) in place."""
    u = target_matrix(g.kind, g.params)
    index: list = [slice(None)] * n
    for c in g.controls:
        index[_axis(c, n)] = 1
    index = tuple(index)
    sub = psi[index]
    remaining = [a for a in range(n) if not isinstance(index[a], int)]
    # local little-endian order: operand 0 is the least significant => last axis
    t_axes = [remaining.index(_axis(t, n)) for t in reversed(g.targets)]
    k = len(t_axes)
    moved = np.moveaxis(sub, t_axes, list(range(sub.ndim - k, sub.ndim)))
    shape = moved.shape
    flat = moved.reshape(-1, 2 ** k) @ u.T
    psi[index] = np.moveaxis(flat.reshape(shape), list(range(sub.ndim - k, sub.ndim)), t_axes)
    return psi


def evolve(circuit: QuantumCircuit, initial: Optional[np.ndarray] = None) -> np.ndarray:
    """Statevector after all gates of ``circuit``, starting from ``|0...0>``.

    ``initial`` overrides the starting amplitudes (used to extract unitaries).
    """
    check_circuit(circuit)
    n = circuit.num_qubits
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the simulator cap of {MAX_QUBITS}")
    if initial is None:
        psi = np.zeros(2 ** n, dtype=complex)
        psi[0] = 1.0
    else:
        psi = np.array(initial, dtype=complex).copy()
        if psi.shape != (2 ** n,):
            raise ValueError(f"initial state must have {2 ** n} amplitudes")
    psi = psi.reshape([2] * n)
    for g in circuit.gates:
        _apply(psi, g, n)
        if __debug__:
            norm = float(np.vdot(psi, psi).real)
            assert abs(norm - 1.0) < NORM_TOL or initial is not None, f"norm drift {norm} after {g!r}"
    return psi.reshape(-1)


def unitary(circuit: QuantumCircuit) -> np.ndarray:
    """Full unitary of the gate list, column ``j`` = image of basis state ``j``."""
    dim = 2 ** circuit.num_qubits
    bare = circuit.with_gates(circuit.gates)
    cols = [evolve(bare, np.eye(dim, dtype=complex)[j]) for j in range(dim)]
    return np.stack(cols, axis=1)


def probabilities(state: np.ndarray, measurements: Union[Mapping[int, int], Sequence[tuple[int, int]]]) -> np.ndarray:
    """Probability of each classical outcome; index bit ``j`` is classical bit ``j``.

    Unmeasured qubits are marginalised out.
    """
    state = np.asarray(state)
    n = int(round(np.log2(state.size)))
    if 2 ** n != state.size:
        raise ValueError("statevector length is not a power of two")
    pairs = list(measurements.items()) if isinstance(measurements, Mapping) else list(measurements)
    m = len(pairs)
    if sorted(c for _, c in pairs) != list(range(m)):
        raise ValueError("classical bits must be contiguous from 0")
    qubit_of = {c: q for q, c in pairs}
    p = (np.abs(state) ** 2).reshape([2] * n)
    measured_axes = {_axis(q, n) for q, _ in pairs}
    unmeasured = tuple(a for a in range(n) if a not in measured_axes)
    if unmeasured:
        p = p.sum(axis=unmeasured)
    kept = [a for a in range(n) if a in measured_axes]
    # output axis order: classical bit m-1 first (most significant)
    order = [kept.index(_axis(qubit_of[c], n)) for c in reversed(range(m))]
    return np.transpose(p, order).reshape(-1) if m else np.array([float(p.sum())])


def circuit_probabilities(circuit: QuantumCircuit) -> np.ndarray:
    return probabilities(evolve(circuit), circuit.measurements)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFF_FFFF_FFFF_FFFF))


def derive_seed(seed: int, *stream: int) -> int:
    """Independent 64-bit child seed for ``(seed, *stream)``."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFF_FFFF_FFFF_FFFF, *(int(s) for s in stream)])
    return int(ss.generate_state(1, np.uint64)[0])


def sample(probs: np.ndarray, shots: int, seed: int) -> Counts:
    """Draw ``shots`` outcomes by inverse CDF; deterministic in ``(probs, shots, seed)``."""
    probs = np.asarray(probs, dtype=float)
    if shots < 1:
        raise ValueError("shots must be positive")
    if np.any(probs < -1e-12) or abs(probs.sum() - 1.0) > 1e-8:
        raise ValueError("probabilities must be non-negative and sum to 1")
    m = int(round(np.log2(probs.size)))
    cdf = np.cumsum(np.clip(probs, 0.0, None))
    cdf /= cdf[-1]
    u = make_rng(seed).random(shots)
    # side="right": zero-width bins can never be hit
    idx = np.searchsorted(cdf, u, side="right")
    hist = np.bincount(idx, minlength=probs.size)
    return Counts({format(i, f"0{m}b") if m else "": int(c) for i, c in enumerate(hist) if c}, shots)


def run(circuit: QuantumCircuit, shots: int, seed: int) -> Counts:
    """evolve -> probabilities -> sample in one call."""
    return sample(circuit_probabilities(circuit), shots, seed)
