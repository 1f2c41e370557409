"""Classical correction of measured outcomes using the obfuscation key.

Each key record becomes a reversible classical bit operation over
classical-bit positions.  Applying them in key order (newest insertion
first) undoes the encryptor gates' effect on measurement statistics.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .circuit import Counts, GateKind, MeasurementClass
from .obfuscation import GatePool, ObfuscationKey, check_record

log = logging.getLogger(__name__)


class CorrectionError(ValueError):
    """The key contains a record whose effect cannot be undone classically."""


@dataclass(frozen=True)
class ClassicalOp:
    """Involution on bit vectors.

    ``variant`` is one of ``identity``, ``flip``, ``cond_flip``, ``swap``,
    ``cond_swap``.  ``controls`` must all be 1 for the action to fire;
    ``bits`` holds the target (flip) or the exchanged pair (swap).  Positions
    are classical-bit indices (bit 0 = least significant).
    """

    variant: str
    bits: tuple[int, ...] = ()
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        need = {"identity": 0, "flip": 1, "cond_flip": 1, "swap": 2, "cond_swap": 2}
        if self.variant not in need:
            raise ValueError(f"unknown classical op {self.variant!r}")
        if len(self.bits) != need[self.variant]:
            raise ValueError(f"{self.variant} needs {need[self.variant]} bit(s)")
        if self.variant.startswith("cond") != bool(self.controls):
            raise ValueError(f"{self.variant} control bits mismatch: {self.controls}")
        every = self.bits + self.controls
        if len(set(every)) != len(every):
            raise ValueError(f"bit positions must be distinct: {every}")

    @classmethod
    def identity(cls) -> "ClassicalOp":
        return cls("identity")

    def apply(self, value: int) -> int:
        """Apply to an integer whose bit ``j`` is classical bit ``j``."""
        if self.variant == "identity":
            return value
        for c in self.controls:
            if not value >> c & 1:
                return value
        if self.variant in ("flip", "cond_flip"):
            return value ^ (1 << self.bits[0])
        a, b = self.bits
        if (value >> a & 1) != (value >> b & 1):
            value ^= (1 << a) | (1 << b)
        return value

    def apply_bits(self, bits: str) -> str:
        width = len(bits)
        if any(p >= width for p in self.bits + self.controls):
            raise ValueError(f"{self} references bits beyond a {width}-bit string")
        return format(self.apply(int(bits, 2) if bits else 0), f"0{width}b") if width else bits

    def __str__(self) -> str:
        if self.variant == "identity":
            return "identity"
        head = f"{self.variant}{list(self.bits)}"
        return f"{head} if {list(self.controls)}" if self.controls else head


def classical_equivalent(kind: GateKind, operands: Sequence[int],
                         measurements: Union[Mapping[int, int], Sequence[tuple[int, int]]]) -> ClassicalOp:
    """Measurement-level equivalent of ``kind`` on ``operands``.

    Qubits are routed through the qubit -> classical-bit map.  An op whose
    affected qubits are all unmeasured degrades to identity; one that needs
    an unobserved value (an unmeasured control, or a swap that moves an
    unmeasured qubit into a measured one) raises :class:`CorrectionError`.
    """
    cls = kind.measurement_class
    if cls is MeasurementClass.SUPERPOSING:
        raise CorrectionError(f"{kind.mnemonic} creates superposition and has no classical equivalent")
    if cls is MeasurementClass.PHASE_ONLY:
        return ClassicalOp.identity()
    cmap = dict(measurements.items()) if isinstance(measurements, Mapping) else dict(measurements)
    operands = tuple(operands)
    controls = operands[: kind.num_controls]
    targets = operands[kind.num_controls:]
    measured_targets = [t for t in targets if t in cmap]
    if not measured_targets:
        log.info("%s on unmeasured qubit(s) %s: no correction needed", kind.mnemonic, targets)
        return ClassicalOp.identity()
    if len(measured_targets) != len(targets):
        raise CorrectionError(
            f"{kind.mnemonic} exchanges measured and unmeasured qubits {targets}; the moved value was never observed")
    missing = [c for c in controls if c not in cmap]
    if missing:
        raise CorrectionError(f"{kind.mnemonic} control qubit(s) {missing} are unmeasured")
    bits = tuple(cmap[t] for t in targets)
    cbits = tuple(cmap[c] for c in controls)
    swap = kind in (GateKind.SWAP, GateKind.CSWAP)
    if swap:
        bits = tuple(sorted(bits))
        return ClassicalOp("cond_swap" if cbits else "swap", bits, cbits)
    # X, Y, CX, CY, CCX; Y's phases are unobservable
    return ClassicalOp("cond_flip" if cbits else "flip", bits, tuple(sorted(cbits)))


def correction_ops(key: ObfuscationKey, pool: GatePool,
                   measurements: Union[Mapping[int, int], Sequence[tuple[int, int]]],
                   width: int = None) -> list[ClassicalOp]:
    """Classical ops in application order (key order)."""
    cmap = dict(measurements.items()) if isinstance(measurements, Mapping) else dict(measurements)
    if width is None:
        width = max([q for r in key.records for q in r.qubits] + list(cmap) + [-1]) + 1
    ops = []
    for record in key.records:
        g = check_record(record, pool, width)
        ops.append(classical_equivalent(g.kind, g.qubits, cmap))
    return ops


def _compose(ops: Sequence[ClassicalOp]):
    def fn(value: int) -> int:
        for op in ops:
            value = op.apply(value)
        return value
    return fn


def correct_bitstring(bits: str, key: ObfuscationKey, pool: GatePool,
                      measurements: Union[Mapping[int, int], Sequence[tuple[int, int]]]) -> str:
    ops = correction_ops(key, pool, measurements)
    _check_width(len(bits), measurements)
    out = bits
    for op in ops:
        out = op.apply_bits(out)
    return out


def _check_width(width: int, measurements) -> None:
    m = len(measurements)
    if width != m:
        raise ValueError(f"bitstring has {width} bit(s) but {m} classical bit(s) are measured")


def correct_counts(counts: Counts, key: ObfuscationKey, pool: GatePool,
                   measurements: Union[Mapping[int, int], Sequence[tuple[int, int]]]) -> Counts:
    """Map every histogram key through the correction; totals are preserved."""
    ops = correction_ops(key, pool, measurements)
    if counts.entries:
        _check_width(counts.num_bits, measurements)
    fn = _compose(ops)
    m = counts.num_bits
    out: dict[str, int] = {}
    for bits, n in counts.entries.items():
        fixed = format(fn(int(bits, 2)), f"0{m}b") if m else bits
        out[fixed] = out.get(fixed, 0) + n
    return Counts(out, counts.shots)


def correct_probabilities(probs: np.ndarray, key: ObfuscationKey, pool: GatePool,
                          measurements: Union[Mapping[int, int], Sequence[tuple[int, int]]]) -> np.ndarray:
    """Push a probability vector (index bit j = classical bit j) through the correction map."""
    probs = np.asarray(probs, dtype=float)
    fn = _compose(correction_ops(key, pool, measurements))
    perm = np.fromiter((fn(i) for i in range(probs.size)), dtype=np.int64, count=probs.size)
    out = np.zeros_like(probs)
    np.add.at(out, perm, probs)
    return out
