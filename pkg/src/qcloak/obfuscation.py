"""Gate pools, insertion plans and the obfuscation pass itself."""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import pi
from typing import Iterable, Mapping, Optional, Sequence, Union

from .circuit import (
    CircuitError,
    GateInstance,
    GateKind,
    MeasurementClass,
    QuantumCircuit,
    check_circuit,
)
from .simulator import make_rng


class PoolError(ValueError):
    pass


@dataclass(frozen=True)
class PoolEntry:
    kind: GateKind
    angle: Optional[float] = None

    @property
    def arity(self) -> int:
        return self.kind.arity

    def instantiate(self, qubits: Sequence[int]) -> GateInstance:
        params = (self.angle,) if self.kind.param_count else ()
        return GateInstance(self.kind, tuple(qubits), params)


@dataclass(frozen=True)
class GatePool:
    """Fixed index -> gate mapping.  Superposing gates are never admitted."""

    entries: Mapping[int, PoolEntry]

    def __post_init__(self):
        entries = dict(sorted((int(k), v) for k, v in dict(self.entries).items()))
        for idx, entry in entries.items():
            if idx < 0:
                raise PoolError(f"pool index {idx} is negative")
            if entry.kind.measurement_class is MeasurementClass.SUPERPOSING:
                raise PoolError(
                    f"pool index {idx}: {entry.kind.mnemonic} creates superposition; "
                    "Hadamard-family gates cannot be corrected classically")
            if entry.kind.param_count and entry.angle is None:
                raise PoolError(f"pool index {idx}: {entry.kind.mnemonic} needs a fixed angle")
            if not entry.kind.param_count and entry.angle is not None:
                raise PoolError(f"pool index {idx}: {entry.kind.mnemonic} takes no angle")
        object.__setattr__(self, "entries", entries)

    def __getitem__(self, index: int) -> PoolEntry:
        try:
            return self.entries[index]
        except KeyError:
            raise PoolError(f"unknown gate index {index}") from None

    def __contains__(self, index: int) -> bool:
        return index in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def indices(self) -> list[int]:
        return list(self.entries)

    @property
    def max_arity(self) -> int:
        return max((e.arity for e in self.entries.values()), default=0)

    def to_json(self) -> dict:
        out = {}
        for idx, e in self.entries.items():
            item = {"gate": e.kind.mnemonic}
            if e.angle is not None:
                item["angle"] = e.angle
            out[str(idx)] = item
        return out

    @classmethod
    def from_json(cls, obj: Union[str, Mapping]) -> "GatePool":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return build_pool([(int(k), v["gate"], v.get("angle")) for k, v in obj.items()])


def build_pool(spec: Iterable[Union[tuple[int, str], tuple[int, str, Optional[float]]]]) -> GatePool:
    """Build a pool from ``(index, gate name[, angle])`` triples."""
    entries: dict[int, PoolEntry] = {}
    for item in spec:
        idx, name, angle = (tuple(item) + (None,))[:3]
        idx = int(idx)
        if idx in entries:
            raise PoolError(f"duplicate pool index {idx}")
        try:
            kind = GateKind.from_name(name) if isinstance(name, str) else GateKind(name)
        except CircuitError as exc:
            raise PoolError(str(exc)) from None
        entries[idx] = PoolEntry(kind, None if angle is None else float(angle))
    return GatePool(entries)


#: The six-gate pool used in the QAOA walk-through; default everywhere.
DEFAULT_POOL_SPEC = [(0, "X"), (1, "CNOT"), (2, "SWAP"), (3, "CCNOT"), (4, "CSWAP"), (5, "S")]


def default_pool() -> GatePool:
    return build_pool(DEFAULT_POOL_SPEC)


@dataclass(frozen=True)
class InsertionRecord:
    gate_index: int
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "gate_index", int(self.gate_index))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))

    def to_json(self) -> dict:
        return {"index": self.gate_index, "qubits": list(self.qubits)}


def check_record(record: InsertionRecord, pool: GatePool, width: int) -> GateInstance:
    """Validate ``record`` against ``pool`` and circuit ``width``; return its gate."""
    entry = pool[record.gate_index]
    if len(record.qubits) != entry.arity:
        raise PoolError(
            f"gate index {record.gate_index} ({entry.kind.mnemonic}) takes {entry.arity} "
            f"qubit(s), record has {len(record.qubits)}")
    if len(set(record.qubits)) != len(record.qubits):
        raise PoolError(f"duplicate operand in record {record.gate_index}#{list(record.qubits)}")
    bad = [q for q in record.qubits if not 0 <= q < width]
    if bad:
        raise PoolError(f"qubit(s) {bad} out of range for width {width}")
    return entry.instantiate(record.qubits)


@dataclass(frozen=True)
class ObfuscationKey:
    """Insertion records, most recently inserted first (correction order)."""

    records: tuple[InsertionRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    @classmethod
    def from_plan(cls, plan: Sequence[InsertionRecord]) -> "ObfuscationKey":
        return cls(tuple(reversed(tuple(plan))))

    def insertion_order(self) -> list[InsertionRecord]:
        return list(reversed(self.records))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def random_plan(pool: GatePool, width: int, num_gates: int, seed: int,
                qubits: Optional[Sequence[int]] = None) -> list[InsertionRecord]:
    """Draw ``num_gates`` uniform pool gates on uniformly chosen distinct qubits.

    ``qubits`` restricts the candidate operands (default: all of ``range(width)``).
    """
    if num_gates < 0:
        raise ValueError("num_gates must be non-negative")
    if len(pool) == 0:
        raise PoolError("empty gate pool")
    candidates = list(range(width)) if qubits is None else sorted(set(int(q) for q in qubits))
    if any(not 0 <= q < width for q in candidates):
        raise PoolError(f"candidate qubits {candidates} outside width {width}")
    if pool.max_arity > len(candidates):
        raise PoolError(f"pool has a {pool.max_arity}-qubit gate but only {len(candidates)} qubit(s) available")
    rng = make_rng(seed)
    indices = pool.indices
    plan = []
    for _ in range(num_gates):
        idx = indices[int(rng.integers(len(indices)))]
        picked = rng.choice(len(candidates), size=pool[idx].arity, replace=False)
        plan.append(InsertionRecord(idx, tuple(candidates[int(i)] for i in picked)))
    return plan


def obfuscate(circuit: QuantumCircuit, pool: GatePool,
              plan: Sequence[InsertionRecord]) -> tuple[QuantumCircuit, ObfuscationKey]:
    """Append the plan's gates right before measurement; return the circuit and its key."""
    check_circuit(circuit)
    extra = [check_record(r, pool, circuit.num_qubits) for r in plan]
    return circuit.with_gates(circuit.gates + tuple(extra)), ObfuscationKey.from_plan(plan)


def plan_from_json(obj: Union[str, Sequence[Mapping]]) -> list[InsertionRecord]:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return [InsertionRecord(item["index"], tuple(item["qubits"])) for item in obj]


def plan_to_json(plan: Sequence[InsertionRecord]) -> list[dict]:
    return [r.to_json() for r in plan]


def phase_pool(angles: Sequence[float] = (pi / 4,)) -> GatePool:
    """Pool of phase-only gates; obfuscating with it leaves statistics unchanged."""
    spec = [(0, "z"), (1, "s"), (2, "t"), (3, "cz")]
    spec += [(4 + i, "p", a) for i, a in enumerate(angles)]
    return build_pool(spec)
