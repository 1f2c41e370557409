"""Circuit intermediate representation shared by every pass in the toolchain.

A :class:`QuantumCircuit` is an immutable value: a width, an ordered list of
instructions (gates followed by a terminal measurement block) and nothing
else.  Passes build new circuits instead of mutating old ones.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence, Union


class CircuitError(ValueError):
    """Raised when a gate or circuit breaks a structural invariant."""


class MeasurementClass(Enum):
    """How a gate acts on computational-basis measurement statistics."""

    BASIS_PERMUTING = "basis_permuting"
    PHASE_ONLY = "phase_only"
    SUPERPOSING = "superposing"


class GateKind(Enum):
    # value: (mnemonic, arity, param_count, number of control operands)
    X = ("x", 1, 0, 0)
    Y = ("y", 1, 0, 0)
    Z = ("z", 1, 0, 0)
    H = ("h", 1, 0, 0)
    S = ("s", 1, 0, 0)
    SDG = ("sdg", 1, 0, 0)
    T = ("t", 1, 0, 0)
    TDG = ("tdg", 1, 0, 0)
    RX = ("rx", 1, 1, 0)
    RY = ("ry", 1, 1, 0)
    RZ = ("rz", 1, 1, 0)
    P = ("p", 1, 1, 0)
    CX = ("cx", 2, 0, 1)
    CY = ("cy", 2, 0, 1)
    CZ = ("cz", 2, 0, 1)
    CP = ("cp", 2, 1, 1)
    CS = ("cs", 2, 0, 1)
    SWAP = ("swap", 2, 0, 0)
    CCX = ("ccx", 3, 0, 2)
    CSWAP = ("cswap", 3, 0, 1)

    @property
    def mnemonic(self) -> str:
        return self.value[0]

    @property
    def arity(self) -> int:
        return self.value[1]

    @property
    def param_count(self) -> int:
        return self.value[2]

    @property
    def num_controls(self) -> int:
        return self.value[3]

    @property
    def measurement_class(self) -> MeasurementClass:
        return _CLASSES[self]

    @classmethod
    def from_name(cls, name: str) -> "GateKind":
        """Resolve a gate name (case-insensitive, common aliases accepted)."""
        key = name.strip().lower()
        key = _ALIASES.get(key, key)
        for kind in cls:
            if kind.mnemonic == key:
                return kind
        raise CircuitError(f"unknown gate {name!r}")


_ALIASES = {
    "cnot": "cx",
    "ccnot": "ccx",
    "toffoli": "ccx",
    "fredkin": "cswap",
    "u1": "p",
    "phase": "p",
    "cphase": "cp",
    "cu1": "cp",
    "s_dag": "sdg",
    "t_dag": "tdg",
}

_CLASSES = {
    **{k: MeasurementClass.BASIS_PERMUTING for k in (
        GateKind.X, GateKind.Y, GateKind.CX, GateKind.CY,
        GateKind.SWAP, GateKind.CCX, GateKind.CSWAP)},
    **{k: MeasurementClass.PHASE_ONLY for k in (
        GateKind.Z, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG,
        GateKind.RZ, GateKind.P, GateKind.CZ, GateKind.CP, GateKind.CS)},
    **{k: MeasurementClass.SUPERPOSING for k in (GateKind.H, GateKind.RX, GateKind.RY)},
}


def classify(kind: GateKind) -> MeasurementClass:
    return _CLASSES[kind]


@dataclass(frozen=True)
class GateInstance:
    """A gate applied to concrete qubits.

    Operands are ordered controls first, targets last.  For SWAP and CSWAP
    the two exchanged qubits are the final two entries.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.qubits) != self.kind.arity:
            raise CircuitError(
                f"{self.kind.mnemonic} takes {self.kind.arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"duplicate qubit in operands of {self.kind.mnemonic}: {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {self.qubits}")
        if len(self.params) != self.kind.param_count:
            raise CircuitError(
                f"{self.kind.mnemonic} takes {self.kind.param_count} angle(s), got {len(self.params)}")

    @property
    def controls(self) -> tuple[int, ...]:
        return self.qubits[: self.kind.num_controls]

    @property
    def targets(self) -> tuple[int, ...]:
        return self.qubits[self.kind.num_controls:]

    def __repr__(self) -> str:
        args = f"({', '.join(f'{p:g}' for p in self.params)})" if self.params else ""
        return f"{self.kind.name}{args}@{list(self.qubits)}"


def gate(name: Union[str, GateKind], *qubits: int, params: Sequence[float] = ()) -> GateInstance:
    """Shorthand constructor: ``gate("cx", 0, 1)``, ``gate("rz", 2, params=[0.5])``."""
    kind = name if isinstance(name, GateKind) else GateKind.from_name(name)
    return GateInstance(kind, tuple(qubits), tuple(params))


@dataclass(frozen=True)
class Measure:
    qubit: int
    clbit: int


Instruction = Union[GateInstance, Measure]


@dataclass(frozen=True)
class QuantumCircuit:
    """Ordered instruction stream over ``num_qubits`` qubits.

    Well-formed circuits keep every :class:`Measure` in one terminal block;
    :func:`validate` reports anything else.  Use :meth:`build` for the usual
    "gates, then measurements" construction.
    """

    num_qubits: int
    instructions: tuple[Instruction, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if int(self.num_qubits) < 1:
            raise CircuitError("a circuit needs at least one qubit")

    @classmethod
    def build(cls, num_qubits: int, gates: Iterable[GateInstance] = (),
              measurements: Union[Mapping[int, int], Iterable[tuple[int, int]]] = ()) -> "QuantumCircuit":
        items = measurements.items() if isinstance(measurements, Mapping) else measurements
        return cls(num_qubits, tuple(gates) + tuple(Measure(int(q), int(c)) for q, c in items))

    @property
    def gates(self) -> tuple[GateInstance, ...]:
        return tuple(i for i in self.instructions if isinstance(i, GateInstance))

    @property
    def measurements(self) -> tuple[tuple[int, int], ...]:
        """(qubit, classical bit) pairs in program order."""
        return tuple((i.qubit, i.clbit) for i in self.instructions if isinstance(i, Measure))

    @property
    def measurement_map(self) -> dict[int, int]:
        return dict(self.measurements)

    @property
    def num_clbits(self) -> int:
        return len(self.measurements)

    def with_gates(self, gates: Iterable[GateInstance]) -> "QuantumCircuit":
        """Same width and measurement block, different gate list."""
        return QuantumCircuit.build(self.num_qubits, gates, self.measurements)

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class Violation:
    kind: str
    position: int
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at instruction {self.position}: {self.message}"


def validate(circuit: QuantumCircuit) -> list[Violation]:
    """Return every invariant violation of ``circuit``; empty means valid."""
    report: list[Violation] = []
    n = circuit.num_qubits
    seen_measure = False
    measured_q: dict[int, int] = {}
    written_c: dict[int, int] = {}
    for pos, inst in enumerate(circuit.instructions):
        if isinstance(inst, Measure):
            seen_measure = True
            if not 0 <= inst.qubit < n:
                report.append(Violation("qubit range", pos, f"measured qubit {inst.qubit} outside [0, {n})"))
            if inst.qubit in measured_q:
                report.append(Violation("qubit remeasured", pos, f"qubit {inst.qubit} already measured"))
            if inst.clbit in written_c:
                report.append(Violation("classical bit reuse", pos, f"classical bit {inst.clbit} written twice"))
            if inst.clbit < 0:
                report.append(Violation("classical bit range", pos, f"negative classical bit {inst.clbit}"))
            measured_q.setdefault(inst.qubit, pos)
            written_c.setdefault(inst.clbit, pos)
            continue
        if seen_measure:
            report.append(Violation("terminal measurement", pos, f"{inst!r} follows the measurement block"))
        bad = [q for q in inst.qubits if q >= n]
        if bad:
            report.append(Violation("qubit range", pos, f"{inst!r} uses qubit(s) {bad} outside [0, {n})"))
    if written_c and sorted(written_c) != list(range(len(written_c))):
        report.append(Violation("classical bits not contiguous", len(circuit.instructions),
                                f"classical bits {sorted(written_c)} are not 0..{len(written_c) - 1}"))
    return report


def check_circuit(circuit: QuantumCircuit) -> QuantumCircuit:
    """Raise :class:`CircuitError` listing all violations, else return ``circuit``."""
    if not isinstance(circuit, QuantumCircuit):
        raise TypeError(f"expected QuantumCircuit, got {type(circuit).__name__}")
    report = validate(circuit)
    if report:
        raise CircuitError("; ".join(str(v) for v in report))
    return circuit


def append_gate(circuit: QuantumCircuit, g: GateInstance) -> QuantumCircuit:
    """Insert ``g`` right before the measurement block (or at the end)."""
    bad = [q for q in g.qubits if q >= circuit.num_qubits]
    if bad:
        raise CircuitError(f"qubit(s) {bad} out of range for a {circuit.num_qubits}-qubit circuit")
    return circuit.with_gates(circuit.gates + (g,))


@dataclass(frozen=True)
class Counts:
    """Histogram of measured bitstrings.  Classical bit 0 is the rightmost character."""

    entries: Mapping[str, int]
    shots: int

    def __post_init__(self):
        entries = {str(k): int(v) for k, v in dict(self.entries).items()}
        lengths = {len(k) for k in entries}
        if len(lengths) > 1:
            raise CircuitError(f"bitstrings of mixed length: {sorted(lengths)}")
        for k, v in entries.items():
            if set(k) - {"0", "1"}:
                raise CircuitError(f"bitstring {k!r} contains characters other than 0/1")
            if v < 0:
                raise CircuitError(f"negative count for {k!r}")
        if sum(entries.values()) != int(self.shots):
            raise CircuitError(f"counts sum to {sum(entries.values())}, expected {self.shots} shots")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "shots", int(self.shots))

    @classmethod
    def from_dict(cls, entries: Mapping[str, int]) -> "Counts":
        return cls(entries, sum(int(v) for v in entries.values()))

    @property
    def num_bits(self) -> int:
        return len(next(iter(self.entries))) if self.entries else 0

    def get(self, key: str) -> int:
        return self.entries.get(key, 0)

    def to_json(self) -> dict:
        return {"shots": self.shots, "counts": dict(sorted(self.entries.items()))}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Counts":
        if "counts" in obj:
            counts = Counts(obj["counts"], obj.get("shots", sum(obj["counts"].values())))
        else:
            counts = Counts.from_dict({k: v for k, v in obj.items() if k != "shots"})
        return counts
