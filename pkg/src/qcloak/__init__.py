"""Quantum circuit obfuscation with classical key-based output correction."""
from .circuit import (
    CircuitError,
    Counts,
    GateInstance,
    GateKind,
    Measure,
    MeasurementClass,
    QuantumCircuit,
    append_gate,
    classify,
    gate,
    validate,
)
from .correction import ClassicalOp, classical_equivalent, correct_bitstring, correct_counts, correct_probabilities
from .estimators import CircuitObfuscator, MockTranspiler, StatevectorSampler
from .keycodec import decode, encode
from .metrics import MetricReport, dfc, tvd
from .obfuscation import GatePool, InsertionRecord, ObfuscationKey, build_pool, default_pool, obfuscate, random_plan
from .qasm import emit, parse
from .simulator import evolve, probabilities, sample
from .transpiler import BasisSet, decompose, peephole_optimize, transpile

__version__ = "0.1.0"

__all__ = [
    "BasisSet",
    "CircuitError",
    "CircuitObfuscator",
    "ClassicalOp",
    "Counts",
    "GateInstance",
    "GateKind",
    "GatePool",
    "InsertionRecord",
    "Measure",
    "MeasurementClass",
    "MetricReport",
    "MockTranspiler",
    "ObfuscationKey",
    "QuantumCircuit",
    "StatevectorSampler",
    "append_gate",
    "build_pool",
    "classical_equivalent",
    "classify",
    "correct_bitstring",
    "correct_counts",
    "correct_probabilities",
    "decode",
    "decompose",
    "default_pool",
    "dfc",
    "emit",
    "encode",
    "evolve",
    "gate",
    "obfuscate",
    "parse",
    "peephole_optimize",
    "probabilities",
    "random_plan",
    "sample",
    "transpile",
    "tvd",
    "validate",
]
