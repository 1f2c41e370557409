"""Random circuit, pool and plan generators shared by property tests."""
from __future__ import annotations

import math

import numpy as np

from qcloak.circuit import GateInstance, GateKind, MeasurementClass, QuantumCircuit
from qcloak.obfuscation import GatePool, PoolEntry, random_plan

ALL_KINDS = list(GateKind)
POOLABLE = [k for k in GateKind if k.measurement_class is not MeasurementClass.SUPERPOSING]


def random_gate(rng: np.random.Generator, width: int, kinds=ALL_KINDS) -> GateInstance:
    fitting = [k for k in kinds if k.arity <= width]
    kind = fitting[int(rng.integers(len(fitting)))]
    qubits = tuple(int(q) for q in rng.choice(width, size=kind.arity, replace=False))
    params = tuple(float(rng.uniform(-2 * math.pi, 2 * math.pi)) for _ in range(kind.param_count))
    return GateInstance(kind, qubits, params)


def random_circuit(rng: np.random.Generator, width: int, depth: int, *, measure_all: bool = False) -> QuantumCircuit:
    """``depth`` gates from the full gate set, then measurements of a random qubit subset
    onto a random permutation of classical bits."""
    gates = [random_gate(rng, width) for _ in range(depth)]
    if measure_all:
        measured = list(range(width))
    else:
        m = int(rng.integers(1, width + 1))
        measured = sorted(int(q) for q in rng.choice(width, size=m, replace=False))
    clbits = rng.permutation(len(measured))
    return QuantumCircuit.build(width, gates, [(q, int(c)) for q, c in zip(measured, clbits)])


def random_pool(rng: np.random.Generator, max_arity: int) -> GatePool:
    kinds = [k for k in POOLABLE if k.arity <= max_arity]
    size = int(rng.integers(1, len(kinds) + 1))
    picked = rng.choice(len(kinds), size=size, replace=False)
    indices = rng.choice(50, size=size, replace=False)
    entries = {}
    for idx, j in zip(indices, picked):
        kind = kinds[int(j)]
        angle = float(rng.uniform(-math.pi, math.pi)) if kind.param_count else None
        entries[int(idx)] = PoolEntry(kind, angle)
    return GatePool(entries)


def random_triple(rng: np.random.Generator, min_width: int = 2, max_width: int = 8, max_depth: int = 20,
                  max_plan: int = 10):
    """(circuit, pool, plan) with plan operands on measured qubits."""
    width = int(rng.integers(min_width, max_width + 1))
    circuit = random_circuit(rng, width, int(rng.integers(0, max_depth + 1)))
    measured = [q for q, _ in circuit.measurements]
    pool = random_pool(rng, len(measured))
    plan = random_plan(pool, width, int(rng.integers(1, max_plan + 1)), int(rng.integers(2**63)), qubits=measured)
    return circuit, pool, plan
