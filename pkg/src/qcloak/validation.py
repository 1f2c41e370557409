"""Input coercion helpers used at the estimator and CLI boundaries."""
from __future__ import annotations

import json
import os
from typing import Mapping, Union

from .circuit import Counts, QuantumCircuit, check_circuit
from .obfuscation import GatePool, build_pool, default_pool
from .qasm import parse

CircuitLike = Union[QuantumCircuit, str, bytes]


def check_circuit_input(obj: CircuitLike) -> QuantumCircuit:
    """Accept a circuit, OpenQASM text/bytes, or a path to a ``.qasm`` file."""
    if isinstance(obj, QuantumCircuit):
        return check_circuit(obj)
    if isinstance(obj, (bytes, bytearray)):
        return parse(obj)
    if isinstance(obj, (str, os.PathLike)):
        text = os.fspath(obj)
        if "OPENQASM" not in text and os.path.isfile(text):
            with open(text, "rb") as fh:
                return parse(fh.read())
        return parse(text)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a quantum circuit")


def check_counts(obj: Union[Counts, Mapping]) -> Counts:
    """Accept :class:`Counts`, the counts JSON object, or a plain bitstring -> count map."""
    if isinstance(obj, Counts):
        return obj
    if isinstance(obj, Mapping):
        return Counts.from_json(obj)
    raise TypeError(f"cannot interpret {type(obj).__name__} as counts")


def check_pool(obj: Union[None, GatePool, Mapping, list, str]) -> GatePool:
    """``None`` gives the default six-gate pool; JSON text, dicts and spec lists are accepted."""
    if obj is None:
        return default_pool()
    if isinstance(obj, GatePool):
        return obj
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, Mapping):
        return GatePool.from_json(obj)
    return build_pool(obj)
