"""Mock third-party compiler: basis decomposition plus peephole optimisation.

No routing is done; every qubit pair is assumed connected.
"""
from __future__ import annotations

import math
from math import pi
from typing import Callable, Iterable, Optional, Union

from .circuit import GateInstance, GateKind, QuantumCircuit, check_circuit

K = GateKind

DEFAULT_BASIS = ("cx", "rz", "rx", "x", "p")
ANGLE_EPS = 1e-12


class BasisError(ValueError):
    pass


def _g(kind: GateKind, *qubits: int, theta: Optional[float] = None) -> GateInstance:
    return GateInstance(kind, qubits, () if theta is None else (theta,))


# Each rule maps (qubits, params) to a replacement gate list.  Alternatives are
# tried in order; the first whose gates are all (recursively) reachable wins.
Rule = Callable[[tuple, tuple], list]

_RULES: dict[GateKind, list[Rule]] = {
    K.X: [lambda q, p: [_g(K.RX, q[0], theta=pi)],
          lambda q, p: [_g(K.H, q[0]), _g(K.P, q[0], theta=pi), _g(K.H, q[0])]],
    # Y = i X Z
    K.Y: [lambda q, p: [_g(K.Z, q[0]), _g(K.X, q[0])]],
    K.Z: [lambda q, p: [_g(K.P, q[0], theta=pi)], lambda q, p: [_g(K.RZ, q[0], theta=pi)]],
    K.S: [lambda q, p: [_g(K.P, q[0], theta=pi / 2)], lambda q, p: [_g(K.RZ, q[0], theta=pi / 2)]],
    K.SDG: [lambda q, p: [_g(K.P, q[0], theta=-pi / 2)], lambda q, p: [_g(K.RZ, q[0], theta=-pi / 2)]],
    K.T: [lambda q, p: [_g(K.P, q[0], theta=pi / 4)], lambda q, p: [_g(K.RZ, q[0], theta=pi / 4)]],
    K.TDG: [lambda q, p: [_g(K.P, q[0], theta=-pi / 4)], lambda q, p: [_g(K.RZ, q[0], theta=-pi / 4)]],
    K.P: [lambda q, p: [_g(K.RZ, q[0], theta=p[0])]],
    K.RZ: [lambda q, p: [_g(K.P, q[0], theta=p[0])]],
    K.H: [lambda q, p: [_g(K.RZ, q[0], theta=pi / 2), _g(K.RX, q[0], theta=pi / 2), _g(K.RZ, q[0], theta=pi / 2)],
          lambda q, p: [_g(K.P, q[0], theta=pi / 2), _g(K.RX, q[0], theta=pi / 2), _g(K.P, q[0], theta=pi / 2)]],
    K.RX: [lambda q, p: [_g(K.H, q[0]), _g(K.RZ, q[0], theta=p[0]), _g(K.H, q[0])]],
    K.RY: [lambda q, p: [_g(K.SDG, q[0]), _g(K.RX, q[0], theta=p[0]), _g(K.S, q[0])]],
    K.CX: [lambda q, p: [_g(K.H, q[1]), _g(K.CZ, *q), _g(K.H, q[1])]],
    K.CY: [lambda q, p: [_g(K.SDG, q[1]), _g(K.CX, *q), _g(K.S, q[1])]],
    K.CZ: [lambda q, p: [_g(K.H, q[1]), _g(K.CX, *q), _g(K.H, q[1])]],
    K.CP: [lambda q, p: [_g(K.P, q[0], theta=p[0] / 2), _g(K.CX, *q), _g(K.P, q[1], theta=-p[0] / 2),
                         _g(K.CX, *q), _g(K.P, q[1], theta=p[0] / 2)]],
    K.CS: [lambda q, p: [_g(K.CP, *q, theta=pi / 2)]],
    K.SWAP: [lambda q, p: [_g(K.CX, q[0], q[1]), _g(K.CX, q[1], q[0]), _g(K.CX, q[0], q[1])]],
    K.CCX: [lambda q, p: _toffoli(*q)],
    K.CSWAP: [lambda q, p: [_g(K.CX, q[2], q[1]), _g(K.CCX, q[0], q[1], q[2]), _g(K.CX, q[2], q[1])]],
}


def _toffoli(a: int, b: int, t: int) -> list[GateInstance]:
    """Six-CX Clifford+T network."""
    return [
        _g(K.H, t), _g(K.CX, b, t), _g(K.TDG, t), _g(K.CX, a, t), _g(K.T, t),
        _g(K.CX, b, t), _g(K.TDG, t), _g(K.CX, a, t), _g(K.T, b), _g(K.T, t),
        _g(K.H, t), _g(K.CX, a, b), _g(K.T, a), _g(K.TDG, b), _g(K.CX, a, b),
    ]


# output kinds of each rule, found by probing with dummy operands
def _rule_kinds(kind: GateKind, rule: Rule) -> frozenset:
    return frozenset(g.kind for g in rule(tuple(range(kind.arity)), (0.5,) * kind.param_count))


class BasisSet:
    """Target gate set.  Must be able to express every supported gate."""

    def __init__(self, allowed: Iterable[Union[str, GateKind]] = DEFAULT_BASIS):
        self.allowed = frozenset(a if isinstance(a, GateKind) else GateKind.from_name(a) for a in allowed)
        self._plan = _plan_rules(self.allowed)
        missing = [k.mnemonic for k in GateKind if k not in self._plan]
        if missing:
            raise BasisError(f"basis {self.names} cannot express {missing}")

    @classmethod
    def parse(cls, text: str) -> "BasisSet":
        return cls([t.strip() for t in text.split(",") if t.strip()])

    @property
    def names(self) -> list[str]:
        return sorted(k.mnemonic for k in self.allowed)

    def rule_for(self, kind: GateKind) -> Optional[Rule]:
        """Chosen rewrite for ``kind``; ``None`` when it is already in the basis."""
        return self._plan.get(kind)

    def __contains__(self, kind: GateKind) -> bool:
        return kind in self.allowed

    def __eq__(self, other):
        return isinstance(other, BasisSet) and self.allowed == other.allowed

    def __hash__(self):
        return hash(self.allowed)

    def __repr__(self) -> str:
        return f"BasisSet({self.names})"


def _plan_rules(allowed: frozenset) -> dict:
    """Pick one rule per reachable kind, using only strictly lower-rank kinds.

    Rank 0 is the basis itself; rank r+1 kinds have a rule built from kinds of
    rank <= r.  Choosing by rank guarantees the rewrite terminates.
    """
    rank = {k: 0 for k in allowed}
    plan: dict = {k: None for k in allowed}
    level = 0
    while True:
        level += 1
        new = {}
        for kind, rules in _RULES.items():
            if kind in rank:
                continue
            for rule in rules:
                if all(k in rank for k in _rule_kinds(kind, rule)):
                    new[kind] = rule
                    break
        if not new:
            return plan
        for kind, rule in new.items():
            rank[kind] = level
            plan[kind] = rule


def decompose(circuit: QuantumCircuit, basis: Optional[BasisSet] = None) -> QuantumCircuit:
    """Rewrite every gate into ``basis`` (default cx, rz, rx, x, p)."""
    basis = basis or BasisSet()
    check_circuit(circuit)
    out: list[GateInstance] = []

    def lower(g: GateInstance) -> None:
        if g.kind in basis:
            out.append(g)
            return
        rule = basis.rule_for(g.kind)
        if rule is None:
            raise BasisError(f"basis {basis.names} cannot express {g.kind.mnemonic}")
        for sub in rule(g.qubits, g.params):
            lower(sub)

    for g in circuit.gates:
        lower(g)
    return circuit.with_gates(out)


_SELF_INVERSE = {K.X, K.Y, K.Z, K.H, K.CX, K.CY, K.CZ, K.SWAP, K.CCX, K.CSWAP}
_MERGEABLE = {K.RX, K.RY, K.RZ, K.P, K.CP}
_SYMMETRIC = {K.SWAP, K.CZ, K.CP}


def _canonical(g: GateInstance) -> tuple:
    """Operand signature under which two gates are the same operation."""
    q = g.qubits
    if g.kind in _SYMMETRIC:
        return tuple(sorted(q))
    if g.kind is K.CCX:
        return tuple(sorted(q[:2])) + (q[2],)
    if g.kind is K.CSWAP:
        return (q[0],) + tuple(sorted(q[1:]))
    return q


def _wrap(theta: float) -> float:
    return math.remainder(theta, 2 * pi)


def _pass(gates: list[GateInstance]) -> tuple[list[GateInstance], bool]:
    """One sweep: cancel or merge each gate with its next neighbour on the same wires."""
    alive = list(gates)
    removed = [False] * len(alive)
    changed = False
    for i in range(len(alive)):
        if removed[i]:
            continue
        g = alive[i]
        if g.kind not in _SELF_INVERSE and g.kind not in _MERGEABLE:
            continue
        wires = set(g.qubits)
        j = next((j for j in range(i + 1, len(alive))
                  if not removed[j] and wires & set(alive[j].qubits)), None)
        if j is None:
            continue
        h = alive[j]
        if h.kind is not g.kind or set(h.qubits) != wires or _canonical(h) != _canonical(g):
            continue
        if g.kind in _SELF_INVERSE:
            removed[i] = removed[j] = True
        else:
            theta = _wrap(g.params[0] + h.params[0])
            removed[i] = True
            if abs(theta) <= ANGLE_EPS:
                removed[j] = True
            else:
                alive[j] = GateInstance(h.kind, h.qubits, (theta,))
        changed = True
    return [g for g, r in zip(alive, removed) if not r], changed


def peephole_optimize(circuit: QuantumCircuit) -> QuantumCircuit:
    """Cancel adjacent self-inverse pairs and merge same-axis rotations to a fixpoint."""
    check_circuit(circuit)
    gates = list(circuit.gates)
    changed = True
    while changed:
        gates, changed = _pass(gates)
    return circuit.with_gates(gates)


def transpile(circuit: QuantumCircuit, basis: Optional[BasisSet] = None, optimize: bool = True) -> QuantumCircuit:
    lowered = decompose(circuit, basis)
    return peephole_optimize(lowered) if optimize else lowered


def gate_counts(circuit: QuantumCircuit) -> dict[str, int]:
    out: dict[str, int] = {}
    for g in circuit.gates:
        out[g.kind.mnemonic] = out.get(g.kind.mnemonic, 0) + 1
    return out
