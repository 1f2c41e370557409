"""Benchmark circuit generators: BV, Grover, QAOA MaxCut, Shor-15 and a 2x2 HHL.

Every generator returns ``(circuit, correct_output)`` where the output is a
bitstring rendered with classical bit 0 rightmost.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import asin, gcd, isclose, pi, sqrt
from typing import Optional, Sequence

import numpy as np

from .circuit import GateInstance, GateKind, QuantumCircuit, gate
from .simulator import circuit_probabilities

K = GateKind

# 5-node MaxCut instance (edges of the IBM QAOA tutorial graph)
QAOA_EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 4), (1, 2), (2, 3), (3, 4))
# fixed single-layer angles; chosen by grid search so the maximum cuts dominate
QAOA_GAMMA = 0.35
QAOA_BETA = 1.15

BV_SECRET = "11010"
GROVER_MARKED = "0110"


def _bits(s: str) -> list[int]:
    """Bit of each qubit, qubit 0 = rightmost character."""
    if not s or set(s) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {s!r}")
    return [int(ch) for ch in reversed(s)]


def modal_output(circuit: QuantumCircuit, exclude_zero: bool = False, tol: float = 1e-9) -> str:
    """Most likely outcome of the exact distribution; ties go to the smallest bitstring."""
    probs = circuit_probabilities(circuit)
    if exclude_zero:
        probs = probs.copy()
        probs[0] = -1.0
    best = probs.max()
    idx = int(np.flatnonzero(probs >= best - tol)[0])
    return format(idx, f"0{circuit.num_clbits}b")


# --- Bernstein-Vazirani -----------------------------------------------------

def gen_bv(secret: str = BV_SECRET) -> tuple[QuantumCircuit, str]:
    """n data qubits plus one ancilla (the last qubit); CX fan-in oracle."""
    bits = _bits(secret)
    n = len(bits)
    if not 1 <= n <= 12:
        raise ValueError("secret length must be within 1..12")
    anc = n
    gates = [gate("x", anc), gate("h", anc)]
    gates += [gate("h", q) for q in range(n)]
    gates += [gate("cx", q, anc) for q in range(n) if bits[q]]
    gates += [gate("h", q) for q in range(n)]
    return QuantumCircuit.build(n + 1, gates, {q: q for q in range(n)}), secret


# --- multi-controlled helpers (ancilla-free, small n only) -------------------

def mcp(theta: float, controls: Sequence[int], target: int) -> list[GateInstance]:
    """Multi-controlled phase by recursive halving of the angle."""
    controls = list(controls)
    if not controls:
        return [gate("p", target, params=[theta])]
    if len(controls) == 1:
        return [gate("cp", controls[0], target, params=[theta])]
    *rest, last = controls
    return ([gate("cp", last, target, params=[theta / 2])]
            + mcx(rest, last)
            + [gate("cp", last, target, params=[-theta / 2])]
            + mcx(rest, last)
            + mcp(theta / 2, rest, target))


def mcx(controls: Sequence[int], target: int) -> list[GateInstance]:
    controls = list(controls)
    if len(controls) == 0:
        return [gate("x", target)]
    if len(controls) == 1:
        return [gate("cx", controls[0], target)]
    if len(controls) == 2:
        return [gate("ccx", controls[0], controls[1], target)]
    return [gate("h", target)] + mcp(pi, controls, target) + [gate("h", target)]


def mcz(qubits: Sequence[int]) -> list[GateInstance]:
    qubits = list(qubits)
    if len(qubits) == 1:
        return [gate("z", qubits[0])]
    if len(qubits) == 2:
        return [gate("cz", *qubits)]
    return mcp(pi, qubits[:-1], qubits[-1])


# --- Grover ----------------------------------------------------------------

def grover_iterations(n: int) -> int:
    return int(round(pi / 4 * sqrt(2 ** n)))


def grover_success_probability(n: int, iterations: int) -> float:
    theta = asin(2 ** (-n / 2))
    return float(np.sin((2 * iterations + 1) * theta) ** 2)


def gen_grover(marked: str = GROVER_MARKED, iterations: Optional[int] = None) -> tuple[QuantumCircuit, str]:
    bits = _bits(marked)
    n = len(bits)
    if not 2 <= n <= 4:
        raise ValueError("Grover instances support 2..4 qubits")
    k = grover_iterations(n) if iterations is None else int(iterations)
    qs = list(range(n))
    flips = [gate("x", q) for q in qs if not bits[q]]
    oracle = flips + mcz(qs) + flips
    diffuser = ([gate("h", q) for q in qs] + [gate("x", q) for q in qs] + mcz(qs)
                + [gate("x", q) for q in qs] + [gate("h", q) for q in qs])
    gates = [gate("h", q) for q in qs]
    for _ in range(k):
        gates += oracle + diffuser
    return QuantumCircuit.build(n, gates, {q: q for q in qs}), marked


# --- QAOA MaxCut -------------------------------------------------------------

def cut_value(bitstring: str, edges: Sequence[tuple[int, int]] = QAOA_EDGES) -> int:
    b = _bits(bitstring)
    return sum(b[i] != b[j] for i, j in edges)


def brute_force_maxcut(num_nodes: int = 5, edges: Sequence[tuple[int, int]] = QAOA_EDGES) -> tuple[int, list[str]]:
    """Best cut value and every bitstring achieving it."""
    strings = ["".join(t) for t in itertools.product("01", repeat=num_nodes)]
    values = {s: cut_value(s, edges) for s in strings}
    best = max(values.values())
    return best, sorted(s for s, v in values.items() if v == best)


def gen_qaoa_maxcut(gamma: float = QAOA_GAMMA, beta: float = QAOA_BETA,
                    edges: Sequence[tuple[int, int]] = QAOA_EDGES, num_nodes: int = 5) -> tuple[QuantumCircuit, str]:
    """Single-layer QAOA: H layer, CX-RZ-CX per edge, RX mixer."""
    qs = range(num_nodes)
    gates = [gate("h", q) for q in qs]
    for i, j in edges:
        gates += [gate("cx", i, j), gate("rz", j, params=[2 * gamma]), gate("cx", i, j)]
    gates += [gate("rx", q, params=[2 * beta]) for q in qs]
    circuit = QuantumCircuit.build(num_nodes, gates, {q: q for q in qs})
    return circuit, modal_output(circuit)


# --- Shor (order finding for a=7, N=15) --------------------------------------

SHOR_A, SHOR_N = 7, 15
SHOR_COUNTING = 3


def qft(qubits: Sequence[int], inverse: bool = False) -> list[GateInstance]:
    """QFT over ``qubits`` (first = least significant), including the final swaps."""
    qubits = list(qubits)
    m = len(qubits)
    gates: list[GateInstance] = []
    for j in reversed(range(m)):
        gates.append(gate("h", qubits[j]))
        for k in reversed(range(j)):
            gates.append(gate("cp", qubits[k], qubits[j], params=[pi / 2 ** (j - k)]))
    for i in range(m // 2):
        gates.append(gate("swap", qubits[i], qubits[m - 1 - i]))
    if not inverse:
        return gates
    out = []
    for g in reversed(gates):
        out.append(GateInstance(g.kind, g.qubits, tuple(-p for p in g.params)))
    return out


def controlled_mult_mod15(a: int, control: int, work: Sequence[int]) -> list[GateInstance]:
    """Controlled multiplication by ``a`` mod 15 on a 4-qubit work register.

    Multiplication by 2^k mod 15 is a cyclic bit rotation; multiplying by -1
    is a bitwise NOT.  Only the values used by order finding are supported.
    """
    w = list(work)
    if len(w) != 4:
        raise ValueError("work register must have 4 qubits")
    a %= 15
    # a = sign * 2^k (mod 15)
    for k in range(4):
        if pow(2, k, 15) == a:
            shift, negate = k, False
            break
        if (15 - pow(2, k, 15)) % 15 == a:
            shift, negate = k, True
            break
    else:
        raise ValueError(f"multiplier {a} is not +-2^k mod 15")
    gates: list[GateInstance] = []
    for _ in range(shift):
        # rotate left by one: bit i -> bit i+1
        for i in (2, 1, 0):
            gates.append(gate("cswap", control, w[i], w[i + 1]))
    if negate:
        gates += [gate("cx", control, q) for q in w]
    return gates


def gen_shor15(a: int = SHOR_A) -> tuple[QuantumCircuit, str]:
    """Order finding for ``a`` mod 15: 3 counting qubits (measured) + 4 work qubits."""
    m = SHOR_COUNTING
    counting = list(range(m))
    work = list(range(m, m + 4))
    gates = [gate("x", work[0])] + [gate("h", q) for q in counting]
    for j, c in enumerate(counting):
        gates += controlled_mult_mod15(pow(a, 2 ** j, 15), c, work)
    gates += qft(counting, inverse=True)
    circuit = QuantumCircuit.build(m + 4, gates, {q: q for q in counting})
    return circuit, modal_output(circuit, exclude_zero=True)


def order_from_measurement(value: int, num_bits: int = SHOR_COUNTING, modulus: int = SHOR_N) -> int:
    """Continued-fraction estimate of the order from a phase-register reading."""
    if value == 0:
        raise ValueError("a zero reading carries no order information")
    return Fraction(value, 2 ** num_bits).limit_denominator(modulus).denominator


def factors_from_order(a: int, r: int, n: int = SHOR_N) -> set[int]:
    if r % 2:
        return set()
    half = pow(a, r // 2, n)
    return {f for f in (gcd(half - 1, n), gcd(half + 1, n)) if f not in (1, n)}


# --- HHL ---------------------------------------------------------------------

HHL_MATRIX = ((1.0, -1 / 3), (-1 / 3, 1.0))


def _crx(theta: float, c: int, t: int) -> list[GateInstance]:
    return [gate("h", t), gate("rz", t, params=[theta / 2]), gate("cx", c, t),
            gate("rz", t, params=[-theta / 2]), gate("cx", c, t), gate("h", t)]


def _cry(theta: float, c: int, t: int) -> list[GateInstance]:
    return [gate("ry", t, params=[theta / 2]), gate("cx", c, t),
            gate("ry", t, params=[-theta / 2]), gate("cx", c, t)]


def _ccry(theta: float, c0: int, c1: int, t: int) -> list[GateInstance]:
    return (_cry(theta / 2, c1, t) + [gate("cx", c0, c1)] + _cry(-theta / 2, c1, t)
            + [gate("cx", c0, c1)] + _cry(theta / 2, c0, t))


def gen_hhl_2x2(matrix: Sequence[Sequence[float]] = HHL_MATRIX, b: Sequence[float] = (0.0, 1.0)) -> tuple[QuantumCircuit, str]:
    """4-qubit HHL for ``A = a*I + c*X`` with ``b`` a computational basis state.

    Qubits: 0 solution, 1-2 clock (1 least significant), 3 ancilla.  The
    evolution time maps the smaller eigenvalue to clock value 1; the larger
    must land on 2 or 3.  All four qubits are measured.
    """
    (a00, a01), (a10, a11) = matrix
    if not (isclose(a00, a11) and isclose(a01, a10)):
        raise ValueError("only matrices of the form a*I + c*X are supported")
    a, c = a00, a01
    lams = sorted((a + c, a - c))
    if lams[0] <= 0:
        raise ValueError("matrix must be positive definite")
    ratio = lams[1] / lams[0]
    clock_max = int(round(ratio))
    if not isclose(ratio, clock_max, abs_tol=1e-9) or clock_max > 3:
        raise ValueError("eigenvalue ratio must be 1, 2 or 3 for a 2-qubit clock")
    if tuple(b) not in ((0.0, 1.0), (1.0, 0.0), (0, 1), (1, 0)):
        raise ValueError("b must be |0> or |1>")
    sol, clock, anc = 0, (1, 2), 3
    t = 2 * pi / (4 * lams[0])

    def cu(power: int, ctrl: int, sign: int = 1) -> list[GateInstance]:
        # exp(i A t) = exp(i a t) RX(-2 c t)
        tau = sign * t * power
        out = [gate("p", ctrl, params=[a * tau])]
        if c:
            out += _crx(-2 * c * tau, ctrl, sol)
        return out

    gates: list[GateInstance] = []
    if b[1]:
        gates.append(gate("x", sol))
    gates += [gate("h", q) for q in clock]
    for j, q in enumerate(clock):
        gates += cu(2 ** j, q)
    gates += qft(clock, inverse=True)
    # eigenvalue inversion: clock value k -> ancilla amplitude 1/k
    angle = {k: 2 * asin(1 / k) for k in (1, 2, 3)}
    gates += _cry(angle[1], clock[0], anc) + _cry(angle[2], clock[1], anc)
    if clock_max == 3:
        gates += _ccry(angle[3] - angle[1] - angle[2], clock[0], clock[1], anc)
    gates += qft(clock)
    for j, q in reversed(list(enumerate(clock))):
        gates += cu(2 ** j, q, sign=-1)
    gates += [gate("h", q) for q in clock]
    circuit = QuantumCircuit.build(4, gates, {q: q for q in range(4)})
    return circuit, modal_output(circuit)


def hhl_solution_ratio(circuit: QuantumCircuit) -> float:
    """|x0/x1|^2 from the ancilla=1 post-selected marginal of the solution qubit."""
    probs = circuit_probabilities(circuit)
    idx = np.arange(probs.size)
    anc1 = (idx >> 3) & 1 == 1
    p0 = probs[anc1 & ((idx & 1) == 0)].sum()
    p1 = probs[anc1 & ((idx & 1) == 1)].sum()
    return float(p0 / p1)


def classical_solution_ratio(matrix: Sequence[Sequence[float]] = HHL_MATRIX, b: Sequence[float] = (0.0, 1.0)) -> float:
    x = np.linalg.solve(np.asarray(matrix, dtype=float), np.asarray(b, dtype=float))
    return float(abs(x[0]) ** 2 / abs(x[1]) ** 2)


GENERATORS = {
    "bv": gen_bv,
    "grover": gen_grover,
    "qaoa": gen_qaoa_maxcut,
    "shor": gen_shor15,
    "hhl": gen_hhl_2x2,
}
