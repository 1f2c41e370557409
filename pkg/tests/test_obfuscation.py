import numpy as np
import pytest

from qcloak.benchmarks import gen_bv, gen_qaoa_maxcut
from qcloak.circuit import GateKind, Measure, gate
from qcloak.obfuscation import (
    GatePool,
    InsertionRecord,
    ObfuscationKey,
    PoolError,
    build_pool,
    default_pool,
    obfuscate,
    phase_pool,
    plan_from_json,
    plan_to_json,
    random_plan,
)
from qcloak.simulator import circuit_probabilities

R = InsertionRecord
QAOA_PLAN = [R(1, (2, 3)), R(5, (1,)), R(2, (3, 0)), R(3, (1, 4, 3)), R(2, (2, 3)), R(5, (1,)), R(2, (2, 1))]


def test_six_gate_pool():
    pool = build_pool([(0, "X"), (1, "CX"), (2, "SWAP"), (3, "CCX"), (4, "CSWAP"), (5, "S")])
    assert pool == default_pool()
    assert [pool[i].kind for i in range(6)] == [GateKind.X, GateKind.CX, GateKind.SWAP, GateKind.CCX,
                                               GateKind.CSWAP, GateKind.S]


@pytest.mark.parametrize("name", ["H", "rx", "ry"])
def test_superposing_rejected(name):
    with pytest.raises(PoolError, match="superposition"):
        build_pool([(0, name, 0.5) if name != "H" else (0, name)])


def test_duplicate_and_unknown():
    with pytest.raises(PoolError, match="duplicate"):
        build_pool([(0, "X"), (0, "Z")])
    with pytest.raises(PoolError):
        build_pool([(0, "v")])


def test_angles_required_for_phase_kinds():
    with pytest.raises(PoolError):
        build_pool([(0, "rz")])
    assert build_pool([(0, "rz", 0.25)])[0].angle == 0.25


def test_pool_json_round_trip():
    pool = build_pool([(3, "cp", 0.5), (7, "x")])
    assert GatePool.from_json(pool.to_json()) == pool


def test_single_choice_plan():
    pool = build_pool([(0, "X")])
    assert random_plan(pool, 1, 3, 99) == [R(0, (0,))] * 3


def test_plan_deterministic_and_valid():
    pool = default_pool()
    plan = random_plan(pool, 5, 7, 1234)
    assert plan == random_plan(pool, 5, 7, 1234)
    assert plan != random_plan(pool, 5, 7, 1235)
    for r in plan:
        assert len(r.qubits) == pool[r.gate_index].arity
        assert len(set(r.qubits)) == len(r.qubits) and all(0 <= q < 5 for q in r.qubits)


def test_plan_arity_exceeds_width():
    with pytest.raises(PoolError):
        random_plan(build_pool([(4, "CSWAP")]), 2, 1, 0)


def test_plan_is_roughly_uniform():
    plan = random_plan(default_pool(), 5, 6000, 7)
    freq = np.bincount([r.gate_index for r in plan], minlength=6) / 6000
    assert np.all(np.abs(freq - 1 / 6) < 0.03)
    qs = np.bincount([r.qubits[0] for r in plan if r.gate_index == 0], minlength=5)
    assert qs.min() > 0.6 * qs.mean()


def test_empty_plan_identity():
    c, _ = gen_bv()
    obf, key = obfuscate(c, default_pool(), [])
    assert obf == c and key.records == ()


def test_single_x_before_measurements():
    c, _ = gen_bv()
    obf, key = obfuscate(c, default_pool(), [R(0, (2,))])
    assert obf.gates == c.gates + (gate("x", 2),)
    assert obf.measurements == c.measurements
    assert isinstance(obf.instructions[len(obf.gates)], Measure)
    assert key.records == (R(0, (2,)),)


def test_key_is_reversed_plan():
    c, _ = gen_qaoa_maxcut()
    obf, key = obfuscate(c, default_pool(), QAOA_PLAN)
    assert list(reversed(key.records)) == QAOA_PLAN
    assert key.insertion_order() == QAOA_PLAN
    assert ObfuscationKey.from_plan(QAOA_PLAN) == key
    assert len(obf.gates) - len(c.gates) == len(QAOA_PLAN)
    assert obf.gates[: len(c.gates)] == c.gates


def test_invalid_records():
    c, _ = gen_qaoa_maxcut()
    for bad in [R(9, (0,)), R(1, (0,)), R(1, (0, 0)), R(0, (5,))]:
        with pytest.raises(PoolError):
            obfuscate(c, default_pool(), [bad])


def test_phase_only_pool_is_degenerate():
    c, _ = gen_qaoa_maxcut()
    pool = phase_pool()
    obf, _ = obfuscate(c, pool, random_plan(pool, c.num_qubits, 10, 3))
    assert np.max(np.abs(circuit_probabilities(obf) - circuit_probabilities(c))) < 1e-12


def test_plan_json():
    assert plan_from_json(plan_to_json(QAOA_PLAN)) == QAOA_PLAN
