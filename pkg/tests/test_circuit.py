import numpy as np
import pytest

from qcloak.circuit import (
    CircuitError,
    Counts,
    GateKind,
    Measure,
    MeasurementClass,
    QuantumCircuit,
    append_gate,
    classify,
    gate,
    validate,
)
from qcloak.benchmarks import gen_bv
from qcloak.simulator import gate_matrix


def test_append_to_empty_circuit():
    c = append_gate(QuantumCircuit(1), gate("x", 0))
    assert len(c.gates) == 1 and c.measurements == ()


def test_append_goes_before_measurements():
    c = QuantumCircuit.build(2, [gate("h", 0)], [(0, 0), (1, 1)])
    out = append_gate(c, gate("cx", 0, 1))
    assert out.instructions[:2] == (gate("h", 0), gate("cx", 0, 1))
    assert out.instructions[2:] == (Measure(0, 0), Measure(1, 1))
    assert c.gates == (gate("h", 0),)


def test_duplicate_qubit_rejected():
    with pytest.raises(CircuitError, match="duplicate"):
        gate("swap", 2, 2)


def test_append_out_of_range():
    with pytest.raises(CircuitError):
        append_gate(QuantumCircuit(2), gate("x", 2))


@pytest.mark.parametrize("name, cls", [
    ("x", MeasurementClass.BASIS_PERMUTING),
    ("s", MeasurementClass.PHASE_ONLY),
    ("h", MeasurementClass.SUPERPOSING),
    ("rz", MeasurementClass.PHASE_ONLY),
    ("rx", MeasurementClass.SUPERPOSING),
    ("ry", MeasurementClass.SUPERPOSING),
    ("cswap", MeasurementClass.BASIS_PERMUTING),
])
def test_classify(name, cls):
    assert classify(GateKind.from_name(name)) is cls


@pytest.mark.parametrize("kind", list(GateKind))
def test_class_matches_matrix_structure(kind):
    params = [0.7] * kind.param_count
    u = gate_matrix(kind, params)
    assert np.allclose(u.conj().T @ u, np.eye(u.shape[0]))
    mag = np.abs(u)
    is_diag = np.allclose(u, np.diag(np.diag(u)))
    is_perm = np.allclose(mag.sum(0), 1) and np.allclose(mag.sum(1), 1) and set(np.round(mag.ravel(), 12)) <= {0.0, 1.0}
    cls = classify(kind)
    if cls is MeasurementClass.PHASE_ONLY:
        assert is_diag
    elif cls is MeasurementClass.BASIS_PERMUTING:
        assert is_perm and not is_diag
    else:
        assert not is_perm


def test_aliases():
    assert GateKind.from_name("CNOT") is GateKind.CX
    assert GateKind.from_name("toffoli") is GateKind.CCX
    assert GateKind.from_name("fredkin") is GateKind.CSWAP
    assert GateKind.from_name("u1") is GateKind.P
    with pytest.raises(CircuitError):
        GateKind.from_name("v")


def test_operand_roles():
    g = gate("ccx", 1, 4, 3)
    assert g.controls == (1, 4) and g.targets == (3,)
    g = gate("cswap", 0, 2, 1)
    assert g.controls == (0,) and g.targets == (2, 1)


def test_param_count_checked():
    with pytest.raises(CircuitError):
        gate("rz", 0)
    with pytest.raises(CircuitError):
        gate("x", 0, params=[1.0])


def test_validate_bv_clean():
    assert validate(gen_bv("11010")[0]) == []


def test_gate_after_measure():
    c = QuantumCircuit(2, (gate("h", 0), Measure(0, 0), gate("x", 1)))
    assert [v.kind for v in validate(c)] == ["terminal measurement"]


def test_clbit_reuse():
    c = QuantumCircuit.build(2, [], [(0, 0), (1, 0)])
    assert "classical bit reuse" in [v.kind for v in validate(c)]


def test_other_violations():
    kinds = lambda c: {v.kind for v in validate(c)}
    assert "qubit range" in kinds(QuantumCircuit.build(2, [gate("x", 3)]))
    assert "qubit remeasured" in kinds(QuantumCircuit.build(2, [], [(0, 0), (0, 1)]))
    assert "classical bits not contiguous" in kinds(QuantumCircuit.build(2, [], [(0, 0), (1, 2)]))


def test_counts_validation():
    with pytest.raises(CircuitError):
        Counts({"0": 1, "10": 1}, 2)
    with pytest.raises(CircuitError):
        Counts({"0": 3}, 4)
    with pytest.raises(CircuitError):
        Counts({"2": 1}, 1)


def test_counts_json_round_trip():
    c = Counts.from_dict({"01": 3, "10": 5})
    assert c.to_json() == {"shots": 8, "counts": {"01": 3, "10": 5}}
    assert Counts.from_json(c.to_json()) == c
    assert Counts.from_json({"01": 3, "10": 5}) == c
    assert c.num_bits == 2 and c.get("11") == 0
