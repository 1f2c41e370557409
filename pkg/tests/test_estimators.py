import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from qcloak.benchmarks import gen_bv, gen_qaoa_maxcut
from qcloak.estimators import CircuitObfuscator, MockTranspiler, StatevectorSampler
from qcloak.qasm import emit
from qcloak.simulator import circuit_probabilities


def test_params_and_clone():
    est = CircuitObfuscator(num_gates=7, seed=3)
    assert est.get_params()["num_gates"] == 7
    assert clone(est).get_params() == est.get_params()
    assert MockTranspiler(basis="cx,rz,rx,x,p").get_params() == {"basis": "cx,rz,rx,x,p", "optimize": True}
    assert StatevectorSampler(shots=10).set_params(seed=5).seed == 5


def test_not_fitted():
    with pytest.raises(NotFittedError):
        CircuitObfuscator().transform(gen_bv()[0])


def test_pipeline_round_trip():
    c, out = gen_bv()
    obf = CircuitObfuscator(num_gates=5, seed=1).fit(c)
    compiled = MockTranspiler().fit_transform(obf.transform(c))
    counts = StatevectorSampler(shots=1024, seed=7).predict(compiled)
    assert obf.inverse_transform(counts).entries == {out: 1024}


def test_accepts_qasm_text_and_corrects_proba():
    c, _ = gen_qaoa_maxcut()
    obf = CircuitObfuscator(num_gates=6, seed=2).fit(emit(c))
    p = StatevectorSampler().predict_proba(obf.transform(c))
    assert np.max(np.abs(obf.correct_proba(p) - circuit_probabilities(c))) < 1e-12


def test_from_key():
    c, _ = gen_qaoa_maxcut()
    a = CircuitObfuscator(num_gates=5, seed=9).fit(c)
    b = CircuitObfuscator.from_key(a.key_string_, None, c)
    assert b.key_ == a.key_ and b.transform(c) == a.transform(c)


def test_width_mismatch():
    obf = CircuitObfuscator(seed=1).fit(gen_bv("11010")[0])
    with pytest.raises(ValueError):
        obf.transform(gen_bv("1")[0])
