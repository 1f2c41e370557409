import json

import pytest

from qcloak.benchmarks import gen_bv, gen_qaoa_maxcut
from qcloak.correction import correct_bitstring
from qcloak.keycodec import decode
from qcloak.harness import TrialError, run_experiment, run_trial, summarize, table
from qcloak.metrics import dfc
from qcloak.obfuscation import InsertionRecord as R, default_pool
from qcloak.simulator import circuit_probabilities, derive_seed, sample


def test_zero_gates_is_identity():
    c, out = gen_qaoa_maxcut()
    r = run_trial(c, out, default_pool(), 0, 1024, 11)
    assert r.tvd == 0 and r.sound and r.key == ""
    base = sample(circuit_probabilities(c), 1024, derive_seed(11, 1))
    assert r.dfc == dfc(base, out)


def test_bv_single_x():
    c, out = gen_bv("11010")
    r = run_trial(c, out, default_pool(), 1, 1024, 0, plan=[R(0, (0,))])
    assert (r.tvd, r.dfc) == (1.0, -1.0)
    assert r.key == "0#0" and r.sound and r.corrected_tvd == 0


def test_qaoa_seven_gates_sound():
    c, out = gen_qaoa_maxcut()
    for seed in range(10):
        assert run_trial(c, out, default_pool(), 7, 1024, seed).sound


def test_bv_values_are_extreme():
    # tvd is 1 exactly when the key's correction map moves the secret
    c, out = gen_bv("11010")
    pool = default_pool()
    moved = 0
    for seed in range(40):
        r = run_trial(c, out, pool, 5, 1024, seed)
        assert (r.tvd, r.dfc) in {(0.0, 1.0), (1.0, -1.0)}
        key = decode(r.key, pool, c.num_qubits)
        changed = correct_bitstring(out, key, pool, c.measurements) != out
        assert (r.tvd == 1.0) == changed
        moved += changed
    assert 0 < moved < 40


def test_trial_error_names_stage():
    c, out = gen_bv("11010")
    with pytest.raises(TrialError) as info:
        run_trial(c, out, default_pool(), 1, 1024, 0, plan=[R(9, (0,))], trial_index=4)
    assert info.value.stage == "obfuscate" and info.value.trial == 4


def test_single_trial_summary():
    s = run_experiment("grover", trials=1, shots=256)
    (r,) = s.results
    assert (s.median_tvd, s.median_dfc) == (r.tvd, r.dfc)


def test_deterministic_csv(tmp_path):
    a = run_experiment("qaoa", trials=8, master_seed=3, out_dir=str(tmp_path / "a"))
    run_experiment("qaoa", trials=8, master_seed=3, out_dir=str(tmp_path / "b"))
    ta, tb = (tmp_path / "a" / "trials.csv").read_bytes(), (tmp_path / "b" / "trials.csv").read_bytes()
    assert ta == tb
    assert ta.splitlines()[0] == b"trial,tvd,dfc,key"
    assert len(ta.splitlines()) == 9
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["algorithm"] == "qaoa" and summary["correction_soundness"] is True
    assert run_experiment("qaoa", trials=8, master_seed=4).trials_csv() != a.trials_csv()


def test_summary_order_independent():
    s = run_experiment("bv", trials=6)
    assert summarize("bv", list(reversed(s.results))).trials_csv() == s.trials_csv()
    assert "bv" in table([s])


def test_bad_arguments():
    with pytest.raises(ValueError):
        run_experiment("nope", trials=1)
    with pytest.raises(ValueError):
        run_experiment("bv", trials=0)
