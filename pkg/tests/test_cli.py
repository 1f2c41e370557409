import json
import os
import subprocess
import sys

import pytest

from qcloak.benchmarks import gen_qaoa_maxcut
from qcloak.cli import main
from qcloak.obfuscation import default_pool
from qcloak.qasm import dump


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    dump(gen_qaoa_maxcut()[0], "c.qasm")
    (tmp_path / "pool.json").write_text(json.dumps(default_pool().to_json()))
    return tmp_path


def test_full_pipeline(work, capsys):
    assert main(["obfuscate", "--in", "c.qasm", "--pool", "pool.json", "--num-gates", "6", "--seed", "4",
                 "--out", "obf.qasm", "--key", "key.txt"]) == 0
    assert main(["transpile", "--in", "obf.qasm", "--out", "comp.qasm"]) == 0
    assert main(["simulate", "--in", "comp.qasm", "--shots", "1024", "--seed", "5", "--out", "obf.json",
                 "--probs-out", "p.json"]) == 0
    assert main(["simulate", "--in", "c.qasm", "--shots", "1024", "--seed", "5", "--out", "orig.json"]) == 0
    assert main(["correct", "--counts", "obf.json", "--key", "key.txt", "--pool", "pool.json", "--in", "obf.qasm",
                 "--out", "fixed.json"]) == 0
    assert main(["evaluate", "--orig", "orig.json", "--obfus", "fixed.json", "--correct-output", "01001",
                 "--out", "report.json"]) == 0
    report = json.loads((work / "report.json").read_text())
    assert set(report) == {"tvd", "dfc", "correct_output"}
    fixed = json.loads((work / "fixed.json").read_text())
    assert fixed["shots"] == 1024
    assert len(json.loads((work / "p.json").read_text())) == 32


def test_plan_file_matches_reference_key(work):
    plan = [{"index": 1, "qubits": [2, 3]}, {"index": 5, "qubits": [1]}, {"index": 2, "qubits": [3, 0]},
            {"index": 3, "qubits": [1, 4, 3]}, {"index": 2, "qubits": [2, 3]}, {"index": 5, "qubits": [1]},
            {"index": 2, "qubits": [2, 1]}]
    (work / "plan.json").write_text(json.dumps(plan))
    assert main(["obfuscate", "--in", "c.qasm", "--plan", "plan.json", "--out", "o.qasm", "--key", "k.txt"]) == 0
    assert (work / "k.txt").read_text().strip() == "2#2|1@5#1@2#2|3@3#1|4|3@2#3|0@5#1@1#2|3"


def test_key_permission_warning(work, capsys):
    os.umask(0o022)
    main(["obfuscate", "--in", "c.qasm", "--out", "o.qasm", "--key", "k.txt"])
    assert "readable" in capsys.readouterr().err


def test_exit_codes(work, capsys):
    (work / "bad.qasm").write_text("OPENQASM 2.0; qreg q[1]; v q[0];")
    assert main(["transpile", "--in", "bad.qasm", "--out", "x.qasm"]) == 2
    assert "unknown gate 'v'" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        main(["transpile"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 1
    (work / "k.txt").write_text("9#0\n")
    dump(gen_qaoa_maxcut()[0], "o.qasm")
    (work / "o.json").write_text(json.dumps({"shots": 1, "counts": {"00000": 1}}))
    assert main(["correct", "--counts", "o.json", "--key", "k.txt", "--in", "o.qasm", "--out", "f.json"]) == 2
    assert main(["transpile", "--in", "c.qasm", "--basis", "cx,x", "--out", "y.qasm"]) == 2


def test_bench_writes_outputs(work, capsys):
    assert main(["bench", "--algo", "bv", "--trials", "4", "--out-dir", "res"]) == 0
    assert (work / "res" / "trials.csv").read_text().startswith("trial,tvd,dfc,key\n")
    assert json.loads((work / "res" / "summary.json").read_text())["trials"] == 4
    assert "bv" in capsys.readouterr().out


def test_module_entry_point(work):
    proc = subprocess.run([sys.executable, "-m", "qcloak", "evaluate", "--orig", "nope.json", "--obfus", "x",
                           "--correct-output", "0"], capture_output=True, text=True)
    assert proc.returncode == 1
