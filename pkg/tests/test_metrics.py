import pytest
from hypothesis import given, strategies as st

from qcloak.circuit import Counts
from qcloak.metrics import MetricError, evaluate, dfc, tvd

C = Counts.from_dict


def test_tvd_identical():
    a = C({"00": 500, "11": 524})
    assert tvd(a, a) == 0


def test_tvd_disjoint():
    assert tvd(C({"0": 1024}), C({"1": 1024})) == 1.0


def test_tvd_half():
    assert tvd(C({"00": 512, "01": 512}), C({"00": 1024})) == pytest.approx(0.5, abs=1e-15)


def test_dfc_all_correct():
    assert dfc(C({"101": 1024}), "101") == 1.0


def test_dfc_all_wrong():
    assert dfc(C({"110": 1024}), "101") == -1.0


def test_dfc_arithmetic():
    assert dfc(C({"101": 300, "000": 500, "111": 224}), "101") == pytest.approx(-0.1953125, abs=1e-15)


def test_unequal_shots_rejected():
    with pytest.raises(MetricError):
        tvd(C({"0": 10}), C({"0": 11}))


def test_dfc_rejects_empty_and_width_mismatch():
    with pytest.raises(MetricError):
        dfc(Counts({}, 0), "0")
    with pytest.raises(MetricError):
        dfc(C({"01": 4}), "1")


def test_evaluate_report():
    r = evaluate(C({"0": 4}), C({"1": 4}), "0")
    assert r.to_json() == {"tvd": 1.0, "dfc": -1.0, "correct_output": "0"}


hist = st.dictionaries(st.sampled_from(["000", "001", "010", "011", "100", "101", "110", "111"]),
                       st.integers(1, 50), min_size=1)


def _rescale(d, shots):
    # same-shot histogram with the same support
    keys = sorted(d)
    base = {k: 1 for k in keys}
    base[keys[0]] += shots - len(keys)
    return base


@given(hist, hist)
def test_tvd_bounds_and_symmetry(a, b):
    shots = max(sum(a.values()), sum(b.values()), 8)
    ca, cb = C(_rescale(a, shots)), C(_rescale(b, shots))
    t = tvd(ca, cb)
    assert 0 <= t <= 1 and t == tvd(cb, ca)
    flip = lambda c: C({k[::-1]: v for k, v in c.entries.items()})
    assert tvd(flip(ca), flip(cb)) == pytest.approx(t)


@given(hist, st.sampled_from(["000", "101", "111"]))
def test_dfc_bounds(a, correct):
    c = C(a)
    d = dfc(c, correct)
    assert -1 <= d <= 1
    if correct not in a:
        assert d <= 0
    assert (d == 1) == (set(a) == {correct})
