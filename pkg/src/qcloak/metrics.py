"""Obfuscation strength metrics over count histograms."""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .circuit import Counts


class MetricError(ValueError):
    pass


def _key_length(counts: Counts) -> int | None:
    return counts.num_bits if counts.entries else None


def tvd(orig: Counts, obfus: Counts) -> float:
    """Total variation distance between two equal-shot histograms.

    ``sum_i |obfus_i - orig_i| / (2 * shots)`` over the union of outcomes;
    missing outcomes count as zero.
    """
    if orig.shots != obfus.shots:
        raise MetricError(f"shot counts differ: {orig.shots} vs {obfus.shots}")
    la, lb = _key_length(orig), _key_length(obfus)
    if la is not None and lb is not None and la != lb:
        raise MetricError(f"bitstring lengths differ: {la} vs {lb}")
    if orig.shots == 0:
        raise MetricError("histograms are empty")
    keys = set(orig.entries) | set(obfus.entries)
    diff = sum(abs(obfus.get(k) - orig.get(k)) for k in keys)
    return diff / (2 * orig.shots)


def dfc(counts: Counts, correct: str) -> float:
    """Degree of functional corruption: (hits on ``correct`` - best wrong outcome) / shots."""
    if counts.shots < 1:
        raise MetricError("DFC is undefined for an empty histogram")
    width = _key_length(counts)
    if width is not None and width != len(correct):
        raise MetricError(f"correct output {correct!r} has length {len(correct)}, counts use {width}")
    wrong = max((v for k, v in counts.entries.items() if k != correct), default=0)
    return (counts.get(correct) - wrong) / counts.shots


@dataclass(frozen=True)
class MetricReport:
    tvd: float
    dfc: float
    correct_output: str

    def to_json(self) -> dict:
        return asdict(self)


def evaluate(orig: Counts, obfus: Counts, correct_output: str) -> MetricReport:
    return MetricReport(tvd(orig, obfus), dfc(obfus, correct_output), correct_output)
