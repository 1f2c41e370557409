"""Repeated randomized obfuscation trials and their summary statistics."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .benchmarks import GENERATORS
from .circuit import QuantumCircuit, check_circuit
from .correction import correct_counts, correct_probabilities
from .keycodec import encode
from .metrics import dfc, tvd
from .obfuscation import GatePool, InsertionRecord, default_pool, obfuscate, random_plan
from .simulator import circuit_probabilities, derive_seed, sample
from .transpiler import BasisSet, transpile

log = logging.getLogger(__name__)

SOUNDNESS_TOL = 1e-9
DEFAULT_NUM_GATES = 5
DEFAULT_TRIALS = 100
DEFAULT_SHOTS = 1024


class TrialError(RuntimeError):
    def __init__(self, stage: str, trial: Optional[int], cause: Exception):
        where = f"trial {trial}, " if trial is not None else ""
        super().__init__(f"{where}stage {stage!r}: {cause}")
        self.stage = stage
        self.trial = trial
        self.cause = cause


@dataclass(frozen=True)
class TrialResult:
    trial_index: int
    tvd: float
    dfc: float
    key: str
    seed: int
    sound: bool = True
    corrected_tvd: float = 0.0


@dataclass
class ExperimentSummary:
    algorithm: str
    trials: int
    median_tvd: float
    median_dfc: float
    tvd_quartiles: tuple[float, float]
    dfc_quartiles: tuple[float, float]
    correction_soundness: bool
    correct_output: str = ""
    results: list[TrialResult] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("results")
        out["tvd_quartiles"] = list(self.tvd_quartiles)
        out["dfc_quartiles"] = list(self.dfc_quartiles)
        return out

    def trials_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["trial", "tvd", "dfc", "key"])
        for r in sorted(self.results, key=lambda r: r.trial_index):
            writer.writerow([r.trial_index, repr(r.tvd), repr(r.dfc), r.key])
        return buf.getvalue()


def run_trial(circuit: QuantumCircuit, correct_output: str, pool: GatePool, num_gates: int,
              shots: int, seed: int, *, plan: Optional[Sequence[InsertionRecord]] = None,
              basis: Optional[BasisSet] = None, optimize: bool = True, trial_index: int = 0) -> TrialResult:
    """One obfuscate -> transpile -> simulate -> score -> correct round.

    The plan draws operands from measured qubits only.  The original and the
    obfuscated circuit are sampled with the same seed, so an identity plan
    gives TVD 0 exactly.
    """
    stage = "validate"
    try:
        check_circuit(circuit)
        measured = [q for q, _ in circuit.measurements]
        plan_seed, sample_seed = derive_seed(seed, 0), derive_seed(seed, 1)
        stage = "plan"
        if plan is None:
            plan = random_plan(pool, circuit.num_qubits, num_gates, plan_seed, qubits=measured) if num_gates else []
        stage = "obfuscate"
        obf, key = obfuscate(circuit, pool, plan)
        stage = "transpile"
        compiled = transpile(obf, basis, optimize=optimize)
        stage = "simulate"
        p_orig = circuit_probabilities(circuit)
        p_obf = circuit_probabilities(compiled)
        orig_counts = sample(p_orig, shots, sample_seed)
        obf_counts = sample(p_obf, shots, sample_seed)
        stage = "metrics"
        t, d = tvd(orig_counts, obf_counts), dfc(obf_counts, correct_output)
        stage = "correct"
        fixed = correct_counts(obf_counts, key, pool, circuit.measurements)
        p_fixed = correct_probabilities(p_obf, key, pool, circuit.measurements)
        sound = bool(np.max(np.abs(p_fixed - p_orig)) < SOUNDNESS_TOL)
        return TrialResult(trial_index, t, d, encode(key), int(seed), sound, tvd(orig_counts, fixed))
    except Exception as exc:
        raise TrialError(stage, trial_index, exc) from exc


def trial_seed(master_seed: int, trial: int) -> int:
    return derive_seed(master_seed, 0x7172, trial)


def summarize(algorithm: str, results: Sequence[TrialResult], correct_output: str = "") -> ExperimentSummary:
    tvds = np.array([r.tvd for r in results])
    dfcs = np.array([r.dfc for r in results])
    q = lambda a: (float(np.percentile(a, 25)), float(np.percentile(a, 75)))
    return ExperimentSummary(
        algorithm=algorithm,
        trials=len(results),
        median_tvd=float(np.median(tvds)),
        median_dfc=float(np.median(dfcs)),
        tvd_quartiles=q(tvds),
        dfc_quartiles=q(dfcs),
        correction_soundness=all(r.sound for r in results),
        correct_output=correct_output,
        results=sorted(results, key=lambda r: r.trial_index),
    )


def run_experiment(algorithm: str, trials: int = DEFAULT_TRIALS, shots: int = DEFAULT_SHOTS,
                   num_gates: int = DEFAULT_NUM_GATES, pool: Optional[GatePool] = None, master_seed: int = 0,
                   *, basis: Optional[BasisSet] = None, optimize: bool = True,
                   out_dir: Optional[str] = None, circuit: Optional[QuantumCircuit] = None,
                   correct_output: Optional[str] = None) -> ExperimentSummary:
    """Run ``trials`` independent trials on a named benchmark (or a given circuit)."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    pool = pool or default_pool()
    if circuit is None:
        try:
            circuit, default_output = GENERATORS[algorithm]()
        except KeyError:
            raise ValueError(f"unknown algorithm {algorithm!r}; choose from {sorted(GENERATORS)}") from None
        correct_output = correct_output or default_output
    if correct_output is None:
        raise ValueError("correct_output is required for a custom circuit")
    basis = basis or BasisSet()
    results = [
        run_trial(circuit, correct_output, pool, num_gates, shots, trial_seed(master_seed, i),
                  basis=basis, optimize=optimize, trial_index=i)
        for i in range(trials)
    ]
    summary = summarize(algorithm, results, correct_output)
    if out_dir is not None:
        write_experiment(summary, out_dir)
    log.info("%s: median TVD %.4f, median DFC %.4f over %d trials",
             algorithm, summary.median_tvd, summary.median_dfc, trials)
    return summary


def write_experiment(summary: ExperimentSummary, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "trials.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(summary.trials_csv())
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary.to_json(), fh, indent=2)
        fh.write("\n")


def table(summaries: Sequence[ExperimentSummary]) -> str:
    """Plain-text median table."""
    lines = [f"{'Algorithm':<10} {'Median TVD':>10} {'Median DFC':>10} {'Sound':>6}"]
    for s in summaries:
        lines.append(f"{s.algorithm:<10} {s.median_tvd:>10.4f} {s.median_dfc:>10.4f} {str(s.correction_soundness):>6}")
    return "\n".join(lines)
