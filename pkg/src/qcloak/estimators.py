"""scikit-learn style wrappers so the pipeline stages compose like transformers::

    obf = CircuitObfuscator(num_gates=5, seed=1).fit(circuit)
    compiled = MockTranspiler().fit_transform(obf.transform(circuit))
    counts = StatevectorSampler(shots=1024, seed=7).predict(compiled)
    fixed = obf.inverse_transform(counts)
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .circuit import Counts, QuantumCircuit
from .correction import correct_counts, correct_probabilities
from .keycodec import decode, encode
from .obfuscation import obfuscate, plan_from_json, random_plan
from .simulator import circuit_probabilities, sample
from .transpiler import DEFAULT_BASIS, BasisSet, transpile
from .validation import check_circuit_input, check_counts, check_pool


class CircuitObfuscator(TransformerMixin, BaseEstimator):
    """Draws (or takes) an encryptor plan in ``fit``; appends it in ``transform``.

    ``inverse_transform`` maps corrupted counts back to the original
    circuit's statistics using the fitted key.

    Parameters
    ----------
    pool : GatePool, dict or None
        Index -> gate map.  ``None`` uses the six-gate default pool.
    num_gates : int
        Encryptor gates to draw when ``plan`` is not given.
    seed : int
        Seed of the plan draw.
    plan : list of InsertionRecord or JSON-shaped list, optional
        Fixed insertion plan; overrides ``num_gates``/``seed``.
    measured_only : bool
        Draw operands from measured qubits only.  Records touching
        unmeasured qubits can be uncorrectable.
    """

    def __init__(self, pool=None, num_gates=5, seed=0, plan=None, measured_only=True):
        self.pool = pool
        self.num_gates = num_gates
        self.seed = seed
        self.plan = plan
        self.measured_only = measured_only

    def fit(self, X, y=None):
        circuit = check_circuit_input(X)
        self.pool_ = check_pool(self.pool)
        if self.plan is not None:
            plan = self.plan
            if plan and isinstance(plan[0], dict):
                plan = plan_from_json(plan)
            self.plan_ = list(plan)
        else:
            qubits = [q for q, _ in circuit.measurements] if self.measured_only else None
            self.plan_ = random_plan(self.pool_, circuit.num_qubits, self.num_gates, self.seed, qubits=qubits)
        _, self.key_ = obfuscate(circuit, self.pool_, self.plan_)
        self.n_qubits_ = circuit.num_qubits
        self.measurements_ = circuit.measurements
        return self

    @property
    def key_string_(self) -> str:
        check_is_fitted(self, "key_")
        return encode(self.key_)

    def transform(self, X) -> QuantumCircuit:
        check_is_fitted(self, "key_")
        circuit = check_circuit_input(X)
        if circuit.num_qubits != self.n_qubits_:
            raise ValueError(f"fitted on {self.n_qubits_} qubits, got {circuit.num_qubits}")
        return obfuscate(circuit, self.pool_, self.plan_)[0]

    def inverse_transform(self, counts) -> Counts:
        check_is_fitted(self, "key_")
        return correct_counts(check_counts(counts), self.key_, self.pool_, self.measurements_)

    def correct_proba(self, probs) -> np.ndarray:
        check_is_fitted(self, "key_")
        return correct_probabilities(probs, self.key_, self.pool_, self.measurements_)

    @classmethod
    def from_key(cls, key: str, pool, circuit) -> "CircuitObfuscator":
        """Rebuild a fitted corrector from a stored key string."""
        circuit = check_circuit_input(circuit)
        pool_ = check_pool(pool)
        parsed = decode(key, pool_, circuit.num_qubits)
        return cls(pool=pool_, plan=parsed.insertion_order()).fit(circuit)


class MockTranspiler(TransformerMixin, BaseEstimator):
    """Stateless lowering to ``basis`` followed by peephole optimisation."""

    def __init__(self, basis=",".join(DEFAULT_BASIS), optimize=True):
        self.basis = basis
        self.optimize = optimize

    def fit(self, X=None, y=None):
        self.basis_ = self.basis if isinstance(self.basis, BasisSet) else (
            BasisSet.parse(self.basis) if isinstance(self.basis, str) else BasisSet(self.basis))
        return self

    def transform(self, X) -> QuantumCircuit:
        check_is_fitted(self, "basis_")
        return transpile(check_circuit_input(X), self.basis_, optimize=self.optimize)


class StatevectorSampler(BaseEstimator):
    """Exact simulation; ``predict`` samples counts, ``predict_proba`` gives the distribution."""

    def __init__(self, shots=1024, seed=0):
        self.shots = shots
        self.seed = seed

    def fit(self, X=None, y=None):
        return self

    def predict_proba(self, X) -> np.ndarray:
        return circuit_probabilities(check_circuit_input(X))

    def predict(self, X) -> Counts:
        return sample(self.predict_proba(X), self.shots, self.seed)


__all__ = ["CircuitObfuscator", "MockTranspiler", "StatevectorSampler"]
