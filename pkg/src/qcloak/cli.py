"""Command line entry point: ``qcloak <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 validation/parse error,
3 soundness-check failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import stat
import sys
from typing import Optional, Sequence

from . import qasm
from .benchmarks import GENERATORS
from .circuit import CircuitError, Counts
from .correction import CorrectionError, correct_counts
from .harness import DEFAULT_NUM_GATES, DEFAULT_SHOTS, DEFAULT_TRIALS, TrialError, run_experiment, table, write_experiment
from .keycodec import KeyFormatError, decode, encode, read_key_file
from .metrics import MetricError, evaluate
from .obfuscation import GatePool, PoolError, default_pool, obfuscate, plan_from_json, random_plan
from .simulator import circuit_probabilities, sample
from .transpiler import DEFAULT_BASIS, BasisError, BasisSet, transpile

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_UNSOUND = 0, 1, 2, 3

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _load_pool(path: Optional[str]) -> GatePool:
    return default_pool() if path is None else GatePool.from_json(_read_json(path))


def _write_key(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    mode = os.stat(path).st_mode
    if mode & (stat.S_IROTH | stat.S_IRGRP):
        print(f"warning: key file {path} is readable by other users; it is the secret needed "
              "to recover results (consider chmod 600)", file=sys.stderr)


def cmd_obfuscate(args) -> int:
    circuit = qasm.load(args.input)
    pool = _load_pool(args.pool)
    if args.plan:
        plan = plan_from_json(_read_json(args.plan))
    else:
        measured = [q for q, _ in circuit.measurements]
        qubits = None if args.any_qubit else measured
        plan = random_plan(pool, circuit.num_qubits, args.num_gates, args.seed, qubits=qubits)
    obf, key = obfuscate(circuit, pool, plan)
    qasm.dump(obf, args.out)
    _write_key(args.key, encode(key))
    return EXIT_OK


def cmd_transpile(args) -> int:
    circuit = qasm.load(args.input)
    compiled = transpile(circuit, BasisSet.parse(args.basis), optimize=not args.no_opt)
    qasm.dump(compiled, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    circuit = qasm.load(args.input)
    probs = circuit_probabilities(circuit)
    _write_json(args.out, sample(probs, args.shots, args.seed).to_json())
    if args.probs_out:
        _write_json(args.probs_out, [float(p) for p in probs])
    return EXIT_OK


def cmd_correct(args) -> int:
    circuit = qasm.load(args.input)
    pool = _load_pool(args.pool)
    key = decode(read_key_file(args.key), pool, circuit.num_qubits)
    counts = Counts.from_json(_read_json(args.counts))
    _write_json(args.out, correct_counts(counts, key, pool, circuit.measurements).to_json())
    return EXIT_OK


def cmd_evaluate(args) -> int:
    orig = Counts.from_json(_read_json(args.orig))
    obfus = Counts.from_json(_read_json(args.obfus))
    report = evaluate(orig, obfus, args.correct_output)
    text = json.dumps(report.to_json())
    if args.out:
        _write_json(args.out, report.to_json())
    else:
        print(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    algos = sorted(GENERATORS) if args.algo == "all" else [args.algo]
    pool = _load_pool(args.pool)
    basis = BasisSet.parse(args.basis)
    summaries = []
    for algo in algos:
        summary = run_experiment(algo, args.trials, args.shots, args.num_gates, pool, args.seed,
                                 basis=basis, optimize=not args.no_opt)
        summaries.append(summary)
        if args.out_dir:
            write_experiment(summary, args.out_dir if len(algos) == 1 else os.path.join(args.out_dir, algo))
    if args.out_dir and len(algos) > 1:
        os.makedirs(args.out_dir, exist_ok=True)
        _write_json(os.path.join(args.out_dir, "summary.json"), [s.to_json() for s in summaries])
    print(table(summaries))
    return EXIT_OK if all(s.correction_soundness for s in summaries) else EXIT_UNSOUND


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcloak", description="Quantum circuit obfuscation with classical key-based correction.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("obfuscate", help="append encryptor gates and write the key")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pool", help="pool JSON (default: six-gate pool)")
    p.add_argument("--plan", help="plan JSON; overrides --num-gates/--seed")
    p.add_argument("--num-gates", type=int, default=DEFAULT_NUM_GATES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--any-qubit", action="store_true", help="draw operands from all qubits, not only measured ones")
    p.add_argument("--out", required=True)
    p.add_argument("--key", required=True)
    p.set_defaults(func=cmd_obfuscate)

    p = sub.add_parser("transpile", help="lower to a basis and optimise")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--basis", default=",".join(DEFAULT_BASIS))
    p.add_argument("--no-opt", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_transpile)

    p = sub.add_parser("simulate", help="sample measurement counts")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--probs-out", help="also write the exact probability vector")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("correct", help="undo encryptor gates on measured counts")
    p.add_argument("--counts", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--pool")
    p.add_argument("--in", dest="input", required=True, help="obfuscated circuit (for its measurement map)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("evaluate", help="TVD and DFC between two histograms")
    p.add_argument("--orig", required=True)
    p.add_argument("--obfus", required=True)
    p.add_argument("--correct-output", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="repeated randomized trials on benchmark circuits")
    p.add_argument("--algo", choices=sorted(GENERATORS) + ["all"], default="all")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    p.add_argument("--num-gates", type=int, default=DEFAULT_NUM_GATES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pool")
    p.add_argument("--basis", default=",".join(DEFAULT_BASIS))
    p.add_argument("--no-opt", action="store_true")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except qasm.QasmError as exc:
        print(f"parse error:\n{exc}", file=sys.stderr)
        return EXIT_INVALID
    except TrialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CircuitError, PoolError, KeyFormatError, CorrectionError, MetricError, BasisError,
            json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
