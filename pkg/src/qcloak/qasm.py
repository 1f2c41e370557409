"""OpenQASM 2.0 subset: parse into :class:`QuantumCircuit` and emit back.

Supported: the ``OPENQASM 2.0;`` header, ``include "qelib1.inc";``, one
``qreg``, at most one ``creg``, the gate mnemonics in :class:`GateKind`
(``u1`` is an alias of ``p``), ``barrier`` (dropped with a warning) and
terminal ``measure``.  Angles are arithmetic over decimal literals and ``pi``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .circuit import CircuitError, GateInstance, GateKind, Measure, QuantumCircuit, validate


# Registers beyond this are rejected outright; simulation stops far earlier.
MAX_REGISTER = 1024


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1


@dataclass(frozen=True)
class ParseDiagnostic:
    span: SourceSpan
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.severity}: {self.message}"


class QasmError(ValueError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<sym>[;,()\[\]*/+\-])
""", re.VERBOSE)

_MNEMONICS = {k.mnemonic: k for k in GateKind}
_MNEMONICS["u1"] = GateKind.P
_MNEMONICS["cu1"] = GateKind.CP


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.col, max(len(self.text), 1))


class _Fail(Exception):
    def __init__(self, tok: _Tok, message: str):
        self.diag = ParseDiagnostic(tok.span, message)


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise _Fail(_Tok("bad", src[pos], line, pos - line_start + 1), f"unexpected character {src[pos]!r}")
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, text, line, pos - line_start + 1))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


@dataclass
class _Parser:
    toks: list[_Tok]
    pos: int = 0
    warnings: list[ParseDiagnostic] = field(default_factory=list)
    qreg: Optional[tuple[str, int]] = None
    creg: Optional[tuple[str, int]] = None

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def peek(self, ahead: int) -> _Tok:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def advance(self) -> _Tok:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text:
            raise _Fail(self.tok, f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> _Tok:
        if self.tok.kind != kind:
            raise _Fail(self.tok, f"expected {what}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    # angle expressions: expr := term (('+'|'-') term)*, term := unary (('*'|'/') unary)*
    def expr(self) -> float:
        value = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance()
            rhs = self.unary()
            if op.text == "/":
                if rhs == 0:
                    raise _Fail(op, "division by zero in angle")
                value /= rhs
            else:
                value *= rhs
        return value

    def unary(self) -> float:
        if self.tok.text == "-":
            self.advance()
            return -self.unary()
        if self.tok.text == "+":
            self.advance()
            return self.unary()
        t = self.tok
        if t.kind in ("int", "real"):
            self.advance()
            return float(t.text)
        if t.kind == "id" and t.text == "pi":
            self.advance()
            return math.pi
        if t.text == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        raise _Fail(t, f"expected an angle, found {t.text or 'end of input'!r}")

    def index(self, reg: Optional[tuple[str, int]], what: str) -> int:
        name_tok = self.expect_kind("id", f"{what} register name")
        if reg is None:
            raise _Fail(name_tok, f"no {what} register declared")
        if name_tok.text != reg[0]:
            raise _Fail(name_tok, f"unknown {what} register {name_tok.text!r}")
        self.expect("[")
        idx_tok = self.expect_kind("int", "register index")
        self.expect("]")
        idx = int(idx_tok.text)
        if idx >= reg[1]:
            raise _Fail(idx_tok, f"index {idx} out of range for {reg[0]}[{reg[1]}]")
        return idx

    def declaration(self, keyword: _Tok) -> tuple[str, int]:
        name = self.expect_kind("id", "register name").text
        self.expect("[")
        size_tok = self.expect_kind("int", "register size")
        self.expect("]")
        self.expect(";")
        size = int(size_tok.text)
        if size < 1:
            raise _Fail(size_tok, "register size must be positive")
        if size > MAX_REGISTER:
            raise _Fail(size_tok, f"register size {size} exceeds the {MAX_REGISTER}-bit limit")
        return name, size

    def program(self) -> QuantumCircuit:
        self.expect("OPENQASM")
        version = self.advance()
        if version.text not in ("2.0", "2"):
            raise _Fail(version, f"unsupported OpenQASM version {version.text!r}")
        self.expect(";")
        gates: list[tuple[GateInstance, _Tok]] = []
        measures: list[tuple[Measure, _Tok]] = []
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind != "id":
                raise _Fail(t, f"expected a statement, found {t.text!r}")
            if t.text == "include":
                self.advance()
                path = self.expect_kind("string", "include path")
                if path.text != '"qelib1.inc"':
                    raise _Fail(path, f"only qelib1.inc may be included, not {path.text}")
                self.expect(";")
            elif t.text == "qreg":
                self.advance()
                if self.qreg is not None:
                    raise _Fail(t, "only one qreg is supported")
                if gates or measures:
                    raise _Fail(t, "qreg must be declared before use")
                self.qreg = self.declaration(t)
            elif t.text == "creg":
                self.advance()
                if self.creg is not None:
                    raise _Fail(t, "only one creg is supported")
                self.creg = self.declaration(t)
            elif t.text == "barrier":
                self.advance()
                self.barrier_args()
                self.warnings.append(ParseDiagnostic(t.span, "barrier discarded", "warning"))
            elif t.text == "measure":
                self.advance()
                for q, c in self.measure_args():
                    measures.append((Measure(q, c), t))
            elif t.text in ("gate", "opaque", "if", "reset", "U", "CX"):
                raise _Fail(t, f"'{t.text}' is not supported")
            else:
                gates.append((self.gate_statement(), t))
                g, where = gates[-1]
                for m, _ in measures:
                    if m.qubit in g.qubits:
                        raise _Fail(where, f"gate on qubit {m.qubit} after it was measured")
        if self.qreg is None:
            raise _Fail(self.tok, "missing qreg declaration")
        circuit = QuantumCircuit(self.qreg[1], tuple(g for g, _ in gates) + tuple(m for m, _ in measures))
        problems = validate(circuit)
        if problems:
            # locate the offending measurement when we can
            where = self.tok
            for v in problems:
                k = v.position - len(gates)
                if 0 <= k < len(measures):
                    where = measures[k][1]
                    break
            raise _Fail(where, "; ".join(v.message for v in problems))
        return circuit

    def measure_args(self) -> list[tuple[int, int]]:
        # either "q[i] -> c[j]" or whole registers "q -> c"
        if self.peek(1).text != "[":
            qname = self.expect_kind("id", "quantum register name")
            self.expect("->")
            cname = self.expect_kind("id", "classical register name")
            self.expect(";")
            if self.qreg is None or qname.text != self.qreg[0]:
                raise _Fail(qname, f"unknown quantum register {qname.text!r}")
            if self.creg is None or cname.text != self.creg[0]:
                raise _Fail(cname, f"unknown classical register {cname.text!r}")
            if self.qreg[1] != self.creg[1]:
                raise _Fail(cname, f"register sizes differ: {self.qreg[1]} vs {self.creg[1]}")
            return [(i, i) for i in range(self.qreg[1])]
        q = self.index(self.qreg, "quantum")
        self.expect("->")
        c = self.index(self.creg, "classical")
        self.expect(";")
        return [(q, c)]

    def barrier_args(self) -> None:
        while True:
            name = self.expect_kind("id", "register name")
            if self.qreg is None or name.text != self.qreg[0]:
                raise _Fail(name, f"unknown quantum register {name.text!r}")
            if self.tok.text == "[":
                self.advance()
                idx = self.expect_kind("int", "register index")
                if int(idx.text) >= self.qreg[1]:
                    raise _Fail(idx, f"index {idx.text} out of range for {self.qreg[0]}[{self.qreg[1]}]")
                self.expect("]")
            if self.tok.text != ",":
                break
            self.advance()
        self.expect(";")

    def gate_statement(self) -> GateInstance:
        name = self.advance()
        kind = _MNEMONICS.get(name.text)
        if kind is None:
            raise _Fail(name, f"unknown gate '{name.text}'")
        params: list[float] = []
        if self.tok.text == "(":
            self.advance()
            if self.tok.text != ")":
                params.append(self.expr())
                while self.tok.text == ",":
                    self.advance()
                    params.append(self.expr())
            self.expect(")")
        if len(params) != kind.param_count:
            raise _Fail(name, f"'{name.text}' takes {kind.param_count} parameter(s), got {len(params)}")
        qubits = [self.index(self.qreg, "quantum")]
        while self.tok.text == ",":
            self.advance()
            qubits.append(self.index(self.qreg, "quantum"))
        self.expect(";")
        if len(qubits) != kind.arity:
            raise _Fail(name, f"'{name.text}' takes {kind.arity} qubit(s), got {len(qubits)}")
        if len(set(qubits)) != len(qubits):
            raise _Fail(name, f"duplicate qubit operand in '{name.text}'")
        if not all(math.isfinite(p) for p in params):
            raise _Fail(name, "angle is not finite")
        return GateInstance(kind, tuple(qubits), tuple(params))


def parse_with_diagnostics(source: Union[str, bytes]) -> tuple[Optional[QuantumCircuit], list[ParseDiagnostic]]:
    """Parse ``source``; never raises.  Returns ``(circuit or None, diagnostics)``."""
    if isinstance(source, (bytes, bytearray)):
        try:
            source = bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            return None, [ParseDiagnostic(SourceSpan(1, exc.start + 1), "source is not valid UTF-8")]
    try:
        toks = _tokenize(source)
        parser = _Parser(toks)
        circuit = parser.program()
    except _Fail as fail:
        return None, [fail.diag]
    except (CircuitError, ValueError, OverflowError, RecursionError) as exc:
        return None, [ParseDiagnostic(SourceSpan(1, 1), f"malformed program: {exc}")]
    return circuit, parser.warnings


def parse(source: Union[str, bytes]) -> QuantumCircuit:
    """Parse ``source`` or raise :class:`QasmError` carrying the diagnostics."""
    circuit, diags = parse_with_diagnostics(source)
    if circuit is None:
        raise QasmError(diags)
    return circuit


def _angle(x: float) -> str:
    return format(x, ".17g")


def emit(circuit: QuantumCircuit) -> str:
    """Canonical OpenQASM text; ``parse(emit(c)) == c`` for valid circuits."""
    problems = validate(circuit)
    if problems:
        raise CircuitError("; ".join(str(v) for v in problems))
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    if circuit.num_clbits:
        lines.append(f"creg c[{circuit.num_clbits}];")
    for g in circuit.gates:
        args = f"({', '.join(_angle(p) for p in g.params)})" if g.params else ""
        operands = ", ".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{g.kind.mnemonic}{args} {operands};")
    for q, c in circuit.measurements:
        lines.append(f"measure q[{q}] -> c[{c}];")
    return "\n".join(lines) + "\n"


def load(path) -> QuantumCircuit:
    with open(path, "rb") as fh:
        return parse(fh.read())


def dump(circuit: QuantumCircuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit(circuit))
