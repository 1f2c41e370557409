"""Key string codec.

Grammar (no whitespace, decimal integers without leading zeros)::

    key    := record ("@" record)*
    record := index "#" qubit ("|" qubit)*

Records appear in correction order, i.e. most recently inserted first.
"""
from __future__ import annotations

import re

from .obfuscation import GatePool, InsertionRecord, ObfuscationKey, PoolError, check_record

_INT = re.compile(r"0|[1-9][0-9]*")


class KeyFormatError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def encode(key: ObfuscationKey) -> str:
    return "@".join(
        f"{r.gate_index}#" + "|".join(str(q) for q in r.qubits) for r in key.records)


def _parse(text: str) -> list[tuple[int, tuple[int, ...], int]]:
    """Syntax-only pass: ``(index, qubits, offset)`` per record."""
    out = []
    pos = 0
    n = len(text)

    def number(where: str) -> int:
        nonlocal pos
        m = _INT.match(text, pos)
        if not m:
            raise KeyFormatError(f"expected {where}", pos)
        pos = m.end()
        if pos < n and text[pos].isdigit():
            raise KeyFormatError("leading zero in number", m.start())
        return int(m.group())

    while True:
        start = pos
        index = number("gate index")
        if pos >= n or text[pos] != "#":
            raise KeyFormatError("expected '#'", pos)
        pos += 1
        qubits = [number("qubit")]
        while pos < n and text[pos] == "|":
            pos += 1
            qubits.append(number("qubit"))
        out.append((index, tuple(qubits), start))
        if pos == n:
            return out
        if text[pos] != "@":
            raise KeyFormatError(f"unexpected character {text[pos]!r}", pos)
        pos += 1


def decode(text: str, pool: GatePool, width: int) -> ObfuscationKey:
    """Parse and validate ``text``; records come back in string (correction) order."""
    if text == "":
        return ObfuscationKey(())
    records = []
    for index, qubits, offset in _parse(text):
        record = InsertionRecord(index, qubits)
        try:
            check_record(record, pool, width)
        except PoolError as exc:
            raise KeyFormatError(str(exc), offset) from None
        records.append(record)
    return ObfuscationKey(tuple(records))


def read_key_file(path) -> str:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.endswith("\n"):
        text = text[:-1]
    return text
