"""Repetition code circuits and the raw/processed outcome-string conventions.

Raw strings look like ``"final roundT ... round1"``. Processed strings look
like ``"lL lR  B1 B2 ... B_{T+1}"``: the final readouts of code qubits
``n-1`` and ``0``, then the round-1 syndrome followed by the change of the
syndrome from each round to the next, the last block derived from the final
readout. Within every block the lowest index is rightmost.
"""

from __future__ import annotations

from dataclasses import dataclass

from repbench.sim import Circuit

Counts = dict[str, int]
LABELS = ("0", "1")


class LayoutError(ValueError):
    """An outcome string does not match the expected (n, T) layout."""


@dataclass
class RepetitionCode:
    """The logical-0 and logical-1 memory circuits for ``n`` repetitions and
    ``T`` syndrome-measurement rounds.

    Code qubits are ``0..n-1`` and link qubits ``n..2n-2``; link ``j`` checks
    the parity of code qubits ``j`` and ``j+1``.
    """

    n: int
    T: int
    circuit_0: Circuit
    circuit_1: Circuit
    code_qubits: list[int]
    link_qubits: list[int]

    @property
    def circuit(self) -> dict[str, Circuit]:
        return {"0": self.circuit_0, "1": self.circuit_1}

    @property
    def num_qubits(self) -> int:
        return 2 * self.n - 1

    def process_results(self, raw: dict[str, Counts]) -> dict[str, Counts]:
        return process_results(self, raw)


def _build_circuit(n: int, T: int, logical: str) -> Circuit:
    code_qubits = list(range(n))
    link_qubits = list(range(n, 2 * n - 1))
    qc = Circuit(2 * n - 1)
    offsets = [qc.add_register(f"round_{r}_link_bit", n - 1) for r in range(1, T + 1)]
    final = qc.add_register("code_bit", n)
    if logical == "1":
        for q in code_qubits:
            qc.x(q)
    for r in range(T):
        qc.barrier(*range(2 * n - 1))
        for j in range(n - 1):
            qc.cx(code_qubits[j], link_qubits[j])
            qc.cx(code_qubits[j + 1], link_qubits[j])
        for j in range(n - 1):
            qc.measure(link_qubits[j], offsets[r] + j)
            qc.reset(link_qubits[j])
    qc.barrier(*range(2 * n - 1))
    for j in range(n):
        qc.measure(code_qubits[j], final + j)
    return qc


def build(n: int, T: int) -> RepetitionCode:
    if n < 2:
        raise ValueError(f"need at least 2 repetitions, got n={n}")
    if T < 1:
        raise ValueError(f"need at least 1 syndrome round, got T={T}")
    return RepetitionCode(
        n=n,
        T=T,
        circuit_0=_build_circuit(n, T, "0"),
        circuit_1=_build_circuit(n, T, "1"),
        code_qubits=list(range(n)),
        link_qubits=list(range(n, 2 * n - 1)),
    )


def _xor(a: str, b: str) -> str:
    return "".join("1" if x != y else "0" for x, y in zip(a, b))


def derived_final_syndrome(final: str, n: int) -> str:
    """Adjacent parities of the final code-qubit readout.

    ``final`` is displayed with code qubit 0 rightmost, and so is the result:
    bit ``j`` (from the right) is ``code_j XOR code_{j+1}``.
    """
    if len(final) != n:
        raise LayoutError(f"final readout {final!r} should have {n} bits")
    return _xor(final[:-1], final[1:])


def split_raw(string: str, n: int, T: int | None = None) -> tuple[str, list[str]]:
    """Split a raw string into its final readout and its rounds, round 1 first."""
    blocks = string.split(" ")
    if T is not None and len(blocks) != T + 1:
        raise LayoutError(f"raw string {string!r}: expected {T + 1} blocks, got {len(blocks)}")
    if len(blocks) < 2:
        raise LayoutError(f"raw string {string!r}: expected at least one syndrome round")
    if len(blocks[0]) != n:
        raise LayoutError(f"raw string {string!r}: final block should have {n} bits")
    for block in blocks[1:]:
        if len(block) != n - 1:
            raise LayoutError(f"raw string {string!r}: syndrome blocks should have {n - 1} bits")
    if set(string) - {"0", "1", " "}:
        raise LayoutError(f"raw string {string!r}: contains characters other than 0, 1")
    return blocks[0], blocks[:0:-1]


def process_string(string: str, n: int, T: int) -> str:
    """Convert one raw string to the processed syndrome-change form.

    >>> process_string("111 00 10", 3, 2)
    '1 1  10 10 00'
    """
    final, rounds = split_raw(string, n, T)
    changes = [rounds[0]]
    for prev, cur in zip(rounds, rounds[1:]):
        changes.append(_xor(cur, prev))
    changes.append(_xor(derived_final_syndrome(final, n), rounds[-1]))
    return f"{final[0]} {final[-1]}  " + " ".join(changes)


def process_results(code: RepetitionCode, raw: dict[str, Counts]) -> dict[str, Counts]:
    processed = {}
    for label, counts in raw.items():
        out: Counts = {}
        for string, count in counts.items():
            key = process_string(string, code.n, code.T)
            out[key] = out.get(key, 0) + count
        processed[label] = out
    return processed


def unprocess_string(processed: str, n: int, T: int) -> str:
    """Inverse of :func:`process_string`.

    Rounds are running XORs of the change blocks; the final readout is
    rebuilt outward from code qubit 0 using the derived syndrome.
    """
    logical, blocks = split_processed(processed, n, T)
    rounds = []
    acc = "0" * (n - 1)
    for block in blocks[:T]:
        acc = _xor(acc, block)
        rounds.append(acc)
    derived = _xor(acc, blocks[T])
    bits = [logical[1]]
    for j in range(n - 1):
        bits.append("1" if (bits[-1] == "1") != (derived[n - 2 - j] == "1") else "0")
    final = "".join(reversed(bits))
    return " ".join([final] + rounds[::-1])


def split_processed(string: str, n: int, T: int) -> tuple[str, list[str]]:
    """Return ``(logical_pair, blocks)`` where ``logical_pair`` is ``lL + lR``."""
    if "  " not in string:
        raise LayoutError(f"processed string {string!r}: missing double space")
    head, tail = string.split("  ", 1)
    logical = head.split(" ")
    blocks = tail.split(" ")
    if len(logical) != 2 or any(len(c) != 1 for c in logical):
        raise LayoutError(f"processed string {string!r}: logical part must be two characters")
    if len(blocks) != T + 1 or any(len(b) != n - 1 for b in blocks):
        raise LayoutError(f"processed string {string!r}: expected {T + 1} blocks of {n - 1} bits")
    if set(string) - {"0", "1", " "}:
        raise LayoutError(f"processed string {string!r}: contains characters other than 0, 1")
    return logical[0] + logical[1], blocks


def infer_rounds(string: str, n: int) -> int:
    """Number of syndrome rounds implied by a raw string for ``n`` repetitions."""
    final, rounds = split_raw(string, n)
    return len(rounds)
