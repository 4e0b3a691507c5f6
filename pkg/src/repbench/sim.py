"""Bit-level simulation of Z-basis-diagonal circuits.

Only X, CX, measure, reset and barrier are supported. Under this gate set a
qubit is fully described by one classical bit, so Pauli noise reduces to bit
flips: X and Y flip the bit, Z and I leave it alone.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from repbench import _backend


class CircuitError(ValueError):
    """Raised for malformed circuits, instructions or error locations."""


@dataclass(frozen=True)
class XGate:
    qubit: int


@dataclass(frozen=True)
class CXGate:
    control: int
    target: int


@dataclass(frozen=True)
class Measure:
    qubit: int
    clbit: int


@dataclass(frozen=True)
class Reset:
    qubit: int


@dataclass(frozen=True)
class Barrier:
    qubits: tuple[int, ...] = ()


Instruction = Union[XGate, CXGate, Measure, Reset, Barrier]

# opcodes shared with the kernels
OP_X, OP_CX, OP_MEASURE, OP_RESET = 0, 1, 2, 3


def touched_qubits(inst: Instruction) -> tuple[int, ...]:
    """Qubits an instruction acts on. Barriers act on nothing."""
    if isinstance(inst, XGate):
        return (inst.qubit,)
    if isinstance(inst, CXGate):
        return (inst.control, inst.target)
    if isinstance(inst, (Measure, Reset)):
        return (inst.qubit,)
    if isinstance(inst, Barrier):
        return ()
    raise CircuitError(f"unsupported instruction: {inst!r}")


@dataclass
class Circuit:
    """An ordered instruction list over ``num_qubits`` qubits.

    Classical bits are allocated register by register, in the order the
    registers were added: the first register owns clbits ``0..size-1`` and
    so on.
    """

    num_qubits: int
    registers: list[tuple[str, int]] = field(default_factory=list)
    instructions: list[Instruction] = field(default_factory=list)

    @property
    def num_clbits(self) -> int:
        return sum(size for _, size in self.registers)

    def add_register(self, name: str, size: int) -> int:
        """Append a classical register and return the clbit offset of its first bit."""
        if size < 1:
            raise CircuitError(f"register {name!r} must have positive size")
        if any(name == existing for existing, _ in self.registers):
            raise CircuitError(f"duplicate register name {name!r}")
        offset = self.num_clbits
        self.registers.append((name, size))
        return offset

    def append(self, inst: Instruction) -> None:
        self._check(inst)
        self.instructions.append(inst)

    def x(self, qubit: int) -> None:
        self.append(XGate(qubit))

    def cx(self, control: int, target: int) -> None:
        self.append(CXGate(control, target))

    def measure(self, qubit: int, clbit: int) -> None:
        self.append(Measure(qubit, clbit))

    def reset(self, qubit: int) -> None:
        self.append(Reset(qubit))

    def barrier(self, *qubits: int) -> None:
        self.append(Barrier(tuple(qubits)))

    def count_ops(self) -> Counter:
        return Counter(type(inst).__name__ for inst in self.instructions)

    def _check(self, inst: Instruction) -> None:
        qubits = inst.qubits if isinstance(inst, Barrier) else touched_qubits(inst)
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise CircuitError(f"qubit {q} out of range in {inst!r}")
        if isinstance(inst, CXGate) and inst.control == inst.target:
            raise CircuitError(f"control equals target in {inst!r}")
        if isinstance(inst, Measure) and not 0 <= inst.clbit < self.num_clbits:
            raise CircuitError(f"clbit {inst.clbit} out of range in {inst!r}")

    def validate(self) -> None:
        for inst in self.instructions:
            self._check(inst)


@dataclass(frozen=True)
class NoiseModel:
    """Measurement record flips with probability ``rho_meas``; depolarizing
    noise of strength ``rho_gate`` after every X and on both qubits of every CX.

    Depolarizing with strength ``rho_gate`` applies X, Y, Z each with
    probability ``rho_gate / 4``, so the bit flips with probability
    ``rho_gate / 2``. Reset and barrier are noiseless.
    """

    rho_meas: float = 0.0
    rho_gate: float = 0.0

    def __post_init__(self):
        for name in ("rho_meas", "rho_gate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    @property
    def gate_flip(self) -> float:
        return self.rho_gate / 2.0

    @property
    def is_noiseless(self) -> bool:
        return self.rho_meas == 0.0 and self.rho_gate == 0.0


PRE_CIRCUIT = -1
PAULIS = ("X", "Y", "Z")
RECORD_FLIP = "flip"


@dataclass(frozen=True, order=True)
class ErrorLocation:
    """A single fault: a Pauli on ``qubit`` right after instruction
    ``position`` (``PRE_CIRCUIT`` for before the first instruction), or a
    flipped measurement record (``kind == "flip"``) of the Measure at
    ``position``.
    """

    position: int
    kind: str
    qubit: int | None = None

    def __str__(self) -> str:
        where = "pre" if self.position == PRE_CIRCUIT else f"@{self.position}"
        if self.kind == RECORD_FLIP:
            return f"flip{where}"
        return f"{self.kind}{self.qubit}{where}"


def _check_location(circuit: Circuit, loc: ErrorLocation) -> None:
    if loc.kind == RECORD_FLIP:
        if not 0 <= loc.position < len(circuit.instructions) or not isinstance(
            circuit.instructions[loc.position], Measure
        ):
            raise CircuitError(f"record flip {loc} does not reference a Measure")
        return
    if loc.kind not in PAULIS:
        raise CircuitError(f"unknown error kind {loc.kind!r}")
    if loc.qubit is None or not 0 <= loc.qubit < circuit.num_qubits:
        raise CircuitError(f"invalid qubit in {loc}")
    if loc.position == PRE_CIRCUIT:
        return
    if not 0 <= loc.position < len(circuit.instructions):
        raise CircuitError(f"position out of range in {loc}")
    if loc.qubit not in touched_qubits(circuit.instructions[loc.position]):
        raise CircuitError(f"{loc}: qubit not acted on by {circuit.instructions[loc.position]!r}")


def format_outcome(registers: Sequence[tuple[str, int]], bits: Sequence[int]) -> str:
    """Render clbit values as a space-separated outcome string.

    The last register added is printed first, and within each register the
    highest-index bit is printed first.

    >>> format_outcome([("round_1", 2), ("final", 3)], [0, 1, 1, 0, 0])
    '001 10'
    """
    total = sum(size for _, size in registers)
    if len(bits) != total:
        raise CircuitError(f"expected {total} bits for register layout, got {len(bits)}")
    blocks = []
    offset = 0
    for _, size in registers:
        chunk = bits[offset:offset + size]
        blocks.append("".join("1" if b else "0" for b in reversed(chunk)))
        offset += size
    return " ".join(reversed(blocks))


def _propagate(circuit: Circuit, injections: dict[tuple[int, int | None], int], flips: set[int]) -> str:
    state = [0] * circuit.num_qubits
    clbits = [0] * circuit.num_clbits
    for q in range(circuit.num_qubits):
        state[q] ^= injections.get((PRE_CIRCUIT, q), 0)
    for pos, inst in enumerate(circuit.instructions):
        if isinstance(inst, XGate):
            state[inst.qubit] ^= 1
        elif isinstance(inst, CXGate):
            state[inst.target] ^= state[inst.control]
        elif isinstance(inst, Measure):
            clbits[inst.clbit] = state[inst.qubit] ^ (pos in flips)
        elif isinstance(inst, Reset):
            state[inst.qubit] = 0
        elif not isinstance(inst, Barrier):
            raise CircuitError(f"unsupported instruction at {pos}: {inst!r}")
        if injections:
            for q in touched_qubits(inst):
                state[q] ^= injections.get((pos, q), 0)
    return format_outcome(circuit.registers, clbits)


def run_ideal(circuit: Circuit) -> str:
    """Outcome string of the circuit with no noise, all qubits starting at 0."""
    return _propagate(circuit, {}, set())


def run_with_errors(circuit: Circuit, errors: Iterable[ErrorLocation]) -> str:
    """Deterministic outcome with the given faults injected.

    ``errors`` is treated as a multiset: the same fault given twice cancels.
    Z faults are invisible and Y acts as X.
    """
    injections: dict[tuple[int, int | None], int] = {}
    flips: set[int] = set()
    for loc in errors:
        _check_location(circuit, loc)
        if loc.kind == RECORD_FLIP:
            flips ^= {loc.position}
        elif loc.kind in ("X", "Y"):
            key = (loc.position, loc.qubit)
            injections[key] = injections.get(key, 0) ^ 1
    return _propagate(circuit, injections, flips)


def enumerate_error_locations(circuit: Circuit) -> list[ErrorLocation]:
    """All single-X insertions and record flips, in circuit order.

    Pre-circuit X on every qubit comes first, then for each instruction an X
    on every qubit it touches, followed by a record flip if it is a Measure.
    Y and Z are omitted: Z never changes the outcome and Y duplicates X.
    """
    locations = [ErrorLocation(PRE_CIRCUIT, "X", q) for q in range(circuit.num_qubits)]
    for pos, inst in enumerate(circuit.instructions):
        for q in touched_qubits(inst):
            locations.append(ErrorLocation(pos, "X", q))
        if isinstance(inst, Measure):
            locations.append(ErrorLocation(pos, RECORD_FLIP))
    return locations


def location_fault_probability(circuit: Circuit, loc: ErrorLocation, noise: NoiseModel) -> float:
    """Probability that ``noise`` produces the bit-level effect of ``loc``."""
    if loc.kind == RECORD_FLIP:
        return noise.rho_meas
    if loc.position == PRE_CIRCUIT:
        return 0.0
    if isinstance(circuit.instructions[loc.position], (XGate, CXGate)):
        return noise.gate_flip
    return 0.0


def compile_circuit(circuit: Circuit, noise: NoiseModel) -> tuple[np.ndarray, np.ndarray]:
    """Lower a circuit to kernel form.

    Returns ``(ops, thresholds)``: ``ops`` is an ``int32`` array of
    ``(opcode, a, b)`` rows with barriers dropped, and ``thresholds`` holds one
    flip probability per noise site in the order the kernels consume them
    (one per X, two per CX, one per Measure).
    """
    rows = []
    thresholds = []
    for pos, inst in enumerate(circuit.instructions):
        if isinstance(inst, XGate):
            rows.append((OP_X, inst.qubit, 0))
            thresholds.append(noise.gate_flip)
        elif isinstance(inst, CXGate):
            rows.append((OP_CX, inst.control, inst.target))
            thresholds.extend((noise.gate_flip, noise.gate_flip))
        elif isinstance(inst, Measure):
            rows.append((OP_MEASURE, inst.qubit, inst.clbit))
            thresholds.append(noise.rho_meas)
        elif isinstance(inst, Reset):
            rows.append((OP_RESET, inst.qubit, 0))
        elif not isinstance(inst, Barrier):
            raise CircuitError(f"unsupported instruction at {pos}: {inst!r}")
    ops = np.array(rows, dtype=np.int32).reshape(-1, 3)
    return ops, np.array(thresholds, dtype=np.float64)


# shots per random draw; fixed so results do not depend on memory settings
CHUNK_SHOTS = 8192


def sample_clbits(circuit: Circuit, noise: NoiseModel, shots: int, seed=None) -> np.ndarray:
    """Sample ``shots`` noisy runs; returns a ``(shots, num_clbits)`` uint8 array."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    ops, thresholds = compile_circuit(circuit, noise)
    rng = np.random.default_rng(seed)
    out = np.empty((shots, circuit.num_clbits), dtype=np.uint8)
    for start in range(0, shots, CHUNK_SHOTS):
        stop = min(start + CHUNK_SHOTS, shots)
        if noise.is_noiseless:
            flips = np.zeros((stop - start, thresholds.size), dtype=np.uint8)
        else:
            flips = (rng.random((stop - start, thresholds.size)) < thresholds).view(np.uint8)
        out[start:stop] = _backend.kernels.propagate_shots(
            ops, flips, circuit.num_qubits, circuit.num_clbits
        )
    return out


def sample(circuit: Circuit, noise: NoiseModel, shots: int, seed=None) -> dict[str, int]:
    """Sample the circuit under ``noise`` and return outcome counts.

    The same ``seed`` always gives the same counts, whichever kernel backend
    is active.
    """
    clbits = sample_clbits(circuit, noise, shots, seed)
    if clbits.shape[1] == 0:
        return {"": shots}
    rows, freq = np.unique(clbits, axis=0, return_counts=True)
    counts = {format_outcome(circuit.registers, row.tolist()): int(c) for row, c in zip(rows, freq)}
    return dict(sorted(counts.items()))
