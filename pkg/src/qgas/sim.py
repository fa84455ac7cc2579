"""Dense statevector simulation of gate-level circuits.

Qubit ``q`` is bit ``q`` of the basis-state index, so qubit 0 is the least
significant.  Bitstrings are written most-significant-first.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, sqrt
from typing import Iterable, Optional, Sequence, Union

import numpy as np

MAX_QUBITS_ENV = "QGAS_MAX_QUBITS"
DEFAULT_MAX_QUBITS = 26

NORM_TOL = 1e-10
_MEASURE_TOL = 1e-8


class SimulatorLimitError(MemoryError):
    """Requested register is larger than the configured simulator cap."""


def max_qubits() -> int:
    """Simulator cap, overridable through ``QGAS_MAX_QUBITS``."""
    raw = os.environ.get(MAX_QUBITS_ENV)
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{MAX_QUBITS_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{MAX_QUBITS_ENV} must be positive, got {value}")
    return value


def check_qubit_budget(num_qubits: int) -> None:
    limit = max_qubits()
    if num_qubits > limit:
        raise SimulatorLimitError(
            f"{num_qubits} qubits requested but the simulator limit is {limit} "
            f"(set {MAX_QUBITS_ENV} to raise it)"
        )


def index_to_bits(index: int, num_qubits: int) -> tuple[int, ...]:
    """Basis index -> bit tuple, most-significant-first."""
    return tuple((index >> q) & 1 for q in reversed(range(num_qubits)))


def bits_to_index(bits: Union[str, Sequence[int]]) -> int:
    """Bit sequence (most-significant-first) or bitstring -> basis index."""
    value = 0
    for b in bits:
        b = int(b)
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b}")
        value = (value << 1) | b
    return value


@dataclass
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.num_qubits < 1:
            raise ValueError("a state needs at least one qubit")
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes for {self.num_qubits} "
                f"qubits, got shape {self.amplitudes.shape}"
            )

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        check_qubit_budget(num_qubits)
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def basis(cls, bits: Union[str, Sequence[int]]) -> "StateVector":
        n = len(bits)
        state = cls.zero(n)
        state.amplitudes[0] = 0.0
        state.amplitudes[bits_to_index(bits)] = 1.0
        return state

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __len__(self) -> int:
        return self.amplitudes.shape[0]


# --------------------------------------------------------------------------
# gates

_S2 = 1 / sqrt(2)
_FIXED = {
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "S": np.array([[1, 0], [0, 1j]], dtype=np.complex128),
}
GATE_KINDS = frozenset(_FIXED) | {"P"}


@dataclass(frozen=True)
class Gate:
    """Single-target gate, optionally controlled on a set of qubits.

    ``kind`` is one of H, X, Y, Z, S or P (phase by ``angle`` radians).
    CNOT is X with one control; a multi-controlled phase is P with controls.
    """

    kind: str
    target: int
    controls: tuple[int, ...] = ()
    angle: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        controls = tuple(sorted(set(int(c) for c in self.controls)))
        if len(controls) != len(self.controls):
            raise ValueError(f"repeated control qubit in {self.controls}")
        if self.target in controls:
            raise ValueError(f"target {self.target} is also a control")
        object.__setattr__(self, "controls", controls)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)

    @property
    def diagonal(self) -> bool:
        return self.kind in ("Z", "S", "P")

    def matrix(self) -> np.ndarray:
        """2x2 matrix acting on the target (controls not included)."""
        if self.kind == "P":
            return np.array([[1, 0], [0, np.exp(1j * self.angle)]], dtype=np.complex128)
        return _FIXED[self.kind]

    def inverse(self) -> "Gate":
        if self.kind == "S":
            return Gate("P", self.target, self.controls, -np.pi / 2)
        if self.kind == "P":
            return Gate("P", self.target, self.controls, -self.angle)
        return self

    def __str__(self) -> str:
        name = self.kind if self.kind != "P" else f"P({self.angle:.6g})"
        if self.controls:
            return f"C{list(self.controls)}-{name}@{self.target}"
        return f"{name}@{self.target}"


def H(q: int) -> Gate:
    return Gate("H", q)


def X(q: int) -> Gate:
    return Gate("X", q)


def Y(q: int) -> Gate:
    return Gate("Y", q)


def Z(q: int) -> Gate:
    return Gate("Z", q)


def S(q: int) -> Gate:
    return Gate("S", q)


def phase(q: int, angle: float, controls: Iterable[int] = ()) -> Gate:
    return Gate("P", q, tuple(controls), float(angle))


def cnot(control: int, target: int) -> Gate:
    return Gate("X", target, (control,))


@dataclass(frozen=True)
class FourierOp:
    """Dense (inverse) quantum Fourier transform on qubits start..start+size-1."""

    start: int
    size: int
    inverse: bool = True

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError("Fourier register must contain at least one qubit")
        if self.start < 0:
            raise ValueError(f"negative qubit index {self.start}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(range(self.start, self.start + self.size))

    def matrix(self) -> np.ndarray:
        return fourier_matrix(self.size, self.inverse)

    def invert(self) -> "FourierOp":
        return FourierOp(self.start, self.size, not self.inverse)

    def __str__(self) -> str:
        return f"{'IQFT' if self.inverse else 'QFT'}[{self.start}:{self.start + self.size}]"


@dataclass(frozen=True, eq=False)
class PrepareOp:
    """Householder reflection swapping |0..0> and ``vector`` on a register.

    It is unitary and its own inverse, so it can stand in for any
    state-preparation unitary inside a Grover operator.  ``vector`` is stored
    with its first amplitude rotated to be real and non-negative.
    """

    start: int
    size: int
    vector: np.ndarray

    def __post_init__(self) -> None:
        vec = np.asarray(self.vector, dtype=np.complex128).copy()
        if vec.shape != (1 << self.size,):
            raise ValueError(f"vector must have {1 << self.size} entries")
        nrm = np.linalg.norm(vec)
        if abs(nrm - 1) > NORM_TOL:
            raise ValueError(f"prepared vector must be normalised (norm {nrm})")
        if abs(vec[0]) > 0:
            vec *= np.conj(vec[0]) / abs(vec[0])
        vec.setflags(write=False)
        object.__setattr__(self, "vector", vec)

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(range(self.start, self.start + self.size))

    def reflector(self) -> np.ndarray | None:
        w = -self.vector.copy()
        w[0] += 1.0
        if np.linalg.norm(w) < 1e-15:
            return None
        return w

    def invert(self) -> "PrepareOp":
        return self

    def __str__(self) -> str:
        return f"PREP[{self.start}:{self.start + self.size}]"


Operation = Union[Gate, FourierOp, PrepareOp]


@lru_cache(maxsize=32)
def fourier_matrix(size: int, inverse: bool = True) -> np.ndarray:
    """Unitary DFT matrix on ``size`` qubits; the inverse transform has e^{-2pi i jk/N}."""
    dim = 1 << size
    j = np.arange(dim)
    sign = -1.0 if inverse else 1.0
    mat = np.exp(sign * 2j * np.pi * np.outer(j, j) / dim) / sqrt(dim)
    mat.setflags(write=False)
    return mat


def _invert(op: Operation) -> Operation:
    return op.inverse() if isinstance(op, Gate) else op.invert()


@dataclass
class Circuit:
    num_qubits: int
    gates: list = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        ops, self.gates = list(self.gates), []
        self.extend(ops)

    def append(self, op: Operation) -> "Circuit":
        for q in op.qubits:
            if not 0 <= q < self.num_qubits:
                raise IndexError(f"{op} touches qubit {q} outside a {self.num_qubits}-qubit circuit")
        self.gates.append(op)
        return self

    def extend(self, ops: Iterable[Operation]) -> "Circuit":
        for op in ops:
            self.append(op)
        return self

    def inverse(self) -> "Circuit":
        return Circuit(self.num_qubits, [_invert(op) for op in reversed(self.gates)])

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise ValueError("cannot compose circuits of different widths")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def depth(self) -> int:
        level = [0] * self.num_qubits
        for op in self.gates:
            qs = op.qubits
            top = max(level[q] for q in qs) + 1
            for q in qs:
                level[q] = top
        return max(level, default=0)

    def count_ops(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for op in self.gates:
            if isinstance(op, Gate):
                key = op.kind if not op.controls else f"C{len(op.controls)}{op.kind}"
            else:
                key = type(op).__name__
            counts[key] = counts.get(key, 0) + 1
        return counts


# --------------------------------------------------------------------------
# application

def _axis(q: int, n: int) -> int:
    return n - 1 - q


def _apply_gate_inplace(amps: np.ndarray, gate: Gate, n: int) -> None:
    tensor = amps.reshape((2,) * n)
    sl = [slice(None)] * n
    for c in gate.controls:
        sl[_axis(c, n)] = 1
    ax = _axis(gate.target, n)
    sl[ax] = 1
    a1 = tensor[tuple(sl) + (Ellipsis,)]
    kind = gate.kind
    if kind == "Z":
        a1 *= -1
        return
    if kind == "S":
        a1 *= 1j
        return
    if kind == "P":
        a1 *= np.exp(1j * gate.angle)
        return
    sl[ax] = 0
    a0 = tensor[tuple(sl) + (Ellipsis,)]
    if kind == "X":
        tmp = a0.copy()
        a0[...] = a1
        a1[...] = tmp
        return
    m = _FIXED[kind]
    old0 = a0.copy()
    a0 *= m[0, 0]
    a0 += m[0, 1] * a1
    a1 *= m[1, 1]
    a1 += m[1, 0] * old0


def _register_view(amps: np.ndarray, start: int, size: int, n: int) -> np.ndarray:
    return amps.reshape(1 << (n - start - size), 1 << size, 1 << start)


def _apply_op_inplace(amps: np.ndarray, op: Operation, n: int) -> np.ndarray:
    if isinstance(op, Gate):
        _apply_gate_inplace(amps, op, n)
        return amps
    view = _register_view(amps, op.start, op.size, n)
    if isinstance(op, FourierOp):
        out = np.einsum("ij,ajb->aib", op.matrix(), view)
        return out.reshape(-1)
    w = op.reflector()
    if w is not None:
        coef = np.einsum("j,ajb->ab", w.conj(), view)
        view -= (2.0 / np.vdot(w, w).real) * w[None, :, None] * coef[:, None, :]
    return amps


def _check_op(op: Operation, n: int) -> None:
    for q in op.qubits:
        if not 0 <= q < n:
            raise IndexError(f"{op} touches qubit {q} of a {n}-qubit state")


def apply_gate(state: StateVector, gate: Operation) -> StateVector:
    """Return ``gate`` applied to ``state``; the input is left untouched."""
    n = state.num_qubits
    _check_op(gate, n)
    amps = _apply_op_inplace(state.amplitudes.copy(), gate, n)
    return StateVector(n, amps)


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    if circuit.num_qubits != state.num_qubits:
        raise ValueError(
            f"circuit has {circuit.num_qubits} qubits but the state has {state.num_qubits}"
        )
    n = state.num_qubits
    amps = state.amplitudes.copy()
    for op in circuit.gates:
        amps = _apply_op_inplace(amps, op, n)
    return StateVector(n, amps)


def apply_iqft(state: StateVector, register: Sequence[int]) -> StateVector:
    """Inverse QFT on a contiguous qubit range (ascending indices, LSB first)."""
    qs = list(register)
    if not qs:
        raise ValueError("empty register")
    if qs != list(range(qs[0], qs[0] + len(qs))):
        raise ValueError(f"register {qs} is not a contiguous ascending range")
    return apply_gate(state, FourierOp(qs[0], len(qs), inverse=True))


def apply_qft(state: StateVector, register: Sequence[int]) -> StateVector:
    qs = list(register)
    if not qs:
        raise ValueError("empty register")
    if qs != list(range(qs[0], qs[0] + len(qs))):
        raise ValueError(f"register {qs} is not a contiguous ascending range")
    return apply_gate(state, FourierOp(qs[0], len(qs), inverse=False))


# --------------------------------------------------------------------------
# special states

def uniform_superposition(n: int) -> StateVector:
    if n < 1:
        raise ValueError("n must be at least 1")
    check_qubit_budget(n)
    dim = 1 << n
    return StateVector(n, np.full(dim, 1 / sqrt(dim), dtype=np.complex128))


@lru_cache(maxsize=64)
def _popcounts(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros(1 << n, dtype=np.int64)
    for q in range(n):
        counts += (idx >> q) & 1
    counts.setflags(write=False)
    return counts


def hamming_weights(n: int) -> np.ndarray:
    """Hamming weight of every basis index of an ``n``-qubit register."""
    return _popcounts(n)


def dicke_state(n: int, k: int) -> StateVector:
    """Equal superposition of all weight-``k`` basis states, by direct assignment."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 <= k <= n:
        raise ValueError(f"Hamming weight k={k} must lie in [0, {n}]")
    check_qubit_budget(n)
    amps = np.where(_popcounts(n) == k, 1 / sqrt(comb(n, k)), 0.0).astype(np.complex128)
    return StateVector(n, amps)


def amplitude_embed(data: Sequence[float]) -> StateVector:
    """Encode real data into amplitudes after normalising to unit length."""
    vec = np.asarray(data, dtype=np.float64).ravel()
    dim = vec.shape[0]
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"data length must be a power of two >= 2, got {dim}")
    nrm = np.linalg.norm(vec)
    if nrm == 0:
        raise ZeroDivisionError("cannot normalise an all-zero vector")
    return StateVector(dim.bit_length() - 1, (vec / nrm).astype(np.complex128))


# --------------------------------------------------------------------------
# measurement

@dataclass(frozen=True)
class MeasurementOutcome:
    bitstring: tuple[int, ...]
    probability: float

    @property
    def index(self) -> int:
        return bits_to_index(self.bitstring)

    def __str__(self) -> str:
        return "".join(map(str, self.bitstring))


def _checked_probabilities(state: StateVector) -> np.ndarray:
    probs = state.probabilities()
    total = probs.sum()
    if abs(total - 1) > _MEASURE_TOL:
        raise ValueError(f"state is not normalised (sum of probabilities {total})")
    return probs / total


def _generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def measure_all(state: StateVector, rng_seed) -> MeasurementOutcome:
    """Sample one basis state from the Born distribution.

    ``rng_seed`` is an integer seed or an existing ``numpy.random.Generator``.
    """
    probs = _checked_probabilities(state)
    idx = int(_generator(rng_seed).choice(probs.shape[0], p=probs))
    return MeasurementOutcome(index_to_bits(idx, state.num_qubits), float(probs[idx]))


def sample_indices(state: StateVector, shots: int, rng_seed) -> np.ndarray:
    probs = _checked_probabilities(state)
    return _generator(rng_seed).choice(probs.shape[0], size=shots, p=probs)


def sample_counts(state: StateVector, shots: int, rng_seed) -> dict[str, int]:
    """Histogram of ``shots`` seeded measurements keyed by MSB-first bitstring."""
    idx = sample_indices(state, shots, rng_seed)
    values, counts = np.unique(idx, return_counts=True)
    n = state.num_qubits
    return {format(int(v), f"0{n}b"): int(c) for v, c in zip(values, counts)}


def probability_of(state: StateVector, bitstring: Union[str, Sequence[int]]) -> float:
    if len(bitstring) != state.num_qubits:
        raise ValueError(
            f"bitstring has {len(bitstring)} bits but the state has {state.num_qubits} qubits"
        )
    return float(abs(state.amplitudes[bits_to_index(bitstring)]) ** 2)


def states_equal(a: StateVector, b: StateVector, tol: float = 1e-10) -> bool:
    """Compare up to a global phase, aligned on the largest-magnitude amplitude of ``a``."""
    if a.num_qubits != b.num_qubits:
        return False
    pivot = int(np.argmax(np.abs(a.amplitudes)))
    pa, pb = a.amplitudes[pivot], b.amplitudes[pivot]
    if abs(pb) < tol:
        return bool(np.allclose(a.amplitudes, b.amplitudes, atol=tol, rtol=0))
    rot = (pa / abs(pa)) / (pb / abs(pb))
    return bool(np.allclose(a.amplitudes, rot * b.amplitudes, atol=tol, rtol=0))


# --------------------------------------------------------------------------
# circuit text format
#
#   qubits 2
#   H 0
#   CNOT 0 1
#   P 0.785398 1 ctrl 0      # phase angle, target, optional controls
#   X 2 ctrl 0 1

_SINGLE = {"H": H, "X": X, "Y": Y, "Z": Z, "S": S}


def parse_circuit(text: str) -> Circuit:
    """Read the line-oriented circuit format; errors name the offending line."""
    circuit: Optional[Circuit] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        name = parts[0].upper()
        try:
            if name == "QUBITS":
                if circuit is not None or len(parts) != 2:
                    raise ValueError("'qubits N' must appear once, before any gate")
                circuit = Circuit(int(parts[1]))
                continue
            if circuit is None:
                raise ValueError("missing 'qubits N' header")
            args, controls = parts[1:], []
            if "ctrl" in [a.lower() for a in args]:
                cut = [a.lower() for a in args].index("ctrl")
                args, controls = args[:cut], [int(c) for c in args[cut + 1:]]
                if not controls:
                    raise ValueError("'ctrl' needs at least one qubit")
            if name in _SINGLE and len(args) == 1:
                g = _SINGLE[name](int(args[0]))
                gate = Gate(g.kind, g.target, tuple(controls), g.angle)
            elif name == "P" and len(args) == 2:
                gate = phase(int(args[1]), float(args[0]), controls)
            elif name in ("CNOT", "CX") and len(args) == 2 and not controls:
                gate = cnot(int(args[0]), int(args[1]))
            else:
                raise ValueError("unrecognised gate line")
            circuit.append(gate)
        except (ValueError, IndexError) as exc:
            raise ValueError(f"line {lineno}: {exc}: {raw.strip()!r}") from None
    if circuit is None:
        raise ValueError("empty circuit file")
    return circuit
