"""Multilinear binary polynomials and their phase-encoding circuits.

Assignments are bit sequences indexed by variable: ``x[i]`` is variable ``i``.
In the vectorised helpers, basis index ``b`` stands for the assignment whose
variable ``i`` is bit ``i`` of ``b``; this matches the qubit layout used by
:func:`compile_state_prep`, where variable ``i`` lives on qubit ``i``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from numbers import Real
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .sim import Circuit, FourierOp, H, PrepareOp, check_qubit_budget, phase

EXACT_BOUNDS_MAX_VARS = 20

Term = tuple[float, tuple[int, ...]]


class RegisterOverflowError(ValueError):
    """Scaled costs do not fit the two's-complement cost register."""


class PolynomialParseError(ValueError):
    def __init__(self, lineno: int, line: str, reason: str) -> None:
        super().__init__(f"line {lineno}: {reason}: {line.strip()!r}")
        self.lineno = lineno
        self.line = line
        self.reason = reason


def _is_integral(value: float, tol: float = 1e-9) -> bool:
    return abs(value - round(value)) <= tol


@dataclass(frozen=True)
class BinaryPolynomial:
    """``constant + sum(coeff * prod(x[v] for v in vars))`` over binary ``x``.

    Build instances with :meth:`from_terms`, which merges duplicate variable
    sets and drops zero coefficients; the raw constructor only validates.
    """

    num_vars: int
    terms: tuple[Term, ...] = ()
    constant: float = 0.0

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        seen = set()
        for coeff, vs in self.terms:
            if not vs:
                raise ValueError("empty variable set; fold it into the constant")
            if list(vs) != sorted(set(vs)):
                raise ValueError(f"term variables {vs} must be strictly increasing")
            if vs[0] < 0 or vs[-1] >= self.num_vars:
                raise ValueError(f"term variables {vs} out of range for {self.num_vars} vars")
            if vs in seen:
                raise ValueError(f"duplicate term over variables {vs}")
            seen.add(vs)

    @classmethod
    def from_terms(
        cls,
        num_vars: int,
        terms: Union[Iterable[tuple[float, Iterable[int]]], Mapping[Iterable[int], float]] = (),
        constant: float = 0.0,
    ) -> "BinaryPolynomial":
        """Normalise arbitrary terms; a repeated index collapses since x*x = x."""
        if isinstance(terms, Mapping):
            terms = [(c, vs) for vs, c in terms.items()]
        acc: dict[tuple[int, ...], float] = {}
        const = float(constant)
        for coeff, vs in terms:
            key = tuple(sorted(set(int(v) for v in vs)))
            if not key:
                const += float(coeff)
            else:
                acc[key] = acc.get(key, 0.0) + float(coeff)
        items = sorted(((c, k) for k, c in acc.items() if c != 0.0), key=lambda t: (len(t[1]), t[1]))
        return cls(int(num_vars), tuple(items), const)

    @classmethod
    def variable(cls, index: int, num_vars: int) -> "BinaryPolynomial":
        return cls.from_terms(num_vars, [(1.0, (index,))])

    @classmethod
    def const(cls, value: float, num_vars: int) -> "BinaryPolynomial":
        return cls(num_vars, (), float(value))

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "BinaryPolynomial":
        if isinstance(other, BinaryPolynomial):
            if other.num_vars != self.num_vars:
                n = max(self.num_vars, other.num_vars)
                return BinaryPolynomial(n, other.terms, other.constant)
            return other
        if isinstance(other, Real):
            return BinaryPolynomial.const(float(other), self.num_vars)
        return NotImplemented

    def __add__(self, other) -> "BinaryPolynomial":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = max(self.num_vars, o.num_vars)
        return BinaryPolynomial.from_terms(n, list(self.terms) + list(o.terms), self.constant + o.constant)

    __radd__ = __add__

    def __neg__(self) -> "BinaryPolynomial":
        return self * -1.0

    def __sub__(self, other) -> "BinaryPolynomial":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other) -> "BinaryPolynomial":
        return (-self) + other

    def __mul__(self, other) -> "BinaryPolynomial":
        if isinstance(other, Real):
            k = float(other)
            return BinaryPolynomial.from_terms(
                self.num_vars, [(k * c, vs) for c, vs in self.terms], k * self.constant
            )
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        left = [(self.constant, ())] + list(self.terms)
        right = [(o.constant, ())] + list(o.terms)
        prod = [(c1 * c2, v1 + v2) for c1, v1 in left for c2, v2 in right]
        return BinaryPolynomial.from_terms(max(self.num_vars, o.num_vars), prod)

    __rmul__ = __mul__

    # -- properties -------------------------------------------------------
    @property
    def degree(self) -> int:
        return max((len(vs) for _, vs in self.terms), default=0)

    @property
    def is_integer(self) -> bool:
        return _is_integral(self.constant) and all(_is_integral(c) for c, _ in self.terms)

    def __str__(self) -> str:
        parts = [" * ".join([_fmt_num(c)] + [f"x_{v}" for v in vs]) for c, vs in self.terms]
        if self.constant != 0 or not parts:
            parts.append(_fmt_num(self.constant))
        return " + ".join(parts)


def _check_assignment(poly: BinaryPolynomial, assignment: Sequence[int]) -> None:
    if len(assignment) != poly.num_vars:
        raise ValueError(f"assignment has {len(assignment)} bits, polynomial has {poly.num_vars} vars")


def evaluate(poly: BinaryPolynomial, assignment: Sequence[int]) -> float:
    _check_assignment(poly, assignment)
    total = poly.constant
    for coeff, vs in poly.terms:
        if all(assignment[v] for v in vs):
            total += coeff
    return float(total)


@lru_cache(maxsize=16)
def _bit_columns(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    cols = ((idx[None, :] >> np.arange(n, dtype=np.int64)[:, None]) & 1).astype(bool)
    cols.setflags(write=False)
    return cols


def evaluate_all(poly: BinaryPolynomial) -> np.ndarray:
    """Costs of all ``2**n`` assignments, indexed by basis index."""
    n = poly.num_vars
    if n > 26:
        raise ValueError(f"refusing to enumerate 2**{n} assignments")
    out = np.full(1 << n, poly.constant, dtype=np.float64)
    if not poly.terms:
        return out
    cols = _bit_columns(n)
    for coeff, vs in poly.terms:
        mask = cols[vs[0]]
        for v in vs[1:]:
            mask = mask & cols[v]
        out[mask] += coeff
    return out


def index_to_assignment(index: int, num_vars: int) -> tuple[int, ...]:
    return tuple((int(index) >> i) & 1 for i in range(num_vars))


def assignment_to_index(assignment: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(assignment))


def shift(poly: BinaryPolynomial, delta: float) -> BinaryPolynomial:
    return BinaryPolynomial(poly.num_vars, poly.terms, poly.constant + float(delta))


def cost_bounds(poly: BinaryPolynomial, exact: bool = False) -> tuple[float, float]:
    """Sound interval containing every cost; ``exact=True`` enumerates (n <= 20)."""
    if exact:
        if poly.num_vars > EXACT_BOUNDS_MAX_VARS:
            raise ValueError(f"exact bounds need n <= {EXACT_BOUNDS_MAX_VARS}")
        costs = evaluate_all(poly)
        return float(costs.min()), float(costs.max())
    lo = poly.constant + sum(min(0.0, c) for c, _ in poly.terms)
    hi = poly.constant + sum(max(0.0, c) for c, _ in poly.terms)
    return float(lo), float(hi)


@dataclass(frozen=True)
class CostEncoding:
    """Cost register of ``m`` qubits holding ``round(scale * cost)`` in two's complement."""

    m: int
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError("the cost register needs at least 2 qubits")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @property
    def low(self) -> int:
        return -(1 << (self.m - 1))

    @property
    def high(self) -> int:
        return (1 << (self.m - 1)) - 1

    def fits(self, lo: float, hi: float) -> bool:
        return self.low <= round(self.scale * lo) and round(self.scale * hi) <= self.high

    def to_register(self, value: float) -> int:
        """Register reading (0..2**m-1) for a cost, with wrap-around."""
        return int(round(self.scale * value)) % (1 << self.m)

    def from_register(self, reading: int) -> int:
        """Signed integer stored in a register reading."""
        reading = int(reading) % (1 << self.m)
        return reading - (1 << self.m) if reading >> (self.m - 1) else reading


def width_for_range(lo: float, hi: float) -> int:
    """Smallest m >= 2 whose two's-complement range covers [round(lo), round(hi)]."""
    lo_i, hi_i = round(lo), round(hi)
    m = 2
    while not (-(1 << (m - 1)) <= lo_i and hi_i <= (1 << (m - 1)) - 1):
        m += 1
    return m


def choose_register_width(
    poly: BinaryPolynomial, scale: Optional[float] = None, exact: bool = False
) -> CostEncoding:
    """Smallest register for the (scaled) cost bounds; integer polynomials use scale 1."""
    if scale is None:
        scale = 1.0
    lo, hi = cost_bounds(poly, exact=exact)
    return CostEncoding(width_for_range(scale * lo, scale * hi), float(scale))


def _check_fit(poly: BinaryPolynomial, enc: CostEncoding, support: Optional[np.ndarray] = None) -> None:
    if support is not None:
        costs = evaluate_all(poly)[support]
        lo, hi = float(costs.min()), float(costs.max())
    else:
        lo, hi = cost_bounds(poly, exact=poly.num_vars <= EXACT_BOUNDS_MAX_VARS)
    if not enc.fits(lo, hi):
        raise RegisterOverflowError(
            f"scaled costs [{enc.scale * lo:g}, {enc.scale * hi:g}] do not fit "
            f"{enc.m}-qubit two's complement [{enc.low}, {enc.high}]"
        )


def term_angle(coeff: float, j: int, enc: CostEncoding) -> float:
    """Phase on cost qubit ``j`` contributed by a term of coefficient ``coeff``."""
    return 2 * math.pi * enc.scale * coeff * (1 << j) / (1 << enc.m)


def compile_state_prep(
    poly: BinaryPolynomial,
    enc: CostEncoding,
    variable_state: Optional[np.ndarray] = None,
    check_overflow: bool = True,
) -> Circuit:
    """Build the state-preparation operator on ``n + m`` qubits.

    Variables occupy qubits ``0..n-1`` and the cost register qubits
    ``n..n+m-1`` (most-significant last).  The variable register starts in the
    uniform superposition, or in ``variable_state`` when given (prepared by a
    Householder reflection).  Every term adds a phase gate per cost qubit,
    controlled on the term's variables, and an inverse QFT turns the phases
    into the two's-complement cost.  Only branches with nonzero amplitude
    are checked for overflow.
    """
    n, m = poly.num_vars, enc.m
    if n < 1:
        raise ValueError("polynomial needs at least one variable")
    check_qubit_budget(n + m)
    if check_overflow:
        support = None if variable_state is None else np.abs(np.asarray(variable_state)) > 0
        _check_fit(poly, enc, support)
    circ = Circuit(n + m)
    if variable_state is None:
        circ.extend(H(q) for q in range(n))
    else:
        circ.append(PrepareOp(0, n, np.asarray(variable_state)))
    circ.extend(H(n + j) for j in range(m))
    for coeff, vs in [(poly.constant, ())] + list(poly.terms):
        if coeff == 0:
            continue
        for j in range(m):
            circ.append(phase(n + j, term_angle(coeff, j, enc), vs))
    circ.append(FourierOp(n, m, inverse=True))
    return circ


def merge_phase_gates(circuit: Circuit) -> Circuit:
    """Merge runs of phase gates with the same target and control set.

    Angles are summed and reduced modulo 2*pi; gates that reduce to the
    identity are dropped.  Diagonal gates commute, so a run may be
    interleaved with other diagonal gates without changing the operator.
    """
    out: list = []
    pending: dict[tuple, float] = {}

    def flush() -> None:
        for (target, controls), angle in pending.items():
            a = math.remainder(angle, 2 * math.pi)
            if abs(a) > 1e-12:
                out.append(phase(target, a, controls))
        pending.clear()

    for op in circuit.gates:
        kind = getattr(op, "kind", None)
        if kind == "P":
            key = (op.target, op.controls)
            pending[key] = pending.get(key, 0.0) + op.angle
        elif kind in ("Z", "S"):
            key = (op.target, op.controls)
            pending[key] = pending.get(key, 0.0) + (math.pi if kind == "Z" else math.pi / 2)
        else:
            flush()
            out.append(op)
    flush()
    return Circuit(circuit.num_qubits, out)


# --------------------------------------------------------------------------
# Gray code

def gray_encode(value: int, bits: int) -> tuple[int, ...]:
    """Reflected binary Gray code of ``value``, most-significant bit first."""
    if bits < 1:
        raise ValueError("bits must be positive")
    if not 0 <= value < (1 << bits):
        raise ValueError(f"value {value} out of range for {bits} bits")
    g = value ^ (value >> 1)
    return tuple((g >> b) & 1 for b in reversed(range(bits)))


def gray_decode(code: Sequence[int]) -> int:
    value = 0
    acc = 0
    for b in code:
        b = int(b)
        if b not in (0, 1):
            raise ValueError(f"code bits must be 0 or 1, got {b}")
        acc ^= b
        value = (value << 1) | acc
    return value


def power_mean_min(values: Sequence[float], p: float) -> float:
    """Smooth lower proxy ``(mean(v**p))**(1/p)`` of ``min(values)`` for ``p < 0``."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("need at least one value")
    if np.any(v <= 0):
        raise ValueError("power mean needs strictly positive values")
    if not p < 0:
        raise ValueError("exponent p must be negative")
    # factor out the minimum so large |p| does not overflow
    lo = v.min()
    return float(lo * np.mean((v / lo) ** p) ** (1.0 / p))


# --------------------------------------------------------------------------
# text format

_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_VARIABLE = re.compile(r"^x_?(\d+)$")


def parse_polynomial(text: str, num_vars: Optional[int] = None) -> BinaryPolynomial:
    """Parse one term per line: ``coeff * x_i [* x_j ...]`` or a bare constant.

    ``#`` starts a comment.  A ``vars N`` line fixes the variable count,
    otherwise it is one more than the largest index seen.
    """
    terms: list[tuple[float, tuple[int, ...]]] = []
    constant = 0.0
    declared = num_vars
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()
        if head[0] == "vars":
            if len(head) != 2 or not head[1].isdigit():
                raise PolynomialParseError(lineno, raw, "expected 'vars N'")
            declared = int(head[1])
            continue
        factors = [f.strip() for f in line.replace(" ", "").split("*")]
        if any(not f for f in factors):
            raise PolynomialParseError(lineno, raw, "empty factor")
        coeff = 1.0
        if _NUMBER.match(factors[0]):
            coeff = float(factors[0])
            factors = factors[1:]
        elif factors[0].startswith("-") and _VARIABLE.match(factors[0][1:]):
            coeff = -1.0
            factors[0] = factors[0][1:]
        elif factors[0].startswith("+"):
            factors[0] = factors[0][1:]
        vs: list[int] = []
        for f in factors:
            mt = _VARIABLE.match(f)
            if not mt:
                raise PolynomialParseError(lineno, raw, f"cannot read factor {f!r}")
            vs.append(int(mt.group(1)))
        if len(set(vs)) != len(vs):
            raise PolynomialParseError(lineno, raw, "repeated variable in a term")
        if vs:
            terms.append((coeff, tuple(vs)))
        else:
            constant += coeff
    seen = max((max(vs) for _, vs in terms), default=-1) + 1
    n = seen if declared is None else declared
    if n < seen:
        raise ValueError(f"'vars {n}' is smaller than the largest index used ({seen - 1})")
    return BinaryPolynomial.from_terms(n, terms, constant)


def _fmt_num(x: float) -> str:
    return str(int(round(x))) if _is_integral(x, 0.0) else repr(float(x))


def format_polynomial(poly: BinaryPolynomial) -> str:
    lines = [f"vars {poly.num_vars}"]
    for coeff, vs in poly.terms:
        lines.append(" * ".join([_fmt_num(coeff)] + [f"x_{v}" for v in vs]))
    if poly.constant != 0 or not poly.terms:
        lines.append(_fmt_num(poly.constant))
    return "\n".join(lines) + "\n"
