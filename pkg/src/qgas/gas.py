"""Grover adaptive search over binary polynomials.

A round prepares ``A|0>`` for the polynomial shifted by the current
threshold, applies the Grover operator a random number of times, measures
and checks the measured assignment classically.  The oracle is a single Z
on the sign qubit of the cost register, so a basis state is marked exactly
when its encoded cost is negative.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .poly import (
    EXACT_BOUNDS_MAX_VARS,
    BinaryPolynomial,
    CostEncoding,
    RegisterOverflowError,
    assignment_to_index,
    compile_state_prep,
    cost_bounds,
    evaluate,
    evaluate_all,
    index_to_assignment,
    shift,
    width_for_range,
)
from .sim import (
    Circuit,
    Gate,
    StateVector,
    X,
    Z,
    apply_circuit,
    check_qubit_budget,
    dicke_state,
    hamming_weights,
)

DEFAULT_LAMBDA = 8 / 7
DEFAULT_BUDGET = 10_000
DEFAULT_REAL_WIDTH = 8
DEFAULT_QUANTILE_SAMPLES = 64
EXHAUSTIVE_MAX_VARS = 24


# --------------------------------------------------------------------------
# circuits

def build_oracle(m: int, num_vars: int = 0) -> Circuit:
    """Z on the most-significant cost qubit of an ``num_vars + m`` qubit layout."""
    if m < 1:
        raise ValueError("cost register needs at least one qubit")
    return Circuit(num_vars + m, [Z(num_vars + m - 1)])


def reflection_about_zero(num_qubits: int) -> Circuit:
    """``I - 2|0><0|`` built from X gates around a multi-controlled phase flip."""
    flips = [X(q) for q in range(num_qubits)]
    flip = Gate("P", num_qubits - 1, tuple(range(num_qubits - 1)), math.pi)
    return Circuit(num_qubits, flips + [flip] + flips)


def grover_operator(prep: Circuit, m: int) -> Circuit:
    """Oracle, then ``prep``, reflection about zero and ``prep`` undone, in circuit order.

    As an operator this is ``A (I - 2|0><0|) A^dagger O``, the reflection
    about the prepared state composed with the sign-qubit oracle.
    """
    n_total = prep.num_qubits
    circ = build_oracle(m, n_total - m)
    circ = circ + prep.inverse()
    circ = circ + reflection_about_zero(n_total)
    return circ + prep


# --------------------------------------------------------------------------
# register sizing

def gas_encoding(
    poly: BinaryPolynomial,
    m: Optional[int] = None,
    scale: Optional[float] = None,
    dicke_weight: Optional[int] = None,
) -> CostEncoding:
    """Cost register that holds ``poly - threshold`` for any threshold in the cost range.

    Thresholds are always achieved costs, so shifted costs lie in
    ``[-span, span]`` with ``span = max - min`` (over weight-``dicke_weight``
    assignments when given).  Integer polynomials get the smallest such
    register at scale 1.  Real polynomials get ``m`` qubits (default 8) and a
    scale that maps ``span`` onto ``2**(m-1) - 1`` units.
    """
    if dicke_weight is not None:
        costs = evaluate_all(poly)[hamming_weights(poly.num_vars) == dicke_weight]
        lo, hi = float(costs.min()), float(costs.max())
    else:
        lo, hi = cost_bounds(poly, exact=poly.num_vars <= EXACT_BOUNDS_MAX_VARS)
    span = hi - lo
    if scale is None and poly.is_integer:
        scale = 1.0
    if scale is not None:
        need = width_for_range(-scale * span, scale * span)
        if m is None:
            m = need
        elif m < need:
            raise RegisterOverflowError(f"{m} cost qubits cannot hold scaled span {scale * span:g}")
        return CostEncoding(m, float(scale))
    m = DEFAULT_REAL_WIDTH if m is None else m
    if span <= 0:
        return CostEncoding(m, 1.0)
    return CostEncoding(m, ((1 << (m - 1)) - 1) / span)


# --------------------------------------------------------------------------
# amplitude amplification

class AmplifiedSearch:
    """``A|0>`` for one threshold, with Grover iterations.

    The prepared state is computed directly from the cost table: the cost
    register of branch ``x`` holds the inverse QFT of the phase ramp
    ``exp(2 pi i k c(x) / 2**m)``.  This equals the state produced by
    :func:`compile_state_prep` gate by gate (checked in the test-suite) and
    :meth:`iterate` applies the same operator as :func:`grover_operator`.
    The register profile is computed once per distinct cost value; the
    full ``2**(n+m)`` statevector is only built when it is asked for.
    """

    def __init__(
        self,
        poly: BinaryPolynomial,
        threshold: float,
        enc: CostEncoding,
        variable_state: Optional[np.ndarray] = None,
    ) -> None:
        n, m = poly.num_vars, enc.m
        check_qubit_budget(n + m)
        self.num_vars, self.m = n, m
        self.costs = evaluate_all(poly)
        if variable_state is None:
            self.variable_amplitudes = np.full(1 << n, 1 / math.sqrt(1 << n), dtype=np.complex128)
        else:
            self.variable_amplitudes = np.asarray(variable_state, dtype=np.complex128)
        scaled = enc.scale * (self.costs - threshold)
        # branches with zero amplitude cannot overflow anything
        live = scaled[np.abs(self.variable_amplitudes) > 0]
        lo, hi = live.min(), live.max()
        if round(lo) < enc.low or round(hi) > enc.high:
            raise RegisterOverflowError(
                f"threshold {threshold:g} puts scaled costs in [{lo:g}, {hi:g}], "
                f"outside [{enc.low}, {enc.high}]"
            )
        dim_m = 1 << m
        values, self._which = np.unique(scaled, return_inverse=True)
        ramp = np.exp(2j * np.pi * np.outer(np.arange(dim_m), values) / dim_m)
        # rows: cost register reading y, columns: distinct scaled cost
        self._profiles = np.fft.fft(ramp, axis=0) / dim_m
        self._prepared: Optional[np.ndarray] = None
        self._state: Optional[np.ndarray] = None
        self._plane_cache = None
        self.iterations = 0

    # full statevector ----------------------------------------------------
    @property
    def prepared(self) -> np.ndarray:
        """Prepared amplitudes as a (2**m, 2**n) array: [cost reading, variable index]."""
        if self._prepared is None:
            self._prepared = self._profiles[:, self._which] * self.variable_amplitudes[None, :]
        return self._prepared

    @property
    def state(self) -> np.ndarray:
        if self._state is None:
            self._state = self.prepared.copy()
        return self._state

    def reset(self) -> None:
        self._state = None
        self.iterations = 0

    def iterate(self, k: int = 1) -> None:
        half = 1 << (self.m - 1)
        psi = self.prepared.ravel()
        state = self.state
        phi = state.ravel()
        for _ in range(k):
            state[half:] *= -1
            phi -= 2 * np.vdot(psi, phi) * psi
        self.iterations += k

    def statevector(self) -> StateVector:
        return StateVector(self.num_vars + self.m, self.state.ravel().copy())

    def measure(self, rng: np.random.Generator) -> tuple[int, int]:
        """Sample the full register; returns (variable index, cost register reading)."""
        probs = np.abs(self.state.ravel()) ** 2
        probs /= probs.sum()
        idx = int(rng.choice(probs.shape[0], p=probs))
        return idx % (1 << self.num_vars), idx >> self.num_vars

    # two-dimensional Grover plane ---------------------------------------
    def _plane(self) -> tuple[float, np.ndarray, np.ndarray]:
        if self._plane_cache is None:
            half = 1 << (self.m - 1)
            weight = np.abs(self._profiles) ** 2
            marked_per_value = weight[half:].sum(axis=0)
            var_w = np.abs(self.variable_amplitudes) ** 2
            good = marked_per_value[self._which] * var_w
            bad = (weight.sum(axis=0) - marked_per_value)[self._which] * var_w
            p_good = float(good.sum())
            p_bad = float(bad.sum())
            theta = math.asin(math.sqrt(min(1.0, max(0.0, p_good))))
            self._plane_cache = (
                theta,
                good / p_good if p_good > 0 else good,
                bad / p_bad if p_bad > 0 else bad,
            )
        return self._plane_cache

    @property
    def marked_probability(self) -> float:
        """Weight of the marked subspace in the prepared state, sin^2(theta)."""
        return math.sin(self._plane()[0]) ** 2

    def rotated_good_probability(self, k: int) -> float:
        """Probability of a marked outcome after ``k`` iterations, sin^2((2k+1) theta)."""
        return math.sin((2 * k + 1) * self._plane()[0]) ** 2

    def variable_distribution_after(self, k: int) -> np.ndarray:
        """Distribution of the variable register after ``k`` iterations.

        The Grover operator keeps the state in the plane spanned by the
        marked and unmarked parts of the prepared state, so the outcome
        distribution mixes their normalised weights with
        ``sin^2((2k+1) theta)``.
        """
        theta, good, bad = self._plane()
        pg = math.sin((2 * k + 1) * theta) ** 2
        return pg * good + (1 - pg) * bad

    def variable_distribution(self) -> np.ndarray:
        """Distribution of the variable register in the current statevector."""
        return np.sum(np.abs(self.state) ** 2, axis=0)

    def sample_after(self, k: int, rng: np.random.Generator) -> int:
        """Variable index measured after ``k`` iterations, sampled in the Grover plane."""
        theta, good, bad = self._plane()
        marked = rng.random() < math.sin((2 * k + 1) * theta) ** 2
        return int(rng.choice(good.shape[0], p=good if marked else bad))


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


BACKENDS = ("plane", "statevector", "circuit")


def _measure_round(
    search: AmplifiedSearch,
    k: int,
    rng: np.random.Generator,
    backend: str,
    poly: BinaryPolynomial,
    threshold: float,
    enc: CostEncoding,
    variable_state: Optional[np.ndarray],
) -> int:
    """Run one round on ``search`` (already prepared) and return the measured variable index."""
    if backend == "plane":
        return search.sample_after(k, rng)
    if backend == "statevector":
        search.reset()
        search.iterate(k)
        return search.measure(rng)[0]
    if backend == "circuit":
        n = poly.num_vars
        prep = compile_state_prep(shift(poly, -threshold), enc, variable_state)
        state = apply_circuit(StateVector.zero(n + enc.m), prep)
        g = grover_operator(prep, enc.m)
        for _ in range(k):
            state = apply_circuit(state, g)
        probs = state.probabilities()
        probs /= probs.sum()
        return int(rng.choice(probs.shape[0], p=probs)) % (1 << n)
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def amplified_measure(
    poly: BinaryPolynomial,
    threshold: float,
    rotation_count: int,
    seed,
    enc: Optional[CostEncoding] = None,
    variable_state: Optional[np.ndarray] = None,
    backend: str = "plane",
) -> tuple[tuple[int, ...], float, int]:
    """One GAS round: prepare, rotate ``rotation_count`` times, measure, evaluate.

    Backends produce the same outcome distribution: ``plane`` samples from
    the closed-form rotation in the Grover plane, ``statevector`` iterates
    the full state and ``circuit`` runs the compiled gate-level circuits.
    """
    if rotation_count < 0:
        raise ValueError("rotation_count must be non-negative")
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    enc = enc or gas_encoding(poly)
    search = AmplifiedSearch(poly, threshold, enc, variable_state)
    x_index = _measure_round(search, rotation_count, _rng(seed), backend, poly, threshold, enc, variable_state)
    assignment = index_to_assignment(x_index, poly.num_vars)
    return assignment, evaluate(poly, assignment), rotation_count


# --------------------------------------------------------------------------
# configuration and trace

@dataclass(frozen=True)
class ThresholdStrategy:
    """How the first threshold is chosen.

    ``random``: cost of one uniformly random assignment.
    ``quantile``: empirical ``q``-quantile of 64 random costs.
    ``classical``: cost of a caller-supplied approximate solution.
    ``combined``: the lower of the quantile and classical thresholds.
    """

    kind: str
    q: float = 0.1

    def __post_init__(self) -> None:
        if self.kind not in ("random", "quantile", "classical", "combined"):
            raise ValueError(f"unknown threshold strategy {self.kind!r}")
        if self.kind in ("quantile", "combined") and not 0 < self.q < 1:
            raise ValueError(f"quantile must lie in (0, 1), got {self.q}")

    @classmethod
    def parse(cls, text: Union[str, "ThresholdStrategy"]) -> "ThresholdStrategy":
        if isinstance(text, ThresholdStrategy):
            return text
        name, _, arg = str(text).strip().partition(":")
        name = {"random-sample": "random", "classical-approximate": "classical"}.get(name, name)
        if name.startswith("quantile(") and name.endswith(")"):
            name, arg = "quantile", name[len("quantile("):-1]
        if arg:
            if name not in ("quantile", "combined"):
                raise ValueError(f"strategy {name!r} takes no argument")
            return cls(name, float(arg))
        return cls(name)

    def __str__(self) -> str:
        return f"{self.kind}:{self.q:g}" if self.kind in ("quantile", "combined") else self.kind


@dataclass(frozen=True)
class GasConfig:
    m: Optional[int] = None
    lam: float = DEFAULT_LAMBDA
    max_oracle_queries: int = DEFAULT_BUDGET
    rng_seed: int = 0
    initial_threshold_strategy: str = "random"
    scale: Optional[float] = None
    patience: Optional[int] = None
    backend: str = "plane"

    def __post_init__(self) -> None:
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if not 1 < self.lam < 4 / 3:
            raise ValueError(f"lambda must lie in (1, 4/3), got {self.lam}")
        if self.max_oracle_queries < 1:
            raise ValueError("max_oracle_queries must be at least 1")
        if self.patience is not None and self.patience < 1:
            raise ValueError("patience must be at least 1")
        ThresholdStrategy.parse(self.initial_threshold_strategy)

    @property
    def strategy(self) -> ThresholdStrategy:
        return ThresholdStrategy.parse(self.initial_threshold_strategy)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


@dataclass
class GasRound:
    threshold: float
    rotation_count: int
    measured_assignment: tuple[int, ...]
    measured_cost: float
    accepted: bool


@dataclass
class GasTrace:
    rounds: list[GasRound] = field(default_factory=list)
    total_oracle_queries: int = 0
    best_assignment: tuple[int, ...] = ()
    best_cost: float = math.inf
    initial_threshold: float = math.inf
    converged: bool = False
    encoding: Optional[CostEncoding] = None

    def accepted_thresholds(self) -> list[float]:
        return [r.measured_cost for r in self.rounds if r.accepted]

    def queries_to_reach(self, target: float, tol: float = 1e-9) -> Optional[int]:
        """Oracle queries spent up to the first measurement with cost <= target.

        Returns 0 when the initial threshold already meets the target and
        ``None`` when the target is never reached.
        """
        if self.initial_threshold <= target + tol:
            return 0
        spent = 0
        for r in self.rounds:
            spent += r.rotation_count
            if r.measured_cost <= target + tol:
                return spent
        return None

    def to_dict(self) -> dict:
        return {
            "rounds": [
                {
                    "threshold": r.threshold,
                    "rotation_count": r.rotation_count,
                    "measured_assignment": list(r.measured_assignment),
                    "measured_cost": r.measured_cost,
                    "accepted": r.accepted,
                }
                for r in self.rounds
            ],
            "total_oracle_queries": self.total_oracle_queries,
            "best_assignment": list(self.best_assignment),
            "best_cost": self.best_cost,
            "initial_threshold": self.initial_threshold,
            "converged": self.converged,
            "cost_register": None if self.encoding is None else {"m": self.encoding.m, "scale": self.encoding.scale},
        }


def trace_to_json(trace: GasTrace, config: GasConfig, extra: Optional[dict] = None) -> str:
    doc = {"config": config.to_dict(), **(extra or {}), **trace.to_dict()}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# initial thresholds and the classical baseline

def _feasible_indices(num_vars: int, weight: Optional[int]) -> Optional[np.ndarray]:
    if weight is None:
        return None
    return np.flatnonzero(hamming_weights(num_vars) == weight)


def _random_indices(num_vars: int, count: int, rng, feasible: Optional[np.ndarray]) -> np.ndarray:
    if feasible is None:
        return rng.integers(0, 1 << num_vars, size=count)
    return feasible[rng.integers(0, feasible.shape[0], size=count)]


def initial_point(
    poly: BinaryPolynomial,
    strategy,
    seed,
    approximate: Optional[Sequence[int]] = None,
    dicke_weight: Optional[int] = None,
) -> tuple[float, tuple[int, ...]]:
    """Starting threshold together with an assignment achieving it."""
    strat = ThresholdStrategy.parse(strategy)
    rng = _rng(seed)
    n = poly.num_vars
    costs = evaluate_all(poly)
    feasible = _feasible_indices(n, dicke_weight)

    def quantile_point() -> tuple[float, int]:
        idx = _random_indices(n, DEFAULT_QUANTILE_SAMPLES, rng, feasible)
        order = idx[np.argsort(costs[idx], kind="stable")]
        pick = int(math.floor(strat.q * (len(order) - 1)))
        return float(costs[order[pick]]), int(order[pick])

    def classical_point() -> tuple[float, int]:
        if approximate is None:
            raise ValueError(f"strategy {strat.kind!r} needs an approximate solution")
        if len(approximate) != n:
            raise ValueError("approximate solution has the wrong length")
        i = assignment_to_index(approximate)
        return float(costs[i]), i

    if strat.kind == "random":
        i = int(_random_indices(n, 1, rng, feasible)[0])
        best = (float(costs[i]), i)
    elif strat.kind == "quantile":
        best = quantile_point()
    elif strat.kind == "classical":
        best = classical_point()
    else:
        best = min(quantile_point(), classical_point())
    return best[0], index_to_assignment(best[1], n)


def initial_threshold(poly, strategy, seed, approximate=None, dicke_weight=None) -> float:
    return initial_point(poly, strategy, seed, approximate, dicke_weight)[0]


def classical_exhaustive(
    poly: BinaryPolynomial, seed, dicke_weight: Optional[int] = None
) -> tuple[tuple[int, ...], float, int]:
    """Evaluate assignments in a seeded random order; the exact minimum.

    ``queries_used`` is the 1-based position at which a global minimiser was
    first evaluated.
    """
    n = poly.num_vars
    if n > EXHAUSTIVE_MAX_VARS:
        raise ValueError(f"exhaustive search limited to n <= {EXHAUSTIVE_MAX_VARS}")
    costs = evaluate_all(poly)
    candidates = _feasible_indices(n, dicke_weight)
    if candidates is None:
        candidates = np.arange(1 << n)
    order = _rng(seed).permutation(candidates)
    seq = costs[order]
    best = seq.min()
    pos = int(np.flatnonzero(seq == best)[0])
    return index_to_assignment(int(order[pos]), n), float(best), pos + 1


def greedy_descent(
    poly: BinaryPolynomial, start: Optional[Sequence[int]] = None, dicke_weight: Optional[int] = None
) -> tuple[int, ...]:
    """Steepest single-move descent; a cheap approximate solution.

    Moves are bit flips, or swaps of a set and an unset bit when the Hamming
    weight is constrained.  Starts from all zeros (or the lowest-index
    feasible assignment) unless ``start`` is given.
    """
    n = poly.num_vars
    costs = evaluate_all(poly)
    if start is not None:
        x = assignment_to_index(start)
    elif dicke_weight is not None:
        x = (1 << dicke_weight) - 1
    else:
        x = 0
    while True:
        if dicke_weight is None:
            moves = [x ^ (1 << i) for i in range(n)]
        else:
            ones = [i for i in range(n) if x >> i & 1]
            zeros = [i for i in range(n) if not x >> i & 1]
            moves = [x ^ (1 << i) ^ (1 << j) for i in ones for j in zeros]
        if not moves:
            break
        best = min(moves, key=lambda y: (costs[y], y))
        if costs[best] >= costs[x]:
            break
        x = best
    return index_to_assignment(x, n)


# --------------------------------------------------------------------------
# adaptive loop

class RotationSchedule:
    """Randomised exponential schedule for an unknown number of marked states.

    Draw ``k`` uniformly from ``[0, ceil(s) - 1]``; on failure grow ``s`` by
    ``lam`` up to ``cap``, on success reset it to 1.
    """

    def __init__(self, lam: float, cap: float) -> None:
        self.lam, self.cap = lam, max(1.0, cap)
        self.scale = 1.0

    @property
    def full(self) -> bool:
        return self.scale >= self.cap

    def draw(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, math.ceil(self.scale)))

    def fail(self) -> None:
        self.scale = min(self.scale * self.lam, self.cap)

    def succeed(self) -> None:
        self.scale = 1.0


def search_space_size(num_vars: int, dicke_weight: Optional[int] = None) -> int:
    return math.comb(num_vars, dicke_weight) if dicke_weight is not None else 1 << num_vars


def default_patience(space: int) -> int:
    return max(1, 3 * math.ceil(math.log2(max(space, 2))))


def run_gas(
    poly: BinaryPolynomial,
    config: GasConfig = GasConfig(),
    approximate: Optional[Sequence[int]] = None,
    dicke_weight: Optional[int] = None,
) -> GasTrace:
    """Minimise ``poly`` by Grover adaptive search.

    With ``dicke_weight=k`` the variable register starts in the Dicke state of
    weight ``k`` and the search never leaves the weight-``k`` assignments.
    Stops after ``patience`` consecutive failures at the full schedule
    (converged) or when the next round would exceed the query budget.
    """
    n = poly.num_vars
    init_seq, loop_seq = np.random.SeedSequence(config.rng_seed).spawn(2)
    init_rng, rng = np.random.default_rng(init_seq), np.random.default_rng(loop_seq)
    enc = gas_encoding(poly, config.m, config.scale, dicke_weight)
    variable_state = None if dicke_weight is None else dicke_state(n, dicke_weight).amplitudes
    space = search_space_size(n, dicke_weight)
    patience = config.patience or default_patience(space)

    threshold, best = initial_point(poly, config.strategy, init_rng, approximate, dicke_weight)
    trace = GasTrace(best_assignment=best, best_cost=threshold, initial_threshold=threshold, encoding=enc)
    schedule = RotationSchedule(config.lam, math.sqrt(space))
    search = None
    failures_at_full = 0
    while failures_at_full < patience:
        k = schedule.draw(rng)
        if trace.total_oracle_queries + k > config.max_oracle_queries:
            return trace
        if search is None:
            search = AmplifiedSearch(poly, threshold, enc, variable_state)
        x_index = _measure_round(search, k, rng, config.backend, poly, threshold, enc, variable_state)
        x = index_to_assignment(x_index, n)
        cost = float(search.costs[x_index])
        trace.total_oracle_queries += k
        accepted = cost < threshold
        trace.rounds.append(GasRound(threshold, k, x, cost, accepted))
        if accepted:
            threshold = cost
            trace.best_assignment, trace.best_cost = x, cost
            schedule.succeed()
            failures_at_full = 0
            search = None
        else:
            if schedule.full:
                failures_at_full += 1
            schedule.fail()
    trace.converged = True
    return trace


def grover_search(
    poly: BinaryPolynomial,
    threshold: float,
    config: GasConfig = GasConfig(),
    enc: Optional[CostEncoding] = None,
) -> tuple[tuple[int, ...], float, int]:
    """Repeat rounds at a fixed threshold until a cost below it is measured.

    Returns (assignment, cost, oracle queries spent).  Used to measure the
    cost of finding a marked state when the number of marked states is
    unknown.
    """
    rng = np.random.default_rng(config.rng_seed)
    enc = enc or gas_encoding(poly, config.m, config.scale)
    search = AmplifiedSearch(poly, threshold, enc)
    if search.marked_probability < 1e-15:
        raise ValueError("no state lies below the threshold")
    schedule = RotationSchedule(config.lam, math.sqrt(1 << poly.num_vars))
    spent = 0
    while spent <= config.max_oracle_queries:
        k = schedule.draw(rng)
        spent += k
        x_index = _measure_round(search, k, rng, config.backend, poly, threshold, enc, None)
        cost = float(search.costs[x_index])
        if cost < threshold:
            return index_to_assignment(x_index, poly.num_vars), cost, spent
        schedule.fail()
    raise RuntimeError("query budget exhausted before a marked state was measured")


def grover_success_probability(num_items: int, num_marked: int, iterations: int) -> float:
    """Closed form ``sin^2((2k+1) asin(sqrt(M/N)))``."""
    theta = math.asin(math.sqrt(num_marked / num_items))
    return math.sin((2 * iterations + 1) * theta) ** 2
