"""Seeded query-count experiments on random MIMO detection instances.

Each trial builds an instance, finds the exact optimum by enumeration, then
records how many queries each method spends before it first sees an
optimal assignment.  The classical baseline is recorded under the strategy
name ``exhaustive`` and counts cost evaluations; GAS strategies count
Grover iterations.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .gas import GasConfig, ThresholdStrategy, classical_exhaustive, run_gas
from .mimo import bits_per_symbol, generate_mimo, linear_detector, ml_cost_polynomial
from .poly import evaluate_all
from .sim import check_qubit_budget

CSV_COLUMNS = ("trial", "strategy", "n", "queries_to_optimum", "converged", "best_cost", "optimal_cost")
EXHAUSTIVE = "exhaustive"
DEFAULT_STRATEGIES = ("random", "quantile:0.1", "classical", "combined")
MAX_EXPERIMENT_BITS = 12


@dataclass
class TrialRecord:
    trial: int
    strategy: str
    n: int
    queries_to_optimum: Optional[int]
    converged: bool
    best_cost: float
    optimal_cost: float
    rounds_to_optimum: Optional[int] = None

    def csv_row(self) -> list:
        q = -1 if self.queries_to_optimum is None else self.queries_to_optimum
        return [self.trial, self.strategy, self.n, q, int(self.converged),
                repr(float(self.best_cost)), repr(float(self.optimal_cost))]


@dataclass
class ExperimentConfig:
    num_tx: int
    modulation: str
    snr_db: float
    trials: int
    strategies: tuple[str, ...]
    seed: int
    num_rx: Optional[int] = None
    m: Optional[int] = None
    lam: float = GasConfig.lam
    budget: int = GasConfig.max_oracle_queries

    @property
    def receivers(self) -> int:
        return self.num_rx if self.num_rx is not None else self.num_tx

    @property
    def num_bits(self) -> int:
        return self.num_tx * bits_per_symbol(self.modulation)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["strategies"] = list(self.strategies)
        d["num_rx"] = self.receivers
        d["lambda"] = d.pop("lam")
        d["snr_db"] = _json_float(self.snr_db)
        return d


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord] = field(default_factory=list)

    def by_strategy(self, strategy: str) -> list[TrialRecord]:
        return [r for r in self.records if r.strategy == strategy]

    def strategies(self) -> list[str]:
        return [EXHAUSTIVE, *self.config.strategies]

    def queries(self, strategy: str) -> np.ndarray:
        """Queries to optimum per trial; ``nan`` where the optimum was never reached."""
        return np.array([np.nan if r.queries_to_optimum is None else r.queries_to_optimum
                         for r in self.by_strategy(strategy)], dtype=float)

    def mean_queries(self, strategy: str) -> float:
        q = self.queries(strategy)
        return float(np.nanmean(q)) if q.size and not np.all(np.isnan(q)) else math.nan

    def cdf(self, strategy: str) -> list[tuple[int, float]]:
        """Empirical CDF: (query count, fraction of trials at or below it)."""
        q = self.queries(strategy)
        total = q.size
        reached = np.sort(q[~np.isnan(q)]).astype(int)
        values, counts = np.unique(reached, return_counts=True)
        cum = np.cumsum(counts)
        return [(int(v), float(c) / total) for v, c in zip(values, cum)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.records:
            w.writerow(r.csv_row())
        return buf.getvalue()

    def summary(self) -> dict:
        doc = {"config": self.config.to_dict(), "strategies": {}}
        for s in self.strategies():
            recs = self.by_strategy(s)
            doc["strategies"][s] = {
                "trials": len(recs),
                "reached": sum(r.queries_to_optimum is not None for r in recs),
                "mean_queries": _json_float(self.mean_queries(s)),
                "cdf": [[q, f] for q, f in self.cdf(s)],
            }
        return doc

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def _json_float(x: float):
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _trial_seeds(seed: int, trials: int) -> list[tuple[int, int, int]]:
    """(instance, classical order, GAS) seeds per trial."""
    out = []
    for child in np.random.SeedSequence(seed).spawn(trials):
        a, b, c = (int(v) for v in child.generate_state(3, dtype=np.uint32))
        out.append((a, b, c))
    return out


def run_trial(cfg: ExperimentConfig, trial: int, seeds: tuple[int, int, int]) -> list[TrialRecord]:
    inst_seed, order_seed, gas_seed = seeds
    inst = generate_mimo(cfg.num_tx, cfg.receivers, cfg.modulation, cfg.snr_db, inst_seed)
    poly = ml_cost_polynomial(inst)
    n = poly.num_vars
    optimum = float(evaluate_all(poly).min())

    records = []
    _, cost, pos = classical_exhaustive(poly, order_seed)
    records.append(TrialRecord(trial, EXHAUSTIVE, n, pos, True, cost, optimum, pos))

    approx = linear_detector(inst)
    for name in cfg.strategies:
        gcfg = GasConfig(m=cfg.m, lam=cfg.lam, max_oracle_queries=cfg.budget,
                         rng_seed=gas_seed, initial_threshold_strategy=name)
        needs_approx = ThresholdStrategy.parse(name).kind in ("classical", "combined")
        trace = run_gas(poly, gcfg, approximate=approx if needs_approx else None)
        q = trace.queries_to_reach(optimum)
        rounds = None
        if q is not None:
            rounds = 0
            if trace.initial_threshold > optimum + 1e-9:
                for r in trace.rounds:
                    rounds += 1
                    if r.measured_cost <= optimum + 1e-9:
                        break
        records.append(TrialRecord(trial, name, n, q, trace.converged, trace.best_cost, optimum, rounds))
    return records


def check_experiment_size(num_tx: int, modulation: str, m: Optional[int] = None) -> None:
    """Reject sizes beyond the enumeration limit or the simulator's qubit cap."""
    nb = num_tx * bits_per_symbol(modulation)
    if nb > MAX_EXPERIMENT_BITS:
        raise ValueError(f"{nb} bits exceeds the experiment limit of {MAX_EXPERIMENT_BITS}")
    check_qubit_budget(nb + (m if m is not None else 8))


def run_query_experiment(
    num_tx: int,
    modulation: str,
    snr_db: float,
    trials: int,
    strategies: Sequence[str] = DEFAULT_STRATEGIES,
    seed: int = 0,
    m: Optional[int] = None,
    num_rx: Optional[int] = None,
    lam: float = GasConfig.lam,
    budget: int = GasConfig.max_oracle_queries,
) -> ExperimentResult:
    if trials < 0:
        raise ValueError("trials must be non-negative")
    for s in strategies:
        ThresholdStrategy.parse(s)
    cfg = ExperimentConfig(num_tx, modulation.upper(), float(snr_db), trials, tuple(strategies),
                           seed, num_rx, m, lam, budget)
    check_experiment_size(num_tx, cfg.modulation, m)
    result = ExperimentResult(cfg)
    for t, seeds in enumerate(_trial_seeds(seed, trials)):
        result.records.extend(run_trial(cfg, t, seeds))
    result.records.sort(key=lambda r: (r.trial, result.strategies().index(r.strategy)))
    return result
