"""Max-min codebook selection with a power-mean surrogate and Dicke-constrained search.

Pick ``k`` of ``n_c`` candidate lines maximising the minimum pairwise
chordal distance.  For a fixed number of selected points, ranking
selections by ``sum(d_ij ** p)`` over selected pairs (``p < 0``) is the same
as ranking them by the power mean ``(mean(d_ij ** p)) ** (1 / p)``, which
tends to the minimum distance as ``p`` goes to minus infinity.  The
quadratic surrogate has no cardinality penalty; GAS keeps exactly ``k``
points selected by starting from the Dicke state of weight ``k``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .gas import GasConfig, GasTrace, run_gas
from .grassmann import Codebook
from .poly import BinaryPolynomial, power_mean_min

DEFAULT_EXPONENT = -8.0
MAX_CANDIDATES = 16
_DUPLICATE_TOL = 1e-9


def _distances(cb: Codebook) -> np.ndarray:
    return cb.distance_matrix()


def _check(cb: Codebook, k: int, p: float) -> None:
    n_c = len(cb)
    if n_c > MAX_CANDIDATES:
        raise ValueError(f"at most {MAX_CANDIDATES} candidates supported, got {n_c}")
    if not 2 <= k <= n_c:
        raise ValueError(f"select k={k} must satisfy 2 <= k <= {n_c}")
    if not p < 0:
        raise ValueError("exponent p must be negative")


def maxmin_codebook_polynomial(
    candidates: Codebook, k: int, p: float = DEFAULT_EXPONENT
) -> BinaryPolynomial:
    """Quadratic surrogate ``sum_{i<j} (d_ij / d_min) ** p * b_i * b_j``.

    Normalising by the smallest candidate distance keeps every coefficient in
    ``(0, 1]``.  Minimising it over weight-``k`` selections maximises the
    power-mean proxy of the minimum distance.
    """
    _check(candidates, k, p)
    d = _distances(candidates)
    n_c = len(candidates)
    pairs = list(itertools.combinations(range(n_c), 2))
    d_min = min(d[i, j] for i, j in pairs)
    if d_min <= _DUPLICATE_TOL:
        raise ValueError("candidate set contains duplicate points (zero distance)")
    terms = [((d[i, j] / d_min) ** p, (i, j)) for i, j in pairs]
    return BinaryPolynomial.from_terms(n_c, terms)


def selected(assignment: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, b in enumerate(assignment) if b)


def min_pairwise_distance(candidates: Codebook, selection: Sequence[int]) -> float:
    d = _distances(candidates)
    return float(min(d[i, j] for i, j in itertools.combinations(selection, 2)))


def proxy_distance(candidates: Codebook, selection: Sequence[int], p: float = DEFAULT_EXPONENT) -> float:
    """Power mean of the pairwise chordal distances of ``selection``."""
    d = _distances(candidates)
    return power_mean_min([d[i, j] for i, j in itertools.combinations(selection, 2)], p)


@dataclass
class SelectionResult:
    selection: tuple[int, ...]
    min_distance: float
    proxy: float
    trace: Optional[GasTrace] = None


def brute_force_maxmin(candidates: Codebook, k: int) -> tuple[float, list[tuple[int, ...]]]:
    """Best achievable minimum distance and every selection attaining it."""
    d = _distances(candidates)
    best, winners = -1.0, []
    for sel in itertools.combinations(range(len(candidates)), k):
        val = min(d[i, j] for i, j in itertools.combinations(sel, 2))
        if val > best + 1e-12:
            best, winners = val, [sel]
        elif abs(val - best) <= 1e-12:
            winners.append(sel)
    return best, winners


def brute_force_proxy(candidates: Codebook, k: int, p: float = DEFAULT_EXPONENT) -> tuple[float, list[tuple[int, ...]]]:
    """Largest power-mean proxy over weight-``k`` selections and its maximisers."""
    best, winners = -1.0, []
    for sel in itertools.combinations(range(len(candidates)), k):
        val = proxy_distance(candidates, sel, p)
        if val > best + 1e-12:
            best, winners = val, [sel]
        elif abs(val - best) <= 1e-12:
            winners.append(sel)
    return best, winners


def solve_maxmin(
    candidates: Codebook,
    k: int,
    p: float = DEFAULT_EXPONENT,
    config: GasConfig = GasConfig(),
) -> SelectionResult:
    """GAS over the Dicke-restricted search space."""
    poly = maxmin_codebook_polynomial(candidates, k, p)
    if k == len(candidates):
        sel = tuple(range(k))
        return SelectionResult(sel, min_pairwise_distance(candidates, sel), proxy_distance(candidates, sel, p))
    trace = run_gas(poly, config, dicke_weight=k)
    sel = selected(trace.best_assignment)
    return SelectionResult(sel, min_pairwise_distance(candidates, sel), proxy_distance(candidates, sel, p), trace)


def equator_points(count: int) -> Codebook:
    """``count`` equally spaced states on the Bloch-sphere equator."""
    s = 1 / math.sqrt(2)
    return Codebook.from_vectors(
        [(s, s * np.exp(2j * np.pi * i / count)) for i in range(count)]
    )
