"""MIMO maximum-likelihood detection as a binary quadratic program.

Symbols have unit average energy.  BPSK maps bit ``b`` to ``1 - 2b``;
QPSK uses one bit per rail, ``((1 - 2b_I) + 1j (1 - 2b_Q)) / sqrt(2)``,
with symbol ``i`` on bits ``2i`` (in-phase) and ``2i + 1`` (quadrature).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .poly import BinaryPolynomial

MODULATIONS = ("BPSK", "QPSK")


def bits_per_symbol(modulation: str) -> int:
    mod = modulation.upper()
    if mod == "BPSK":
        return 1
    if mod == "QPSK":
        return 2
    raise ValueError(f"unsupported modulation {modulation!r}")


@dataclass(frozen=True, eq=False)
class MimoInstance:
    num_tx: int
    num_rx: int
    channel: np.ndarray
    received: np.ndarray
    modulation: str
    noise_variance: float
    rng_seed: int
    transmitted_bits: tuple[int, ...] = ()

    @property
    def num_bits(self) -> int:
        return self.num_tx * bits_per_symbol(self.modulation)


def _affine_map(modulation: str, num_tx: int) -> tuple[np.ndarray, np.ndarray]:
    """(offset, D) with symbols ``s = offset + D @ b``."""
    mod = modulation.upper()
    bps = bits_per_symbol(mod)
    offset = np.zeros(num_tx, dtype=np.complex128)
    D = np.zeros((num_tx, num_tx * bps), dtype=np.complex128)
    if mod == "BPSK":
        offset[:] = 1.0
        for i in range(num_tx):
            D[i, i] = -2.0
    else:
        a = 1 / math.sqrt(2)
        offset[:] = a + 1j * a
        for i in range(num_tx):
            D[i, 2 * i] = -2 * a
            D[i, 2 * i + 1] = -2j * a
    return offset, D


def bits_to_symbols(bits, modulation: str) -> np.ndarray:
    b = np.asarray(bits, dtype=np.float64)
    num_tx = b.shape[0] // bits_per_symbol(modulation)
    offset, D = _affine_map(modulation, num_tx)
    return offset + D @ b


def symbols_to_bits(symbols, modulation: str) -> tuple[int, ...]:
    """Hard decision per rail (nearest alphabet point)."""
    s = np.asarray(symbols, dtype=np.complex128)
    mod = modulation.upper()
    if mod == "BPSK":
        return tuple(int(v.real < 0) for v in s)
    bits_per_symbol(mod)
    out: list[int] = []
    for v in s:
        out += [int(v.real < 0), int(v.imag < 0)]
    return tuple(out)


def noise_variance_for(snr_db: float) -> float:
    """Per-symbol SNR with unit symbol energy; ``inf`` dB gives a noiseless channel."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return 10 ** (-snr_db / 10)


def generate_mimo(
    num_tx: int, num_rx: int, modulation: str, snr_db: float, seed: int
) -> MimoInstance:
    """Rayleigh channel, uniform bits, circular Gaussian noise; all from ``seed``."""
    if num_tx < 1 or num_rx < 1:
        raise ValueError("antenna counts must be positive")
    mod = modulation.upper()
    nb = num_tx * bits_per_symbol(mod)
    rng = np.random.default_rng(seed)
    H = (rng.standard_normal((num_rx, num_tx)) + 1j * rng.standard_normal((num_rx, num_tx))) / math.sqrt(2)
    bits = rng.integers(0, 2, size=nb)
    sigma2 = noise_variance_for(snr_db)
    w = math.sqrt(sigma2 / 2) * (rng.standard_normal(num_rx) + 1j * rng.standard_normal(num_rx))
    y = H @ bits_to_symbols(bits, mod) + w
    return MimoInstance(num_tx, num_rx, H, y, mod, sigma2, seed, tuple(int(b) for b in bits))


def with_channel(inst: MimoInstance, channel, received) -> MimoInstance:
    """Copy of ``inst`` with an explicit channel and received vector."""
    H = np.asarray(channel, dtype=np.complex128)
    y = np.asarray(received, dtype=np.complex128)
    return MimoInstance(H.shape[1], H.shape[0], H, y, inst.modulation, inst.noise_variance,
                        inst.rng_seed, inst.transmitted_bits)


def ml_metric(inst: MimoInstance, bits) -> float:
    r = inst.received - inst.channel @ bits_to_symbols(bits, inst.modulation)
    return float(np.vdot(r, r).real)


def ml_cost_polynomial(inst: MimoInstance) -> BinaryPolynomial:
    """``||y - H s(b)||^2`` expanded in the bits (degree 2, exact including the constant)."""
    offset, D = _affine_map(inst.modulation, inst.num_tx)
    A = inst.channel @ D
    r0 = inst.received - inst.channel @ offset
    gram = (A.conj().T @ A).real
    lin = -2 * (r0.conj() @ A).real
    nb = A.shape[1]
    terms = [(lin[i] + gram[i, i], (i,)) for i in range(nb)]
    terms += [(2 * gram[i, j], (i, j)) for i in range(nb) for j in range(i + 1, nb)]
    return BinaryPolynomial.from_terms(nb, terms, float(np.vdot(r0, r0).real))


def exhaustive_ml(inst: MimoInstance) -> tuple[tuple[int, ...], float]:
    """Brute force over symbol vectors; ties go to the lowest bit index."""
    nb = inst.num_bits
    best, best_cost = None, math.inf
    for idx in range(1 << nb):
        bits = tuple((idx >> i) & 1 for i in range(nb))
        cost = ml_metric(inst, bits)
        if cost < best_cost:
            best, best_cost = bits, cost
    return best, best_cost


def linear_detector(inst: MimoInstance) -> tuple[int, ...]:
    """MMSE estimate ``(H^H H + sigma^2 I)^-1 H^H y`` quantised per rail."""
    H, y = inst.channel, inst.received
    gram = H.conj().T @ H
    reg = inst.noise_variance
    if reg == 0.0 and np.linalg.matrix_rank(gram) < inst.num_tx:
        reg = 1e-9 * max(1.0, float(np.trace(gram).real))
    s_hat = np.linalg.solve(gram + reg * np.eye(inst.num_tx), H.conj().T @ y)
    return symbols_to_bits(s_hat, inst.modulation)


def bit_errors(inst: MimoInstance, bits) -> int:
    return sum(int(a != b) for a, b in zip(inst.transmitted_bits, bits))


def all_symbol_vectors(modulation: str, num_tx: int):
    """Every transmit vector with its bits (diagnostic enumeration)."""
    nb = num_tx * bits_per_symbol(modulation)
    for bits in itertools.product((0, 1), repeat=nb):
        yield bits, bits_to_symbols(bits, modulation)
