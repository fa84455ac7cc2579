"""Lines in C^d modulo phase: fidelity, chordal distance, Bloch vectors, codebooks."""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

UNIT_TOL = 1e-10


class CodebookWarning(UserWarning):
    pass


def _canonical(vec: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(vec) > 1e-15)
    if nz.size:
        lead = vec[nz[0]]
        vec = vec * (np.conj(lead) / abs(lead))
    return vec


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector representing a point of complex projective space.

    The stored vector has its first nonzero coordinate real and positive,
    so two states that differ by a global phase store the same vector.
    """

    vector: np.ndarray

    def __post_init__(self) -> None:
        vec = np.asarray(self.vector, dtype=np.complex128).ravel().copy()
        if vec.shape[0] < 2:
            raise ValueError("states need dimension >= 2")
        nrm = np.linalg.norm(vec)
        if abs(nrm - 1) > UNIT_TOL:
            raise ValueError(f"state vector must have unit norm, got {nrm:.12g}")
        vec = _canonical(vec)
        vec.setflags(write=False)
        object.__setattr__(self, "vector", vec)

    @classmethod
    def from_vector(cls, vector: Sequence[complex]) -> "PureState":
        """Normalise first; raises on the zero vector."""
        vec = np.asarray(vector, dtype=np.complex128).ravel()
        nrm = np.linalg.norm(vec)
        if nrm == 0:
            raise ValueError("cannot normalise the zero vector")
        return cls(vec / nrm)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PureState):
            return NotImplemented
        return self.dim == other.dim and fidelity(self, other) > 1 - 1e-12

    def __hash__(self) -> int:
        return hash(tuple(np.round(self.vector, 9)))


def _vec(u) -> np.ndarray:
    return u.vector if isinstance(u, PureState) else np.asarray(u, dtype=np.complex128).ravel()


def fidelity(u, v) -> float:
    """``|<u, v>|**2`` for unit vectors."""
    a, b = _vec(u), _vec(v)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def chordal_distance(u, v) -> float:
    return math.sqrt(max(0.0, 1.0 - fidelity(u, v)))


def bloch_coordinates(u) -> tuple[float, float, float]:
    """Pauli expectation values (<X>, <Y>, <Z>) of a qubit state."""
    a = _vec(u)
    if a.shape[0] != 2:
        raise ValueError("Bloch coordinates need a two-dimensional state")
    c = np.conj(a[0]) * a[1]
    return (float(2 * c.real), float(2 * c.imag), float(abs(a[0]) ** 2 - abs(a[1]) ** 2))


@dataclass(frozen=True)
class Codebook:
    points: tuple[PureState, ...]

    def __post_init__(self) -> None:
        pts = tuple(p if isinstance(p, PureState) else PureState(p) for p in self.points)
        if len(pts) < 2:
            raise ValueError("a codebook needs at least two points")
        dims = {p.dim for p in pts}
        if len(dims) != 1:
            raise ValueError(f"points have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[complex]]) -> "Codebook":
        return cls(tuple(PureState.from_vector(v) for v in vectors))

    @property
    def dim(self) -> int:
        return self.points[0].dim

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i) -> PureState:
        return self.points[i]

    def fidelity_matrix(self) -> np.ndarray:
        mat = np.array([p.vector for p in self.points])
        return np.minimum(np.abs(mat.conj() @ mat.T) ** 2, 1.0)

    def distance_matrix(self) -> np.ndarray:
        return np.sqrt(np.maximum(0.0, 1.0 - self.fidelity_matrix()))


def min_chordal_distance(cb: Codebook) -> float:
    if len(cb) < 2:
        raise ValueError("need at least two points")
    return min(chordal_distance(a, b) for a, b in itertools.combinations(cb.points, 2))


def mub_codebook() -> Codebook:
    """Eigenbases of Z, X and Y: six qubit states, pairwise unbiased across bases."""
    s = 1 / math.sqrt(2)
    return Codebook.from_vectors(
        [
            (1, 0),
            (0, 1),
            (s, s),
            (s, -s),
            (s, 1j * s),
            (s, -1j * s),
        ]
    )


def random_state(dim: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState.from_vector(v)


# --------------------------------------------------------------------------
# file format: one point per line, comma-separated ``re+imj`` entries

def _fmt(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def format_codebook(cb: Codebook) -> str:
    return "".join(",".join(_fmt(z) for z in p.vector) + "\n" for p in cb.points)


def parse_codebook(text: str) -> Codebook:
    """Read points, normalising (with a warning) any that are not unit vectors."""
    vectors = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vec = np.array([complex(tok.replace(" ", "")) for tok in line.split(",")])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: cannot parse {line!r}") from exc
        nrm = np.linalg.norm(vec)
        if nrm == 0:
            raise ValueError(f"line {lineno}: zero vector")
        if abs(nrm - 1) > 1e-9:
            warnings.warn(f"line {lineno}: norm {nrm:.6g}, normalised", CodebookWarning, stacklevel=2)
        vectors.append(vec / nrm)
    return Codebook(tuple(PureState(v) for v in vectors))
