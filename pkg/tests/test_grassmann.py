import itertools
import math
import warnings

import numpy as np
import pytest

from oracles import chordal
from qgas.grassmann import (
    Codebook,
    CodebookWarning,
    PureState,
    bloch_coordinates,
    chordal_distance,
    fidelity,
    format_codebook,
    min_chordal_distance,
    mub_codebook,
    parse_codebook,
    random_state,
)

S = 1 / math.sqrt(2)
ZERO, ONE, PLUS = PureState((1, 0)), PureState((0, 1)), PureState((S, S))


def test_pure_state_requires_unit_norm():
    with pytest.raises(ValueError):
        PureState((1, 1))
    with pytest.raises(ValueError):
        PureState.from_vector((0, 0))
    assert PureState.from_vector((3, 4j)) == PureState((0.6, 0.8j))


def test_equality_ignores_global_phase():
    u = PureState((S, 1j * S))
    assert u == PureState(np.exp(1.3j) * np.array([S, 1j * S]))
    assert hash(u) == hash(PureState(-np.array([S, 1j * S])))
    assert u != PureState((S, -1j * S))


def test_fidelity_examples():
    assert fidelity(ZERO, ZERO) == pytest.approx(1)
    assert fidelity(ZERO, ONE) == pytest.approx(0)
    assert fidelity(ZERO, PLUS) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        fidelity(ZERO, PureState((1, 0, 0)))


def test_chordal_examples():
    assert chordal_distance(ZERO, ZERO) == pytest.approx(0, abs=1e-12)
    assert chordal_distance(ZERO, ONE) == pytest.approx(1)
    assert chordal_distance(ZERO, PLUS) == pytest.approx(0.70711, abs=1e-5)


def test_bloch_examples():
    assert np.allclose(bloch_coordinates(ZERO), (0, 0, 1))
    assert np.allclose(bloch_coordinates(ONE), (0, 0, -1))
    assert np.allclose(bloch_coordinates(PLUS), (1, 0, 0))
    with pytest.raises(ValueError):
        bloch_coordinates(PureState((1, 0, 0)))


def test_phase_invariance_and_unit_bloch():
    rng = np.random.default_rng(0)
    for _ in range(200):
        u, v = random_state(2, rng), random_state(2, rng)
        w = np.exp(1j * rng.uniform(0, 2 * np.pi))
        rotated = PureState(w * u.vector)
        assert fidelity(rotated, v) == pytest.approx(fidelity(u, v), abs=1e-12)
        assert np.allclose(bloch_coordinates(rotated), bloch_coordinates(u), atol=1e-12)
        assert np.linalg.norm(bloch_coordinates(u)) == pytest.approx(1, abs=1e-10)


def test_chordal_matches_oracle():
    rng = np.random.default_rng(1)
    for dim in (2, 3, 4):
        for _ in range(50):
            u, v = random_state(dim, rng), random_state(dim, rng)
            assert chordal_distance(u, v) == pytest.approx(chordal(u.vector, v.vector), abs=1e-12)
            assert chordal_distance(u, v) == pytest.approx(chordal_distance(v, u), abs=1e-15)


def test_mub_codebook_structure():
    cb = mub_codebook()
    assert len(cb) == 6
    fid = cb.fidelity_matrix()
    for i, j in itertools.combinations(range(6), 2):
        expected = 0.0 if i // 2 == j // 2 else 0.5
        assert fid[i, j] == pytest.approx(expected, abs=1e-12)
    assert min_chordal_distance(cb) == pytest.approx(0.70711, abs=1e-5)


def test_min_distance_examples():
    assert min_chordal_distance(Codebook([ZERO, ZERO, ONE])) == pytest.approx(0, abs=1e-12)
    basis = Codebook.from_vectors(np.eye(3))
    assert min_chordal_distance(basis) == pytest.approx(1)
    with pytest.raises(ValueError):
        Codebook([ZERO])


def test_mub_is_locally_optimal():
    cb = mub_codebook()
    base = min_chordal_distance(cb)
    rng = np.random.default_rng(7)
    for _ in range(1000):
        pts = []
        for p in cb.points:
            d = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            pts.append(p.vector + 0.05 * d / np.linalg.norm(d))
        assert min_chordal_distance(Codebook.from_vectors(pts)) <= base + 1e-12


def test_codebook_file_roundtrip_and_warning():
    cb = mub_codebook()
    again = parse_codebook(format_codebook(cb))
    assert all(a == b for a, b in zip(cb.points, again.points))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        parsed = parse_codebook("2+0j,0+0j\n1+0j,1+0j\n")
    assert any(issubclass(w.category, CodebookWarning) for w in caught)
    assert parsed.points[0] == ZERO and parsed.points[1] == PLUS


def test_codebook_parse_error_names_line():
    with pytest.raises(ValueError, match="line 2"):
        parse_codebook("1+0j,0j\nabc,1\n")
