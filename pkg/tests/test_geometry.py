import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import unit_vectors
from leggettsim.geometry import (
    _TETRA,
    X,
    Y,
    Z,
    DegenerateTensorError,
    SettingsConfig,
    adapt_to_state,
    canonical_i26,
    canonical_i28,
    fibonacci_sphere,
    geometric_factor,
    make_pair,
)
from leggettsim.qstate import CorrelationTensor, correlation_tensor, werner

PHI_OPT_26 = 2 * math.atan(1 / 3)


def angle(a, b):
    return math.atan2(np.linalg.norm(np.cross(a, b)), float(a @ b))


def check_config_invariants(config):
    for pair in config.pairs:
        assert angle(pair.m, pair.m_prime) == pytest.approx(pair.phi, abs=1e-9)
        assert abs(pair.u @ pair.e_hat) < 1e-9
        c, s = math.cos(pair.phi / 2), math.sin(pair.phi / 2)
        assert np.allclose(pair.m, c * pair.u + s * pair.e_hat, atol=1e-12)
        assert np.allclose(pair.m_prime, c * pair.u - s * pair.e_hat, atol=1e-12)
        su = pair.m + pair.m_prime
        if np.linalg.norm(su) > 1e-9:
            assert np.linalg.norm(np.cross(su, pair.u)) < 1e-9
        de = pair.m - pair.m_prime
        if np.linalg.norm(de) > 1e-9:
            assert np.linalg.norm(np.cross(de, pair.e_hat)) < 1e-9


class TestMakePair:
    def test_coincident(self):
        pair = make_pair(Z, X, 0.0)
        assert np.allclose(pair.m, Z) and np.allclose(pair.m_prime, Z)

    def test_antipodal(self):
        pair = make_pair(Z, X, math.pi)
        assert np.allclose(pair.m, X, atol=1e-15)
        assert np.allclose(pair.m_prime, -X, atol=1e-15)

    def test_optimal_angle_coordinates(self):
        pair = make_pair(Z, X, math.radians(36.8699))
        assert np.allclose(pair.m, [0.31623, 0, 0.94868], atol=1e-5)
        assert np.allclose(pair.m_prime, [-0.31623, 0, 0.94868], atol=1e-5)

    def test_non_orthogonal_rejected(self):
        with pytest.raises(ValueError):
            make_pair(Z, Z, 0.5)

    def test_phi_out_of_range(self):
        with pytest.raises(ValueError):
            make_pair(Z, X, 3.5)

    @given(unit_vectors(), st.floats(1e-6, math.pi - 1e-6))
    @settings(max_examples=50)
    def test_reconstruction(self, u, phi):
        # build an orthogonal e_hat from an arbitrary transversal direction
        seed = X if abs(u @ X) < 0.9 else Y
        e_hat = np.cross(u, seed)
        e_hat /= np.linalg.norm(e_hat)
        pair = make_pair(u, e_hat, phi)
        rebuilt = make_pair(pair.u, pair.e_hat, angle(pair.m, pair.m_prime))
        assert np.allclose(rebuilt.m, pair.m, atol=1e-10)
        assert np.allclose(rebuilt.m_prime, pair.m_prime, atol=1e-10)


class TestCanonicalConfigs:
    @given(st.floats(0, math.pi))
    @settings(max_examples=50)
    def test_i26_invariants(self, phi):
        config = canonical_i26(phi)
        assert len(config.alice) == 2 and len(config.pairs) == 3
        assert config.pairing == (0, 0, 1)
        check_config_invariants(config)
        e = [p.e_hat for p in config.pairs]
        for i in range(3):
            for j in range(i + 1, 3):
                assert abs(e[i] @ e[j]) < 1e-9

    @given(st.floats(0, math.pi))
    @settings(max_examples=50)
    def test_i28_invariants(self, phi):
        config = canonical_i28(phi)
        assert len(config.alice) == 2 and len(config.pairs) == 4
        assert config.pairing == (0, 0, 1, 1)
        check_config_invariants(config)
        e = [p.e_hat for p in config.pairs]
        for i in range(4):
            for j in range(i + 1, 4):
                assert e[i] @ e[j] == pytest.approx(-1 / 3, abs=1e-9)

    def test_i28_alice_orthogonal(self):
        config = canonical_i28(1.0)
        assert abs(config.alice[0] @ config.alice[1]) < 1e-12

    def test_i26_phi_zero_pairs_coincide(self):
        for pair in canonical_i26(0.0).pairs:
            assert np.allclose(pair.m, pair.m_prime, atol=1e-15)
            assert np.allclose(pair.m, pair.u, atol=1e-15)

    def test_phi_out_of_range(self):
        with pytest.raises(ValueError):
            canonical_i26(-0.1)
        with pytest.raises(ValueError):
            canonical_i28(4.0)


class TestAdaptToState:
    def test_singlet_flips_bisectors(self):
        singlet = CorrelationTensor(t=-np.eye(3), a=np.zeros(3), b=np.zeros(3))
        config = adapt_to_state(singlet, canonical_i26(PHI_OPT_26))
        for i, pair in enumerate(config.pairs):
            n = config.alice[config.pairing[i]]
            assert np.allclose(n, -pair.u, atol=1e-12)
            term = abs(n @ singlet.t @ pair.m + n @ singlet.t @ pair.m_prime)
            assert term == pytest.approx(2 * math.cos(PHI_OPT_26 / 2), abs=1e-12)

    def test_phi_minus_keeps_z(self):
        tensor = correlation_tensor(werner(1.0, "phi_minus"))
        config = adapt_to_state(tensor, canonical_i26(1.0))
        assert np.allclose(config.alice[0], Z, atol=1e-12)
        assert np.allclose(config.alice[1], -X, atol=1e-12)

    def test_scaled_tensor(self):
        tensor = CorrelationTensor(t=-0.9 * np.eye(3), a=np.zeros(3), b=np.zeros(3))
        config = adapt_to_state(tensor, canonical_i26(PHI_OPT_26))
        for i, pair in enumerate(config.pairs):
            n = config.alice[config.pairing[i]]
            term = abs(n @ tensor.t @ pair.m + n @ tensor.t @ pair.m_prime)
            assert term == pytest.approx(1.8 * math.cos(PHI_OPT_26 / 2), abs=1e-12)

    def test_degenerate_tensor(self):
        zero = CorrelationTensor(t=np.zeros((3, 3)), a=np.zeros(3), b=np.zeros(3))
        with pytest.raises(DegenerateTensorError):
            adapt_to_state(zero, canonical_i26(1.0))


class TestGeometricFactor:
    def test_orthogonal_triad(self):
        assert geometric_factor([X, Y, Z], 10000) == pytest.approx(1.0, abs=1e-6)

    def test_tetrahedron(self):
        assert geometric_factor(_TETRA, 10000) == pytest.approx(
            4 / math.sqrt(6), abs=1e-4
        )

    def test_single_direction(self):
        assert geometric_factor([Z], 1000) == pytest.approx(0.0, abs=1e-9)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(11)
        reference = geometric_factor(_TETRA, 10000)
        for _ in range(10):
            q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
            rotated = [q @ e for e in _TETRA]
            assert geometric_factor(rotated, 10000) == pytest.approx(
                reference, abs=1e-4
            )

    @given(unit_vectors())
    @settings(max_examples=25, deadline=None)
    def test_never_exceeds_explicit_point(self, v0):
        value = geometric_factor(_TETRA, 500)
        upper = sum(abs(float(v0 @ e)) for e in _TETRA)
        assert value <= upper + 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            geometric_factor([], 1000)
        with pytest.raises(ValueError):
            geometric_factor([Z], 50)


class TestSerialization:
    def test_round_trip(self):
        config = canonical_i28(math.radians(44.42))
        data = json.loads(json.dumps(config.to_json_dict()))
        assert data["kind"] == "i28"
        assert data["pairing"] == [1, 1, 2, 2]
        rebuilt = SettingsConfig.from_json_dict(data)
        for a, b in zip(rebuilt.pairs, config.pairs):
            assert np.allclose(a.m, b.m, atol=1e-12)
            assert np.allclose(a.m_prime, b.m_prime, atol=1e-12)
        assert rebuilt.pairing == config.pairing


def test_fibonacci_sphere_on_unit_sphere():
    pts = fibonacci_sphere(500)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)
    assert abs(pts.mean(axis=0)).max() < 0.05
