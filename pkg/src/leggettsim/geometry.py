"""Measurement settings on the Poincare sphere.

Bob's settings come in pairs (m, m') separated by an angle phi and
parametrized by a bisector u and a difference direction e_hat.  The two
canonical configurations use an orthogonal triad of difference directions
(six settings) and a regular tetrahedron (eight settings).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qstate import CorrelationTensor, _check_unit

ORTHO_TOL = 1e-9
DEGENERATE_TOL = 1e-9

X = np.array([1.0, 0.0, 0.0])
Y = np.array([0.0, 1.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])


class DegenerateTensorError(ValueError):
    """Raised when a correlation tensor maps a bisector to (numerically) zero."""


@dataclass(frozen=True)
class SettingPair:
    """Bob setting pair m = cos(phi/2) u + sin(phi/2) e_hat, m' its mirror."""

    m: np.ndarray
    m_prime: np.ndarray
    u: np.ndarray
    e_hat: np.ndarray
    phi: float


@dataclass(frozen=True)
class SettingsConfig:
    """Alice vectors, Bob setting pairs and the pair -> Alice assignment.

    ``pairing[i]`` is the 0-based index of the Alice vector used with pair i.
    ``kind`` is the inequality tag, "i26" or "i28".
    """

    alice: tuple
    pairs: tuple
    pairing: tuple
    kind: str

    @property
    def phi(self) -> float:
        return self.pairs[0].phi

    def settings(self):
        """Flat list of (setting_index, alice_index, n, m) over all settings."""
        out = []
        for i, pair in enumerate(self.pairs):
            n = self.alice[self.pairing[i]]
            out.append((2 * i, self.pairing[i], n, pair.m))
            out.append((2 * i + 1, self.pairing[i], n, pair.m_prime))
        return out

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "phi_deg": math.degrees(self.phi),
            "alice": [list(n) for n in self.alice],
            "pairs": [
                {
                    "m": list(p.m),
                    "m_prime": list(p.m_prime),
                    "e_hat": list(p.e_hat),
                    "u": list(p.u),
                }
                for p in self.pairs
            ],
            "pairing": [i + 1 for i in self.pairing],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SettingsConfig":
        phi = math.radians(data["phi_deg"])
        pairs = tuple(
            make_pair(np.asarray(p["u"], float), np.asarray(p["e_hat"], float), phi)
            for p in data["pairs"]
        )
        return cls(
            alice=tuple(np.asarray(n, float) for n in data["alice"]),
            pairs=pairs,
            pairing=tuple(i - 1 for i in data["pairing"]),
            kind=data["kind"],
        )


def make_pair(u, e_hat, phi: float) -> SettingPair:
    """Build the setting pair with bisector u, difference direction e_hat."""
    u = _check_unit(u, "u")
    e_hat = _check_unit(e_hat, "e_hat")
    if abs(float(u @ e_hat)) > ORTHO_TOL:
        raise ValueError(f"u and e_hat must be orthogonal, dot = {float(u @ e_hat)}")
    if not 0.0 <= phi <= math.pi:
        raise ValueError(f"phi must lie in [0, pi], got {phi}")
    c, s = math.cos(phi / 2.0), math.sin(phi / 2.0)
    return SettingPair(
        m=c * u + s * e_hat,
        m_prime=c * u - s * e_hat,
        u=u,
        e_hat=e_hat,
        phi=phi,
    )


def canonical_i26(phi: float) -> SettingsConfig:
    """Six-setting configuration: orthogonal triad of difference directions."""
    pairs = (
        make_pair(Z, X, phi),
        make_pair(Z, Y, phi),
        make_pair(X, Z, phi),
    )
    return SettingsConfig(alice=(Z, X), pairs=pairs, pairing=(0, 0, 1), kind="i26")


_TETRA = (
    np.array([1.0, 1.0, 1.0]) / math.sqrt(3),
    np.array([1.0, -1.0, -1.0]) / math.sqrt(3),
    np.array([-1.0, 1.0, -1.0]) / math.sqrt(3),
    np.array([-1.0, -1.0, 1.0]) / math.sqrt(3),
)


def canonical_i28(phi: float) -> SettingsConfig:
    """Eight-setting configuration: tetrahedral difference directions.

    Pairs 1, 2 share the bisector along e1 x e2 and pairs 3, 4 the bisector
    along e3 x e4; the two bisectors double as the Alice vectors.
    """
    u12 = np.array([0.0, 1.0, -1.0]) / math.sqrt(2)
    u34 = np.array([0.0, 1.0, 1.0]) / math.sqrt(2)
    pairs = (
        make_pair(u12, _TETRA[0], phi),
        make_pair(u12, _TETRA[1], phi),
        make_pair(u34, _TETRA[2], phi),
        make_pair(u34, _TETRA[3], phi),
    )
    return SettingsConfig(alice=(u12, u34), pairs=pairs, pairing=(0, 0, 1, 1), kind="i28")


def adapt_to_state(tensor: CorrelationTensor, config: SettingsConfig) -> SettingsConfig:
    """Replace each Alice vector by the direction maximizing |n . (T u)|.

    The replacement is n = T u / |T u| for the common bisector u of the
    pairs assigned to that Alice vector; with this sign n^T T u >= 0.
    Bob's pairs are left untouched.
    """
    new_alice = []
    for alice_idx in range(len(config.alice)):
        us = [p.u for i, p in enumerate(config.pairs) if config.pairing[i] == alice_idx]
        if not us:
            new_alice.append(config.alice[alice_idx])
            continue
        for other in us[1:]:
            if np.linalg.norm(other - us[0]) > ORTHO_TOL:
                raise ValueError("pairs assigned to one Alice vector must share a bisector")
        tu = tensor.t @ us[0]
        norm = np.linalg.norm(tu)
        if norm < DEGENERATE_TOL:
            raise DegenerateTensorError(f"T u is numerically zero (|T u| = {norm})")
        new_alice.append(tu / norm)
    return SettingsConfig(
        alice=tuple(new_alice),
        pairs=config.pairs,
        pairing=config.pairing,
        kind=config.kind,
    )


def fibonacci_sphere(n: int) -> np.ndarray:
    """Deterministic quasi-uniform grid of n points on the unit sphere."""
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    theta = math.pi * (3.0 - math.sqrt(5.0)) * i
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])


# pattern-search moves: all nonzero sign combinations over the three axes
_MOVES = np.array(
    [
        [sx, sy, sz]
        for sx in (-1, 0, 1)
        for sy in (-1, 0, 1)
        for sz in (-1, 0, 1)
        if (sx, sy, sz) != (0, 0, 0)
    ],
    dtype=float,
)
_MOVES /= np.linalg.norm(_MOVES, axis=1, keepdims=True)


def geometric_factor(dirs, grid_size: int = 10000) -> float:
    """Minimum over unit v of sum_i |v . e_i|.

    Coarse minimization on a Fibonacci-sphere grid followed by a
    deterministic pattern-search descent (step halved to 1e-10).  The
    objective has kinks wherever v is orthogonal to a direction, so the
    local polish uses axis and diagonal moves rather than gradients.
    """
    if len(dirs) < 1:
        raise ValueError("need at least one direction")
    if grid_size < 100:
        raise ValueError(f"grid_size must be >= 100, got {grid_size}")
    e = np.array([_check_unit(d, "direction") for d in dirs])

    grid = fibonacci_sphere(grid_size)
    values = np.abs(grid @ e.T).sum(axis=1)
    best_idx = int(np.argmin(values))
    v = grid[best_idx]
    best = float(values[best_idx])

    step = 0.1
    while step > 1e-10:
        improved = False
        candidates = v + step * _MOVES
        candidates /= np.linalg.norm(candidates, axis=1, keepdims=True)
        cand_values = np.abs(candidates @ e.T).sum(axis=1)
        idx = int(np.argmin(cand_values))
        if cand_values[idx] < best:
            best = float(cand_values[idx])
            v = candidates[idx]
            improved = True
        if not improved:
            step *= 0.5
    return best
