"""Point-mass configurations and the scalar quantities of the central
configuration equations.

A configuration is central when the gravitational acceleration on every
body is proportional to its position relative to the mass center,

    sum_{j != i} m_j (q_j - q_i) / r_ij^3 = -lambda (q_i - c),

with multiplier lambda = U/I.  The derived length r0 = (m/lambda)^(1/3)
= (m I / U)^(1/3) is the distance at which an added body feels exactly
the critical attraction; it drives the whole extension classification.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import StackedError

DEFAULT_TOLERANCE = 1e-10

# relative agreement demanded between the two algebraic forms of I
_INERTIA_RTOL = 1e-13


@dataclass(frozen=True)
class Configuration:
    """Masses and positions of n >= 2 point bodies in R^3.

    Positions are always stored as 3-vectors; planar configurations carry a
    zero third coordinate.  When a configuration was produced by extending a
    smaller one, the added body sits at index 0 so the sub-configuration is
    recovered by dropping that row.
    """

    masses: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        masses = np.asarray(self.masses, dtype=float)
        positions = np.asarray(self.positions, dtype=float)
        if masses.ndim != 1 or positions.ndim != 2 or positions.shape[1] != 3:
            raise StackedError("bad_shape", "expected masses (n,) and positions (n, 3)")
        if len(masses) != len(positions):
            raise StackedError("bad_shape", "masses and positions must have equal length")
        if len(masses) < 2:
            raise StackedError("too_few_bodies", "need at least two bodies")
        if not np.all(np.isfinite(masses)) or not np.all(np.isfinite(positions)):
            raise StackedError("not_finite", "masses and positions must be finite")
        if np.any(masses <= 0):
            raise StackedError("nonpositive_mass", "all masses must be strictly positive")
        d = pairwise_distances(positions)
        iu = np.triu_indices(len(masses), k=1)
        if np.any(d[iu] == 0.0):
            raise StackedError("degenerate_configuration", "degenerate configuration: coincident bodies")
        masses.setflags(write=False)
        positions.setflags(write=False)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "positions", positions)

    @property
    def n(self) -> int:
        return len(self.masses)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    def drop(self, index: int) -> "Configuration":
        """Sub-configuration with body ``index`` removed."""
        keep = [i for i in range(self.n) if i != index]
        return Configuration(self.masses[keep], self.positions[keep])

    def transformed(self, scale=1.0, rotation=None, translation=None) -> "Configuration":
        """Apply a similarity q -> scale * R q + t (masses unchanged)."""
        pos = self.positions * float(scale)
        if rotation is not None:
            pos = pos @ np.asarray(rotation, dtype=float).T
        if translation is not None:
            pos = pos + np.asarray(translation, dtype=float)
        return Configuration(self.masses, pos)


@dataclass(frozen=True)
class CCReport:
    """Verdict of the central configuration test together with the scalars
    (U, I, lambda, r0) it was computed from."""

    total_mass: float
    center_of_mass: np.ndarray
    force_function: float
    moment_of_inertia: float
    multiplier: float
    r0: float
    residual_norm: float
    is_central: bool
    tolerance: float


def pairwise_distances(positions: np.ndarray) -> np.ndarray:
    diff = positions[:, None, :] - positions[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def center_of_mass(config: Configuration) -> np.ndarray:
    return config.masses @ config.positions / config.total_mass


def force_function(config: Configuration) -> float:
    """U = sum over pairs of m_i m_j / r_ij."""
    d = pairwise_distances(config.positions)
    iu = np.triu_indices(config.n, k=1)
    mm = np.outer(config.masses, config.masses)
    return float(np.sum(mm[iu] / d[iu]))


def moment_of_inertia(config: Configuration) -> float:
    """I = sum_i m_i |q_i - c|^2, cross-checked against the pairwise form
    sum over pairs of (m_i m_j / m) r_ij^2."""
    c = center_of_mass(config)
    rel = config.positions - c
    i_center = float(np.sum(config.masses * np.sum(rel * rel, axis=1)))

    d = pairwise_distances(config.positions)
    iu = np.triu_indices(config.n, k=1)
    mm = np.outer(config.masses, config.masses)
    i_pairs = float(np.sum(mm[iu] * d[iu] ** 2) / config.total_mass)

    if abs(i_center - i_pairs) > _INERTIA_RTOL * max(i_center, i_pairs):
        raise StackedError("inertia_inconsistent", "the two forms of the moment of inertia disagree")
    return i_center


def moment_of_inertia_pairwise(config: Configuration) -> float:
    d = pairwise_distances(config.positions)
    iu = np.triu_indices(config.n, k=1)
    mm = np.outer(config.masses, config.masses)
    return float(np.sum(mm[iu] * d[iu] ** 2) / config.total_mass)


def multiplier(config: Configuration) -> float:
    """lambda = U / I."""
    return force_function(config) / moment_of_inertia(config)


def r0(config: Configuration) -> float:
    """r0 = (m I / U)^(1/3); defined for any configuration, central or not."""
    m = config.total_mass
    return float(np.cbrt(m * moment_of_inertia(config) / force_function(config)))


def cc_residual(config: Configuration) -> np.ndarray:
    """Per-body residual of the central configuration equations, (n, 3)."""
    pos = config.positions
    masses = config.masses
    c = center_of_mass(config)
    d = pairwise_distances(pos)
    np.fill_diagonal(d, 1.0)  # diagonal never used
    inv3 = 1.0 / d**3
    np.fill_diagonal(inv3, 0.0)
    diff = pos[None, :, :] - pos[:, None, :]  # diff[i, j] = q_j - q_i
    accel = np.einsum("j,ij,ijk->ik", masses, inv3, diff)
    lam = multiplier(config)
    return accel + lam * (pos - c)


def cc_report(config: Configuration, tolerance: float = DEFAULT_TOLERANCE) -> CCReport:
    """Evaluate the central configuration equations and report the verdict.

    The residual is normalized by lambda * max_i |q_i - c| * sqrt(n), which
    makes it dimensionless and invariant under similarity transformations, so
    one tolerance works across scales.
    """
    if tolerance <= 0:
        raise StackedError("bad_tolerance", "tolerance must be positive")
    m = config.total_mass
    c = center_of_mass(config)
    u = force_function(config)
    inertia = moment_of_inertia(config)
    lam = u / inertia
    r0_val = float(np.cbrt(m / lam))

    raw = cc_residual(config)
    spread = float(np.max(np.linalg.norm(config.positions - c, axis=1)))
    norm = float(np.linalg.norm(raw)) / (lam * spread * np.sqrt(config.n))
    return CCReport(
        total_mass=m,
        center_of_mass=c,
        force_function=u,
        moment_of_inertia=inertia,
        multiplier=lam,
        r0=r0_val,
        residual_norm=norm,
        is_central=bool(norm <= tolerance),
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# JSON interchange: {"masses": [...], "positions": [[x, y, z], ...]}.
# The reader zero-pads 2-vectors; the writer always emits 3-vectors.

def configuration_to_dict(config: Configuration) -> dict:
    return {
        "masses": [float(m) for m in config.masses],
        "positions": [[float(x) for x in p] for p in config.positions],
    }


def configuration_from_dict(obj: dict) -> Configuration:
    try:
        masses = obj["masses"]
        raw_positions = obj["positions"]
    except (KeyError, TypeError) as exc:
        raise StackedError("bad_json", "expected an object with 'masses' and 'positions'") from exc
    positions = []
    for p in raw_positions:
        p = list(p)
        if len(p) == 2:
            p = p + [0.0]
        if len(p) != 3:
            raise StackedError("bad_json", "positions must be 2- or 3-vectors")
        positions.append(p)
    return Configuration(np.array(masses, dtype=float), np.array(positions, dtype=float))


def dumps_configuration(config: Configuration) -> str:
    return json.dumps(configuration_to_dict(config))


def loads_configuration(text: str) -> Configuration:
    return configuration_from_dict(json.loads(text))
