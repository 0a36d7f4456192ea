"""Classification and construction of one-body extensions of central
configurations.

A non-collinear central configuration admits an added body only when its
bodies share a circle or a sphere, and then in exactly five ways:

  I    co-circular, mass center at the circle center: add there;
  II   co-circular, mass center elsewhere but r = r0: add at the circle center;
  III  co-circular with r < r0: add on the circle axis at height sqrt(r0^2 - r^2);
  IV   co-spherical, mass center at the sphere center: add there;
  V    co-spherical, mass center elsewhere but r = r0: add at the sphere center.

In every way the added mass is a free parameter.  Two-body configurations are
handled explicitly (their circumscribing circle is not unique); collinear
configurations of three or more bodies never extend and are rejected here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .configuration import (
    DEFAULT_TOLERANCE,
    CCReport,
    Configuration,
    cc_report,
    center_of_mass,
    multiplier,
    r0,
)
from .errors import StackedError
from .geometry import fit_circumcircle, fit_circumsphere, is_collinear, is_coplanar, plane_fit

# relative tolerance for the exact-equality tests (mass center vs geometric
# center, r vs r0); loose enough for machine-precision constructions, tight
# enough to keep way II/V detection honest
EQ_RTOL = 1e-10

WAYS = ("I", "II", "III", "IV", "V")


@dataclass(frozen=True)
class ExtensionPlan:
    """One applicable extension way with concrete added-point position(s).

    ``added_positions`` holds a single point for ways I/II/IV/V and the two
    mirror apexes for way III.  The added mass is always free.
    """

    way: str
    added_positions: tuple
    r: float
    r0: float
    height: float = 0.0
    mass_free: bool = True

    def to_dict(self) -> dict:
        return {
            "way": self.way,
            "added_positions": [[float(x) for x in p] for p in self.added_positions],
            "r": float(self.r),
            "r0": float(self.r0),
            "height": float(self.height),
            "mass_free": self.mass_free,
        }


@dataclass(frozen=True)
class CenterCheck:
    ok: bool
    max_relative_spread: float
    mean_distance: float

    def __bool__(self) -> bool:
        return self.ok


def _require_central(config: Configuration, tolerance: float) -> CCReport:
    report = cc_report(config, tolerance)
    if not report.is_central:
        raise StackedError("not_central", "sub-configuration not central")
    return report


def check_c_extension(config: Configuration, tolerance: float = DEFAULT_TOLERANCE) -> CenterCheck:
    """Can an arbitrary mass be added at the mass center?

    True exactly when all bodies are equidistant from the mass center, which
    is the full condition once the configuration is central.
    """
    report = _require_central(config, tolerance)
    dists = np.linalg.norm(config.positions - report.center_of_mass, axis=1)
    mean = float(np.mean(dists))
    spread = float((np.max(dists) - np.min(dists)) / mean)
    return CenterCheck(ok=spread <= EQ_RTOL, max_relative_spread=spread, mean_distance=mean)


def _perpendicular(u: np.ndarray) -> np.ndarray:
    v = np.array([0.0, 0.0, 1.0]) if abs(u[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    w = v - (v @ u) * u
    return w / np.linalg.norm(w)


def _classify_two_body(config: Configuration, r0_val: float) -> list:
    q1, q2 = config.positions
    d = float(np.linalg.norm(q2 - q1))
    midpoint = 0.5 * (q1 + q2)
    plans = []
    m1, m2 = config.masses
    if abs(m1 - m2) <= EQ_RTOL * max(m1, m2):
        # mass center at the midpoint; minimal circumscribing circle
        plans.append(ExtensionPlan(way="I", added_positions=(midpoint,), r=d / 2.0, r0=r0_val))
    # choose the circumscribing circle with r = r0 = d: its center is off the
    # segment and equidistant r0 from both ends (the new body completes an
    # equilateral triangle); the perpendicular direction is a free choice
    u = (q2 - q1) / d
    center = midpoint + _perpendicular(u) * np.sqrt(r0_val**2 - (d / 2.0) ** 2)
    plans.append(ExtensionPlan(way="II", added_positions=(center,), r=r0_val, r0=r0_val))
    return plans


def classify_extensions(config: Configuration, tolerance: float = DEFAULT_TOLERANCE) -> list:
    """All ways the given central configuration extends by one body.

    Returns an empty list when the geometry admits none (for example
    co-circular with r > r0 and mass center away from the circle center).
    """
    report = _require_central(config, tolerance)
    r0_val = report.r0

    if config.n == 2:
        return _classify_two_body(config, r0_val)
    if is_collinear(config.positions):
        raise StackedError(
            "collinear_input",
            "collinear configurations of three or more bodies never extend; "
            "see the collinear module for the two-body Euler solutions",
        )

    c = report.center_of_mass
    plans = []
    if is_coplanar(config.positions):
        circle = fit_circumcircle(config.positions)
        if not circle.is_cocircular:
            raise StackedError("not_cocircular_or_cospherical",
                               "not co-circular or co-spherical: no extension exists")
        r = circle.radius
        if np.linalg.norm(c - circle.center) <= EQ_RTOL * r:
            plans.append(ExtensionPlan(way="I", added_positions=(circle.center,), r=r, r0=r0_val))
        elif abs(r - r0_val) <= EQ_RTOL * r0_val:
            plans.append(ExtensionPlan(way="II", added_positions=(circle.center,), r=r, r0=r0_val))
        if r0_val - r > EQ_RTOL * r0_val:
            h = float(np.sqrt(r0_val**2 - r**2))
            apexes = (circle.center + h * circle.normal, circle.center - h * circle.normal)
            plans.append(ExtensionPlan(way="III", added_positions=apexes, r=r, r0=r0_val, height=h))
    else:
        sphere = fit_circumsphere(config.positions)
        if not sphere.is_cospherical:
            raise StackedError("not_cocircular_or_cospherical",
                               "not co-circular or co-spherical: no extension exists")
        r = sphere.radius
        if np.linalg.norm(c - sphere.center) <= EQ_RTOL * r:
            plans.append(ExtensionPlan(way="IV", added_positions=(sphere.center,), r=r, r0=r0_val))
        elif abs(r - r0_val) <= EQ_RTOL * r0_val:
            plans.append(ExtensionPlan(way="V", added_positions=(sphere.center,), r=r, r0=r0_val))
    return plans


def build_extension(config: Configuration, plan: ExtensionPlan, m0: float,
                    apex_choice: str = "plus") -> Configuration:
    """Extend ``config`` by a body of mass ``m0`` according to ``plan``.

    The added body is stored at index 0.  For way III ``apex_choice`` selects
    which of the two mirror apexes is used.
    """
    if m0 <= 0:
        raise StackedError("nonpositive_mass", "added mass must be positive")
    if plan.way not in WAYS:
        raise StackedError("bad_way", f"unknown extension way {plan.way!r}")
    if abs(plan.r0 - r0(config)) > 1e-8 * plan.r0:
        raise StackedError("plan_mismatch", "plan does not belong to this configuration")

    if plan.way == "III":
        if apex_choice not in ("plus", "minus"):
            raise StackedError("bad_apex", "apex_choice must be 'plus' or 'minus'")
        q0 = plan.added_positions[0 if apex_choice == "plus" else 1]
    else:
        q0 = plan.added_positions[0]

    dists = np.linalg.norm(config.positions - q0, axis=1)
    if plan.way in ("II", "III", "V"):
        if np.max(np.abs(dists - plan.r0)) > 1e-8 * plan.r0:
            raise StackedError("plan_mismatch", "added point is not at distance r0 from every body")
    else:
        if np.linalg.norm(q0 - center_of_mass(config)) > 1e-8 * plan.r:
            raise StackedError("plan_mismatch", "added point is not at the mass center")

    masses = np.concatenate([[m0], config.masses])
    positions = np.vstack([q0, config.positions])
    return Configuration(masses, positions)


@dataclass(frozen=True)
class Rbar0Report:
    """r0 of the extended configuration across a sample of added masses."""

    way: str
    r0: float
    m0_values: tuple
    rbar0_values: tuple
    max_relative_deviation: float
    ok: bool


def rbar0_invariance(config: Configuration, plan: ExtensionPlan, m0_samples,
                     rtol: float = 1e-12) -> Rbar0Report:
    """Check that r0 of the extended configuration does not move with the
    added mass and equals r0 of the base (holds for ways II, III and V,
    where the added body sits at distance r0 from every other body)."""
    if plan.way not in ("II", "III", "V"):
        raise StackedError("corollary_not_applicable",
                           "corollary does not apply: ways I/IV place the body at the mass center")
    base_r0 = r0(config)
    values = []
    for m0 in m0_samples:
        extended = build_extension(config, plan, m0)
        values.append(r0(extended))
    deviation = max(abs(v - base_r0) for v in values) / base_r0
    return Rbar0Report(
        way=plan.way,
        r0=base_r0,
        m0_values=tuple(float(m) for m in m0_samples),
        rbar0_values=tuple(values),
        max_relative_deviation=deviation,
        ok=deviation <= rtol,
    )


def fully_stacked_check(config: Configuration, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    """True when every subset obtained by dropping one body is itself central.

    Only three families have this property: the Euler collinear three-body
    configurations, equilateral triangles and regular tetrahedra (with
    arbitrary masses in each case).
    """
    if config.n < 3:
        raise StackedError("too_few_bodies", "need at least three bodies to drop one")
    _require_central(config, tolerance)
    return all(cc_report(config.drop(i), tolerance).is_central for i in range(config.n))


@dataclass(frozen=True)
class PyramidCheck:
    ok: bool
    apex_index: int
    base_central: bool
    base_cocircular: bool
    r: float
    r0: float
    height: float
    expected_height: float
    axis_offset: float

    def __bool__(self) -> bool:
        return self.ok


def _apex_candidates(config: Configuration) -> list:
    scale = float(np.max(np.linalg.norm(config.positions - np.mean(config.positions, axis=0), axis=1)))
    candidates = []
    for i in range(config.n):
        others = np.delete(config.positions, i, axis=0)
        if not is_coplanar(others):
            continue
        _, normal, _ = plane_fit(others)
        offset = abs(float((config.positions[i] - others[0]) @ normal))
        if offset > 1e-7 * scale:
            candidates.append(i)
    return candidates


def pyramidal_check(config: Configuration, tolerance: float = DEFAULT_TOLERANCE) -> PyramidCheck:
    """Verify the pyramid characterization: the base must be a co-circular
    central configuration with r < r0 and the apex must sit on the circle
    axis at height sqrt(r0^2 - r^2).  Agrees with the residual verdict on
    the full configuration."""
    candidates = _apex_candidates(config)
    if not candidates:
        raise StackedError("not_pyramidal", "not pyramidal: no single body lies off the plane of the others")

    best = None
    for apex_index in candidates:
        base = config.drop(apex_index)
        base_report = cc_report(base, tolerance)
        circle = fit_circumcircle(base.positions)
        base_cocircular = circle.is_cocircular
        r, base_r0 = circle.radius, base_report.r0

        v = config.positions[apex_index] - circle.center
        height = abs(float(v @ circle.normal))
        axis_offset = float(np.linalg.norm(v - (v @ circle.normal) * circle.normal))
        expected = float(np.sqrt(max(base_r0**2 - r**2, 0.0)))

        ok = (
            base_report.is_central
            and base_cocircular
            and base_r0 - r > EQ_RTOL * base_r0
            and axis_offset <= 1e-9 * r
            and abs(height - expected) <= 1e-9 * base_r0
        )
        check = PyramidCheck(
            ok=ok,
            apex_index=apex_index,
            base_central=base_report.is_central,
            base_cocircular=base_cocircular,
            r=r,
            r0=base_r0,
            height=height,
            expected_height=expected,
            axis_offset=axis_offset,
        )
        if ok:
            return check
        if best is None:
            best = check
    return best


def lambda_mass_ratio(config: Configuration) -> float:
    """lambda / m, the quantity shared by a configuration and its way II/III/V
    extensions (it equals 1/r0^3)."""
    return multiplier(config) / config.total_mass
