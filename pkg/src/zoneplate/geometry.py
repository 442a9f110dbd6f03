"""Half-zone geometry of (compound) Fresnel zone plates.

Half-zone ``n`` of a component with order ``m`` and offset ``j`` spans
``[r(n-1), r(n)]`` with ``r(0) = 0`` and

    r(n) = sigma * sqrt(m*n - j)   for odd n
    r(n) = sigma * sqrt(m*n)       for even n,      sigma = sqrt(lambda * f).

Odd half-zones are etched grooves, even ones are ridges, so the groove
fraction of each ridge/groove pair is the slitness (m - j) / (2m).
For linear plates the same boundaries apply to ``|x|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FabricationLimitError, ValidationError

CIRCULAR = "circular"
LINEAR = "linear"

DEFAULT_MIN_FEATURE = 0.4e-6
# Limits are stated to one significant figure (a 112-zone plate has 0.398 um
# outer zones); the limit check allows this much relative shortfall.
FEATURE_TOLERANCE = 0.01


@dataclass(frozen=True)
class DesignParams:
    wavelength: float
    focal_length: float

    def __post_init__(self):
        if self.wavelength <= 0 or self.focal_length <= 0:
            raise DomainError("wavelength and focal_length must be positive")

    @property
    def sigma(self):
        return sigma(self.wavelength, self.focal_length)


def sigma(wavelength, focal_length):
    if wavelength <= 0 or focal_length <= 0:
        raise DomainError(
            f"wavelength and focal length must be positive, got {wavelength!r}, {focal_length!r}")
    return math.sqrt(wavelength * focal_length)


def _radius_sq_units(m, j, n):
    """r(n)^2 / sigma^2, vectorised over n."""
    n = np.asarray(n)
    return np.where(n % 2 == 1, m * n - j, m * n)


def zone_radius(d, m, j, n):
    """Outer boundary radius of half-zone ``n``; ``n = 0`` gives 0."""
    if n < 0:
        raise DomainError(f"half-zone index must be >= 0, got {n}")
    if n == 0:
        return 0.0
    u = m * n - j if n % 2 else m * n
    if u < 1:
        raise DomainError(f"degenerate boundary: m*n - j = {u} < 1 for m={m}, j={j}, n={n}")
    return d.sigma * math.sqrt(u)


def zone_radii(d, m, j, n):
    """Vectorised ``zone_radius`` for an array of indices ``n >= 1``."""
    u = _radius_sq_units(m, j, np.asarray(n, dtype=np.int64))
    if np.any(u < 1):
        raise DomainError(f"degenerate boundary for m={m}, j={j}")
    return d.sigma * np.sqrt(u)


def zone_width(d, m, j, n):
    """Large-n width of half-zone ``n``."""
    if n < 1:
        raise DomainError(f"half-zone index must be >= 1, got {n}")
    num = m - j if n % 2 else m + j
    return d.sigma * num / (2.0 * math.sqrt(m * n))


def slitness(m, j):
    if abs(j) >= m:
        raise DomainError(f"|j| must be < m, got m={m}, j={j}")
    return (m - j) / (2.0 * m)


def validate_order_pair(m, j):
    """Return ``(ok, reason)`` for the maximal-efficiency selection rule."""
    if m < 1:
        return False, f"order m must be >= 1, got {m}"
    if abs(j) >= m:
        return False, f"|j| < m violated: |{j}| >= {m}"
    if m % 2 == 1 and j % 2 != 0:
        return False, f"j must be even for odd m={m}, got j={j}"
    if m % 2 == 0 and j % 2 == 0:
        return False, f"j must be odd for even m={m}, got j={j}"
    return True, "ok"


@dataclass(frozen=True)
class ZoneComponent:
    order: int
    offset: int
    n_first: int
    n_last: int
    geometry_kind: str = CIRCULAR
    inner_radius_override: float | None = None  # abutment snap, see assemble_compound

    def __post_init__(self):
        m, j = self.order, self.offset
        if m < 1:
            raise DomainError(f"order must be >= 1, got {m}")
        if abs(j) >= m:
            raise DomainError(f"|j| must be < m, got m={m}, j={j}")
        if not 1 <= self.n_first <= self.n_last:
            raise DomainError(f"need 1 <= n_first <= n_last, got {self.n_first}..{self.n_last}")
        odd_first = self.n_first if self.n_first % 2 else self.n_first + 1
        if odd_first <= self.n_last and m * odd_first - j < 1:
            raise DomainError(f"m*n - j < 1 at n={odd_first} for m={m}, j={j}")
        if self.geometry_kind not in (CIRCULAR, LINEAR):
            raise DomainError(f"unknown geometry kind {self.geometry_kind!r}")

    @property
    def slitness(self):
        return slitness(self.order, self.offset)

    @property
    def n_zones(self):
        return self.n_last - self.n_first + 1


def component_inner_radius(d, c):
    if c.inner_radius_override is not None:
        return c.inner_radius_override
    return zone_radius(d, c.order, c.offset, c.n_first - 1)


def component_outer_radius(d, c):
    return zone_radius(d, c.order, c.offset, c.n_last)


def component_boundaries(d, c):
    """Radii ``[inner, r(n_first), ..., r(n_last)]`` (length n_zones + 1)."""
    n = np.arange(c.n_first, c.n_last + 1)
    return np.concatenate(([component_inner_radius(d, c)], zone_radii(d, c.order, c.offset, n)))


def critical_width(d, m, j, n):
    """Width of the wider half-zone of the ridge/groove pair at index ``n``.

    Choosing the sign of ``j`` decides which region is wide; this is the
    feature that sets the aperture, giving A_m = A_1 (m + |j|).
    """
    return d.sigma * (m + abs(j)) / (2.0 * math.sqrt(m * n))


def max_index_for_feature(d, m, j, min_feature):
    """Largest ``n`` whose critical width still meets ``min_feature``."""
    limit = min_feature * (1.0 - FEATURE_TOLERANCE)
    n = int(math.floor((d.sigma * (m + abs(j)) / (2.0 * limit)) ** 2 / m))
    while n > 1 and critical_width(d, m, j, n) < limit:
        n -= 1
    return n


def first_order_aperture(d, min_feature):
    """Diameter A_1 of a (1, 0) plate extended to the ``min_feature`` limit."""
    return 2.0 * zone_radius(d, 1, 0, max_index_for_feature(d, 1, 0, min_feature))


@dataclass(frozen=True)
class CompoundZonePlate:
    design: DesignParams
    components: tuple
    relief_height: float
    membrane_thickness: float = 0.0
    material: str = "Si"
    min_feature: float = DEFAULT_MIN_FEATURE
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.components:
            raise ValidationError("a zone plate needs at least one component")
        if self.relief_height < 0 or self.membrane_thickness < 0:
            raise DomainError("relief and membrane thickness must be non-negative")
        orders = [c.order for c in self.components]
        if any(b <= a for a, b in zip(orders, orders[1:])):
            raise ValidationError(f"component orders must strictly increase outward, got {orders}")
        kinds = {c.geometry_kind for c in self.components}
        if len(kinds) != 1:
            raise ValidationError("all components must share one geometry kind")
        for a, b in zip(self.components, self.components[1:]):
            ro = component_outer_radius(self.design, a)
            ri = component_inner_radius(self.design, b)
            if abs(ri - ro) > 1e-9 * ro:
                raise ValidationError(f"components do not abut: outer {ro} vs inner {ri}")

    @property
    def geometry_kind(self):
        return self.components[0].geometry_kind

    @property
    def aperture_radius(self):
        return component_outer_radius(self.design, self.components[-1])

    @property
    def aperture(self):
        return 2.0 * self.aperture_radius

    def boundaries(self):
        """Per-component boundary arrays, innermost component first."""
        return [component_boundaries(self.design, c) for c in self.components]

    def min_zone_width(self):
        """Narrowest half-zone actually present (exact boundary differences)."""
        return float(min(np.diff(b).min() for b in self.boundaries()))

    def zone_rows(self):
        """Yield ``(n, r_inner, r_outer, region, component_index)`` for every half-zone."""
        for ci, (c, b) in enumerate(zip(self.components, self.boundaries())):
            for k, n in enumerate(range(c.n_first, c.n_last + 1)):
                yield n, float(b[k]), float(b[k + 1]), "groove" if n % 2 else "ridge", ci


def _check_feature(d, m, j, n, min_feature):
    limit = min_feature * (1.0 - FEATURE_TOLERANCE)
    w = critical_width(d, m, j, n)
    if w < limit:
        raise FabricationLimitError(
            f"zone n={n} of component (m={m}, j={j}) is {w * 1e6:.4g} um wide, "
            f"below the {min_feature * 1e6:.4g} um minimum feature")


def assemble_compound(d, plan, relief_height, membrane_thickness=0.0, material="Si",
                      min_feature=DEFAULT_MIN_FEATURE, geometry_kind=CIRCULAR):
    """Build abutting components from ``plan``.

    Each plan entry is ``(m, j, extent)`` where ``extent`` is an ``int``
    half-zone count, a ``float`` outer radius in metres, or ``None`` to
    extend to the minimum-feature limit. A component after the first starts
    at the smallest ``n_first`` whose inner boundary lies at or beyond the
    previous outer radius; that inner boundary is then snapped onto the
    previous radius and the snap distance recorded in ``metadata``.
    """
    plan = list(plan)
    if not plan:
        raise ValidationError("empty component plan")
    orders = [p[0] for p in plan]
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValidationError(f"plan orders must strictly increase, got {orders}")
    components = []
    snaps = []
    r_prev = 0.0
    for m, j, extent in plan:
        ok, reason = validate_order_pair(m, j)
        if not ok:
            raise ValidationError(f"(m={m}, j={j}) rejected: {reason}")
        if r_prev == 0.0:
            n_first, override = 1, None
        else:
            # r(n) is strictly increasing for |j| < m; start just below the answer
            k = max(0, int(math.floor((r_prev / d.sigma) ** 2 / m)) - 1) & ~1
            while zone_radius(d, m, j, k) < r_prev * (1 - 1e-12):
                k += 1
            n_first, override = k + 1, r_prev
            snaps.append(zone_radius(d, m, j, n_first - 1) - r_prev)
        if extent is None:
            n_last = max_index_for_feature(d, m, j, min_feature)
        elif isinstance(extent, (int, np.integer)) and not isinstance(extent, bool):
            n_last = n_first + int(extent) - 1
        else:
            radius = float(extent)
            n_last = n_first
            while zone_radius(d, m, j, n_last + 1) <= radius * (1 + 1e-12):
                n_last += 1
        if n_last < n_first:
            raise ValidationError(
                f"component (m={m}, j={j}) has no room: starts at n={n_first}, ends at n={n_last}")
        _check_feature(d, m, j, n_last, min_feature)
        comp = ZoneComponent(m, j, n_first, n_last, geometry_kind, override)
        components.append(comp)
        r_prev = component_outer_radius(d, comp)
    return CompoundZonePlate(d, tuple(components), relief_height, membrane_thickness, material,
                             min_feature, metadata={"abutment_snaps": tuple(snaps)})
