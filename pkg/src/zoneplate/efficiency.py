"""Local binary-grating model of diffraction-order efficiencies.

A zone plate is locally a binary grating in r^2; the groove region
occupies the fraction ``slitness`` of each period. Order ``k`` carries
amplitude

    c_0 = S t_groove + (1 - S) t_ridge
    c_k = (t_groove - t_ridge) sin(pi k S) / (pi k)

up to a k-dependent phase that does not enter any efficiency.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .geometry import slitness as _slitness
from .geometry import validate_order_pair
from .materials import amplitude_transmission


@dataclass(frozen=True)
class GratingModel:
    t_ridge: complex
    t_groove: complex
    slitness: float
    design_order: int = 1

    def __post_init__(self):
        if abs(self.t_ridge) > 1 + 1e-12 or abs(self.t_groove) > 1 + 1e-12:
            raise DomainError("region transmissions must satisfy |t| <= 1")
        if not 0 <= self.slitness <= 1:
            raise DomainError(f"slitness must lie in [0, 1], got {self.slitness!r}")

    @classmethod
    def phase(cls, slitness, design_order=1):
        """Lossless 0 / pi grating."""
        return cls(-1.0 + 0j, 1.0 + 0j, slitness, design_order)


def _sin_pi(x):
    """sin(pi x), exact at multiples of 1/2."""
    r = math.fmod(x, 2.0)
    if r == int(r):
        return 0.0
    if r in (0.5, -1.5):
        return 1.0
    if r in (-0.5, 1.5):
        return -1.0
    return math.sin(math.pi * r)


def fourier_coefficient(g, k):
    s = g.slitness
    if k == 0:
        return s * g.t_groove + (1 - s) * g.t_ridge
    return (g.t_groove - g.t_ridge) * _sin_pi(k * s) / (math.pi * k)


def order_efficiency(g, k):
    return abs(fourier_coefficient(g, k)) ** 2


def order_efficiencies(g, ks):
    return np.array([order_efficiency(g, int(k)) for k in ks])


def total_power(g):
    """Closed-form sum of all orders (Parseval)."""
    return g.slitness * abs(g.t_groove) ** 2 + (1 - g.slitness) * abs(g.t_ridge) ** 2


def ideal_efficiency(m):
    """Maximal efficiency 4 / (pi m)^2 of a lossless order-m phase structure."""
    return 4.0 / (math.pi * m) ** 2


def grating_for_component(component, oc=None, relief_height=None):
    """Grating model for a zone component; lossless when ``oc`` is None."""
    s = _slitness(component.order, component.offset)
    if oc is None:
        return GratingModel.phase(s, component.order)
    return GratingModel(amplitude_transmission(oc, relief_height), 1.0 + 0j, s, component.order)


def focusing_efficiency_of_component(component, oc=None, relief_height=None):
    """Relative efficiency into order m (membrane excluded).

    Multiply by ``intensity_transmission(oc, membrane_thickness)`` for the
    absolute value.
    """
    ok, reason = validate_order_pair(component.order, component.offset)
    if not ok:
        raise ValidationError(f"(m={component.order}, j={component.offset}): {reason}")
    g = grating_for_component(component, oc, relief_height)
    return order_efficiency(g, component.order)


def slitness_scan(m, k, s_grid, lossless=True, t_ridge=-1.0 + 0j, t_groove=1.0 + 0j):
    """Order-k efficiency across slitness values for an order-m design."""
    s_grid = np.asarray(s_grid, dtype=float)
    if np.any((s_grid <= 0) | (s_grid >= 1)):
        raise DomainError("slitness values must lie in (0, 1)")
    if lossless:
        t_ridge, t_groove = -1.0 + 0j, 1.0 + 0j
    return np.array([order_efficiency(GratingModel(t_ridge, t_groove, s, m), k) for s in s_grid])

