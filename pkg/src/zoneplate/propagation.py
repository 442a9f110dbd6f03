"""Scalar Fresnel propagation, focal-spot metrics and knife-edge simulation.

Illumination is a unit-amplitude plane wave, so intensities are relative
to the incident intensity and fluxes are in units of area (radial) or
length (lateral). Constant leading phase factors are dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import fresnel, j0, ndtr

from .errors import DomainError, RangeError, SamplingError
from .transmission import LATERAL, RADIAL, membrane_intensity

MIN_OUT_SAMPLES_PER_FWHM = 8
DEFAULT_OUT_SAMPLES_PER_FWHM = 16
DEFAULT_EXTENT_FWHM = 12.0
MIN_SAMPLES_PER_FRINGE = 4
_CHUNK = 256


@dataclass(frozen=True)
class ScalarField:
    """Complex field on an output grid.

    Radial fields sample ``rho_k = k * spacing`` (axis included); lateral
    fields sample ``x_k = (k - (K-1)/2) * spacing``.
    """

    kind: str
    spacing: float
    samples: np.ndarray
    distance: float
    wavelength: float
    incident_flux: float
    membrane_intensity: float = 1.0
    normalization: str = "unit plane wave over the plate aperture"
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def coords(self):
        k = np.arange(self.samples.size)
        if self.kind == RADIAL:
            return k * self.spacing
        return (k - (self.samples.size - 1) / 2) * self.spacing

    @property
    def intensity(self):
        return np.abs(self.samples) ** 2

    def total_flux(self):
        if self.kind == RADIAL:
            rho = self.coords
            return float(np.trapezoid(self.intensity * 2 * np.pi * rho, rho))
        return float(np.trapezoid(self.intensity, self.coords))

    def symmetric_cut(self):
        """``(x, I)`` through the axis; radial fields are mirrored."""
        if self.kind == RADIAL:
            rho, i = self.coords, self.intensity
            return np.concatenate((-rho[:0:-1], rho)), np.concatenate((i[:0:-1], i))
        return self.coords, self.intensity


@dataclass(frozen=True)
class KnifeEdgeCurve:
    positions: np.ndarray
    transmitted_flux: np.ndarray
    derivative: np.ndarray


@dataclass(frozen=True)
class FocalEfficiency:
    relative: float
    absolute: float
    integration_radius: float
    fwhm: float


def diffraction_scale(profile, wavelength, z):
    """lambda z / (2 R): the outer-zone width at focus, sets the spot size."""
    return wavelength * z / (2.0 * profile.aperture_radius)


def _output_grid(profile, wavelength, z, out_spacing, out_extent):
    scale = diffraction_scale(profile, wavelength, z)
    if out_spacing is None:
        out_spacing = scale / DEFAULT_OUT_SAMPLES_PER_FWHM
    if out_extent is None:
        out_extent = DEFAULT_EXTENT_FWHM * scale
    if out_spacing <= 0 or out_extent <= 0:
        raise DomainError("output spacing and extent must be positive")
    # the spot is no narrower than ~0.88 lambda z / D (slit) or 1.03 (disk)
    if out_spacing > 0.88 * scale / MIN_OUT_SAMPLES_PER_FWHM:
        raise SamplingError(
            f"output spacing {out_spacing * 1e6:.4g} um resolves the focal spot with fewer than "
            f"{MIN_OUT_SAMPLES_PER_FWHM} samples per FWHM; need <= "
            f"{0.88 * scale / MIN_OUT_SAMPLES_PER_FWHM * 1e6:.4g} um")
    return out_spacing, out_extent


def _check_fringes(profile, wavelength, z, out_extent):
    need = wavelength * z / (MIN_SAMPLES_PER_FRINGE * (profile.aperture_radius + out_extent))
    if profile.spacing > need:
        raise SamplingError(
            f"input spacing {profile.spacing * 1e6:.4g} um under-samples the Fresnel kernel; "
            f"need <= {need * 1e6:.4g} um at z = {z} m")


def propagate_radial(profile, wavelength, z, out_spacing=None, out_extent=None):
    """Fresnel-Hankel integral of a cylindrically symmetric profile.

    U(rho) = (2 pi / (lambda z)) * int t(r) exp(i pi r^2 / (lambda z)) J0(2 pi r rho / (lambda z)) r dr

    Each ring carries its exact chirp-weighted area; t and J0 are taken at
    the ring centre.
    """
    if profile.kind != RADIAL:
        raise DomainError("propagate_radial needs a radial profile")
    if z <= 0 or wavelength <= 0:
        raise DomainError(f"z and wavelength must be positive, got z={z!r}")
    out_spacing, out_extent = _output_grid(profile, wavelength, z, out_spacing, out_extent)
    _check_fringes(profile, wavelength, z, out_extent)

    keep = profile.samples != 0
    r = profile.coords[keep]
    t = profile.samples[keep]
    h = profile.spacing / 2
    alpha = math.pi / (wavelength * z)
    w = (np.exp(1j * alpha * (r + h) ** 2) - np.exp(1j * alpha * (r - h) ** 2)) / (2j * alpha)
    tw = t * w
    kappa = 2 * math.pi / (wavelength * z)

    rho = np.arange(int(math.floor(out_extent / out_spacing)) + 1) * out_spacing
    u = np.empty(rho.size, dtype=complex)
    for s in range(0, rho.size, _CHUNK):
        u[s:s + _CHUNK] = j0(kappa * np.outer(rho[s:s + _CHUNK], r)) @ tw
    u *= kappa
    return ScalarField(RADIAL, out_spacing, u, z, wavelength, profile.aperture_measure(),
                       membrane_intensity(profile), metadata=dict(profile.metadata))


def propagate_lateral(profile, wavelength, z, out_spacing=None, out_extent=None):
    """1-D Fresnel integral with each input cell integrated exactly.

    U(x) = (i lambda z)^(-1/2) * int t(x') exp(i pi (x - x')^2 / (lambda z)) dx'
    """
    if profile.kind != LATERAL:
        raise DomainError("propagate_lateral needs a lateral profile")
    if z <= 0 or wavelength <= 0:
        raise DomainError(f"z and wavelength must be positive, got z={z!r}")
    out_spacing, out_extent = _output_grid(profile, wavelength, z, out_spacing, out_extent)

    keep = profile.samples != 0
    xc = profile.coords[keep]
    t = profile.samples[keep]
    h = profile.spacing / 2
    k = int(math.floor(out_extent / out_spacing))
    x = np.arange(-k, k + 1) * out_spacing
    scale = math.sqrt(2.0 / (wavelength * z))  # Fresnel-integral argument per metre
    u = np.empty(x.size, dtype=complex)
    for s in range(0, x.size, _CHUNK):
        xs = x[s:s + _CHUNK, None]
        sb, cb = fresnel(scale * (xc + h - xs))
        sa, ca = fresnel(scale * (xc - h - xs))
        u[s:s + _CHUNK] = ((cb - ca) + 1j * (sb - sa)) @ t
    # int exp(i pi s^2 / 2) ds  ->  dx' = ds / scale, and the (i lambda z)^(-1/2) prefactor
    u *= 1.0 / (scale * np.sqrt(1j * wavelength * z))
    return ScalarField(LATERAL, out_spacing, u, z, wavelength, profile.aperture_measure(),
                       membrane_intensity(profile), metadata=dict(profile.metadata))


def propagate(profile, wavelength, z, out_spacing=None, out_extent=None):
    if profile.kind == RADIAL:
        return propagate_radial(profile, wavelength, z, out_spacing, out_extent)
    return propagate_lateral(profile, wavelength, z, out_spacing, out_extent)


def fwhm(x, y):
    """Full width at half maximum by linear interpolation of the crossings."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    peak = y.max()
    at_max = np.flatnonzero(y == peak)
    lo, hi = at_max[0], at_max[-1]
    if lo == 0 or hi == y.size - 1:
        raise RangeError("maximum lies on the grid edge")
    half = peak / 2
    below_left = np.flatnonzero(y[:lo] < half)
    below_right = np.flatnonzero(y[hi + 1:] < half)
    if below_left.size == 0 or below_right.size == 0:
        raise RangeError("curve does not fall below half maximum on both sides")
    i = below_left[-1]
    xl = x[i] + (half - y[i]) / (y[i + 1] - y[i]) * (x[i + 1] - x[i])
    k = hi + 1 + below_right[0]
    xr = x[k - 1] + (half - y[k - 1]) / (y[k] - y[k - 1]) * (x[k] - x[k - 1])
    return float(xr - xl)


def field_fwhm(f):
    return fwhm(*f.symmetric_cut())


def first_zero_radius(f):
    """Distance from the axis to the first intensity minimum."""
    x, i = f.coords, f.intensity
    if f.kind == LATERAL:
        c = x.size // 2
        x, i = x[c:] - x[c], i[c:]
    k = np.flatnonzero((i[1:-1] <= i[:-2]) & (i[1:-1] <= i[2:]))
    if k.size == 0:
        raise RangeError("no intensity minimum inside the grid")
    k = k[0] + 1
    # parabolic refinement of the minimum
    a, b, c = i[k - 1], i[k], i[k + 1]
    den = a - 2 * b + c
    off = 0.5 * (a - c) / den if den > 0 else 0.0
    return float(x[k] + off * f.spacing)


def line_spread(f):
    """``(x, L)``: intensity integrated along the edge direction.

    Radial fields are Abel-projected: L(x) = int I(sqrt(x^2 + y^2)) dy,
    truncated at the grid radius.
    """
    if f.kind == LATERAL:
        return f.coords, f.intensity
    rho, inten = f.coords, f.intensity
    rmax = rho[-1]
    x = np.concatenate((-rho[:0:-1], rho))
    y = np.arange(-rho.size + 1, rho.size) * (f.spacing / 2)
    y = y[np.abs(y) <= rmax]
    rr = np.hypot(x[:, None], y[None, :])
    vals = np.interp(rr, rho, inten, right=0.0)
    return x, np.trapezoid(vals, y, axis=1)


def knife_edge_scan(f, positions):
    """Flux passing an edge that blocks ``x < x0``, for each ``x0``.

    The derivative is the negated gradient, i.e. the line-spread function.
    """
    positions = np.asarray(positions, dtype=float)
    x, lsf = line_spread(f)
    if positions.min() < x[0] - 1e-15 or positions.max() > x[-1] + 1e-15:
        raise RangeError(
            f"edge positions must lie within [{x[0]:.4g}, {x[-1]:.4g}] m of the field grid")
    seg = 0.5 * (lsf[1:] + lsf[:-1]) * np.diff(x)
    beyond = np.concatenate((np.cumsum(seg[::-1])[::-1], [0.0]))  # flux in [x_k, x_max]
    flux = np.interp(positions, x, beyond)
    deriv = -np.gradient(flux, positions) if positions.size > 1 else np.zeros(1)
    return KnifeEdgeCurve(positions, flux, deriv)


def encircled_flux(f, radius):
    """Flux within ``radius`` of the axis (radial) or of the centre (lateral)."""
    x, inten = f.coords, f.intensity
    if f.kind == RADIAL:
        if radius > x[-1] * (1 + 1e-12):
            raise RangeError(f"integration radius {radius!r} exceeds the grid ({x[-1]!r})")
        grid = np.union1d(x[x < radius], [radius])
        vals = np.interp(grid, x, inten)
        return float(np.trapezoid(vals * 2 * np.pi * grid, grid))
    if radius > x[-1] * (1 + 1e-12):
        raise RangeError(f"integration radius {radius!r} exceeds the grid ({x[-1]!r})")
    c = x[np.argmax(inten)]
    if c - radius < x[0] - 1e-15 or c + radius > x[-1] + 1e-15:
        raise RangeError("integration window around the peak leaves the grid")
    inner = x[(x > c - radius) & (x < c + radius)]
    grid = np.concatenate(([c - radius], inner, [c + radius]))
    return float(np.trapezoid(np.interp(grid, x, inten), grid))


def focal_efficiency(f, integration_radius=None):
    """Focused flux over incident aperture flux; default radius 5 x FWHM."""
    if not np.any(f.samples):
        # nothing transmitted: no spot to measure
        radius = 0.0 if integration_radius is None else integration_radius
        return FocalEfficiency(0.0, 0.0, radius, math.nan)
    width = field_fwhm(f)
    radius = 5.0 * width if integration_radius is None else integration_radius
    if radius < 0:
        raise DomainError("integration radius must be non-negative")
    absolute = encircled_flux(f, radius) / f.incident_flux
    return FocalEfficiency(absolute / f.membrane_intensity, absolute, radius, width)


def blur_fwhm(source_size, source_distance, focal_length):
    """Demagnified source size: s * f / (L - f)."""
    if min(source_size, source_distance, focal_length) < 0 or source_distance <= focal_length:
        raise DomainError("need non-negative sizes and source_distance > focal_length")
    return source_size * focal_length / (source_distance - focal_length)


def source_blur(x, intensity, source_size, source_distance, focal_length):
    """Convolve a 1-D intensity curve with the Gaussian image of the source.

    The kernel integrates the Gaussian over each grid cell, so a source much
    smaller than the spacing leaves the curve unchanged.
    """
    x = np.asarray(x, dtype=float)
    intensity = np.asarray(intensity, dtype=float)
    b = blur_fwhm(source_size, source_distance, focal_length)
    if b == 0:
        return intensity.copy()
    dx = x[1] - x[0]
    if not np.allclose(np.diff(x), dx, rtol=1e-9, atol=0):
        raise DomainError("source_blur needs a uniform grid")
    sig = b / (2 * math.sqrt(2 * math.log(2)))
    half = int(math.ceil(6 * sig / dx))
    edges = (np.arange(-half, half + 2) - 0.5) * dx
    kern = np.diff(ndtr(edges / sig))
    kern /= kern.sum()
    return np.convolve(intensity, kern, mode="same")
