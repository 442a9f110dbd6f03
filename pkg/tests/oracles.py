"""Independent reference computations shared by the unit and acceptance tests."""
import math

import numpy as np
from scipy.optimize import brentq
from scipy.special import j1


def fft_grating_efficiencies(t_ridge, t_groove, s, kmax, n=2 ** 16):
    """|c_k|^2 from the DFT of one period, groove on [0, S).

    Each cell holds its exact average (the edge cell is mixed), so the only
    errors are the O((k/n)^2) cell-averaging and aliasing terms.
    """
    edges = np.arange(n + 1) / n
    frac = np.clip((s - edges[:-1]) * n, 0.0, 1.0)
    cells = frac * t_groove + (1 - frac) * t_ridge
    c = np.fft.fft(cells) / n
    ks = np.arange(-kmax, kmax + 1)
    # undo the cell-average sinc so the comparison is with the continuous profile
    sinc = np.sinc(ks / n)
    return ks, np.abs(c[ks % n] / sinc) ** 2


def airy(v):
    v = np.asarray(v, dtype=float)
    out = np.ones_like(v)
    nz = v != 0
    out[nz] = (2 * j1(v[nz]) / v[nz]) ** 2
    return out


def airy_half_width():
    """v at which the Airy intensity drops to one half (about 1.6163)."""
    return brentq(lambda v: airy(np.array([v]))[0] - 0.5, 1.0, 2.0)


def airy_fwhm(wavelength, f, aperture_radius):
    return airy_half_width() * wavelength * f / (math.pi * aperture_radius)


def open_disk_on_axis(radius, wavelength, z):
    """Fresnel on-axis intensity behind a uniformly lit circular hole."""
    return 4 * math.sin(math.pi * radius ** 2 / (2 * wavelength * z)) ** 2
