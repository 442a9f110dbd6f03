import math

import numpy as np
import pytest
from scipy.integrate import quad

from zoneplate import efficiency as E
from zoneplate import geometry as G
from zoneplate import propagation as P
from zoneplate import transmission as T
from zoneplate.errors import DomainError, RangeError, SamplingError

from oracles import airy_fwhm, airy_half_width, open_disk_on_axis

F = 0.46
J1_ZERO = 3.831705970207512  # first zero of J1


def lens_profile(radius, wavelength, f, spacing, kind=T.RADIAL):
    """Ideal thin lens (or cylindrical lens) of the given aperture."""
    n = int(round(radius / spacing))
    if kind == T.RADIAL:
        x = (np.arange(n) + 0.5) * spacing
    else:
        x = (np.arange(2 * n) + 0.5 - n) * spacing
    t = np.exp(-1j * math.pi * x ** 2 / (wavelength * f))
    return T.TransmissionProfile(kind, spacing, t, radius)


def open_profile(radius, spacing, kind=T.RADIAL):
    n = int(round(radius / spacing))
    size = n if kind == T.RADIAL else 2 * n
    return T.TransmissionProfile(kind, spacing, np.ones(size, dtype=complex), radius)


@pytest.fixture(scope="module")
def wl(si_805):
    return si_805.wavelength


@pytest.fixture(scope="module")
def lens_field(plate_ref, wl):
    prof = lens_profile(plate_ref.aperture_radius, wl, F, plate_ref.aperture_radius / 8000)
    return P.propagate(prof, wl, F)


class TestOracles:
    def test_airy_half_width_value(self):
        assert airy_half_width() == pytest.approx(1.6163, abs=1e-4)

    def test_lens_fwhm_is_airy(self, lens_field, plate_ref, wl):
        expect = airy_fwhm(wl, F, plate_ref.aperture_radius)
        assert P.field_fwhm(lens_field) == pytest.approx(expect, rel=5e-3)

    def test_lens_first_zero(self, lens_field, plate_ref, wl):
        expect = J1_ZERO / math.pi * wl * F / (2 * plate_ref.aperture_radius)
        assert expect * 1e6 == pytest.approx(0.484, abs=2e-3)
        assert P.first_zero_radius(lens_field) == pytest.approx(expect, rel=1e-2)

    def test_lens_peak_is_fresnel_number_squared(self, lens_field, plate_ref, wl):
        # |U(0)|^2 = (pi R^2 / (lambda f))^2 for a unit plane wave on a lens
        expect = (math.pi * plate_ref.aperture_radius ** 2 / (wl * F)) ** 2
        assert lens_field.intensity[0] == pytest.approx(expect, rel=1e-3)

    def test_cylindrical_lens_first_zero(self, wl):
        r = 50e-6
        prof = lens_profile(r, wl, F, r / 8000, T.LATERAL)
        f = P.propagate(prof, wl, F)
        assert P.first_zero_radius(f) == pytest.approx(wl * F / (2 * r), rel=1e-2)

    @pytest.mark.parametrize("z", [0.05, 0.1, 0.2, 0.7])
    def test_open_disk_on_axis(self, wl, z):
        r = 20e-6
        f = P.propagate(open_profile(r, r / 4000), wl, z)
        expect = open_disk_on_axis(r, wl, z)
        assert abs(f.intensity[0] - expect) < 0.01 * max(expect, 1.0)

    # quad reports roundoff on the piecewise-linear integrand; the bound below is what counts
    @pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
    def test_line_spread_against_quadrature(self, lens_field):
        # Abel projection of the sampled Airy pattern vs adaptive quadrature
        rho, inten = lens_field.coords, lens_field.intensity
        rmax = rho[-1]
        x, lsf = P.line_spread(lens_field)
        for xi in (0.0, 0.2e-6, 0.5e-6, 1.0e-6):
            ymax = math.sqrt(rmax ** 2 - xi ** 2)
            breaks = list(np.arange(0.25e-6, ymax, 0.25e-6))
            ref = 2 * quad(lambda y: np.interp(math.hypot(xi, y), rho, inten), 0, ymax,
                           limit=1000, points=breaks)[0]
            assert abs(np.interp(xi, x, lsf) - ref) < 2e-3 * lsf.max()


class TestReferenceFocus:
    def test_peak_on_axis(self, field_ref):
        assert np.argmax(field_ref.intensity) == 0

    def test_fwhm_is_diffraction_limited(self, field_ref, plate_ref, wl):
        expect = airy_fwhm(wl, F, plate_ref.aperture_radius)
        assert P.field_fwhm(field_ref) == pytest.approx(expect, rel=1e-2)

    def test_first_zero_near_rayleigh(self, field_ref, plate_ref):
        assert P.first_zero_radius(field_ref) == pytest.approx(
            1.22 * plate_ref.min_zone_width(), rel=1e-2)

    def test_dual_resolution(self, plate_ref, si_805, field_ref, profile_ref):
        fine = T.sample_profile(plate_ref, si_805, profile_ref.spacing / 2)
        f2 = P.propagate(fine, si_805.wavelength, F)
        diff = np.max(np.abs(f2.intensity - field_ref.intensity))
        assert diff < 5e-3 * field_ref.intensity.max()

    def test_flux_bound(self, field_ref, profile_ref, ideal_field_ref, ideal_ref):
        assert field_ref.total_flux() <= 1.02 * profile_ref.transmitted_flux()
        assert ideal_field_ref.total_flux() <= 1.02 * ideal_ref.transmitted_flux()

    def test_flux_bound_wide_grid(self, wl):
        # an open disk close to the aperture: most flux on the grid, still bounded
        r = 20e-6
        prof = open_profile(r, r / 2000)
        f = P.propagate(prof, wl, 0.05, out_extent=40e-6)
        ratio = f.total_flux() / prof.transmitted_flux()
        assert 0.9 < ratio <= 1.02


class TestGratingAgreement:
    def _relative(self, profile, wl):
        f = P.propagate(profile, wl, F, out_extent=10e-6)
        return P.focal_efficiency(f, 20 * P.field_fwhm(f)).relative

    def test_lossless(self, ideal_ref, wl):
        assert self._relative(ideal_ref, wl) == pytest.approx(4 / math.pi ** 2, rel=0.03)

    def test_absorbing(self, profile_ref, plate_ref, si_805, wl):
        g = E.grating_for_component(plate_ref.components[0], si_805, plate_ref.relief_height)
        assert self._relative(profile_ref, wl) == pytest.approx(E.order_efficiency(g, 1), rel=0.03)

    def test_default_radius_is_five_fwhm(self, field_ref):
        eff = P.focal_efficiency(field_ref)
        assert eff.integration_radius == pytest.approx(5 * eff.fwhm, rel=1e-12)
        assert eff.relative == pytest.approx(eff.absolute / field_ref.membrane_intensity, rel=1e-12)

    def test_all_opaque(self, profile_ref, wl):
        dark = T.apply_central_stop(profile_ref, profile_ref.aperture_radius)
        f = P.propagate(dark, wl, F)
        eff = P.focal_efficiency(f, 1e-6)
        assert eff.relative == 0.0 and eff.absolute == 0.0

    def test_radius_beyond_grid(self, field_ref):
        with pytest.raises(RangeError):
            P.focal_efficiency(field_ref, 1.0)


@pytest.fixture(scope="module")
def third_order_fields(plate_ref, wl):
    out = {}
    for s in (64, 128):
        prof = T.ideal_phase_profile(plate_ref, plate_ref.min_zone_width() / s)
        out[s] = P.propagate(prof, wl, F / 3)
    return out


class TestThirdOrderFocus:

    def test_dual_resolution(self, third_order_fields):
        fields = third_order_fields
        a, b = fields[64].intensity, fields[128].intensity
        assert np.max(np.abs(a - b)) < 5e-3 * b.max()

    def test_peak_ratio(self, third_order_fields, ideal_field_ref):
        fields = third_order_fields
        # efficiency 1/9 of the first order into a spot 1/9 the area
        ratio = fields[128].intensity[0] / ideal_field_ref.intensity[0]
        assert ratio / 9 == pytest.approx(1 / 9, rel=0.03)
        assert np.argmax(fields[128].intensity) == 0


@pytest.fixture(scope="module")
def linear_field(design_805, wl):
    plate = G.assemble_compound(design_805, [(1, 0, 112)], 1e-5, geometry_kind=G.LINEAR)
    prof = T.ideal_phase_profile(plate)
    return plate, prof, P.propagate(prof, wl, F)


class TestLinear:

    def test_line_focus_fwhm(self, linear_field, wl):
        _, prof, f = linear_field
        dr = P.diffraction_scale(prof, wl, F)
        assert P.field_fwhm(f) == pytest.approx(0.886 * dr, rel=0.02)

    def test_symmetric(self, linear_field):
        i = linear_field[2].intensity
        np.testing.assert_allclose(i, i[::-1], rtol=1e-9, atol=1e-12 * i.max())

    def test_dual_resolution(self, linear_field, wl):
        plate, prof, f = linear_field
        f2 = P.propagate(T.ideal_phase_profile(plate, prof.spacing / 2), wl, F)
        assert np.max(np.abs(f2.intensity - f.intensity)) < 5e-3 * f.intensity.max()

    def test_kind_mismatch(self, linear_field, wl, ideal_ref):
        with pytest.raises(DomainError):
            P.propagate_radial(linear_field[1], wl, F)
        with pytest.raises(DomainError):
            P.propagate_lateral(ideal_ref, wl, F)


class TestDuality:
    R_OUT = 150e-6

    def _pair(self, design, kind):
        fields = []
        for j in (2, -2):
            plate = G.assemble_compound(design, [(1, 0, 112), (3, j, self.R_OUT)], 1e-5,
                                        min_feature=0.05e-6, geometry_kind=kind)
            fields.append(P.propagate(T.ideal_phase_profile(plate), design.wavelength, F))
        return fields

    @pytest.mark.parametrize("kind", [G.CIRCULAR, G.LINEAR])
    def test_focal_intensity_agrees(self, design_805, kind):
        a, b = self._pair(design_805, kind)
        assert a.samples.size == b.samples.size
        peak = max(a.intensity.max(), b.intensity.max())
        assert np.max(np.abs(a.intensity - b.intensity)) < 5e-3 * peak


class TestErrors:
    def test_z_nonpositive(self, ideal_ref, wl):
        with pytest.raises(DomainError):
            P.propagate(ideal_ref, wl, 0.0)

    def test_coarse_output(self, ideal_ref, wl):
        scale = P.diffraction_scale(ideal_ref, wl, F)
        with pytest.raises(SamplingError):
            P.propagate(ideal_ref, wl, F, out_spacing=scale / 4)

    def test_fresnel_fringes_undersampled(self, wl):
        prof = open_profile(89e-6, 0.05e-6)
        with pytest.raises(SamplingError):
            P.propagate(prof, wl, 0.01)


class TestFwhm:
    def test_triangle(self):
        x = np.linspace(-2, 2, 401)
        assert P.fwhm(x, np.clip(1 - np.abs(x), 0, None)) == pytest.approx(1.0, abs=1e-12)

    def test_gaussian(self):
        x = np.arange(-10, 10.0001, 0.05)
        assert P.fwhm(x, np.exp(-x ** 2 / 2)) == pytest.approx(2.3548, rel=5e-3)

    def test_edge_maximum(self):
        x = np.linspace(0, 1, 11)
        with pytest.raises(RangeError):
            P.fwhm(x, 1 - x)

    def test_never_halves(self):
        x = np.linspace(-1, 1, 21)
        with pytest.raises(RangeError):
            P.fwhm(x, 2 - x ** 2)

    def test_plateau_outer_crossings(self):
        x = np.arange(-5.0, 6.0)
        y = np.array([0, 0, 0, 0.5, 1, 1, 1, 0.5, 0, 0, 0])
        # half-maximum reached exactly at x = -2 and x = 2
        assert P.fwhm(x, y) == pytest.approx(4.0)


@pytest.fixture(scope="module")
def curve(field_ref):
    x, _ = P.line_spread(field_ref)
    return x, P.knife_edge_scan(field_ref, x)


class TestKnifeEdge:

    def test_open_and_closed(self, curve, field_ref):
        x, c = curve
        _, lsf = P.line_spread(field_ref)
        assert c.transmitted_flux[0] == pytest.approx(np.trapezoid(lsf, x), rel=1e-12)
        assert c.transmitted_flux[-1] == 0.0

    def test_monotone(self, curve):
        d = np.diff(curve[1].transmitted_flux)
        assert np.all(d <= 1e-6 * curve[1].transmitted_flux[0])

    def test_antisymmetric(self, curve):
        flux = curve[1].transmitted_flux
        total = flux[0]
        assert np.max(np.abs(flux + flux[::-1] - total)) < 5e-3 * total

    def test_derivative_matches_line_spread(self, curve, field_ref):
        x, c = curve
        lsf_w = P.fwhm(*P.line_spread(field_ref))
        assert P.fwhm(x, c.derivative) == pytest.approx(lsf_w, rel=0.02)

    def test_out_of_grid(self, field_ref):
        with pytest.raises(RangeError):
            P.knife_edge_scan(field_ref, [0.0, 1.0])

    def test_lateral_field(self, design_805, wl):
        plate = G.assemble_compound(design_805, [(1, 0, 40)], 1e-5, geometry_kind=G.LINEAR)
        f = P.propagate(T.ideal_phase_profile(plate), wl, F)
        c = P.knife_edge_scan(f, f.coords)
        assert P.fwhm(f.coords, c.derivative) == pytest.approx(P.field_fwhm(f), rel=0.02)


class TestSourceBlur:
    L = 1000.0

    def test_blur_width(self):
        assert P.blur_fwhm(25e-6, self.L, F) * 1e6 == pytest.approx(0.0115, abs=1e-4)

    def test_zero_source_identity(self, field_ref):
        x, i = field_ref.symmetric_cut()
        np.testing.assert_array_equal(P.source_blur(x, i, 0.0, self.L, F), i)

    def test_reference_negligible(self, field_ref):
        x, i = field_ref.symmetric_cut()
        blurred = P.source_blur(x, i, 25e-6, self.L, F)
        assert P.fwhm(x, blurred) == pytest.approx(P.fwhm(x, i), rel=1e-2)

    def test_large_source_quadrature_sum(self, field_ref):
        x, i = field_ref.symmetric_cut()
        b = P.blur_fwhm(2.5e-3, self.L, F)
        expect = math.hypot(P.fwhm(x, i), b)
        assert P.fwhm(x, P.source_blur(x, i, 2.5e-3, self.L, F)) == pytest.approx(expect, rel=0.05)

    def test_flux_preserved_in_interior(self):
        x = np.arange(-2000, 2001) * 1e-8
        i = np.exp(-x ** 2 / (2 * (0.2e-6) ** 2))
        out = P.source_blur(x, i, 25e-6, self.L, F)
        assert out.sum() == pytest.approx(i.sum(), rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            P.blur_fwhm(25e-6, 0.3, F)
