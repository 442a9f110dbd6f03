"""Focal spot of a configured plate: widths and efficiency vs integration radius.

    python scripts/focus_study.py configs/si_112zones.cfg

Prints the PSF, line-spread and knife-edge widths, the first dark ring, and
the focused fraction inside disks of growing radius for the real plate and
for the lossless 0/pi plate of the same layout.
"""
import argparse

from zoneplate import propagation as P
from zoneplate import transmission as T
from zoneplate.config import load_config
from zoneplate.efficiency import grating_for_component, order_efficiency

UM = 1e6


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--extent-um", type=float, default=12.0, help="output half-width")
    args = ap.parse_args()

    cfg = load_config(args.config)
    oc = cfg.optical_constants()
    plate = cfg.build_plate(oc)
    real = P.propagate(T.sample_profile(plate, oc), oc.wavelength, cfg.focal_length,
                       out_extent=args.extent_um / UM)
    ideal = P.propagate(T.ideal_phase_profile(plate), oc.wavelength, cfg.focal_length,
                        out_extent=args.extent_um / UM)

    width = P.field_fwhm(real)
    x, lsf = P.line_spread(real)
    ke = P.knife_edge_scan(real, x)
    scale = P.diffraction_scale(T.ideal_phase_profile(plate), oc.wavelength, cfg.focal_length)
    print(f"outer zone width    {scale * UM:.4f} um")
    print(f"PSF FWHM            {width * UM:.4f} um  ({width / scale:.3f} x outer zone)")
    print(f"line-spread FWHM    {P.fwhm(x, lsf) * UM:.4f} um")
    print(f"knife-edge FWHM     {P.fwhm(x, ke.derivative) * UM:.4f} um")
    print(f"first dark ring     {P.first_zero_radius(real) * UM:.4f} um")

    g_real = grating_for_component(plate.components[0], oc, plate.relief_height)
    g_ideal = grating_for_component(plate.components[0])
    print(f"\ngrating model k=1: real {order_efficiency(g_real, 1):.4f}, "
          f"lossless {order_efficiency(g_ideal, 1):.4f}")
    print(f"{'radius / FWHM':>14} {'radius um':>10} {'real':>8} {'lossless':>9}")
    for mult in (1, 2, 3, 5, 10, 20):
        r = mult * width
        if r > real.coords[-1]:
            break
        print(f"{mult:>14} {r * UM:>10.3f} {P.focal_efficiency(real, r).relative:>8.4f} "
              f"{P.focal_efficiency(ideal, r).relative:>9.4f}")


if __name__ == "__main__":
    main()
