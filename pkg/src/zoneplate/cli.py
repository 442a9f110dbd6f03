"""Command-line entry point: ``zoneplate design|efficiency|simulate|export``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .config import load_config
from .efficiency import (focusing_efficiency_of_component, grating_for_component, ideal_efficiency,
                         order_efficiency, slitness_scan)
from .errors import (ConfigError, DomainError, FabricationLimitError, FormatError, RangeError,
                     SamplingError, ZonePlateError)
from .geometry import first_order_aperture
from .materials import attenuation_length, intensity_transmission, phase_retardation, pi_height
from .propagation import (first_zero_radius, focal_efficiency, fwhm, knife_edge_scan, line_spread,
                          propagate, source_blur)
from .transmission import default_spacing, sample_profile

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_LIMIT = 0, 2, 3, 4
UM = 1e6
DEFAULT_ORDERS = tuple(range(-7, 8))


def design_summary(cfg, plate, oc):
    d = plate.design
    c0 = plate.components[0]
    lines = [
        f"energy = {cfg.energy / 1e3:.4f} keV",
        f"wavelength = {cfg.wavelength * 1e10:.5f} A",
        f"focal_length = {d.focal_length * UM:.6g} um",
        f"sigma = {d.sigma * UM:.4f} um",
        f"r1 = {plate.boundaries()[0][1] * UM:.4f} um",
        f"N = {sum(c.n_zones for c in plate.components)}",
        f"aperture = {plate.aperture * UM:.4f} um",
        f"min_zone_width = {plate.min_zone_width() * UM:.4f} um",
        f"outer_zone_width = {np.diff(plate.boundaries()[-1])[-1] * UM:.4f} um",
        f"pi_height = {pi_height(oc) * UM:.4f} um",
        f"relief_height = {plate.relief_height * UM:.4f} um",
        f"relief_phase = {phase_retardation(oc, plate.relief_height) / np.pi:.4f} pi",
        f"attenuation_length = {attenuation_length(oc) * UM:.3f} um",
        f"membrane_thickness = {plate.membrane_thickness * UM:.4f} um",
        f"membrane_transmission = {intensity_transmission(oc, plate.membrane_thickness):.4f}",
        f"relief_transmission = {intensity_transmission(oc, plate.relief_height):.4f}",
    ]
    for i, (c, b) in enumerate(zip(plate.components, plate.boundaries())):
        lines.append(f"component {i}: m={c.order} j={c.offset} n={c.n_first}..{c.n_last} "
                     f"r={b[0] * UM:.4f}..{b[-1] * UM:.4f} um")
    if len(plate.components) > 1 or c0.order > 1:
        a1 = first_order_aperture(d, plate.min_feature)
        lines.append(f"aperture_ratio = {plate.aperture / a1:.4f} (A_1 = {a1 * UM:.4f} um)")
    return lines


def run_design(cfg, out_dir):
    oc = cfg.optical_constants()
    plate = cfg.build_plate(oc)
    io.write_zone_table(out_dir / "zone_table.csv", plate)
    io.write_svg(out_dir / "zone_plate.svg", plate)
    lines = design_summary(cfg, plate, oc)
    (out_dir / "design_summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return plate, lines


def order_rows(cfg, plate, oc, orders):
    t_mem = intensity_transmission(oc, plate.membrane_thickness)
    rows = []
    for ci, c in enumerate(plate.components):
        real = grating_for_component(c, oc, plate.relief_height)
        ideal = grating_for_component(c)
        for k in orders:
            rel = order_efficiency(real, k)
            rows.append((ci, c.order, c.offset, k, rel, rel * t_mem, order_efficiency(ideal, k)))
    return rows


def parse_scan(text):
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"--scan-slitness expects LO:HI:STEP, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise ConfigError("--scan-slitness needs LO <= HI and STEP > 0")
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(n), 12)


def run_efficiency(cfg, out_dir, orders=DEFAULT_ORDERS, scan=None, scan_order=None):
    oc = cfg.optical_constants()
    plate = cfg.build_plate(oc)
    for c in plate.components:
        focusing_efficiency_of_component(c, oc, plate.relief_height)  # validates (m, j)
    rows = order_rows(cfg, plate, oc, orders)
    io.write_order_table(out_dir / "orders.csv", rows)
    lines = [f"component {ci} (m={m}, j={j}) k={k}: relative={rel:.4f} absolute={ab:.4f} "
             f"ideal={ideal:.4f}" for ci, m, j, k, rel, ab, ideal in rows]
    scan_values = None
    if scan is not None:
        m = plate.components[-1].order
        k = m if scan_order is None else scan_order
        scan_values = slitness_scan(m, k, scan)
        io.write_scan(out_dir / "slitness_scan.csv", scan, scan_values)
        lines.append(f"slitness scan: m={m}, k={k}, {len(scan)} points "
                     f"(lossless; 4/(pi m)^2 = {ideal_efficiency(m):.4f})")
    return rows, scan_values, lines


def _measured(fn, *args):
    """``fn(*args)``, or None when the curve has no measurable spot."""
    try:
        return fn(*args)
    except RangeError:
        return None


def _um(value):
    return None if value is None else value * UM


def focal_order(focal_length, z, tol=0.01):
    """Odd integer m when z is within ``tol`` of f/m, else None."""
    ratio = focal_length / z
    m = round(ratio)
    if m >= 1 and m % 2 == 1 and abs(ratio - m) <= tol * m:
        return m
    return None


def run_simulate(cfg, out_dir, z="focus", knife_edge=False):
    oc = cfg.optical_constants()
    plate = cfg.build_plate(oc)
    zval = cfg.focal_length if z == "focus" else float(z) / UM
    if zval <= 0:
        raise DomainError(f"propagation distance must be positive, got {z!r}")
    order = focal_order(cfg.focal_length, zval)
    spacing = cfg.spacing
    if spacing is None and order:
        # each half-zone spans order * pi of phase at the order-th focus
        spacing = default_spacing(plate) / order
    profile = sample_profile(plate, oc, spacing)
    field = propagate(profile, oc.wavelength, zval, cfg.out_spacing, cfg.extent)
    io.write_psf(out_dir / "psf.csv", field)
    peak = int(np.argmax(field.intensity))
    if order and abs(field.coords[peak]) > field.spacing:
        order = None  # no on-axis focus found
    eff = _measured(focal_efficiency, field, cfg.integration_radius)
    width = None if eff is None else eff.fwhm
    metrics = {
        "z_um": zval * UM,
        "f_over_z": cfg.focal_length / zval,
        "focus_order": order,
        "energy_kev": cfg.energy / 1e3,
        "fwhm_um": _um(width),
        "first_zero_um": _um(_measured(first_zero_radius, field)),
        "efficiency_relative": None if eff is None else eff.relative,
        "efficiency_absolute": None if eff is None else eff.absolute,
        "integration_radius_um": None if eff is None else eff.integration_radius * UM,
        "peak_intensity": float(field.intensity[peak]),
        "peak_position_um": float(field.coords[peak] * UM),
        "input_samples": int(profile.samples.size),
        "output_samples": int(field.samples.size),
        "input_spacing_um": profile.spacing * UM,
        "output_spacing_um": field.spacing * UM,
    }
    by_radius = {}
    for mult in (2, 5, 10, 20):
        if width is not None and mult * width <= field.coords[-1]:
            by_radius[f"{mult}xFWHM"] = focal_efficiency(field, mult * width).relative
    metrics["efficiency_relative_by_radius"] = by_radius
    x, lsf = line_spread(field)
    metrics["line_spread_fwhm_um"] = _um(_measured(fwhm, x, lsf))
    if cfg.source_size > 0 and cfg.source_distance:
        xs, cut = field.symmetric_cut()
        blurred = source_blur(xs, cut, cfg.source_size, cfg.source_distance, cfg.focal_length)
        metrics["blurred_fwhm_um"] = _um(_measured(fwhm, xs, blurred))
    if knife_edge:
        curve = knife_edge_scan(field, x)
        io.write_knife_edge(out_dir / "knife_edge.csv", curve)
        metrics["knife_edge_fwhm_um"] = _um(_measured(fwhm, curve.positions, curve.derivative))
    io.write_metrics(out_dir / "metrics.json", metrics)
    return field, metrics


def run_export(cfg, out_dir, fmt):
    plate = cfg.build_plate()
    if fmt == "csv":
        return io.write_ring_list(out_dir / "rings.csv", plate)
    if fmt == "svg":
        return io.write_svg(out_dir / "zone_plate.svg", plate)
    raise ConfigError(f"unknown export format {fmt!r}")


def _orders(text):
    try:
        return tuple(int(k) for k in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"orders must be comma-separated integers: {text!r}")


def build_parser():
    p = argparse.ArgumentParser(prog="zoneplate", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, type=Path)
        sp.add_argument("--out", type=Path, default=None, help="output directory")

    common(sub.add_parser("design", help="zone table, summary and SVG layout"))
    e = sub.add_parser("efficiency", help="diffraction-order efficiency table")
    common(e)
    e.add_argument("--orders", type=_orders, default=DEFAULT_ORDERS)
    e.add_argument("--scan-slitness", default=None, metavar="LO:HI:STEP")
    e.add_argument("--scan-order", type=int, default=None)
    s = sub.add_parser("simulate", help="propagate to a plane and measure the focus")
    common(s)
    s.add_argument("--z", default="focus", help="distance in um, or 'focus'")
    s.add_argument("--knife-edge", action="store_true")
    x = sub.add_parser("export", help="fabrication hand-off files")
    common(x)
    x.add_argument("--format", choices=("csv", "svg"), required=True)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        out_dir = args.out if args.out is not None else cfg.out_dir
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "design":
            _, lines = run_design(cfg, out_dir)
        elif args.command == "efficiency":
            scan = parse_scan(args.scan_slitness) if args.scan_slitness else None
            _, _, lines = run_efficiency(cfg, out_dir, args.orders, scan, args.scan_order)
        elif args.command == "simulate":
            if args.z != "focus":
                try:
                    float(args.z)
                except ValueError:
                    raise ConfigError(f"--z must be a number or 'focus', got {args.z!r}") from None
            _, metrics = run_simulate(cfg, out_dir, args.z, args.knife_edge)
            lines = [f"{k} = {io.fmt(v) if isinstance(v, float) else v}"
                     for k, v in sorted(metrics.items())]
        else:
            path = run_export(cfg, out_dir, args.format)
            lines = [f"wrote {path}"]
    except (ConfigError, FormatError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SamplingError, FabricationLimitError) as exc:
        print(f"limit error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (DomainError, ZonePlateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print("\n".join(lines))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
