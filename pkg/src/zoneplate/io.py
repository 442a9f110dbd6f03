"""File formats: zone tables, ring lists, SVG layouts and curve CSVs.

Files use micrometres. Floats are written with a fixed number of
significant digits so identical inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import FormatError
from .geometry import LINEAR

UM = 1e6
EXPORT_DIGITS = 9
TABLE_DIGITS = 12  # zone tables round-trip radii to < 1e-9 relative

ZONE_TABLE_COLUMNS = ("n", "r_inner_um", "r_outer_um", "width_um", "region", "component_index")
RING_COLUMNS = ("ring", "component_index", "m", "j", "n", "r_inner_um", "r_outer_um", "width_um")


def fmt(x, digits=EXPORT_DIGITS):
    return f"{float(x):.{digits}g}"


def _write_rows(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def write_zone_table(path, plate):
    rows = [(n, fmt(a * UM, TABLE_DIGITS), fmt(b * UM, TABLE_DIGITS), fmt((b - a) * UM, TABLE_DIGITS),
             region, ci) for n, a, b, region, ci in plate.zone_rows()]
    return _write_rows(path, ZONE_TABLE_COLUMNS, rows)


def read_zone_table(path):
    """Rows of a zone table as dicts with lengths converted back to metres."""
    with Path(path).open(encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != ZONE_TABLE_COLUMNS:
            raise FormatError(f"unexpected zone-table header {reader.fieldnames}")
        out = []
        for row in reader:
            out.append({"n": int(row["n"]),
                        "r_inner": float(row["r_inner_um"]) / UM,
                        "r_outer": float(row["r_outer_um"]) / UM,
                        "width": float(row["width_um"]) / UM,
                        "region": row["region"],
                        "component_index": int(row["component_index"])})
    return out


def groove_rings(plate):
    """Etched rings (strips for linear plates), innermost first."""
    rings = []
    for n, a, b, region, ci in plate.zone_rows():
        if region == "groove":
            c = plate.components[ci]
            rings.append((ci, c.order, c.offset, n, a, b))
    return rings


def write_ring_list(path, plate):
    rows = [(i, ci, m, j, n, fmt(a * UM), fmt(b * UM), fmt((b - a) * UM))
            for i, (ci, m, j, n, a, b) in enumerate(groove_rings(plate))]
    return _write_rows(path, RING_COLUMNS, rows)


def _scale_bar_length(extent_um):
    """A 1-2-5 round length near a fifth of the drawing width."""
    target = extent_um / 5
    p = 10 ** np.floor(np.log10(target))
    for f in (5, 2, 1):
        if f * p <= target:
            return f * p
    return p


def render_svg(plate):
    """SVG of the groove regions to scale (1 user unit = 1 um)."""
    r_ap = plate.aperture_radius * UM
    margin = 0.05 * 2 * r_ap
    half = r_ap + margin
    size = 2 * half
    bar = _scale_bar_length(2 * r_ap)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{fmt(-half)} {fmt(-half)} '
        f'{fmt(size)} {fmt(size)}" width="{fmt(size)}um" height="{fmt(size)}um">',
        f'<rect x="{fmt(-half)}" y="{fmt(-half)}" width="{fmt(size)}" height="{fmt(size)}" fill="white"/>',
        '<g id="grooves" fill="none" stroke="black">' if plate.geometry_kind != LINEAR
        else '<g id="grooves" fill="black" stroke="none">',
    ]
    for _ci, _m, _j, _n, a, b in groove_rings(plate):
        a, b = a * UM, b * UM
        if plate.geometry_kind == LINEAR:
            for x0 in (a, -b):
                lines.append(f'<rect x="{fmt(x0)}" y="{fmt(-r_ap)}" width="{fmt(b - a)}" '
                             f'height="{fmt(2 * r_ap)}"/>')
        elif a == 0:
            lines.append(f'<circle r="{fmt(b)}" fill="black" stroke="none"/>')
        else:
            lines.append(f'<circle r="{fmt((a + b) / 2)}" stroke-width="{fmt(b - a)}"/>')
    lines.append("</g>")
    y = half - margin / 2
    x0 = -half + margin / 2
    lines.append(f'<g id="scale-bar"><line x1="{fmt(x0)}" y1="{fmt(y)}" x2="{fmt(x0 + bar)}" '
                 f'y2="{fmt(y)}" stroke="red" stroke-width="{fmt(margin / 10)}"/>')
    lines.append(f'<text x="{fmt(x0)}" y="{fmt(y - margin / 6)}" font-size="{fmt(margin / 3)}" '
                 f'fill="red">{fmt(bar)} um</text></g>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(path, plate):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_svg(plate), encoding="utf-8", newline="\n")
    return path


def write_profile(path, profile):
    x = profile.coords * UM
    t = profile.samples
    rows = [(fmt(a, TABLE_DIGITS), fmt(b.real, TABLE_DIGITS), fmt(b.imag, TABLE_DIGITS))
            for a, b in zip(x, t)]
    return _write_rows(path, ("r_um" if profile.kind == "radial" else "x_um", "re_t", "im_t"), rows)


def write_psf(path, field):
    name = "rho_um" if field.kind == "radial" else "x_um"
    rows = [(fmt(a * UM), fmt(b)) for a, b in zip(field.coords, field.intensity)]
    return _write_rows(path, (name, "intensity"), rows)


def write_knife_edge(path, curve):
    rows = [(fmt(a * UM), fmt(b), fmt(c))
            for a, b, c in zip(curve.positions, curve.transmitted_flux, curve.derivative)]
    return _write_rows(path, ("x_um", "flux", "derivative"), rows)


def write_order_table(path, rows):
    """``rows``: (component_index, m, j, k, relative, absolute, ideal)."""
    out = [(ci, m, j, k, fmt(rel), fmt(ab), fmt(ideal)) for ci, m, j, k, rel, ab, ideal in rows]
    return _write_rows(path, ("component_index", "m", "j", "k", "efficiency_relative",
                              "efficiency_absolute", "efficiency_ideal"), out)


def write_scan(path, s_grid, values):
    return _write_rows(path, ("S", "efficiency"), [(fmt(s), fmt(v)) for s, v in zip(s_grid, values)])


def write_metrics(path, metrics):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    def clean(v):
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, (float, np.floating)):
            return float(fmt(v))
        return v

    path.write_text(json.dumps(clean(metrics), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8", newline="\n")
    return path
