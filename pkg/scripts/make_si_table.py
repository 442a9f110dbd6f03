"""Regenerate the bundled silicon optical-constants table.

Uses the Chantler/Elam tables shipped with ``xraydb`` (not a runtime
dependency). Run once; the CSV is committed.

    python scripts/make_si_table.py src/zoneplate/data/si.csv
"""
import sys

import numpy as np
import xraydb

SI_DENSITY = 2.33  # g/cm^3


def main(path):
    energies = np.arange(7000.0, 9000.0 + 1.0, 50.0)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("energy_eV,delta,beta\n")
        for e in energies:
            delta, beta, _ = xraydb.xray_delta_beta("Si", SI_DENSITY, e)
            fh.write(f"{e:.1f},{delta:.6e},{beta:.6e}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "si.csv")
