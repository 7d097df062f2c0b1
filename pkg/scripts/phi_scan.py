"""Tabulate Phi on a grid, locate its maximum and the implied C-class constant."""
import argparse
import math

from gaussiso.cli import scan_grid
from gaussiso.search import maximize_phi

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--out", default="phi_scan.csv")
ap.add_argument("--hi", type=float, default=3.0)
ap.add_argument("--resolution", type=int, default=121)
args = ap.parse_args()

scan_grid("Phi", 0.0, args.hi, args.resolution, args.out)
res = maximize_phi()
print(f"wrote {args.out}")
print(f"max Phi = {res.value:.10f} at ({res.point.alpha:.10f}, {res.point.beta:.10f})")
print(f"4 M / 2 pi = {4 * res.value / (2 * math.pi):.10f}")
