"""Pilot run of the polygon ascent: how far does a regular polygon degenerate?

This is the run that fixed the aspect-ratio threshold in the test suite
(octagon, 10^4 iterations, aspect ~1.6e4).
"""
import argparse
import time

from gaussiso.search import AscentConfig, ascend_polygon
from gaussiso.shapes import regular_ngon

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--n", type=int, default=8)
ap.add_argument("--iters", type=int, default=10_000)
ap.add_argument("--seed", type=int, default=0)
ap.add_argument("--trace", help="CSV path for the trace")
args = ap.parse_args()

t0 = time.perf_counter()
trace = ascend_polygon(regular_ngon(args.n, 1.0), AscentConfig(max_iters=args.iters, seed=args.seed))
dt = time.perf_counter() - t0
if args.trace:
    trace.write_csv(args.trace)
per = trace.perimeters
for k in (0, len(per) // 10, len(per) // 2, len(per) - 1):
    print(f"iter {k:6d}  perimeter {per[k]:.12f}")
print(f"aspect {trace.aspect:.6g}  min turning {min(trace.flatness):.3g}  stalled {trace.stalled}  {dt:.1f}s")
