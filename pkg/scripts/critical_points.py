"""Interior critical points of I and the values u takes along beta = f(alpha).

Both equations of grad I = 0 force beta*exp(-beta^2/2) = alpha*exp(-alpha^2/2),
which holds on beta = f(alpha) and on the diagonal.  On the f-branch the
candidate value is u(alpha) <= 2/e; the diagonal carries a saddle with a
larger value, still below sqrt(pi/2).
"""
import math

import numpy as np

from gaussiso import special as sf
from gaussiso.search import critical_curve, locate_I_critical_points

curve = critical_curve()
print(f"beta = f(alpha): max u = {curve.candidate_values.max():.12f} (2/e = {2 / math.e:.12f}), "
      f"min |residual| = {np.abs(curve.residual).min():.4f}")
for p in locate_I_critical_points():
    r1, r2 = sf.critical_residual(p)
    print(f"critical point ({p.alpha:.15f}, {p.beta:.15f}) [{sf.critical_branch(p)}]: "
          f"I = {sf.I_func(p):.15f}, residuals {r1:.1e} {r2:.1e}")
print(f"sqrt(pi/2) = {math.sqrt(math.pi / 2):.15f}")
