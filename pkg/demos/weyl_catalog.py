"""Synthetic singularity catalogs and the size of the critical-line sum.

A catalog whose heights follow a Weyl law stands in for real spectral data.
"""
import math

import numpy as np

from pgtlab import MODULAR_SURFACE, validate_catalog
from pgtlab.explicit import critical_sum, explicit_psi_j, tail_majorant, weyl_sample
from pgtlab.gallagher import fit_loglog_slope, gallagher_majorant

P = MODULAR_SURFACE
cat = weyl_sample(P, 1.0, 1000.0)
ch = cat.channels[0]
print("critical points:", len(ch.critical_alpha), "| validation problems:", validate_catalog(cat))

# The mean square of the truncated sum over windows above Y falls off like a power of Y
ys = np.geomspace(10, 10**2.5, 12)
for j in (2, 3, 4):
    vals = [gallagher_majorant(ch, j, y) for y in ys]
    slope, _ = fit_loglog_slope(ys, vals)
    print(f"j={j}: majorant slope {slope:.3f}  (expected {-(2 * j + 3 - 2 * P.n)})")

# %% Explicit formula for psi_2 and the part carried by the critical points
x = 1e4
full = explicit_psi_j(cat, x, 2)
z = critical_sum(cat, x, 2)
print(f"\npsi_2({x:.0f}) from the catalog: {full:.6e}")
print(f"critical contribution: {z.real:+.3e} (imaginary residue {abs(z.imag):.1e})")
print(f"tail bound above height 100: {tail_majorant(cat, x, 2, 100.0):.3e}")
