"""Closed geodesics on the modular surface, counted two ways.

Run from the repository root:  python3 demos/modular_spectrum.py
"""
import math

import numpy as np

from pgtlab import MODULAR_SURFACE
from pgtlab.chebyshev import li, pi_gamma, psi0
from pgtlab.experiments import fit_exponent, pgt_compare
from pgtlab.spectrum import brute_force_spectrum, enumerate_spectrum

# The fast enumerator works trace by trace through binary quadratic forms.
# A slow matrix search over SL(2, Z) should find exactly the same classes.
fast = enumerate_spectrum(300)
slow = brute_force_spectrum(300, 300)
print("records up to norm 300:", len(fast), "| brute force agrees:", fast.multiset() == slow.multiset())

# A longer list for the counting experiments
spec = enumerate_spectrum(1e6)
print("classes up to norm 1e6:", sum(r.multiplicity for r in spec.records))

# The first few norms, whether they are primitive, and how many classes share them
for rec in spec.records[:6]:
    print(f"  N = {rec.norm:10.4f}  length = {rec.length:.4f}  primitive = {rec.primitive!s:5}  multiplicity = {rec.multiplicity}")

# %% pi_Gamma against li
print()
print(f"{'x':>10} {'pi_gamma':>10} {'li(x)':>12} {'ratio':>8}")
for x in (1e2, 1e3, 1e4, 1e5, 1e6):
    p = pi_gamma(spec, x)
    print(f"{x:10.0f} {p:10d} {li(x):12.2f} {p / li(x):8.4f}")

# %% How big is psi0(x) - x?
# On a log-log plot the remainder should grow no faster than x^{3/4}
xs = np.geomspace(1e3, 1e6, 200)
slope, err = fit_exponent([(x, psi0(spec, x) - x) for x in xs])
print(f"\nfitted growth exponent of |psi0 - x|: {slope:.3f} +- {err:.3f}")

# %% The same comparison through the packaged routine
rows = pgt_compare(spec, MODULAR_SURFACE, "unconditional", 2, [1e4, 1e5, 1e6])
for r in rows:
    print(f"x={r['x']:.0e}  remainder={r['remainder']:+.1f}  bound={r['bound']:.1f}")
