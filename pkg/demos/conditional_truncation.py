"""The conditional formula for psi_{n-1}: truncating the critical sum at T.

Raising T should move the value by less than the stated error bound.
"""
import numpy as np

from pgtlab import MODULAR_SURFACE, Theorem4Config
from pgtlab.explicit import explicit_psi_nminus1, weyl_sample

P = MODULAR_SURFACE
cat = weyl_sample(P, 0.01, 1e4)

print(f"{'x':>10} {'T=1e3':>14} {'T=1e4':>14} {'|change|/bound':>15}")
for x in np.exp(np.linspace(1, 10, 7)):
    lo, bound = explicit_psi_nminus1(cat, Theorem4Config.zeros(P.n, 1e3), x)
    hi, _ = explicit_psi_nminus1(cat, Theorem4Config.zeros(P.n, 1e4), x)
    print(f"{x:10.1f} {lo:14.6e} {hi:14.6e} {abs(hi - lo) / bound:15.2e}")
