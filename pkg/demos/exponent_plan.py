"""Exact exponent bookkeeping for the smoothing argument.

For each level j the plan picks a step width d = x^gamma and a split height
for the singularity sum, so the error after smoothing is balanced.
"""
from fractions import Fraction

from pgtlab import ManifoldParams, MODULAR_SURFACE
from pgtlab.gallagher import exponent_limit, exponent_sequence, plan_residuals, solve_plan

print("modular surface")
print(f"{'j':>3} {'label':>14} {'x exponent':>12} {'log exponent':>13}")
for j in range(1, 7):
    plan = solve_plan(MODULAR_SURFACE, j)
    print(f"{j:3d} {plan.label:>14} {str(plan.psi0_x_exponent):>12} {str(plan.psi0_log_exponent):>13}")

# Everything is a Fraction, so the balancing equations hold exactly
plan = solve_plan(ManifoldParams(5, Fraction(7, 3)), 9)
print("\nresiduals for n=5, rho=7/3, j=9:", plan_residuals(plan))

# The exponents climb towards a limit as j grows
for n in (2, 3, 4):
    params = ManifoldParams.real_hyperbolic(n)
    seq = exponent_sequence(params, range(n, n + 5))
    print(f"n={n}: {[str(e) for e in seq]} -> {exponent_limit(params)}")
