"""Where does the smoothed remainder exceed its threshold?

We scan [e^i, e^{i+1}] on a log-uniform grid and record the fraction of the
interval (in dx/x measure) where the critical-line remainder is too large.
"""
from pgtlab import MODULAR_SURFACE
from pgtlab.explicit import weyl_sample
from pgtlab.gallagher import converge_check, critical_remainder, exceptional_report, solve_plan

P = MODULAR_SURFACE
cat = weyl_sample(P, 1.0, 100.0)
plan = solve_plan(P, 2)

report = exceptional_report(lambda x: critical_remainder(cat, plan, x), plan, P, range(4, 12), 128)
for i, m in report.intervals:
    print(f"[e^{i}, e^{i + 1}]  exceptional measure {m:.4f}")
finite, rate = converge_check(report)
print("total:", report.total_measure, "| summable trend:", finite, "| fitted rate:", rate)

# Scaling the remainder up shows the detector actually fires
loud = exceptional_report(lambda x: 200 * critical_remainder(cat, plan, x), plan, P, range(4, 12), 128)
print("with a 200x remainder:", [round(m, 3) for _, m in loud.intervals])
