"""Rademacher averages of the extremal series: exact enumeration, closed forms and Monte Carlo.

Run with ``python3 demos/khinchine.py``.
"""
from blochlab import Gauge, RademacherFamily, build_extremal, moment_integral

fam = RademacherFamily(build_extremal(Gauge.const(), 11, "2^k-1"))
z = 0.9
for p in (0.5, 1.0, 2.0):
    exact = moment_integral(fam, z, p, mode="exact")
    mc = moment_integral(fam, z, p, mode="montecarlo", seed=7, samples=200_000)
    line = f"p={p:<4} exact {exact:.10f}  monte carlo {mc:.10f}"
    if p in (1.0, 2.0):
        line += f"  closed {moment_integral(fam, z, p, mode='closed'):.10f}"
    print(line)
