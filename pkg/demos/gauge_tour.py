"""Tour of the three built-in gauges: closed forms, regularity and the extremal series.

Run with ``python3 demos/gauge_tour.py``.
"""
import numpy as np

from blochlab import Gauge, build_extremal, check_regularity, classify_dichotomy, quadratic_integral, verify_lemma31

TS = np.geomspace(2.0 ** -40, 1.0, 400)
GAUGES = [Gauge.const(), Gauge.power(0.5), Gauge.log(-0.5)]

for g in GAUGES:
    print(f"gauge {g.to_dsl()}")
    print(f"  regularity: {'ok' if all(c.passed for c in check_regularity(g, TS).conditions) else 'fails'}")
    print(f"  I(0+) classification: {classify_dichotomy(g)}")
    for m in (4, 12, 20):
        x = 2.0 ** -m
        closed = quadratic_integral(g, x, method="closed").value_I
        quad = quadratic_integral(g, x, method="quadrature").value_I
        print(f"  I(2^-{m:<2}) closed {closed:.12f}  quadrature {quad:.12f}")
    rep = verify_lemma31(g, 20)
    print(f"  lower bound constant over r in [0, 1-2^-20]: {rep.extremal_constant:.4f} ({rep.verdict})")
    f = build_extremal(g, 8)
    print(f"  first coefficients: {[round(float(c), 4) for c in f.coeffs[:5]]}")
    print()
