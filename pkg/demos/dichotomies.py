"""Radial limits and Carleson measures: the two classification results side by side.

Run with ``python3 demos/dichotomies.py``.
"""
from blochlab import Gauge, carleson_classify, divergence_demo, parse_measure

for g in (Gauge.const(), Gauge.power(0.5)):
    rep = divergence_demo(g, m_max=20)
    print(f"{g.to_dsl():>10}: {rep.verdict}, {rep.detail}")

print()
for text in ("power:-1.5", "power:-1", "power:0", "power:2", "atom:0.5:1"):
    c = carleson_classify(Gauge.const(), 2.0, parse_measure(text))
    print(f"{text:>12}: {c.status} {'' if c.value is None else f'{c.value:.6f}'}")
