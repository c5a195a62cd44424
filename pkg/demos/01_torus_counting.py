"""Counting simple multicurves on the punctured torus.

Integral simple multicurves on the once-punctured torus are nonzero lattice
classes (p, q) up to sign; the primitive weight is gcd(|p|, |q|).  Counting
classes in growing norm balls exhibits the quadratic growth law, the
unit-ball constant of the norm, and the per-type limits: the density of
weight-d classes converges to (6/pi^2)/d^2.
"""

from math import pi

from curvecount import (
    NormSpec,
    count_by_type,
    estimate_B,
    fit_exponent,
    frequency_report,
    model_by_name,
    normalized_count,
    tail_report,
    type_count_series,
)
from curvecount.tracing import TypeKey

torus = model_by_name("torus-1-1")
diamond = NormSpec("torus-diamond")
square = NormSpec("torus-square")

print("== growth exponent ==")
primitive = TypeKey(model_name=torus.name, text="d=1")
series = type_count_series(torus, diamond, [50, 100, 200, 400], primitive)
slope, stderr = fit_exponent(series)
print(f"primitive classes up to L: {series.points}")
print(f"log-log slope {slope:.4f} +- {stderr:.4f}   (growth exponent is {torus.exponent})")

print("\n== unit-ball constants ==")
for name, norm, expected in (("diamond", diamond, 1.0), ("square", square, 2.0)):
    b = estimate_B(torus, norm, [100, 300, 500])
    print(f"B-hat({name}): {[(L, round(v, 4)) for L, v in b.points]}  -> {expected}")

print("\n== per-type limits ==")
hist = count_by_type(torus, diamond, 500)
normalized = normalized_count(hist, torus.exponent)
for d in (1, 2, 3, 4):
    key = TypeKey(model_name=torus.name, text=f"d={d}")
    print(f"d={d}: normalized count {normalized[key]:.5f}  vs  (6/pi^2)/d^2 = {6/pi**2/d**2:.5f}")

print("\n== frequencies and tail ==")
freqs = frequency_report(hist)
top = sorted(freqs.items(), key=lambda kv: -kv[1])[:4]
for key, f in top:
    print(f"{key.text}: {float(f):.4f}")
chosen, covered = tail_report(hist, 0.3)
print(f"types covering 70%: {[k.text for k in chosen]} (coverage {float(covered):.4f})")
