"""Hyperbolic structures as holonomy representations.

A cusped punctured-torus structure is a Markoff trace triple; geodesic
length of a class is 2 arccosh(|trace|/2) of its holonomy image.  Counting
simple classes in length balls realizes the geometric counting law, and
the ratio of counts under two structures converges to the ratio of their
unit-ball constants, independent of the type counted.  Genus-2 structures
are built from Fenchel-Nielsen data on the theta decomposition and
validate themselves (relator to +-identity, boundary traces).
"""

import math

from curvecount import (
    FNCoords,
    NormSpec,
    TorusCoord,
    estimate_B,
    genus2_structure,
    model_by_name,
    ratio_series,
    torus_simple_length,
    torus_structure,
    type_count_series,
    word_length,
)
from curvecount.tracing import TypeKey

torus = model_by_name("torus-1-1")

print("== the modular torus (3,3,3) ==")
X1 = torus_structure(3, 3, 3)
for coord in (TorusCoord(1, 0), TorusCoord(0, 1), TorusCoord(1, 1), TorusCoord(2, 1)):
    print(f"length of {coord.as_tuple()}: {torus_simple_length(X1, coord):.6f}")
print(f"commutator trace residual: {X1.validation['commutator_trace_residual']:.2e}")

print("\n== a second, non-isometric structure ==")
X2 = torus_structure(3, 5, (15 + math.sqrt(89)) / 2)
for coord in (TorusCoord(1, 0), TorusCoord(0, 1), TorusCoord(1, 1)):
    print(f"length of {coord.as_tuple()}: {torus_simple_length(X2, coord):.6f}")

print("\n== ratio law across structures ==")
primitive = TypeKey(model_name=torus.name, text="d=1")
n1 = NormSpec("hyperbolic-length", rep=X1)
n2 = NormSpec("hyperbolic-length", rep=X2)
schedule = [15.0, 25.0, 35.0]
counts = ratio_series(
    type_count_series(torus, n1, schedule, primitive),
    type_count_series(torus, n2, schedule, primitive),
)
bs = ratio_series(estimate_B(torus, n1, schedule), estimate_B(torus, n2, schedule))
print("count ratio:", [(L, round(v, 4)) for L, v in counts.points])
print("B-hat ratio:", [(L, round(v, 4)) for L, v in bs.points])

print("\n== genus-2 holonomy from Fenchel-Nielsen data ==")
rep = genus2_structure(FNCoords((2.0, 2.5, 3.0), (0.4, -0.2, 0.0)))
print(f"relator residual: {rep.validation['relator_residual']:.2e}")
for word, ell in zip(rep.pants_words, (2.0, 2.5, 3.0)):
    print(f"pants curve '{word}': length {word_length(rep, word):.9f} (target {ell})")
