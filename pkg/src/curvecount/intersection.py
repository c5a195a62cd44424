"""Geometric intersection numbers where exact formulas exist.

On the torus the pairing of weighted classes is the classical determinant
formula |p1*q2 - q1*p2|; in particular the diamond norm |p|+|q| of a class
equals its total intersection with the filling multicurve a + b.  On the
genus-2 model only pairings against the pants curves are defined (the m_i
coordinate is that intersection number by construction); a general
Dehn-Thurston pairing is out of scope.
"""

from __future__ import annotations

from .coords import DTCoord, TorusCoord


def torus_intersection(alpha: TorusCoord, beta: TorusCoord) -> int:
    """|p_a q_b - q_a p_b|, bilinear in the underlying weighted classes."""
    return abs(alpha.p * beta.q - alpha.q * beta.p)


def dt_pants_intersection(alpha: DTCoord, i: int) -> int:
    """Intersection of a Dehn-Thurston class with pants curve c_i, i in 1..3."""
    if i not in (1, 2, 3):
        raise IndexError(f"index out of range: pants curve index {i} not in 1..3")
    return alpha.m[i - 1]
