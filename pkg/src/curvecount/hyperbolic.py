"""Hyperbolic structures as holonomy representations and geodesic lengths.

A structure is a map from group generators to real 2x2 unit-determinant
matrices; the geodesic length of a nontrivial class w is
``2 * arccosh(|tr rho(w)| / 2)``, conjugation- and inversion-invariant.

Torus structures come from trace triples (x, y, z) on the Markoff surface
``x^2 + y^2 + z^2 = xyz`` (equivalently, commutator trace -2: a cusp at the
puncture).  Any matrix pair realizing such traces is conjugate to the
holonomy of the corresponding cusped structure, so word traces are honest
lengths; we use A = [[x, 1], [-1, 0]] and an irreducible companion B.

Genus-2 structures are built from Fenchel-Nielsen data on the theta
decomposition.  Two isometric pants representations are glued along all
three boundaries: the standard pants pair (X1, X2) realizes boundary traces
-2cosh(l_i/2) with the right-angled-hexagon spacing, the second copy is a
conjugate, and the gluing conjugators (with twist translations inserted
along the boundary axes) satisfy the theta-graph relator by construction.
Standard generators a, b, c, d with relator [a,b][c,d] are then words in
the gluing data (a change of presentation found mechanically and verified
as a free-group identity), so the relator maps to the identity matrix up
to floating error.  The construction validates itself: relator residual
and boundary traces are checked, and failure raises loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import acosh, cosh, exp, sinh, sqrt

import numpy as np

from .coords import TorusCoord
from .errors import HolonomyError, WordError
from .surfaces import GENUS2_ID, TORUS_ID

Matrix = tuple[float, float, float, float]  # row-major 2x2

_ID: Matrix = (1.0, 0.0, 0.0, 1.0)


def _mul(m: Matrix, n: Matrix) -> Matrix:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _inv(m: Matrix) -> Matrix:
    a, b, c, d = m  # det assumed 1
    return (d, -b, -c, a)


def _tr(m: Matrix) -> float:
    return m[0] + m[3]


def _det(m: Matrix) -> float:
    return m[0] * m[3] - m[1] * m[2]


def _as_matrix(arr) -> Matrix:
    a = np.asarray(arr, dtype=float)
    return (float(a[0, 0]), float(a[0, 1]), float(a[1, 0]), float(a[1, 1]))


@dataclass
class HolonomyRep:
    """Generator matrices for a hyperbolic structure on a model surface.

    Treat as immutable after construction; instances are shared freely.
    ``pants_words`` names the pants curves as words in the generators
    (genus 2 only).
    """

    model_name: str
    name: str
    matrices: dict  # generator letter -> Matrix
    tolerance: float = 1e-9
    pants_words: tuple[str, ...] = ()
    validation: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)
    _letter_table: dict | None = field(default=None, repr=False)

    def matrix_of(self, word: str) -> Matrix:
        out = _ID
        for ch in word:
            m = self.matrices[ch.lower()]
            out = _mul(out, m if ch.islower() else _inv(m))
        return out

    def to_json_dict(self) -> dict:
        return {
            "model": self.model_name,
            "name": self.name,
            "matrices": {g: [[m[0], m[1]], [m[2], m[3]]] for g, m in self.matrices.items()},
            "tolerance": self.tolerance,
            "validation": self.validation,
        }


def _check_unimodular(matrices: dict, tol: float) -> None:
    for g, m in matrices.items():
        if abs(_det(m) - 1.0) > tol:
            raise HolonomyError(f"generator {g!r} has determinant {_det(m)} != 1")


def torus_structure(
    trace_a: float, trace_b: float, trace_ab: float, tolerance: float = 1e-9
) -> HolonomyRep:
    """Cusped punctured-torus structure from a Markoff trace triple."""
    x, y, z = float(trace_a), float(trace_b), float(trace_ab)
    if min(x, y, z) <= 2:
        raise HolonomyError(
            f"elliptic or parabolic generator: traces {x, y, z} must all exceed 2"
        )
    residual = x * x + y * y + z * z - x * y * z
    if abs(residual) > tolerance * max(1.0, abs(x * y * z)):
        raise HolonomyError(
            f"trace relation violated: x^2+y^2+z^2 - xyz = {residual} for {x, y, z}"
        )
    u = (-z + sqrt(z * z - 4.0)) / 2.0  # negative root, so tr(AB) = -u - 1/u = z
    A: Matrix = (x, 1.0, -1.0, 0.0)
    B: Matrix = (0.0, u, -1.0 / u, y)
    rep = HolonomyRep(
        model_name=TORUS_ID,
        name=f"torus({trace_a},{trace_b},{trace_ab})",
        matrices={"a": A, "b": B},
        tolerance=tolerance,
    )
    _check_unimodular(rep.matrices, tolerance)
    comm = rep.matrix_of("abAB")
    comm_residual = abs(_tr(comm) + 2.0)
    if comm_residual > max(tolerance, 1e-9) * 100:
        raise HolonomyError(f"commutator trace {_tr(comm)} is not -2 (residual {comm_residual})")
    rep.validation.update(
        {"trace_relation_residual": residual, "commutator_trace_residual": comm_residual}
    )
    return rep


@dataclass(frozen=True)
class FNCoords:
    """Fenchel-Nielsen lengths and twists on the theta decomposition."""

    lengths: tuple[float, float, float]
    twists: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if len(self.lengths) != 3 or len(self.twists) != 3:
            raise HolonomyError("FN coordinates need three lengths and three twists")
        if any(l <= 0 for l in self.lengths):
            raise HolonomyError(f"pants-curve lengths must be positive: {self.lengths}")


def _np(m: Matrix):
    return np.array([[m[0], m[1]], [m[2], m[3]]], dtype=float)


def _axis_translation(tau: float) -> Matrix:
    e = exp(tau / 2.0)
    return (e, 0.0, 0.0, 1.0 / e)


_J: Matrix = (0.0, 1.0, -1.0, 0.0)  # conjugates diag(v, 1/v) to diag(1/v, v)


def genus2_structure(fn: FNCoords, tolerance: float = 1e-9) -> HolonomyRep:
    """Holonomy of the genus-2 surface from theta-graph FN coordinates."""
    l1, l2, l3 = fn.lengths
    t1, t2, t3 = fn.twists
    a1, a2, a3 = l1 / 2.0, l2 / 2.0, l3 / 2.0

    lam, mu = exp(a1), exp(a2)
    X1: Matrix = (-lam, 0.0, 0.0, -1.0 / lam)
    # boundary spacing from the right-angled hexagon relation
    cosh_sigma = (cosh(a1) * cosh(a2) + cosh(a3)) / (sinh(a1) * sinh(a2))
    sigma = acosh(cosh_sigma)
    ch, sh = cosh(sigma / 2.0), sinh(sigma / 2.0)
    P: Matrix = (ch, sh, sh, ch)
    X2 = _mul(_mul(P, (-1.0 / mu, 0.0, 0.0, -mu)), _inv(P))
    X3 = _inv(_mul(X1, X2))

    # gluing conjugators: each sends one pants-0 boundary to its inverse,
    # with the FN twist inserted as a translation along that boundary's axis
    G = _mul(_axis_translation(t1), _J)
    H = _mul(_mul(P, _mul(_axis_translation(t2), _J)), _inv(P))
    S = _mul(H, _inv(G))
    evals, evecs = np.linalg.eig(_np(X3))
    if abs(evals.imag).max() > 1e-12:
        raise HolonomyError("holonomy construction failed: X3 is not hyperbolic")
    order = np.argsort(evals.real)  # most negative first: -e^{l3/2}
    Q = evecs[:, order].real
    Q /= np.sqrt(abs(np.linalg.det(Q)))
    if np.linalg.det(Q) < 0:
        Q[:, 1] = -Q[:, 1]
    Qm = _as_matrix(Q)
    K = _mul(_mul(Qm, _mul(_axis_translation(t3), _J)), _inv(Qm))
    U = _mul(K, _inv(G))

    matrices = {
        "a": _inv(X1),
        "b": U,
        "c": _inv(X2),
        "d": _mul(_mul(_mul(X2, U), _inv(X1)), _inv(S)),
    }
    rep = HolonomyRep(
        model_name=GENUS2_ID,
        name=f"genus2(l={fn.lengths},t={fn.twists})",
        matrices=matrices,
        tolerance=tolerance,
        pants_words=("a", "c", "ca"),
    )
    _check_unimodular(matrices, 1e-7)
    rel = rep.matrix_of("abABcdCD")
    residual = min(
        max(abs(rel[i] - _ID[i]) for i in range(4)),
        max(abs(rel[i] + _ID[i]) for i in range(4)),
    )
    if residual > max(tolerance, 1e-9):
        raise HolonomyError(f"holonomy construction failed: relator residual {residual}")
    boundary_residuals = []
    for word, l in zip(rep.pants_words, fn.lengths):
        got = abs(_tr(rep.matrix_of(word)))
        want = 2.0 * cosh(l / 2.0)
        boundary_residuals.append(abs(got - want) / want)
    if max(boundary_residuals) > 1e-7:
        raise HolonomyError(
            f"holonomy construction failed: boundary length residuals {boundary_residuals}"
        )
    rep.validation.update(
        {
            "relator_residual": residual,
            "boundary_trace_residuals": boundary_residuals,
        }
    )
    return rep


def word_length(rep: HolonomyRep, w) -> float:
    """Geodesic length 2*arccosh(|tr|/2) of a nontrivial class."""
    letters = w.letters if hasattr(w, "letters") else str(w)
    if not letters:
        raise WordError("trivial class has no geodesic length")
    cached = rep._cache.get(letters)
    if cached is not None:
        return cached
    # unrolled 2x2 product over the letters; this is the orbit search's
    # innermost loop
    table = rep._letter_table
    if table is None:
        table = {}
        for g, mat in rep.matrices.items():
            table[g] = mat
            table[g.upper()] = _inv(mat)
        rep._letter_table = table
    a, b, c, d = 1.0, 0.0, 0.0, 1.0
    for ch in letters:
        e, f, g, h = table[ch]
        a, b, c, d = a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h
    abs_trace = abs(a + d)
    if abs_trace <= 2.0 + rep.tolerance:
        raise WordError(
            f"non-hyperbolic class: |trace| = {abs_trace} for {letters!r} "
            "(peripheral, elliptic, or trivial)"
        )
    value = 2.0 * acosh(max(abs_trace / 2.0, 1.0))
    rep._cache[letters] = value
    return value


def multicurve_length(rep: HolonomyRep, decomposition) -> float:
    """Weighted length sum over components.

    Accepts a ComponentDecomposition (torus components become Christoffel
    words) or an iterable of (word, weight) pairs.
    """
    items = getattr(decomposition, "components", decomposition)
    total = 0.0
    count = 0
    for entry in items:
        piece, weight = entry
        count += 1
        if isinstance(piece, TorusCoord):
            total += weight * torus_simple_length(rep, piece)
        else:
            total += weight * word_length(rep, piece)
    if count == 0:
        raise WordError("empty decomposition has no length")
    return total


def torus_simple_length(rep: HolonomyRep, coord: TorusCoord) -> float:
    """Length of the integral class (p, q): weight times primitive length."""
    from .words import christoffel_word

    if rep.model_name != TORUS_ID:
        raise HolonomyError("torus_simple_length needs a torus structure")
    d = coord.weight()
    return d * word_length(rep, christoffel_word(coord.primitive()))
