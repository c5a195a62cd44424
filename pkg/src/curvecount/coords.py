"""Integral coordinates for simple multicurves, norms, and ball enumeration.

On the punctured torus an integral simple multicurve is a nonzero pair
``(p, q)`` up to simultaneous sign change; the weight of the underlying
primitive curve is ``gcd(|p|, |q|)``.  On the genus-2 model coordinates are
Dehn-Thurston sextuples ``(m1, m2, m3, t1, t2, t3)`` relative to the
theta-graph pants decomposition: ``m_i`` is the intersection number with
pants curve ``c_i`` and ``t_i`` the twist.  Conventions:

* ``m1 + m2 + m3`` is even (each pair of pants needs an even number of arc
  endpoints);
* if ``m_i = 0`` then ``t_i >= 0`` and is the weight of parallel copies of
  ``c_i``;
* the zero vector (the empty multicurve) is excluded.

Norm balls ``{alpha : norm(alpha) <= L}`` are enumerated exhaustively, in a
deterministic lexicographic order, by scanning the bounding box the norm
induces and filtering.  Exact arithmetic (ints and Fractions) is used for
all piecewise-linear norms so membership is never a rounding question.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import Iterable, Iterator, Union

from .errors import BudgetExceededError, CoordinateError, NormError
from .surfaces import SurfaceModel

Scalar = Union[int, float, Fraction]


@dataclass(frozen=True, order=True)
class TorusCoord:
    """A nonzero lattice class (p, q), canonically p > 0 or (p = 0, q > 0)."""

    p: int
    q: int

    def weight(self) -> int:
        """gcd of the entries: the multiplicity of the primitive class."""
        return gcd(abs(self.p), abs(self.q))

    def primitive(self) -> "TorusCoord":
        d = self.weight()
        return TorusCoord(self.p // d, self.q // d)

    def scaled(self, d: int) -> "TorusCoord":
        return TorusCoord(self.p * d, self.q * d)

    def as_tuple(self) -> tuple[int, int]:
        return (self.p, self.q)


@dataclass(frozen=True, order=True)
class DTCoord:
    """Dehn-Thurston coordinates (m, t) on the theta decomposition."""

    m: tuple[int, int, int]
    t: tuple[int, int, int]

    def scaled(self, d: int) -> "DTCoord":
        return DTCoord(tuple(x * d for x in self.m), tuple(x * d for x in self.t))

    def as_tuple(self) -> tuple[int, ...]:
        return self.m + self.t


Coord = Union[TorusCoord, DTCoord]


def canonicalize_torus(p: int, q: int) -> TorusCoord:
    """Sign-normalized representative of the class {(p, q), (-p, -q)}."""
    if p == 0 and q == 0:
        raise CoordinateError("empty multicurve: (0, 0) is excluded")
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return TorusCoord(p, q)


def validate_dt(m: Iterable[int], t: Iterable[int]) -> DTCoord:
    """Check the Dehn-Thurston invariants and return the coordinate."""
    m = tuple(int(x) for x in m)
    t = tuple(int(x) for x in t)
    if len(m) != 3 or len(t) != 3:
        raise CoordinateError("Dehn-Thurston coordinates need three m and three t entries")
    if any(x < 0 for x in m):
        raise CoordinateError(f"negative intersection weight: m={m}")
    if sum(m) % 2 != 0:
        raise CoordinateError(f"parity violation: m1+m2+m3 = {sum(m)} is odd")
    for i in range(3):
        if m[i] == 0 and t[i] < 0:
            raise CoordinateError(
                f"negative twist on zero-weight curve: m{i+1}=0 but t{i+1}={t[i]}"
            )
    if all(x == 0 for x in m) and all(x == 0 for x in t):
        raise CoordinateError("empty multicurve: all coordinates zero")
    return DTCoord(m, t)


TORUS_DIAMOND = "torus-diamond"
TORUS_SQUARE = "torus-square"
DT_L1 = "dt-L1"
DT_WEIGHTED = "dt-weighted"
HYPERBOLIC_LENGTH = "hyperbolic-length"

_TORUS_KINDS = (TORUS_DIAMOND, TORUS_SQUARE, HYPERBOLIC_LENGTH)
_DT_KINDS = (DT_L1, DT_WEIGHTED)


@dataclass(frozen=True)
class NormSpec:
    """A 1-homogeneous positive functional on multicurve coordinates.

    ``dt-weighted`` needs strictly positive weights ``u`` (on m) and ``v``
    (on |t|); ``hyperbolic-length`` needs a bound holonomy representation
    (torus model only) and measures geodesic length.
    """

    kind: str
    u: tuple[Fraction, Fraction, Fraction] | None = None
    v: tuple[Fraction, Fraction, Fraction] | None = None
    rep: object = None  # HolonomyRep, kept untyped to avoid an import cycle

    def __post_init__(self):
        if self.kind not in _TORUS_KINDS + _DT_KINDS:
            raise NormError(f"unknown norm kind {self.kind!r}")
        if self.kind == DT_WEIGHTED:
            if self.u is None or self.v is None:
                raise NormError("dt-weighted norm needs weight triples u and v")
            object.__setattr__(self, "u", tuple(Fraction(x) for x in self.u))
            object.__setattr__(self, "v", tuple(Fraction(x) for x in self.v))
        if self.kind == HYPERBOLIC_LENGTH and self.rep is None:
            raise NormError("hyperbolic-length norm needs a bound HolonomyRep")

    def describe(self) -> str:
        if self.kind == DT_WEIGHTED:
            u = ",".join(str(x) for x in self.u)
            v = ",".join(str(x) for x in self.v)
            return f"dt-weighted[u=({u});v=({v})]"
        if self.kind == HYPERBOLIC_LENGTH:
            return f"hyperbolic-length[{getattr(self.rep, 'name', 'rep')}]"
        return self.kind


def norm_eval(norm: NormSpec, coord: Coord) -> Scalar:
    """Evaluate the norm; positive and 1-homogeneous on valid coordinates."""
    if isinstance(coord, TorusCoord):
        if norm.kind == TORUS_DIAMOND:
            return abs(coord.p) + abs(coord.q)
        if norm.kind == TORUS_SQUARE:
            return max(abs(coord.p), abs(coord.q))
        if norm.kind == HYPERBOLIC_LENGTH:
            from .hyperbolic import torus_simple_length

            return torus_simple_length(norm.rep, coord)
        raise NormError(f"norm/model mismatch: {norm.kind} does not apply to torus coordinates")
    if isinstance(coord, DTCoord):
        if norm.kind == DT_L1:
            return sum(coord.m) + sum(abs(x) for x in coord.t)
        if norm.kind == DT_WEIGHTED:
            return sum(u * x for u, x in zip(norm.u, coord.m)) + sum(
                v * abs(x) for v, x in zip(norm.v, coord.t)
            )
        raise NormError(
            f"norm/model mismatch: {norm.kind} does not apply to Dehn-Thurston coordinates"
        )
    raise NormError(f"unrecognized coordinate type {type(coord).__name__}")


def _torus_hyperbolic_box(norm: NormSpec, L: Scalar) -> int:
    """Search radius in |p|+|q| that surely contains the length-L ball.

    Geodesic length is homogeneous, so its ratio against |p|+|q| is a
    function of the slope only; scanning all primitive slopes with
    |p|+|q| <= 50 samples it densely.  A 0.8 safety factor guards the
    slopes between samples; every candidate is still exactly filtered.
    """
    from .hyperbolic import torus_simple_length

    c_min = min(
        torus_simple_length(norm.rep, TorusCoord(p, q)) / (p + abs(q))
        for p in range(0, 51)
        for q in range(-50 if p else 1, 51)
        if (p or q) and p + abs(q) <= 50 and gcd(p, abs(q)) == 1
    )
    return ceil(float(L) / (0.8 * c_min))


def enumerate_ball(
    model: SurfaceModel,
    norm: NormSpec,
    L: Scalar,
    *,
    slabs: int = 1,
    slab: int = 0,
    max_points: int | None = None,
) -> Iterator[Coord]:
    """Yield every valid coordinate with norm <= L exactly once.

    Output order is deterministic: lexicographic over canonical (p, q) for
    the torus, over (m1, m2, m3, t1, t2, t3) for genus 2.  Each call returns
    a fresh stream.  ``slabs``/``slab`` select a deterministic partition
    (by the first coordinate, mod ``slabs``) whose union over all slab
    indices equals the serial output; ``max_points`` is a hard budget.
    """
    if L <= 0:
        return iter(())
    if not 0 <= slab < slabs:
        raise ValueError(f"slab index {slab} outside range({slabs})")
    if model.is_torus():
        if norm.kind not in _TORUS_KINDS:
            raise NormError(f"norm/model mismatch: {norm.kind} on the torus model")
        return _enumerate_torus(norm, L, slabs, slab, max_points)
    if norm.kind not in _DT_KINDS:
        raise NormError(f"norm/model mismatch: {norm.kind} on the genus-2 model")
    return _enumerate_dt(norm, L, slabs, slab, max_points)


def _budget_guard(count: int, max_points: int | None) -> None:
    if max_points is not None and count > max_points:
        raise BudgetExceededError(
            f"budget exceeded: more than {max_points} enumerated points",
            partial=count - 1,
        )


def _enumerate_torus(norm, L, slabs, slab, max_points):
    if norm.kind == TORUS_DIAMOND:
        pmax = int(L)
        qbound = lambda p: int(L) - p
    elif norm.kind == TORUS_SQUARE:
        pmax = int(L)
        qbound = lambda p: int(L)
    else:
        box = _torus_hyperbolic_box(norm, L)
        pmax = box
        qbound = lambda p: box - p
    emitted = 0
    for p in range(0, pmax + 1):
        if p % slabs != slab:
            continue
        qlo = 1 if p == 0 else -qbound(p)
        for q in range(qlo, qbound(p) + 1):
            if p == 0 and q == 0:
                continue
            coord = TorusCoord(p, q)
            if norm_eval(norm, coord) <= L:
                emitted += 1
                _budget_guard(emitted, max_points)
                yield coord


def _enumerate_dt(norm, L, slabs, slab, max_points):
    if norm.kind == DT_WEIGHTED:
        if any(w <= 0 for w in norm.u + norm.v):
            raise NormError("unbounded ball: dt-weighted norm has a nonpositive weight")
        u, v = norm.u, norm.v
    else:
        u = v = (Fraction(1), Fraction(1), Fraction(1))
    L = Fraction(L) if not isinstance(L, float) else L

    def tail_range(budget: Scalar, weight: Fraction, zero_m: bool):
        # twist values with weight*|t| <= budget; t >= 0 where m vanishes
        hi = int(budget / weight)
        lo = 0 if zero_m else -hi
        return range(lo, hi + 1)

    emitted = 0
    for m1 in range(0, int(L / u[0]) + 1):
        if m1 % slabs != slab:
            continue
        b1 = L - u[0] * m1
        if b1 < 0:
            continue
        for m2 in range(0, int(b1 / u[1]) + 1):
            b2 = b1 - u[1] * m2
            for m3 in range(0, int(b2 / u[2]) + 1):
                if (m1 + m2 + m3) % 2 != 0:
                    continue
                b3 = b2 - u[2] * m3
                for t1 in tail_range(b3, v[0], m1 == 0):
                    b4 = b3 - v[0] * abs(t1)
                    for t2 in tail_range(b4, v[1], m2 == 0):
                        b5 = b4 - v[1] * abs(t2)
                        for t3 in tail_range(b5, v[2], m3 == 0):
                            if m1 == m2 == m3 == 0 and t1 == t2 == t3 == 0:
                                continue
                            emitted += 1
                            _budget_guard(emitted, max_points)
                            yield DTCoord((m1, m2, m3), (t1, t2, t3))


def ball_count(model: SurfaceModel, norm: NormSpec, L: Scalar, **kw) -> int:
    """Number of coordinates in the closed norm ball of radius L."""
    return sum(1 for _ in enumerate_ball(model, norm, L, **kw))


def write_ball_csv(path, model: SurfaceModel, norm: NormSpec, L: Scalar, **kw) -> int:
    """Dump a ball as CSV (exact integers); returns the row count."""
    n = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if model.is_torus():
            writer.writerow(["model", "norm", "L", "p", "q"])
        else:
            writer.writerow(["model", "norm", "L", "m1", "m2", "m3", "t1", "t2", "t3"])
        for coord in enumerate_ball(model, norm, L, **kw):
            writer.writerow([model.name, norm.describe(), L, *coord.as_tuple()])
            n += 1
    return n
