"""Counting estimators: per-type histograms, scaling limits, and diagnostics.

The quantities realized here are finite-L estimators of the limiting
constants in Mirzakhani-type counting laws:

* raw counts #{alpha : norm(alpha) <= L} grow like L^n with n the model's
  growth exponent (checked by log-log slope fits);
* the normalized total count / L^n estimates the unit-ball constant B of
  the norm; per-type normalized counts estimate the per-orbit constants,
  and their sum over observed types is the partial-sum estimator of the
  normalizing constant kappa (the tail report quantifies truncation);
* ratios of counts under two norms or two hyperbolic structures estimate
  the corresponding ratio of unit-ball constants, independent of the type
  counted;
* non-simple orbit counts come from the word pipeline's orbit search.

Limits are always reported as convergence series (value per schedule
point) plus a last value and a Cauchy-style stability indicator; no
extrapolation is attempted.
"""

from __future__ import annotations

import csv
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import log

from .coords import NormSpec, enumerate_ball, norm_eval
from .errors import BudgetExceededError
from .surfaces import SurfaceModel
from .tracing import TypeKey, _type_key_reduced, reduced_type_tuple, type_key
from .words import CyclicWord, orbit_ball


@dataclass
class TypeHistogram:
    """Counts per topological type inside one norm ball."""

    model_name: str
    norm_label: str
    L: object
    counts: dict  # TypeKey -> int

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass
class ConvergenceSeries:
    """(L, value) pairs with strictly increasing L."""

    points: list = field(default_factory=list)

    def __post_init__(self):
        ls = [L for L, _ in self.points]
        if any(b <= a for a, b in zip(ls, ls[1:])):
            raise ValueError("schedule must be strictly increasing")

    def values(self):
        return [v for _, v in self.points]

    def schedule(self):
        return [L for L, _ in self.points]

    def last_value(self):
        return self.points[-1][1]

    def stability(self) -> float:
        """Max relative change over the last three entries (0 if too short)."""
        tail = self.values()[-3:]
        if len(tail) < 2:
            return 0.0
        lo = min(tail)
        hi = max(tail)
        return (hi - lo) / hi if hi > 0 else 0.0


def _check_schedule(schedule):
    schedule = list(schedule)
    if not schedule or any(L <= 0 for L in schedule):
        raise ValueError("schedule must be nonempty and positive")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly increasing")
    return schedule


def histogram_series(
    model: SurfaceModel,
    norm: NormSpec,
    schedule,
    *,
    typed: bool = True,
    max_points: int | None = None,
) -> list[TypeHistogram]:
    """One histogram per schedule point, from a single enumeration pass.

    The ball at the largest L is enumerated once; every coordinate lands in
    the first schedule entry that contains it and counts accumulate by
    prefix sums.  With ``typed=False`` all mass sits on a single dummy key
    (cheaper when only totals are wanted).
    """
    schedule = _check_schedule(schedule)
    Lmax = schedule[-1]
    nsched = len(schedule)
    is_torus = model.is_torus()
    # buckets are keyed by cheap per-coordinate data (gcd weight, or the
    # twist-reduced tuple); conversion to TypeKey happens once per bucket
    buckets: dict = {}
    for coord in enumerate_ball(model, norm, Lmax, max_points=max_points):
        value = norm_eval(norm, coord)
        idx = bisect_left(schedule, value)
        if idx >= nsched:
            continue
        if not typed:
            key = None
        elif is_torus:
            key = coord.weight()
        else:
            key = reduced_type_tuple(coord)
        per_type = buckets.get(key)
        if per_type is None:
            per_type = buckets[key] = [0] * nsched
        per_type[idx] += 1
    keymap = {}
    for raw in buckets:
        if raw is None:
            keymap[raw] = TypeKey(model_name=model.name, text="all")
        elif is_torus:
            keymap[raw] = TypeKey(model_name=model.name, text=f"d={raw}")
        else:
            keymap[raw] = _type_key_reduced(model.name, raw[0], raw[1])
    out = []
    for i, L in enumerate(schedule):
        counts: dict = {}
        for raw, per_type in buckets.items():
            c = sum(per_type[: i + 1])
            if c:
                key = keymap[raw]
                counts[key] = counts.get(key, 0) + c
        out.append(
            TypeHistogram(model_name=model.name, norm_label=norm.describe(), L=L, counts=counts)
        )
    return out


def count_by_type(model: SurfaceModel, norm: NormSpec, L, **kw) -> TypeHistogram:
    """Enumerate the ball of radius L and bucket by topological type."""
    return histogram_series(model, norm, [L], **kw)[0]


def normalized_count(hist: TypeHistogram, exponent: int) -> dict:
    """Counts divided by L^exponent."""
    scale = float(hist.L) ** exponent
    return {key: c / scale for key, c in hist.counts.items()}


def estimate_B(
    model: SurfaceModel, norm: NormSpec, schedule, *, max_points: int | None = None
) -> ConvergenceSeries:
    """Series of total count / L^n: the unit-ball constant estimator."""
    hists = histogram_series(model, norm, schedule, typed=False, max_points=max_points)
    n = model.exponent
    return ConvergenceSeries(
        points=[(h.L, h.total() / float(h.L) ** n) for h in hists]
    )


def type_count_series(
    model: SurfaceModel, norm: NormSpec, schedule, key: TypeKey, **kw
) -> ConvergenceSeries:
    """Raw counts of a single type along the schedule."""
    hists = histogram_series(model, norm, schedule, **kw)
    return ConvergenceSeries(points=[(h.L, h.counts.get(key, 0)) for h in hists])


def total_count_series(model: SurfaceModel, norm: NormSpec, schedule, **kw) -> ConvergenceSeries:
    hists = histogram_series(model, norm, schedule, typed=False, **kw)
    return ConvergenceSeries(points=[(h.L, h.total()) for h in hists])


def fit_exponent(series: ConvergenceSeries) -> tuple[float, float]:
    """Least-squares slope of log(count) against log(L), with its stderr."""
    pts = [(L, v) for L, v in series.points]
    if len(pts) < 4:
        raise ValueError("degenerate series: need at least 4 points for a slope fit")
    if any(v <= 0 for _, v in pts):
        raise ValueError("degenerate series: zero counts in the fit window")
    xs = [log(float(L)) for L, _ in pts]
    ys = [log(float(v)) for _, v in pts]
    n = len(xs)
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    sxx = sum((x - xbar) ** 2 for x in xs)
    if sxx == 0:
        raise ValueError("degenerate series: schedule spans a single L")
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / sxx
    intercept = ybar - slope * xbar
    residual = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    stderr = (residual / (n - 2) / sxx) ** 0.5 if n > 2 else 0.0
    return slope, stderr


def ratio_series(series1: ConvergenceSeries, series2: ConvergenceSeries) -> ConvergenceSeries:
    """Pointwise ratio of two aligned series."""
    if series1.schedule() != series2.schedule():
        raise ValueError("schedule mismatch between ratio operands")
    if any(v == 0 for v in series2.values()):
        raise ValueError("schedule mismatch: zero denominator entries")
    return ConvergenceSeries(
        points=[(L, v1 / v2) for (L, v1), (_, v2) in zip(series1.points, series2.points)]
    )


def frequency_report(hist: TypeHistogram) -> dict:
    """Counts divided by the total, as exact fractions summing to 1."""
    total = hist.total()
    if total == 0:
        raise ValueError("empty histogram has no frequencies")
    return {key: Fraction(c, total) for key, c in hist.counts.items()}


def tail_report(hist: TypeHistogram, eps) -> tuple[tuple, Fraction]:
    """Smallest greedy set of types covering at least 1 - eps of the count.

    Finitely many types carry all but eps of the mass; the greedy set (by
    descending count, ties by key text) and its exact covered fraction
    quantify the truncation of partial sums over types.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must be strictly between 0 and 1")
    total = hist.total()
    if total == 0:
        raise ValueError("empty histogram has no tail report")
    chosen = []
    covered = Fraction(0)
    for key, c in sorted(hist.counts.items(), key=lambda kv: (-kv[1], kv[0].text)):
        if covered >= 1 - eps:
            break
        chosen.append(key)
        covered += Fraction(c, total)
    return tuple(chosen), covered


def count_orbit_nonsimple(
    model: SurfaceModel,
    seed: CyclicWord,
    rep,
    schedule,
    margin: float = 0.3,
    *,
    max_nodes: int = 1_000_000,
) -> ConvergenceSeries:
    """Mapping-class-group orbit counts of a word class in length balls.

    Runs one orbit search at the largest L (exploration margin included)
    and filters for the smaller schedule entries.  Budget overruns surface
    as ``BudgetExceededError`` carrying the partial schedule position.
    """
    from .hyperbolic import word_length

    schedule = _check_schedule(schedule)
    try:
        ball = orbit_ball(
            model, seed, lambda w: word_length(rep, w), schedule[-1], margin, max_nodes=max_nodes
        )
    except BudgetExceededError as exc:
        raise BudgetExceededError(
            f"budget exceeded during orbit count at L={schedule[-1]}: {exc}",
            partial={"schedule_reached": None, "detail": exc.partial},
        ) from exc
    lengths = sorted(ball.values())
    return ConvergenceSeries(points=[(L, bisect_right(lengths, L)) for L in schedule])


def kappa_hat(hist: TypeHistogram, exponent: int) -> float:
    """Partial-sum estimator of kappa: sum of normalized per-type counts.

    At finite L this equals the normalized total count exactly (the
    partition identity); the tail report bounds what the truncation to
    observed types misses.
    """
    return sum(normalized_count(hist, exponent).values())


def write_histogram_csv(path, histograms: list[TypeHistogram]) -> int:
    """One row per (L, type, count); deterministic order; returns row count."""
    rows = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "norm", "L", "type", "count"])
        for h in histograms:
            for key, c in sorted(h.counts.items(), key=lambda kv: kv[0].text):
                writer.writerow([h.model_name, h.norm_label, h.L, key.text, c])
                rows += 1
    return rows
