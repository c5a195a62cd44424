"""Empirical curve-counting asymptotics on concrete hyperbolic surfaces.

Enumerates integral simple multicurves in lattice coordinates on the
punctured torus and the closed genus-2 surface, classifies them by
mapping-class-group orbit, counts non-simple curve orbits through
surface-group automorphisms and holonomy lengths, and reports the limiting
constants of Mirzakhani-type counting laws as finite-L estimators with
convergence diagnostics.
"""

__version__ = "0.1.0"

from .coords import (
    DTCoord,
    NormSpec,
    TorusCoord,
    canonicalize_torus,
    enumerate_ball,
    norm_eval,
    validate_dt,
)
from .counting import (
    ConvergenceSeries,
    TypeHistogram,
    count_by_type,
    count_orbit_nonsimple,
    estimate_B,
    fit_exponent,
    frequency_report,
    histogram_series,
    kappa_hat,
    normalized_count,
    ratio_series,
    tail_report,
    total_count_series,
    type_count_series,
)
from .errors import (
    BudgetExceededError,
    ConfigError,
    CoordinateError,
    CurveCountError,
    HolonomyError,
    InvalidSpecError,
    NormError,
    TracingError,
    UnsupportedModelError,
    WordError,
)
from .hyperbolic import (
    FNCoords,
    HolonomyRep,
    genus2_structure,
    multicurve_length,
    torus_simple_length,
    torus_structure,
    word_length,
)
from .intersection import dt_pants_intersection, torus_intersection
from .surfaces import SurfaceModel, SurfaceSpec, build_model, growth_exponent, model_by_name
from .tracing import (
    ComponentDecomposition,
    TypeKey,
    decompose_torus,
    trace_components_dt,
    type_key,
)
from .words import (
    Automorphism,
    CyclicWord,
    abelianized_action,
    apply_automorphism,
    canonical_cyclic_form,
    christoffel_word,
    mcg_generators,
    orbit_ball,
)
