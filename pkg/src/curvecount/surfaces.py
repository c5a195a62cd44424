"""Supported surface models and their combinatorial data.

Two surfaces are supported:

* the once-punctured torus, fundamental group free on ``a, b``;
* the closed genus-2 surface, fundamental group ``<a,b,c,d | [a,b][c,d]>``,
  carrying the theta-graph pants decomposition: two pairs of pants glued
  along three curves ``c1, c2, c3``, each curve shared by both pants.

Words are strings over the generator alphabet, uppercase meaning inverse
(``A == a^-1``).  The growth exponent ``6g - 6 + 2k`` is the power of L
governing curve counts in every experiment downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidSpecError, UnsupportedModelError

TORUS_ID = "torus-1-1"
GENUS2_ID = "genus-2"


def invert_word(word: str) -> str:
    """Inverse of a word in the uppercase-is-inverse convention."""
    return word[::-1].swapcase()


@dataclass(frozen=True)
class SurfaceSpec:
    """Genus and puncture count of a surface."""

    genus: int
    punctures: int

    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.punctures


@dataclass(frozen=True)
class SurfaceModel:
    """A fixed combinatorial surface with its group presentation.

    Immutable after construction and safe to share across workers.  For the
    genus-2 model ``pants_curves`` names the three theta-graph curves; the
    punctured torus has none (its coordinates are the lattice (p, q)).
    """

    spec: SurfaceSpec
    name: str
    generators: tuple[str, ...]
    relator: str  # empty for a free group
    pants_curves: tuple[str, ...] = field(default=())

    @property
    def exponent(self) -> int:
        return 6 * self.spec.genus - 6 + 2 * self.spec.punctures

    @property
    def alphabet(self) -> str:
        """All legal letters, generators then their inverses."""
        gens = "".join(self.generators)
        return gens + gens.upper()

    def is_torus(self) -> bool:
        return self.name == TORUS_ID

    def is_genus2(self) -> bool:
        return self.name == GENUS2_ID


def growth_exponent(model: SurfaceModel) -> int:
    """The curve-count growth exponent 6g - 6 + 2k of the model."""
    return model.exponent


def _is_cyclically_reduced(word: str) -> bool:
    if any(word[i] == word[i + 1].swapcase() for i in range(len(word) - 1)):
        return False
    return not (word and word[0] == word[-1].swapcase())


def _max_piece_length(relator: str) -> int:
    """Longest common subword between distinct cyclic occurrences of R, R^-1.

    Dehn's algorithm needs small cancellation; for the genus-2 relator all
    pieces have length 1, which this scan certifies by checking that no
    length-2 subword repeats among rotations of the relator and its inverse.
    """
    n = len(relator)
    occurrences: dict[str, int] = {}
    for w in (relator, invert_word(relator)):
        doubled = w + w
        for i in range(n):
            occurrences[doubled[i : i + 2]] = occurrences.get(doubled[i : i + 2], 0) + 1
    return 1 if all(v == 1 for v in occurrences.values()) else 2


def build_model(spec: SurfaceSpec) -> SurfaceModel:
    """Construct the model for a supported spec.

    Raises ``InvalidSpecError`` for non-hyperbolic data and
    ``UnsupportedModelError`` for hyperbolic specs other than the punctured
    torus and the closed genus-2 surface.
    """
    if spec.genus < 0 or spec.punctures < 0:
        raise InvalidSpecError(f"invalid spec: negative entries in {spec}")
    if spec.euler_characteristic() >= 0:
        raise InvalidSpecError(
            f"invalid spec: Euler characteristic {spec.euler_characteristic()} is nonnegative"
        )
    if (spec.genus, spec.punctures) == (1, 1):
        return SurfaceModel(
            spec=spec,
            name=TORUS_ID,
            generators=("a", "b"),
            relator="",
        )
    if (spec.genus, spec.punctures) == (2, 0):
        relator = "abABcdCD"  # [a,b][c,d]
        if not _is_cyclically_reduced(relator):
            raise AssertionError("genus-2 relator must be cyclically reduced")
        if _max_piece_length(relator) > 1:
            raise AssertionError(
                "small-cancellation scan failed: genus-2 relator has pieces longer than 1"
            )
        return SurfaceModel(
            spec=spec,
            name=GENUS2_ID,
            generators=("a", "b", "c", "d"),
            relator=relator,
            pants_curves=("c1", "c2", "c3"),
        )
    raise UnsupportedModelError(
        f"unsupported model: genus {spec.genus} with {spec.punctures} punctures "
        f"(only (1,1) and (2,0) are implemented)"
    )


def model_by_name(name: str) -> SurfaceModel:
    """Model lookup by the string identifiers used in experiment configs."""
    if name == TORUS_ID:
        return build_model(SurfaceSpec(1, 1))
    if name == GENUS2_ID:
        return build_model(SurfaceSpec(2, 0))
    raise UnsupportedModelError(f"unsupported model: unknown identifier {name!r}")
