"""Surface-group words, conjugacy canonical forms, and the twist action.

Words are strings over the model alphabet with uppercase meaning inverse.
A ``CyclicWord`` is an unoriented conjugacy class: the stored string is the
canonical representative, minimal over all cyclic rotations of the word and
of its inverse (letters ordered a < A < b < B < ...).

On the genus-2 model canonical forms additionally apply Dehn's algorithm for
the relator [a,b][c,d]: any subword longer than half of a cyclic rotation of
the relator or its inverse is replaced by the shorter complement, and
same-length variants reachable by swapping exactly-half subwords are
saturated before taking the minimum.  The relator's pieces all have length
1 (certified at model build), so this yields a complete conjugacy invariant.

The mapping class group acts through explicit twist automorphisms:

* torus: T_a: (a,b) -> (a, ba) and T_b: (a,b) -> (ab^-1, b), matching the
  unimodular action on (p, q);
* genus 2: five Humphries twists along the chain a-curve, b-curve, the
  middle curve (class of ``ca``), d-curve, c-curve.  The middle twist
  b -> cab, d -> acd was pinned down mechanically: it is the unique short
  insertion of a conjugate of ``ca`` that preserves the relator class, acts
  on homology as a symplectic transvection, and satisfies the braid and
  commutation relations of the chain with the four obvious twists.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable

from .coords import TorusCoord
from .errors import BudgetExceededError, TracingError, WordError
from .surfaces import SurfaceModel, invert_word

_LETTER_ORDER = {ch: i for i, ch in enumerate("aAbBcCdD")}
# order-preserving translation so ordinary string comparison ranks words
# by the letter order a < A < b < B < ...
_TO_ORDERED = str.maketrans("aAbBcCdD", "abcdefgh")
_FROM_ORDERED = str.maketrans("abcdefgh", "aAbBcCdD")

# cap on the saturation closure; real inputs stay tiny
_MAX_VARIANTS = 20000


def free_reduce(word: str) -> str:
    """Remove adjacent inverse pairs until none remain."""
    out: list[str] = []
    for ch in word:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def cyclic_free_reduce(word: str) -> str:
    """Freely reduce, then cancel across the wraparound."""
    word = free_reduce(word)
    while len(word) >= 2 and word[0] == word[-1].swapcase():
        word = free_reduce(word[1:-1])
    return word


def _rotations(word: str) -> list[str]:
    doubled = word + word
    n = len(word)
    return [doubled[i : i + n] for i in range(n)]


def _word_key(word: str):
    return tuple(_LETTER_ORDER[ch] for ch in word)


def _least_rotation(s: str) -> str:
    """Lexicographically least rotation (Booth's algorithm, linear time)."""
    n = len(s)
    if n <= 1:
        return s
    doubled = s + s
    f = [-1] * len(doubled)
    k = 0
    for j in range(1, len(doubled)):
        sj = doubled[j]
        i = f[j - k - 1]
        while i != -1 and sj != doubled[k + i + 1]:
            if sj < doubled[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != doubled[k + i + 1]:
            if sj < doubled[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return doubled[k : k + n]


def _rotation_min(word: str) -> str:
    """Minimum over rotations of the word and its inverse, in letter order."""
    a = _least_rotation(word.translate(_TO_ORDERED))
    b = _least_rotation(invert_word(word).translate(_TO_ORDERED))
    return min(a, b).translate(_FROM_ORDERED)


class _DehnTables:
    """Replacement tables for Dehn's algorithm on a fixed relator."""

    def __init__(self, relator: str):
        n = len(relator)
        self.half = n // 2
        self.long: dict[str, str] = {}  # prefix longer than half -> shorter complement
        self.swap: dict[str, str] = {}  # exactly-half prefix -> same-length complement
        for rot in _rotations(relator) + _rotations(invert_word(relator)):
            for lam in range(self.half + 1, n + 1):
                self.long[rot[:lam]] = invert_word(rot[lam:])
            self.swap[rot[: self.half]] = invert_word(rot[self.half :])


@lru_cache(maxsize=4)
def _dehn_tables(relator: str) -> _DehnTables:
    return _DehnTables(relator)


def _dehn_reduce(word: str, tables: _DehnTables) -> str:
    """Cyclic Dehn reduction: shrink every more-than-half relator piece."""
    word = cyclic_free_reduce(word)
    max_lam = 2 * tables.half
    while word:
        n = len(word)
        doubled = word + word
        hit = None
        for lam in range(min(max_lam, n), tables.half, -1):
            for i in range(n):
                piece = doubled[i : i + lam]
                if piece in tables.long:
                    hit = (i, lam, tables.long[piece])
                    break
            if hit:
                break
        if hit is None:
            return word
        i, lam, repl = hit
        word = cyclic_free_reduce(repl + doubled[i + lam : i + n])
    return word


def _canonical_string(model: SurfaceModel, word: str) -> str:
    word = cyclic_free_reduce(word)
    if not model.relator:
        return _rotation_min(word) if word else ""
    tables = _dehn_tables(model.relator)
    word = _dehn_reduce(word, tables)
    if not word:
        return ""
    # saturate equal-length half-relator swaps, then take the global minimum
    start = _rotation_min(word)
    seen = {start}
    frontier = [start]
    half = tables.half
    while frontier:
        cur = frontier.pop()
        n = len(cur)
        if n < half:
            continue
        for rep in (cur, invert_word(cur)):
            doubled = rep + rep
            for i in range(n):
                piece = doubled[i : i + half]
                swap = tables.swap.get(piece)
                if swap is None:
                    continue
                cand = _dehn_reduce(swap + doubled[i + half : i + n], tables)
                if len(cand) < n:
                    # a swap exposed a longer piece; restart from the shorter word
                    return _canonical_string(model, cand)
                cand = _rotation_min(cand)
                if cand not in seen:
                    if len(seen) >= _MAX_VARIANTS:
                        raise TracingError(
                            "internal tracing inconsistency: half-swap closure exploded"
                        )
                    seen.add(cand)
                    frontier.append(cand)
    return min(seen, key=_word_key)


@dataclass(frozen=True, order=True)
class CyclicWord:
    """An unoriented conjugacy class, stored by its canonical string."""

    model_name: str
    letters: str

    def __str__(self) -> str:
        return self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def inverse_string(self) -> str:
        return invert_word(self.letters)


@lru_cache(maxsize=4)
def _alphabet_set(model_name: str) -> frozenset:
    return frozenset(_model_for(model_name).alphabet)


def canonical_cyclic_form(model: SurfaceModel, word, *, validate: bool = True) -> CyclicWord:
    """Canonical form of a word (or CyclicWord) up to conjugacy and inversion.

    Raises ``WordError`` for letters outside the model alphabet and for
    words reducing to the trivial class.
    """
    if isinstance(word, CyclicWord):
        word = word.letters
    if validate and not _alphabet_set(model.name).issuperset(word):
        raise WordError(f"letters outside alphabet {model.alphabet!r}: {word!r}")
    letters = _canonical_string(model, word)
    if not letters:
        raise WordError(f"trivial class: {word!r} reduces to the identity")
    return CyclicWord(model.name, letters)


@dataclass(frozen=True)
class Automorphism:
    """A surface-group automorphism given by generator images."""

    name: str
    model_name: str
    images: dict = field(compare=False)  # lowercase generator -> image word
    inverse_images: dict = field(compare=False)
    _trans: dict = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        table = {}
        for g, img in self.images.items():
            table[ord(g)] = img
            table[ord(g.upper())] = invert_word(img)
        object.__setattr__(self, "_trans", table)

    def image_of(self, letter: str) -> str:
        if letter.islower():
            return self.images.get(letter, letter)
        return invert_word(self.images.get(letter.lower(), letter.lower()))

    def apply_string(self, word: str) -> str:
        return word.translate(self._trans)

    def inverse(self) -> "Automorphism":
        return Automorphism(
            name=self.name[:-3] if self.name.endswith("^-1") else self.name + "^-1",
            model_name=self.model_name,
            images=self.inverse_images,
            inverse_images=self.images,
        )


def apply_automorphism(auto: Automorphism, w: CyclicWord) -> CyclicWord:
    """Substitute generator images and re-canonicalize."""
    if auto.model_name != w.model_name:
        raise WordError(f"alphabet mismatch: {auto.model_name} vs {w.model_name}")
    model = _model_for(w.model_name)
    return canonical_cyclic_form(model, auto.apply_string(w.letters), validate=False)


@lru_cache(maxsize=4)
def _model_for(name: str) -> SurfaceModel:
    from .surfaces import model_by_name

    return model_by_name(name)


_TORUS_TWISTS = [
    ("Ta", {"b": "ba"}, {"b": "bA"}),
    ("Tb", {"a": "aB"}, {"a": "ab"}),
]

# Humphries chain for genus 2: a-curve, b-curve, middle (class ca), d-curve, c-curve
_GENUS2_TWISTS = [
    ("Ta", {"b": "ba"}, {"b": "bA"}),
    ("Tb", {"a": "aB"}, {"a": "ab"}),
    ("Tmid", {"b": "cab", "d": "acd"}, {"b": "ACb", "d": "CAd"}),
    ("Td", {"c": "cD"}, {"c": "cd"}),
    ("Tc", {"d": "dc"}, {"d": "dC"}),
]


def _peripheral_word(model: SurfaceModel) -> str:
    # torus: the puncture class [a,b]; genus 2: the relator itself
    return "abAB" if model.is_torus() else model.relator


def _validate_generator(model: SurfaceModel, auto: Automorphism) -> None:
    for g, img in auto.images.items():
        if g not in model.generators or not img:
            raise WordError(f"bad twist image {g!r} -> {img!r}")
    inv_auto = auto.inverse()
    for g in model.generators:
        roundtrip = free_reduce(inv_auto.apply_string(auto.apply_string(g)))
        if roundtrip != g:
            raise WordError(f"{auto.name}: recorded inverse fails on {g!r}: {roundtrip!r}")
    peripheral = _peripheral_word(model)
    image = cyclic_free_reduce(auto.apply_string(peripheral))
    targets = set(_rotations(peripheral)) | set(_rotations(invert_word(peripheral)))
    if image not in targets:
        raise WordError(f"{auto.name}: peripheral/relator class not preserved: {image!r}")


@lru_cache(maxsize=4)
def _generators_for(model_name: str) -> tuple[Automorphism, ...]:
    model = _model_for(model_name)
    table = _TORUS_TWISTS if model.is_torus() else _GENUS2_TWISTS
    gens = []
    for name, fwd, bwd in table:
        auto = Automorphism(name=name, model_name=model.name, images=fwd, inverse_images=bwd)
        _validate_generator(model, auto)
        gens.append(auto)
    return tuple(gens) + tuple(g.inverse() for g in gens)


def mcg_generators(model: SurfaceModel) -> list[Automorphism]:
    """Twist generators of the mapping class group, with their inverses.

    Orientation-preserving classes only; every returned automorphism has
    been checked to invert exactly and to preserve the relator class (the
    peripheral class on the torus).
    """
    return list(_generators_for(model.name))


def abelianized_action(model: SurfaceModel, auto: Automorphism):
    """Exponent-sum matrix of the generator images (column per generator)."""
    import numpy as np

    gens = model.generators
    index = {g: i for i, g in enumerate(gens)}
    mat = np.zeros((len(gens), len(gens)), dtype=int)
    for j, g in enumerate(gens):
        for ch in auto.images.get(g, g):
            mat[index[ch.lower()], j] += 1 if ch.islower() else -1
    return mat


def christoffel_word(coord: TorusCoord) -> CyclicWord:
    """The standard simple word of a primitive torus class.

    The lower Christoffel word of slope |q|/p carries |p| letters ``a`` and
    |q| letters ``b`` (``B`` for the negative-slope sector); its holonomy
    trace computes the geodesic length of the (p, q) curve.
    """
    from .coords import canonicalize_torus

    if gcd(abs(coord.p), abs(coord.q)) != 1:
        raise WordError(f"not primitive: gcd of {(coord.p, coord.q)} exceeds 1")
    coord = canonicalize_torus(coord.p, coord.q)
    p, q = coord.p, coord.q
    b_letter = "b" if q >= 0 else "B"
    k = abs(q)
    n = p + k
    letters = []
    for i in range(1, n + 1):
        letters.append("a" if (i * k) // n == ((i - 1) * k) // n else b_letter)
    model = _model_for("torus-1-1")
    return canonical_cyclic_form(model, "".join(letters))


def orbit_ball(
    model: SurfaceModel,
    seed: CyclicWord,
    lengthfn: Callable[[CyclicWord], float],
    L: float,
    margin: float = 0.3,
    *,
    max_nodes: int = 1_000_000,
) -> dict[CyclicWord, float]:
    """Mapping-class-group orbit of ``seed`` inside a length ball.

    Breadth-first closure under the twist generators, expanding every word
    of length at most ``(1 + margin) * L`` and retaining those of length at
    most ``L``.  Completeness inside the ball is heuristic (the margin buys
    slack); on the torus it is cross-validated against lattice enumeration.
    Raises ``BudgetExceededError`` when more than ``max_nodes`` conjugacy
    classes get expanded; never truncates silently.
    """
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    seed = canonical_cyclic_form(model, seed)
    gens = mcg_generators(model)
    explore_cap = (1.0 + margin) * L
    lengths: dict[str, float] = {seed.letters: lengthfn(seed)}
    visited = {seed.letters}
    queue = deque()
    if lengths[seed.letters] <= explore_cap:
        queue.append(seed)
    expanded = 0
    while queue:
        current = queue.popleft()
        expanded += 1
        if expanded > max_nodes:
            raise BudgetExceededError(
                f"budget exceeded: orbit search expanded more than {max_nodes} classes",
                partial={"expanded": expanded, "retained_so_far": len(lengths)},
            )
        for auto in gens:
            image = apply_automorphism(auto, current)
            if image.letters in visited:
                continue
            visited.add(image.letters)
            ell = lengthfn(image)
            lengths[image.letters] = ell
            if ell <= explore_cap:
                queue.append(image)
    retained = {
        CyclicWord(model.name, w): ell for w, ell in lengths.items() if ell <= L
    }
    return dict(sorted(retained.items(), key=lambda kv: (kv[1], kv[0].letters)))
