import math
import random

import pytest

from curvecount.coords import TorusCoord
from curvecount.errors import HolonomyError, WordError
from curvecount.hyperbolic import (
    FNCoords,
    genus2_structure,
    multicurve_length,
    torus_simple_length,
    torus_structure,
    word_length,
)
from curvecount.tracing import decompose_torus
from curvecount.words import canonical_cyclic_form

L_A_333 = 2 * math.acosh(1.5)  # 1.9248473...


def test_torus_structure_examples():
    rep = torus_structure(3, 3, 3)
    assert abs(rep.validation["trace_relation_residual"]) < 1e-12
    with pytest.raises(HolonomyError, match="trace relation violated"):
        torus_structure(3, 3, 4)  # 9+9+16 = 34 != 36
    with pytest.raises(HolonomyError, match="elliptic or parabolic"):
        torus_structure(2, 5, 5)


def test_word_lengths_on_modular_torus(modular_torus):
    assert word_length(modular_torus, "a") == pytest.approx(L_A_333, abs=1e-9)
    # conjugation invariance: a b a^-1 has the length of b
    assert word_length(modular_torus, "abA") == pytest.approx(
        word_length(modular_torus, "b"), abs=1e-12
    )
    with pytest.raises(WordError, match="non-hyperbolic class"):
        word_length(modular_torus, "abAB")  # the cusp class has trace -2


def test_symmetric_structure_lengths(modular_torus):
    # (1,0), (0,1), (1,1) all have length 2 arccosh(3/2) on (3,3,3)
    vals = [
        torus_simple_length(modular_torus, TorusCoord(1, 0)),
        torus_simple_length(modular_torus, TorusCoord(0, 1)),
        torus_simple_length(modular_torus, TorusCoord(1, 1)),
    ]
    assert max(vals) - min(vals) < 1e-9
    assert vals[0] == pytest.approx(L_A_333, abs=1e-9)


def test_multicurve_length(modular_torus):
    a = canonical_cyclic_form(_torus(), "a")
    b = canonical_cyclic_form(_torus(), "b")
    assert multicurve_length(modular_torus, [(a, 2)]) == pytest.approx(2 * L_A_333, abs=1e-9)
    assert multicurve_length(modular_torus, [(a, 1), (b, 1)]) == pytest.approx(
        2 * L_A_333, abs=1e-9
    )
    with pytest.raises(WordError, match="empty"):
        multicurve_length(modular_torus, [])
    dec = decompose_torus(TorusCoord(2, 0))
    assert multicurve_length(modular_torus, dec) == pytest.approx(2 * L_A_333, abs=1e-9)


def _torus():
    from curvecount.surfaces import model_by_name

    return model_by_name("torus-1-1")


def test_torus_simple_length_examples(modular_torus):
    assert torus_simple_length(modular_torus, TorusCoord(1, 0)) == pytest.approx(L_A_333)
    assert torus_simple_length(modular_torus, TorusCoord(2, 0)) == pytest.approx(2 * L_A_333)
    assert torus_simple_length(modular_torus, TorusCoord(1, 1)) == pytest.approx(L_A_333)


def test_length_scaling_and_invariance(modular_torus):
    rng = random.Random(2)
    torus = _torus()
    for _ in range(50):
        p, q = rng.randint(-9, 9), rng.randint(-9, 9)
        if p == 0 and q == 0:
            continue
        c = TorusCoord(p, q)
        for d in (1, 2, 3):
            assert torus_simple_length(modular_torus, c.scaled(d)) == pytest.approx(
                d * torus_simple_length(modular_torus, c), rel=1e-12
            )
    checked = 0
    while checked < 40:
        w = "".join(rng.choice("abAB") for _ in range(rng.randint(1, 10)))
        g = "".join(rng.choice("abAB") for _ in range(rng.randint(1, 6)))
        try:
            base = word_length(modular_torus, canonical_cyclic_form(torus, w))
        except WordError:
            continue
        conj = word_length(modular_torus, canonical_cyclic_form(torus, g + w + g[::-1].swapcase()))
        inv = word_length(modular_torus, canonical_cyclic_form(torus, w[::-1].swapcase()))
        assert conj == pytest.approx(base, rel=1e-12)
        assert inv == pytest.approx(base, rel=1e-12)
        checked += 1


def test_quasi_comparability_with_diamond_norm(modular_torus):
    # data-derived constants 0 < c1 <= c2 with c1 |p|+|q| <= length <= c2 |p|+|q|
    from math import gcd

    ratios = []
    for p in range(0, 51):
        for q in range(-50 if p else 1, 51):
            if (p or q) and p + abs(q) <= 50 and gcd(abs(p), abs(q)) == 1:
                ratios.append(
                    torus_simple_length(modular_torus, TorusCoord(p, q)) / (p + abs(q))
                )
    c1, c2 = min(ratios), max(ratios)
    assert 0 < c1 <= c2
    assert c2 / c1 < 5  # comfortably bounded on this structure


def test_genus2_structure_validates():
    rep = genus2_structure(FNCoords((2.0, 2.0, 2.0)))
    assert rep.validation["relator_residual"] < 1e-9
    assert max(rep.validation["boundary_trace_residuals"]) < 1e-7


def test_genus2_twist_preserves_lengths():
    base = genus2_structure(FNCoords((2.0, 2.0, 2.0)))
    twisted = genus2_structure(FNCoords((2.0, 2.0, 2.0), (0.7, 0.0, 0.0)))
    assert twisted.validation["relator_residual"] < 1e-9
    for word in twisted.pants_words:
        assert word_length(twisted, word) == pytest.approx(word_length(base, word), abs=1e-9)


def test_genus2_asymmetric_lengths():
    rep = genus2_structure(FNCoords((1.5, 2.0, 2.5), (0.3, -0.4, 0.1)))
    for word, ell in zip(rep.pants_words, (1.5, 2.0, 2.5)):
        assert word_length(rep, word) == pytest.approx(ell, abs=1e-9)


def test_genus2_invalid_lengths():
    with pytest.raises(HolonomyError, match="positive"):
        FNCoords((0.0, 2.0, 2.0))
    with pytest.raises(HolonomyError, match="positive"):
        FNCoords((-1.0, 2.0, 2.0))


def test_rep_json_dump(modular_torus):
    payload = modular_torus.to_json_dict()
    assert payload["model"] == "torus-1-1"
    assert set(payload["matrices"]) == {"a", "b"}
    assert "commutator_trace_residual" in payload["validation"]
