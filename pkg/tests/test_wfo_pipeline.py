import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wfokit.corpus import formula_corpus, mirror_formula, mirror_nest, power_formula, random_rone, words
from wfokit.logic import Weight, parse_formula, wfo_eval
from wfokit.monoid import is_aperiodic
from wfokit.multiset import MultisetSeries, aggregate, natural_aggregator
from wfokit.nwa import is_one_way_until_exit, is_sweeping, validate
from wfokit.runs import Evaluator, nwa_eval
from wfokit.translate import TranslationError, wfo_to_sweeping

seeds = st.integers(0, 2**32 - 1).map(random.Random)
CORPUS = formula_corpus()


def test_constant():
    a = wfo_to_sweeping(Weight("k"), "ab")
    for u in ("", "a", "abba"):
        assert nwa_eval(a, u) == MultisetSeries.single("k")


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_formula(name):
    phi, weights = CORPUS[name]
    a = wfo_to_sweeping(phi, "ab", weights=weights)
    assert validate(a) == []
    assert is_sweeping(a) is not None
    assert is_aperiodic(a).aperiodic
    ev = Evaluator()
    for u in words("ab", 4):
        assert nwa_eval(a, u, ev) == wfo_eval(phi, u), u


def test_power_law_through_the_nest():
    doc = power_formula()
    a = wfo_to_sweeping(doc.formula, doc.alphabet, weights=doc.weights)
    nat = natural_aggregator()
    ev = Evaluator()
    for u in words("ab", 7):
        assert aggregate(nwa_eval(a, u, ev), nat) == u.count("a") ** u.count("b"), u


def test_mirror_nest_and_translation_agree():
    doc = mirror_formula()
    a = wfo_to_sweeping(doc.formula, doc.alphabet, weights=doc.weights)
    nest = mirror_nest()
    for u in words("ab", 5):
        assert nwa_eval(a, u) == nwa_eval(nest, u), u


def test_one_way_mode_rejects_two_way_formulas():
    with pytest.raises(TranslationError):
        wfo_to_sweeping(mirror_formula().formula, "ab", mode="one-way")
    with pytest.raises(TranslationError):
        wfo_to_sweeping(parse_formula("a . b"), "ab", mode="one-way")
    with pytest.raises(TranslationError, match="free variables"):
        wfo_to_sweeping(parse_formula("Pa(x) ? a : b"), "ab")
    with pytest.raises(ValueError):
        wfo_to_sweeping(Weight("a"), "ab", mode="sideways")


@pytest.mark.parametrize("name", ["power", "count_a", "letters_lr", "prefix_marks", "product_of_sums", "choice"])
def test_one_way_mode(name):
    phi, weights = CORPUS[name]
    a = wfo_to_sweeping(phi, "ab", mode="one-way", weights=weights)
    assert is_one_way_until_exit(a)
    for u in words("ab", 4):
        assert nwa_eval(a, u) == wfo_eval(phi, u), u


@settings(max_examples=25)
@given(seeds)
def test_rone_formulas_one_way(rng):
    phi = random_rone(rng)
    a = wfo_to_sweeping(phi, "ab", mode="one-way", weights=("a", "b"))
    assert is_one_way_until_exit(a)
    ev = Evaluator()
    for u in words("ab", 3):
        value = nwa_eval(a, u, ev)
        assert value == wfo_eval(phi, u)
        assert all(len(seq) == len(u) for seq in value)
