"""Bundled fixtures, the formula corpus and random generators for tests."""

from __future__ import annotations

import itertools
import random
from importlib import resources
from typing import Sequence

from .ambiguity import has_infinite_ambiguity
from .logic import (
    And,
    Cond,
    FoFormula,
    Leq,
    Not,
    Plus,
    ProdLR,
    Sum,
    Top,
    Weight,
    WfoDocument,
    WfoFormula,
    Zero,
    parse_fo_document,
    parse_formula,
    parse_wfo_document,
)
from .logic import Letter as LetterAtom
from .multiset import MultisetSeries
from .nwa import LEFT, LMARK, ONE, RIGHT, RMARK, Const, Nwa, Transition, is_marker, parse_nwa

BASE = ("a", "b")


def data_text(name: str) -> str:
    return resources.files("wfokit").joinpath("data", name).read_text(encoding="utf-8")


def load_nwa(name: str) -> Nwa:
    return parse_nwa(data_text(name))


def load_wfo(name: str) -> WfoDocument:
    return parse_wfo_document(data_text(name))


def example_automaton() -> Nwa:
    """The two-way, unambiguous level-0 automaton with weights f and g."""
    return load_nwa("aex.nwa")


def mirror_nest() -> Nwa:
    """Level-2 nest for the doubled mirror series."""
    return load_nwa("fig1.nwa")


def swept_example() -> Nwa:
    return load_nwa("fig5.nwa")


def mirror_formula() -> WfoDocument:
    return load_wfo("ex1.wfo")


def power_formula() -> WfoDocument:
    return load_wfo("ex2.wfo")


def top_formula():
    return parse_fo_document(data_text("top.fo"))


# Closed formulas over {a, b}; names say what they compute.
FORMULA_CORPUS: dict[str, str] = {
    "unit": "one",
    "constant": "a",
    "choice": "a + b",
    "concat": "a . b",
    "count_a": "sum x . (Pa(x) ? a : zero)",
    "letters_lr": "prodL x . (Pa(x) ? a : b)",
    "letters_rl": "prodR x . (Pa(x) ? a : b)",
    "all_a_guard": "(forall x . Pa(x)) ? a : (sum x . (Pb(x) ? b : zero))",
    "prefix_marks": "sum x . prodL y . ((y <= x) ? a : b)",
    "pairs_ordered": "sum x . sum y . ((x <= y & !(y <= x)) ? (a . b) : zero)",
    "rl_of_lr": "prodR x . prodL y . ((x <= y) ? a : one)",
    "product_of_sums": "prodL x . (Pb(x) ? (sum y . ((y <= x) ? b : zero)) : one)",
}


def formula_corpus() -> dict[str, tuple[WfoFormula, tuple[str, ...]]]:
    """Name -> (formula, weight symbols) including both bundled examples."""
    out = {}
    for name, doc in (("mirror", mirror_formula()), ("power", power_formula())):
        out[name] = (doc.formula, tuple(doc.weights))
    for name, text in FORMULA_CORPUS.items():
        out[name] = (parse_formula(text), ("a", "b"))
    return out


# ------------------------------------------------------------------ random


def random_series(rng: random.Random, symbols: Sequence[str] = ("a", "b"), max_terms: int = 3, max_len: int = 3) -> MultisetSeries:
    out = MultisetSeries.empty()
    for _ in range(rng.randint(0, max_terms)):
        seq = tuple(rng.choice(symbols) for _ in range(rng.randint(0, max_len)))
        out = out + MultisetSeries({seq: rng.randint(1, 3)})
    return out


def _random_weight(rng: random.Random, symbols: Sequence[str]):
    return ONE if rng.random() < 0.3 else Const(rng.choice(symbols))


def random_automaton(
    rng: random.Random, states: int = 3, base: Sequence[str] = BASE, density: float = 0.25, symbols: Sequence[str] = ("f", "g")
) -> Nwa:
    """Level-0 two-way automaton with arbitrary initial and final sets."""
    qs = list(range(states))
    trans = []
    for p in qs:
        for x in [LMARK, *base, RMARK]:
            dirs = [RIGHT] if x == LMARK else [LEFT] if x == RMARK else [RIGHT, LEFT]
            for d in dirs:
                for q in qs:
                    if rng.random() < density:
                        trans.append(Transition(p, x, _random_weight(rng, symbols), d, q))
    initial = {q for q in qs if rng.random() < 0.4} or {0}
    final = {q for q in qs if rng.random() < 0.4} or {states - 1}
    return Nwa("root", tuple(base), 0, qs, initial, final, trans, {}, tuple(symbols))


def random_sweeping(
    rng: random.Random,
    states: int = 3,
    base: Sequence[str] = BASE,
    density: float = 0.3,
    symbols: Sequence[str] = ("f", "g"),
    turn_density: float | None = None,
    layered: bool = False,
) -> Nwa:
    """Sweeping level-0 automaton with a fresh initial state reading only the
    left marker and a fresh final state entered only by the right marker.

    ``turn_density`` (default ``density``) drives the marker transitions.
    With ``layered`` the phases alternate along the state order and no
    transition goes to an earlier state, so turns always move forward and
    every run is cycle free while still allowing several sweeps."""
    turns = density if turn_density is None else turn_density
    qs = list(range(states))
    if layered:
        phase = {q: RIGHT if q % 2 == 0 else LEFT for q in qs}
    else:
        phase = {q: rng.choice((RIGHT, LEFT)) for q in qs}
    trans = []

    def pick(src, letter, d, want):
        for q in qs:
            if phase[q] != want or (layered and isinstance(src, int) and q < src):
                continue
            if layered and isinstance(src, int) and q == src and is_marker(letter):
                continue
            if rng.random() < (density if letter in base else turns):
                trans.append(Transition(src, letter, _random_weight(rng, symbols), d, q))

    pick("init", LMARK, RIGHT, RIGHT)
    for p in qs:
        if phase[p] == RIGHT:
            for x in base:
                pick(p, x, RIGHT, RIGHT)
            pick(p, RMARK, LEFT, LEFT)
            if rng.random() < turns:
                trans.append(Transition(p, RMARK, _random_weight(rng, symbols), LEFT, "fin"))
        else:
            for x in base:
                pick(p, x, LEFT, LEFT)
            pick(p, LMARK, RIGHT, RIGHT)
    return Nwa("root", tuple(base), 0, ["init", *qs, "fin"], {"init"}, {"fin"}, trans, {}, tuple(symbols))


def random_finite_sweeping(rng: random.Random, horizon: int = 4, **kwargs) -> Nwa:
    """Random sweeping automaton without accepting runs through a cycle.
    Half of the draws are layered unless ``layered`` is given."""
    while True:
        opts = dict(kwargs)
        opts.setdefault("layered", rng.random() < 0.5)
        a = random_sweeping(rng, **opts)
        if has_infinite_ambiguity(a, horizon) is None:
            return a


def random_finite_automaton(rng: random.Random, horizon: int = 4, **kwargs) -> Nwa:
    while True:
        a = random_automaton(rng, **kwargs)
        if has_infinite_ambiguity(a, horizon) is None:
            return a


def random_guard(rng: random.Random, variables: Sequence[str], base: Sequence[str] = BASE, depth: int = 2) -> FoFormula:
    if not variables:
        return Top()
    roll = rng.random()
    if depth == 0 or roll < 0.4:
        if len(variables) > 1 and rng.random() < 0.4:
            return Leq(rng.choice(variables), rng.choice(variables))
        return LetterAtom(rng.choice(base), rng.choice(variables))
    if roll < 0.6:
        return Not(random_guard(rng, variables, base, depth - 1))
    return And(random_guard(rng, variables, base, depth - 1), random_guard(rng, variables, base, depth - 1))


def random_step(rng: random.Random, variables: Sequence[str], symbols: Sequence[str] = ("a", "b"), depth: int = 2) -> WfoFormula:
    if depth == 0 or rng.random() < 0.4:
        return Weight(rng.choice(symbols))
    return Cond(random_guard(rng, variables), random_step(rng, variables, symbols, depth - 1), random_step(rng, variables, symbols, depth - 1))


def random_rone(
    rng: random.Random, variables: Sequence[str] = (), symbols: Sequence[str] = ("a", "b"), depth: int = 3, _fresh: int = 0
) -> WfoFormula:
    """Random formula of the fragment built from zero, conditionals, sums,
    unions and left-to-right products of step formulas."""
    roll = rng.random()
    if depth == 0 or roll < 0.15:
        if rng.random() < 0.3:
            return Zero()
        var = f"x{_fresh}"
        return ProdLR(var, random_step(rng, [*variables, var], symbols))
    if roll < 0.35:
        var = f"x{_fresh}"
        return ProdLR(var, random_step(rng, [*variables, var], symbols))
    if roll < 0.55:
        var = f"x{_fresh}"
        return Sum(var, random_rone(rng, [*variables, var], symbols, depth - 1, _fresh + 1))
    if roll < 0.75:
        return Plus(
            random_rone(rng, variables, symbols, depth - 1, _fresh), random_rone(rng, variables, symbols, depth - 1, _fresh)
        )
    return Cond(
        random_guard(rng, variables),
        random_rone(rng, variables, symbols, depth - 1, _fresh),
        random_rone(rng, variables, symbols, depth - 1, _fresh),
    )


def words(base: Sequence[str], max_len: int, min_len: int = 0):
    for n in range(min_len, max_len + 1):
        yield from itertools.product(base, repeat=n)


__all__ = [
    "BASE",
    "FORMULA_CORPUS",
    "data_text",
    "example_automaton",
    "formula_corpus",
    "load_nwa",
    "load_wfo",
    "mirror_formula",
    "mirror_nest",
    "power_formula",
    "random_automaton",
    "random_finite_automaton",
    "random_finite_sweeping",
    "random_guard",
    "random_rone",
    "random_series",
    "random_step",
    "random_sweeping",
    "swept_example",
    "top_formula",
    "words",
]
