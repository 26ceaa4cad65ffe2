import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wfokit.corpus import example_automaton, mirror_nest, random_automaton, random_sweeping, swept_example, words
from wfokit.monoid import (
    UNIT,
    Behaviour,
    BudgetExceeded,
    StateIndex,
    behaviour_bruteforce,
    behaviour_compose,
    behaviour_pairs,
    build_transition_monoid,
    is_aperiodic,
    monoid_dump,
    rel_from_pairs,
    word_behaviour,
)
from wfokit.nwa import ONE, RIGHT, Nwa, Transition, projection_lr, projection_rl

seeds = st.integers(0, 2**32 - 1).map(random.Random)

N = 3
relations = st.frozensets(st.tuples(st.integers(0, N - 1), st.integers(0, N - 1))).map(lambda p: rel_from_pairs(p, N))
behaviours = st.builds(Behaviour, relations, relations, relations, relations)


def loop_automaton(swap: bool) -> Nwa:
    trans = [Transition("s", "a", ONE, RIGHT, "t" if swap else "s"), Transition("t", "a", ONE, RIGHT, "s" if swap else "t")]
    return Nwa("loops", ("a",), 0, ["s", "t"], {"s"}, {"t"}, trans)


def test_empty_word_is_the_unit():
    a = example_automaton()
    idx = StateIndex(a)
    ident = frozenset((q, q) for q in a.states)
    assert behaviour_bruteforce(a, ()) is UNIT
    assert behaviour_pairs(UNIT, idx) == {"ll": ident, "lr": ident, "rl": ident, "rr": ident}


def test_single_letter_of_example():
    a = example_automaton()
    pairs = behaviour_pairs(behaviour_bruteforce(a, "a"), StateIndex(a))
    assert {("p", "p"), ("r", "r")} <= pairs["lr"]
    assert {("q", "q")} <= pairs["rl"]


def test_one_way_root_never_exits_left():
    a = loop_automaton(True)
    for w in words("a", 4, 1):
        pairs = behaviour_pairs(behaviour_bruteforce(a, w), StateIndex(a))
        assert pairs["ll"] == pairs["rl"] == frozenset()


def test_composition_matches_bruteforce_on_example():
    a = example_automaton()
    idx = StateIndex(a)
    for w in words("ab", 5):
        direct = behaviour_bruteforce(a, w, idx)
        for cut in range(len(w) + 1):
            left = behaviour_bruteforce(a, w[:cut], idx)
            right = behaviour_bruteforce(a, w[cut:], idx)
            assert behaviour_compose(left, right) == direct, (w, cut)


@settings(max_examples=30)
@given(seeds)
def test_composition_matches_bruteforce_on_random(rng):
    a = random_automaton(rng, states=3)
    idx = StateIndex(a)
    for w in words("ab", 4):
        assert word_behaviour(a, w, idx) == behaviour_bruteforce(a, w, idx), w


@given(behaviours, behaviours, behaviours)
def test_composition_is_associative(x, y, z):
    assert behaviour_compose(behaviour_compose(x, y), z) == behaviour_compose(x, behaviour_compose(y, z))


@given(behaviours)
def test_unit_is_neutral(x):
    assert behaviour_compose(x, UNIT) == x == behaviour_compose(UNIT, x)


def test_state_count_mismatch():
    small = Behaviour((0,), (0,), (0,), (0,))
    big = Behaviour((0, 0), (0, 0), (0, 0), (0, 0))
    with pytest.raises(ValueError):
        behaviour_compose(small, big)


def test_one_state_loop_monoid():
    a = Nwa("one", ("a", "b"), 0, ["s"], {"s"}, {"s"}, [Transition("s", x, ONE, RIGHT, "s") for x in "ab"])
    m = build_transition_monoid(a)
    # the unit plus a single class for every nonempty word
    assert len(m) == 2
    assert [e for e in m.elements if e is not UNIT] == [m.generators["a"]]


def test_example_monoid_is_closed():
    m = build_transition_monoid(example_automaton())
    for i in range(len(m)):
        for x in "ab":
            j = m.table[(i, x)]
            assert m.elements[j] == behaviour_compose(m.elements[i], m.generators[x])
    for e in m.elements:
        assert m.element_of(m.witness[e]) == e


def test_monoid_budget():
    with pytest.raises(BudgetExceeded):
        build_transition_monoid(example_automaton(), budget=2)
    report = is_aperiodic(example_automaton(), budget=2)
    assert not report.aperiodic and report.reports[0].budget_exceeded


@settings(max_examples=20)
@given(seeds)
def test_one_way_projection_rr_depends_on_last_letter(rng):
    a = projection_lr(random_sweeping(rng, states=3))
    idx = StateIndex(a)
    for w in words("ab", 4, 1):
        assert behaviour_pairs(word_behaviour(a, w, idx), idx)["rr"] == behaviour_pairs(
            word_behaviour(a, w[-1:], idx), idx
        )["rr"]


def test_example_is_aperiodic():
    report = is_aperiodic(example_automaton())
    assert report.aperiodic
    assert report.index is not None and report.index >= 1
    assert report.format().startswith(f"aperiodic: true, index: {report.index}")


def test_parity_is_not_aperiodic():
    report = is_aperiodic(loop_automaton(True))
    assert not report.aperiodic
    bad = report.witness
    assert bad.witness == ("a",) and bad.period == 2
    assert is_aperiodic(loop_automaton(False)).aperiodic


def test_mirror_nest_aperiodic_at_every_level():
    report = is_aperiodic(mirror_nest())
    assert len(report.reports) == 3
    assert all(r.aperiodic for r in report.reports)


def test_marked_levels_agree_with_bruteforce():
    for x in mirror_nest().descendants()[1:] + swept_example().descendants()[1:]:
        idx = StateIndex(x)
        letters = x.letters()
        for n in range(4):
            for w in itertools.product(letters, repeat=n):
                assert word_behaviour(x, w, idx) == behaviour_bruteforce(x, w, idx)


@settings(max_examples=15)
@given(seeds)
def test_projections_of_aperiodic_sweeping_are_aperiodic(rng):
    a = random_sweeping(rng, states=3)
    if is_aperiodic(a).aperiodic:
        assert is_aperiodic(projection_lr(a)).aperiodic
        assert is_aperiodic(projection_rl(a)).aperiodic


def test_dump_lists_every_element():
    m = build_transition_monoid(example_automaton())
    lines = monoid_dump(m).splitlines()
    assert lines[0] == f"elements {len(m)}"
    assert len(lines) == len(m) + 1
    assert lines[1].endswith("unit")
