import collections
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wfokit.corpus import example_automaton, mirror_nest, random_automaton, random_finite_automaton, swept_example, words
from wfokit.monoid import is_aperiodic
from wfokit.nwa import LEFT, ONE, RIGHT, Call, Transition, is_sweeping, mark_position, same_structure, sweeping_partition, validate
from wfokit.runs import BULLET, Evaluator, RunTree, nwa_eval, run_trees
from wfokit.translate import (
    ComponentShapeError,
    ComponentVector,
    SweepError,
    anchor,
    build_component,
    component_of,
    flatten,
    is_anchored,
    max_depth,
    sw_transform,
    sweepify_component,
)
from wfokit.translate.sweep import TOP

seeds = st.integers(0, 2**32 - 1).map(random.Random)

TURN_AT_B = Transition("p", "b", ONE, LEFT, "q")
BACK_AT_B = Transition("r", "b", ONE, RIGHT, "p")


def nest_depth(a):
    return max(x.depth for x in a.descendants())


def source_of(result, a):
    return anchor(a) if a.name in result.provenance else a


def test_depth_bound():
    assert [max_depth(n) for n in range(1, 8)] == [0, 0, 2, 2, 4, 4, 6]


def test_example_is_already_anchored():
    a = example_automaton()
    assert is_anchored(a)
    assert anchor(a) is a


@settings(max_examples=30)
@given(seeds)
def test_anchor_shape(rng):
    b = anchor(random_automaton(rng))
    assert is_anchored(b)
    assert validate(b) == []


def test_empty_vector_is_the_source():
    a = example_automaton()
    assert build_component(a, 0, []) is a


def test_excursion_component_shape():
    c = build_component(example_automaton(), 1, [(TURN_AT_B, BACK_AT_B)])
    (start,) = c.initial
    (stop,) = c.final
    entries = {(t.letter, t.dir, t.dst) for t in c.transitions if t.src == start}
    exits = {(t.src, t.letter, t.dir) for t in c.transitions if t.dst == stop}
    assert entries == {(("b", 1), LEFT, "q")}
    assert exits == {("r", ("b", 1), RIGHT)}
    assert c.depth == 1


def test_component_descriptor():
    comp = component_of(ComponentVector(((TURN_AT_B, BACK_AT_B),)))
    assert comp.kind == "rr"
    assert (comp.tracks, comp.left, comp.right) == (1, "lm", 0)
    assert component_of(ComponentVector(())) == TOP


def test_component_shape_errors():
    with pytest.raises(ComponentShapeError, match="turn back"):
        component_of(ComponentVector(((TURN_AT_B, TURN_AT_B),)))
    with pytest.raises(ComponentShapeError, match="same letter"):
        component_of(ComponentVector(((TURN_AT_B, Transition("r", "a", ONE, RIGHT, "p")),)))
    with pytest.raises(ComponentShapeError, match="leaving on the left"):
        component_of(ComponentVector(((TURN_AT_B,),)))
    with pytest.raises(ComponentShapeError, match="polarity"):
        component_of(ComponentVector((), polarity=2))


def test_vector_longer_than_bound():
    pair = (TURN_AT_B, BACK_AT_B)
    with pytest.raises(SweepError, match="exceeds the bound"):
        sweepify_component(example_automaton(), 1, [pair] * 5)


def test_swept_component_is_sweeping_and_equal():
    a = example_automaton()
    vec = [(TURN_AT_B, BACK_AT_B)]
    raw = build_component(a, 1, vec)
    swept, prov = sweepify_component(a, 1, vec)
    # only the root sweeps; its children are the raw components one level down
    assert sweeping_partition(swept) is not None
    assert set(prov) == set(swept.transitions)
    ev = Evaluator()
    for u in words("ab", 4, 1):
        for i in range(1, len(u) + 1):
            w = mark_position(u, i)
            assert nwa_eval(swept, w, ev) == nwa_eval(raw, w, ev), w


@pytest.mark.parametrize("annotated", [False, True])
def test_example_becomes_sweeping(annotated):
    a = example_automaton()
    stages = []
    result = sw_transform(a, annotated=annotated, stages=stages)
    nest = result.nwa
    assert validate(nest) == []
    assert is_sweeping(nest) is not None
    assert nest_depth(nest) <= max_depth(5) == result.depth_bound
    assert len(stages) == result.depth_bound + 2
    ev = Evaluator()
    for u in words("ab", 6):
        expected = nwa_eval(a, u, ev)
        assert nwa_eval(nest, u, ev) == expected, u
        if len(u) <= 4:
            for stage in stages:
                assert nwa_eval(stage, u, ev) == expected, u
    if annotated:
        assert is_aperiodic(nest).aperiodic


def test_cutoff_components_have_no_calls():
    result = sw_transform(example_automaton())
    by_name = {x.name: x for x in result.nwa.descendants()}
    cut = [name for name, comp in result.components.items() if comp.tracks == result.depth_bound and name in by_name]
    for name in cut:
        assert not any(isinstance(t.weight, Call) for t in by_name[name].transitions)


def test_flatten_recovers_the_source_run():
    a = example_automaton()
    result = sw_transform(a, annotated=True)
    word = "abbaaba"
    (original,) = run_trees(a, word)
    (produced,) = run_trees(result.nwa, word)
    assert result.flatten(produced) == original
    assert any(isinstance(c.label.weight, Call) for c in produced.children)


def test_sweeping_input_is_kept():
    a = swept_example()
    result = sw_transform(a)
    assert same_structure(result.nwa, a)
    assert result.provenance == {}


def test_flatten_without_provenance_is_identity():
    (tree,) = run_trees(example_automaton(), "ab")
    assert flatten(tree, example_automaton(), {}) == tree


def test_flatten_needs_provenance_for_every_node():
    result = sw_transform(example_automaton())
    bogus = RunTree(BULLET, (RunTree(Transition("x", "a", ONE, RIGHT, "y")),))
    with pytest.raises(SweepError, match="no provenance"):
        result.flatten(bogus)


def test_infinite_ambiguity_is_refused():
    trans = [
        Transition("s", "a", ONE, RIGHT, "t"),
        Transition("t", "a", ONE, LEFT, "s"),
        Transition("t", "a", ONE, RIGHT, "t"),
        Transition("t", "⊣", ONE, LEFT, "f"),
    ]
    a = example_automaton().replace(states=["s", "t", "f"], initial={"s"}, final={"f"}, transitions=trans)
    with pytest.raises(SweepError, match="infinitely many runs"):
        sw_transform(a)


def test_nested_input_transforms_children():
    result = sw_transform(mirror_nest(), annotated=True)
    nest = result.nwa
    assert is_sweeping(nest) is not None
    ev = Evaluator()
    for u in words("ab", 4):
        assert nwa_eval(nest, u, ev) == nwa_eval(mirror_nest(), u, ev), u


@settings(max_examples=25)
@given(seeds)
def test_random_two_state_round_trip(rng):
    a = random_finite_automaton(rng, states=2, horizon=4)
    result = sw_transform(a)
    assert is_sweeping(result.nwa) is not None
    src = source_of(result, a)
    for u in words("ab", 4):
        assert nwa_eval(result.nwa, u) == nwa_eval(a, u), u
        produced = collections.Counter(result.flatten(t) for t in run_trees(result.nwa, u))
        assert produced == collections.Counter(run_trees(src, u)), u


@settings(max_examples=10)
@given(seeds)
def test_random_three_state_semantics(rng):
    a = random_finite_automaton(rng, states=3, horizon=4)
    result = sw_transform(a, annotated=rng.random() < 0.5)
    assert is_sweeping(result.nwa) is not None
    ev = Evaluator()
    for u in words("ab", 4):
        assert nwa_eval(result.nwa, u, ev) == nwa_eval(a, u, ev), u


@settings(max_examples=10)
@given(seeds)
def test_annotation_keeps_aperiodicity(rng):
    a = random_finite_automaton(rng, states=2, horizon=4)
    if is_aperiodic(a).aperiodic:
        assert is_aperiodic(sw_transform(a, annotated=True).nwa).aperiodic
