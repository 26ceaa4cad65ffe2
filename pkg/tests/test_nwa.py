import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wfokit.corpus import example_automaton, mirror_nest, random_automaton, swept_example
from wfokit.nwa import (
    LEFT,
    LMARK,
    ONE,
    RIGHT,
    RMARK,
    Const,
    Nwa,
    NwaError,
    Transition,
    demote,
    dump_nwa,
    is_one_way,
    is_sweeping,
    mark_position,
    marked_words,
    parse_nwa,
    projection_lr,
    projection_rl,
    same_structure,
    sweeping_partition,
    unmark_last,
    validate,
)

ONE_WAY = """
alphabet a b
weights k
states s t
initial s
final t
s -> s : |- , one , R
s -> s : _ , k:k , R
s -> t : -| , one , L
"""

seeds = st.integers(0, 2**32 - 1).map(random.Random)


def test_fixtures_validate():
    for a in (example_automaton(), mirror_nest(), swept_example()):
        assert validate(a) == []
    assert mirror_nest().level == 2
    assert [x.depth for x in mirror_nest().descendants()] == [0, 1, 2]


def test_left_marker_must_move_right():
    text = ONE_WAY.replace("s -> s : |- , one , R", "s -> s : |- , one , L")
    problems = validate(parse_nwa(text))
    assert any(p.startswith("marker direction") for p in problems)


def test_child_level_mismatch():
    text = """
level 1
alphabet a
states s t
initial s
final t
s -> t : a , call:C , R

child C {
  level 1
  states u v
  initial u
  final v
  u -> v : (a,1) , one , R
}
"""
    problems = validate(parse_nwa(text))
    assert problems == ["level mismatch: child 'C' has level 1, parent 1"]


def test_declared_level_too_small_for_calls():
    text = mirror_nest_text().replace("level 2", "level 1", 1)
    problems = validate(parse_nwa(text))
    assert any("declares level 1" in p for p in problems)


def mirror_nest_text():
    from wfokit.corpus import data_text

    return data_text("fig1.nwa")


def test_calls_on_markers_are_rejected():
    a = example_automaton()
    bad = Nwa("bad", a.base, 0, ["s", "t"], {"s"}, {"t"}, [Transition("s", LMARK, Const("f"), RIGHT, "t")])
    assert validate(bad) == []
    from wfokit.nwa import Call

    child = Nwa("c", a.base, 1, ["u"], {"u"}, {"u"}, [])
    bad = Nwa("bad", a.base, 0, ["s", "t"], {"s"}, {"t"}, [Transition("s", LMARK, Call("c"), RIGHT, "t")], {"c": child})
    assert any(p.startswith("call on marker") for p in validate(bad))


def test_sweeping_examples():
    assert is_sweeping(example_automaton()) is None
    assert is_sweeping(swept_example()) is not None
    assert is_one_way(parse_nwa(ONE_WAY).replace(transitions=[t for t in parse_nwa(ONE_WAY).transitions if t.dir == RIGHT])) == "left-to-right"
    part = sweeping_partition(swept_example())
    assert part["p"] == RIGHT


def test_projection_of_example():
    lr = projection_lr(example_automaton())
    got = {(t.src, t.letter, t.dst) for t in lr.transitions}
    assert got == {("iota", LMARK, "p"), ("p", "a", "p"), ("r", "a", "r"), ("r", "b", "p"), ("q", LMARK, "r"), ("q", "b", "r")}
    back = projection_rl(lr)
    assert back.transitions == ()


def test_projection_of_one_way_is_fixpoint():
    a = parse_nwa(ONE_WAY)
    right_only = a.replace(transitions=[t for t in a.transitions if t.dir == RIGHT])
    assert same_structure(projection_lr(right_only), right_only)


def test_demote_single_transition():
    a = Nwa("c", ("a",), 1, ["p", "q"], {"p"}, {"q"}, [Transition("p", ("a", 1), ONE, RIGHT, "q")])
    d = demote(a)
    assert set(d.transitions) == {
        Transition("p", ("a", 0, 1), ONE, RIGHT, "q"),
        Transition("p", ("a", 1, 1), ONE, RIGHT, "q"),
    }
    assert d.states == a.states and d.initial == a.initial and d.final == a.final
    assert d.depth == 2


def test_demote_keeps_constants_and_rejects_depth_zero():
    a = Nwa("c", ("a",), 1, ["p"], {"p"}, {"p"}, [Transition("p", ("a", 0), Const("k"), LEFT, "p")])
    assert {t.weight for t in demote(a, 2).transitions} == {Const("k")}
    with pytest.raises(NwaError):
        demote(example_automaton())


def test_mark_position():
    assert mark_position("ab", 1) == (("a", 1), ("b", 0))
    assert mark_position("abb", 3) == (("a", 0), ("b", 0), ("b", 1))
    with pytest.raises(NwaError):
        mark_position("ab", 3)


@given(st.text("ab", min_size=1, max_size=6), st.data())
def test_mark_then_unmark(u, data):
    i = data.draw(st.integers(1, len(u)))
    marked = mark_position(tuple(u), i)
    assert unmark_last(marked) == tuple(u)
    assert sum(x[-1] for x in marked) == 1


def test_marked_words_count():
    assert len(list(marked_words("ab", 2, 3))) == 2**3 * 3**2


@pytest.mark.parametrize("fixture", [example_automaton, mirror_nest, swept_example])
def test_dump_round_trip(fixture):
    a = fixture()
    assert same_structure(parse_nwa(dump_nwa(a)), a)


@given(seeds)
def test_dump_round_trip_random(rng):
    a = random_automaton(rng)
    assert same_structure(parse_nwa(dump_nwa(a)), a)


def test_parse_errors_name_the_line():
    with pytest.raises(NwaError) as err:
        parse_nwa(ONE_WAY.replace("s -> s : _ , k:k , R", "s -> s : _ , k:k R"))
    assert "line" in str(err.value)
