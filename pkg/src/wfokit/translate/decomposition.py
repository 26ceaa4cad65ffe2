"""Splitting the runs of a sweeping automaton into its one-way sweeps.

An accepting run that starts on the left marker and stops with a right-marker
transition alternates left-to-right sweeps over the whole word with
right-to-left ones, joined by marker transitions.  Summing, over every
alternating sequence of marker transitions, the product of the marker
weights with the one-way values of the sweeps in between must give back the
value of the automaton.  Sweeps are evaluated by a dynamic program over the
word that does not go through :func:`wfokit.runs.nwa_eval`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..multiset import MultisetSeries, ms_sum
from ..nwa import LEFT, LMARK, ONE, RIGHT, RMARK, Const, Letter, Nwa, State, Transition, sweeping_partition
from ..runs import nwa_eval


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Decomposition:
    lhs: MultisetSeries
    rhs: MultisetSeries
    terms: tuple[tuple[int, MultisetSeries], ...]  # (number of right-marker turns, contribution)

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def _unit_of(t: Transition) -> MultisetSeries:
    if t.weight is ONE:
        return MultisetSeries.unit()
    if isinstance(t.weight, Const):
        return MultisetSeries.single(t.weight.symbol)
    raise DecompositionError("only level-0 automata are supported (call weights found)")


def sweep_values(a: Nwa, word: Sequence[Letter], direction: str) -> dict[tuple[State, State], MultisetSeries]:
    """Values of the one-way runs crossing the whole word in ``direction``:
    (entry state, exit state) -> multiset."""
    letters = list(word) if direction == RIGHT else list(reversed(word))
    out: dict[tuple[State, State], MultisetSeries] = {}
    for p in a.states:
        cur = {p: MultisetSeries.unit()}
        for x in letters:
            nxt: dict[State, MultisetSeries] = {}
            for s, val in cur.items():
                for t in a.moves(s, x):
                    if t.dir != direction:
                        continue
                    v = val * _unit_of(t)
                    nxt[t.dst] = nxt[t.dst] + v if t.dst in nxt else v
            cur = nxt
        for q, val in cur.items():
            out[(p, q)] = val
    return out


def _check_shape(a: Nwa, p: State, q: State) -> None:
    if a.children:
        raise DecompositionError("only level-0 automata are supported")
    if sweeping_partition(a) is None:
        raise DecompositionError(f"automaton {a.name!r} is not sweeping")
    for t in a.transitions:
        if t.src == p and t.letter != LMARK:
            raise DecompositionError(f"start state {p!r} must only read the left marker")
        if t.dst == q and t.letter != RMARK:
            raise DecompositionError(f"stop state {q!r} must only be entered on the right marker")
        if t.src == q:
            raise DecompositionError(f"stop state {q!r} must have no outgoing transitions")
    if p == q:
        raise DecompositionError("start and stop states must differ")


def sweep_decomposition_check(a: Nwa, p: State, q: State, word: Sequence[Letter]) -> Decomposition:
    """Compare the value of ``a`` from ``p`` to ``q`` on ``word`` with the sum
    over alternating marker transitions of marker weights times sweep values.
    At most ``|Q|`` right-marker turns are enumerated."""
    _check_shape(a, p, q)
    word = tuple(word)
    lhs = nwa_eval(a.replace(initial={p}, final={q}), word)
    forward = sweep_values(a, word, RIGHT)
    backward = sweep_values(a, word, LEFT)
    bound = len(a.states)
    by_turns: dict[int, list[MultisetSeries]] = {}

    def from_left(state: State, prefix: MultisetSeries, turns: int) -> None:
        # ``state`` sits on the left marker
        for t in a.moves(state, LMARK):
            if t.dir != RIGHT:
                continue
            head = prefix * _unit_of(t)
            for (entry, exit_), val in forward.items():
                if entry == t.dst and val:
                    from_right(exit_, head * val, turns)

    def from_right(state: State, prefix: MultisetSeries, turns: int) -> None:
        # ``state`` sits on the right marker
        for t in a.moves(state, RMARK):
            if t.dir != LEFT:
                continue
            head = prefix * _unit_of(t)
            if t.dst == q:
                by_turns.setdefault(turns, []).append(head)
                continue
            if turns + 1 >= bound:
                continue
            for (entry, exit_), val in backward.items():
                if entry == t.dst and val:
                    from_left(exit_, head * val, turns + 1)

    from_left(p, MultisetSeries.unit(), 0)
    terms = tuple((n, ms_sum(vals)) for n, vals in sorted(by_turns.items()))
    rhs = ms_sum(v for _, v in terms)
    return Decomposition(lhs, rhs, terms)
