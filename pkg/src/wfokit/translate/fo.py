"""First-order formulas to minimal deterministic automata over marked letters.

A formula is compiled relative to a list of tracks: track ``j`` of a letter
``(a, b1, ..., bk)`` carries the mark of ``tracks[j]``.  When a name occurs
twice the later track wins, mirroring how inner binders shadow outer ones.
Acceptance only matters on words where every track holds exactly one mark.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .. import logic
from ..logic import And, Forall, FoFormula, Leq, Not, Top, UnboundVariableError, fo_free_vars
from ..nwa import LEFT, LMARK, ONE, RIGHT, RMARK, Nwa, Transition, alphabet_letters, base_letter, make_letter, marks_of


@dataclass(frozen=True)
class Dfa:
    letters: tuple
    start: int
    delta: tuple[dict, ...]
    accepting: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.delta)

    def step(self, state: int, letter) -> int:
        return self.delta[state][letter]

    def accepts(self, word: Sequence) -> bool:
        s = self.start
        for x in word:
            s = self.delta[s][x]
        return s in self.accepting


def _letters(base: Sequence[str], k: int) -> tuple:
    return tuple(alphabet_letters(base, k))


def _const(letters: tuple, accept: bool) -> Dfa:
    return Dfa(letters, 0, ({x: 0 for x in letters},), frozenset({0}) if accept else frozenset())


def _track_of(tracks: Sequence[str], var: str) -> int:
    for j in range(len(tracks) - 1, -1, -1):
        if tracks[j] == var:
            return j
    raise UnboundVariableError(var)


def _letter_atom(letters: tuple, a: str, track: int) -> Dfa:
    # 0: mark not seen, 1: mark seen on an a, 2: dead
    delta = ({}, {}, {})
    for x in letters:
        marked = marks_of(x)[track] == 1
        delta[0][x] = (1 if base_letter(x) == a else 2) if marked else 0
        delta[1][x] = 2 if marked else 1
        delta[2][x] = 2
    return Dfa(letters, 0, delta, frozenset({1}))


def _leq_atom(letters: tuple, tx: int, ty: int) -> Dfa:
    # 0: neither seen, 1: x seen, 2: accept, 3: dead
    delta = ({}, {}, {}, {})
    for x in letters:
        m = marks_of(x)
        bx, by = m[tx] == 1, m[ty] == 1
        delta[0][x] = 2 if (bx and by) else 1 if bx else 3 if by else 0
        delta[1][x] = 2 if by else 1
        delta[2][x] = 2
        delta[3][x] = 3
    return Dfa(letters, 0, delta, frozenset({2}))


def complement(d: Dfa) -> Dfa:
    return Dfa(d.letters, d.start, d.delta, frozenset(range(d.size)) - d.accepting)


def product(d1: Dfa, d2: Dfa) -> Dfa:
    index = {(d1.start, d2.start): 0}
    order = [(d1.start, d2.start)]
    delta: list[dict] = []
    i = 0
    while i < len(order):
        s1, s2 = order[i]
        row = {}
        for x in d1.letters:
            nxt = (d1.delta[s1][x], d2.delta[s2][x])
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            row[x] = index[nxt]
        delta.append(row)
        i += 1
    acc = frozenset(index[p] for p in order if p[0] in d1.accepting and p[1] in d2.accepting)
    return Dfa(d1.letters, 0, tuple(delta), acc)


def _one_mark_on_last(letters: tuple) -> Dfa:
    delta = ({}, {}, {})
    for x in letters:
        marked = marks_of(x)[-1] == 1
        delta[0][x] = 1 if marked else 0
        delta[1][x] = 2 if marked else 1
        delta[2][x] = 2
    return Dfa(letters, 0, delta, frozenset({1}))


def project_last(d: Dfa, base: Sequence[str], k: int) -> Dfa:
    """Existential projection of the last track, then subset construction."""
    letters = _letters(base, k)
    d = product(d, _one_mark_on_last(d.letters))
    lift = {x: [make_letter(base_letter(x), marks_of(x) + (bit,)) for bit in (0, 1)] for x in letters}
    start = frozenset({d.start})
    index = {start: 0}
    order = [start]
    delta: list[dict] = []
    i = 0
    while i < len(order):
        cur = order[i]
        row = {}
        for x in letters:
            nxt = frozenset(d.delta[s][y] for s in cur for y in lift[x])
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            row[x] = index[nxt]
        delta.append(row)
        i += 1
    acc = frozenset(index[s] for s in order if s & d.accepting)
    return Dfa(letters, 0, tuple(delta), acc)


def minimize(d: Dfa) -> Dfa:
    """Moore partition refinement on the reachable part."""
    reach = {d.start}
    todo = [d.start]
    while todo:
        s = todo.pop()
        for x in d.letters:
            t = d.delta[s][x]
            if t not in reach:
                reach.add(t)
                todo.append(t)
    states = sorted(reach)
    block = {s: (1 if s in d.accepting else 0) for s in states}
    while True:
        sigs = {s: (block[s],) + tuple(block[d.delta[s][x]] for x in d.letters) for s in states}
        names: dict = {}
        new_block = {}
        for s in states:
            new_block[s] = names.setdefault(sigs[s], len(names))
        if len(names) == len(set(block.values())):
            block = new_block
            break
        block = new_block
    # renumber in breadth-first order from the start for a canonical result
    order: dict[int, int] = {block[d.start]: 0}
    rep = {}
    for s in states:
        rep.setdefault(block[s], s)
    queue = [block[d.start]]
    delta_rows: list[dict] = []
    i = 0
    while i < len(queue):
        b = queue[i]
        s = rep[b]
        row = {}
        for x in d.letters:
            nb = block[d.delta[s][x]]
            if nb not in order:
                order[nb] = len(queue)
                queue.append(nb)
            row[x] = order[nb]
        delta_rows.append(row)
        i += 1
    acc = frozenset(order[block[s]] for s in states if s in d.accepting)
    return Dfa(d.letters, 0, tuple(delta_rows), acc)


def fo_to_dfa(phi: FoFormula, base: Sequence[str], tracks: Sequence[str]) -> Dfa:
    tracks = list(tracks)
    letters = _letters(base, len(tracks))
    if isinstance(phi, Top):
        return _const(letters, True)
    if isinstance(phi, logic.Letter):
        return _letter_atom(letters, phi.letter, _track_of(tracks, phi.var))
    if isinstance(phi, Leq):
        return minimize(_leq_atom(letters, _track_of(tracks, phi.left), _track_of(tracks, phi.right)))
    if isinstance(phi, Not):
        return complement(fo_to_dfa(phi.arg, base, tracks))
    if isinstance(phi, And):
        return minimize(product(fo_to_dfa(phi.left, base, tracks), fo_to_dfa(phi.right, base, tracks)))
    if isinstance(phi, Forall):
        inner = complement(fo_to_dfa(phi.body, base, tracks + [phi.var]))
        return minimize(complement(project_last(inner, base, len(tracks))))
    raise TypeError(f"not a Boolean formula: {phi!r}")


def dfa_to_nwa(d: Dfa, base: Sequence[str], depth: int, name: str = "fo") -> Nwa:
    """Wrap a DFA as a weight-one automaton reading from the left marker and
    leaving through the right marker."""
    trans = [Transition("init", LMARK, ONE, RIGHT, d.start)]
    for s, row in enumerate(d.delta):
        for x in d.letters:
            trans.append(Transition(s, x, ONE, RIGHT, row[x]))
    for s in sorted(d.accepting):
        trans.append(Transition(s, RMARK, ONE, LEFT, "accept"))
    states = ["init", *range(d.size), "accept"]
    return Nwa(name, tuple(base), depth, states, {"init"}, {"accept"}, trans)


def fo_to_automaton(phi: FoFormula, free: Sequence[str], base: Sequence[str]) -> Nwa:
    """Deterministic complete automaton over ``base × {0,1}^len(free)``."""
    free = list(free)
    missing = fo_free_vars(phi) - set(free)
    if missing:
        raise UnboundVariableError(sorted(missing)[0])
    d = minimize(fo_to_dfa(phi, base, free))
    return dfa_to_nwa(d, base, len(free))
