"""Two-way behaviours, transition monoids and aperiodicity.

A relation over the states ``0..n-1`` is stored as a tuple of row bitmasks:
bit ``j`` of row ``i`` says ``(i, j)`` is in the relation.  The behaviour of
the empty word is the distinguished element :data:`UNIT`, which composes as
the identity.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .nwa import LEFT, RIGHT, Letter, Nwa, State, format_letter

Rel = tuple[int, ...]


class BudgetExceeded(RuntimeError):
    pass


def default_budget() -> int:
    return int(os.environ.get("WFOKIT_BUDGET", "100000"))


# ----------------------------------------------------------------- relations


def rel_empty(n: int) -> Rel:
    return (0,) * n


def rel_identity(n: int) -> Rel:
    return tuple(1 << i for i in range(n))


def rel_union(r: Rel, s: Rel) -> Rel:
    return tuple(x | y for x, y in zip(r, s))


def rel_compose(r: Rel, s: Rel) -> Rel:
    """``r ; s``: first ``r`` then ``s``."""
    out = []
    for row in r:
        acc = 0
        j = 0
        while row:
            if row & 1:
                acc |= s[j]
            row >>= 1
            j += 1
        out.append(acc)
    return tuple(out)


def rel_star(r: Rel) -> Rel:
    """Reflexive-transitive closure."""
    n = len(r)
    rows = [r[i] | (1 << i) for i in range(n)]
    for k in range(n):
        bit = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk
    return tuple(rows)


def rel_pairs(r: Rel, states: Sequence[State] | None = None) -> frozenset[tuple]:
    out = set()
    for i, row in enumerate(r):
        j = 0
        while row:
            if row & 1:
                out.add((states[i], states[j]) if states is not None else (i, j))
            row >>= 1
            j += 1
    return frozenset(out)


def rel_from_pairs(pairs: Iterable[tuple[int, int]], n: int) -> Rel:
    rows = [0] * n
    for i, j in pairs:
        rows[i] |= 1 << j
    return tuple(rows)


# ---------------------------------------------------------------- behaviours


class Behaviour(NamedTuple):
    ll: Rel
    lr: Rel
    rl: Rel
    rr: Rel


class _Unit:
    def __repr__(self) -> str:
        return "UNIT"


UNIT = _Unit()

Element = Behaviour | _Unit


def behaviour_compose(b1: Element, b2: Element) -> Element:
    """Behaviour of ``uv`` from the behaviours of ``u`` and ``v``."""
    if b1 is UNIT:
        return b2
    if b2 is UNIT:
        return b1
    if len(b1.ll) != len(b2.ll):
        raise ValueError(f"state-set mismatch: {len(b1.ll)} vs {len(b2.ll)} states")
    inner_right = rel_star(rel_compose(b2.ll, b1.rr))  # bounce inside the seam going right
    inner_left = rel_star(rel_compose(b1.rr, b2.ll))
    lr = rel_compose(rel_compose(b1.lr, inner_right), b2.lr)
    rl = rel_compose(rel_compose(b2.rl, inner_left), b1.rl)
    ll = rel_union(b1.ll, rel_compose(rel_compose(rel_compose(b1.lr, inner_right), b2.ll), b1.rl))
    rr = rel_union(b2.rr, rel_compose(rel_compose(rel_compose(b2.rl, inner_left), b1.rr), b2.lr))
    return Behaviour(ll, lr, rl, rr)


def unit_relations(n: int) -> Behaviour:
    ident = rel_identity(n)
    return Behaviour(ident, ident, ident, ident)


class StateIndex:
    def __init__(self, a: Nwa):
        self.states = tuple(a.states)
        self.index = {q: i for i, q in enumerate(self.states)}

    def __len__(self) -> int:
        return len(self.states)


def letter_behaviour(a: Nwa, letter: Letter, idx: StateIndex | None = None) -> Behaviour:
    idx = idx or StateIndex(a)
    n = len(idx)
    fwd = [0] * n
    back = [0] * n
    for t in a.transitions:
        if t.letter != letter:
            continue
        i, j = idx.index[t.src], idx.index[t.dst]
        if t.dir == RIGHT:
            fwd[i] |= 1 << j
        else:
            back[i] |= 1 << j
    fwd_t, back_t = tuple(fwd), tuple(back)
    return Behaviour(ll=back_t, lr=fwd_t, rl=back_t, rr=fwd_t)


def word_behaviour(a: Nwa, word: Sequence[Letter], idx: StateIndex | None = None) -> Element:
    idx = idx or StateIndex(a)
    acc: Element = UNIT
    for letter in word:
        acc = behaviour_compose(acc, letter_behaviour(a, letter, idx))
    return acc


def behaviour_bruteforce(a: Nwa, word: Sequence[Letter], idx: StateIndex | None = None) -> Element:
    """Behaviour by reachability over configurations of ``word``; weights and
    children are ignored and runs need not be simple."""
    word = tuple(word)
    if not word:
        return UNIT
    idx = idx or StateIndex(a)
    n, m = len(idx), len(word)

    def reach(pos: int, state: State) -> set[tuple[int, State]]:
        seen = {(pos, state)}
        exits = set()
        todo = [(pos, state)]
        while todo:
            i, q = todo.pop()
            for t in a.moves(q, word[i - 1]):
                j = i + t.shift()
                if j == 0 or j == m + 1:
                    exits.add((j, t.dst))
                    continue
                if (j, t.dst) not in seen:
                    seen.add((j, t.dst))
                    todo.append((j, t.dst))
        return exits

    ll, lr, rl, rr = ([0] * n for _ in range(4))
    for p in idx.states:
        i = idx.index[p]
        for pos, q in reach(1, p):
            (ll if pos == 0 else lr)[i] |= 1 << idx.index[q]
        for pos, q in reach(m, p):
            (rl if pos == 0 else rr)[i] |= 1 << idx.index[q]
    return Behaviour(tuple(ll), tuple(lr), tuple(rl), tuple(rr))


def behaviour_pairs(b: Element, idx: StateIndex) -> dict[str, frozenset]:
    if b is UNIT:
        ident = frozenset((q, q) for q in idx.states)
        return {"ll": ident, "lr": ident, "rl": ident, "rr": ident}
    return {k: rel_pairs(getattr(b, k), idx.states) for k in ("ll", "lr", "rl", "rr")}


# -------------------------------------------------------------------- monoid


@dataclass
class TransitionMonoid:
    automaton: Nwa
    index: StateIndex
    generators: dict[Letter, Element]
    elements: list[Element]
    witness: dict[Element, tuple[Letter, ...]]
    table: dict[tuple[int, Letter], int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.elements)

    def position(self, e: Element) -> int:
        return self._pos[e]

    def __post_init__(self):
        self._pos = {e: i for i, e in enumerate(self.elements)}

    def element_of(self, word: Sequence[Letter]) -> Element:
        acc: Element = UNIT
        for letter in word:
            acc = behaviour_compose(acc, self.generators[letter])
        return acc


def build_transition_monoid(a: Nwa, budget: int | None = None, letters: Sequence[Letter] | None = None) -> TransitionMonoid:
    """Saturate the letter behaviours under composition, keeping for each
    element a shortest word that realises it."""
    cap = default_budget() if budget is None else budget
    idx = StateIndex(a)
    letters = list(a.letters() if letters is None else letters)
    gens = {x: letter_behaviour(a, x, idx) for x in letters}
    elements: list[Element] = [UNIT]
    witness: dict[Element, tuple[Letter, ...]] = {UNIT: ()}
    table: dict[tuple[int, Letter], int] = {}
    pos = {UNIT: 0}
    queue = deque([UNIT])
    while queue:
        e = queue.popleft()
        for x in letters:
            f = behaviour_compose(e, gens[x])
            if f not in pos:
                if len(elements) >= cap:
                    raise BudgetExceeded(
                        f"transition monoid of {a.name!r} exceeds {cap} elements (set WFOKIT_BUDGET)"
                    )
                pos[f] = len(elements)
                elements.append(f)
                witness[f] = witness[e] + (x,)
                queue.append(f)
            table[(pos[e], x)] = pos[f]
    return TransitionMonoid(a, idx, gens, elements, witness, table)


@dataclass
class AperiodicityReport:
    name: str
    aperiodic: bool
    index: int | None
    size: int
    witness: tuple[Letter, ...] | None = None
    period: int | None = None
    budget_exceeded: bool = False


def element_index(x: Element) -> tuple[int, int]:
    """(index, period) of the cyclic subsemigroup generated by ``x``."""
    seen: dict[Element, int] = {}
    power = x
    k = 1
    while power not in seen:
        seen[power] = k
        power = behaviour_compose(power, x)
        k += 1
    start = seen[power]
    return start, k - start


def monoid_aperiodicity(m: TransitionMonoid) -> AperiodicityReport:
    index = 1
    for e in m.elements:
        i, period = element_index(e)
        if period != 1:
            return AperiodicityReport(m.automaton.name, False, None, len(m), m.witness[e], period)
        index = max(index, i)
    return AperiodicityReport(m.automaton.name, True, index, len(m))


@dataclass
class NestAperiodicity:
    reports: list[AperiodicityReport]

    @property
    def aperiodic(self) -> bool:
        return all(r.aperiodic for r in self.reports)

    @property
    def index(self) -> int | None:
        if not self.aperiodic:
            return None
        return max(r.index for r in self.reports)

    @property
    def witness(self) -> AperiodicityReport | None:
        for r in self.reports:
            if not r.aperiodic:
                return r
        return None

    def format(self) -> str:
        lines = [f"aperiodic: {str(self.aperiodic).lower()}, index: {self.index if self.aperiodic else 'none'}"]
        for r in self.reports:
            if r.budget_exceeded:
                lines.append(f"{r.name}: budget exceeded")
            elif r.aperiodic:
                lines.append(f"{r.name}: elements {r.size}, index {r.index}")
            else:
                word = " ".join(format_letter(x) for x in r.witness) or "<eps>"
                lines.append(f"{r.name}: elements {r.size}, not aperiodic, witness {word}, period {r.period}")
        return "\n".join(lines) + "\n"


def is_aperiodic(a: Nwa, budget: int | None = None) -> NestAperiodicity:
    """Aperiodicity of the root and of every descendant."""
    reports = []
    for x in a.descendants():
        try:
            reports.append(monoid_aperiodicity(build_transition_monoid(x, budget)))
        except BudgetExceeded:
            reports.append(AperiodicityReport(x.name, False, None, 0, budget_exceeded=True))
    return NestAperiodicity(reports)


def monoid_dump(m: TransitionMonoid) -> str:
    """One line per element: number, shortest witness, and the four relations."""
    lines = [f"elements {len(m)}"]
    for i, e in enumerate(m.elements):
        word = " ".join(format_letter(x) for x in m.witness[e]) or "<eps>"
        if e is UNIT:
            lines.append(f"{i}\t{word}\tunit")
            continue
        parts = []
        for k in ("ll", "lr", "rl", "rr"):
            pairs = sorted(rel_pairs(getattr(e, k), m.index.states), key=repr)
            parts.append(k + "=" + "{" + ",".join(f"{p}>{q}" for p, q in pairs) + "}")
        lines.append(f"{i}\t{word}\t" + " ".join(parts))
    return "\n".join(lines) + "\n"
