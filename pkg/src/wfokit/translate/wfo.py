"""Weighted formulas to sweeping nested automata, by induction on the formula.

Every automaton produced here is anchored: its initial states only read the
left marker and have no incoming transitions, and its final states are only
entered by a right-marker transition and have no outgoing ones.  That shape
is what lets the sequential constructions glue automata together.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from ..logic import (
    Cond,
    One,
    Plus,
    ProdLR,
    ProdRL,
    Sum,
    Times,
    Weight,
    WfoFormula,
    Zero,
    classify_fragment,
    free_vars,
    weights_of,
)
from ..nwa import (
    LEFT,
    LMARK,
    ONE,
    RIGHT,
    RMARK,
    Call,
    Const,
    Nwa,
    Transition,
    alphabet_letters,
)
from .fo import Dfa, fo_to_dfa, minimize


class TranslationError(ValueError):
    pass


@dataclass
class _Builder:
    base: tuple[str, ...]
    weights: tuple[str, ...]
    one_way: bool
    counter: itertools.count = field(default_factory=itertools.count)

    def fresh(self) -> int:
        return next(self.counter)

    def make(self, depth, states, initial, final, trans, children) -> Nwa:
        uid = self.fresh()
        used = {t.weight.child for t in trans if isinstance(t.weight, Call)}
        kids = {k: v for k, v in children.items() if k in used}
        return Nwa(f"n{uid}", self.base, depth, states, initial, final, trans, kids, self.weights)

    # -- leaves -----------------------------------------------------------

    def constant(self, depth: int, weight) -> Nwa:
        u = self.fresh()
        i, s, f = (u, "i"), (u, "s"), (u, "f")
        trans = [Transition(i, LMARK, weight, RIGHT, s)]
        trans += [Transition(s, x, ONE, RIGHT, s) for x in alphabet_letters(self.base, depth)]
        trans.append(Transition(s, RMARK, ONE, LEFT, f))
        return self.make(depth, [i, s, f], {i}, {f}, trans, {})

    def zero(self, depth: int) -> Nwa:
        u = self.fresh()
        return self.make(depth, [(u, "i"), (u, "f")], {(u, "i")}, {(u, "f")}, [], {})

    # -- connectives ------------------------------------------------------

    def plus(self, a1: Nwa, a2: Nwa) -> Nwa:
        return self.make(
            a1.depth,
            [*a1.states, *a2.states],
            a1.initial | a2.initial,
            a1.final | a2.final,
            [*a1.transitions, *a2.transitions],
            {**a1.children, **a2.children},
        )

    def _walk_back_into(self, depth: int, walker, targets: Sequence[Nwa]) -> list[Transition]:
        """A left-moving walker that, on the left marker, behaves like the
        initial transitions of each target."""
        trans = [Transition(walker, x, ONE, LEFT, walker) for x in alphabet_letters(self.base, depth)]
        for tgt in targets:
            for t in tgt.transitions:
                if t.src in tgt.initial:
                    trans.append(Transition(walker, LMARK, t.weight, RIGHT, t.dst))
        return trans

    @staticmethod
    def _body(a: Nwa) -> list[Transition]:
        return [t for t in a.transitions if t.src not in a.initial]

    def times(self, a1: Nwa, a2: Nwa) -> Nwa:
        u = self.fresh()
        walker = (u, "back")
        trans = []
        for t in a1.transitions:
            if t.dst in a1.final:
                trans.append(t._replace(dst=walker))
            else:
                trans.append(t)
        trans += self._walk_back_into(a1.depth, walker, [a2])
        trans += self._body(a2)
        states = [*a1.states, walker, *(q for q in a2.states if q not in a2.initial)]
        states = [q for q in states if q not in a1.final]
        return self.make(a1.depth, states, a1.initial, a2.final, trans, {**a1.children, **a2.children})

    def cond(self, dfa: Dfa, a1: Nwa, a2: Nwa) -> Nwa:
        if self.one_way:
            return self._cond_product(dfa, a1, a2)
        depth = a1.depth
        u = self.fresh()
        i, yes, no = (u, "i"), (u, "yes"), (u, "no")
        scan = {s: (u, "scan", s) for s in range(dfa.size)}
        trans = [Transition(i, LMARK, ONE, RIGHT, scan[dfa.start])]
        for s, row in enumerate(dfa.delta):
            for x in dfa.letters:
                trans.append(Transition(scan[s], x, ONE, RIGHT, scan[row[x]]))
            trans.append(Transition(scan[s], RMARK, ONE, LEFT, yes if s in dfa.accepting else no))
        trans += self._walk_back_into(depth, yes, [a1])
        trans += self._walk_back_into(depth, no, [a2])
        trans += self._body(a1) + self._body(a2)
        states = [i, *scan.values(), yes, no]
        states += [q for q in a1.states if q not in a1.initial]
        states += [q for q in a2.states if q not in a2.initial]
        return self.make(depth, states, {i}, a1.final | a2.final, trans, {**a1.children, **a2.children})

    def _cond_product(self, dfa: Dfa, a1: Nwa, a2: Nwa) -> Nwa:
        """Left-to-right conditional: run the guard automaton in lockstep
        with one branch and check the guard when leaving on the right marker."""
        depth = a1.depth
        u = self.fresh()
        i, f = (u, "i"), (u, "f")
        trans = []
        states = {i, f}
        for tag, branch, want in (("then", a1, True), ("else", a2, False)):
            def st(d, q, tag=tag):
                return (u, tag, d, q)

            todo = []
            for t in branch.transitions:
                if t.src in branch.initial:
                    trans.append(Transition(i, LMARK, t.weight, RIGHT, st(dfa.start, t.dst)))
                    todo.append((dfa.start, t.dst))
            seen = set()
            while todo:
                d, q = todo.pop()
                if (d, q) in seen:
                    continue
                seen.add((d, q))
                states.add(st(d, q))
                for x in [*dfa.letters, RMARK]:
                    for t in branch.moves(q, x):
                        if x == RMARK:
                            if t.dir != LEFT or t.dst not in branch.final:
                                raise TranslationError("branch is not left-to-right")
                            if (d in dfa.accepting) == want:
                                trans.append(Transition(st(d, q), RMARK, t.weight, LEFT, f))
                            continue
                        if t.dir != RIGHT:
                            raise TranslationError("branch is not left-to-right")
                        nd = dfa.delta[d][x]
                        trans.append(Transition(st(d, q), x, t.weight, RIGHT, st(nd, t.dst)))
                        todo.append((nd, t.dst))
        return self.make(depth, sorted(states, key=repr), {i}, {f}, trans, {**a1.children, **a2.children})

    def sum(self, depth: int, child: Nwa) -> Nwa:
        u = self.fresh()
        i, s, t_, f = (u, "i"), (u, "before"), (u, "after"), (u, "f")
        letters = alphabet_letters(self.base, depth)
        trans = [Transition(i, LMARK, ONE, RIGHT, s)]
        for x in letters:
            trans.append(Transition(s, x, ONE, RIGHT, s))
            trans.append(Transition(s, x, Call(child.name), RIGHT, t_))
            trans.append(Transition(t_, x, ONE, RIGHT, t_))
        trans.append(Transition(t_, RMARK, ONE, LEFT, f))
        return self.make(depth, [i, s, t_, f], {i}, {f}, trans, {child.name: child})

    def prod_lr(self, depth: int, child: Nwa) -> Nwa:
        u = self.fresh()
        i, s, f = (u, "i"), (u, "scan"), (u, "f")
        trans = [Transition(i, LMARK, ONE, RIGHT, s)]
        trans += [Transition(s, x, Call(child.name), RIGHT, s) for x in alphabet_letters(self.base, depth)]
        trans.append(Transition(s, RMARK, ONE, LEFT, f))
        return self.make(depth, [i, s, f], {i}, {f}, trans, {child.name: child})

    def prod_rl(self, depth: int, child: Nwa) -> Nwa:
        u = self.fresh()
        i, go, back, out, f = (u, "i"), (u, "go"), (u, "back"), (u, "out"), (u, "f")
        letters = alphabet_letters(self.base, depth)
        trans = [Transition(i, LMARK, ONE, RIGHT, go)]
        trans += [Transition(go, x, ONE, RIGHT, go) for x in letters]
        trans.append(Transition(go, RMARK, ONE, LEFT, back))
        trans += [Transition(back, x, Call(child.name), LEFT, back) for x in letters]
        trans.append(Transition(back, LMARK, ONE, RIGHT, out))
        trans += [Transition(out, x, ONE, RIGHT, out) for x in letters]
        trans.append(Transition(out, RMARK, ONE, LEFT, f))
        return self.make(depth, [i, go, back, out, f], {i}, {f}, trans, {child.name: child})

    # -- induction --------------------------------------------------------

    def build(self, phi: WfoFormula, tracks: list[str]) -> Nwa:
        depth = len(tracks)
        if isinstance(phi, Zero):
            return self.zero(depth)
        if isinstance(phi, One):
            return self.constant(depth, ONE)
        if isinstance(phi, Weight):
            return self.constant(depth, Const(phi.symbol))
        if isinstance(phi, Plus):
            return self.plus(self.build(phi.left, tracks), self.build(phi.right, tracks))
        if isinstance(phi, Times):
            if self.one_way:
                raise TranslationError("binary product has no left-to-right construction")
            return self.times(self.build(phi.left, tracks), self.build(phi.right, tracks))
        if isinstance(phi, Cond):
            dfa = minimize(fo_to_dfa(phi.guard, self.base, tracks))
            return self.cond(dfa, self.build(phi.then, tracks), self.build(phi.orelse, tracks))
        if isinstance(phi, (Sum, ProdLR, ProdRL)):
            child = self.build(phi.body, tracks + [phi.var])
            if isinstance(phi, Sum):
                return self.sum(depth, child)
            if isinstance(phi, ProdLR):
                return self.prod_lr(depth, child)
            if self.one_way:
                raise TranslationError("right-to-left product has no left-to-right construction")
            return self.prod_rl(depth, child)
        raise TypeError(f"not a weighted formula: {phi!r}")


def wfo_to_sweeping(phi: WfoFormula, base: Sequence[str], mode: str = "two-way", weights: Sequence[str] = ()) -> Nwa:
    """Nested automaton with the same abstract semantics as the sentence ``phi``.

    ``mode`` is ``"two-way"`` (sweeping result) or ``"one-way"`` (left to
    right except for the final turn on the right marker; needs a formula
    without binary product and without right-to-left product).
    """
    if free_vars(phi):
        raise TranslationError(f"free variables {sorted(free_vars(phi))} at top level")
    if mode not in ("two-way", "one-way"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "one-way" and "lrWFO" not in classify_fragment(phi):
        raise TranslationError("one-way mode needs a formula without '.' and without prodR")
    ws = tuple(weights) or tuple(sorted(weights_of(phi)))
    b = _Builder(tuple(base), ws, mode == "one-way")
    out = b.build(phi, [])
    out.name = "root"
    return out
