"""Two-way nested automata to sweeping ones.

An accepting run of an anchored automaton (start on the left marker, end by
a right-marker transition) is cut at the first visit of each position.  Between
the first visits of ``x`` and ``x+1`` the run either takes one right move or
makes an excursion over the prefix that ends with a right move at ``x``.  A
sweeping root replays the right moves and hands each excursion to a child
automaton called at ``x``.  The children are the same kind of object one
level deeper: a *component* is the automaton restricted to a fragment of the
word whose ends are pinned by mark tracks, started by a given transition at
its newest mark and stopped by a given exit transition.

Component kinds, named by where the run starts and leaves the fragment:

* ``rr``: starts with a left move at its right end, leaves on the right;
* ``rl``: starts there too, but leaves through the left end;
* ``ll``: starts with a right move at its left end and leaves on the left;
* ``lr``: starts there and leaves on the right (or through the final
  right-marker transition).

Unfolding stops at a fixed depth; components at that depth have no calls.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ..ambiguity import has_infinite_ambiguity
from ..monoid import UNIT, behaviour_compose, build_transition_monoid, unit_relations
from ..nwa import (
    LEFT,
    LMARK,
    ONE,
    RIGHT,
    RMARK,
    Call,
    Letter,
    Nwa,
    Transition,
    base_letter,
    demote,
    is_marker,
    make_letter,
    marks_of,
    sweeping_partition,
)
from ..runs import BULLET, RunTree

LM, RM = "lm", "rm"


class SweepError(ValueError):
    pass


class ComponentShapeError(SweepError):
    pass


# ---------------------------------------------------------------- anchoring


def is_anchored(a: Nwa) -> bool:
    if a.initial & a.final:
        return False
    for t in a.transitions:
        if t.dst in a.initial:
            return False
        if t.src in a.initial and t.letter != LMARK:
            return False
        if t.src in a.final:
            return False
        if t.dst in a.final and t.letter != RMARK:
            return False
    return True


def anchor(a: Nwa) -> Nwa:
    """Equivalent automaton whose runs start on the left marker and end with
    a right-marker transition.  A walker stands in for the free choice of
    start position and another one for the free choice of end position."""
    if is_anchored(a):
        return a
    start, walk, tail, stop = ("anchor", "start"), ("anchor", "walk"), ("anchor", "tail"), ("anchor", "stop")
    letters = a.letters()
    trans = [t for t in a.transitions]
    trans.append(Transition(start, LMARK, ONE, RIGHT, walk))
    for q in sorted(a.initial, key=repr):
        for t in a.moves(q, LMARK):
            trans.append(t._replace(src=start))
        for x in [*letters, RMARK]:
            for t in a.moves(q, x):
                trans.append(t._replace(src=walk))
    trans += [Transition(walk, x, ONE, RIGHT, walk) for x in letters]
    ends = [t._replace(dst=tail) for t in trans if t.dst in a.final]
    trans += ends
    trans += [Transition(tail, x, ONE, RIGHT, tail) for x in [LMARK, *letters]]
    trans.append(Transition(tail, RMARK, ONE, LEFT, stop))
    states = [start, walk, *a.states, tail, stop]
    return a.replace(states=states, initial={start}, final={stop}, transitions=trans)


# -------------------------------------------------------------- descriptors


@dataclass(frozen=True)
class Component:
    """A fragment of the run of the anchored source automaton.

    ``tracks`` is how many mark tracks the component reads on top of the
    source's own letters; the newest one (``tracks - 1``) pins the start.
    ``left``/``right`` are a track number or the end markers.  ``start`` is
    None for the whole run (start on the left marker) and ``end`` is None
    when the run leaves through any final right-marker transition.
    """

    tracks: int
    left: object
    right: object
    start: Transition | None
    end: Transition | None

    @property
    def kind(self) -> str:
        if self.start is None:
            return "top"
        first = "r" if self.start.dir == LEFT else "l"
        return first + self.end_side

    @property
    def end_side(self) -> str:
        if self.end is None or self.end.dir == RIGHT:
            return "r"
        return "l"


TOP = Component(0, LM, RM, None, None)


@dataclass(frozen=True)
class ComponentVector:
    """Sequence of entries, each a pair of transitions (an excursion that
    comes back) or a single transition (the final piece of a run)."""

    entries: tuple[tuple[Transition, ...], ...]
    polarity: int = 0

    def __len__(self) -> int:
        return len(self.entries)


def component_of(vector: ComponentVector) -> Component:
    """Descriptor reached by following the vector from the whole run."""
    if vector.polarity not in (0, 1):
        raise ComponentShapeError(f"polarity must be 0 or 1, got {vector.polarity}")
    comp = TOP
    for i, entry in enumerate(vector.entries, 1):
        comp = child_component(comp, entry, i)
    return comp


def child_component(parent: Component, entry: tuple[Transition, ...], position: int = 0) -> Component:
    k = parent.tracks
    if len(entry) == 2:
        first, last = entry
        if first.dir == last.dir:
            raise ComponentShapeError(f"entry {position}: an excursion must turn back (both moves go {first.dir})")
        if base_letter(first.letter) != base_letter(last.letter) or first.letter != last.letter:
            raise ComponentShapeError(f"entry {position}: an excursion starts and ends on the same letter")
        if first.dir == LEFT:
            return Component(k + 1, parent.left, k, first, last)
        return Component(k + 1, k, parent.right, first, last)
    if len(entry) == 1:
        (first,) = entry
        if first.dir == LEFT:
            if parent.end_side != "l":
                raise ComponentShapeError(f"entry {position}: a final left piece needs a parent leaving on the left")
            return Component(k + 1, parent.left, k, first, parent.end)
        if parent.end_side != "r":
            raise ComponentShapeError(f"entry {position}: a final right piece needs a parent leaving on the right")
        return Component(k + 1, k, parent.right, first, parent.end)
    raise ComponentShapeError(f"entry {position}: expected one or two transitions, got {len(entry)}")


def max_depth(num_states: int) -> int:
    return max(0, 2 * ((num_states + 1) // 2) - 2)


# ----------------------------------------------------------------- builder


@dataclass
class SweepResult:
    nwa: Nwa
    provenance: dict[str, dict[Transition, tuple]]
    components: dict[str, Component]
    source: Nwa
    depth_bound: int
    stages: list[Nwa] = field(default_factory=list)

    def flatten(self, tree: RunTree) -> RunTree:
        return flatten(tree, self.nwa, self.provenance)


class _Context:
    def __init__(self, a: Nwa, annotated: bool, depth_bound: int, prefix: str):
        self.a = a
        self.annotated = annotated
        self.bound = depth_bound
        self.prefix = prefix
        self.d = a.depth
        self.base_letters = a.letters()
        self.index = {t: i for i, t in enumerate(a.transitions)}
        self.provenance: dict[str, dict[Transition, tuple]] = {}
        self.components: dict[str, Component] = {}
        self.demoted: dict[int, dict[str, Nwa]] = {}
        self.right_on: dict[Letter, list[Transition]] = {}
        self.left_on: dict[Letter, list[Transition]] = {}
        for t in a.transitions:
            (self.right_on if t.dir == RIGHT else self.left_on).setdefault(t.letter, []).append(t)
        if annotated:
            m = build_transition_monoid(a, letters=[*self.base_letters, LMARK, RMARK])
            self.monoid = m
            self.gen = m.generators
            self.states_index = m.index
        else:
            self.monoid = None

    # -- naming -----------------------------------------------------------

    def name(self, comp: Component, swept: bool) -> str:
        def end(x):
            return "lm" if x == LM else "rm" if x == RM else f"t{x}"

        s = "i" if comp.start is None else str(self.index[comp.start])
        e = "f" if comp.end is None else str(self.index[comp.end])
        tag = "sw" if swept else "raw"
        return f"{self.prefix}{tag}{comp.tracks}_{comp.kind}_{end(comp.left)}_{end(comp.right)}_{s}_{e}"

    # -- letters ----------------------------------------------------------

    def letters(self, k: int) -> list[tuple[Letter, Letter, tuple[int, ...]]]:
        """(component letter, source letter, component bits) triples."""
        out = []
        for x in self.base_letters:
            for bits in itertools.product((0, 1), repeat=k):
                out.append((make_letter(base_letter(x), marks_of(x) + bits), x, bits))
        return out

    def weight(self, t: Transition, k: int):
        if isinstance(t.weight, Call):
            return Call(self.demoted_child(t.weight.child, k).name)
        return t.weight

    def demoted_child(self, cid: str, k: int) -> Nwa:
        table = self.demoted.setdefault(k, {})
        if cid not in table:
            table[cid] = demote(self.a.children[cid], k) if k else self.a.children[cid]
        return table[cid]

    @staticmethod
    def at(bound, bits: tuple[int, ...]) -> bool:
        return isinstance(bound, int) and bits[bound] == 1

    # -- the unswept component ----------------------------------------------

    def raw(self, comp: Component) -> tuple[Nwa, dict[Transition, tuple]]:
        a, k = self.a, comp.tracks
        s0, done = ("s0",), ("done",)
        trans: list[Transition] = []
        prov: dict[Transition, tuple] = {}
        kids: dict[str, Nwa] = {}

        def add(t: Transition, source: Transition) -> None:
            trans.append(t)
            prov[t] = ("move", source)
            if isinstance(t.weight, Call):
                kids[t.weight.child] = self.demoted_child(source.weight.child, k)

        for t in a.transitions:
            if t.src in a.initial:
                if comp.start is None:
                    add(Transition(s0, LMARK, t.weight, RIGHT, t.dst), t)
                continue
            if t.dst in a.final:
                if comp.end is None:
                    add(Transition(t.src, RMARK, t.weight, LEFT, done), t)
                continue
            if is_marker(t.letter):
                add(t, t)
                continue
            for letter, src, bits in self.letters(k):
                if src != t.letter:
                    continue
                w = self.weight(t, k)
                exit_ = (t.dir == RIGHT and self.at(comp.right, bits)) or (t.dir == LEFT and self.at(comp.left, bits))
                if exit_:
                    if t == comp.end:
                        add(Transition(t.src, letter, w, t.dir, done), t)
                    continue
                add(Transition(t.src, letter, w, t.dir, t.dst), t)
        if comp.start is not None:
            self._start_moves(comp, lambda st, letter, w, d, dst, src: add(Transition(s0, letter, w, d, dst), src), raw=True)
        states = [s0, *(q for q in a.states if q not in a.initial and q not in a.final), done]
        name = self.name(comp, swept=False)
        out = Nwa(name, a.base, self.d + k, states, {s0}, {done}, trans, kids, a.weights)
        self.components[name] = comp
        return out, prov

    def _start_moves(self, comp: Component, emit, raw: bool) -> None:
        t = comp.start
        k = comp.tracks
        for letter, src, bits in self.letters(k):
            if src != t.letter or bits[k - 1] != 1:
                continue
            w = self.weight(t, k)
            exit_ = (t.dir == RIGHT and self.at(comp.right, bits)) or (t.dir == LEFT and self.at(comp.left, bits))
            if exit_:
                if t == comp.end:
                    emit(("s0",), letter, w, t.dir, ("done",), t)
                continue
            if raw:
                emit(("s0",), letter, w, t.dir, t.dst, t)
            else:
                phase = "R" if t.dir == RIGHT else "L"
                emit(("s0",), letter, w, t.dir, (t.dst, phase, self.seed(src)), t)

    # -- annotations ------------------------------------------------------

    def seed(self, letter: Letter):
        return self.monoid.table[(0, letter)] if self.annotated else None

    def extend_right(self, cls, letter: Letter):
        return self.monoid.table[(cls, letter)] if self.annotated else None

    def extend_left(self, cls, letter: Letter):
        if not self.annotated:
            return None
        m = self.monoid
        return m.position(behaviour_compose(self.gen[letter], m.elements[cls]))

    def _rel(self, cls, which: str):
        e = self.monoid.elements[cls]
        b = unit_relations(len(self.states_index)) if e is UNIT else e
        return getattr(b, which)

    def _apply(self, rel, states: Iterable) -> set:
        idx = self.states_index
        out = set()
        for q in states:
            row = rel[idx.index[q]]
            j = 0
            while row:
                if row & 1:
                    out.add(idx.states[j])
                row >>= 1
                j += 1
        return out

    def _bounce(self, cls, first: Transition, inner: str, turn_dir: str) -> tuple[set, set]:
        """States found back at the call position, and states entering the
        segment, when an excursion starts with ``first``."""
        rel = self._rel(cls, inner)
        entering = {first.dst}
        at_pos: set = set()
        frontier = set(entering)
        while frontier:
            back = self._apply(rel, frontier) - at_pos
            at_pos |= back
            frontier = set()
            for q in back:
                for t in self.a.moves(q, first.letter):
                    if t.dir == turn_dir and t.dst not in entering:
                        entering.add(t.dst)
                        frontier.add(t.dst)
        return at_pos, entering

    def licensed(self, cls, first: Transition, last: Transition | None, to_end: bool) -> bool:
        if not self.annotated:
            return True
        if first.dir == LEFT:  # segment lies on the left of the call position
            at_pos, entering = self._bounce(cls, first, "rr", LEFT)
            if not to_end:
                return last.src in at_pos
            return last.dst in self._apply(self._rel(cls, "rl"), entering)
        at_pos, entering = self._bounce(cls, first, "ll", RIGHT)
        if not to_end:
            return last.src in at_pos
        if last is None:
            return True
        return last.dst in self._apply(self._rel(cls, "lr"), entering)

    # -- the swept component ----------------------------------------------

    def swept(self, comp: Component, child: Callable[[Component], Nwa | None]) -> tuple[Nwa, dict[Transition, tuple]]:
        a, k = self.a, comp.tracks
        calls_allowed = k < self.bound
        s0, done = ("s0",), ("done",)
        trans: list[Transition] = []
        prov: dict[Transition, tuple] = {}
        kids: dict[str, Nwa] = {}
        todo: list = []
        seen: set = set()

        def go(state):
            if state not in seen and state != done:
                seen.add(state)
                todo.append(state)

        def emit(src, letter, w, d, dst, source: Transition | None = None, sub: Component | None = None):
            t = Transition(src, letter, w, d, dst)
            trans.append(t)
            if sub is None:
                prov[t] = ("move", source)
                if isinstance(w, Call):
                    kids[w.child] = self.demoted_child(source.weight.child, k)
            else:
                prov[t] = ("call", sub)
            go(dst)

        def call(src, letter, sub: Component, d, dst):
            target = child(sub)
            if target is None:
                return
            kids[target.name] = target
            emit(src, letter, Call(target.name), d, dst, sub=sub)

        if comp.start is None:
            for t in a.transitions:
                if t.src in a.initial:
                    emit(s0, LMARK, t.weight, RIGHT, (t.dst, "R", self.seed(LMARK)), t)
        else:
            self._start_moves(comp, lambda st, letter, w, d, dst, src: emit(st, letter, w, d, dst, src), raw=False)

        letters = self.letters(k)
        while todo:
            state = todo.pop()
            p, phase, cls = state
            if phase == "R":
                if comp.right == RM:
                    for t in a.moves(p, RMARK):
                        if t.dst in a.final:
                            if comp.end is None:
                                emit(state, RMARK, t.weight, LEFT, done, t)
                        else:
                            emit(state, RMARK, t.weight, LEFT, (t.dst, "L", self.seed(RMARK)), t)
                for letter, src, bits in letters:
                    at_right = self.at(comp.right, bits)
                    for t in a.moves(p, src):
                        if t.dir == RIGHT:
                            if at_right:
                                if t == comp.end:
                                    emit(state, letter, self.weight(t, k), RIGHT, done, t)
                            else:
                                emit(state, letter, self.weight(t, k), RIGHT, (t.dst, "R", self.extend_right(cls, src)), t)
                            continue
                        if not calls_allowed:
                            continue
                        for back in self.right_on.get(src, ()):
                            if not self.licensed(cls, t, back, to_end=False):
                                continue
                            sub = Component(k + 1, comp.left, k, t, back)
                            if at_right:
                                if back == comp.end:
                                    call(state, letter, sub, RIGHT, done)
                            else:
                                call(state, letter, sub, RIGHT, (back.dst, "R", self.extend_right(cls, src)))
                        if comp.end_side == "l" and self.licensed(cls, t, comp.end, to_end=True):
                            call(state, letter, Component(k + 1, comp.left, k, t, comp.end), RIGHT, done)
            else:
                if comp.left == LM:
                    for t in a.moves(p, LMARK):
                        emit(state, LMARK, t.weight, RIGHT, (t.dst, "R", self.seed(LMARK)), t)
                for letter, src, bits in letters:
                    at_left = self.at(comp.left, bits)
                    for t in a.moves(p, src):
                        if t.dir == LEFT:
                            if at_left:
                                if t == comp.end:
                                    emit(state, letter, self.weight(t, k), LEFT, done, t)
                            else:
                                emit(state, letter, self.weight(t, k), LEFT, (t.dst, "L", self.extend_left(cls, src)), t)
                            continue
                        if not calls_allowed:
                            continue
                        for back in self.left_on.get(src, ()):
                            if not self.licensed(cls, t, back, to_end=False):
                                continue
                            sub = Component(k + 1, k, comp.right, t, back)
                            if at_left:
                                if back == comp.end:
                                    call(state, letter, sub, LEFT, done)
                            else:
                                call(state, letter, sub, LEFT, (back.dst, "L", self.extend_left(cls, src)))
                        if comp.end_side == "r" and self.licensed(cls, t, comp.end, to_end=True):
                            call(state, letter, Component(k + 1, k, comp.right, t, comp.end), LEFT, done)

        states = [s0, *sorted(seen - {s0}, key=repr), done]
        name = self.name(comp, swept=True)
        out = Nwa(name, a.base, self.d + k, states, {s0}, {done}, trans, kids, a.weights)
        self.components[name] = comp
        return out, prov


# ---------------------------------------------------------------- pruning


def _nonempty(root: Nwa) -> set[int]:
    """Automata of the nest whose final state is reachable from an initial
    one, counting a call edge only when its callee is itself non-empty."""
    nodes = root.descendants()
    alive: set[int] = set()
    changed = True
    while changed:
        changed = False
        for x in nodes:
            if id(x) in alive:
                continue
            succ: dict = {}
            for t in x.transitions:
                if isinstance(t.weight, Call) and id(x.children[t.weight.child]) not in alive:
                    continue
                succ.setdefault(t.src, []).append(t.dst)
            seen = set(x.initial)
            todo = list(seen)
            while todo:
                q = todo.pop()
                for r in succ.get(q, ()):
                    if r not in seen:
                        seen.add(r)
                        todo.append(r)
            if seen & x.final:
                alive.add(id(x))
                changed = True
    return alive


def _trim(x: Nwa, alive: set[int]) -> list[Transition]:
    """Transitions on some initial-to-final path, dropping dead calls."""
    keep = [t for t in x.transitions if not (isinstance(t.weight, Call) and id(x.children[t.weight.child]) not in alive)]
    fwd, bwd = {}, {}
    for t in keep:
        fwd.setdefault(t.src, []).append(t.dst)
        bwd.setdefault(t.dst, []).append(t.src)

    def closure(seeds, edges):
        seen = set(seeds)
        todo = list(seen)
        while todo:
            q = todo.pop()
            for r in edges.get(q, ()):
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return seen

    reach = closure(x.initial, fwd)
    coreach = closure(x.final, bwd)
    return [t for t in keep if t.src in reach and t.dst in coreach]


def prune(root: Nwa, provenance: dict[str, dict[Transition, tuple]] | None = None) -> Nwa:
    """Copy of the nest without dead calls, dead transitions and dead children."""
    alive = _nonempty(root)
    memo: dict[int, Nwa] = {}

    def rebuild(x: Nwa) -> Nwa:
        if id(x) in memo:
            return memo[id(x)]
        trans = _trim(x, alive) if id(x) in alive else []
        used = {t.weight.child for t in trans if isinstance(t.weight, Call)}
        kids = {cid: rebuild(x.children[cid]) for cid in sorted(used)}
        live_states = {q for t in trans for q in (t.src, t.dst)} | set(x.initial) | set(x.final)
        states = [q for q in x.states if q in live_states]
        out = Nwa(x.name, x.base, x.depth, states, x.initial, x.final, trans, kids, x.weights)
        memo[id(x)] = out
        return out

    return rebuild(root)


# ---------------------------------------------------------- public entries


def build_component(a: Nwa, b: int, v: ComponentVector | Sequence) -> Nwa:
    """The source automaton restricted to the component named by ``v``:
    a fresh start state replays the start transition at the newest mark and
    a fresh final state is entered by the exit transition."""
    vec = v if isinstance(v, ComponentVector) else ComponentVector(tuple(tuple(e) for e in v), b)
    comp = component_of(vec)
    src = anchor(a)
    if not vec.entries:
        return src
    ctx = _Context(src, False, max(len(vec.entries), max_depth(len(src.states))), "")
    out, _ = ctx.raw(comp)
    return out


def sweepify_component(
    a: Nwa, b: int, v: ComponentVector | Sequence, annotated: bool = False
) -> tuple[Nwa, dict[Transition, tuple]]:
    """Sweeping replacement of one component.  Its calls go to the unswept
    components one level deeper."""
    vec = v if isinstance(v, ComponentVector) else ComponentVector(tuple(tuple(e) for e in v), b)
    src = anchor(a)
    bound = max_depth(len(src.states))
    if len(vec.entries) > bound:
        raise SweepError(f"vector of length {len(vec.entries)} exceeds the bound 2*ceil(|Q|/2)-2 = {bound}")
    comp = component_of(vec)
    ctx = _Context(src, annotated, bound, "")
    cache: dict[Component, Nwa] = {}

    def child(sub: Component) -> Nwa:
        if sub not in cache:
            cache[sub], _ = ctx.raw(sub)
        return cache[sub]

    return ctx.swept(comp, child)


def _sweep_root(
    a: Nwa, annotated: bool, prefix: str, stages: list[Nwa] | None, bound: int | None
) -> tuple[Nwa, dict[str, dict[Transition, tuple]], dict[str, Component], int]:
    src = anchor(a)
    depth_bound = max_depth(len(src.states)) if bound is None else bound
    final_stage = depth_bound + 1
    stage_range = range(0, final_stage + 1) if stages is not None else [final_stage]
    result = None
    for stage in stage_range:
        ctx = _Context(src, annotated, depth_bound, prefix)
        registry: dict[Component, Nwa | None] = {}
        provenance: dict[str, dict[Transition, tuple]] = {}

        def make(comp: Component) -> Nwa | None:
            if comp in registry:
                return registry[comp]
            registry[comp] = None  # guards against re-entry
            if comp.tracks < stage:
                out, prov = ctx.swept(comp, make)
            else:
                out, prov = ctx.raw(comp)
            registry[comp] = out
            provenance[out.name] = prov
            return out

        root = prune(make(TOP))
        provenance[a.name] = provenance.pop(root.name)
        root.name = a.name
        if stages is not None:
            stages.append(root)
        result = (root, provenance, ctx.components, depth_bound)
    return result


def sw_transform(
    a: Nwa,
    annotated: bool = False,
    horizon: int = 4,
    bound: int | None = None,
    stages: list[Nwa] | None = None,
    check_ambiguity: bool = True,
) -> SweepResult:
    """Sweeping nest with the same semantics as ``a``.

    Children are transformed first and then demoted into place.  With
    ``stages`` given, the nest after each unfolding step is appended to it
    (stage 0 is the anchored source, the last one is the result).
    """
    if check_ambiguity:
        bad = has_infinite_ambiguity(a, horizon)
        if bad is not None:
            raise SweepError(f"automaton {bad[0]!r} has infinitely many runs on {bad[1]!r}: not polynomially ambiguous")
    done: dict[int, Nwa] = {}
    provenance: dict[str, dict[Transition, tuple]] = {}
    components: dict[str, Component] = {}
    def transform(x: Nwa, top: bool) -> Nwa:
        if id(x) in done:
            return done[id(x)]
        kids = {cid: transform(c, False) for cid, c in x.children.items()}
        renamed = {cid: kids[cid].name for cid in kids}
        trans = [
            t._replace(weight=Call(renamed[t.weight.child])) if isinstance(t.weight, Call) else t for t in x.transitions
        ]
        y = x.replace(transitions=trans, children={kids[c].name: kids[c] for c in kids})
        if sweeping_root(y):
            out = y
        else:
            prefix = "" if top else f"{x.name}_"
            out, prov, comps, _ = _sweep_root(y, annotated, prefix, stages if top else None, bound)
            provenance.update(prov)
            components.update(comps)
        done[id(x)] = out
        return out

    result = transform(a, True)
    depth_bound = max_depth(len(anchor(a).states)) if bound is None else bound
    return SweepResult(result, provenance, components, a, depth_bound, stages if stages is not None else [])


def sweeping_root(a: Nwa) -> bool:
    return sweeping_partition(a) is not None


# ----------------------------------------------------------------- flatten


def flatten(tree: RunTree, automaton: Nwa, provenance: dict[str, dict[Transition, tuple]]) -> RunTree:
    """Run of the source automaton that a run tree of the swept nest stands
    for.  Calls to components are spliced in place; every other node is
    replaced by the transition it was copied from.  Nodes of automata that
    were not produced by the construction are kept unchanged."""
    prov = provenance.get(automaton.name)
    out: list[RunTree] = []
    for node in tree.children:
        t = node.label
        if prov is None:
            out.append(node)
            continue
        tag = prov.get(t)
        if tag is None:
            raise SweepError(f"no provenance for {t} in {automaton.name!r}")
        if tag[0] == "call":
            out.extend(flatten(node, automaton.child(t.weight), provenance).children)
        else:
            out.append(RunTree(tag[1], node.children))
    return RunTree(BULLET, tuple(out))
