"""Runs of nested two-way automata and their abstract semantics.

Positions follow the framed word ``⊢ u ⊣``: the left marker sits at 0, the
letters of ``u`` at 1..n and the right marker at n+1.  A run starts in an
initial state at any position, takes at least one transition, and accepts
when it stops in a final state.  Only simple runs (no repeated
configuration) contribute.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .multiset import MultisetSeries, ms_product, ms_sum
from .nwa import (
    LMARK,
    ONE,
    RMARK,
    Call,
    Const,
    Letter,
    Nwa,
    NwaError,
    State,
    Transition,
    base_letter,
    has_single_marks,
    make_letter,
    mark_position,
    marks_of,
)

Config = tuple[int, State]


def framed(u: Sequence[Letter]) -> tuple[Letter, ...]:
    return (LMARK, *u, RMARK)


# ------------------------------------------------------ configuration graph


@dataclass
class ConfigGraph:
    """The part of the configuration graph lying on some accepting path."""

    word: tuple[Letter, ...]
    starts: list[Config]
    succ: dict[Config, list[tuple[Transition, Config]]]
    finals: set[Config]
    nodes: set[Config]

    def topo_order(self) -> list[Config] | None:
        indeg = {c: 0 for c in self.nodes}
        for c in self.nodes:
            for _, d in self.succ.get(c, ()):
                indeg[d] += 1
        queue = deque(sorted((c for c, k in indeg.items() if k == 0), key=_config_key))
        order = []
        while queue:
            c = queue.popleft()
            order.append(c)
            for _, d in self.succ.get(c, ()):
                indeg[d] -= 1
                if indeg[d] == 0:
                    queue.append(d)
        return order if len(order) == len(self.nodes) else None

    def cycle_witness(self) -> list[Config] | None:
        """Some configuration cycle inside the useful part, or None."""
        color: dict[Config, int] = {}
        parent: dict[Config, Config] = {}
        for root in sorted(self.nodes, key=_config_key):
            if root in color:
                continue
            stack = [(root, iter(self.succ.get(root, ())))]
            color[root] = 1
            while stack:
                c, it = stack[-1]
                for _, d in it:
                    if color.get(d) == 1:
                        cyc = [d]
                        x = c
                        while x != d:
                            cyc.append(x)
                            x = parent[x]
                        return list(reversed(cyc))
                    if d not in color:
                        color[d] = 1
                        parent[d] = c
                        stack.append((d, iter(self.succ.get(d, ()))))
                        break
                else:
                    color[c] = 2
                    stack.pop()
        return None


def _config_key(c: Config) -> tuple:
    return (c[0], repr(c[1]))


def config_graph(a: Nwa, word: Sequence[Letter]) -> ConfigGraph:
    """Useful configurations of ``a`` over an already framed ``word``."""
    word = tuple(word)
    n = len(word)
    starts = [(i, q) for i in range(n) for q in sorted(a.initial, key=repr)]

    def succ_of(c: Config) -> list[tuple[Transition, Config]]:
        i, q = c
        out = []
        for t in a.moves(q, word[i]):
            j = i + t.shift()
            if 0 <= j < n:
                out.append((t, (j, t.dst)))
        return out

    reach: dict[Config, list[tuple[Transition, Config]]] = {}
    todo = list(starts)
    while todo:
        c = todo.pop()
        if c in reach:
            continue
        reach[c] = succ_of(c)
        todo.extend(d for _, d in reach[c] if d not in reach)

    pred: dict[Config, list[Config]] = {}
    for c, edges in reach.items():
        for _, d in edges:
            pred.setdefault(d, []).append(c)
    # an accepting end must be entered by at least one transition
    finals = {c for c in pred if c[1] in a.final}
    coreach = set()
    todo = list(finals)
    while todo:
        c = todo.pop()
        if c in coreach:
            continue
        coreach.add(c)
        todo.extend(pred.get(c, ()))
    succ = {c: [(t, d) for t, d in reach[c] if d in coreach] for c in coreach if c in reach}
    nodes = set(succ)
    for edges in succ.values():
        nodes.update(d for _, d in edges)
    useful_starts = [c for c in starts if c in nodes and succ.get(c)]
    return ConfigGraph(word, useful_starts, succ, finals & nodes, nodes)


# ---------------------------------------------------------------- evaluation


class Evaluator:
    """Abstract semantics with memoised child calls.

    Child results are keyed by the child object and the marked word, so one
    evaluator can be reused across many words and automata.
    """

    def __init__(self, check_marks: bool = False):
        self.cache: dict[tuple[int, tuple], MultisetSeries] = {}
        self._pin: dict[int, Nwa] = {}
        self.check_marks = check_marks

    def eval(self, a: Nwa, u: Sequence[Letter]) -> MultisetSeries:
        u = tuple(u)
        key = (id(a), u)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        if self.check_marks and not has_single_marks(u, a.depth):
            raise NwaError(f"word {u!r} is not well marked for depth {a.depth}")
        self._pin[id(a)] = a
        res = self._eval(a, u)
        self.cache[key] = res
        return res

    def weight(self, a: Nwa, t: Transition, u: tuple, pos: int) -> MultisetSeries:
        w = t.weight
        if w is ONE:
            return MultisetSeries.unit()
        if isinstance(w, Const):
            return MultisetSeries.single(w.symbol)
        return self.eval(a.child(w), mark_position(u, pos))

    def _eval(self, a: Nwa, u: tuple) -> MultisetSeries:
        g = config_graph(a, framed(u))
        if not g.starts:
            return MultisetSeries.empty()
        order = g.topo_order()
        if order is None:
            return ms_sum(self.run_weight(a, u, r) for r in _simple_paths(a, g))
        start_set = set(g.starts)
        acc: dict[Config, MultisetSeries] = {}
        unit = MultisetSeries.unit()
        for c in order:
            here = acc.get(c)
            if c in start_set:
                here = unit if here is None else here + unit
            if here is None or not here:
                continue
            for t, d in g.succ.get(c, ()):
                contrib = ms_product(here, self.weight(a, t, u, c[0]))
                if contrib:
                    acc[d] = acc[d] + contrib if d in acc else contrib
        return ms_sum(acc[c] for c in g.finals if c in acc)

    def run_weight(self, a: Nwa, u: tuple, run: "Run") -> MultisetSeries:
        return _weight_of(self, a, u, run)


def _weight_of(ev: Evaluator, a: Nwa, u: tuple, run: "Run") -> MultisetSeries:
    acc = MultisetSeries.unit()
    for t, pos in run.steps:
        acc = ms_product(acc, ev.weight(a, t, u, pos))
        if not acc:
            break
    return acc


def nwa_eval(a: Nwa, u: Sequence[Letter], evaluator: Evaluator | None = None) -> MultisetSeries:
    ev = evaluator or Evaluator()
    return ev.eval(a, tuple(u))


# ----------------------------------------------------------------- run lists


@dataclass(frozen=True)
class Run:
    """A run as its start configuration and the (transition, position) steps."""

    start: Config
    steps: tuple[tuple[Transition, int], ...]

    @property
    def end(self) -> Config:
        if not self.steps:
            return self.start
        t, pos = self.steps[-1]
        return (pos + t.shift(), t.dst)

    def configs(self) -> list[Config]:
        out = [self.start]
        for t, pos in self.steps:
            out.append((pos + t.shift(), t.dst))
        return out

    def transitions(self) -> tuple[Transition, ...]:
        return tuple(t for t, _ in self.steps)


def _simple_paths(a: Nwa, g: ConfigGraph) -> Iterator[Run]:
    for s in g.starts:
        on_path = {s}
        steps: list[tuple[Transition, int]] = []
        stack = [iter(g.succ.get(s, ()))]
        cur = [s]
        while stack:
            advanced = False
            for t, d in stack[-1]:
                if d in on_path:
                    continue
                steps.append((t, cur[-1][0]))
                if d in g.finals:
                    yield Run(s, tuple(steps))
                on_path.add(d)
                cur.append(d)
                stack.append(iter(g.succ.get(d, ())))
                advanced = True
                break
            if not advanced:
                stack.pop()
                if steps:
                    steps.pop()
                on_path.discard(cur.pop())


def enumerate_simple_runs(a: Nwa, u: Sequence[Letter], is_framed: bool = False) -> Iterator[Run]:
    """Every accepting simple run of the root of ``a`` on ``u`` exactly once."""
    word = tuple(u) if is_framed else framed(u)
    g = config_graph(a, word)
    yield from _simple_paths(a, g)


# ----------------------------------------------------------------- run trees

BULLET = "•"


@dataclass(frozen=True)
class RunTree:
    """Ordered tree of transitions.  ``label`` is a transition or the bullet
    marking the root of a run that is not the body of a call."""

    label: object
    children: tuple["RunTree", ...] = ()

    @property
    def root(self) -> object:
        return self.label

    def seq(self) -> tuple[object, ...]:
        return tuple(c.label for c in self.children)

    def at(self, path: Sequence[int]) -> "RunTree":
        node = self
        for i in path:
            node = node.children[i - 1]
        return node

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


def tree_concat(*trees: RunTree) -> RunTree:
    if not trees:
        raise ValueError("nothing to concatenate")
    root = trees[0].label
    kids: list[RunTree] = []
    for t in trees:
        if t.label != root:
            raise ValueError(f"root mismatch: {root!r} vs {t.label!r}")
        kids.extend(t.children)
    return RunTree(root, tuple(kids))


def _drop_last_track(letter: Letter) -> Letter:
    if letter in (LMARK, RMARK) or not isinstance(letter, tuple):
        return letter
    return make_letter(base_letter(letter), marks_of(letter)[:-1])


def lift(tree: RunTree) -> RunTree:
    """Replace the root by the bullet and drop the last mark track of the
    letters at the first level of the tree."""
    kids = []
    for c in tree.children:
        t = c.label
        if isinstance(t, Transition):
            t = t._replace(letter=_drop_last_track(t.letter))
        kids.append(RunTree(t, c.children))
    return RunTree(BULLET, tuple(kids))


def run_trees(a: Nwa, u: Sequence[Letter], label: object = BULLET) -> Iterator[RunTree]:
    """All accepting nested runs of ``a`` on ``u`` as trees."""
    u = tuple(u)
    for run in enumerate_simple_runs(a, u):
        options = []
        for t, pos in run.steps:
            if isinstance(t.weight, Call):
                options.append([RunTree(t, sub.children) for sub in run_trees(a.child(t.weight), mark_position(u, pos))])
            else:
                options.append([RunTree(t)])
        for combo in itertools.product(*options):
            yield RunTree(label, tuple(combo))


def tree_weight(tree: RunTree) -> MultisetSeries:
    """Weight sequence of a nested run tree (always a single sequence)."""
    seq: list[str] = []

    def walk(node: RunTree) -> None:
        for c in node.children:
            t = c.label
            if isinstance(t.weight, Const):
                seq.append(t.weight.symbol)
            elif isinstance(t.weight, Call):
                walk(c)

    walk(tree)
    return MultisetSeries.single(*seq)


def dump_tree(tree: RunTree, tag: Callable[[RunTree], str | None] | None = None, indent: int = 0) -> str:
    """Indented text form: one transition per line, optional tag in brackets."""
    from .nwa import format_transition

    lines = []
    label = tree.label if not isinstance(tree.label, Transition) else format_transition(tree.label)
    extra = tag(tree) if tag else None
    lines.append("  " * indent + str(label) + (f" [{extra}]" if extra else ""))
    for c in tree.children:
        lines.append(dump_tree(c, tag, indent + 1).rstrip("\n"))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ normalisation


def add_marker_loops(a: Nwa) -> Nwa:
    """Add weight-one self-loops on the end markers for every state: an
    initial state may then wait on the left marker and a final state may be
    reached on the right marker."""
    from .nwa import LEFT, RIGHT

    extra = []
    for q in a.states:
        extra.append(Transition(q, LMARK, ONE, RIGHT, q))
        extra.append(Transition(q, RMARK, ONE, LEFT, q))
    have = set(a.transitions)
    return a.replace(transitions=list(a.transitions) + [t for t in extra if t not in have])
