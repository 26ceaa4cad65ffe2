"""Nested two-way weighted automata: data model and structural operations.

Letters of an automaton at marking depth ``d`` are plain strings when
``d == 0`` and tuples ``(a, b1, ..., bd)`` otherwise.  The end markers are
the strings :data:`LMARK` and :data:`RMARK` at every depth.

A transition carries one of three weights: :class:`Const`, :data:`ONE`, or a
:class:`Call` naming a child automaton.  Children are held by reference in
``Nwa.children`` so that one child may serve several parents.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

LMARK = "⊢"
RMARK = "⊣"
MARKERS = (LMARK, RMARK)

RIGHT = "R"
LEFT = "L"

State = Hashable
Letter = Hashable


class NwaError(ValueError):
    pass


@dataclass(frozen=True)
class Const:
    symbol: str

    def __str__(self) -> str:
        return f"k:{self.symbol}"


@dataclass(frozen=True)
class _Unit:
    def __str__(self) -> str:
        return "one"


ONE = _Unit()


@dataclass(frozen=True)
class Call:
    child: str

    def __str__(self) -> str:
        return f"call:{self.child}"


Weight = Const | _Unit | Call


class Transition(NamedTuple):
    src: State
    letter: Letter
    weight: Weight
    dir: str
    dst: State

    def shift(self) -> int:
        return 1 if self.dir == RIGHT else -1


@dataclass(eq=False)
class Nwa:
    """One automaton of a nest.  Equality is identity; compare with
    :func:`same_structure` when a structural check is wanted."""

    name: str
    base: tuple[str, ...]
    depth: int
    states: tuple[State, ...]
    initial: frozenset
    final: frozenset
    transitions: tuple[Transition, ...]
    children: dict[str, "Nwa"] = field(default_factory=dict)
    weights: tuple[str, ...] = ()
    declared_level: int | None = None
    _index: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        self.states = tuple(self.states)
        self.initial = frozenset(self.initial)
        self.final = frozenset(self.final)
        self.transitions = tuple(self.transitions)

    __hash__ = object.__hash__

    @property
    def level(self) -> int:
        if not self.children:
            return 0
        return 1 + max(c.level for c in self.children.values())

    def letters(self) -> list[Letter]:
        return alphabet_letters(self.base, self.depth)

    def moves(self, state: State, letter: Letter) -> list[Transition]:
        if self._index is None:
            idx: dict = {}
            for t in self.transitions:
                idx.setdefault((t.src, t.letter), []).append(t)
            self._index = idx
        return self._index.get((state, letter), [])

    def child(self, weight: Weight) -> "Nwa":
        return self.children[weight.child]

    def replace(self, **changes) -> "Nwa":
        data = dict(
            name=self.name,
            base=self.base,
            depth=self.depth,
            states=self.states,
            initial=self.initial,
            final=self.final,
            transitions=self.transitions,
            children=dict(self.children),
            weights=self.weights,
        )
        data.update(changes)
        if "transitions" in changes and "children" not in changes:
            used = {t.weight.child for t in data["transitions"] if isinstance(t.weight, Call)}
            data["children"] = {k: v for k, v in data["children"].items() if k in used}
        return Nwa(**data)

    def descendants(self) -> list["Nwa"]:
        """The automaton itself followed by every descendant, each once."""
        seen: dict[int, Nwa] = {}
        order: list[Nwa] = []
        stack = [self]
        while stack:
            a = stack.pop()
            if id(a) in seen:
                continue
            seen[id(a)] = a
            order.append(a)
            for cid in sorted(a.children, reverse=True):
                stack.append(a.children[cid])
        return order

    def __repr__(self) -> str:
        return (
            f"Nwa({self.name!r}, level={self.level}, depth={self.depth}, "
            f"|Q|={len(self.states)}, |Δ|={len(self.transitions)})"
        )


def alphabet_letters(base: Sequence[str], depth: int) -> list[Letter]:
    if depth == 0:
        return list(base)
    return [(a,) + bits for a in base for bits in itertools.product((0, 1), repeat=depth)]


def base_letter(letter: Letter) -> str:
    return letter[0] if isinstance(letter, tuple) else letter


def marks_of(letter: Letter) -> tuple[int, ...]:
    return tuple(letter[1:]) if isinstance(letter, tuple) else ()


def make_letter(a: str, marks: Sequence[int]) -> Letter:
    return (a, *marks) if marks else a


def is_marker(letter: Letter) -> bool:
    return letter in MARKERS


# ------------------------------------------------------------------ validation


def validate(a: Nwa) -> list[str]:
    """Every structural violation found in the nest, as readable strings."""
    problems: list[str] = []
    _validate(a, problems, set(), [])
    return problems


def _validate(a: Nwa, problems: list[str], done: set[int], path: list[int]) -> None:
    if id(a) in path:
        problems.append(f"cycle: automaton {a.name!r} is its own descendant")
        return
    if id(a) in done:
        return
    if a.declared_level is not None and a.level > a.declared_level:
        problems.append(f"level mismatch: {a.name!r} declares level {a.declared_level}, its calls need {a.level}")
    states = set(a.states)
    letters = set(a.letters())
    for q in a.initial | a.final:
        if q not in states:
            problems.append(f"unknown state: {q!r} in initial/final of {a.name!r}")
    for t in a.transitions:
        where = f"{a.name!r}: {format_transition(t)}"
        if t.src not in states or t.dst not in states:
            problems.append(f"unknown state: {where}")
        if t.dir not in (LEFT, RIGHT):
            problems.append(f"bad direction: {where}")
        if t.letter == LMARK and t.dir != RIGHT:
            problems.append(f"marker direction: {where}")
        elif t.letter == RMARK and t.dir != LEFT:
            problems.append(f"marker direction: {where}")
        elif not is_marker(t.letter) and t.letter not in letters:
            problems.append(f"unknown letter: {where}")
        if isinstance(t.weight, Call):
            if is_marker(t.letter):
                problems.append(f"call on marker: {where}")
            child = a.children.get(t.weight.child)
            if child is None:
                problems.append(f"missing child: {where}")
                continue
            parent_level = a.level if a.declared_level is None else a.declared_level
            child_level = child.level if child.declared_level is None else child.declared_level
            if child_level > parent_level - 1:
                problems.append(f"level mismatch: child {child.name!r} has level {child_level}, parent {parent_level}")
            if child.depth != a.depth + 1:
                problems.append(f"depth mismatch: child {child.name!r} has depth {child.depth}, parent {a.depth}")
            if child.base != a.base:
                problems.append(f"alphabet mismatch: child {child.name!r}")
        elif isinstance(t.weight, Const) and a.weights and t.weight.symbol not in a.weights:
            problems.append(f"undeclared weight: {where}")
    path.append(id(a))
    for c in a.children.values():
        _validate(c, problems, done, path)
    path.pop()
    done.add(id(a))


def check_level_shape(a: Nwa, level: int) -> list[str]:
    """Violations of a declared nesting level."""
    out = []
    if a.level != level:
        out.append(f"level mismatch: {a.name!r} declared {level}, has {a.level}")
    return out


# ---------------------------------------------------------- navigation checks


def is_one_way(a: Nwa) -> str:
    dirs = {t.dir for x in a.descendants() for t in x.transitions}
    if dirs <= {RIGHT}:
        return "left-to-right"
    if dirs <= {LEFT}:
        return "right-to-left"
    return "no"


def is_one_way_until_exit(a: Nwa) -> bool:
    """Left-to-right everywhere except final turns on the right marker into
    states with no outgoing transitions."""
    for x in a.descendants():
        sources = {t.src for t in x.transitions}
        for t in x.transitions:
            if t.dir == LEFT and not (t.letter == RMARK and t.dst not in sources):
                return False
    return True


def sweeping_partition(a: Nwa) -> dict[State, str] | None:
    """Phase assignment for the root alone, or None if none exists."""
    phase: dict[State, str] = {}
    # a state without outgoing transitions never turns, so arriving there
    # constrains nothing
    sources = {t.src for t in a.transitions}

    def assign(q: State, d: str) -> bool:
        if phase.setdefault(q, d) != d:
            return False
        return True

    for t in a.transitions:
        if t.dst in sources and not assign(t.dst, t.dir):
            return None
        if not is_marker(t.letter) and not assign(t.src, t.dir):
            return None
    for q in a.states:
        phase.setdefault(q, RIGHT)
    return phase


def is_sweeping(a: Nwa) -> dict[str, dict[State, str]] | None:
    """Witness partitions for the whole nest, keyed by automaton name."""
    out: dict[str, dict[State, str]] = {}
    for x in a.descendants():
        part = sweeping_partition(x)
        if part is None:
            return None
        out[x.name] = part
    return out


def projection_lr(a: Nwa) -> Nwa:
    return a.replace(transitions=[t for t in a.transitions if t.dir == RIGHT])


def projection_rl(a: Nwa) -> Nwa:
    return a.replace(transitions=[t for t in a.transitions if t.dir == LEFT])


def with_ends(a: Nwa, initial: Iterable[State], final: Iterable[State]) -> Nwa:
    return a.replace(initial=frozenset(initial), final=frozenset(final))


# ------------------------------------------------------------------ demotion


def demote(a: Nwa, times: int = 1, _memo: dict | None = None) -> Nwa:
    """Insert ``times`` ignored tracks just before the last mark track."""
    if times == 0:
        return a
    if a.depth < 1:
        raise NwaError(f"cannot demote {a.name!r}: it reads unmarked letters")
    memo = {} if _memo is None else _memo
    key = (id(a), times)
    if key in memo:
        return memo[key]
    kids = {cid: demote(c, times, memo) for cid, c in a.children.items()}
    renamed = {cid: kids[cid].name for cid in kids}
    trans = []
    for t in a.transitions:
        w = Call(renamed[t.weight.child]) if isinstance(t.weight, Call) else t.weight
        if is_marker(t.letter):
            trans.append(t._replace(weight=w))
            continue
        a0, marks = base_letter(t.letter), marks_of(t.letter)
        for extra in itertools.product((0, 1), repeat=times):
            letter = make_letter(a0, marks[:-1] + extra + marks[-1:])
            trans.append(Transition(t.src, letter, w, t.dir, t.dst))
    out = Nwa(
        name=f"dem{times}({a.name})",
        base=a.base,
        depth=a.depth + times,
        states=a.states,
        initial=a.initial,
        final=a.final,
        transitions=trans,
        children={kids[cid].name: kids[cid] for cid in kids},
        weights=a.weights,
    )
    memo[key] = out
    return out


def mark_position(u: Sequence[Letter], i: int) -> tuple[Letter, ...]:
    """Append a track that is 1 exactly at the 1-based position ``i``."""
    if not 1 <= i <= len(u):
        raise NwaError(f"position {i} outside a word of length {len(u)}")
    out = []
    for j, letter in enumerate(u, 1):
        if is_marker(letter):
            raise NwaError(f"cannot mark the end marker at position {j}")
        bit = 1 if j == i else 0
        out.append(make_letter(base_letter(letter), marks_of(letter) + (bit,)))
    return tuple(out)


def unmark_last(u: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple(make_letter(base_letter(x), marks_of(x)[:-1]) for x in u)


def has_single_marks(u: Sequence[Letter], depth: int) -> bool:
    for track in range(depth):
        if sum(marks_of(x)[track] for x in u) != 1:
            return False
    return True


def marked_words(base: Sequence[str], depth: int, length: int) -> Iterator[tuple[Letter, ...]]:
    """All words of the given length whose ``depth`` tracks each hold one mark."""
    if depth and length == 0:
        return
    for letters in itertools.product(base, repeat=length):
        for marks in itertools.product(range(length), repeat=depth):
            yield tuple(
                make_letter(a, tuple(1 if m == j else 0 for m in marks)) for j, a in enumerate(letters)
            )


# ------------------------------------------------------- dangling-edge forms


def from_dangling(
    name: str,
    base: tuple[str, ...],
    depth: int,
    states: Iterable[State],
    transitions: Iterable[Transition],
    entries: Iterable[tuple[Letter, Weight, str, State]],
    exits: Iterable[tuple[State, Letter, Weight, str]],
    children: Mapping[str, Nwa] | None = None,
    weights: tuple[str, ...] = (),
    init_name: State = "in",
    final_name: State = "out",
) -> Nwa:
    """Turn dangling entry/exit edges into classical initial/final states."""
    trans = list(transitions)
    for letter, w, d, q in entries:
        trans.append(Transition(init_name, letter, w, d, q))
    for p, letter, w, d in exits:
        trans.append(Transition(p, letter, w, d, final_name))
    sts = list(dict.fromkeys([init_name, *states, final_name]))
    used = {t.weight.child for t in trans if isinstance(t.weight, Call)}
    kids = {k: v for k, v in (children or {}).items() if k in used}
    return Nwa(name, base, depth, sts, {init_name}, {final_name}, trans, kids, weights)


# ------------------------------------------------------------- text format

_LETTER_OUT = {LMARK: "|-", RMARK: "-|"}
_LETTER_IN = {"|-": LMARK, "-|": RMARK, "⊢": LMARK, "⊣": RMARK}


def format_letter(letter: Letter) -> str:
    if letter in _LETTER_OUT:
        return _LETTER_OUT[letter]
    if isinstance(letter, tuple):
        return "(" + ",".join(str(x) for x in letter) + ")"
    return str(letter)


def format_transition(t: Transition) -> str:
    return f"{t.src} -> {t.dst} : {format_letter(t.letter)} , {t.weight} , {t.dir}"


def canonical(a: Nwa) -> Nwa:
    """Rename states to q0, q1, ... and children to c0, c1, ... in a fixed order."""
    order = a.descendants()
    child_names = {x.name: ("root" if x is a else f"c{i}") for i, x in enumerate(order)}
    built: dict[int, Nwa] = {}

    def rebuild(x: Nwa) -> Nwa:
        if id(x) in built:
            return built[id(x)]
        kids = {child_names[c.name]: rebuild(c) for c in x.children.values()}
        ordered = sorted(x.states, key=_state_key)
        ren = {q: f"q{i}" for i, q in enumerate(ordered)}
        trans = []
        for t in x.transitions:
            w = Call(child_names[x.children[t.weight.child].name]) if isinstance(t.weight, Call) else t.weight
            trans.append(Transition(ren[t.src], t.letter, w, t.dir, ren[t.dst]))
        trans.sort(key=lambda t: (int(t.src[1:]), int(t.dst[1:]), _letter_key(t.letter), str(t.weight), t.dir))
        out = Nwa(
            child_names[x.name],
            x.base,
            x.depth,
            [ren[q] for q in ordered],
            {ren[q] for q in x.initial},
            {ren[q] for q in x.final},
            trans,
            kids,
            x.weights,
        )
        built[id(x)] = out
        return out

    return rebuild(a)


def _state_key(q: State) -> str:
    return repr(q)


def _letter_key(letter: Letter) -> tuple:
    if letter == LMARK:
        return (0, "")
    if letter == RMARK:
        return (2, "")
    return (1, format_letter(letter))


def _block(x: Nwa, header: str) -> list[str]:
    lines = [header]
    lines.append(f"level {x.level}")
    lines.append(f"depth {x.depth}")
    lines.append(f"alphabet {' '.join(x.base)}")
    if x.weights:
        lines.append(f"weights {' '.join(x.weights)}")
    lines.append(f"states {' '.join(str(q) for q in x.states)}")
    lines.append(f"initial {' '.join(sorted(str(q) for q in x.initial))}")
    lines.append(f"final {' '.join(sorted(str(q) for q in x.final))}")
    for t in x.transitions:
        lines.append(format_transition(t))
    return lines


def dump_nwa(a: Nwa, rename: bool = True) -> str:
    """Text form of a nest: the root block followed by one block per descendant."""
    x = canonical(a) if rename else a
    lines = _block(x, f"# nwa {x.name}")
    for d in x.descendants()[1:]:
        lines.append("")
        lines.append(f"child {d.name} {{")
        lines.extend("  " + ln for ln in _block(d, f"# child {d.name}")[1:])
        lines.append("}")
    return "\n".join(lines) + "\n"


_TRANS_RE = re.compile(r"^(\S+)\s*->\s*(\S+)\s*:\s*(.+?)\s*,\s*(\S+)\s*,\s*([LR])\s*$")


def _parse_letter(text: str, base: Sequence[str]) -> list[Letter]:
    text = text.strip()
    if text in _LETTER_IN:
        return [_LETTER_IN[text]]
    if text.startswith("("):
        if not text.endswith(")"):
            raise NwaError(f"bad letter {text!r}")
        parts = [p.strip() for p in text[1:-1].split(",")]
        heads = list(base) if parts[0] in ("_", "A") and parts[0] not in base else [parts[0]]
        marks = []
        for p in parts[1:]:
            if p not in ("0", "1"):
                raise NwaError(f"bad mark {p!r} in letter {text!r}")
            marks.append(int(p))
        return [make_letter(h, marks) for h in heads]
    if text in ("_", "A") and text not in base:
        return list(base)
    return [text]


def _parse_weight(text: str) -> Weight:
    text = text.strip()
    if text == "one":
        return ONE
    if text.startswith("k:"):
        return Const(text[2:])
    if text.startswith("call:"):
        return Call(text[5:])
    raise NwaError(f"bad weight {text!r}")


@dataclass
class _RawBlock:
    name: str
    fields: dict[str, list[str]] = field(default_factory=dict)
    transitions: list[tuple[int, str]] = field(default_factory=list)


def parse_nwa(text: str) -> Nwa:
    blocks: list[_RawBlock] = [_RawBlock("root")]
    current = blocks[0]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("child ") and line.endswith("{"):
            if current is not blocks[0]:
                raise NwaError(f"line {lineno}: child blocks cannot be nested")
            current = _RawBlock(line[len("child ") : -1].strip())
            blocks.append(current)
            continue
        if line == "}":
            if current is blocks[0]:
                raise NwaError(f"line {lineno}: unmatched '}}'")
            current = blocks[0]
            continue
        if "->" in line:
            current.transitions.append((lineno, line))
            continue
        key, _, rest = line.partition(" ")
        if key not in ("level", "depth", "alphabet", "weights", "states", "initial", "final", "name"):
            raise NwaError(f"line {lineno}: unknown section {key!r}")
        current.fields[key] = rest.split()
    if current is not blocks[0]:
        raise NwaError("unterminated child block")

    root_fields = blocks[0].fields
    base = tuple(root_fields.get("alphabet", []))
    weights = tuple(root_fields.get("weights", []))
    by_name = {b.name: b for b in blocks}
    calls: dict[str, set[str]] = {b.name: set() for b in blocks}
    parsed: dict[str, list[Transition]] = {}
    for b in blocks:
        bbase = tuple(b.fields.get("alphabet", base))
        out = []
        for lineno, line in b.transitions:
            m = _TRANS_RE.match(line)
            if not m:
                raise NwaError(f"line {lineno}: cannot parse transition {line!r}")
            src, dst, letter_txt, weight_txt, d = m.groups()
            w = _parse_weight(weight_txt)
            if isinstance(w, Call):
                if w.child not in by_name:
                    raise NwaError(f"line {lineno}: unknown child {w.child!r}")
                calls[b.name].add(w.child)
            for letter in _parse_letter(letter_txt, bbase):
                out.append(Transition(src, letter, w, d, dst))
        parsed[b.name] = out

    depth_of: dict[str, int] = {"root": int(root_fields.get("depth", ["0"])[0])}
    frontier = ["root"]
    while frontier:
        n = frontier.pop()
        for c in calls[n]:
            if c in depth_of and depth_of[c] != depth_of[n] + 1:
                raise NwaError(f"child {c!r} is called at two different depths")
            if c not in depth_of:
                depth_of[c] = depth_of[n] + 1
                frontier.append(c)

    built: dict[str, Nwa] = {}

    def build(n: str, stack: tuple[str, ...] = ()) -> Nwa:
        if n in stack:
            raise NwaError(f"cycle through child {n!r}")
        if n in built:
            return built[n]
        b = by_name[n]
        f = b.fields
        trans = parsed[n]
        states = list(f.get("states", []))
        for t in trans:
            for q in (t.src, t.dst):
                if q not in states:
                    states.append(q)
        kids = {c: build(c, stack + (n,)) for c in sorted(calls[n])}
        depth = int(f["depth"][0]) if "depth" in f else depth_of.get(n, 0)
        out = Nwa(
            name=n,
            base=tuple(f.get("alphabet", base)),
            depth=depth,
            states=states,
            initial=frozenset(f.get("initial", [])),
            final=frozenset(f.get("final", [])),
            transitions=trans,
            children=kids,
            weights=tuple(f.get("weights", weights)),
        )
        if "level" in f:
            out.declared_level = int(f["level"][0])
        built[n] = out
        return out

    return build("root")


def same_structure(a: Nwa, b: Nwa) -> bool:
    return dump_nwa(a) == dump_nwa(b)
