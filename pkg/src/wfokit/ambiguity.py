"""Counting accepting runs and classifying the growth of the ambiguity.

Counts here range over all runs, simple or not.  A configuration on a cycle
inside the accessible and co-accessible part makes the count infinite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .nwa import Letter, Nwa, format_letter, marked_words
from .runs import config_graph, framed


class _Infinite:
    def __repr__(self) -> str:
        return "INFINITE"

    def __str__(self) -> str:
        return "infinite"


INFINITE = _Infinite()

MAX_WORDS = 250_000


def count_accepting_runs(a: Nwa, u: Sequence[Letter]) -> int | _Infinite:
    """Accepting runs of the root of ``a`` on ``u`` (children not expanded)."""
    g = config_graph(a, framed(u))
    if not g.starts:
        return 0
    order = g.topo_order()
    if order is None:
        return INFINITE
    start_set = set(g.starts)
    paths: dict = {}
    for c in order:
        here = paths.get(c, 0) + (1 if c in start_set else 0)
        if not here:
            continue
        for _, d in g.succ.get(c, ()):
            paths[d] = paths.get(d, 0) + here
    return sum(paths.get(c, 0) for c in g.finals)


def cycle_witness(a: Nwa, u: Sequence[Letter]) -> list | None:
    return config_graph(a, framed(u)).cycle_witness()


_RANK = {"unambiguous": 0, "polynomial(0)": 1, "linear": 2}


def verdict_rank(verdict: str) -> int:
    if verdict in _RANK:
        return _RANK[verdict]
    if verdict.startswith("polynomial("):
        return 2 + int(verdict[len("polynomial(") : -1])
    if verdict == "inconclusive":
        return 1000
    return 1001  # infinite


def linear_or_better(verdict: str) -> bool:
    return verdict in _RANK


@dataclass
class LevelReport:
    name: str
    depth: int
    maxima: list[int | _Infinite]
    verdict: str
    witness: tuple | None
    note: str = ""


@dataclass
class AmbiguityReport:
    horizon: int
    levels: list[LevelReport] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return max((lv.verdict for lv in self.levels), key=verdict_rank)

    @property
    def root(self) -> LevelReport:
        return self.levels[0]

    def by_name(self, name: str) -> LevelReport:
        for lv in self.levels:
            if lv.name == name:
                return lv
        raise KeyError(name)

    def format(self) -> str:
        lines = [self.verdict]
        for lv in self.levels:
            series = " ".join(str(m) for m in lv.maxima)
            wit = ""
            if lv.witness is not None:
                wit = " witness " + (" ".join(format_letter(x) for x in lv.witness) or "<eps>")
            extra = f" ({lv.note})" if lv.note else ""
            lines.append(f"{lv.name}: {lv.verdict} m(1..{self.horizon}) = {series}{wit}{extra}")
        return "\n".join(lines) + "\n"


def growth_verdict(maxima: Sequence[int]) -> str:
    """Verdict from per-length maxima by finite differences over the upper half."""
    if all(m <= 1 for m in maxima):
        return "unambiguous"
    tail = list(maxima[len(maxima) // 2 :])
    if len(set(tail)) == 1:
        return "polynomial(0)"
    diffs = tail
    for d in range(1, len(tail) - 1):
        diffs = [y - x for x, y in zip(diffs, diffs[1:])]
        if len(set(diffs)) == 1 and diffs[0] != 0:
            return "linear" if d == 1 else f"polynomial({d})"
    return "inconclusive"


def _words_for(a: Nwa, n: int) -> tuple[int, object]:
    total = len(a.base) ** n * (n ** a.depth if a.depth else 1)
    if a.depth == 0:
        return total, itertools.product(a.base, repeat=n)
    return total, marked_words(a.base, a.depth, n)


def classify_level(a: Nwa, horizon: int) -> LevelReport:
    maxima: list[int | _Infinite] = []
    witness = None
    for n in range(1, horizon + 1):
        total, words = _words_for(a, n)
        if total > MAX_WORDS:
            return LevelReport(a.name, a.depth, maxima, "inconclusive", witness, f"{total} words of length {n} exceed the exhaustion cap")
        best, best_word = 0, None
        for u in words:
            c = count_accepting_runs(a, u)
            if c is INFINITE:
                maxima.append(INFINITE)
                return LevelReport(a.name, a.depth, maxima, "infinite", tuple(u), "accepting path through a cycle")
            if c > best:
                best, best_word = c, tuple(u)
        maxima.append(best)
        if best_word is not None:
            witness = best_word
    return LevelReport(a.name, a.depth, maxima, growth_verdict(maxima), witness)


def classify_ambiguity(a: Nwa, horizon: int = 6) -> AmbiguityReport:
    if horizon < 4:
        raise ValueError("the horizon must be at least 4")
    report = AmbiguityReport(horizon)
    for x in a.descendants():
        report.levels.append(classify_level(x, horizon))
    return report


def has_infinite_ambiguity(a: Nwa, horizon: int) -> tuple | None:
    """A word on which some automaton of the nest has infinitely many runs."""
    for x in a.descendants():
        for n in range(0, horizon + 1):
            if x.depth and n == 0:
                continue
            _, words = _words_for(x, n)
            for u in words:
                if count_accepting_runs(x, u) is INFINITE:
                    return (x.name, tuple(u))
    return None
