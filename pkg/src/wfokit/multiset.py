"""Finite multisets of weight sequences with union and Cauchy product.

A series maps each sequence of weight symbols to a positive multiplicity.
Counts are plain Python integers, so they never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

WeightSeq = tuple[str, ...]

EPS_TOKEN = "<eps>"


class DomainError(ValueError):
    """Raised when an aggregator cannot interpret a weight symbol."""


class MultisetSeries:
    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[WeightSeq, int] | Iterable[tuple[WeightSeq, int]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        table: dict[WeightSeq, int] = {}
        for seq, count in items:
            if count < 0:
                raise ValueError(f"negative multiplicity {count} for {seq!r}")
            if count:
                key = tuple(seq)
                table[key] = table.get(key, 0) + count
        self._entries = table
        self._hash = None

    @classmethod
    def empty(cls) -> "MultisetSeries":
        return cls()

    @classmethod
    def unit(cls) -> "MultisetSeries":
        return cls({(): 1})

    @classmethod
    def single(cls, *symbols: str) -> "MultisetSeries":
        return cls({tuple(symbols): 1})

    @classmethod
    def of(cls, *seqs: Iterable[str]) -> "MultisetSeries":
        out: dict[WeightSeq, int] = {}
        for s in seqs:
            key = tuple(s)
            out[key] = out.get(key, 0) + 1
        return cls(out)

    def count(self, seq: Iterable[str]) -> int:
        return self._entries.get(tuple(seq), 0)

    def items(self) -> list[tuple[WeightSeq, int]]:
        """Entries in length-lexicographic order."""
        return sorted(self._entries.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __iter__(self) -> Iterator[WeightSeq]:
        return (seq for seq, _ in self.items())

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def size(self) -> int:
        """Total number of sequences counted with multiplicity."""
        return sum(self._entries.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultisetSeries):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __add__(self, other: "MultisetSeries") -> "MultisetSeries":
        return ms_union(self, other)

    def __mul__(self, other: "MultisetSeries") -> "MultisetSeries":
        return ms_product(self, other)

    def __repr__(self) -> str:
        if not self._entries:
            return "MultisetSeries(∅)"
        parts = []
        for seq, c in self.items():
            word = " ".join(seq) if seq else "ε"
            parts.append(f"{word}×{c}" if c != 1 else word)
        return "MultisetSeries{" + ", ".join(parts) + "}"

    def serialize(self) -> str:
        return serialize(self)


def ms_union(s1: MultisetSeries, s2: MultisetSeries) -> MultisetSeries:
    out = dict(s1._entries)
    for seq, c in s2._entries.items():
        out[seq] = out.get(seq, 0) + c
    res = MultisetSeries.__new__(MultisetSeries)
    res._entries = out
    res._hash = None
    return res


def ms_product(s1: MultisetSeries, s2: MultisetSeries) -> MultisetSeries:
    if not s1._entries or not s2._entries:
        return MultisetSeries()
    if s1._entries == {(): 1}:
        return s2
    if s2._entries == {(): 1}:
        return s1
    out: dict[WeightSeq, int] = {}
    for a, ca in s1._entries.items():
        for b, cb in s2._entries.items():
            key = a + b
            out[key] = out.get(key, 0) + ca * cb
    res = MultisetSeries.__new__(MultisetSeries)
    res._entries = out
    res._hash = None
    return res


def ms_sum(series: Iterable[MultisetSeries]) -> MultisetSeries:
    out: dict[WeightSeq, int] = {}
    for s in series:
        for seq, c in s._entries.items():
            out[seq] = out.get(seq, 0) + c
    res = MultisetSeries.__new__(MultisetSeries)
    res._entries = out
    res._hash = None
    return res


def ms_prod(series: Iterable[MultisetSeries]) -> MultisetSeries:
    acc = MultisetSeries.unit()
    for s in series:
        acc = ms_product(acc, s)
        if not acc:
            break
    return acc


def serialize(s: MultisetSeries) -> str:
    lines = []
    for seq, c in s.items():
        lines.append(f"{c}\t{' '.join(seq) if seq else EPS_TOKEN}")
    return "".join(line + "\n" for line in lines)


def parse_series(text: str) -> MultisetSeries:
    entries: dict[WeightSeq, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            count_txt, body = line.split("\t", 1)
            count = int(count_txt)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: expected 'count<TAB>symbols'") from exc
        seq = () if body.strip() == EPS_TOKEN else tuple(body.split())
        entries[seq] = entries.get(seq, 0) + count
    return MultisetSeries(entries)


@dataclass(frozen=True)
class Aggregator:
    """Collapse a series into one value of a concrete weight structure.

    ``interpret`` maps a symbol to a value, ``plus``/``times`` combine values,
    ``zero``/``one`` are the units.  Counts are folded in by ``scale``.
    """

    name: str
    interpret: Callable[[str], object]
    zero: object
    one: object
    plus: Callable[[object, object], object]
    times: Callable[[object, object], object]
    scale: Callable[[int, object], object]

    def value(self, seq: WeightSeq) -> object:
        acc = self.one
        for sym in seq:
            acc = self.times(acc, self.interpret(sym))
        return acc

    def __call__(self, s: MultisetSeries) -> object:
        return aggregate(s, self)


def aggregate(s: MultisetSeries, agg: Aggregator) -> object:
    acc = agg.zero
    for seq, c in s.items():
        acc = agg.plus(acc, agg.scale(c, agg.value(seq)))
    return acc


def natural_aggregator(values: Mapping[str, int] | None = None) -> Aggregator:
    """Natural semiring.  Symbols that look like integers denote themselves."""
    table = dict(values or {})

    def interpret(sym: str) -> int:
        if sym in table:
            return table[sym]
        try:
            return int(sym)
        except ValueError:
            raise DomainError(f"weight symbol {sym!r} has no natural-number interpretation") from None

    return Aggregator(
        name="nat",
        interpret=interpret,
        zero=0,
        one=1,
        plus=lambda x, y: x + y,
        times=lambda x, y: x * y,
        scale=lambda c, v: c * v,
    )


def language_aggregator(words: Mapping[str, str] | None = None) -> Aggregator:
    """Finite languages under union and concatenation.

    Without an explicit table a symbol denotes the one-word language made of
    its own name, so ``a`` stands for ``{"a"}``.
    """
    table = dict(words) if words is not None else None

    def interpret(sym: str) -> frozenset[str]:
        if table is None:
            return frozenset({sym})
        if sym not in table:
            raise DomainError(f"weight symbol {sym!r} is not a word of the output alphabet")
        return frozenset({table[sym]})

    def times(x: frozenset[str], y: frozenset[str]) -> frozenset[str]:
        return frozenset(u + v for u in x for v in y)

    return Aggregator(
        name="lang",
        interpret=interpret,
        zero=frozenset(),
        one=frozenset({""}),
        plus=lambda x, y: x | y,
        times=times,
        scale=lambda c, v: v if c > 0 else frozenset(),
    )


def format_language(lang: Iterable[str]) -> str:
    words = sorted(lang, key=lambda w: (len(w), w))
    return "{" + ", ".join(w if w else "ε" for w in words) + "}"
