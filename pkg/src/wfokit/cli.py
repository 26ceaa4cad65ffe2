"""Command line: eval, check, translate, equiv, monoid-dump.

Reports go to standard output in a line format; a one-line human summary
goes to standard error.  Exit status is 0 when the verdict is affirmative,
1 when it is negative and 2 on malformed input.
"""

from __future__ import annotations

import itertools
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from .ambiguity import classify_ambiguity, verdict_rank
from .logic import FoDocument, FormulaSyntaxError, UnboundVariableError, WfoDocument, fo_eval, parse_fo_document, parse_wfo_document, wfo_eval
from .monoid import BudgetExceeded, build_transition_monoid, is_aperiodic, monoid_dump
from .multiset import DomainError, MultisetSeries, format_language, language_aggregator, natural_aggregator
from .nwa import LEFT, Nwa, NwaError, dump_nwa, is_one_way, is_one_way_until_exit, parse_nwa, sweeping_partition, validate
from .runs import Evaluator
from .translate import SweepError, TranslationError, fo_to_automaton, sw_transform, wfo_to_sweeping

MAX_LEN_CAP = 12


@dataclass
class Source:
    """A parsed input file: an automaton, a weighted sentence or a Boolean formula."""

    path: str
    kind: str
    nwa: Nwa | None = None
    wfo: WfoDocument | None = None
    fo: FoDocument | None = None

    @property
    def base(self) -> tuple[str, ...]:
        if self.nwa is not None:
            return tuple(self.nwa.base)
        doc = self.wfo or self.fo
        return tuple(doc.alphabet)


def _sniff(text: str, path: str) -> str:
    suffix = Path(path).suffix
    if suffix in (".nwa", ".wfo", ".fo"):
        return suffix[1:]
    if re.search(r"^\s*states\b", text, re.M) or "->" in text:
        return "nwa"
    if re.search(r"^\s*free\s*:", text, re.M):
        return "fo"
    try:
        parse_wfo_document(text)
        return "wfo"
    except (FormulaSyntaxError, ValueError):
        return "fo"


def load_source(path: str) -> Source:
    text = Path(path).read_text(encoding="utf-8") if path != "-" else sys.stdin.read()
    kind = _sniff(text, path)
    if kind == "nwa":
        return Source(path, kind, nwa=parse_nwa(text))
    if kind == "wfo":
        return Source(path, kind, wfo=parse_wfo_document(text))
    return Source(path, kind, fo=parse_fo_document(text))


def parse_word(text: str, base: tuple[str, ...]) -> tuple[str, ...]:
    """Split on whitespace or commas if present, else into characters."""
    text = text.strip()
    if not text:
        return ()
    parts = re.split(r"[\s,]+", text) if re.search(r"[\s,]", text) else list(text)
    bad = [x for x in parts if x not in base]
    if bad:
        raise click.UsageError(f"letter {bad[0]!r} is not in the alphabet {' '.join(base)}")
    return tuple(parts)


def _as_automaton(src: Source, one_way: bool = False) -> Nwa:
    if src.nwa is not None:
        return src.nwa
    if src.wfo is not None:
        return wfo_to_sweeping(src.wfo.formula, src.wfo.alphabet, "one-way" if one_way else "two-way", src.wfo.weights)
    if src.fo.variables:
        return fo_to_automaton(src.fo.formula, src.fo.variables, src.fo.alphabet)
    return fo_to_automaton(src.fo.formula, (), src.fo.alphabet)


class _Valuer:
    """Value of a source on words, with a shared cache for automata."""

    def __init__(self, src: Source):
        self.src = src
        self.evaluator = Evaluator()

    def __call__(self, u: tuple[str, ...]) -> MultisetSeries:
        if self.src.wfo is not None:
            return wfo_eval(self.src.wfo.formula, u)
        if self.src.nwa is not None:
            return self.evaluator.eval(self.src.nwa, u)
        if self.src.fo.variables:
            raise click.UsageError("a formula with free variables has no value on plain words")
        return MultisetSeries.unit() if fo_eval(self.src.fo.formula, u) else MultisetSeries.empty()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _summary(msg: str) -> None:
    click.echo(msg, err=True)


def _guard(fn):
    """Turn input errors into exit status 2 with a diagnostic."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (FormulaSyntaxError, UnboundVariableError, NwaError, DomainError, TranslationError, SweepError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@click.group()
def main() -> None:
    """Weighted first-order logic and nested two-way weighted automata."""


@main.command("eval")
@click.argument("input_path", metavar="INPUT")
@click.option("--word", "word", default="", help="Input word; letters are characters unless separated by spaces or commas.")
@click.option("--agg", type=click.Choice(["none", "nat", "lang"]), default="none", help="Aggregate the multiset.")
@_guard
def eval_cmd(input_path: str, word: str, agg: str) -> None:
    """Print the multiset of weight sequences on WORD, then the aggregate."""
    src = load_source(input_path)
    u = parse_word(word, src.base)
    value = _Valuer(src)(u)
    text = value.serialize()
    if agg == "nat":
        text += f"{natural_aggregator()(value)}\n"
    elif agg == "lang":
        text += format_language(language_aggregator()(value)) + "\n"
    click.echo(text, nl=False)
    _summary(f"{value.size()} sequences over {len(value)} distinct on {''.join(u) or '<eps>'}")


def _partition_line(name: str, part: dict) -> str:
    cells = " ".join(f"{q}={'R' if d != LEFT else 'L'}" for q, d in sorted(part.items(), key=lambda kv: str(kv[0])))
    return f"{name}: {cells}"


@main.command("check")
@click.argument("input_path", metavar="INPUT")
@click.argument("which", type=click.Choice(["aperiodic", "ambiguity", "sweeping", "oneway", "validate"]))
@click.option("--max-len", "max_len", default=6, show_default=True, help="Ambiguity horizon.")
@click.option("--budget", type=int, default=None, help="Monoid element cap (default WFOKIT_BUDGET or 100000).")
@click.option("--one-way", "one_way", is_flag=True, help="Compile formulas in one-way mode before checking.")
@_guard
def check_cmd(input_path: str, which: str, max_len: int, budget: int | None, one_way: bool) -> None:
    """Run one structural check on an automaton (formulas are compiled first)."""
    src = load_source(input_path)
    a = _as_automaton(src, one_way)
    if which == "aperiodic":
        rep = is_aperiodic(a, budget)
        click.echo(rep.format(), nl=False)
        _summary(f"{len(rep.reports)} automata checked")
        sys.exit(0 if rep.aperiodic else 1)
    if which == "ambiguity":
        if max_len > MAX_LEN_CAP:
            raise click.UsageError(f"--max-len is capped at {MAX_LEN_CAP}")
        rep = classify_ambiguity(a, max_len)
        click.echo(rep.format(), nl=False)
        _summary(f"worst verdict {rep.verdict} at horizon {max_len}")
        sys.exit(0 if verdict_rank(rep.verdict) < verdict_rank("inconclusive") else 1)
    if which == "sweeping":
        lines, ok = [], True
        for x in a.descendants():
            part = sweeping_partition(x)
            if part is None:
                ok = False
                lines.append(f"{x.name}: no partition")
            else:
                lines.append(_partition_line(x.name, part))
        click.echo(f"sweeping: {str(ok).lower()}\n" + "\n".join(lines) + "\n", nl=False)
        _summary("sweeping at every level" if ok else "some automaton turns inside the word")
        sys.exit(0 if ok else 1)
    if which == "oneway":
        kinds = {}
        for x in a.descendants():
            kind = is_one_way(x)
            if kind == "no" and is_one_way_until_exit(x.replace(children={})):
                kind = "left-to-right until exit"
            kinds[x.name] = kind
        ok = all(k != "no" for k in kinds.values())
        click.echo(f"one-way: {str(ok).lower()}\n" + "".join(f"{n}: {k}\n" for n, k in kinds.items()), nl=False)
        _summary("one-way at every level" if ok else "some automaton is not one-way")
        sys.exit(0 if ok else 1)
    problems = validate(a)
    click.echo("valid\n" if not problems else "invalid\n" + "".join(p + "\n" for p in problems), nl=False)
    _summary(f"{len(problems)} problems")
    sys.exit(0 if not problems else 1)


@main.command("translate")
@click.argument("input_path", metavar="INPUT")
@click.argument("pipeline", type=click.Choice(["wfo2nwa", "fo2dfa", "two2sweep"]))
@click.option("-o", "--output", "output", default=None, help="Write the .nwa file here instead of standard output.")
@click.option("--annotated", is_flag=True, help="two2sweep: track monoid classes in the swept states.")
@click.option("--one-way", "one_way", is_flag=True, help="wfo2nwa: left-to-right construction.")
@click.option("--dump-iterations", "dump_dir", default=None, help="two2sweep: directory for the nest after each unfolding step.")
@click.option("--max-len", "max_len", default=4, show_default=True, help="two2sweep: horizon of the ambiguity precondition.")
@_guard
def translate_cmd(input_path, pipeline, output, annotated, one_way, dump_dir, max_len) -> None:
    """Build an automaton and write it in the .nwa format."""
    src = load_source(input_path)
    if pipeline == "wfo2nwa":
        if src.wfo is None:
            raise click.UsageError("wfo2nwa needs a weighted formula file")
        a = _as_automaton(src, one_way)
    elif pipeline == "fo2dfa":
        if src.fo is None:
            raise click.UsageError("fo2dfa needs a Boolean formula file")
        a = _as_automaton(src)
    else:
        if src.nwa is None:
            raise click.UsageError("two2sweep needs an automaton file")
        stages: list[Nwa] | None = [] if dump_dir else None
        a = sw_transform(src.nwa, annotated=annotated, horizon=max_len, stages=stages).nwa
        if dump_dir:
            Path(dump_dir).mkdir(parents=True, exist_ok=True)
            for i, s in enumerate(stages):
                (Path(dump_dir) / f"iteration_{i}.nwa").write_text(dump_nwa(s), encoding="utf-8")
    _emit(dump_nwa(a), output)
    _summary(f"{len(a.descendants())} automata, {sum(len(x.states) for x in a.descendants())} states")


def _corpus(base: tuple[str, ...], max_len: int, words: str | None):
    if words is not None:
        return [parse_word(w, base) for w in words.split(";")]
    if max_len > MAX_LEN_CAP:
        raise click.UsageError(f"--max-len is capped at {MAX_LEN_CAP}")
    return [u for n in range(max_len + 1) for u in itertools.product(base, repeat=n)]


@main.command("equiv")
@click.argument("left_path", metavar="A")
@click.argument("right_path", metavar="B")
@click.option("--max-len", "max_len", default=5, show_default=True, help="Compare on every word up to this length.")
@click.option("--words", default=None, help="Explicit words separated by ';' instead of the exhaustive corpus.")
@_guard
def equiv_cmd(left_path: str, right_path: str, max_len: int, words: str | None) -> None:
    """Compare the multisets of two inputs word by word."""
    left, right = load_source(left_path), load_source(right_path)
    if set(left.base) != set(right.base):
        raise click.UsageError(f"alphabets differ: {' '.join(left.base)} vs {' '.join(right.base)}")
    f, g = _Valuer(left), _Valuer(right)
    corpus = _corpus(tuple(left.base), max_len, words)
    for u in corpus:
        x, y = f(u), g(u)
        if x != y:
            shown = " ".join(u) if u else "<eps>"
            click.echo(f"different\nword: {shown}\nA:\n{x.serialize()}B:\n{y.serialize()}", nl=False)
            _summary(f"counterexample after {corpus.index(u) + 1} words")
            sys.exit(1)
    click.echo(f"equal on {len(corpus)} words\n", nl=False)
    _summary(f"{len(corpus)} words compared")


@main.command("monoid-dump")
@click.argument("input_path", metavar="INPUT")
@click.option("--budget", type=int, default=None, help="Element cap.")
@_guard
def monoid_dump_cmd(input_path: str, budget: int | None) -> None:
    """Print the transition monoid of the root automaton."""
    src = load_source(input_path)
    a = _as_automaton(src)
    try:
        m = build_transition_monoid(a, budget)
    except BudgetExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(monoid_dump(m), nl=False)
    _summary(f"{len(m)} elements")


if __name__ == "__main__":
    main()
