"""Boolean first-order formulas over words and their weighted counterpart.

Weighted formulas evaluate to a :class:`MultisetSeries`.  Positions are
1-based.  A valuation is a plain ``dict`` from variable name to position.

Concrete syntax (weighted)::

    zero  one  f            constants and weight symbols
    G ? E1 : E2             conditional on a Boolean guard G
    E1 + E2   E1 . E2       union and product
    sum x . E               union over positions
    prodL x . E             product over positions, left to right
    prodR x . E             product over positions, right to left

Guards use ``true``, ``Pa(x)``, ``x<=y``, ``!G``, ``G & H``, ``forall x . G``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

from .multiset import MultisetSeries, ms_prod, ms_product, ms_sum, ms_union


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnboundVariableError(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unbound variable {self.name!r}"


# ---------------------------------------------------------------- Boolean AST


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Letter:
    letter: str
    var: str


@dataclass(frozen=True)
class Leq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    arg: "FoFormula"


@dataclass(frozen=True)
class And:
    left: "FoFormula"
    right: "FoFormula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "FoFormula"


FoFormula = Union[Top, Letter, Leq, Not, And, Forall]


def Or(a: FoFormula, b: FoFormula) -> FoFormula:
    return Not(And(Not(a), Not(b)))


def Exists(var: str, body: FoFormula) -> FoFormula:
    return Not(Forall(var, Not(body)))


def Eq(x: str, y: str) -> FoFormula:
    return And(Leq(x, y), Leq(y, x))


def Lt(x: str, y: str) -> FoFormula:
    return And(Leq(x, y), Not(Leq(y, x)))


# --------------------------------------------------------------- weighted AST


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Weight:
    symbol: str


@dataclass(frozen=True)
class Cond:
    guard: FoFormula
    then: "WfoFormula"
    orelse: "WfoFormula"


@dataclass(frozen=True)
class Plus:
    left: "WfoFormula"
    right: "WfoFormula"


@dataclass(frozen=True)
class Times:
    left: "WfoFormula"
    right: "WfoFormula"


@dataclass(frozen=True)
class Sum:
    var: str
    body: "WfoFormula"


@dataclass(frozen=True)
class ProdLR:
    """Product over positions read from left to right."""

    var: str
    body: "WfoFormula"


@dataclass(frozen=True)
class ProdRL:
    """Product over positions read from right to left."""

    var: str
    body: "WfoFormula"


WfoFormula = Union[Zero, One, Weight, Cond, Plus, Times, Sum, ProdLR, ProdRL]

# ------------------------------------------------------------------ semantics


def _lookup(sigma: dict[str, int], var: str) -> int:
    try:
        return sigma[var]
    except KeyError:
        raise UnboundVariableError(var) from None


def fo_eval(phi: FoFormula, u: Sequence, sigma: dict[str, int] | None = None) -> bool:
    sigma = dict(sigma or {})
    return _fo(phi, u, sigma)


def _fo(phi: FoFormula, u: Sequence, sigma: dict[str, int]) -> bool:
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Letter):
        return u[_lookup(sigma, phi.var) - 1] == phi.letter
    if isinstance(phi, Leq):
        return _lookup(sigma, phi.left) <= _lookup(sigma, phi.right)
    if isinstance(phi, Not):
        return not _fo(phi.arg, u, sigma)
    if isinstance(phi, And):
        return _fo(phi.left, u, sigma) and _fo(phi.right, u, sigma)
    if isinstance(phi, Forall):
        for i in range(1, len(u) + 1):
            if not _fo(phi.body, u, {**sigma, phi.var: i}):
                return False
        return True
    raise TypeError(f"not a Boolean formula: {phi!r}")


def wfo_eval(phi: WfoFormula, u: Sequence, sigma: dict[str, int] | None = None) -> MultisetSeries:
    return _wfo(phi, tuple(u), dict(sigma or {}))


def _wfo(phi: WfoFormula, u: tuple, sigma: dict[str, int]) -> MultisetSeries:
    if isinstance(phi, Zero):
        return MultisetSeries()
    if isinstance(phi, One):
        return MultisetSeries.unit()
    if isinstance(phi, Weight):
        return MultisetSeries.single(phi.symbol)
    if isinstance(phi, Cond):
        branch = phi.then if _fo(phi.guard, u, sigma) else phi.orelse
        return _wfo(branch, u, sigma)
    if isinstance(phi, Plus):
        return ms_union(_wfo(phi.left, u, sigma), _wfo(phi.right, u, sigma))
    if isinstance(phi, Times):
        left = _wfo(phi.left, u, sigma)
        if not left:
            return left
        return ms_product(left, _wfo(phi.right, u, sigma))
    positions = range(1, len(u) + 1)
    if isinstance(phi, Sum):
        return ms_sum(_wfo(phi.body, u, {**sigma, phi.var: i}) for i in positions)
    if isinstance(phi, ProdLR):
        return ms_prod(_wfo(phi.body, u, {**sigma, phi.var: i}) for i in positions)
    if isinstance(phi, ProdRL):
        return ms_prod(_wfo(phi.body, u, {**sigma, phi.var: i}) for i in reversed(positions))
    raise TypeError(f"not a weighted formula: {phi!r}")


# ---------------------------------------------------------- syntactic queries


def fo_free_vars(phi: FoFormula) -> frozenset[str]:
    if isinstance(phi, Top):
        return frozenset()
    if isinstance(phi, Letter):
        return frozenset({phi.var})
    if isinstance(phi, Leq):
        return frozenset({phi.left, phi.right})
    if isinstance(phi, Not):
        return fo_free_vars(phi.arg)
    if isinstance(phi, And):
        return fo_free_vars(phi.left) | fo_free_vars(phi.right)
    if isinstance(phi, Forall):
        return fo_free_vars(phi.body) - {phi.var}
    raise TypeError(phi)


def free_vars(phi: WfoFormula) -> frozenset[str]:
    if isinstance(phi, (Zero, One, Weight)):
        return frozenset()
    if isinstance(phi, Cond):
        return fo_free_vars(phi.guard) | free_vars(phi.then) | free_vars(phi.orelse)
    if isinstance(phi, (Plus, Times)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Sum, ProdLR, ProdRL)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(phi)


def fo_letters(phi: FoFormula) -> frozenset[str]:
    if isinstance(phi, Letter):
        return frozenset({phi.letter})
    if isinstance(phi, Not):
        return fo_letters(phi.arg)
    if isinstance(phi, And):
        return fo_letters(phi.left) | fo_letters(phi.right)
    if isinstance(phi, Forall):
        return fo_letters(phi.body)
    return frozenset()


def weights_of(phi: WfoFormula) -> frozenset[str]:
    if isinstance(phi, Weight):
        return frozenset({phi.symbol})
    if isinstance(phi, Cond):
        return weights_of(phi.then) | weights_of(phi.orelse)
    if isinstance(phi, (Plus, Times)):
        return weights_of(phi.left) | weights_of(phi.right)
    if isinstance(phi, (Sum, ProdLR, ProdRL)):
        return weights_of(phi.body)
    return frozenset()


def letters_of(phi: WfoFormula) -> frozenset[str]:
    if isinstance(phi, Cond):
        return fo_letters(phi.guard) | letters_of(phi.then) | letters_of(phi.orelse)
    if isinstance(phi, (Plus, Times)):
        return letters_of(phi.left) | letters_of(phi.right)
    if isinstance(phi, (Sum, ProdLR, ProdRL)):
        return letters_of(phi.body)
    return frozenset()


def is_step(phi: WfoFormula) -> bool:
    if isinstance(phi, Weight):
        return True
    if isinstance(phi, Cond):
        return is_step(phi.then) and is_step(phi.orelse)
    return False


def is_rone(phi: WfoFormula) -> bool:
    if isinstance(phi, Zero):
        return True
    if isinstance(phi, Cond):
        return is_rone(phi.then) and is_rone(phi.orelse)
    if isinstance(phi, Plus):
        return is_rone(phi.left) and is_rone(phi.right)
    if isinstance(phi, Sum):
        return is_rone(phi.body)
    if isinstance(phi, ProdLR):
        return is_step(phi.body)
    return False


def _uses(phi: WfoFormula, kinds: tuple[type, ...]) -> bool:
    if isinstance(phi, kinds):
        return True
    if isinstance(phi, Cond):
        return _uses(phi.then, kinds) or _uses(phi.orelse, kinds)
    if isinstance(phi, (Plus, Times)):
        return _uses(phi.left, kinds) or _uses(phi.right, kinds)
    if isinstance(phi, (Sum, ProdLR, ProdRL)):
        return _uses(phi.body, kinds)
    return False


def classify_fragment(phi: WfoFormula) -> frozenset[str]:
    tags = {"WFO"}
    if not _uses(phi, (Times, ProdRL)):
        tags.add("lrWFO")
    if not _uses(phi, (Times, ProdLR)):
        tags.add("rlWFO")
    if is_step(phi):
        tags.add("step-wFO")
    if is_rone(phi):
        tags.add("RoneWFO")
    return frozenset(tags)


# -------------------------------------------------------------------- syntax

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<op><=|[?:+.()!&])|(?P<name>[A-Za-z0-9_']+)"
)
_KEYWORDS = {"zero", "one", "sum", "prodL", "prodR", "forall", "true"}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        chunk = m.group(0)
        if m.lastgroup in ("op", "name"):
            toks.append(_Tok(m.lastgroup, chunk, line, col))
        for ch in chunk:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        found = tok.text or "end of input"
        raise FormulaSyntaxError(f"{msg}, found {found!r}", tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        tok = self.peek()
        if tok.text != text:
            self.fail(f"expected {text!r}")
        self.i += 1
        return tok

    def var(self) -> str:
        tok = self.peek()
        if tok.kind != "name" or tok.text in _KEYWORDS:
            self.fail("expected a variable")
        self.i += 1
        return tok.text

    # weighted layer
    def expr(self) -> WfoFormula:
        node = self.term()
        while self.peek().text == "+":
            self.i += 1
            node = Plus(node, self.term())
        return node

    def term(self) -> WfoFormula:
        node = self.unary()
        while self.peek().text == ".":
            self.i += 1
            node = Times(node, self.unary())
        return node

    def unary(self) -> WfoFormula:
        tok = self.peek()
        binders = {"sum": Sum, "prodL": ProdLR, "prodR": ProdRL}
        if tok.text in binders:
            self.i += 1
            v = self.var()
            self.expect(".")
            return binders[tok.text](v, self.expr())
        guard = self.try_guard()
        if guard is not None:
            then = self.expr()
            self.expect(":")
            return Cond(guard, then, self.expr())
        return self.atom()

    def try_guard(self) -> FoFormula | None:
        start = self.i
        try:
            g = self.fo()
        except FormulaSyntaxError:
            self.i = start
            return None
        if self.peek().text != "?":
            self.i = start
            return None
        self.i += 1
        return g

    def atom(self) -> WfoFormula:
        tok = self.peek()
        if tok.text == "(":
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        if tok.text == "zero":
            self.i += 1
            return Zero()
        if tok.text == "one":
            self.i += 1
            return One()
        if tok.kind == "name" and tok.text not in _KEYWORDS:
            self.i += 1
            return Weight(tok.text)
        self.fail("expected a weighted formula")

    # Boolean layer
    def fo(self) -> FoFormula:
        node = self.fo_unary()
        while self.peek().text == "&":
            self.i += 1
            node = And(node, self.fo_unary())
        return node

    def fo_unary(self) -> FoFormula:
        tok = self.peek()
        if tok.text == "!":
            self.i += 1
            return Not(self.fo_unary())
        if tok.text == "forall":
            self.i += 1
            v = self.var()
            self.expect(".")
            return Forall(v, self.fo())
        if tok.text == "true":
            self.i += 1
            return Top()
        if tok.text == "(":
            self.i += 1
            node = self.fo()
            self.expect(")")
            return node
        if tok.kind == "name" and tok.text not in _KEYWORDS:
            nxt = self.peek(1)
            if nxt.text == "(" and tok.text.startswith("P") and len(tok.text) > 1:
                self.i += 2
                v = self.var()
                self.expect(")")
                return Letter(tok.text[1:], v)
            if nxt.text == "<=":
                self.i += 2
                return Leq(tok.text, self.var())
        self.fail("expected a Boolean formula")


def parse_formula(text: str) -> WfoFormula:
    p = _Parser(text)
    node = p.expr()
    if p.peek().kind != "eof":
        p.fail("unexpected trailing input")
    return node


def parse_fo(text: str) -> FoFormula:
    p = _Parser(text)
    node = p.fo()
    if p.peek().kind != "eof":
        p.fail("unexpected trailing input")
    return node


def format_fo(phi: FoFormula) -> str:
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Letter):
        return f"P{phi.letter}({phi.var})"
    if isinstance(phi, Leq):
        return f"{phi.left}<={phi.right}"
    if isinstance(phi, Not):
        inner = format_fo(phi.arg)
        return "!" + (f"({inner})" if isinstance(phi.arg, (And, Forall)) else inner)
    if isinstance(phi, And):
        left = format_fo(phi.left)
        if isinstance(phi.left, Forall):
            left = f"({left})"
        right = format_fo(phi.right)
        if isinstance(phi.right, (And, Forall)):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(phi, Forall):
        return f"forall {phi.var} . {format_fo(phi.body)}"
    raise TypeError(phi)


_BINDER_WORD = {Sum: "sum", ProdLR: "prodL", ProdRL: "prodR"}


def format_formula(phi: WfoFormula) -> str:
    return _fmt(phi, top=True)


def _fmt(phi: WfoFormula, top: bool = False) -> str:
    if isinstance(phi, Zero):
        return "zero"
    if isinstance(phi, One):
        return "one"
    if isinstance(phi, Weight):
        return phi.symbol
    if isinstance(phi, Cond):
        guard = format_fo(phi.guard)
        if isinstance(phi.guard, Forall):
            guard = f"({guard})"
        body = f"{guard} ? {_fmt(phi.then, True)} : {_fmt(phi.orelse, True)}"
        return body if top else f"({body})"
    if isinstance(phi, Plus):
        left = _fmt(phi.left)
        right = _fmt(phi.right)
        if isinstance(phi.right, Plus):
            right = f"({right})"
        return f"{left} + {right}"
    if isinstance(phi, Times):
        left = _fmt(phi.left)
        if isinstance(phi.left, Plus):
            left = f"({left})"
        right = _fmt(phi.right)
        if isinstance(phi.right, (Plus, Times)):
            right = f"({right})"
        return f"{left} . {right}"
    if isinstance(phi, (Sum, ProdLR, ProdRL)):
        body = _fmt(phi.body, True) if isinstance(phi.body, (Sum, ProdLR, ProdRL)) else _fmt(phi.body)
        text = f"{_BINDER_WORD[type(phi)]} {phi.var} . {body}"
        return text if top else f"({text})"
    raise TypeError(phi)


# ---------------------------------------------------------------- .wfo files


@dataclass(frozen=True)
class WfoDocument:
    alphabet: tuple[str, ...]
    weights: tuple[str, ...]
    formula: WfoFormula


def _split_headers(text: str, keys: tuple[str, ...]) -> tuple[dict[str, tuple[str, ...]], str, int]:
    headers: dict[str, tuple[str, ...]] = {}
    lines = text.splitlines()
    idx = 0
    while idx < len(lines):
        stripped = lines[idx].split("#", 1)[0].strip()
        if not stripped:
            idx += 1
            continue
        key, sep, rest = stripped.partition(":")
        if sep and key.strip() in keys:
            headers[key.strip()] = tuple(rest.split())
            idx += 1
            continue
        break
    return headers, "\n".join(lines[idx:]), idx


def parse_wfo_document(text: str) -> WfoDocument:
    headers, body, offset = _split_headers(text, ("alphabet", "weights"))
    if "alphabet" not in headers:
        raise FormulaSyntaxError("missing 'alphabet:' header", 1, 1)
    try:
        phi = parse_formula(body)
    except FormulaSyntaxError as exc:
        raise FormulaSyntaxError(str(exc).split(": ", 1)[1], exc.line + offset, exc.column) from None
    alphabet = headers["alphabet"]
    weights = headers.get("weights", tuple(sorted(weights_of(phi))))
    unknown_w = weights_of(phi) - set(weights)
    if unknown_w:
        raise FormulaSyntaxError(f"undeclared weight symbols {sorted(unknown_w)}", offset + 1, 1)
    unknown_a = letters_of(phi) - set(alphabet)
    if unknown_a:
        raise FormulaSyntaxError(f"letters {sorted(unknown_a)} not in the alphabet", offset + 1, 1)
    if free_vars(phi):
        raise FormulaSyntaxError(f"free variables {sorted(free_vars(phi))} in a sentence", offset + 1, 1)
    return WfoDocument(alphabet, weights, phi)


def format_wfo_document(doc: WfoDocument) -> str:
    return (
        f"alphabet: {' '.join(doc.alphabet)}\n"
        f"weights: {' '.join(doc.weights)}\n"
        f"{format_formula(doc.formula)}\n"
    )


@dataclass(frozen=True)
class FoDocument:
    alphabet: tuple[str, ...]
    variables: tuple[str, ...]
    formula: FoFormula


def parse_fo_document(text: str) -> FoDocument:
    headers, body, offset = _split_headers(text, ("alphabet", "free"))
    if "alphabet" not in headers:
        raise FormulaSyntaxError("missing 'alphabet:' header", 1, 1)
    try:
        phi = parse_fo(body)
    except FormulaSyntaxError as exc:
        raise FormulaSyntaxError(str(exc).split(": ", 1)[1], exc.line + offset, exc.column) from None
    variables = headers.get("free", tuple(sorted(fo_free_vars(phi))))
    missing = fo_free_vars(phi) - set(variables)
    if missing:
        raise FormulaSyntaxError(f"free variables {sorted(missing)} not declared", offset + 1, 1)
    return FoDocument(headers["alphabet"], variables, phi)
