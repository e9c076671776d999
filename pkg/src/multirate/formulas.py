"""LTL formula syntax tree and parser.

Surface syntax:  True  False  ~f  f /\\ g  f \\/ g  f -> g  [] f  <> f  O f
f U g  and parenthesised groups, with identifiers as proposition names.
Precedence, tightest first: unary operators, U (right associative), /\\,
\\/, -> (right associative).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class TrueF:
    def __str__(self):
        return "True"


@dataclass(frozen=True)
class FalseF:
    def __str__(self):
        return "False"


@dataclass(frozen=True)
class Prop:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    operand: Formula

    def __str__(self):
        return f"~ {_paren(self.operand)}"


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} /\\ {self.right})"


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} \\/ {self.right})"


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class Always:
    operand: Formula

    def __str__(self):
        return f"[] {_paren(self.operand)}"


@dataclass(frozen=True)
class Eventually:
    operand: Formula

    def __str__(self):
        return f"<> {_paren(self.operand)}"


@dataclass(frozen=True)
class Next:
    operand: Formula

    def __str__(self):
        return f"O {_paren(self.operand)}"


@dataclass(frozen=True)
class Until:
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} U {self.right})"


Formula = Union[TrueF, FalseF, Prop, Not, And, Or, Implies, Always, Eventually, Next, Until]

TRUE = TrueF()
FALSE = FalseF()


def _paren(f: Formula) -> str:
    s = str(f)
    return s if s.startswith("(") or " " not in s else f"({s})"


def prop_names(f: Formula) -> set[str]:
    if isinstance(f, Prop):
        return {f.name}
    if isinstance(f, (TrueF, FalseF)):
        return set()
    if isinstance(f, (Not, Always, Eventually, Next)):
        return prop_names(f.operand)
    return prop_names(f.left) | prop_names(f.right)


class ParseError(ValueError):
    """Formula syntax error; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<and>/\\)|(?P<or>\\/)|(?P<implies>->)|(?P<not>~)"
    r"|(?P<always>\[\])|(?P<eventually><>)|(?P<lparen>\()|(?P<rparen>\))"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            at = len(text) - len(rest)
            raise ParseError(f"unexpected character {rest[0]!r}", at)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "ident":
            if value == "True":
                kind = "true"
            elif value == "False":
                kind = "false"
            elif value == "U":
                kind = "until"
            elif value == "O":
                kind = "next"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    # implication, right associative, loosest
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "implies":
            self.take()
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[0] == "or":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.until()
        while self.peek()[0] == "and":
            self.take()
            f = And(f, self.until())
        return f

    # U binds tighter than /\ and is right associative
    def until(self) -> Formula:
        left = self.unary()
        if self.peek()[0] == "until":
            self.take()
            return Until(left, self.until())
        return left

    def unary(self) -> Formula:
        kind, _, pos = self.peek()
        if kind == "not":
            self.take()
            return Not(self.unary())
        if kind == "always":
            self.take()
            return Always(self.unary())
        if kind == "eventually":
            self.take()
            return Eventually(self.unary())
        if kind == "next":
            self.take()
            return Next(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "true":
            return TRUE
        if kind == "false":
            return FALSE
        if kind == "ident":
            return Prop(value)
        if kind == "lparen":
            f = self.formula()
            self.take("rparen")
            return f
        raise ParseError(f"expected a formula, found {value or 'end of input'!r}", pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    kind, value, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing input {value!r}", pos)
    return f


# ---------------------------------------------------------------------------
# Negation normal form, used by the automaton construction. Release is not
# part of the surface syntax; it only appears as the dual of Until.


@dataclass(frozen=True)
class Lit:
    """Positive or negated proposition in NNF."""

    name: str
    negated: bool = False

    def __str__(self):
        return f"~{self.name}" if self.negated else self.name


@dataclass(frozen=True)
class Release:
    left: Formula
    right: Formula

    def __str__(self):
        return f"({self.left} R {self.right})"


def to_nnf(f: Formula, negate: bool = False):
    """Push negations to the propositions; [] and <> unfold to R and U."""
    if isinstance(f, TrueF):
        return FALSE if negate else TRUE
    if isinstance(f, FalseF):
        return TRUE if negate else FALSE
    if isinstance(f, Prop):
        return Lit(f.name, negate)
    if isinstance(f, Not):
        return to_nnf(f.operand, not negate)
    if isinstance(f, And):
        a, b = to_nnf(f.left, negate), to_nnf(f.right, negate)
        return Or(a, b) if negate else And(a, b)
    if isinstance(f, Or):
        a, b = to_nnf(f.left, negate), to_nnf(f.right, negate)
        return And(a, b) if negate else Or(a, b)
    if isinstance(f, Implies):
        return to_nnf(Or(Not(f.left), f.right), negate)
    if isinstance(f, Always):
        inner = to_nnf(f.operand, negate)
        return Until(TRUE, inner) if negate else Release(FALSE, inner)
    if isinstance(f, Eventually):
        inner = to_nnf(f.operand, negate)
        return Release(FALSE, inner) if negate else Until(TRUE, inner)
    if isinstance(f, Next):
        return Next(to_nnf(f.operand, negate))
    if isinstance(f, Until):
        a, b = to_nnf(f.left, negate), to_nnf(f.right, negate)
        return Release(a, b) if negate else Until(a, b)
    if isinstance(f, Release):
        a, b = to_nnf(f.left, negate), to_nnf(f.right, negate)
        return Until(a, b) if negate else Release(a, b)
    raise TypeError(f"not a formula: {f!r}")
