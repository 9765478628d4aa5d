from __future__ import annotations

import hashlib
import sys
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

from trs.term import App, Symbol, Term, Var, format_term, function_symbols, variable_counts, variables

FULL = "full"
INNERMOST = "innermost"
UNSPECIFIED = "unspecified"

ARROW = "->"
_DELIMITERS = set("(),") | {" ", "\t", "\r", "\n"}


class TrsParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{format_term(self.lhs)} -> {format_term(self.rhs)}"


def check_rule(rule: Rule, line: int = 0, column: int = 0) -> None:
    if isinstance(rule.lhs, Var):
        raise TrsParseError("variable left-hand side", line, column)
    if not set(variables(rule.rhs)) <= set(variables(rule.lhs)):
        raise TrsParseError("free variable in right-hand side", line, column)


@dataclass(frozen=True)
class Trs:
    rules: tuple[Rule, ...]
    signature: dict[str, Symbol] = field(default_factory=dict)
    strategy: str = UNSPECIFIED            # "full" | "innermost" | "unspecified"
    var_names: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def from_rules(cls, rules: Iterable[Rule], strategy: str = UNSPECIFIED) -> Trs:
        rules = tuple(rules)
        signature: dict[str, Symbol] = {}
        for rule in rules:
            for f in function_symbols(rule.lhs) | function_symbols(rule.rhs):
                signature.setdefault(f.name, f)
        return cls(rules, dict(sorted(signature.items())), strategy)

    def rule(self, index: int) -> Rule:
        """1-based rule lookup."""
        if not 1 <= index <= len(self.rules):
            raise IndexError(f"no rule {index}")
        return self.rules[index - 1]

    @property
    def indices(self) -> range:
        return range(1, len(self.rules) + 1)

    @cached_property
    def defined(self) -> frozenset[Symbol]:
        return frozenset(r.lhs.symbol for r in self.rules)

    @cached_property
    def constructors(self) -> frozenset[Symbol]:
        return frozenset(f for f in self.signature.values() if f not in self.defined)

    @cached_property
    def rules_by_root(self) -> dict[Symbol, list[tuple[int, Rule]]]:
        index: dict[Symbol, list[tuple[int, Rule]]] = {}
        for k, rule in enumerate(self.rules, 1):
            index.setdefault(rule.lhs.symbol, []).append((k, rule))
        return index

    def fingerprint(self) -> str:
        return hashlib.sha256(print_trs(self).encode("utf-8")).hexdigest()

    def __len__(self):
        return len(self.rules)


def is_duplicating(rules: Trs | Iterable[Rule]) -> bool:
    if isinstance(rules, Trs):
        rules = rules.rules
    for rule in rules:
        left = variable_counts(rule.lhs)
        for x, n in variable_counts(rule.rhs).items():
            if n > left[x]:
                return True
    return False


# ---------------------------------------------------------------- tokenizer

@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, column, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, column, i = line + 1, 1, i + 1
            continue
        if ch in " \t\r":
            column, i = column + 1, i + 1
            continue
        if ch in "(),":
            tokens.append(_Token(ch, line, column))
            column, i = column + 1, i + 1
            continue
        if text.startswith("->=", i):
            tokens.append(_Token("->=", line, column))
            column, i = column + 3, i + 3
            continue
        if text.startswith(ARROW, i):
            tokens.append(_Token(ARROW, line, column))
            column, i = column + 2, i + 2
            continue
        j = i
        while j < len(text) and text[j] not in _DELIMITERS and not text.startswith(ARROW, j):
            j += 1
        tokens.append(_Token(text[i:j], line, column))
        column, i = column + (j - i), j
    return tokens


# ---------------------------------------------------------------- parser

@dataclass
class _Raw:
    """Unresolved term: bare identifier when args is None."""
    name: str
    args: list[_Raw] | None
    line: int
    column: int


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.var_names: list[str] | None = None
        self.raw_rules: list[tuple[_Raw, _Raw, _Token]] = []
        self.strategy = UNSPECIFIED

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("", 1, 1)
            raise TrsParseError("unexpected end of input", last.line, last.column)
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise TrsParseError(f"unexpected token {tok.text!r}, expected {text!r}", tok.line, tok.column)
        return tok

    def identifier(self) -> _Token:
        tok = self.next()
        if tok.text in ("(", ")", ",", ARROW, "->="):
            raise TrsParseError(f"unexpected token {tok.text!r}", tok.line, tok.column)
        return tok

    def parse(self) -> None:
        while self.peek() is not None:
            self.expect("(")
            keyword = self.identifier()
            section = keyword.text.upper()
            if section == "VAR":
                names = self.var_names if self.var_names is not None else []
                while self.peek() is not None and self.peek().text != ")":
                    names.append(self.identifier().text)
                self.var_names = names
                self.expect(")")
            elif section == "RULES":
                self.parse_rules()
            elif section == "STRATEGY":
                tok = self.identifier()
                if tok.text.upper() == "INNERMOST":
                    self.strategy = INNERMOST
                elif tok.text.upper() == "FULL":
                    self.strategy = FULL
                else:
                    raise TrsParseError(f"unsupported section STRATEGY {tok.text}", tok.line, tok.column)
                self.expect(")")
            elif section == "COMMENT":
                self.skip_balanced()
            else:
                raise TrsParseError(f"unsupported section {keyword.text}", keyword.line, keyword.column)

    def skip_balanced(self) -> None:
        depth = 1
        while depth:
            tok = self.next()
            if tok.text == "(":
                depth += 1
            elif tok.text == ")":
                depth -= 1

    def parse_rules(self) -> None:
        while True:
            tok = self.peek()
            if tok is None:
                raise TrsParseError("unterminated RULES section", *self._last())
            if tok.text == ")":
                self.next()
                return
            lhs = self.parse_term()
            arrow = self.next()
            if arrow.text == "->=":
                raise TrsParseError("unsupported section: relative rules", arrow.line, arrow.column)
            if arrow.text != ARROW:
                raise TrsParseError(f"unexpected token {arrow.text!r}, expected '->'", arrow.line, arrow.column)
            rhs = self.parse_term()
            self.raw_rules.append((lhs, rhs, arrow))

    def parse_term(self) -> _Raw:
        tok = self.identifier()
        nxt = self.peek()
        if nxt is None or nxt.text != "(":
            return _Raw(tok.text, None, tok.line, tok.column)
        self.next()
        args: list[_Raw] = []
        if self.peek() is not None and self.peek().text == ")":
            self.next()
            return _Raw(tok.text, args, tok.line, tok.column)
        while True:
            args.append(self.parse_term())
            sep = self.next()
            if sep.text == ")":
                return _Raw(tok.text, args, tok.line, tok.column)
            if sep.text != ",":
                raise TrsParseError(f"unexpected token {sep.text!r}", sep.line, sep.column)

    def _last(self) -> tuple[int, int]:
        last = self.tokens[-1] if self.tokens else _Token("", 1, 1)
        return last.line, last.column


class _Builder:
    def __init__(self, var_names: list[str] | None):
        self.var_names = set(var_names or [])
        self.bare_is_var = var_names is None
        self.signature: dict[str, Symbol] = {}

    def is_var(self, raw: _Raw) -> bool:
        if raw.args is not None:
            return False
        return raw.name in self.var_names or self.bare_is_var

    def build(self, raw: _Raw) -> Term:
        if self.is_var(raw):
            return Var(raw.name)
        if raw.args is not None and raw.name in self.var_names:
            raise TrsParseError("arity mismatch: variable applied to arguments", raw.line, raw.column)
        args = raw.args or []
        known = self.signature.get(raw.name)
        if known is None:
            known = self.signature[raw.name] = Symbol(raw.name, len(args))
        elif known.arity != len(args):
            raise TrsParseError(f"arity mismatch for {raw.name}", raw.line, raw.column)
        return App(known, tuple(self.build(a) for a in args))


def parse_trs(text: str) -> Trs:
    """
    Parse a TRS written in the old-style TPDB format.

    Args:
        text (str): sections (VAR ...), (RULES ...), optional (STRATEGY INNERMOST) and
            (COMMENT ...). Without a VAR section bare identifiers are variables and
            constants must be written with explicit parentheses.

    Returns:
        Trs: rules in source order, duplicates kept.
    """
    parser = _Parser(text)
    parser.parse()
    builder = _Builder(parser.var_names)
    rules = []
    for lhs_raw, rhs_raw, arrow in parser.raw_rules:
        rule = Rule(builder.build(lhs_raw), builder.build(rhs_raw))
        check_rule(rule, arrow.line, arrow.column)
        rules.append(rule)
    signature = dict(sorted(builder.signature.items()))
    trs = Trs(tuple(rules), signature, parser.strategy, tuple(parser.var_names or ()))
    if trs.signature and not any(f.arity == 0 for f in trs.constructors):
        raise TrsParseError("signature has no constant")
    return trs


def print_trs(trs: Trs) -> str:
    names = list(trs.var_names)
    for rule in trs.rules:
        for x in variables(rule.lhs):
            if str(x) not in names:
                names.append(str(x))
    lines = []
    if names:
        lines.append(f"(VAR {' '.join(names)})")
    if trs.strategy == INNERMOST:
        lines.append("(STRATEGY INNERMOST)")
    elif trs.strategy == FULL:
        lines.append("(STRATEGY FULL)")
    if not trs.rules:
        lines.append("(RULES )")
    else:
        lines.append("(RULES")
        for rule in trs.rules:
            lines.append(f"  {format_term(rule.lhs, True)} -> {format_term(rule.rhs, True)}")
        lines.append(")")
    return "\n".join(lines) + "\n"


def load_trs(path: str | Path) -> Trs:
    if str(path) == "-":
        return parse_trs(sys.stdin.read())
    return parse_trs(Path(path).read_text(encoding="utf-8"))
