"""Signatures and terms over variables x1, x2, ...

Term text is a prefix s-expression format: variables are ``x<k>`` with k a
positive integer, applications are ``(<symbol> <arg> ...)``, and nullary
symbols stand bare.  So ``(· x1 (⁻¹ x2))`` is the group word x1*x2^-1 and
``1`` by itself is the group unit.  ``format_term`` emits exactly this form
and is a left inverse of ``parse_term``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

MAX_TERM_LENGTH = 4095


class TermError(ValueError):
    pass


class ParseError(TermError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Signature:
    """Ordered operation symbols with arities; names must be unique."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.symbols]
        if len(set(names)) != len(names):
            raise TermError(f"duplicate symbol name in signature: {names}")
        for name, arity in self.symbols:
            if not name or any(c in name for c in " \t\n()"):
                raise TermError(f"bad symbol name {name!r}")
            if arity < 0:
                raise TermError(f"negative arity for symbol {name!r}")

    def arity(self, symbol: str) -> int:
        for name, k in self.symbols:
            if name == symbol:
                return k
        raise TermError(f"unknown symbol {symbol!r}")

    def __contains__(self, symbol: str) -> bool:
        return any(name == symbol for name, _ in self.symbols)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise TermError(f"variable index must be positive, got {self.index}")


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple["Term", ...]


Term = Union[Var, App]

_VAR_RE = re.compile(r"^x([0-9]+)$")


def term_length(t: Term) -> int:
    """Number of nodes: variables and constants count 1, f(s1..sk) counts 1+sum."""
    total = 0
    stack = [t]
    while stack:
        node = stack.pop()
        total += 1
        if isinstance(node, App):
            stack.extend(node.args)
    return total


def variables(t: Term) -> set[int]:
    out: set[int] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.index)
        else:
            stack.extend(node.args)
    return out


def _postorder(t: Term) -> list[Term]:
    # every node appears after all its descendants in the reversed list
    order = []
    stack = [t]
    while stack:
        node = stack.pop()
        order.append(node)
        if isinstance(node, App):
            stack.extend(node.args)
    order.reverse()
    return order


def format_term(t: Term) -> str:
    tokens: list[str] = []
    stack: list[object] = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            tokens.append(node)
        elif isinstance(node, Var):
            tokens.append(f"x{node.index}")
        elif not node.args:
            tokens.append(node.symbol)
        else:
            tokens.append(f"({node.symbol}")
            stack.append(")")
            stack.extend(reversed(node.args))
    return " ".join(tokens).replace(" )", ")")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def _atom(token: str, pos: int, sig: Signature) -> Term:
    m = _VAR_RE.match(token)
    if m:
        index = int(m.group(1))
        if index < 1:
            raise ParseError(f"variable index must be positive in {token!r}", pos)
        return Var(index)
    if token in sig:
        if sig.arity(token) != 0:
            raise ParseError(f"symbol {token!r} has arity {sig.arity(token)}, needs parentheses", pos)
        return App(token, ())
    raise ParseError(f"unknown symbol {token!r}", pos)


def parse_term(text: str, sig: Signature, max_length: int = MAX_TERM_LENGTH) -> Term:
    """Parse the s-expression rendering of a term over ``sig``."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 0)
    # stack of open applications: [symbol, arity, position, args...]
    stack: list[list] = []
    nodes = 0
    result: Term | None = None
    i = 0
    while i < len(tokens):
        tok, pos = tokens[i]
        if result is not None:
            raise ParseError(f"trailing input {tok!r}", pos)
        if tok == "(":
            if i + 1 >= len(tokens):
                raise ParseError("unbalanced '('", pos)
            sym, spos = tokens[i + 1]
            if sym in "()":
                raise ParseError("expected symbol after '('", spos)
            if sym not in sig:
                raise ParseError(f"unknown symbol {sym!r}", spos)
            stack.append([sym, sig.arity(sym), pos])
            i += 2
            continue
        if tok == ")":
            if not stack:
                raise ParseError("unexpected ')'", pos)
            sym, arity, opos, *args = stack.pop()
            if len(args) != arity:
                raise ParseError(
                    f"symbol {sym!r} expects {arity} arguments, got {len(args)}", opos
                )
            term: Term = App(sym, tuple(args))
            nodes += 1
            if nodes > max_length:
                raise ParseError(f"term exceeds maximum length {max_length}", pos)
            if stack:
                stack[-1].append(term)
            else:
                result = term
        else:
            term = _atom(tok, pos, sig)
            nodes += 1
            if nodes > max_length:
                raise ParseError(f"term exceeds maximum length {max_length}", pos)
            if stack:
                stack[-1].append(term)
            else:
                result = term
        i += 1
    if stack:
        raise ParseError("unbalanced '(': input ended inside application", stack[-1][2])
    assert result is not None
    return result


def substitute(t: Term, subst: Mapping[int, Term]) -> Term:
    """Simultaneous substitution; variables absent from ``subst`` are unchanged."""
    vals: dict[int, Term] = {}
    for node in _postorder(t):
        if isinstance(node, Var):
            vals[id(node)] = subst.get(node.index, node)
        else:
            vals[id(node)] = App(node.symbol, tuple(vals[id(a)] for a in node.args))
    return vals[id(t)]


def evaluate_term(t: Term, algebra, env: Mapping[int, object]):
    """Evaluate ``t`` in any algebra exposing ``sig`` and ``apply(symbol, args)``.

    ``env`` maps variable indices to elements and must cover all variables of t.
    """
    vals: dict[int, object] = {}
    for node in _postorder(t):
        if isinstance(node, Var):
            if node.index not in env:
                raise TermError(f"unbound variable x{node.index}")
            vals[id(node)] = env[node.index]
        else:
            if node.symbol not in algebra.sig:
                raise TermError(f"symbol {node.symbol!r} not in algebra signature")
            if algebra.sig.arity(node.symbol) != len(node.args):
                raise TermError(f"arity mismatch for {node.symbol!r}")
            vals[id(node)] = algebra.apply(
                node.symbol, tuple(vals[id(a)] for a in node.args)
            )
    return vals[id(t)]


def positions(t: Term) -> Iterator[tuple[int, ...]]:
    """All subterm positions as child-index paths, root first, depth-first."""
    stack: list[tuple[tuple[int, ...], Term]] = [((), t)]
    while stack:
        path, node = stack.pop()
        yield path
        if isinstance(node, App):
            for i in range(len(node.args) - 1, -1, -1):
                stack.append((path + (i,), node.args[i]))


def subterm_at(t: Term, path: tuple[int, ...]) -> Term:
    node = t
    for i in path:
        if not isinstance(node, App) or i >= len(node.args):
            raise TermError(f"invalid position {path}")
        node = node.args[i]
    return node


def replace_at(t: Term, path: tuple[int, ...], s: Term) -> Term:
    if not path:
        return s
    if not isinstance(t, App) or path[0] >= len(t.args):
        raise TermError(f"invalid position {path}")
    i = path[0]
    args = list(t.args)
    args[i] = replace_at(args[i], path[1:], s)
    return App(t.symbol, tuple(args))
