"""Rewriting engines behind the finite-presentability arguments.

Covers: normal forms for idempotent magmas (the single rule s*s -> s), the
kernel membership test for the squaring homomorphism on four generators,
bounded exploration of congruence classes of terms, normal-form reduction
over closed loop presentations, and the Whitman condition check on finite
lattices.

The loop presentation file format is::

    loop-presentation
    generators z1 z2 ...
    z1 · z1 -> z2
    ...

where each rule combines two generators under one of the basic operations
``·  \\  /`` and yields a generator or ``1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .finalg import FiniteAlgebra
from .terms import (
    App,
    Signature,
    Term,
    TermError,
    Var,
    format_term,
    positions,
    replace_at,
    substitute,
    subterm_at,
    term_length,
    variables,
)

MAGMA_OP = "·"
MAGMA_SIG = Signature(((MAGMA_OP, 2),))
LOOP_OPS = ("·", "\\", "/")
LOOP_SIG = Signature((("·", 2), ("\\", 2), ("/", 2), ("1", 0)))
LATTICE_SIG = Signature((("∧", 2), ("∨", 2)))

KER_H_VARS = (11, 12, 21, 22)


class NotALoopError(ValueError):
    pass


class NotALatticeError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    lhs: Term
    rhs: Term

    def __post_init__(self) -> None:
        if term_length(self.rhs) >= term_length(self.lhs):
            raise ValueError("rewrite rules here must be length-reducing")


# ---------------------------------------------------------------------------
# idempotent magma normal forms


def _check_magma_term(t: Term) -> None:
    for p in positions(t):
        node = subterm_at(t, p)
        if isinstance(node, App) and (node.symbol != MAGMA_OP or len(node.args) != 2):
            raise TermError(f"term is not over the single binary symbol {MAGMA_OP!r}")


def idem_nf(t: Term) -> Term:
    """Normal form under s*s -> s, applied anywhere to fixpoint.

    Computed bottom-up in one pass; the system is confluent, so the result
    does not depend on the application order (tested exhaustively elsewhere).
    """
    _check_magma_term(t)
    vals: dict[int, Term] = {}
    order = []
    stack = [t]
    while stack:
        node = stack.pop()
        order.append(node)
        if isinstance(node, App):
            stack.extend(node.args)
    for node in reversed(order):
        if isinstance(node, Var):
            vals[id(node)] = node
        else:
            a, b = (vals[id(x)] for x in node.args)
            vals[id(node)] = a if a == b else App(MAGMA_OP, (a, b))
    return vals[id(t)]


def idem_contractions(t: Term) -> list[Term]:
    """All single-step s*s -> s rewrites of t, in position order."""
    out = []
    for p in positions(t):
        node = subterm_at(t, p)
        if isinstance(node, App) and node.args[0] == node.args[1]:
            out.append(replace_at(t, p, node.args[0]))
    return out


def idem_expansions(t: Term, length_cap: int) -> list[Term]:
    """All single-step s -> s*s rewrites of t that stay within length_cap."""
    out = []
    base = term_length(t)
    for p in positions(t):
        node = subterm_at(t, p)
        if base + term_length(node) + 1 <= length_cap:
            out.append(replace_at(t, p, App(MAGMA_OP, (node, node))))
    return out


def ker_h_member(s: Term, t: Term) -> bool:
    """Whether (s,t) lies in the kernel of x_ij -> (x_i, x_j).

    Both coordinate substitutions must agree modulo idempotence:
    the row substitution sends x11,x12 -> x1 and x21,x22 -> x2, the column
    substitution sends x11,x21 -> x1 and x12,x22 -> x2.
    """
    for u in (s, t):
        bad = variables(u) - set(KER_H_VARS)
        if bad:
            raise TermError(f"kernel test terms must use x11,x12,x21,x22; got x{min(bad)}")
    rows = {11: Var(1), 12: Var(1), 21: Var(2), 22: Var(2)}
    cols = {11: Var(1), 12: Var(2), 21: Var(1), 22: Var(2)}
    return idem_nf(substitute(s, rows)) == idem_nf(substitute(t, rows)) and idem_nf(
        substitute(s, cols)
    ) == idem_nf(substitute(t, cols))


@dataclass(frozen=True)
class BoundedClassResult:
    terms: frozenset[Term]
    truncated: bool


def bounded_class(
    u: Term,
    S: Iterable[tuple[Term, Term]],
    length_cap: Optional[int] = None,
    count_cap: int = 10**5,
) -> BoundedClassResult:
    """Explore u's class under idempotence and the pairs in S, bidirectionally.

    Every pair in S must pass ker_h_member (checked).  Terms never exceed
    length_cap (default |u|+4); hitting count_cap returns the partial class
    flagged as truncated.
    """
    cap = length_cap if length_cap is not None else term_length(u) + 4
    rules: list[tuple[Term, Term]] = []
    for l, r in S:
        if not ker_h_member(l, r):
            raise ValueError(
                f"pair ({format_term(l)}, {format_term(r)}) is not in the kernel"
            )
        rules.append((l, r))
        rules.append((r, l))
    seen = {u}
    frontier = [u]
    truncated = False
    while frontier and not truncated:
        next_frontier = []
        for t in sorted(frontier, key=lambda x: (term_length(x), format_term(x))):
            neighbors = idem_contractions(t) + idem_expansions(t, cap)
            for l, r in rules:
                growth = term_length(r) - term_length(l)
                for p in positions(t):
                    if subterm_at(t, p) == l and term_length(t) + growth <= cap:
                        neighbors.append(replace_at(t, p, r))
            for w in neighbors:
                if w not in seen:
                    if len(seen) >= count_cap:
                        truncated = True
                        break
                    seen.add(w)
                    next_frontier.append(w)
            if truncated:
                break
        frontier = next_frontier
    return BoundedClassResult(frozenset(seen), truncated)


# ---------------------------------------------------------------------------
# closed loop presentations


@dataclass(frozen=True)
class ClosedLoopPresentation:
    """Relations z_i o z_j = z_k over generators (with 1 allowed as a value)."""

    generators: tuple[str, ...]
    rules: frozenset[tuple[str, str, str, str]]  # (zi, op, zj, zk)

    def __post_init__(self) -> None:
        names = set(self.generators) | {"1"}
        for zi, op, zj, zk in self.rules:
            if op not in LOOP_OPS:
                raise ValueError(f"unknown loop operation {op!r}")
            if not {zi, zj, zk} <= names:
                raise ValueError(f"rule {(zi, op, zj, zk)} uses undeclared names")

    @property
    def signature(self) -> Signature:
        return Signature(LOOP_SIG.symbols + tuple((z, 0) for z in self.generators))

    def lookup(self) -> dict[tuple[str, str, str], str]:
        return {(zi, op, zj): zk for zi, op, zj, zk in self.rules}


def _constant_name(node: Term) -> Optional[str]:
    if isinstance(node, App) and not node.args:
        return node.symbol
    return None


def loop_reduce(t: Term, P: ClosedLoopPresentation) -> Term:
    """Normal form of t under P's rules plus the loop-identity rewrites.

    Applies, bottom-up to fixpoint: z_i o z_j -> z_k from P, the unit laws
    x·1 -> x and 1·x -> x, and the four length-reducing division laws
    y\\(y·x) -> x, y·(y\\x) -> x, (x·y)/y -> x, (x/y)·y -> x.
    """
    table = P.lookup()

    def root_step(node: App) -> Optional[Term]:
        op = node.symbol
        a, b = node.args
        ca, cb = _constant_name(a), _constant_name(b)
        if ca is not None and cb is not None and (ca, op, cb) in table:
            return App(table[(ca, op, cb)], ())
        if op == "·":
            if cb == "1":
                return a
            if ca == "1":
                return b
            # y·(y\x) -> x and (x/y)·y -> x
            if isinstance(b, App) and b.symbol == "\\" and b.args[0] == a:
                return b.args[1]
            if isinstance(a, App) and a.symbol == "/" and a.args[1] == b:
                return a.args[0]
        elif op == "\\":
            # y\(y·x) -> x
            if isinstance(b, App) and b.symbol == "·" and b.args[0] == a:
                return b.args[1]
        elif op == "/":
            # (x·y)/y -> x
            if isinstance(a, App) and a.symbol == "·" and a.args[1] == b:
                return a.args[0]
        return None

    def nf(node: Term) -> Term:
        if isinstance(node, Var) or not node.args:
            return node
        reduced: Term = App(node.symbol, tuple(nf(a) for a in node.args))
        # subterms of any root_step result are already normal, so only the
        # (possibly new) root can fire again
        while isinstance(reduced, App) and reduced.args:
            step = root_step(reduced)
            if step is None:
                break
            reduced = step
        return reduced

    return nf(t)


LOOP_IDENTITY_NAMES = (
    "y\\(y·x)=x",
    "y·(y\\x)=x",
    "(x·y)/y=x",
    "(x/y)·y=x",
    "x·1=x",
    "1·x=x",
)


def check_loop(L: FiniteAlgebra) -> Optional[tuple[str, tuple[int, ...]]]:
    """Return a violated loop identity with witness arguments, or None."""
    if L.sig != LOOP_SIG:
        raise NotALoopError(f"expected loop signature {LOOP_SIG.names}, got {L.sig.names}")
    e = L.apply("1", ())
    for x in range(L.size):
        if L.apply("·", (x, e)) != x:
            return "x·1=x", (x,)
        if L.apply("·", (e, x)) != x:
            return "1·x=x", (x,)
    for x in range(L.size):
        for y in range(L.size):
            if L.apply("\\", (y, L.apply("·", (y, x)))) != x:
                return "y\\(y·x)=x", (x, y)
            if L.apply("·", (y, L.apply("\\", (y, x)))) != x:
                return "y·(y\\x)=x", (x, y)
            if L.apply("/", (L.apply("·", (x, y)), y)) != x:
                return "(x·y)/y=x", (x, y)
            if L.apply("·", (L.apply("/", (x, y)), y)) != x:
                return "(x/y)·y=x", (x, y)
    return None


def closed_presentation_from_loop(L: FiniteAlgebra) -> ClosedLoopPresentation:
    """Read a closed relation set off a finite loop's Cayley tables.

    One generator z_e per non-identity element e, one rule per operation and
    ordered pair of non-identity elements (pairs involving the unit reduce by
    the unit laws instead).
    """
    violation = check_loop(L)
    if violation is not None:
        name, args = violation
        raise NotALoopError(f"identity {name} fails at {args}")
    e = L.apply("1", ())
    token = {x: f"z{x}" if x != e else "1" for x in range(L.size)}
    gens = tuple(token[x] for x in range(L.size) if x != e)
    rules = set()
    for op in LOOP_OPS:
        for a in range(L.size):
            for b in range(L.size):
                if a == e or b == e:
                    continue
                rules.add((token[a], op, token[b], token[L.apply(op, (a, b))]))
    return ClosedLoopPresentation(gens, frozenset(rules))


def parse_presentation(text: str) -> ClosedLoopPresentation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "loop-presentation":
        raise ValueError("presentation file must start with 'loop-presentation'")
    if len(lines) < 2 or not lines[1].startswith("generators"):
        raise ValueError("presentation file needs a 'generators' line")
    gens = tuple(lines[1].split()[1:])
    rules = set()
    for ln in lines[2:]:
        parts = ln.split()
        if len(parts) != 5 or parts[3] != "->":
            raise ValueError(f"bad rule line {ln!r}")
        zi, op, zj, _, zk = parts
        rules.add((zi, op, zj, zk))
    return ClosedLoopPresentation(gens, frozenset(rules))


def format_presentation(P: ClosedLoopPresentation) -> str:
    lines = ["loop-presentation", "generators " + " ".join(P.generators)]
    for zi, op, zj, zk in sorted(P.rules):
        lines.append(f"{zi} {op} {zj} -> {zk}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Whitman's condition


def check_lattice(L: FiniteAlgebra) -> Optional[tuple[str, tuple[int, ...]]]:
    """Return a violated lattice identity with witness, or None."""
    if set(L.sig.names) != set(LATTICE_SIG.names):
        raise NotALatticeError(
            f"expected lattice signature {LATTICE_SIG.names}, got {L.sig.names}"
        )
    meet = lambda a, b: L.apply("∧", (a, b))
    join = lambda a, b: L.apply("∨", (a, b))
    n = L.size
    for x in range(n):
        for y in range(n):
            if meet(x, y) != meet(y, x):
                return "x∧y=y∧x", (x, y)
            if join(x, y) != join(y, x):
                return "x∨y=y∨x", (x, y)
            if meet(x, join(x, y)) != x:
                return "x∧(x∨y)=x", (x, y)
            if join(x, meet(x, y)) != x:
                return "x∨(x∧y)=x", (x, y)
            for z in range(n):
                if meet(meet(x, y), z) != meet(x, meet(y, z)):
                    return "(x∧y)∧z=x∧(y∧z)", (x, y, z)
                if join(join(x, y), z) != join(x, join(y, z)):
                    return "(x∨y)∨z=x∨(y∨z)", (x, y, z)
    return None


@dataclass(frozen=True)
class WhitmanReport:
    holds: bool
    violations: tuple[tuple[int, int, int, int], ...]


def whitman_check(L: FiniteAlgebra) -> WhitmanReport:
    """Check x∧y <= u∨v iff (x <= u∨v or y <= u∨v or x∧y <= u or x∧y <= v).

    The order is a <= b iff a∧b = a.  All violating quadruples are reported
    in lexicographic order.
    """
    violation = check_lattice(L)
    if violation is not None:
        name, args = violation
        raise NotALatticeError(f"identity {name} fails at {args}")
    n = L.size
    meet = lambda a, b: L.apply("∧", (a, b))
    join = lambda a, b: L.apply("∨", (a, b))
    leq = [[meet(a, b) == a for b in range(n)] for a in range(n)]
    violations = []
    for x in range(n):
        for y in range(n):
            xy = meet(x, y)
            for u in range(n):
                for v in range(n):
                    uv = join(u, v)
                    lhs = leq[xy][uv]
                    rhs = leq[x][uv] or leq[y][uv] or leq[xy][u] or leq[xy][v]
                    if lhs != rhs:
                        violations.append((x, y, u, v))
    return WhitmanReport(not violations, tuple(violations))
