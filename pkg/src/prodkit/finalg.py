"""Finite algebras as flat operation tables.

Tables are row-major mixed-radix with the leftmost argument most significant:
the entry for f(a1,...,ak) on a carrier of size n sits at index
((a1*n + a2)*n + ...)*n + ak.  The text file format is::

    algebra <name>
    size <n>
    op <symbol> <arity>
    <n^arity integers, whitespace separated>

with one ``op`` block per symbol (a nullary op has exactly one integer).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property
from itertools import product as iproduct
from typing import Callable, Iterator, Sequence

from .terms import App, Signature, Term, TermError, Var, format_term, term_length

DEFAULT_PRODUCT_CAP = 10**6
DEFAULT_CLONE_CAP = 10**5


class CapExceeded(RuntimeError):
    """A configured size cap was hit before the computation could finish."""

    def __init__(self, message: str, partial=None) -> None:
        super().__init__(message)
        self.partial = partial


class SignatureMismatch(ValueError):
    pass


class AlgebraFormatError(ValueError):
    pass


class NotACongruenceError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteAlgebra:
    """Carrier {0..size-1} with one total operation table per symbol."""

    sig: Signature
    size: int
    tables: tuple[tuple[int, ...], ...]
    name: str = "A"

    def __post_init__(self) -> None:
        if self.size < 1:
            raise AlgebraFormatError(f"size must be positive, got {self.size}")
        if len(self.tables) != len(self.sig.symbols):
            raise AlgebraFormatError("one table per symbol required")
        for (sym, arity), table in zip(self.sig.symbols, self.tables):
            if len(table) != self.size**arity:
                raise AlgebraFormatError(
                    f"table for {sym!r} has {len(table)} entries, needs {self.size**arity}"
                )
            for v in table:
                if not 0 <= v < self.size:
                    raise AlgebraFormatError(f"table entry {v} for {sym!r} out of range")

    @cached_property
    def _ops(self) -> dict[str, tuple[int, tuple[int, ...]]]:
        return {
            sym: (arity, table)
            for (sym, arity), table in zip(self.sig.symbols, self.tables)
        }

    def apply(self, symbol: str, args: Sequence[int]) -> int:
        arity, table = self._ops[symbol]
        if len(args) != arity:
            raise TermError(f"{symbol!r} expects {arity} arguments, got {len(args)}")
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return table[idx]

    def elements(self) -> range:
        return range(self.size)

    def constants(self) -> list[int]:
        return [table[0] for (sym, arity), table in zip(self.sig.symbols, self.tables) if arity == 0]


def make_algebra(
    name: str, sig: Signature, size: int, impls: dict[str, Callable[..., int]]
) -> FiniteAlgebra:
    """Tabulate python callables into a FiniteAlgebra."""
    tables = []
    for sym, arity in sig.symbols:
        fn = impls[sym]
        tables.append(tuple(fn(*args) for args in iproduct(range(size), repeat=arity)))
    return FiniteAlgebra(sig, size, tuple(tables), name)


def encode_pair(a: int, b: int, bsize: int) -> int:
    return a * bsize + b


def decode_pair(c: int, bsize: int) -> tuple[int, int]:
    return divmod(c, bsize)


def make_product(
    A: FiniteAlgebra, B: FiniteAlgebra, cap: int = DEFAULT_PRODUCT_CAP
) -> FiniteAlgebra:
    """Direct product with element (a,b) encoded as a*|B|+b."""
    if A.sig != B.sig:
        raise SignatureMismatch(f"signatures differ: {A.sig.names} vs {B.sig.names}")
    n = A.size * B.size
    if n > cap:
        raise CapExceeded(f"product size {n} exceeds cap {cap}")
    tables = []
    for sym, arity in A.sig.symbols:
        table = []
        for args in iproduct(range(n), repeat=arity):
            decoded = [decode_pair(c, B.size) for c in args]
            va = A.apply(sym, tuple(a for a, _ in decoded))
            vb = B.apply(sym, tuple(b for _, b in decoded))
            table.append(encode_pair(va, vb, B.size))
        tables.append(tuple(table))
    return FiniteAlgebra(A.sig, n, tuple(tables), f"{A.name}x{B.name}")


def make_quotient(A: FiniteAlgebra, theta) -> tuple[FiniteAlgebra, list[int]]:
    """Quotient by a congruence given as a canonical-representative vector.

    Returns the quotient (carrier renumbered 0..m-1 in representative order)
    and the projection map carrier -> quotient element.  Well-definedness of
    every table is verified, not assumed.
    """
    canon = tuple(getattr(theta, "canon", theta))
    if len(canon) != A.size:
        raise NotACongruenceError("congruence size does not match carrier")
    reps = sorted(set(canon))
    index = {r: i for i, r in enumerate(reps)}
    proj = [index[canon[x]] for x in range(A.size)]
    # verify compatibility: the image of f(u) must only depend on classes of u
    for sym, arity in A.sig.symbols:
        for args in iproduct(range(A.size), repeat=arity):
            v = A.apply(sym, args)
            w = A.apply(sym, tuple(canon[a] for a in args))
            if canon[v] != canon[w]:
                raise NotACongruenceError(
                    f"partition not compatible with {sym!r} at {args}"
                )
    tables = []
    for sym, arity in A.sig.symbols:
        table = tuple(
            proj[A.apply(sym, tuple(reps[i] for i in args))]
            for args in iproduct(range(len(reps)), repeat=arity)
        )
        tables.append(table)
    quo = FiniteAlgebra(A.sig, len(reps), tuple(tables), f"{A.name}/~")
    return quo, proj


def is_idempotent(A: FiniteAlgebra) -> bool:
    """True iff f(x,...,x) = x for every basic operation and element."""
    for sym, arity in A.sig.symbols:
        if arity == 0:
            # a constant c satisfies c = x for all x only on a 1-element carrier
            if A.size > 1:
                return False
            continue
        for x in A.elements():
            if A.apply(sym, (x,) * arity) != x:
                return False
    return True


@dataclass(frozen=True)
class FiniteFunction:
    """A k-ary function on {0..size-1} as a flat graph (same index convention)."""

    size: int
    arity: int
    graph: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.graph) != self.size**self.arity:
            raise AlgebraFormatError("graph length does not match arity")
        for v in self.graph:
            if not 0 <= v < self.size:
                raise AlgebraFormatError(f"graph value {v} out of range")

    def __call__(self, *args: int) -> int:
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return self.graph[idx]


def iter_kary_clone(
    A: FiniteAlgebra, k: int, cap: int = DEFAULT_CLONE_CAP
) -> Iterator[tuple[FiniteFunction, Term]]:
    """Yield the k-ary clone in deterministic order with witnessing terms.

    Order is by witnessing-term length, ties by the formatted term.  Each
    distinct function graph is yielded once; raises CapExceeded if more than
    ``cap`` functions are found before the closure is exhausted.
    """
    if k < 1:
        raise ValueError("arity must be at least 1")
    n = A.size
    count = n**k
    tuples = list(iproduct(range(n), repeat=k))
    seen: set[tuple[int, ...]] = set()
    registered: list[tuple[tuple[int, ...], Term]] = []
    heap: list[tuple[int, str, int]] = []
    pending: list[tuple[Term, tuple[int, ...]]] = []

    def push(term: Term, graph: tuple[int, ...]) -> None:
        if graph not in seen:
            pending.append((term, graph))
            heapq.heappush(heap, (term_length(term), format_term(term), len(pending) - 1))

    for i in range(k):
        push(Var(i + 1), tuple(t[i] for t in tuples))
    for sym, arity in A.sig.symbols:
        if arity == 0:
            c = A.apply(sym, ())
            push(App(sym, ()), (c,) * count)

    while heap:
        _, _, slot = heapq.heappop(heap)
        term, graph = pending[slot]
        if graph in seen:
            continue
        if len(registered) >= cap:
            raise CapExceeded(
                f"{k}-ary clone exceeds cap {cap}", partial=list(registered)
            )
        seen.add(graph)
        registered.append((graph, term))
        yield FiniteFunction(n, k, graph), term
        new = len(registered) - 1
        for sym, arity in A.sig.symbols:
            if arity == 0:
                continue
            for combo in iproduct(range(len(registered)), repeat=arity):
                if new not in combo:
                    continue
                graphs = [registered[i][0] for i in combo]
                out = tuple(
                    A.apply(sym, tuple(g[ti] for g in graphs)) for ti in range(count)
                )
                if out not in seen:
                    push(App(sym, tuple(registered[i][1] for i in combo)), out)


def kary_clone(
    A: FiniteAlgebra, k: int, cap: int = DEFAULT_CLONE_CAP
) -> list[tuple[FiniteFunction, Term]]:
    return list(iter_kary_clone(A, k, cap))


def unary_clone(A: FiniteAlgebra, cap: int = DEFAULT_CLONE_CAP) -> list[tuple[FiniteFunction, Term]]:
    """All unary term operations (including constants from nullary symbols)."""
    return kary_clone(A, 1, cap)


def is_malcev_function(f: FiniteFunction) -> bool:
    n = f.size
    return all(
        f(x, y, y) == x and f(y, y, x) == x for x in range(n) for y in range(n)
    )


def find_malcev(
    A: FiniteAlgebra, cap: int = DEFAULT_CLONE_CAP
) -> tuple[FiniteFunction, Term] | None:
    """First Mal'cev member of the ternary clone in deterministic order.

    Returns None only after the whole clone has been exhausted; a cap hit
    before exhaustion raises CapExceeded (inconclusive).
    """
    for fn, term in iter_kary_clone(A, 3, cap):
        if is_malcev_function(fn):
            return fn, term
    return None


def parse_algebra(text: str) -> FiniteAlgebra:
    tokens = text.split()
    pos = 0

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise AlgebraFormatError("unexpected end of algebra file")
        tok = tokens[pos]
        pos += 1
        if expected is not None and tok != expected:
            raise AlgebraFormatError(f"expected {expected!r}, got {tok!r}")
        return tok

    take("algebra")
    name = take()
    take("size")
    try:
        size = int(take())
    except ValueError as e:
        raise AlgebraFormatError(f"bad size: {e}")
    if size < 1:
        raise AlgebraFormatError("size must be positive")
    symbols: list[tuple[str, int]] = []
    tables: list[tuple[int, ...]] = []
    while pos < len(tokens):
        take("op")
        sym = take()
        try:
            arity = int(take())
        except ValueError as e:
            raise AlgebraFormatError(f"bad arity for {sym!r}: {e}")
        entries = []
        for _ in range(size**arity):
            tok = take()
            try:
                v = int(tok)
            except ValueError:
                raise AlgebraFormatError(f"bad table entry {tok!r} for {sym!r}")
            if not 0 <= v < size:
                raise AlgebraFormatError(f"table entry {v} for {sym!r} out of range 0..{size-1}")
            entries.append(v)
        symbols.append((sym, arity))
        tables.append(tuple(entries))
    if not symbols:
        raise AlgebraFormatError("algebra file declares no operations")
    return FiniteAlgebra(Signature(tuple(symbols)), size, tuple(tables), name)


def format_algebra(A: FiniteAlgebra) -> str:
    lines = [f"algebra {A.name}", f"size {A.size}"]
    for (sym, arity), table in zip(A.sig.symbols, A.tables):
        lines.append(f"op {sym} {arity}")
        lines.append(" ".join(str(v) for v in table))
    return "\n".join(lines) + "\n"


def load_algebra(path) -> FiniteAlgebra:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


def save_algebra(A: FiniteAlgebra, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_algebra(A))
