"""Subuniverse closure, generation certificates, and the two explicit
generating-set constructions for direct products (the Mal'cev-term route and
the surjective-unary-clone route), plus bounded closure for computable,
possibly infinite algebras.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Iterable, Mapping, Sequence

from .finalg import (
    DEFAULT_CLONE_CAP,
    FiniteAlgebra,
    FiniteFunction,
    encode_pair,
    make_product,
    unary_clone,
)
from .congruences import HypothesisError
from .terms import App, Signature, Term, Var, evaluate_term, format_term, term_length


@dataclass(frozen=True)
class GenerationCertificate:
    """Per-element witnessing terms over the generators.

    Variable x(i+1) in a witness stands for generators[i]; evaluating an
    element's witness at the generators yields the element.
    """

    generators: tuple[int, ...]
    witnesses: dict[int, Term] = field(compare=False)

    def env(self) -> dict[int, int]:
        return {i + 1: g for i, g in enumerate(self.generators)}

    def check(self, A: FiniteAlgebra) -> bool:
        env = self.env()
        return all(
            evaluate_term(w, A, env) == e for e, w in self.witnesses.items()
        )


def close(A: FiniteAlgebra, X: Iterable[int]) -> tuple[set[int], GenerationCertificate]:
    """Least subuniverse containing X and all constants, with certificates.

    Elements are registered in order of (witnessing-term length, element), so
    every certificate term is length-minimal and the result is deterministic.
    """
    gens = tuple(sorted(set(X)))
    for x in gens:
        if not 0 <= x < A.size:
            raise ValueError(f"generator {x} outside carrier")
    witnesses: dict[int, Term] = {}
    heap: list[tuple[int, int, int]] = []
    pending: list[tuple[Term, int]] = []

    def push(term: Term, elem: int) -> None:
        if elem not in witnesses:
            pending.append((term, elem))
            heapq.heappush(heap, (term_length(term), elem, len(pending) - 1))

    for i, g in enumerate(gens):
        push(Var(i + 1), g)
    for sym, arity in A.sig.symbols:
        if arity == 0:
            push(App(sym, ()), A.apply(sym, ()))

    members: list[int] = []
    while heap:
        _, _, slot = heapq.heappop(heap)
        term, elem = pending[slot]
        if elem in witnesses:
            continue
        witnesses[elem] = term
        members.append(elem)
        for sym, arity in A.sig.symbols:
            if arity == 0:
                continue
            for combo in iproduct(range(len(members)), repeat=arity):
                if len(members) - 1 not in combo:
                    continue
                args = tuple(members[i] for i in combo)
                out = A.apply(sym, args)
                if out not in witnesses:
                    push(App(sym, tuple(witnesses[a] for a in args)), out)
    return set(witnesses), GenerationCertificate(gens, witnesses)


def generates(A: FiniteAlgebra, X: Iterable[int]) -> bool:
    closure, _ = close(A, X)
    return len(closure) == A.size


def _check_malcev_term(m: Term, A: FiniteAlgebra) -> bool:
    for x in range(A.size):
        for y in range(A.size):
            if evaluate_term(m, A, {1: x, 2: y, 3: y}) != x:
                return False
            if evaluate_term(m, A, {1: y, 2: y, 3: x}) != x:
                return False
    return True


@dataclass(frozen=True)
class MalcevGensetResult:
    product: FiniteAlgebra
    z: tuple[int, ...]  # encoded product elements, sorted
    x_prime: tuple[int, ...]
    y_prime: tuple[int, ...]

    def decoded(self, bsize: int) -> list[tuple[int, int]]:
        return [divmod(c, bsize) for c in self.z]


def malcev_genset(
    A: FiniteAlgebra,
    B: FiniteAlgebra,
    X: Iterable[int],
    Y: Iterable[int],
    a0: int,
    b0: int,
    m: Term | FiniteFunction,
) -> MalcevGensetResult:
    """Generating set Z = (X' x {b0}) u ({a0} x Y') u {(a0,b0)} of A x B.

    X' extends X by the diagonal values f(a0,...,a0), likewise Y'.  The
    Mal'cev witness m is either a term (checked on both factors) or a ternary
    function on the product (checked there); X must generate A and Y must
    generate B.  The returned Z is checked to generate the product; a failure
    there would be an implementation bug, since the construction guarantees it.
    """
    xs, ys = sorted(set(X)), sorted(set(Y))
    if not generates(A, xs):
        raise HypothesisError(f"X={xs} does not generate {A.name}")
    if not generates(B, ys):
        raise HypothesisError(f"Y={ys} does not generate {B.name}")
    if isinstance(m, FiniteFunction):
        from .finalg import is_malcev_function

        if m.arity != 3 or m.size != A.size * B.size:
            raise HypothesisError("Mal'cev function must be ternary on the product")
        if not is_malcev_function(m):
            raise HypothesisError("function is not Mal'cev on the product")
    else:
        if not _check_malcev_term(m, A):
            raise HypothesisError(f"term {format_term(m)} is not Mal'cev on {A.name}")
        if not _check_malcev_term(m, B):
            raise HypothesisError(f"term {format_term(m)} is not Mal'cev on {B.name}")
    x_prime = sorted(set(xs) | {A.apply(sym, (a0,) * k) for sym, k in A.sig.symbols})
    y_prime = sorted(set(ys) | {B.apply(sym, (b0,) * k) for sym, k in B.sig.symbols})
    nb = B.size
    z = sorted(
        {encode_pair(x, b0, nb) for x in x_prime}
        | {encode_pair(a0, y, nb) for y in y_prime}
        | {encode_pair(a0, b0, nb)}
    )
    P = make_product(A, B)
    if not generates(P, z):
        raise AssertionError("Z fails to generate the product; implementation bug")
    return MalcevGensetResult(P, tuple(z), tuple(x_prime), tuple(y_prime))


@dataclass(frozen=True)
class SurjectiveGensetResult:
    product: FiniteAlgebra
    z: tuple[int, ...]
    x_extended: tuple[int, ...]
    extension: tuple[int, ...]  # elements added to X by orbit closure


def surjective_clone_genset(
    A: FiniteAlgebra,
    B: FiniteAlgebra,
    X: Iterable[int],
    Y: Iterable[int],
    cap: int = DEFAULT_CLONE_CAP,
) -> SurjectiveGensetResult:
    """Generating set Z = X x Y of A x B under the surjective-unary-clone route.

    Every unary clone member of both factors must be surjective (checked,
    with the offending witness named otherwise); X is closed under the
    action of A's unary clone by minimal orbit extension, reported back.
    """
    xs, ys = sorted(set(X)), sorted(set(Y))
    clone_a = unary_clone(A, cap)
    clone_b = unary_clone(B, cap)
    for alg, clone in ((A, clone_a), (B, clone_b)):
        for fn, term in clone:
            if len(set(fn.graph)) != alg.size:
                raise HypothesisError(
                    f"unary clone member {format_term(term)} of {alg.name} is not surjective"
                )
    extended = set(xs)
    for fn, _ in clone_a:
        extended |= {fn(x) for x in xs}
    # the clone is a group of bijections, so one application of every member
    # already closes the orbit (it contains all inverses)
    x_ext = sorted(extended)
    if not generates(A, x_ext):
        raise HypothesisError(f"X={xs} does not generate {A.name}")
    if not generates(B, ys):
        raise HypothesisError(f"Y={ys} does not generate {B.name}")
    nb = B.size
    z = sorted(encode_pair(x, y, nb) for x in x_ext for y in ys)
    P = make_product(A, B)
    if not generates(P, z):
        raise AssertionError("X x Y fails to generate the product; implementation bug")
    return SurjectiveGensetResult(
        P, tuple(z), tuple(x_ext), tuple(sorted(extended - set(xs)))
    )


# ---------------------------------------------------------------------------
# computable (possibly infinite) algebras


@dataclass(frozen=True)
class ComputableAlgebra:
    """An algebra given by computable operations on opaque hashable elements.

    ``key`` orders elements for deterministic enumeration.
    """

    name: str
    sig: Signature
    ops: Mapping[str, Callable]
    key: Callable = lambda e: e

    def apply(self, symbol: str, args: Sequence) :
        return self.ops[symbol](*args)


def computable_square(C: ComputableAlgebra) -> ComputableAlgebra:
    """The direct square of a computable algebra, acting on pairs."""

    def lift(sym: str, k: int) -> Callable:
        fn = C.ops[sym]

        def op(*pairs):
            return (fn(*(p[0] for p in pairs)), fn(*(p[1] for p in pairs)))

        return op

    ops = {sym: lift(sym, k) for sym, k in C.sig.symbols}
    return ComputableAlgebra(
        f"{C.name}^2", C.sig, ops, key=lambda p: (C.key(p[0]), C.key(p[1]))
    )


@dataclass(frozen=True)
class BoundedClosure:
    elements: tuple
    rounds_done: int
    budget_hit: bool


def bounded_close(
    C: ComputableAlgebra,
    X: Iterable,
    max_elements: int = 10**5,
    max_rounds: int = 8,
) -> BoundedClosure:
    """Apply all operations to all tuples of the current set, round by round.

    Budget exhaustion is a normal, flagged outcome (never an error); the
    result is monotone in both budgets.  Elements are returned sorted by the
    algebra's key.
    """
    current = sorted(set(X), key=C.key)
    seen = set(current)
    budget_hit = False
    rounds = 0
    for _ in range(max_rounds):
        new = []
        for sym, k in C.sig.symbols:
            fn = C.ops[sym]
            for args in iproduct(current, repeat=k):
                e = fn(*args)
                if e not in seen:
                    if len(seen) >= max_elements:
                        budget_hit = True
                        break
                    seen.add(e)
                    new.append(e)
            if budget_hit:
                break
        rounds += 1
        if budget_hit or not new:
            break
        current = sorted(seen, key=C.key)
    return BoundedClosure(tuple(sorted(seen, key=C.key)), rounds, budget_hit)
