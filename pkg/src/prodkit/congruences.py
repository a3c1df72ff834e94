"""Congruences of finite algebras and the machinery built on them.

A congruence is stored as its canonical-representative vector: canon[i] is
the least element of i's class.  Equality of congruences is equality of
these vectors.  The module covers congruence generation (cg), the full
congruence lattice, the product-congruence decompositions rho v (0x1) and
rho ^ (1x0), the modular commutator via the delta construction on the
subalgebra A(alpha) of A^2, the term-condition falsification oracle, and
the finite-index separation procedure for direct products.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Callable, Iterable, Optional

from .finalg import (
    DEFAULT_CLONE_CAP,
    CapExceeded,
    FiniteAlgebra,
    NotACongruenceError,
    decode_pair,
    encode_pair,
    make_product,
    make_quotient,
)
from .terms import Term, evaluate_term, variables

DEFAULT_CON_CAP = 10**5


class HypothesisError(ValueError):
    """A stated precondition of a theorem-backed operation does not hold."""


@dataclass(frozen=True)
class Congruence:
    size: int
    canon: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.canon) != self.size:
            raise NotACongruenceError("canon vector length != size")
        for i, c in enumerate(self.canon):
            if not 0 <= c <= i:
                raise NotACongruenceError(f"canon[{i}]={c} is not a least representative")
            if self.canon[c] != c:
                raise NotACongruenceError("canonical map is not idempotent")

    def related(self, a: int, b: int) -> bool:
        return self.canon[a] == self.canon[b]

    @property
    def num_classes(self) -> int:
        return len(set(self.canon))

    def classes(self) -> list[list[int]]:
        blocks: dict[int, list[int]] = {}
        for i, c in enumerate(self.canon):
            blocks.setdefault(c, []).append(i)
        return [blocks[r] for r in sorted(blocks)]

    def pairs(self) -> list[tuple[int, int]]:
        """All related ordered pairs, including the diagonal."""
        return [
            (a, b)
            for a in range(self.size)
            for b in range(self.size)
            if self.canon[a] == self.canon[b]
        ]


def discrete(n: int) -> Congruence:
    return Congruence(n, tuple(range(n)))


def total(n: int) -> Congruence:
    return Congruence(n, (0,) * n)


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def canon(self) -> tuple[int, ...]:
        n = len(self.parent)
        least: dict[int, int] = {}
        for i in range(n):
            r = self.find(i)
            if r not in least:
                least[r] = i
        return tuple(least[self.find(i)] for i in range(n))


def from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Equivalence closure of a pair set (no compatibility requirement)."""
    uf = _UnionFind(n)
    for a, b in pairs:
        uf.union(a, b)
    return Congruence(n, uf.canon())


def is_congruence(A: FiniteAlgebra, theta: Congruence) -> bool:
    """Exhaustive compatibility check of a partition with all operations.

    One argument position at a time suffices: componentwise-related tuples
    are linked by a chain of single-coordinate changes.
    """
    if theta.size != A.size:
        return False
    n = A.size
    canon = theta.canon
    related = [
        (a, b) for a in range(n) for b in range(a + 1, n) if canon[a] == canon[b]
    ]
    for sym, arity in A.sig.symbols:
        if arity == 0:
            continue
        for i in range(arity):
            for ctx in iproduct(range(n), repeat=arity - 1):
                for a, b in related:
                    u = A.apply(sym, ctx[:i] + (a,) + ctx[i:])
                    v = A.apply(sym, ctx[:i] + (b,) + ctx[i:])
                    if canon[u] != canon[v]:
                        return False
    return True


def cg(A: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least congruence of A containing the given pairs.

    Union-find seeded with the pairs; every merge triggers the one-step
    translation rule f(t[i:=a]) ~ f(t[i:=b]) for each basic operation f,
    position i and context tuple t, to fixpoint.
    """
    n = A.size
    uf = _UnionFind(n)
    work = []
    for a, b in pairs:
        if not 0 <= a < n or not 0 <= b < n:
            raise ValueError(f"pair ({a},{b}) outside carrier 0..{n-1}")
        work.append((a, b))
    ops = [(sym, arity) for sym, arity in A.sig.symbols if arity > 0]
    while work:
        a, b = work.pop()
        if not uf.union(a, b):
            continue
        for sym, arity in ops:
            for i in range(arity):
                for ctx in iproduct(range(n), repeat=arity - 1):
                    u = A.apply(sym, ctx[:i] + (a,) + ctx[i:])
                    v = A.apply(sym, ctx[:i] + (b,) + ctx[i:])
                    if uf.find(u) != uf.find(v):
                        work.append((u, v))
    return Congruence(n, uf.canon())


def principal(A: FiniteAlgebra, a: int, b: int) -> Congruence:
    return cg(A, [(a, b)])


def con_join(t1: Congruence, t2: Congruence) -> Congruence:
    if t1.size != t2.size:
        raise ValueError("congruences live on different carriers")
    uf = _UnionFind(t1.size)
    for i in range(t1.size):
        uf.union(i, t1.canon[i])
        uf.union(i, t2.canon[i])
    return Congruence(t1.size, uf.canon())


def con_meet(t1: Congruence, t2: Congruence) -> Congruence:
    if t1.size != t2.size:
        raise ValueError("congruences live on different carriers")
    first: dict[tuple[int, int], int] = {}
    canon = []
    for i in range(t1.size):
        key = (t1.canon[i], t2.canon[i])
        if key not in first:
            first[key] = i
        canon.append(first[key])
    return Congruence(t1.size, tuple(canon))


def con_leq(t1: Congruence, t2: Congruence) -> bool:
    """t1 refines t2."""
    return all(t2.canon[t1.canon[i]] == t2.canon[i] for i in range(t1.size))


def con_all(A: FiniteAlgebra, cap: int = DEFAULT_CON_CAP) -> list[Congruence]:
    """All congruences: principal ones closed under pairwise join.

    Sorted finest first: descending number of classes, then canon vector,
    so the list runs from 0_A to 1_A.
    """
    n = A.size
    found = {discrete(n)}
    for a in range(n):
        for b in range(a + 1, n):
            found.add(cg(A, [(a, b)]))
            if len(found) > cap:
                raise CapExceeded(f"congruence count exceeds cap {cap}")
    frontier = list(found)
    while frontier:
        new = []
        for t1 in frontier:
            for t2 in list(found):
                j = con_join(t1, t2)
                if j not in found:
                    found.add(j)
                    new.append(j)
                    if len(found) > cap:
                        raise CapExceeded(f"congruence count exceeds cap {cap}")
        frontier = new
    return sorted(found, key=lambda t: (-t.num_classes, t.canon))


def is_modular_conlattice(
    A: FiniteAlgebra, cap: int = DEFAULT_CON_CAP
) -> tuple[bool, Optional[tuple[Congruence, Congruence, Congruence]]]:
    """Check x >= z implies x ^ (y v z) = (x ^ y) v z over Con(A).

    Returns (True, None) or (False, violating (x, y, z))."""
    cons = con_all(A, cap)
    for x in cons:
        for z in cons:
            if not con_leq(z, x):
                continue
            for y in cons:
                lhs = con_meet(x, con_join(y, z))
                rhs = con_join(con_meet(x, y), z)
                if lhs != rhs:
                    return False, (x, y, z)
    return True, None


# ---------------------------------------------------------------------------
# product congruences


@dataclass(frozen=True)
class CongruencePair:
    left: Congruence
    right: Congruence


def product_congruence(alpha: Congruence, beta: Congruence) -> Congruence:
    """alpha x beta on the encoded product carrier."""
    nb = beta.size
    canon = tuple(
        encode_pair(alpha.canon[a], beta.canon[b], nb)
        for a in range(alpha.size)
        for b in range(nb)
    )
    return Congruence(alpha.size * nb, canon)


def zero_times_one(asize: int, bsize: int) -> Congruence:
    return product_congruence(discrete(asize), total(bsize))


def one_times_zero(asize: int, bsize: int) -> Congruence:
    return product_congruence(total(asize), discrete(bsize))


def product_join_tau(A: FiniteAlgebra, B: FiniteAlgebra, rho: Congruence) -> Congruence:
    """The A-side of rho v (0_A x 1_B), which is always a product congruence.

    Verifies rho v (0x1) = tau x 1 exactly and raises if not (which would
    mean rho was not a congruence of the encoded product)."""
    nb = B.size
    join = con_join(rho, zero_times_one(A.size, nb))
    tau = Congruence(
        A.size,
        tuple(
            decode_pair(join.canon[encode_pair(u, 0, nb)], nb)[0] for u in range(A.size)
        ),
    )
    if product_congruence(tau, total(nb)) != join:
        raise NotACongruenceError("rho v (0x1) is not tau x 1; broken input congruence")
    return tau


@dataclass(frozen=True)
class SigmaResult:
    sigma: Congruence
    is_congruence: bool
    meet_is_product: bool

    @property
    def hypothesis_ok(self) -> bool:
        return self.is_congruence and self.meet_is_product


def product_meet_sigma(A: FiniteAlgebra, B: FiniteAlgebra, rho: Congruence) -> SigmaResult:
    """sigma = {(u,v) : (u,b) rho (v,b) for some b}, with verification.

    In a congruence modular setting rho ^ (1x0) = sigma x 0 holds; if either
    sigma fails to be a congruence or the meet equation fails, the flags say
    so (hypothesis violation is a reported outcome, not an error)."""
    na, nb = A.size, B.size
    raw: set[tuple[int, int]] = set()
    for u in range(na):
        for v in range(u + 1, na):
            if any(
                rho.related(encode_pair(u, b, nb), encode_pair(v, b, nb))
                for b in range(nb)
            ):
                raw.add((u, v))
    sigma = from_pairs(na, raw)
    transitively_closed = all(sigma.related(u, v) == ((u, v) in raw or u == v)
                              for u in range(na) for v in range(u + 1, na))
    congruent = transitively_closed and is_congruence(A, sigma)
    meet = con_meet(rho, one_times_zero(na, nb))
    exact = meet == product_congruence(sigma, discrete(nb))
    return SigmaResult(sigma, congruent, exact)


def as_product_congruence(
    A: FiniteAlgebra, B: FiniteAlgebra, rho: Congruence
) -> Optional[CongruencePair]:
    """Write rho as alpha x beta, or None when rho is skew."""
    na, nb = A.size, B.size
    proj_a: set[tuple[int, int]] = set()
    proj_b: set[tuple[int, int]] = set()
    for c in range(rho.size):
        for d in range(rho.size):
            if rho.related(c, d):
                (a1, b1), (a2, b2) = decode_pair(c, nb), decode_pair(d, nb)
                proj_a.add((a1, a2))
                proj_b.add((b1, b2))
    alpha = from_pairs(na, proj_a)
    beta = from_pairs(nb, proj_b)
    if product_congruence(alpha, beta) == rho:
        return CongruencePair(alpha, beta)
    return None


def min_product_above(
    A: FiniteAlgebra, B: FiniteAlgebra, rho: Congruence
) -> CongruencePair:
    """Least product congruence containing rho: (tau1, tau2) with
    tau1 x 1 = rho v (0x1) and 1 x tau2 = rho v (1x0)."""
    tau1 = product_join_tau(A, B, rho)
    join = con_join(rho, one_times_zero(A.size, B.size))
    nb = B.size
    # classes of the join are A x (tau2-class), so the least encoded member
    # of (0,v)'s class is (0, least element of v's tau2-class)
    tau2 = Congruence(
        nb,
        tuple(decode_pair(join.canon[encode_pair(0, v, nb)], nb)[1] for v in range(nb)),
    )
    if product_congruence(total(A.size), tau2) != join:
        raise NotACongruenceError("rho v (1x0) is not 1 x tau2; broken input congruence")
    return CongruencePair(tau1, tau2)


def max_product_below(
    A: FiniteAlgebra, B: FiniteAlgebra, rho: Congruence,
    cap: int = DEFAULT_CON_CAP,
) -> CongruencePair:
    """Largest product congruence gamma x delta contained in rho.

    gamma is the join of all alpha in Con(A) with alpha x 0 <= rho, and
    symmetrically for delta; alpha x beta <= rho iff both hold."""
    na, nb = A.size, B.size
    gamma = discrete(na)
    for alpha in con_all(A, cap):
        if con_leq(product_congruence(alpha, discrete(nb)), rho):
            gamma = con_join(gamma, alpha)
    delta = discrete(nb)
    for beta in con_all(B, cap):
        if con_leq(product_congruence(discrete(na), beta), rho):
            delta = con_join(delta, beta)
    return CongruencePair(gamma, delta)


# ---------------------------------------------------------------------------
# commutator


def _pair_subalgebra(A: FiniteAlgebra, alpha: Congruence) -> tuple[FiniteAlgebra, list[tuple[int, int]]]:
    """A(alpha) = {(x,y) : x alpha y} as a subalgebra of A^2."""
    carrier = [
        (x, y) for x in range(A.size) for y in range(A.size) if alpha.related(x, y)
    ]
    index = {p: i for i, p in enumerate(carrier)}
    tables = []
    for sym, arity in A.sig.symbols:
        table = []
        for args in iproduct(range(len(carrier)), repeat=arity):
            xs = tuple(carrier[i][0] for i in args)
            ys = tuple(carrier[i][1] for i in args)
            table.append(index[(A.apply(sym, xs), A.apply(sym, ys))])
        tables.append(tuple(table))
    return (
        FiniteAlgebra(A.sig, len(carrier), tuple(tables), f"{A.name}(alpha)"),
        carrier,
    )


def commutator(
    A: FiniteAlgebra,
    alpha: Congruence,
    beta: Congruence,
    cap: int = 10**6,
) -> Congruence:
    """[alpha, beta] via the delta construction on A(alpha).

    Delta is the congruence of A(alpha) generated by {((x,x),(y,y)) : x beta y};
    the commutator is {(a,b) : ((a,b),(b,b)) in Delta}.  This equals the
    modular commutator when A lies in a congruence modular variety.
    """
    if alpha.size != A.size or beta.size != A.size:
        raise ValueError("congruence carrier mismatch")
    if sum(len(block) ** 2 for block in alpha.classes()) > cap:
        raise CapExceeded("A(alpha) exceeds size cap")
    Aa, carrier = _pair_subalgebra(A, alpha)
    index = {p: i for i, p in enumerate(carrier)}
    gens = [
        (index[(x, x)], index[(y, y)])
        for x in range(A.size)
        for y in range(A.size)
        if x < y and beta.related(x, y)
    ]
    delta = cg(Aa, gens)
    rel = [
        (a, b)
        for (a, b) in carrier
        if a != b and delta.related(index[(a, b)], index[(b, b)])
    ]
    return from_pairs(A.size, rel)


def is_abelian_congruence(A: FiniteAlgebra, beta: Congruence) -> bool:
    return commutator(A, beta, beta) == discrete(A.size)


@dataclass(frozen=True)
class TCWitness:
    term: Term
    pair: tuple[int, int]
    cbar: tuple[int, ...]
    dbar: tuple[int, ...]


def term_condition_check(
    A: FiniteAlgebra,
    alpha: Congruence,
    beta: Congruence,
    delta: Congruence,
    arity_cap: int = 3,
    clone_cap: int = DEFAULT_CLONE_CAP,
) -> tuple[bool, Optional[TCWitness]]:
    """Falsification oracle for the term condition C(alpha, beta; delta).

    Checks every clone member t of arity <= arity_cap: for (a,b) in alpha and
    beta-related argument tuples cbar, dbar,
    t(a,cbar) delta t(a,dbar) must imply t(b,cbar) delta t(b,dbar).
    A violation (returned with a witness) soundly proves delta is too small
    to be [alpha,beta]; (True, None) only means no violation up to the caps.
    """
    from .finalg import iter_kary_clone

    if delta.num_classes == 1:
        return True, None  # the implication's conclusion always holds
    apairs = [(a, b) for a, b in alpha.pairs() if a != b]
    bpairs = beta.pairs()
    n = A.size
    for k in range(1, arity_cap + 1):
        for fn, term in iter_kary_clone(A, k, clone_cap):
            g = fn.graph
            for a, b in apairs:
                for combo in iproduct(bpairs, repeat=k - 1):
                    ia = ib = a
                    ja = jb = b
                    for c, d in combo:
                        ia = ia * n + c
                        ja = ja * n + c
                        ib = ib * n + d
                        jb = jb * n + d
                    if delta.related(g[ia], g[ib]) and not delta.related(g[ja], g[jb]):
                        return False, TCWitness(
                            term,
                            (a, b),
                            tuple(c for c, _ in combo),
                            tuple(d for _, d in combo),
                        )
    return True, None


def check_difference_term(
    A: FiniteAlgebra, d: Term
) -> tuple[bool, Optional[tuple[str, int, int]]]:
    """Verify d(x,x,y)=y and d(x,y,y) = x mod [Cg(x,y),Cg(x,y)] for all x,y."""
    if not variables(d) <= {1, 2, 3}:
        raise ValueError("difference term must use variables x1,x2,x3 only")
    n = A.size
    for x in range(n):
        for y in range(n):
            if evaluate_term(d, A, {1: x, 2: x, 3: y}) != y:
                return False, ("d(x,x,y)=y", x, y)
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            comm = commutator(A, principal(A, x, y), principal(A, x, y))
            v = evaluate_term(d, A, {1: x, 2: y, 3: y})
            if not comm.related(v, x):
                return False, ("d(x,y,y)=x mod [Cg(x,y),Cg(x,y)]", x, y)
    return True, None


# ---------------------------------------------------------------------------
# kernel generating set (Lemma: the projection kernel is finitely generated)


@dataclass(frozen=True)
class KernelGensetResult:
    pairs: tuple[tuple[int, int], ...]
    congruence: Congruence
    equals_kernel: bool


def cm_kernel_genset(
    A: FiniteAlgebra,
    B: FiniteAlgebra,
    X: Iterable[int],
    a0: int,
    b0: int,
) -> KernelGensetResult:
    """Generator pairs for the kernel 1_A x 0_B of the projection onto B.

    The pairs are ((x,b0),(a0,b0)) for x in X together with
    ((f(a0,...,a0),b0),(a0,b0)) for every basic operation f; their generated
    congruence is compared with the kernel exactly.
    """
    from .generation import close

    gens = sorted(set(X))
    closure, _ = close(A, gens)
    if len(closure) != A.size:
        raise HypothesisError(f"X={gens} does not generate {A.name}")
    nb = B.size
    target = encode_pair(a0, b0, nb)
    pairs = [(encode_pair(x, b0, nb), target) for x in gens]
    for sym, arity in A.sig.symbols:
        pairs.append((encode_pair(A.apply(sym, (a0,) * arity), b0, nb), target))
    P = make_product(A, B)
    rho = cg(P, pairs)
    kernel = one_times_zero(A.size, nb)
    return KernelGensetResult(tuple(pairs), rho, rho == kernel)


# ---------------------------------------------------------------------------
# separation in a factor (residual finiteness mechanics)


class ProviderError(ValueError):
    """A separating-congruence provider returned an unusable congruence."""


@dataclass(frozen=True)
class SeparationResult:
    branch: str  # "product" or "skew"
    sigma: Congruence
    rho1: Congruence
    alpha: Optional[Congruence]
    beta: Optional[Congruence]
    gamma: Optional[Congruence]
    delta: Optional[Congruence]
    representatives: tuple[int, ...]
    rho: Optional[Congruence]
    rho_index: Optional[int]
    sigma_index: int


Provider = Callable[[int, int], Congruence]


def separate_in_factor(
    A: FiniteAlgebra,
    B: FiniteAlgebra,
    a1: int,
    a2: int,
    b1: int,
    provider: Provider,
    cap: int = 10**4,
) -> SeparationResult:
    """Build a finite-index congruence of A separating a1 from a2.

    Executes the product-separation procedure: ask the provider for rho_1
    separating (a1,b1) from (a2,b1) in A x B.  If rho_1 is a product
    congruence its A-part already separates.  Otherwise take the minimal
    product congruence alpha x beta above rho_1, factor by the maximal
    product congruence below it and verify that beta becomes abelian there
    (the commutator gate); then intersect provider congruences over a
    complete set of beta-class representatives b1..bn and project the meet
    to sigma = {(u,v) : (u,b) rho (v,b) for some b}.

    Asserts a1 !~sigma a2 and |A/sigma| <= |AxB/rho|; failure of either,
    or of the abelian gate, signals a modularity hypothesis violation.
    """
    if a1 == a2:
        raise ValueError("a1 and a2 must be distinct")
    if A.size * B.size > cap:
        raise CapExceeded(f"product size exceeds cap {cap}")
    P = make_product(A, B)
    nb = B.size
    p1, p2 = encode_pair(a1, b1, nb), encode_pair(a2, b1, nb)

    def ask(p: int, q: int) -> Congruence:
        theta = provider(p, q)
        if theta.size != P.size:
            raise ProviderError("provider congruence lives on the wrong carrier")
        if theta.related(p, q):
            raise ProviderError(
                f"provider congruence does not separate {decode_pair(p, nb)} from {decode_pair(q, nb)}"
            )
        return theta

    rho1 = ask(p1, p2)
    pair = as_product_congruence(A, B, rho1)
    if pair is not None:
        sigma = pair.left
        if sigma.related(a1, a2):
            raise HypothesisError("product rho1 relates a1,a2 despite separating (a1,b1),(a2,b1)")
        return SeparationResult(
            "product", sigma, rho1, pair.left, pair.right, None, None,
            (b1,), None, None, sigma.num_classes,
        )

    mp = min_product_above(A, B, rho1)
    alpha, beta = mp.left, mp.right
    below = max_product_below(A, B, rho1)
    gamma, delta = below.left, below.right

    # abelian gate (checked in the factored algebra, where the claim lives)
    Bq, bproj = make_quotient(B, delta)
    beta_q = from_pairs(
        Bq.size,
        [
            (bproj[x], bproj[y])
            for x in range(B.size)
            for y in range(B.size)
            if beta.related(x, y)
        ],
    )
    if not is_abelian_congruence(Bq, beta_q):
        raise HypothesisError(
            "beta is not abelian after factoring by the maximal product congruence "
            "below rho1; congruence modularity hypothesis violated"
        )

    reps = [b1] + [
        c for c in sorted(set(beta.canon)) if not beta.related(c, b1)
    ]
    rho = rho1
    for bi in reps[1:]:
        rho = con_meet(rho, ask(encode_pair(a1, bi, nb), encode_pair(a2, bi, nb)))

    sres = product_meet_sigma(A, B, rho)
    if not sres.is_congruence:
        raise HypothesisError(
            "sigma projection of the provider meet is not a congruence; "
            "congruence modularity hypothesis violated"
        )
    sigma = sres.sigma
    if sigma.related(a1, a2):
        raise HypothesisError(
            "sigma fails to separate a1,a2; congruence modularity hypothesis violated"
        )
    if sigma.num_classes > rho.num_classes:
        raise HypothesisError("|A/sigma| exceeds |AxB/rho|; internal error")
    return SeparationResult(
        "skew", sigma, rho1, alpha, beta, gamma, delta,
        tuple(reps), rho, rho.num_classes, sigma.num_classes,
    )


# ---------------------------------------------------------------------------
# text format


def parse_congruence(text: str) -> Congruence:
    tokens = text.split()
    if not tokens or tokens[0] != "con":
        raise NotACongruenceError("congruence text must start with 'con <n>'")
    try:
        n = int(tokens[1])
        canon = tuple(int(t) for t in tokens[2 : 2 + n])
    except (IndexError, ValueError) as e:
        raise NotACongruenceError(f"bad congruence text: {e}")
    if len(tokens) != 2 + n:
        raise NotACongruenceError("congruence text has wrong number of entries")
    return Congruence(n, canon)


def format_congruence(theta: Congruence) -> str:
    return f"con {theta.size}\n" + " ".join(str(c) for c in theta.canon) + "\n"
