"""Stock finite algebras used by the verification suites and tests.

Groups carry the signature (·, ⁻¹, 1); quasigroups and loops carry
(·, \\, /) and (·, \\, /, 1); lattices carry (∧, ∨).
"""

from __future__ import annotations

from .finalg import FiniteAlgebra, make_algebra, make_product
from .terms import Signature, parse_term

GROUP_SIG = Signature((("·", 2), ("⁻¹", 1), ("1", 0)))
GROUP_SIG_NO_UNIT = Signature((("·", 2), ("⁻¹", 1)))
QUASIGROUP_SIG = Signature((("·", 2), ("\\", 2), ("/", 2)))
LATTICE_SIG = Signature((("∧", 2), ("∨", 2)))
LOOP_SIG = Signature((("·", 2), ("\\", 2), ("/", 2), ("1", 0)))

# the standard Mal'cev witnesses: x·y⁻¹·z for groups, (x/(y\y))·(y\z) for
# quasigroups and loops
GROUP_MALCEV = parse_term("(· (· x1 (⁻¹ x2)) x3)", GROUP_SIG)
QUASIGROUP_MALCEV = parse_term("(· (/ x1 (\\ x2 x2)) (\\ x2 x3))", QUASIGROUP_SIG)
LOOP_MALCEV = parse_term("(· (/ x1 (\\ x2 x2)) (\\ x2 x3))", LOOP_SIG)


def cyclic_group(n: int, with_unit: bool = True) -> FiniteAlgebra:
    sig = GROUP_SIG if with_unit else GROUP_SIG_NO_UNIT
    impls = {"·": lambda a, b: (a + b) % n, "⁻¹": lambda a: (-a) % n}
    if with_unit:
        impls["1"] = lambda: 0
    return make_algebra(f"z{n}", sig, n, impls)


def klein_group() -> FiniteAlgebra:
    A = make_product(cyclic_group(2), cyclic_group(2))
    return FiniteAlgebra(A.sig, A.size, A.tables, "z2xz2")


_S3_PERMS = (
    (0, 1, 2),  # e
    (1, 0, 2),  # (01)
    (2, 1, 0),  # (02)
    (0, 2, 1),  # (12)
    (1, 2, 0),  # (012)
    (2, 0, 1),  # (021)
)


def sym3() -> FiniteAlgebra:
    index = {p: i for i, p in enumerate(_S3_PERMS)}

    def mul(a: int, b: int) -> int:
        pa, pb = _S3_PERMS[a], _S3_PERMS[b]
        return index[tuple(pa[pb[i]] for i in range(3))]

    def inv(a: int) -> int:
        pa = _S3_PERMS[a]
        q = [0, 0, 0]
        for i in range(3):
            q[pa[i]] = i
        return index[tuple(q)]

    return make_algebra("s3", GROUP_SIG, 6, {"·": mul, "⁻¹": inv, "1": lambda: 0})


# a non-associative quasigroup without identity ((2·1)·1=2 but 2·(1·1)=3);
# it is generated by the single element 2
_Q4_MUL = (
    (0, 1, 2, 3),
    (1, 0, 3, 2),
    (3, 2, 1, 0),
    (2, 3, 0, 1),
)


def _divisions(mul):
    n = len(mul)
    ldiv = [[next(z for z in range(n) if mul[x][z] == y) for y in range(n)] for x in range(n)]
    rdiv = [[next(z for z in range(n) if mul[z][y] == x) for y in range(n)] for x in range(n)]
    return ldiv, rdiv


def quasigroup4() -> FiniteAlgebra:
    ldiv, rdiv = _divisions(_Q4_MUL)
    return make_algebra(
        "q4",
        QUASIGROUP_SIG,
        4,
        {
            "·": lambda a, b: _Q4_MUL[a][b],
            "\\": lambda a, b: ldiv[a][b],
            "/": lambda a, b: rdiv[a][b],
        },
    )


def chain_lattice(n: int) -> FiniteAlgebra:
    return make_algebra(f"c{n}", LATTICE_SIG, n, {"∧": min, "∨": max})


def grid_lattice() -> FiniteAlgebra:
    """The 2x2 product of two 2-chains."""
    A = make_product(chain_lattice(2), chain_lattice(2))
    return FiniteAlgebra(A.sig, A.size, A.tables, "2x2")


# M3: 0 < a,b,c < 1 with pairwise meets 0 and joins 1 (elements 0,a,b,c,1)
def diamond_m3() -> FiniteAlgebra:
    def meet(a, b):
        if a == b:
            return a
        if a == 4:
            return b
        if b == 4:
            return a
        return 0

    def join(a, b):
        if a == b:
            return a
        if a == 0:
            return b
        if b == 0:
            return a
        return 4

    return make_algebra("m3", LATTICE_SIG, 5, {"∧": meet, "∨": join})


# N5: 0 < a < b < 1 and 0 < c < 1 with c incomparable to a,b
# elements 0=bottom, 1=a, 2=b, 3=c, 4=top
_N5_LEQ = {
    (0, 0), (0, 1), (0, 2), (0, 3), (0, 4),
    (1, 1), (1, 2), (1, 4),
    (2, 2), (2, 4),
    (3, 3), (3, 4),
    (4, 4),
}


def pentagon_n5() -> FiniteAlgebra:
    def leq(a, b):
        return (a, b) in _N5_LEQ

    def meet(a, b):
        lbs = [c for c in range(5) if leq(c, a) and leq(c, b)]
        return next(m for m in lbs if all(leq(d, m) for d in lbs))

    def join(a, b):
        ubs = [c for c in range(5) if leq(a, c) and leq(b, c)]
        return next(m for m in ubs if all(leq(m, d) for d in ubs))

    return make_algebra("n5", LATTICE_SIG, 5, {"∧": meet, "∨": join})


def cyclic_loop(n: int) -> FiniteAlgebra:
    return make_algebra(
        f"z{n}loop",
        LOOP_SIG,
        n,
        {
            "·": lambda a, b: (a + b) % n,
            "\\": lambda a, b: (b - a) % n,
            "/": lambda a, b: (a - b) % n,
            "1": lambda: 0,
        },
    )


# the first non-associative order-5 loop in lexicographic table order:
# (1·2)·2 = 3·2 = 1 but 1·(2·2) = 1·4 = 2
_LOOP5_MUL = (
    (0, 1, 2, 3, 4),
    (1, 0, 3, 4, 2),
    (2, 3, 4, 0, 1),
    (3, 4, 1, 2, 0),
    (4, 2, 0, 1, 3),
)


def loop5() -> FiniteAlgebra:
    ldiv, rdiv = _divisions(_LOOP5_MUL)
    return make_algebra(
        "loop5",
        LOOP_SIG,
        5,
        {
            "·": lambda a, b: _LOOP5_MUL[a][b],
            "\\": lambda a, b: ldiv[a][b],
            "/": lambda a, b: rdiv[a][b],
            "1": lambda: 0,
        },
    )


# unary algebra on 5 elements whose congruence lattice is the pentagon N5:
# 0 < Cg(3,4) < Cg(0,1) < 1 with Cg(1,3) incomparable to both
_N5_UNARY_F = (0, 2, 1, 4, 3)
_N5_UNARY_G = (0, 0, 1, 0, 1)


def pentagon_unary() -> FiniteAlgebra:
    sig = Signature((("f", 1), ("g", 1)))
    return make_algebra(
        "n5unary",
        sig,
        5,
        {"f": lambda a: _N5_UNARY_F[a], "g": lambda a: _N5_UNARY_G[a]},
    )


def zset_surrogate() -> FiniteAlgebra:
    """A unary algebra with a non-surjective clone member (doubling on Z4)."""
    sig = Signature((("s", 1), ("d", 1)))
    return make_algebra(
        "zset4",
        sig,
        4,
        {"s": lambda a: (a + 1) % 4, "d": lambda a: (2 * a) % 4},
    )


CANONICAL_GENERATORS = {
    "z2": (1,),
    "z3": (1,),
    "z4": (1,),
    "z5": (1,),
    "z6": (1,),
    "z2xz2": (1, 2),
    "s3": (1, 4),
    "q4": (2,),
}


def lattice_generators(L: FiniteAlgebra) -> tuple[int, ...]:
    """A minimal generating set, found greedily from singletons upward."""
    from itertools import combinations

    from .generation import generates

    for size in range(1, L.size + 1):
        for xs in combinations(range(L.size), size):
            if generates(L, xs):
                return xs
    raise AssertionError("the whole carrier always generates")
