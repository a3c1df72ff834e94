"""Executable counterexample algebras, with their invariant checks.

Gallery items:

* ``nat_mms`` — the naturals under max, min and successor.  Its square is
  generated from a finite set Z only inside the band |x-y| <= spread(Z).
* ``f2_gset`` — the free group on x,y acting on itself on the right, as a
  unary algebra, with the coset congruences alpha (cosets of <y>) and beta.
  beta is implemented through the exponent-sum homomorphism sending y to 1
  and x to 0: the subgroup generated by the conjugates of x by powers of y
  is exactly the kernel of that map (Reidemeister-Schreier basis
  {y^-k x y^k}), so two words are beta-related iff their y-exponent sums
  agree.  alpha and beta meet at equality and compose to everything.
* ``squarefree`` — the free semigroup on a,b,c in the variety x^2 = 0:
  square-free words with an absorbing ZERO.
* ``zx`` — Z^d with addition, negation and diagonal constants standing in
  for the non-finitely-generated abelian group: every pair (x,y) reachable
  from Z keeps x-y inside the subgroup generated by the differences of Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .generation import ComputableAlgebra, bounded_close, computable_square
from .terms import Signature

# ---------------------------------------------------------------------------
# naturals with max, min, successor

NAT_MMS_SIG = Signature((("max", 2), ("min", 2), ("s", 1)))


def nat_mms() -> ComputableAlgebra:
    return ComputableAlgebra(
        "nat-mms",
        NAT_MMS_SIG,
        {"max": max, "min": min, "s": lambda x: x + 1},
    )


def nat_mms_square() -> ComputableAlgebra:
    return computable_square(nat_mms())


def spread(Z: Iterable[tuple[int, int]]) -> int:
    return max((abs(x - y) for x, y in Z), default=0)


# ---------------------------------------------------------------------------
# the free-group G-set

# letters: +1 = x, -1 = x^-1, +2 = y, -2 = y^-1
_LETTER_NAMES = {1: "x", -1: "X", 2: "y", -2: "Y"}
_NAME_LETTERS = {v: k for k, v in _LETTER_NAMES.items()}


@dataclass(frozen=True, order=True)
class ReducedWord:
    """A freely reduced word over x, y; the empty word is the identity."""

    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.letters, self.letters[1:]):
            if a + b == 0:
                raise ValueError("word is not freely reduced")

    def append(self, letter: int) -> "ReducedWord":
        if self.letters and self.letters[-1] + letter == 0:
            return ReducedWord(self.letters[:-1])
        return ReducedWord(self.letters + (letter,))

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        w = self
        for letter in other.letters:
            w = w.append(letter)
        return w

    def inverse(self) -> "ReducedWord":
        return ReducedWord(tuple(-l for l in reversed(self.letters)))

    def y_exponent(self) -> int:
        return sum(1 if l == 2 else -1 for l in self.letters if abs(l) == 2)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(_LETTER_NAMES[l] for l in self.letters) or "1"


def parse_word(text: str) -> ReducedWord:
    """Parse a word like 'xyX' (X and Y are the inverse letters); '1' is empty."""
    if text == "1":
        return ReducedWord()
    w = ReducedWord()
    for ch in text:
        if ch not in _NAME_LETTERS:
            raise ValueError(f"bad letter {ch!r}; use x, X, y, Y")
        w = w.append(_NAME_LETTERS[ch])
    return w


F2_GSET_SIG = Signature((("f_x", 1), ("g_x", 1), ("f_y", 1), ("g_y", 1)))


def f2_gset() -> ComputableAlgebra:
    return ComputableAlgebra(
        "f2-gset",
        F2_GSET_SIG,
        {
            "f_x": lambda w: w.append(1),
            "g_x": lambda w: w.append(-1),
            "f_y": lambda w: w.append(2),
            "g_y": lambda w: w.append(-2),
        },
        key=lambda w: (len(w), w.letters),
    )


def alpha_related(u: ReducedWord, v: ReducedWord) -> bool:
    """Same right coset of <y>: u * v^-1 is a power of y."""
    return all(abs(l) == 2 for l in (u * v.inverse()).letters)


def beta_related(u: ReducedWord, v: ReducedWord) -> bool:
    """Same image under the homomorphism sending y to 1 and x to 0."""
    return u.y_exponent() == v.y_exponent()


def word_ball(radius: int) -> list[ReducedWord]:
    """All reduced words of length at most radius, shortest first."""
    out = [ReducedWord()]
    frontier = [ReducedWord()]
    for _ in range(radius):
        new = []
        for w in frontier:
            for letter in (1, -1, 2, -2):
                v = w.append(letter)
                if len(v) == len(w) + 1:
                    new.append(v)
        frontier = new
        out.extend(frontier)
    return sorted(set(out), key=lambda w: (len(w), w.letters))


@dataclass(frozen=True)
class GsetReport:
    radius: int
    meet_pairs_checked: int
    meet_violations: tuple[tuple[str, str], ...]
    compose_pairs_checked: int
    compose_missing: tuple[tuple[str, str], ...]

    @property
    def ok(self) -> bool:
        return not self.meet_violations and not self.compose_missing


def gset_product_check(radius: int) -> GsetReport:
    """Check alpha ^ beta = equality on the radius ball and alpha o beta
    witnesses (u alpha w beta v) for pairs in the (radius-1) ball, searching
    the 2*radius ball."""
    if radius < 1:
        raise ValueError("radius must be at least 1")
    ball = word_ball(radius)
    meet_violations = []
    checked = 0
    for u in ball:
        for v in ball:
            checked += 1
            if u != v and alpha_related(u, v) and beta_related(u, v):
                meet_violations.append((str(u), str(v)))
    inner = word_ball(radius - 1)
    search = word_ball(2 * radius)
    missing = []
    composed = 0
    for u in inner:
        for v in inner:
            composed += 1
            if not any(alpha_related(u, w) and beta_related(w, v) for w in search):
                missing.append((str(u), str(v)))
    return GsetReport(radius, checked, tuple(meet_violations), composed, tuple(missing))


# ---------------------------------------------------------------------------
# square-free words

ZERO = "0"
_SQUAREFREE_ALPHABET = set("abc")


def is_squarefree(w: str) -> bool:
    n = len(w)
    for half in range(1, n // 2 + 1):
        for i in range(n - 2 * half + 1):
            if w[i : i + half] == w[i + half : i + 2 * half]:
                return False
    return True


def squarefree_mul(w1: str, w2: str) -> str:
    """Product in the free x^2=0 semigroup on a,b,c: concatenation or ZERO."""
    for w in (w1, w2):
        if w == ZERO:
            continue
        if not w or not set(w) <= _SQUAREFREE_ALPHABET:
            raise ValueError(f"{w!r} is not a nonempty word over a,b,c")
        if not is_squarefree(w):
            raise ValueError(f"{w!r} is not square-free")
    if w1 == ZERO or w2 == ZERO:
        return ZERO
    w = w1 + w2
    return w if is_squarefree(w) else ZERO


def thue_word(length: int) -> str:
    """Prefix of the square-free fixed point of a -> abc, b -> ac, c -> b."""
    w = "a"
    rules = {"a": "abc", "b": "ac", "c": "b"}
    while len(w) < length:
        w = "".join(rules[ch] for ch in w)
    return w[:length]


# ---------------------------------------------------------------------------
# Z^d with diagonal constants

ZX_SIG = Signature((("+", 2), ("neg", 1)))

Vector = tuple[int, ...]


def _vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _vneg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def zx_square(d: int) -> ComputableAlgebra:
    """The square of (Z^d; +, -) acting on pairs of integer vectors."""
    return ComputableAlgebra(
        f"zx-{d}",
        ZX_SIG,
        {
            "+": lambda p, q: (_vadd(p[0], q[0]), _vadd(p[1], q[1])),
            "neg": lambda p: (_vneg(p[0]), _vneg(p[1])),
        },
    )


def hermite_basis(vectors: Sequence[Vector]) -> list[Vector]:
    """Row-echelon basis of the subgroup of Z^d the vectors generate.

    Plain integer elimination: repeatedly reduce rows against the current
    pivot row by floor division until one survivor per pivot column remains.
    """
    rows = [tuple(v) for v in vectors if any(v)]
    if not rows:
        return []
    d = len(rows[0])
    basis: list[Vector] = []
    col = 0
    while col < d and rows:
        rows = [r for r in rows if any(r)]
        with_pivot = [r for r in rows if r[col] != 0]
        if not with_pivot:
            rows = [r for r in rows if not any(r[:col + 1])]
            col += 1
            continue
        while True:
            with_pivot.sort(key=lambda r: abs(r[col]))
            pivot = with_pivot[0]
            done = True
            reduced = [pivot]
            for r in with_pivot[1:]:
                q = r[col] // pivot[col]
                rr = tuple(a - q * b for a, b in zip(r, pivot))
                if rr[col] != 0:
                    done = False
                if any(rr):
                    reduced.append(rr)
            with_pivot = reduced
            if done:
                break
        pivot = with_pivot[0]
        if pivot[col] < 0:
            pivot = _vneg(pivot)
        basis.append(pivot)
        rest = [r for r in rows if r[col] == 0 and any(r)]
        rest.extend(r for r in with_pivot[1:] if any(r))
        rows = rest
        col += 1
    return basis


def in_subgroup(v: Vector, basis: Sequence[Vector]) -> bool:
    v = tuple(v)
    for row in basis:
        col = next(i for i, a in enumerate(row) if a != 0)
        if v[col] != 0:
            if v[col] % row[col] != 0:
                return False
            q = v[col] // row[col]
            v = tuple(a - q * b for a, b in zip(v, row))
    return not any(v)


@dataclass(frozen=True)
class ZxReport:
    dim: int
    basis: tuple[Vector, ...]
    proper: bool
    closure_size: int
    budget_hit: bool
    violations: tuple[tuple[Vector, Vector], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def zx_invariant_check(
    d: int,
    Z: Sequence[tuple[Vector, Vector]],
    max_elements: int = 5000,
    max_rounds: int = 4,
) -> ZxReport:
    """Check the difference invariant x - y in A' over a bounded closure.

    A' is the subgroup of Z^d generated by {x - y : (x,y) in Z}; the closure
    starts from Z together with sampled diagonal pairs (the zero vector and
    the unit vectors).  Reports whether A' is proper, in which case no finite
    Z can generate the whole square.
    """
    for x, y in Z:
        if len(x) != d or len(y) != d:
            raise ValueError("vectors have wrong dimension")
    basis = hermite_basis([_vadd(x, _vneg(y)) for x, y in Z])
    diag = [tuple([0] * d)] + [
        tuple(1 if j == i else 0 for j in range(d)) for i in range(d)
    ]
    gens = list(Z) + [(v, v) for v in diag]
    result = bounded_close(zx_square(d), gens, max_elements, max_rounds)
    violations = [
        (x, y) for x, y in result.elements if not in_subgroup(_vadd(x, _vneg(y)), basis)
    ]
    # A' = Z^d exactly when every unit vector is a member
    full = all(in_subgroup(v, basis) for v in diag[1:]) if basis else d == 0
    return ZxReport(
        d, tuple(basis), not full, len(result.elements), result.budget_hit,
        tuple(violations),
    )
