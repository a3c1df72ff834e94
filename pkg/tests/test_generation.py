from __future__ import annotations

import random
from itertools import product as iproduct

import pytest

from prodkit import catalog
from prodkit.congruences import HypothesisError
from prodkit.finalg import decode_pair, make_product
from prodkit.generation import (
    ComputableAlgebra,
    bounded_close,
    close,
    computable_square,
    generates,
    malcev_genset,
    surjective_clone_genset,
)
from prodkit.terms import Signature


def _closure_oracle(A, X):
    """Independent subuniverse closure: plain fixpoint, no certificates."""
    current = set(X) | {A.apply(sym, ()) for sym, k in A.sig.symbols if k == 0}
    while True:
        new = {
            A.apply(sym, args)
            for sym, k in A.sig.symbols
            if k > 0
            for args in iproduct(sorted(current), repeat=k)
        }
        if new <= current:
            return current
        current |= new


def test_close_z4_from_one(z4):
    closure, cert = close(z4, [1])
    assert closure == {0, 1, 2, 3} == _closure_oracle(z4, [1])
    assert cert.check(z4)


def test_close_group_from_empty(z4):
    closure, cert = close(z4, [])
    assert closure == {0}  # the nullary unit is always included
    assert cert.witnesses[0].symbol == "1"


def test_close_idempotent_singleton(c2):
    closure, _ = close(c2, [0])
    assert closure == {0}


def test_generates(z4):
    assert generates(z4, [1])
    assert not generates(z4, [2])
    assert generates(z4, range(4))


def test_close_is_closure_operator():
    rng = random.Random(3)
    algebras = [
        catalog.cyclic_group(4),
        catalog.chain_lattice(4),
        catalog.diamond_m3(),
        catalog.quasigroup4(),
        catalog.klein_group(),
        catalog.sym3(),
    ]
    for A in algebras:
        assert A.size <= 8
        for _ in range(5):
            X = {rng.randrange(A.size) for _ in range(rng.randint(0, 3))}
            cx, _ = close(A, X)
            assert X <= cx  # extensive
            assert cx == close(A, cx)[0]  # idempotent
            Y = X | {rng.randrange(A.size)}
            cy, _ = close(A, Y)
            assert cx <= cy  # monotone
            assert cx == _closure_oracle(A, X)


def test_certificates_sound_everywhere():
    for A in (catalog.cyclic_group(5), catalog.pentagon_n5(), catalog.quasigroup4()):
        for x in range(A.size):
            _, cert = close(A, [x])
            assert cert.check(A)


def test_malcev_genset_z2_z3(z2, z3):
    res = malcev_genset(z2, z3, [1], [1], 0, 0, catalog.GROUP_MALCEV)
    assert res.x_prime == (0, 1)
    assert res.y_prime == (0, 1)
    assert set(res.decoded(3)) == {(0, 0), (0, 1), (1, 0)}
    # closure oracle on the product
    assert _closure_oracle(res.product, res.z) == set(range(6))


def test_malcev_genset_trivial():
    one = catalog.cyclic_group(1)
    res = malcev_genset(one, one, [0], [0], 0, 0, catalog.GROUP_MALCEV)
    assert res.z == (0,)


def test_malcev_genset_rejects_nongenerating(z4, z2):
    with pytest.raises(HypothesisError, match="does not generate"):
        malcev_genset(z4, z2, [2], [1], 0, 0, catalog.GROUP_MALCEV)


def test_malcev_genset_rejects_non_malcev_term(z2):
    from prodkit.terms import Var

    with pytest.raises(HypothesisError, match="not Mal'cev"):
        malcev_genset(z2, z2, [1], [1], 0, 0, Var(1))


def test_malcev_genset_accepts_product_function(z2, z3):
    from prodkit.finalg import find_malcev

    P = make_product(z2, z3)
    fn, _ = find_malcev(P)
    res = malcev_genset(z2, z3, [1], [1], 0, 0, fn)
    assert set(res.decoded(3)) == {(0, 0), (0, 1), (1, 0)}


def test_malcev_genset_rejects_non_malcev_function(z2, z3):
    from prodkit.finalg import FiniteFunction

    proj = FiniteFunction(6, 3, tuple(a for a in range(6) for _ in range(36)))
    with pytest.raises(HypothesisError, match="not Mal'cev"):
        malcev_genset(z2, z3, [1], [1], 0, 0, proj)


def test_thm22_instances_cyclic_and_quasigroup():
    groups = [catalog.cyclic_group(n) for n in range(2, 7)]
    for A in groups:
        for B in groups:
            res = malcev_genset(A, B, [1], [1], 0, 0, catalog.GROUP_MALCEV)
            assert len(_closure_oracle(res.product, res.z)) == A.size * B.size
    q4 = catalog.quasigroup4()
    res = malcev_genset(q4, q4, [2], [2], 0, 0, catalog.QUASIGROUP_MALCEV)
    assert len(_closure_oracle(res.product, res.z)) == 16


def test_surjective_genset_grid_times_chain(c2):
    grid = catalog.grid_lattice()
    res = surjective_clone_genset(grid, c2, [1, 2], [0, 1])
    assert res.extension == ()
    assert len(res.z) == 4
    assert _closure_oracle(res.product, res.z) == set(range(8))


def test_surjective_genset_idempotent_pairs():
    lattices = [
        catalog.chain_lattice(2),
        catalog.chain_lattice(3),
        catalog.chain_lattice(4),
        catalog.grid_lattice(),
        catalog.diamond_m3(),
        catalog.pentagon_n5(),
    ]
    for A in lattices:
        for B in lattices:
            X = catalog.lattice_generators(A)
            Y = catalog.lattice_generators(B)
            res = surjective_clone_genset(A, B, X, Y)
            assert res.extension == ()  # unary clone of a lattice is {identity}
            assert len(_closure_oracle(res.product, res.z)) == A.size * B.size


def test_surjective_genset_names_nonsurjective_member():
    bad = catalog.zset_surrogate()
    with pytest.raises(HypothesisError, match="not surjective"):
        surjective_clone_genset(bad, bad, [0], [0])


def test_surjective_genset_orbit_extension():
    # an order-2 shift makes the unary clone {id, shift}; X = {0} must be
    # extended by its orbit element 1
    swap = Signature((("t", 1),))
    from prodkit.finalg import make_algebra

    A = make_algebra("swap2", swap, 2, {"t": lambda a: 1 - a})
    res = surjective_clone_genset(A, A, [0], [0, 1])
    assert res.x_extended == (0, 1)
    assert res.extension == (1,)


def test_observation21_projections_generate():
    pairs = [
        (catalog.cyclic_group(2), catalog.cyclic_group(3), "malcev"),
        (catalog.cyclic_group(4), catalog.cyclic_group(4), "malcev"),
        (catalog.chain_lattice(3), catalog.grid_lattice(), "clone"),
    ]
    for A, B, kind in pairs:
        if kind == "malcev":
            res = malcev_genset(A, B, [1], [1], 0, 0, catalog.GROUP_MALCEV)
        else:
            res = surjective_clone_genset(
                A, B, catalog.lattice_generators(A), catalog.lattice_generators(B)
            )
        za = {decode_pair(c, B.size)[0] for c in res.z}
        zb = {decode_pair(c, B.size)[1] for c in res.z}
        assert generates(A, za)
        assert generates(B, zb)


# --- bounded closure ---


def _nat():
    return ComputableAlgebra(
        "nat",
        Signature((("max", 2), ("min", 2), ("s", 1))),
        {"max": max, "min": min, "s": lambda x: x + 1},
    )


def test_bounded_close_zero_rounds():
    res = bounded_close(_nat(), [3, 7], max_rounds=0)
    assert res.elements == (3, 7)
    assert not res.budget_hit


def test_bounded_close_successor_chain():
    res = bounded_close(_nat(), [1], max_rounds=4)
    assert {1, 2, 3, 4, 5} <= set(res.elements)


def test_bounded_close_monotone_in_budget():
    sq = computable_square(_nat())
    gens = [(1, 1), (1, 3)]
    prev = set()
    for rounds in range(5):
        res = bounded_close(sq, gens, max_elements=10**4, max_rounds=rounds)
        assert prev <= set(res.elements)
        prev = set(res.elements)
    small = bounded_close(sq, gens, max_elements=5, max_rounds=4)
    assert small.budget_hit
    assert set(small.elements) <= prev


def test_bounded_close_band_invariant():
    sq = computable_square(_nat())
    res = bounded_close(sq, [(1, 1), (1, 3)], max_elements=10**4, max_rounds=6)
    assert all(abs(x - y) <= 2 for x, y in res.elements)
    assert not res.budget_hit


def test_bounded_close_diagonal_never_spreads():
    sq = computable_square(_nat())
    res = bounded_close(sq, [(1, 1)], max_elements=10**4, max_rounds=8)
    assert (1, 5) not in res.elements
    assert all(x == y for x, y in res.elements)
