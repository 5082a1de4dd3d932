import itertools

import pytest
from hypothesis import given, settings, strategies as st

from quantlog.families import lattices, lattices_upto, sup_endomorphisms
from quantlog.lattice import (
    LatticeError,
    SizeGuardError,
    SupLattice,
    SupMap,
    automorphisms,
    export_dot,
    identity_map,
    join,
    order_isomorphisms,
    powerset_lattice,
    product_lattice,
    residual,
    validate_lattice,
    validate_lattice_exhaustive,
)


def b4():
    L, subsets = powerset_lattice(["a", "b"])
    return L, subsets


def test_empty_and_full_join():
    for L in lattices_upto(5):
        assert join(L, []) == L.bottom
        assert join(L, L.elements()) == L.top


def test_join_of_atoms_in_b4():
    L, subsets = b4()
    a, b = subsets.index(frozenset("a")), subsets.index(frozenset("b"))
    assert subsets[join(L, [a, b])] == frozenset("ab")


def test_join_is_least_upper_bound_by_brute_force():
    for L in lattices_upto(5):
        for a, b in itertools.product(L.elements(), repeat=2):
            ubs = [c for c in L.elements() if L.leq(a, c) and L.leq(b, c)]
            least = [c for c in ubs if all(L.leq(c, d) for d in ubs)]
            assert least == [L.join2(a, b)]


def test_validate():
    assert validate_lattice(SupLattice.chain(2))
    L, _ = b4()
    assert validate_lattice(L) and validate_lattice_exhaustive(L)


def test_bowtie_is_rejected_with_missing_join():
    # two minimal and two maximal points, no top
    P = SupLattice.from_covers(["a", "b", "c", "d"], [("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")])
    r = validate_lattice(P)
    assert not r
    assert "join" in r.reason
    assert r.witness


def test_bowtie_with_bottom_still_invalid():
    P = SupLattice.from_covers(["0", "a", "b", "c", "d"],
                               [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")])
    r = validate_lattice(P)
    assert not r
    assert set(r.witness) == {"a", "b"}


def test_cycles_fail_validation_and_unknown_names_raise():
    r = validate_lattice(SupLattice.from_covers(["a", "b"], [("a", "b"), ("b", "a")]))
    assert not r and "antisymmetry" in r.reason
    with pytest.raises(LatticeError):
        SupLattice.from_covers(["a"], [("a", "z")])


def test_residual_examples():
    C2 = SupLattice.chain(2)
    assert residual(identity_map(C2)).table == identity_map(C2).table
    bot = SupMap(C2, C2, (0, 0))
    assert residual(bot).table == (1, 1)
    C3 = SupLattice.chain(3)
    inc = SupMap(C2, C3, (0, 2))
    assert inc.is_morphism()
    assert residual(inc).table == (0, 0, 1)


def test_residual_is_upper_adjoint():
    for L in lattices_upto(4):
        for e in sup_endomorphisms(L):
            f = SupMap(L, L, e)
            r = residual(f)
            for x, y in itertools.product(L.elements(), repeat=2):
                assert L.leq(f(x), y) == L.leq(x, r(y))


def test_powerset_sizes():
    assert powerset_lattice([])[0].n == 1
    L1, _ = powerset_lattice(["x"])
    assert L1.n == 2 and bool(order_isomorphisms(L1, SupLattice.chain(2)))
    assert powerset_lattice(["a", "b"])[0].n == 4


def test_powerset_guard():
    with pytest.raises(SizeGuardError):
        powerset_lattice(range(30), guard=1000)


def test_export_dot_edges():
    assert export_dot(SupLattice.chain(2)).count("->") == 1
    L, _ = b4()
    dot = export_dot(L)
    assert dot.count("->") == 4 and dot.count("label=") == 4
    assert export_dot(SupLattice.chain(3)).count("->") == 2


def test_lattice_counts():
    # unlabelled lattices with 1..6 elements
    assert [len(lattices(n)) for n in range(1, 7)] == [1, 1, 1, 2, 5, 15]


def test_product_lattice_of_chains_is_b4():
    C2 = SupLattice.chain(2)
    assert bool(order_isomorphisms(product_lattice(C2, C2), b4()[0]))


def test_automorphisms_of_b4():
    assert len(automorphisms(b4()[0])) == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 14), st.data())
def test_meet_is_dual_join(idx, data):
    L = lattices_upto(5)[idx % len(lattices_upto(5))]
    a = data.draw(st.integers(0, L.n - 1))
    b = data.draw(st.integers(0, L.n - 1))
    lower = [c for c in L.elements() if L.leq(c, a) and L.leq(c, b)]
    assert L.meet2(a, b) == join(L, lower)
