import itertools

from hypothesis import given, settings, strategies as st

from quantlog.families import lattices_upto, quantales_on, quantales_upto, relations_upto
from quantlog.lattice import SupLattice, automorphisms
from quantlog.quantale import (
    Quantale,
    congruence_oracle_q,
    is_quantic_nucleus,
    nucleus_q,
    powerset_quantale,
    quantale_isomorphism,
    quotient_by_partition_q,
    quotient_q,
    residuals,
    saturated_elements_q,
    two_element_quantale,
    validate_quantale,
)

Q2 = two_element_quantale()


def words():
    # free monoid on g truncated at length 2; overlong products vanish
    return powerset_quantale(["", "g", "gg"], lambda x, y: x + y if len(x + y) <= 2 else None, "")


def cyclic3():
    # g^3 = e
    elems = ["", "g", "gg"]
    return powerset_quantale(elems, lambda x, y: elems[(len(x) + len(y)) % 3], "")


def test_two_element_quantale_is_valid():
    assert validate_quantale(Q2)
    assert validate_quantale(Q2, exhaustive=True)


def test_powerset_of_trivial_monoid():
    Q, _ = powerset_quantale(["e"], lambda x, y: "e", "e")
    assert validate_quantale(Q) and Q.n == 2


def test_non_absorbing_bottom_is_rejected():
    C3 = SupLattice.chain(3)
    # bottom times the middle element lands on the middle element
    prod = [[0, 1, 1], [1, 1, 2], [1, 2, 2]]
    r = validate_quantale(Quantale(C3, prod, None))
    assert not r


def test_unit_residual():
    for Q in quantales_upto(4):
        if Q.unit is None:
            continue
        for a in range(Q.n):
            assert residuals(Q, a, Q.unit) == (a, a)


def test_bottom_over_bottom_in_q2():
    assert residuals(Q2, 0, 0)[0] == 1


def test_truncated_word_residual():
    Q, subsets = words()
    g, gg = subsets.index(frozenset({"g"})), subsets.index(frozenset({"gg"}))
    left, _ = residuals(Q, gg, g)
    # g * gg overflows the truncation and counts as empty, so gg joins g
    assert subsets[left] == frozenset({"g", "gg"})


def test_cyclic_word_residual():
    Q, subsets = cyclic3()
    assert validate_quantale(Q)
    g, gg = subsets.index(frozenset({"g"})), subsets.index(frozenset({"gg"}))
    assert subsets[residuals(Q, gg, g)[0]] == frozenset({"g"})


def test_residual_is_adjoint():
    for Q in quantales_upto(4):
        L = Q.lattice
        for a, b, c in itertools.product(range(Q.n), repeat=3):
            left, right = residuals(Q, a, b)
            assert L.leq(Q.mul(b, c), a) == L.leq(c, left)
            assert L.leq(Q.mul(c, b), a) == L.leq(c, right)


def test_nucleus_examples():
    assert is_quantic_nucleus((0, 1), Q2)
    assert is_quantic_nucleus((1, 1), Q2)
    assert not is_quantic_nucleus((1, 0), Q2)


def test_saturated_examples():
    assert saturated_elements_q(Q2, []) == frozenset({0, 1})
    assert saturated_elements_q(Q2, [(0, 0), (1, 1)]) == frozenset({0, 1})
    assert saturated_elements_q(Q2, [(0, 1)]) == frozenset({1})


def test_quotient_examples():
    quo, proj = quotient_q(Q2, [])
    assert quantale_isomorphism(quo, Q2) is not None
    assert proj.table == (0, 1)
    full = [(a, b) for a in range(2) for b in range(2)]
    assert quotient_q(Q2, full)[0].n == 1
    assert quotient_q(Q2, [(0, 1)])[0].n == 1


def test_congruence_oracle_examples():
    assert congruence_oracle_q(Q2, []) == [frozenset({0}), frozenset({1})]
    assert congruence_oracle_q(Q2, [(0, 1)]) == [frozenset({0, 1})]


def _brute_force_unital(L):
    """Every valid unital product table on L, up to lattice automorphism."""
    n = L.n
    auts = automorphisms(L)
    classes = set()
    for flat in itertools.product(range(n), repeat=n * n):
        table = [list(flat[i * n:(i + 1) * n]) for i in range(n)]
        for u in range(n):
            if validate_quantale(Quantale(L, table, u)):
                classes.add(min(
                    (tuple(tuple(h[table[ih[a]][ih[b]]] for b in range(n)) for a in range(n)), h[u])
                    for h in auts for ih in [sorted(range(n), key=lambda x: h[x])]))
    return len(classes)


def test_quantale_family_matches_brute_force():
    for L in lattices_upto(3):
        assert len(quantales_on(L)) == _brute_force_unital(L)


def test_family_size():
    assert len(quantales_upto(4)) == 25


def test_saturated_quotient_matches_oracle_small():
    for Q in quantales_upto(3):
        for theta in relations_upto(Q.n, 2):
            quo, _ = quotient_q(Q, theta)
            oracle = quotient_by_partition_q(Q, congruence_oracle_q(Q, theta))
            assert quantale_isomorphism(quo, oracle) is not None


def test_relation_is_unordered():
    for Q in quantales_upto(3):
        for a, b in itertools.product(range(Q.n), repeat=2):
            assert saturated_elements_q(Q, [(a, b)]) == saturated_elements_q(Q, [(b, a)])


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_rho_is_a_quantic_nucleus(data):
    family = quantales_upto(4)
    Q = family[data.draw(st.integers(0, len(family) - 1))]
    pairs = data.draw(st.lists(st.tuples(st.integers(0, Q.n - 1), st.integers(0, Q.n - 1)), max_size=3))
    rho = nucleus_q(Q, pairs)
    assert is_quantic_nucleus(rho, Q)
    # each related pair is identified
    assert all(rho[a] == rho[b] for a, b in pairs)


def test_quotient_is_image_of_rho():
    for Q in quantales_upto(4):
        for theta in relations_upto(Q.n, 1):
            quo, proj = quotient_q(Q, theta)
            assert proj.is_morphism()
            assert quo.n == len(set(nucleus_q(Q, theta)))
            assert validate_quantale(quo)
