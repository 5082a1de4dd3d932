import itertools

import pytest

from quantlog.families import amalgams, module_morphisms, modules_on, modules_upto, quantales_upto, relations_upto
from quantlog.lattice import SupLattice
from quantlog.qmodule import ModuleMorphism, QModule, congruence_oracle_m, saturated_elements_m, validate_module
from quantlog.quantale import two_element_quantale
from quantlog.suites import ALGEBRAIC, LOGIC, SUITES

Q2 = two_element_quantale()


def test_modules_over_q2_are_lattices():
    # over the Boolean quantale the action is forced, so modules are just lattices
    assert [sum(1 for M in modules_upto(Q2, 6) if M.n == n) for n in range(1, 7)] == [1, 1, 1, 2, 5, 15]


def test_module_family_matches_brute_force():
    # every action table on the 3-chain over each small quantale, up to automorphism (the chain has none)
    C3 = SupLattice.chain(3)
    for Q in quantales_upto(3):
        found = 0
        for flat in itertools.product(range(3), repeat=3 * Q.n):
            act = [list(flat[3 * a:3 * a + 3]) for a in range(Q.n)]
            found += bool(validate_module(QModule(Q, C3, act)))
        assert len(modules_on(Q, C3)) == found


def test_morphisms_are_valid_and_complete():
    mods = modules_upto(Q2, 3)
    for M in mods:
        for N in mods:
            got = {f.table for f in module_morphisms(M, N)}
            brute = set()
            for t in itertools.product(range(N.n), repeat=M.n):
                if ModuleMorphism(M, N, t).is_valid():
                    brute.add(t)
            assert got == brute


def test_relations_cover_ordered_and_diagonal_pairs():
    for Q in quantales_upto(3):
        for M in modules_upto(Q, 4):
            for a, b in itertools.product(range(M.n), repeat=2):
                canon = () if a == b else ((min(a, b), max(a, b)),)
                assert canon in relations_upto(M.n, 1)
                assert saturated_elements_m(M, [(a, b)]) == saturated_elements_m(M, canon)
                assert congruence_oracle_m(M, [(a, b)]) == congruence_oracle_m(M, canon)


def test_relation_counts():
    assert len(relations_upto(3, 2)) == 1 + 3 + 3
    assert len(relations_upto(1, 2)) == 1


def test_amalgams_have_injective_legs():
    count = 0
    for A in amalgams(Q2, 2, 3):
        assert A.validate()
        count += 1
    assert count > 0


SMALL = {
    "satquo": dict(max_q=3), "satquom": dict(max_q=3, max_m=3), "satinfresm": dict(max_q=3, max_m=3),
    "rrm": dict(max_q=3, max_m=3), "satnucm": dict(max_q=2, max_m=3), "satuni": dict(max_q=3),
    "tensor": dict(max_q=2, max_points=4), "amalgam": dict(max_q=2, max_p=2, max_mn=3), "amalgmon": dict(),
}


@pytest.mark.parametrize("name", sorted(ALGEBRAIC))
def test_algebraic_suites_small(name):
    rep = ALGEBRAIC[name](**SMALL[name])
    assert rep.ok, rep.render()
    assert rep.totals()[0] > 0


def test_suite_registry():
    assert set(SUITES) == set(ALGEBRAIC) | set(LOGIC)
    assert set(SMALL) == set(ALGEBRAIC)
