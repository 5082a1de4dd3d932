import pytest
from hypothesis import given, settings, strategies as st

from quantlog.deduction import (
    DeductionError,
    DeductiveSystem,
    InferenceRule,
    check_nontrivial,
    check_tarski,
    closure,
    directly_derivable,
    engine,
    gamma_prime,
    scalar_action,
    theory_lattice,
)
from quantlog.fixtures import BIN, BOX, DIA, box4, circ4, dia4, necessitation, projection
from quantlog.syntax import App, Language, Substitution, TruncationParams, Var, disjoint_union, in_language, parse_item

x1, x2 = Var(1), Var(2)
P12 = TruncationParams(n=1, d=2)
P13 = TruncationParams(n=1, d=3)


def box(phi, times=1):
    for _ in range(times):
        phi = App("box", (phi,))
    return phi


def dia(phi):
    return App("dia", (phi,))


def test_directly_derivable_examples():
    nec = necessitation().rules[0]
    assert directly_derivable(nec, {x1}, box(x1))
    assert not directly_derivable(nec, {x1}, dia(x1))
    weak = InferenceRule((x1, x2), x1)
    assert directly_derivable(weak, {x1}, x1)
    assert not directly_derivable(weak, set(), x1)


def test_closure_of_necessitation_overflows():
    th = closure(necessitation(), {x1}, P12)
    assert th.items == {x1, box(x1), box(x1, 2)}
    assert th.overflow


def test_closure_of_closed_set_and_empty_set():
    th = closure(necessitation(), {x1}, P12)
    assert closure(necessitation(), th.items, P12).items == th.items
    assert closure(necessitation(), set(), P12).items == frozenset()


def test_box4_closures():
    S = box4()
    assert closure(S, {x1}, P13).items == {x1}
    th = closure(S, {box(x1)}, P13)
    assert th.items == {box(x1), box(x1, 2), box(x1, 3)}
    assert th.overflow and not th.budget_hit


def test_axioms_are_schemas():
    S = DeductiveSystem(BOX, axioms=(box(x1),))
    th = closure(S, set(), P13)
    # every instance inside U is a theorem
    assert th.items == {box(x1), box(x1, 2), box(x1, 3)}


def test_rounds_guard():
    th = closure(necessitation(), {x1}, TruncationParams(n=1, d=3, k=1))
    assert th.rounds_hit


def test_foreign_connective_rejected():
    with pytest.raises(DeductionError):
        DeductiveSystem(BOX, rules=(InferenceRule((x1,), dia(x1)),))


@pytest.mark.parametrize("S", [necessitation(), box4(), dia4(), circ4(), projection()], ids=lambda S: S.name)
def test_tarski_laws(S):
    rep = check_tarski(S, P13 if S.language is not BIN else TruncationParams(n=2, d=2))
    assert rep.ok, rep.render()


def test_structurality_exhaustive_for_necessitation():
    rep = check_tarski(necessitation(), P12, cap=3, samples=10_000)
    assert rep.ok and rep.instances > 0


def test_nontriviality():
    # x / box x derives box x from a bare variable
    assert not check_nontrivial(necessitation(), P13)
    assert not check_nontrivial(DeductiveSystem(BOX, axioms=(x1,)), P13)
    assert check_nontrivial(projection(), TruncationParams(n=2, d=2))
    for S in (box4(), dia4(), circ4()):
        assert check_nontrivial(S, TruncationParams())


def test_theory_lattice_without_rules_is_powerset():
    S = DeductiveSystem(Language.of())
    TL = theory_lattice(S, TruncationParams(n=2, d=0), cap=1)
    assert sorted(map(len, TL.theories)) == [0, 1, 1, 2]
    assert TL.least == frozenset()


def test_box4_theory_lattice():
    TL = theory_lattice(box4(), P13, cap=1)
    singles = {closure(box4(), {phi}, P13).items for phi in (x1, box(x1), box(x1, 2), box(x1, 3))}
    assert singles <= set(TL.theories)
    assert {box(x1), box(x1, 2), box(x1, 3)} in TL.theories
    # four generators closing to a chain, plus x1 joined onto each
    assert len(TL) == 8
    for i in range(len(TL)):
        for j in range(len(TL)):
            joined = closure(box4(), TL.theories[i] | TL.theories[j], P13).items
            assert TL.theories[TL.join(i, j)] == joined
            assert TL.theories[TL.meet(i, j)] == TL.theories[i] & TL.theories[j]


def test_scalar_action_examples():
    S = box4()
    T = closure(S, {box(x1)}, P13)
    ident = Substitution.identity(1)
    assert scalar_action(S, [ident], T, P13).items == T.items
    assert scalar_action(S, [], T, P13).items == closure(S, set(), P13).items
    up = Substitution.from_map(1, {1: box(x1)})
    moved = scalar_action(S, [up], T, P13)
    assert moved.items == closure(S, {box(x1, 2)}, P13).items
    assert moved.overflow


def test_gamma_prime_mixed_set():
    L, i1, i2 = disjoint_union(BOX, DIA)
    S1 = box4().translated(i1).with_language(L)
    params = TruncationParams(n=1, d=3)
    sub = L.restrict(["1:box"])
    close1 = engine(S1, params, L)

    def in_D1(it):
        return in_language(it, sub)

    d = App("2:dia", (x1,))
    b = App("1:box", (x1,))
    assert gamma_prime(close1, in_D1, {x1, d}) == close1({x1}).items | {d}
    assert gamma_prime(close1, in_D1, {b}) == close1({b}).items
    assert gamma_prime(close1, in_D1, {d}) == {d}


def test_parsed_rules_match_fixture():
    rule = InferenceRule((parse_item(BOX, "box(x1)"),), parse_item(BOX, "box(box(x1))"))
    assert box4().rules == (rule,)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.sampled_from([x1, x2, box(x1), box(x2), box(x1, 2), box(x2, 3)]), max_size=3),
       st.sets(st.sampled_from([x1, x2, box(x1), box(x2), box(x1, 2), box(x2, 3)]), max_size=3))
def test_closure_is_monotone_and_idempotent(a, b):
    S, params = box4(), TruncationParams()
    ca = closure(S, a, params).items
    cab = closure(S, a | b, params).items
    assert a <= ca <= cab
    assert closure(S, ca, params).items == ca
