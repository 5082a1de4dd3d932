import random

import pytest
from hypothesis import given, settings, strategies as st

from quantlog.syntax import (
    App,
    Equation,
    FormulaSyntaxError,
    Language,
    Sequent,
    Substitution,
    Var,
    apply_substitution,
    compose,
    connective_translation,
    depth,
    disjoint_union,
    enumerate_formulas,
    enumerate_items,
    enumerate_substitutions,
    format_formula,
    format_item,
    in_language,
    kappa,
    match,
    monoid_amalgam_check,
    parse_formula,
    parse_item,
    renamings,
    substitute,
    translate,
)

BOX = Language.of(box=1)
DIA = Language.of(dia=1)
CIRC = Language.of(circ=1)
MIXED = Language.of(box=1, c=2, top=0)


def box(phi):
    return App("box", (phi,))


x1, x2 = Var(1), Var(2)


def formulas(lang=MIXED, n=3):
    leaves = st.integers(1, n).map(Var)
    nullary = [App(c, ()) for c, ar in lang.connectives if ar == 0]
    if nullary:
        leaves = leaves | st.sampled_from(nullary)

    def extend(children):
        return st.one_of(*[st.tuples(*[children] * ar).map(lambda args, c=c: App(c, args))
                           for c, ar in lang.connectives if ar > 0])

    return st.recursive(leaves, extend, max_leaves=8)


def substitutions(lang=MIXED, n=3):
    return st.tuples(*[formulas(lang, n)] * n).map(Substitution)


def test_parse_examples():
    assert parse_formula(BOX, "x1") == x1
    assert parse_formula(BOX, "box(x1)") == box(x1)
    assert parse_formula(MIXED, "c(top, box(x2))") == App("c", (App("top", ()), box(x2)))
    assert parse_formula(MIXED, "top()") == App("top", ())


def test_parse_items():
    assert parse_item(BOX, "box(x1) = x1") == Equation(box(x1), x1)
    s = parse_item(BOX, "x1, box(x2) => x1")
    assert isinstance(s, Sequent) and s.type == (2, 1)
    assert parse_item(BOX, "=>").type == (0, 0)


@pytest.mark.parametrize("text", ["box(x1", "dia(x1)", "box(x1, x2)", "x0", "box x1", "c(x1)", "x1 x2"])
def test_parse_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(MIXED, text)


def test_parse_error_reports_position():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula(BOX, "box(x1))")
    assert exc.value.pos == 7


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_round_trip(phi):
    text = format_formula(phi)
    assert parse_formula(MIXED, text) == phi
    assert format_formula(parse_formula(MIXED, text.replace(",", " , "))) == text


def test_enumeration_counts():
    assert enumerate_formulas(BOX, 1, 2) == [x1, box(x1), box(box(x1))]
    for lang in (BOX, DIA, Language.of(c=2)):
        assert enumerate_formulas(lang, 3, 0) == [Var(1), Var(2), Var(3)]
    two = enumerate_formulas(Language.of(c=2), 1, 1)
    assert [format_formula(p) for p in two] == ["x1", "c(x1,x1)"]


def test_enumeration_by_brute_force():
    # count formulas over one unary and one binary connective by depth recursion
    lang = Language.of(u=1, c=2)
    counts = {0: 2}
    for d in range(1, 4):
        prev = counts[d - 1]
        counts[d] = 2 + prev + prev * prev
    for d in range(4):
        fms = enumerate_formulas(lang, 2, d)
        assert len(fms) == counts[d] == len(set(fms))
        assert all(depth(p) <= d for p in fms)


def test_enumeration_guard():
    with pytest.raises(OverflowError):
        enumerate_formulas(Language.of(c=2), 3, 4, guard=1000)


def test_enumerate_items_kinds():
    eqs = enumerate_items(BOX, "equations", 1, 1)
    assert Equation(x1, box(x1)) in eqs and len(eqs) == 4
    seqs = enumerate_items(BOX, "sequents", 1, 0, types=[(1, 1), (0, 1)])
    assert set(map(format_item, seqs)) == {"x1 => x1", "=> x1"}


def test_substitution_examples():
    it = box(x1)
    assert apply_substitution(Substitution.identity(1), it) == it
    s = Substitution.from_map(1, {1: box(x1)})
    assert apply_substitution(s, it) == box(box(x1))
    assert compose(s, Substitution.identity(1)) == s
    assert compose(s, s) == Substitution.from_map(1, {1: box(box(x1))})


def test_substitution_acts_on_items():
    s = Substitution.from_map(2, {1: box(x2)})
    assert s(Equation(x1, x2)) == Equation(box(x2), x2)
    assert s(parse_item(BOX, "x1 => x2")) == parse_item(BOX, "box(x2) => x2")


@settings(max_examples=100, deadline=None)
@given(substitutions(), substitutions(), substitutions())
def test_compose_is_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@settings(max_examples=100, deadline=None)
@given(substitutions(), substitutions(), formulas())
def test_composition_is_an_action(a, b, phi):
    assert compose(a, b)(phi) == a(b(phi))


def test_kappa_examples():
    assert kappa("x", 2) == Substitution((x1, x1))
    assert kappa("x~y", 2, [[1], [2]]) == Substitution.identity(2)
    with pytest.raises(ValueError):
        kappa("x~y", 3, [[1], [2]])


@settings(max_examples=100, deadline=None)
@given(substitutions(n=2), formulas(n=2))
def test_kappa_collapses(sigma, phi):
    k = kappa("x", 2)
    # every leaf variable is x1 afterwards
    assert substitute(phi, {2: x1}) == k(phi)
    # and sigma after kappa sends every variable to sigma(x1)
    assert compose(sigma, k) == Substitution((sigma.get(1), sigma.get(1)))


def test_translation_examples():
    tau = connective_translation(CIRC, BOX, {"circ": "box"})
    assert translate(tau, parse_formula(CIRC, "circ(x1)")) == box(x1)
    assert translate(tau, parse_formula(CIRC, "circ(circ(x1))")) == box(box(x1))


def test_translation_commutes_with_substitution():
    rng = random.Random(0)
    tau = connective_translation(CIRC, BOX, {"circ": "box"})
    fms = enumerate_formulas(CIRC, 2, 2)
    for _ in range(100):
        sigma = Substitution(tuple(rng.choice(fms) for _ in range(2)))
        phi = rng.choice(fms)
        assert translate(tau, sigma(phi)) == tau.substitution(sigma)(translate(tau, phi))


def test_disjoint_union():
    L, i1, i2 = disjoint_union(BOX, DIA)
    assert sorted(L.names) == ["1:box", "2:dia"]
    assert L.arity["1:box"] == 1
    L0, j1, _ = disjoint_union(BOX, Language.of())
    assert len(L0) == 1
    assert translate(j1, box(x1)) == App("1:box", (x1,))


def test_disjoint_sublanguages_meet_in_variables():
    L, i1, i2 = disjoint_union(BOX, DIA)
    left = set(enumerate_formulas(L.restrict(["1:box"]), 2, 3))
    right = set(enumerate_formulas(L.restrict(["2:dia"]), 2, 3))
    assert left & right == {x1, x2}
    every = enumerate_formulas(L, 2, 3)
    assert {p for p in every if in_language(p, L.restrict(["1:box"]))} == left


def test_match():
    pat = App("c", (x1, box(x2)))
    assert match(pat, App("c", (box(x1), box(x1)))) == {1: box(x1), 2: x1}
    assert match(App("c", (x1, x1)), App("c", (x1, x2))) is None


def test_renamings():
    assert len(renamings(2)) == 4
    assert all(r.is_renaming() for r in renamings(3))


def test_monoid_amalgam_box_dia():
    r = monoid_amalgam_check(BOX, DIA, n=2, image_depth=2)
    assert r, r.failures[:3]
    assert r.sizes["common"] == 4


def test_monoid_amalgam_same_language():
    assert monoid_amalgam_check(BOX, BOX, n=2, image_depth=1)


def test_substitution_enumeration_guard():
    with pytest.raises(OverflowError):
        enumerate_substitutions(Language.of(c=2), 2, 3, guard=100)
