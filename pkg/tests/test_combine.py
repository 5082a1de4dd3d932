import pytest

from quantlog.combine import (
    CombineError,
    algebraic_amalgam_embedding,
    build_amalgam,
    build_coproduct,
    coproduct_embedding,
    embed_theories,
    find_witness,
    generation_check,
    tensembed_saturation_check,
    verify_deltapsi,
    verify_epsilon_embeddings,
    verify_zetadelta,
)
from quantlog.combine.coproduct import _subsets
from quantlog.deduction import DeductiveSystem, InferenceRule
from quantlog.fixtures import BOX, CIRC, DIA, box4, circ4, dia4, modal_translations, necessitation, projection
from quantlog.syntax import App, Equation, Translation, TruncationParams, Var, connective_translation, item_depth

x1, x2 = Var(1), Var(2)
P = TruncationParams(n=2, d=3)
SMALL = TruncationParams(n=1, d=2)


def tag(op, phi, times=1):
    for _ in range(times):
        phi = App(op, (phi,))
    return phi


def b(phi, times=1):
    return tag("1:box", phi, times)


def d(phi, times=1):
    return tag("2:dia", phi, times)


@pytest.fixture(scope="module")
def modal():
    t1, t2 = modal_translations()
    return build_amalgam(circ4(), t1, t2, box4(), dia4(), P)


@pytest.fixture(scope="module")
def coproduct(modal):
    return modal.coproduct


def test_coproduct_language(coproduct):
    assert sorted(coproduct.language.names) == ["1:box", "2:dia"]
    assert coproduct.in_D(1, b(x1)) and not coproduct.in_D(1, d(x1))
    assert coproduct.in_D(1, x1) and coproduct.in_D(2, x1)


def test_empty_partner_gives_first_closure():
    C = build_coproduct(box4(), DeductiveSystem(DIA), SMALL)
    for phi in _subsets(C.U.items, 2):
        assert C.delta(phi) == C.delta_i(1, phi)


def test_delta_on_modal_fixture(coproduct):
    got = coproduct.delta({b(x1), d(x1)})
    assert {b(x1), b(x1, 2), d(x1), d(x1, 2)} <= got


def test_delta_i_agrees_with_gamma_i(coproduct):
    for i in (1, 2):
        for phi in _subsets(coproduct.D(i), 2):
            assert coproduct.delta_i(i, phi) == coproduct.gamma(i, phi)


def test_delta_psi_examples(coproduct):
    closed = coproduct.delta_i(1, {d(x1)})
    assert {x for x in closed if coproduct.in_D(2, x)} == {d(x1)}
    assert not any(coproduct.in_D(2, x) for x in coproduct.delta_i(1, ()))


def test_verify_deltapsi(coproduct):
    rep = verify_deltapsi(coproduct)
    assert rep.ok and rep.instances > 0


def test_gamma_prime(coproduct):
    assert coproduct.gamma_prime(1, {x1, d(x1)}) == coproduct.gamma(1, {x1}) | {d(x1)}


def test_embed_theories(coproduct):
    rep = embed_theories(coproduct, samples=500)
    assert rep.ok, rep.render()
    assert rep.find("R_delta saturation").instances == 500


def test_coproduct_embedding_shares_variables(coproduct):
    rep = coproduct_embedding(coproduct, cap=1, samples=300)
    # the least theories go together and joins are preserved
    assert rep.failed == 0
    assert rep.find("join preservation").ok
    # a variable can come from either side, so e is not injective
    inj = rep.find("injectivity on all pairs")
    assert not inj.ok
    assert "e({x1}, {}) = e({}, {x1}) = {x1}" in inj.failures
    assert rep.find("injectivity on variable-free theories").ok


def test_generation(coproduct):
    assert generation_check(coproduct).ok


def test_trivial_and_mismatched_systems_are_rejected():
    with pytest.raises(CombineError):
        build_coproduct(necessitation(), dia4(), P)
    eqs = DeductiveSystem(DIA, kind="equations", axioms=(Equation(x1, x1),))
    with pytest.raises(CombineError):
        build_coproduct(box4(), eqs, P)


def test_non_modal_coproduct():
    C = build_coproduct(projection(), box4(), TruncationParams(n=1, d=2))
    assert verify_deltapsi(C).ok
    assert embed_theories(C, cap=1, samples=200).ok


def test_bridge_rules(modal):
    rules = set(modal.theta)
    assert InferenceRule((b(x1),), d(x1)) in rules
    assert InferenceRule((d(x1),), b(x1)) in rules
    assert InferenceRule((b(x1, 2),), d(x1, 2)) in rules
    # a bare variable bridges to itself and is left out of the engines
    assert InferenceRule((x1,), x1) in rules
    assert InferenceRule((x1,), x1) not in modal.eps_system.rules


def test_bridge_depth_limits_schemas():
    t1, t2 = modal_translations()
    A = build_amalgam(circ4(), t1, t2, box4(), dia4(), P, bridge_depth=1)
    assert A.theta and all(item_depth(r.conclusion) <= 1 for r in A.theta)


def test_one_bridge_step(modal):
    assert d(x1) in modal.eps({b(x1)})
    assert d(x1) not in modal.coproduct.delta({b(x1)})


def test_witness_for_four_through_the_common_system(modal):
    # dia dia x1 in eps_1({dia x1}): Lambda = {circ x}, xi = circ circ x
    phi = frozenset({d(x1)})
    assert d(x1, 2) in modal.eps_i(1, phi)
    status, (binding, lam, xi) = find_witness(modal, 2, phi, d(x1, 2))
    assert status == "found"
    assert lam == (tag("circ", x1),) and xi == tag("circ", x1, 2)
    assert binding == {1: x1}


def test_witness_for_cross_translation(modal):
    phi = frozenset({b(x1)})
    assert d(x1) in modal.eps_i(1, phi)


def test_verify_zetadelta(modal):
    rep = verify_zetadelta(modal)
    assert rep.ok, rep.render()
    assert rep.find("witnessed by the common system").warned == 0


def test_verify_epsilon(modal):
    rep = verify_epsilon_embeddings(modal, cap=1, samples=300)
    assert rep.ok, rep.render()


def test_algebraic_amalgam_small():
    t1, t2 = modal_translations()
    A = build_amalgam(circ4(), t1, t2, box4(), dia4(), TruncationParams(n=2, d=2))
    rep = algebraic_amalgam_embedding(A, cap=1)
    assert rep.ok, rep.render()


def test_tensembed_small(coproduct):
    rep = tensembed_saturation_check(coproduct, cap=1, samples=200)
    assert rep.ok, rep.render()


def test_amalgam_rejects_bad_translations():
    t1, t2 = modal_translations()
    with pytest.raises(CombineError):
        build_amalgam(circ4(), t2, t1, box4(), dia4(), P)
    wrong = connective_translation(BOX, DIA, {"box": "dia"})
    with pytest.raises(CombineError):
        build_amalgam(circ4(), wrong, t2, box4(), dia4(), P)


def test_translation_that_breaks_representation_is_rejected():
    # circ |-> box box pushes circ circ x out of the universe
    t2 = modal_translations()[1]
    doubled = Translation.from_dict(CIRC, BOX, {"circ": App("box", (App("box", (x1,)),))})
    with pytest.raises(CombineError):
        build_amalgam(circ4(), doubled, t2, box4(), dia4(), P)
