"""Named verification suites over the generated families and the logic fixtures.

Each suite returns a :class:`Report`; the CLI exposes them through
``verify --suite NAME``.
"""

from __future__ import annotations

from .families import amalgams, module_morphisms, modules_upto, quantales_upto, relations_upto
from .lattice import order_isomorphisms
from .qmodule import (
    RIGHT,
    QModule,
    action_residuals,
    amalgamated_coproduct,
    congruence_oracle_m,
    is_theta_saturated_pair,
    module_isomorphism,
    nucleus_from_morphism,
    quantale_as_module,
    quotient_by_partition_m,
    quotient_m,
    saturated_elements_m,
)
from .quantale import (
    Quantale,
    congruence_oracle_q,
    is_quantic_nucleus,
    nucleus_q,
    quantale_isomorphism,
    quotient_by_partition_q,
    quotient_q,
    saturated_elements_q,
    two_element_quantale,
)
from .report import Report
from .syntax import Language, TruncationParams, monoid_amalgam_check
from .tensor import check_bimorphism, tensor_lazy, tensor_powerset


def _family(max_q: int, max_m: int):
    for Q in quantales_upto(max_q):
        for M in modules_upto(Q, max_m):
            yield Q, M


def suite_satquo(max_q: int = 4, **_) -> Report:
    rep = Report(f"saturated quotients of quantales, |Q| <= {max_q}")
    for Q in quantales_upto(max_q):
        for theta in relations_upto(Q.n, 2):
            quo, _ = quotient_q(Q, theta)
            oracle = quotient_by_partition_q(Q, congruence_oracle_q(Q, theta))
            rep.check(quantale_isomorphism(quo, oracle) is not None,
                      lambda: f"{Q!r} theta={theta}: {quo.n} saturated vs {oracle.n} classes")
            rep.check(is_quantic_nucleus(nucleus_q(Q, theta), Q),
                      lambda: f"{Q!r} theta={theta}: rho is not a quantic nucleus")
    return rep


def suite_satquom(max_q: int = 4, max_m: int = 5, **_) -> Report:
    rep = Report(f"saturated quotients of modules, |Q| <= {max_q}, |M| <= {max_m}")
    for Q, M in _family(max_q, max_m):
        for theta in relations_upto(M.n, 2):
            quo, _ = quotient_m(M, theta)
            oracle = quotient_by_partition_m(M, congruence_oracle_m(M, theta))
            rep.check(module_isomorphism(quo, oracle) is not None,
                      lambda: f"{Q!r} {M!r} theta={theta}: {quo.n} saturated vs {oracle.n} classes")
    return rep


def suite_satinfresm(max_q: int = 4, max_m: int = 5, **_) -> Report:
    """Saturated sets are meet-closed and closed under a\\s."""
    rep = Report(f"saturated sets closed under meets and residuals, |Q| <= {max_q}, |M| <= {max_m}")
    for Q, M in _family(max_q, max_m):
        L = M.lattice
        for theta in relations_upto(M.n, 2):
            sat = saturated_elements_m(M, theta)
            rep.check(L.top in sat, lambda: f"{M!r} theta={theta}: top not saturated")
            for s in sat:
                for t in sat:
                    if t > s:
                        rep.check(L.meet2(s, t) in sat, lambda: f"{M!r} theta={theta}: meet of {s}, {t}")
                for a in range(Q.n):
                    r, _ = action_residuals(M, a, s, s)
                    rep.check(r in sat, lambda: f"{M!r} theta={theta}: {a}\\{s} = {r} not saturated")
    return rep


def suite_rrm(max_q: int = 4, max_m: int = 5, **_) -> Report:
    """A larger relation has fewer saturated elements."""
    rep = Report(f"saturation is antitone in the relation, |Q| <= {max_q}, |M| <= {max_m}")
    for Q, M in _family(max_q, max_m):
        rels = relations_upto(M.n, 2)
        sats = {theta: saturated_elements_m(M, theta) for theta in rels}
        for theta in rels:
            for eta in rels:
                if set(theta) <= set(eta) and theta != eta:
                    rep.check(sats[eta] <= sats[theta], lambda: f"{M!r}: {theta} within {eta}")
    return rep


def suite_satnucm(max_q: int = 4, max_m: int = 5, **_) -> Report:
    """The nucleus ``f_* f`` has the ker f-saturated elements as its image."""
    rep = Report(f"nucleus of a morphism vs kernel saturation, |Q| <= {max_q}, |M| <= {max_m}")
    for Q in quantales_upto(max_q):
        mods = modules_upto(Q, max_m)
        for M in mods:
            # projections onto quotients and every morphism into the family
            fs = [quotient_m(M, theta)[1] for theta in relations_upto(M.n, 1)]
            for N in mods:
                fs.extend(module_morphisms(M, N))
            for f in fs:
                g = nucleus_from_morphism(f)
                sat = saturated_elements_m(M, f.kernel())
                rep.check(frozenset(g.image()) == sat, lambda: f"{M!r}: image {g.image()} vs {sorted(sat)}")
    return rep


def suite_satuni(max_q: int = 4, **_) -> Report:
    rep = Report(f"two-sided condition suffices on unital quantales, |Q| <= {max_q}")
    for Q in quantales_upto(max_q):
        for theta in relations_upto(Q.n, 2):
            rep.check(saturated_elements_q(Q, theta, False) == saturated_elements_q(Q, theta, True),
                      lambda: f"{Q!r} theta={theta}")
    return rep


def opposite(Q: Quantale) -> Quantale:
    return Quantale(Q.lattice, [[Q.product[b][a] for b in range(Q.n)] for a in range(Q.n)], Q.unit)


def right_modules_upto(Q: Quantale, m: int) -> list[QModule]:
    """Right Q-modules are left modules over the opposite quantale."""
    return [QModule(Q, M.lattice, M.action, RIGHT) for M in modules_upto(opposite(Q), m)]


def suite_tensor(max_q: int = 3, max_points: int = 9, **_) -> Report:
    rep = Report(f"tensor products, |Q| <= {max_q}, |M1 x M2| <= {max_points}")
    unit = rep.add(Report("unit laws"))
    for Q in quantales_upto(max_q):
        T = tensor_lazy(quantale_as_module(Q, RIGHT), quantale_as_module(Q, "left"))
        unit.check(bool(order_isomorphisms(T.lattice, Q.lattice)), lambda: f"Q (x) Q differs from Q for {Q!r}")
    Q2 = two_element_quantale()
    T = tensor_powerset(quantale_as_module(Q2, RIGHT), quantale_as_module(Q2, "left"))
    unit.check(T.lattice.n == 2, "2 (x) 2 is not 2")
    agree = rep.add(Report("lazy agrees with the powerset oracle"))
    laws = rep.add(Report("elementary tensors form a bimorphism"))
    # a factor with >= 2 elements bounds the other by max_points // 2; the
    # one-element factor is only paired up to size 5
    side = max(max_points // 2, 5)
    for Q in quantales_upto(max_q):
        rights = right_modules_upto(Q, side)
        lefts = modules_upto(Q, side)
        for M1 in rights:
            for M2 in lefts:
                if M1.n * M2.n > max_points:
                    continue
                lazy = tensor_lazy(M1, M2)
                full = tensor_powerset(M1, M2)
                agree.check(sorted(lazy.members) == sorted(full.members),
                            lambda: f"{Q!r} {M1!r} (x) {M2!r}: {len(lazy)} vs {len(full)}")
                probs = check_bimorphism(lazy, M1, M2)
                laws.check(not probs, lambda: f"{Q!r} {M1!r} (x) {M2!r}: {probs[0]}")
    return rep


def suite_amalgam(max_q: int = 4, max_p: int = 3, max_mn: int = 5, **_) -> Report:
    rep = Report(f"strong amalgamation of modules, |Q| <= {max_q}, |P| <= {max_p}, |M|, |N| <= {max_mn}")
    for Q in quantales_upto(max_q):
        for A in amalgams(Q, max_p, max_mn):
            AC = amalgamated_coproduct(A)
            r = AC.check(A)
            rep.check(bool(r), lambda: f"{Q!r} P={A.P!r} M={A.M!r} N={A.N!r}: {r.reason}")
            prod = AC.product
            for p in range(prod.module.n):
                u, v = prod.unpair(p)
                rep.check(is_theta_saturated_pair(A, u, v) == (p in AC.saturated),
                          lambda: f"{Q!r} interval test disagrees at ({u}, {v})")
    return rep


def suite_amalgmon(n: int = 2, image_depth: int = 2, **_) -> Report:
    rep = Report(f"amalgamation of substitution monoids, n={n}, image depth <= {image_depth}")
    r = monoid_amalgam_check(Language.of(box=1), Language.of(dia=1), n=n, image_depth=image_depth)
    for key, val in sorted(r.sizes.items()):
        rep.note(f"|{key}| = {val}")
    rep.instances += r.cases
    for f in r.failures:
        rep.fail(f, count=False)
    return rep


ALGEBRAIC = {
    "satquo": suite_satquo,
    "satquom": suite_satquom,
    "satinfresm": suite_satinfresm,
    "rrm": suite_rrm,
    "satnucm": suite_satnucm,
    "satuni": suite_satuni,
    "tensor": suite_tensor,
    "amalgam": suite_amalgam,
    "amalgmon": suite_amalgmon,
}


# ---------------------------------------------------------------------------
# logic suites, defaulting to the modal fixtures

def _modal(params, systems=None):
    from .combine import build_amalgam
    from .fixtures import box4, circ4, dia4, modal_translations

    if systems is not None:
        return systems
    t1, t2 = modal_translations()
    return build_amalgam(circ4(), t1, t2, box4(), dia4(), params)


def _logic(fn_name: str, target: str):
    def run(params: TruncationParams | None = None, amalgam=None, cap: int = 2, **_):
        from . import combine

        params = params or TruncationParams()
        A = _modal(params, amalgam)
        obj = A if target == "amalgam" else A.coproduct
        fn = getattr(combine, fn_name)
        return fn(obj, cap=cap) if fn_name not in ("verify_epsilon_embeddings", "generation_check") \
            else fn(obj, cap=min(cap, 1))
    run.__name__ = f"suite_{fn_name}"
    return run


def suite_tarski(params: TruncationParams | None = None, systems=None, **_) -> Report:
    from .deduction import check_nontrivial, check_tarski
    from .fixtures import box4, circ4, dia4, necessitation

    params = params or TruncationParams()
    rep = Report("closure operator laws", params.echo())
    for S in systems or (necessitation(), box4(), dia4(), circ4()):
        sub = rep.add(check_tarski(S, params))
        sub.suite = f"{S.name}: {sub.suite}"
    nt = rep.add(Report("nontriviality"))
    for S in systems or (box4(), dia4(), circ4()):
        nt.check(check_nontrivial(S, params), f"{S.name} is trivial")
    return rep


LOGIC = {
    "deltapsi": _logic("verify_deltapsi", "coproduct"),
    "embed": _logic("embed_theories", "coproduct"),
    "coproduct": _logic("coproduct_embedding", "coproduct"),
    "generation": _logic("generation_check", "coproduct"),
    "zetadelta": _logic("verify_zetadelta", "amalgam"),
    "epsilon": _logic("verify_epsilon_embeddings", "amalgam"),
    "amalgam-logics": _logic("algebraic_amalgam_embedding", "amalgam"),
    "tensembed": _logic("tensembed_saturation_check", "coproduct"),
    "tarski": suite_tarski,
}

SUITES = {**ALGEBRAIC, **LOGIC}
