"""Amalgamation of two systems over a common one through bridge rules.

The common system ``S'`` lives on a language ``M`` and is translated into
both sides by ``tau_1, tau_2``; ``s_i`` is ``tau_i`` followed by the tagging
injection.  The bridge rules ``Theta`` are the schemas ``s_i(phi) / s_k(phi)``
for every item ``phi`` of the common universe up to the bridge depth, in
both directions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from ..deduction import (
    DeductiveSystem,
    InferenceRule,
    TheoryLattice,
    act,
    engine,
    system_universe,
    theory_lattice,
)
from ..qmodule import Amalgam, ModuleMorphism, QModule, amalgamated_coproduct, is_theta_saturated_pair, validate_module
from ..quantale import powerset_quantale
from ..report import Report
from ..syntax import (
    Item,
    Substitution,
    Translation,
    TruncationParams,
    Var,
    compose,
    format_item,
    format_set,
    item_depth,
    match_item,
    renamings,
    sort_items,
)
from .coproduct import CombineError, CoproductSystem, _other, _subsets, _substitutions, build_coproduct


@dataclass
class AmalgamatedSystem:
    coproduct: CoproductSystem
    common: DeductiveSystem
    tau: tuple[Translation, Translation]
    s: tuple[Translation, Translation]
    theta: tuple                     # every bridge, inert ones included
    bridge_depth: int
    zeta_system: DeductiveSystem
    eps_system: DeductiveSystem
    eps_parts: tuple[DeductiveSystem, DeductiveSystem]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def params(self) -> TruncationParams:
        return self.coproduct.params

    @property
    def C_U(self) -> list[Item]:
        return system_universe(self.common, self.params).items

    def beta(self, phi: Iterable[Item]) -> frozenset:
        return engine(self.common, self.params)(phi).items

    def s_i(self, i: int, items: Iterable[Item]) -> set:
        t = self.s[i - 1]
        return {t(x) for x in items}

    def zeta(self, phi) -> frozenset:
        return engine(self.zeta_system, self.params)(phi).items

    def eps(self, phi) -> frozenset:
        return engine(self.eps_system, self.params)(phi).items

    def eps_i(self, i: int, phi) -> frozenset:
        return engine(self.eps_parts[i - 1], self.params)(phi).items

    def common_theories(self, cap: int = 2) -> TheoryLattice:
        if cap not in self._cache:
            self._cache[cap] = theory_lattice(self.common, self.params, cap)
        return self._cache[cap]


def _inert(r: InferenceRule) -> bool:
    return r.premises == (r.conclusion,)


def representation_check(C: CoproductSystem, common: DeductiveSystem, s: tuple, cap: int = 2,
                         limit: int = 300, seed: int = 0) -> Report:
    """gamma_i(s_i(Phi)) meets s_i[C] exactly in s_i[beta(Phi)], for sampled Phi."""
    rng = random.Random(seed)
    rep = Report("representation of the common system", C.params.echo())
    CU = system_universe(common, C.params).items
    beta = engine(common, C.params)
    sets = list(_subsets(CU, min(cap, 1)))
    if cap >= 2:
        pairs = [frozenset(p) for p in combinations(CU, 2)]
        sets += pairs if len(pairs) <= limit else rng.sample(pairs, limit)
    for i in (1, 2):
        Ui = system_universe(C.parts[i - 1], C.params)
        image = {x: s[i - 1](x) for x in CU}
        for phi in sets:
            src = {image[x] for x in phi}
            if not Ui.contains_all(src):
                rep.skipped += 1
                continue
            G = C.gamma(i, src)
            got = {x for x in CU if image[x] in G}
            rep.check(got == set(beta(phi).items),
                      lambda: f"s_{i}: gamma_{i}(s_{i}{format_set(phi)}) pulls back to {format_set(got)}, "
                              f"beta gives {format_set(beta(phi).items)}")
    return rep


def build_amalgam(common: DeductiveSystem, tau1: Translation, tau2: Translation,
                  S1: DeductiveSystem, S2: DeductiveSystem, params: TruncationParams | None = None,
                  bridge_depth: int | None = None, check: bool = True) -> AmalgamatedSystem:
    params = params or TruncationParams()
    C = build_coproduct(S1, S2, params)
    if common.kind != C.E.kind:
        raise CombineError("common system has a different kind")
    if tau1.source != common.language or tau2.source != common.language:
        raise CombineError("translations must start from the common language")
    if tau1.target != S1.language or tau2.target != S2.language:
        raise CombineError("translations must land in the two component languages")
    s = (tau1.then(C.inj[0]), tau2.then(C.inj[1]))
    if check:
        rep = representation_check(C, common, s)
        if not rep.ok:
            raise CombineError("representation sanity check failed:\n" + rep.render())
    depth = params.d if bridge_depth is None else bridge_depth
    theta = []
    for phi in system_universe(common, params).items:
        if item_depth(phi) > depth:
            continue
        a, b = s[0](phi), s[1](phi)
        theta.append(InferenceRule((a,), b))
        theta.append(InferenceRule((b,), a))
    active = tuple(dict.fromkeys(r for r in theta if not _inert(r)))
    L = C.language
    zeta = DeductiveSystem(L, C.E.kind, (), active, C.E.types, "zeta")
    eps = C.E.with_rules(active, name="epsilon")
    parts = tuple(DeductiveSystem(L, P.kind, P.axioms, tuple(dict.fromkeys(P.rules + active)), C.E.types,
                                  f"epsilon_{i}")
                  for i, P in enumerate(C.parts, 1))
    return AmalgamatedSystem(C, common, (tau1, tau2), s, tuple(theta), depth, zeta, eps, parts)


# ---------------------------------------------------------------------------

def find_witness(A: AmalgamatedSystem, k: int, phi: frozenset, psi: Item, budget: int = 20000):
    """Search (sigma, Lambda, xi) with sigma.s_k(Lambda) in Phi, sigma.s_k(xi) = psi and Lambda |-' xi.

    Returns ``("found", (binding, Lambda, xi))``, ``("none", None)`` when the
    search space is exhausted, or ``("budget", None)``.
    """
    CU = A.C_U
    sk = {x: A.s[k - 1](x) for x in CU}
    phis = list(phi)
    steps = 0
    for xi in CU:
        b0 = match_item(sk[xi], psi, {})
        if b0 is None:
            continue
        stack = [(b0, (), 0)]
        while stack:
            steps += 1
            if steps > budget:
                return "budget", None
            b, lam, start = stack.pop()
            if xi in A.beta(lam):
                return "found", (b, lam, xi)
            for j in range(start, len(CU)):
                for target in phis:
                    b2 = match_item(sk[CU[j]], target, b)
                    if b2 is not None:
                        stack.append((b2, lam + (CU[j],), j + 1))
    return "none", None


def verify_zetadelta(A: AmalgamatedSystem, cap: int = 2, budget: int = 20000) -> Report:
    C = A.coproduct
    rep = Report("bridge consequences on the other domain", A.params.echo())
    direct = rep.add(Report("psi in Phi"))
    witnessed = rep.add(Report("witnessed by the common system"))
    shape = rep.add(Report("shape of cross consequences"))
    for i in (1, 2):
        k = _other(i)
        Dk = C.D(k)
        for phi in _subsets(Dk, cap):
            closed = A.eps_i(i, phi)
            for psi in sort_items(x for x in closed if C.in_D(k, x)):
                if psi in phi:
                    direct.check(True, "")
                    continue
                status, w = find_witness(A, k, phi, psi, budget)
                if status == "budget":
                    witnessed.warn(f"budget exhausted for {format_item(psi)} in eps_{i}({format_set(phi)})")
                    witnessed.skipped += 1
                    continue
                witnessed.check(status == "found",
                                lambda: f"{format_item(psi)} in eps_{i}({format_set(phi)}) has no witness")
        # psi on the other side of eps_i(Phi), Phi inside D_i
        pool = [p for p in C.delta_i(k, A.s_i(k, A.C_U)) if not isinstance(p, Var)]
        for phi in _subsets(C.D(i), cap):
            closed = A.eps_i(i, phi)
            for psi in sort_items(x for x in closed if C.in_D(k, x) and not isinstance(x, Var)):
                shape.check(any(match_item(p, psi, {}) is not None for p in pool),
                            lambda: f"{format_item(psi)} in eps_{i}({format_set(phi)}) is no instance of "
                                    f"e_{k} r_{k}(C)")
    return rep


def verify_epsilon_embeddings(A: AmalgamatedSystem, cap: int = 1, samples: int = 1000, seed: int = 0) -> Report:
    rng = random.Random(seed)
    C = A.coproduct
    U = C.U
    rep = Report("embeddings of Th_i into Th_epsilon", A.params.echo())
    for i in (1, 2):
        TL = C.theories(i, cap)
        sec = rep.add(Report(f"m_{i}"))
        images = {}
        m = {}
        agree = 0
        for T in TL.theories:
            v = A.eps(T)
            m[T] = v
            vi = A.eps_i(i, T)
            agree += vi == v
            sec.check(frozenset(x for x in vi if C.in_D(i, x)) == T,
                      lambda: f"eps_{i}({format_set(T)}) meets D_{i} in more than the theory")
            sec.check(frozenset(x for x in v if C.in_D(i, x)) == T,
                      lambda: f"eps({format_set(T)}) meets D_{i} in more than the theory")
            sec.check(v not in images, lambda: f"m_{i} identifies {format_set(T)} and {format_set(images[v])}")
            images[v] = T
        sec.note(f"eps_{i} equals eps on {agree} of {len(TL)} theories")
        sec.check(m[TL.least] == A.eps(()), f"m_{i}(least) differs from eps(empty)")
        ths = TL.theories
        for a in range(len(ths)):
            for b in range(a, len(ths)):
                j = ths[TL.join(a, b)]
                sec.check(m[j] == A.eps(m[ths[a]] | m[ths[b]]),
                          lambda: f"m_{i} fails on the join of {format_set(ths[a])} and {format_set(ths[b])}")
    # R_epsilon: the two translations of a common theory are interchangeable below eps_i(Phi)
    sat = rep.add(Report("R_epsilon saturation"))
    chain = rep.add(Report("zeta identifies the two translations"))
    subs = _substitutions(C.language, A.params)
    psis = list(_subsets(A.C_U, 1))
    for psi in psis:
        p1 = C.delta_i(1, A.s_i(1, psi))
        p2 = C.delta_i(2, A.s_i(2, psi))
        chain.check(A.zeta(p1) == A.zeta(p2),
                    lambda: f"zeta separates the translations of {format_set(psi)}")
    gens = {i: list(_subsets(C.D(i), cap)) for i in (1, 2)}
    tries = 0
    while sat.instances < samples and tries < 50 * samples:
        tries += 1
        i = rng.choice((1, 2))
        psi = rng.choice(psis)
        phi = rng.choice(gens[i])
        sigma = rng.sample(subs, rng.choice((1, 2)))
        a = act(sigma, C.delta_i(1, A.s_i(1, psi)))
        b = act(sigma, C.delta_i(2, A.s_i(2, psi)))
        if not (U.contains_all(a) and U.contains_all(b)):
            sat.skipped += 1
            continue
        target = A.eps_i(i, phi)
        sat.check((a <= target) == (b <= target),
                  lambda: f"i={i}: Sigma={[str(s) for s in sigma]}, Psi={format_set(psi)}, Phi={format_set(phi)}")
    return rep


# ---------------------------------------------------------------------------
# the algebraic side: theory lattices as modules over subsets of renamings

class MaterializationError(ValueError):
    pass


def renaming_quantale(n: int):
    R = renamings(n)
    Q, subsets = powerset_quantale(R, compose, Substitution.identity(n))
    return Q, subsets


def theory_module(Q, subsets, TL: TheoryLattice, close) -> QModule:
    """``Sigma . T = close(Sigma[T])``; renamings never leave the universe."""
    action = []
    for a in range(Q.n):
        row = []
        for T in TL.theories:
            v = frozenset(close(act(subsets[a], T)))
            if v not in TL.index:
                raise MaterializationError(f"image of {format_set(T)} is outside the capped family")
            row.append(TL.index[v])
        action.append(row)
    return QModule(Q, TL.lattice, action)


def algebraic_amalgam_embedding(A: AmalgamatedSystem, cap: int = 2) -> Report:
    C = A.coproduct
    rep = Report("amalgamated coproduct of theory modules into Th_epsilon", A.params.echo())
    Q, subsets = renaming_quantale(A.params.n)
    rep.note(f"scalars: subsets of {A.params.n ** A.params.n} renamings ({Q.n} elements)")
    Tp = A.common_theories(cap)
    T1, T2 = C.theories(1, cap), C.theories(2, cap)
    try:
        Mp = theory_module(Q, subsets, Tp, A.beta)
        M1 = theory_module(Q, subsets, T1, lambda x: C.gamma(1, x))
        M2 = theory_module(Q, subsets, T2, lambda x: C.gamma(2, x))
    except MaterializationError as exc:
        rep.warn(f"scope reduced: {exc}")
        return rep
    mods = rep.add(Report("materialized modules"))
    for name, M in (("Th'", Mp), ("Th_1", M1), ("Th_2", M2)):
        r = validate_module(M)
        mods.check(bool(r), lambda: f"{name} is not a module: {r.reason}")
    legs = []
    for i, Ti in ((1, T1), (2, T2)):
        table = []
        for X in Tp.theories:
            v = C.gamma(i, A.s_i(i, X))
            if v not in Ti.index:
                rep.warn(f"scope reduced: r_{i}({format_set(X)}) falls outside the capped family")
                return rep
            table.append(Ti.index[v])
        f = ModuleMorphism(Mp, M1 if i == 1 else M2, tuple(table))
        mods.check(f.is_valid(), f"r_{i} is not a module morphism")
        mods.check(f.is_injective(), f"r_{i} is not injective")
        legs.append(f)
    if not mods.ok:
        return rep
    Am = Amalgam(Mp, M1, M2, legs[0], legs[1])
    AC = amalgamated_coproduct(Am)
    alg = rep.add(Report("amalgam"))
    r = AC.check(Am)
    alg.check(bool(r), lambda: f"amalgam check: {r.reason}")
    alg.note(f"|Th_1 x Th_2| = {AC.product.module.n}, classes = {AC.module.n}")
    prod = AC.product
    sat = AC.saturated
    for p in range(prod.module.n):
        u, v = prod.unpair(p)
        alg.check(is_theta_saturated_pair(Am, u, v) == (p in sat),
                  lambda: f"interval test disagrees on ({format_set(T1.theories[u])}, {format_set(T2.theories[v])})")
    # e' on classes through their saturated representative
    ev = {}
    for p in range(prod.module.n):
        u, v = prod.unpair(p)
        ev[p] = A.eps(T1.theories[u] | T2.theories[v])
    emb = rep.add(Report("e'"))
    rep_of = {AC.projection(s): s for s in sat}
    for p in range(prod.module.n):
        emb.check(ev[p] == ev[rep_of[AC.projection(p)]],
                  lambda: f"e' is not constant on the class of {prod.unpair(p)}")
    for X in Tp.theories:
        a = prod.pair(legs[0](Tp.index[X]), T2.lattice.bottom)
        b = prod.pair(T1.lattice.bottom, legs[1](Tp.index[X]))
        emb.check(AC.projection(a) == AC.projection(b), lambda: f"generator classes differ for {format_set(X)}")
        emb.check(ev[a] == ev[b] == A.eps(A.s_i(1, X)) == A.eps(A.s_i(2, X)),
                  lambda: f"e' is not well defined on the generator {format_set(X)}")
    least = prod.pair(T1.lattice.bottom, T2.lattice.bottom)
    emb.check(ev[least] == A.eps(()), "least class does not go to eps(empty)")
    seen = {}
    for s in sorted(sat):
        v = ev[s]
        emb.check(v not in seen, lambda: f"e' identifies saturated pairs {prod.unpair(s)} and {prod.unpair(seen[v])}")
        seen.setdefault(v, s)
    return rep
