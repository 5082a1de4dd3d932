"""Coproduct of two deductive systems of the same kind over the disjoint union language.

``delta_i`` closes a set of items of the big domain ``E`` with the axioms and
rules of the i-th system alone; ``delta`` uses both.  Joining two nuclei
given by rules is closing under the union of the rule sets, so ``delta``
is computed directly rather than by iterating ``delta_1`` and ``delta_2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from ..deduction import (
    DeductiveSystem,
    TheoryLattice,
    act,
    check_nontrivial,
    engine,
    gamma_prime,
    system_universe,
    theory_lattice,
)
from ..report import Report
from ..syntax import (
    Item,
    Language,
    Substitution,
    Translation,
    TruncationParams,
    Var,
    apply_substitution,
    disjoint_union,
    enumerate_substitutions,
    format_set,
    in_language,
    match_item,
)


class CombineError(ValueError):
    pass


@dataclass
class CoproductSystem:
    S1: DeductiveSystem
    S2: DeductiveSystem
    params: TruncationParams
    language: Language                       # tagged disjoint union
    inj: tuple[Translation, Translation]
    parts: tuple[DeductiveSystem, DeductiveSystem]   # S_i written in tagged connectives
    E: DeductiveSystem                       # union of axioms and rules
    _lattices: dict = field(default_factory=dict, repr=False)

    def sublanguage(self, i: int) -> Language:
        return self.parts[i - 1].language

    # nuclei -------------------------------------------------------------
    def gamma(self, i: int, phi: Iterable[Item]) -> frozenset:
        return engine(self.parts[i - 1], self.params, None)(phi).items

    def delta_i(self, i: int, phi: Iterable[Item]) -> frozenset:
        return engine(self.parts[i - 1], self.params, self.language)(phi).items

    def delta(self, phi: Iterable[Item]) -> frozenset:
        return engine(self.E, self.params, self.language)(phi).items

    def gamma_prime(self, i: int, phi: Iterable[Item]) -> frozenset:
        return gamma_prime(lambda p: engine(self.parts[i - 1], self.params, None)(p),
                           lambda it: self.in_D(i, it), phi)

    # domains ------------------------------------------------------------
    @property
    def U(self):
        return system_universe(self.E, self.params, self.language)

    def D(self, i: int) -> list[Item]:
        return system_universe(self.parts[i - 1], self.params).items

    def in_D(self, i: int, it: Item) -> bool:
        return in_language(it, self.sublanguage(i))

    def theories(self, i: int, cap: int = 2) -> TheoryLattice:
        key = (i, cap)
        if key not in self._lattices:
            self._lattices[key] = theory_lattice(self.parts[i - 1], self.params, cap)
        return self._lattices[key]


def build_coproduct(S1: DeductiveSystem, S2: DeductiveSystem, params: TruncationParams | None = None,
                    require_nontrivial: bool = True) -> CoproductSystem:
    params = params or TruncationParams()
    if S1.kind != S2.kind:
        raise CombineError(f"systems of different kinds: {S1.kind} and {S2.kind}")
    if require_nontrivial:
        for S in (S1, S2):
            if not check_nontrivial(S, params):
                raise CombineError(f"system {S.name or S.language} is trivial within the truncation")
    L, inj1, inj2 = disjoint_union(S1.language, S2.language)
    P1 = S1.translated(inj1)
    P2 = S2.translated(inj2)
    P1 = P1.with_language(Language(tuple(c for c in L.connectives if c[0].startswith("1:"))))
    P2 = P2.with_language(Language(tuple(c for c in L.connectives if c[0].startswith("2:"))))
    E = P1.union(P2, name=f"{S1.name or 'S1'} + {S2.name or 'S2'}").with_language(L)
    return CoproductSystem(S1, S2, params, L, (inj1, inj2), (P1, P2), E)


def _subsets(items, cap):
    for r in range(cap + 1):
        for c in combinations(items, r):
            yield frozenset(c)


def _other(i: int) -> int:
    return 3 - i


# ---------------------------------------------------------------------------

def verify_deltapsi(C: CoproductSystem, cap: int = 2) -> Report:
    """For i != k and Phi, psi inside D_k: psi in delta_i(Phi) iff psi in Phi."""
    rep = Report("delta_i acts trivially on the other domain", C.params.echo())
    for i in (1, 2):
        k = _other(i)
        Dk = C.D(k)
        for phi in _subsets(Dk, cap):
            closed = C.delta_i(i, phi)
            for psi in Dk:
                rep.check((psi in closed) == (psi in phi),
                          lambda: f"i={i}: {psi} in delta_{i}({format_set(phi)}) but not in the input")
    return rep


def _substitutions(lang: Language, params: TruncationParams, depth: int = 1) -> list[Substitution]:
    return enumerate_substitutions(lang, params.n, min(depth, params.d))


def embed_theories(C: CoproductSystem, cap: int = 2, samples: int = 2000, seed: int = 0) -> Report:
    """The maps Th_i -> Th_delta, gamma_i(Phi) |-> delta_i(Phi), and the saturation argument behind them."""
    rng = random.Random(seed)
    rep = Report("embeddings of Th_i into the coproduct", C.params.echo())
    U = C.U
    for i in (1, 2):
        k = _other(i)
        TL = C.theories(i, cap)
        sec = rep.add(Report(f"e_{i}"))
        sec.note(f"|Th_{i}| = {len(TL)} (generators <= {cap})")
        images = {}
        e = {}
        for T in TL.theories:
            d = C.delta_i(i, T)
            e[T] = d
            sec.check(frozenset(x for x in d if C.in_D(i, x)) == T,
                      lambda: f"delta_{i}({format_set(T)}) meets D_{i} in more than the theory")
            sec.check(C.delta(d) == d, lambda: f"delta_{i}({format_set(T)}) is not delta-closed")
            sec.check(d not in images, lambda: f"e_{i} identifies {format_set(T)} and {format_set(images[d])}")
            images[d] = T
        sec.check(e[TL.least] == C.delta_i(i, ()), f"e_{i}(least) differs from delta_{i}(empty)")
        # joins
        ths = TL.theories
        for a in range(len(ths)):
            for b in range(a, len(ths)):
                j = ths[TL.join(a, b)]
                sec.check(e[j] == C.delta(e[ths[a]] | e[ths[b]]),
                          lambda: f"e_{i} fails to preserve the join of {format_set(ths[a])} and {format_set(ths[b])}")
        # the D_i-side action, on instances that stay inside U
        Ui = system_universe(C.parts[i - 1], C.params)
        for sigma in _substitutions(C.sublanguage(i), C.params):
            for T in ths:
                sT = act([sigma], T)
                sE = act([sigma], e[T])
                if not (Ui.contains_all(sT) and U.contains_all(sE)):
                    sec.skipped += 1
                    continue
                lhs = C.delta_i(i, C.gamma(i, sT))
                rhs = C.delta(sE)
                sec.check(lhs == rhs, lambda: f"e_{i} does not commute with {sigma} on {format_set(T)}")
        # g_k: plain sets of the other domain embed too
        seen = {}
        for phi in _subsets(C.D(k), cap):
            d = C.delta_i(i, phi)
            sec.check(d not in seen, lambda: f"g_{k} identifies {format_set(phi)} and {format_set(seen[d])}")
            seen[d] = phi
    # saturation of delta_i(Phi) for the pairs (Psi, delta_k(Psi))
    sat = rep.add(Report("R_delta saturation"))
    subs = _substitutions(C.language, C.params)
    gens = {i: list(_subsets(C.D(i), cap)) for i in (1, 2)}
    tries = 0
    while sat.instances < samples and tries < 50 * samples:
        tries += 1
        i = rng.choice((1, 2))
        k = rng.choice((1, 2))
        sigma_set = rng.sample(subs, rng.choice((1, 2)))
        psi = rng.choice(gens[k])
        phi = rng.choice(gens[i])
        a = act(sigma_set, psi)
        b = act(sigma_set, C.delta_i(k, psi))
        if not (U.contains_all(a) and U.contains_all(b)):
            sat.skipped += 1
            continue
        target = C.delta_i(i, phi)
        sat.check((a <= target) == (b <= target),
                  lambda: f"i={i}, k={k}: Sigma={[str(s) for s in sigma_set]}, Psi={format_set(psi)}, "
                          f"Phi={format_set(phi)}")
    return rep


def coproduct_embedding(C: CoproductSystem, cap: int = 2, samples: int | None = None, seed: int = 0) -> Report:
    """e(gamma_1(Phi), gamma_2(Psi)) = delta(Phi) v delta(Psi): injective and join-preserving."""
    rng = random.Random(seed)
    rep = Report("coproduct of theory lattices into Th_delta", C.params.echo())
    T1, T2 = C.theories(1, cap), C.theories(2, cap)
    rep.note(f"|Th_1 x Th_2| = {len(T1) * len(T2)}")
    e1 = {T: C.delta_i(1, T) for T in T1.theories}
    e2 = {T: C.delta_i(2, T) for T in T2.theories}
    inj = rep.add(Report("injectivity on all pairs"))
    free = rep.add(Report("injectivity on variable-free theories"))
    images = {}
    e = {}
    for a in T1.theories:
        for b in T2.theories:
            v = C.delta(a | b)
            e[a, b] = v
            rep.check(v == C.delta(e1[a] | e2[b]),
                      lambda: f"e({format_set(a)}, {format_set(b)}) is not e_1 v e_2")
            # D_1 and D_2 share the variables, so a variable may come from either slot
            inj.check(v not in images, lambda: f"e({format_set(a)}, {format_set(b)}) = "
                                               f"e({format_set(images[v][0])}, {format_set(images[v][1])}) = {format_set(v)}")
            images.setdefault(v, (a, b))
            if not any(isinstance(x, Var) for x in a | b):
                ok = (frozenset(x for x in v if C.in_D(1, x)) == a
                      and frozenset(x for x in v if C.in_D(2, x)) == b)
                free.check(ok, lambda: f"e({format_set(a)}, {format_set(b)}) does not recover the pair")
    rep.check(e[T1.least, T2.least] == C.delta(()), "e(least, least) differs from delta(empty)")
    for a in T1.theories:
        rep.check(e[a, T2.least] == C.delta(e1[a] | C.delta_i(2, ())),
                  lambda: f"e({format_set(a)}, least) is not e_1 joined with the least theory")
    joins = rep.add(Report("join preservation"))
    th1, th2 = T1.theories, T2.theories
    idx1, idx2 = T1.index, T2.index
    if samples is None:
        # exhaustive: e takes few distinct values, so close each pair of images once
        ids = {}
        eid = {k: ids.setdefault(v, len(ids)) for k, v in e.items()}
        vals = list(ids)
        memo = {}
        n1, n2 = len(th1), len(th2)
        J1 = [[T1.join(a, c) for c in range(n1)] for a in range(n1)]
        J2 = [[T2.join(b, d) for d in range(n2)] for b in range(n2)]
        grid = [[eid[th1[a], th2[b]] for b in range(n2)] for a in range(n1)]
        bad = 0
        for a in range(n1):
            for c in range(a, n1):
                jac, ga, gc = J1[a][c], grid[a], grid[c]
                gj = grid[jac]
                for b in range(n2):
                    x, Jb = ga[b], J2[b]
                    for d in range(n2):
                        y = gc[d]
                        key = (x, y) if x <= y else (y, x)
                        z = memo.get(key)
                        if z is None:
                            v = C.delta(vals[x] | vals[y])
                            z = memo[key] = ids.get(v, -1)
                        if gj[Jb[d]] != z:
                            bad += 1
                            if bad <= 5:
                                joins.fail(f"e fails on the join of ({format_set(th1[a])}, {format_set(th2[b])}) "
                                           f"and ({format_set(th1[c])}, {format_set(th2[d])})", count=False)
        joins.instances += n1 * (n1 + 1) // 2 * n2 * n2
        joins.failed += max(0, bad - min(bad, 5))
        joins.note(f"exhaustive over {joins.instances} pairs of pairs, {len(memo)} distinct closures")
    else:
        pairs = list(e)
        for _ in range(samples):
            (a, b), (c, d) = rng.choice(pairs), rng.choice(pairs)
            ja = th1[T1.join(idx1[a], idx1[c])]
            jb = th2[T2.join(idx2[b], idx2[d])]
            joins.check(e[ja, jb] == C.delta(e[a, b] | e[c, d]),
                        lambda: f"e fails on the join of ({format_set(a)}, {format_set(b)}) and ({format_set(c)}, {format_set(d)})")
        joins.note(f"sampled {samples} pairs of pairs")
    return rep


def generation_check(C: CoproductSystem, cap: int = 1) -> Report:
    """Every capped delta_i-theory is the closure of substitution instances of delta_i(generator)."""
    rep = Report("generation by the closed generator", C.params.echo())
    U = C.U
    gens = U.generators()
    for i in (1, 2):
        base = {g: C.delta_i(i, {g}) for g in gens}
        seen = set()
        for phi in _subsets(U.items, cap):
            T = C.delta_i(i, phi)
            if T in seen:
                continue
            seen.add(T)
            acc = set()
            overflow = False
            for t in T:
                for g in gens:
                    b = match_item(g, t, {})
                    if b is None:
                        continue
                    sigma = Substitution.from_map(C.params.n, b)
                    img = {apply_substitution(sigma, x) for x in base[g]}
                    if not U.contains_all(img):
                        overflow = True
                    acc |= {x for x in img if x in U}
                    break
            if overflow:
                rep.skipped += 1
                continue
            rep.check(C.delta_i(i, acc) == T, lambda: f"delta_{i}({format_set(phi)}) is not generated")
    return rep
