"""Deductive systems and their consequence closures relative to a finite universe.

Every closure here lives inside a truncation universe ``U``: the items of
depth at most ``d`` over the variables ``x1..xn`` of a chosen language.
Rule instances whose conclusion falls outside ``U`` are dropped and the
result carries an ``overflow`` flag, so a closure is the least subset of
``U`` containing the input and the axiom instances in ``U`` and closed
under every rule instance whose premises and conclusion lie in ``U``.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .lattice import SupLattice
from .report import Report
from .syntax import (
    FORMULAS,
    EQUATIONS,
    SEQUENTS,
    Equation,
    Item,
    Language,
    Sequent,
    Substitution,
    Translation,
    TruncationParams,
    Var,
    apply_substitution,
    enumerate_formulas,
    enumerate_items,
    enumerate_substitutions,
    format_item,
    format_set,
    in_language,
    item_kind,
    item_vars,
    map_item,
    match_item,
    sort_items,
    substitute,
    translate,
    union_language,
)


class DeductionError(ValueError):
    pass


@dataclass(frozen=True)
class InferenceRule:
    premises: tuple
    conclusion: Item

    def __str__(self):
        return format_set(self.premises) + " / " + format_item(self.conclusion)

    def translated(self, tau: Translation) -> "InferenceRule":
        return InferenceRule(tuple(translate(tau, p) for p in self.premises), translate(tau, self.conclusion))

    def variables(self) -> set[int]:
        vs = item_vars(self.conclusion)
        for p in self.premises:
            vs |= item_vars(p)
        return vs


@dataclass(frozen=True)
class DeductiveSystem:
    language: Language
    kind: str = FORMULAS
    axioms: tuple = ()
    rules: tuple = ()
    types: tuple = ()               # sequent types (m, n), only for kind == "sequents"
    name: str = ""

    def __post_init__(self):
        for a in self.axioms:
            self._check(a, "axiom")
        for r in self.rules:
            for p in r.premises:
                self._check(p, "premise")
            self._check(r.conclusion, "conclusion")

    def _check(self, it, what):
        if item_kind(it) != self.kind:
            raise DeductionError(f"{what} {format_item(it)} is not of kind {self.kind}")
        if not in_language(it, self.language):
            raise DeductionError(f"{what} {format_item(it)} leaves the language")
        if isinstance(it, Sequent) and it.type not in self.types:
            raise DeductionError(f"{what} {format_item(it)} has undeclared type {it.type}")

    def translated(self, tau: Translation, name: str | None = None) -> "DeductiveSystem":
        return DeductiveSystem(tau.target, self.kind,
                               tuple(translate(tau, a) for a in self.axioms),
                               tuple(r.translated(tau) for r in self.rules),
                               self.types, name or self.name)

    def with_language(self, lang: Language) -> "DeductiveSystem":
        return DeductiveSystem(lang, self.kind, self.axioms, self.rules, self.types, self.name)

    def union(self, other: "DeductiveSystem", name: str = "") -> "DeductiveSystem":
        if other.kind != self.kind:
            raise DeductionError("systems of different kinds")
        lang = union_language(self.language, other.language)
        axioms = tuple(dict.fromkeys(self.axioms + other.axioms))
        rules = tuple(dict.fromkeys(self.rules + other.rules))
        types = tuple(sorted(set(self.types) | set(other.types)))
        return DeductiveSystem(lang, self.kind, axioms, rules, types, name)

    def with_rules(self, extra: Iterable[InferenceRule], name: str = "") -> "DeductiveSystem":
        return DeductiveSystem(self.language, self.kind, self.axioms,
                               tuple(dict.fromkeys(self.rules + tuple(extra))), self.types, name or self.name)


@dataclass(frozen=True)
class Theory:
    items: frozenset
    overflow: bool = False          # some derivable item fell outside U
    budget_hit: bool = False        # premise search was cut short
    rounds_hit: bool = False        # no fixpoint within k rounds

    def __contains__(self, it):
        return it in self.items

    def __iter__(self):
        return iter(sort_items(self.items))

    def __len__(self):
        return len(self.items)

    def __str__(self):
        return format_set(self.items)


# ---------------------------------------------------------------------------
# the universe

class Universe:
    """Items of one kind over ``lang`` with depth <= d and variables x1..xn."""

    def __init__(self, lang: Language, kind: str, params: TruncationParams, types: Sequence = ()):
        self.lang = lang
        self.kind = kind
        self.params = params
        self.types = tuple(types)
        self.formulas = enumerate_formulas(lang, params.n, params.d)
        self.items = enumerate_items(lang, kind, params.n, params.d, self.types)
        self.itemset = frozenset(self.items)
        self.variables = [Var(i) for i in range(1, params.n + 1)]

    def __contains__(self, it):
        return it in self.itemset

    def __len__(self):
        return len(self.items)

    def contains_all(self, items: Iterable) -> bool:
        return all(i in self.itemset for i in items)

    def generators(self) -> list[Item]:
        """The items every other item is a substitution instance of."""
        n = self.params.n
        if self.kind == FORMULAS:
            return [Var(1)]
        if self.kind == EQUATIONS:
            if n < 2:
                raise DeductionError("equations need two variables")
            return [Equation(Var(1), Var(2))]
        out = []
        for m, k in self.types:
            if m + k > n:
                raise DeductionError(f"sequent type {(m, k)} needs {m + k} variables")
            out.append(Sequent(tuple(Var(i) for i in range(1, m + 1)),
                               tuple(Var(i) for i in range(m + 1, m + k + 1))))
        return out


@lru_cache(maxsize=64)
def universe(lang: Language, kind: str, params: TruncationParams, types: tuple = ()) -> Universe:
    return Universe(lang, kind, params, types)


def system_universe(S: DeductiveSystem, params: TruncationParams, lang: Language | None = None) -> Universe:
    return universe(lang or S.language, S.kind, params, S.types)


# ---------------------------------------------------------------------------
# matching-based derivation

def _order_premises(premises: Sequence[Item]) -> list[Item]:
    # bare variables match everything, so bind structured premises first
    return sorted(premises, key=lambda p: isinstance(p, Var))


def _premise_bindings(premises: Sequence[Item], pool: Sequence[Item], binding: dict, budget: list):
    """All extensions of ``binding`` sending every premise into ``pool``."""
    if not premises:
        yield binding
        return
    head, rest = premises[0], premises[1:]
    for it in pool:
        budget[0] -= 1
        if budget[0] < 0:
            return
        b = match_item(head, it, binding)
        if b is not None:
            yield from _premise_bindings(rest, pool, b, budget)


def directly_derivable(rule: InferenceRule, psi: Iterable[Item], phi: Item,
                       params: TruncationParams | None = None) -> bool:
    """Is there a substitution sending the conclusion to ``phi`` and every premise into ``psi``?

    The conclusion is matched first; premise variables left unbound are then
    fixed by matching the premises against ``psi``.
    """
    params = params or TruncationParams()
    b = match_item(rule.conclusion, phi, {})
    if b is None:
        return False
    pool = sort_items(set(psi))
    budget = [params.premise_bound]
    for _ in _premise_bindings(_order_premises(rule.premises), pool, b, budget):
        return True
    if budget[0] < 0:
        warnings.warn(f"premise search budget exhausted for {rule} and {format_item(phi)}")
    return False


class ClosureEngine:
    """U-relative consequence closure for one set of axioms and rules, memoized."""

    def __init__(self, axioms: Sequence[Item], rules: Sequence[InferenceRule], U: Universe):
        self.U = U
        self.rules = list(rules)
        self.params = U.params
        # substitution instances of an axiom inside U are exactly the items it matches
        inst = set()
        self.axiom_overflow = False
        for a in axioms:
            hits = [u for u in U.items if match_item(a, u, {}) is not None]
            inst.update(hits)
            if item_vars(a):
                self.axiom_overflow = True
        self._plans = []
        for r in self.rules:
            if not r.premises:
                # a premise-free rule behaves like an axiom
                inst.update(u for u in U.items if match_item(r.conclusion, u, {}) is not None)
                self.axiom_overflow |= bool(item_vars(r.conclusion))
                continue
            prem = _order_premises(r.premises)
            pvars = set()
            for p in prem:
                pvars |= item_vars(p)
            free = item_vars(r.conclusion) - pvars
            self._plans.append((r, prem, bool(free)))
        self.axiom_instances = frozenset(inst)
        self._memo: dict[frozenset, Theory] = {}

    def __call__(self, phi: Iterable[Item]) -> Theory:
        key = frozenset(phi)
        got = self._memo.get(key)
        if got is None:
            got = self._close(key)
            self._memo[key] = got
        return got

    def _conclusions(self, concl: Item, b: dict, has_free: bool):
        if not has_free:
            c = map_item(lambda f: substitute(f, b), concl)
            return [c], c not in self.U
        # leftover conclusion variables range over U: keep the instances inside U
        hits = [u for u in self.U.items if match_item(concl, u, b) is not None]
        return hits, True

    def _close(self, phi: frozenset) -> Theory:
        U = self.U
        outside = [p for p in phi if p not in U]
        if outside:
            raise DeductionError(f"{format_item(outside[0])} is outside the universe")
        current = set(phi) | self.axiom_instances
        fresh = set(current)
        overflow = self.axiom_overflow
        budget_hit = False
        for _ in range(self.params.k):
            pool_all = sort_items(current)
            pool_new = sort_items(fresh)
            new = set()
            for r, prem, has_free in self._plans:
                budget = [self.params.premise_bound]
                # semi-naive: some premise must use an item derived in the last round
                for j in range(len(prem)):
                    head = prem[j]
                    for it in pool_new:
                        b0 = match_item(head, it, {})
                        if b0 is None:
                            continue
                        rest = prem[:j] + prem[j + 1:]
                        for b in _premise_bindings(rest, pool_all, b0, budget):
                            cands, ov = self._conclusions(r.conclusion, b, has_free)
                            overflow |= ov
                            for c in cands:
                                if c in U and c not in current:
                                    new.add(c)
                if budget[0] < 0:
                    budget_hit = True
            if not new:
                return Theory(frozenset(current), overflow, budget_hit, False)
            current |= new
            fresh = new
        # k rounds used: one more look tells whether a fixpoint was reached anyway
        return Theory(frozenset(current), overflow, budget_hit, not self._is_closed(current))

    def _is_closed(self, s: set) -> bool:
        pool = sort_items(s)
        for r, prem, has_free in self._plans:
            budget = [self.params.premise_bound]
            for b in _premise_bindings(prem, pool, {}, budget):
                cands, _ = self._conclusions(r.conclusion, b, has_free)
                if any(c in self.U and c not in s for c in cands):
                    return False
        return True

    def is_closed(self, items: Iterable[Item]) -> bool:
        s = set(items)
        return self.axiom_instances <= s and self._is_closed(s)


@lru_cache(maxsize=256)
def engine(S: DeductiveSystem, params: TruncationParams, lang: Language | None = None) -> ClosureEngine:
    return ClosureEngine(S.axioms, S.rules, system_universe(S, params, lang))


def closure(S: DeductiveSystem, phi: Iterable[Item], params: TruncationParams | None = None,
            lang: Language | None = None) -> Theory:
    """Least U-relative theory of ``S`` containing ``phi``; ``lang`` widens the universe."""
    return engine(S, params or TruncationParams(), lang)(phi)


# ---------------------------------------------------------------------------
# validators

def _sample_sets(items: Sequence, cap: int, limit: int, rng: random.Random) -> list[frozenset]:
    sets = [frozenset(c) for r in range(cap + 1) for c in combinations(items, r)]
    if len(sets) > limit:
        sets = sets[:1] + rng.sample(sets[1:], limit - 1)
    return sets


def check_tarski(S: DeductiveSystem, params: TruncationParams | None = None, cap: int = 2,
                 samples: int = 400, subst_depth: int = 1, seed: int = 0,
                 lang: Language | None = None) -> Report:
    """Reflexivity, monotonicity, cut and structurality of the U-relative closure.

    Structurality is only required when the substitution keeps the whole
    closure inside U, since otherwise the image derivation may leave U.
    """
    params = params or TruncationParams()
    eng = engine(S, params, lang)
    U = eng.U
    rng = random.Random(seed)
    rep = Report(f"tarski conditions ({S.name or 'system'})", params.echo())
    sets = _sample_sets(U.items, cap, samples, rng)
    for phi in sets:
        c = eng(phi)
        rep.check(phi <= c.items, lambda: f"{format_set(phi)} not contained in its closure")
        rep.check(eng(c.items).items == c.items, lambda: f"closure of {format_set(phi)} is not closed")
    for a, b in zip(sets, sets[1:] + sets[:1]):
        small, big = a, a | b
        rep.check(eng(small).items <= eng(big).items,
                  lambda: f"monotonicity fails for {format_set(small)} and {format_set(big)}")
    subs = enumerate_substitutions(U.lang, params.n, min(subst_depth, params.d))
    if len(subs) * len(sets) > 20 * samples:
        subs = rng.sample(subs, max(1, 20 * samples // len(sets)))
    for phi in sets:
        c = eng(phi)
        for sigma in subs:
            img = {apply_substitution(sigma, it) for it in c.items}
            if not U.contains_all(img):
                rep.skipped += 1
                continue
            sphi = {apply_substitution(sigma, it) for it in phi}
            rep.check(img <= eng(sphi).items,
                      lambda: f"{sigma} applied to the closure of {format_set(phi)} is not derivable")
    if any(eng(s).rounds_hit for s in sets):
        rep.warn("some closures did not reach a fixpoint within k rounds")
    return rep


def check_nontrivial(S: DeductiveSystem, params: TruncationParams | None = None,
                     lang: Language | None = None) -> bool:
    """U-relative non-triviality: the least theory is not everything and a variable derives nothing new."""
    params = params or TruncationParams()
    eng = engine(S, params, lang)
    empty = eng(()).items
    if empty == eng.U.itemset:
        return False
    for g in eng.U.generators():
        # every variable instance of the generator items
        for sigma in _variable_instances(g, params.n):
            x = apply_substitution(sigma, g)
            if eng({x}).items != empty | {x}:
                return False
    return True


def _variable_instances(g: Item, n: int) -> list[Substitution]:
    if isinstance(g, Var):
        return [Substitution.from_map(n, {1: Var(i)}) for i in range(1, n + 1)]
    return [Substitution.identity(n)]


# ---------------------------------------------------------------------------
# theory lattices

@dataclass
class TheoryLattice:
    theories: list[frozenset]
    lattice: SupLattice
    engine: ClosureEngine = field(repr=False)
    index: dict = field(repr=False, default_factory=dict)

    def __len__(self):
        return len(self.theories)

    def join(self, i: int, j: int) -> int:
        return self.lattice.join2(i, j)

    def meet(self, i: int, j: int) -> int:
        return self.lattice.meet2(i, j)

    @property
    def least(self) -> frozenset:
        return self.theories[self.lattice.bottom]


def theory_lattice(S: DeductiveSystem, params: TruncationParams | None = None, cap: int = 2,
                   guard: int = 4096, lang: Language | None = None,
                   generators: Sequence[Item] | None = None) -> TheoryLattice:
    """Closures of generator sets of size <= cap, closed under intersection and joins.

    The join of two theories is the closure of their union, so the family is
    a sublattice of the full theory lattice inside U.
    """
    params = params or TruncationParams()
    eng = engine(S, params, lang)
    pool = list(generators) if generators is not None else eng.U.items
    found = {eng(c).items for r in range(cap + 1) for c in combinations(pool, r)}
    found.add(eng(eng.U.items).items)
    frontier = list(found)
    while frontier:
        nxt = []
        cur = list(found)
        for a in frontier:
            for b in cur:
                for c in (a & b, eng(a | b).items):
                    if c not in found:
                        if not eng.is_closed(c):
                            raise DeductionError("intersection of theories is not a theory")
                        found.add(c)
                        nxt.append(c)
                        if len(found) > guard:
                            raise OverflowError(f"theory lattice exceeds {guard} elements")
        frontier = nxt
    theories = sorted(found, key=lambda t: (len(t), sorted(format_item(i) for i in t)))
    idx = {t: i for i, t in enumerate(theories)}
    lat = SupLattice.from_leq(len(theories), lambda i, j: theories[i] <= theories[j],
                              [format_set(t) for t in theories])
    return TheoryLattice(theories, lat, eng, idx)


# ---------------------------------------------------------------------------
# actions and nuclei

def act(sigmas: Iterable[Substitution], items: Iterable[Item]) -> set:
    return {apply_substitution(s, it) for s in sigmas for it in items}


def scalar_action(S: DeductiveSystem, sigmas: Iterable[Substitution], T: Iterable[Item],
                  params: TruncationParams | None = None, lang: Language | None = None) -> Theory:
    """``Sigma . T``: the closure of every substitution instance that stays inside U."""
    params = params or TruncationParams()
    eng = engine(S, params, lang)
    img = act(sigmas, T.items if isinstance(T, Theory) else T)
    inside = {i for i in img if i in eng.U}
    th = eng(inside)
    if len(inside) != len(img):
        th = Theory(th.items, True, th.budget_hit, th.rounds_hit)
    return th


def gamma_prime(closure_i: Callable[[Iterable[Item]], Theory], in_Di: Callable[[Item], bool],
                phi: Iterable[Item]) -> frozenset:
    """Close the D_i-part of ``phi`` with the i-th system and keep the rest untouched."""
    phi = set(phi)
    inside = {p for p in phi if in_Di(p)}
    return frozenset(closure_i(inside).items | (phi - inside))
