"""Finite quantale modules: actions, nuclei, saturated quotients, coproducts and amalgams."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .lattice import LatticeError, LatticeReport, SupLattice, SupMap, bits, order_isomorphisms, product_lattice, residual
from .quantale import (
    Quantale,
    Relation,
    block_lattice,
    closure_from_closed_set,
    generated_congruence,
    is_closure,
    two_element_quantale,
)

LEFT, RIGHT = "left", "right"


class QModule:
    """A sup-lattice acted on by a unital quantale.

    ``action[a][u]`` is ``a.u`` for a left module and ``u.a`` for a right one.
    """

    def __init__(self, scalars: Quantale, lattice: SupLattice, action: Sequence[Sequence[int]],
                 side: str = LEFT):
        if side not in (LEFT, RIGHT):
            raise ValueError(f"side must be 'left' or 'right', not {side!r}")
        self.scalars = scalars
        self.lattice = lattice
        self.action = tuple(tuple(row) for row in action)
        self.side = side
        self.n = lattice.n

    def act(self, a: int, u: int) -> int:
        return self.action[a][u]

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"QModule(|Q|={self.scalars.n}, n={self.n}, {self.side})"


def quantale_as_module(Q: Quantale, side: str = LEFT) -> QModule:
    """``Q`` acting on itself by left (``a.u = a*u``) or right (``u.a = u*a``) multiplication."""
    if side == LEFT:
        act = [[Q.product[a][u] for u in range(Q.n)] for a in range(Q.n)]
    else:
        act = [[Q.product[u][a] for u in range(Q.n)] for a in range(Q.n)]
    return QModule(Q, Q.lattice, act, side)


def boolean_module(L: SupLattice, side: str = LEFT) -> QModule:
    """A sup-lattice as a module over the two-element quantale."""
    Q2 = two_element_quantale()
    return QModule(Q2, L, [[L.bottom] * L.n, list(range(L.n))], side)


def validate_module(M: QModule) -> LatticeReport:
    Q, L, act = M.scalars, M.lattice, M.action
    if Q.unit is None:
        return LatticeReport(False, "scalar quantale has no unit")
    for a in range(Q.n):
        for b in range(Q.n):
            ab = Q.product[a][b]
            for u in range(M.n):
                expect = act[a][act[b][u]] if M.side == LEFT else act[b][act[a][u]]
                if act[ab][u] != expect:
                    return LatticeReport(False, "associativity of the action fails", (a, b, u))
    for u in range(M.n):
        if act[Q.unit][u] != u:
            return LatticeReport(False, "unit law fails", (u,))
    bot, qbot = L.bottom, Q.lattice.bottom
    for a in range(Q.n):
        if act[a][bot] != bot:
            return LatticeReport(False, "action does not preserve the bottom element", (a,))
    for u in range(M.n):
        if act[qbot][u] != bot:
            return LatticeReport(False, "bottom scalar does not annihilate", (u,))
    for a in range(Q.n):
        for u in range(M.n):
            for v in range(u + 1, M.n):
                if act[a][L.join2(u, v)] != L.join2(act[a][u], act[a][v]):
                    return LatticeReport(False, "action does not distribute over joins of vectors", (a, u, v))
    QL = Q.lattice
    for a in range(Q.n):
        for b in range(a + 1, Q.n):
            ab = QL.join2(a, b)
            for u in range(M.n):
                if act[ab][u] != L.join2(act[a][u], act[b][u]):
                    return LatticeReport(False, "action does not distribute over joins of scalars", (a, b, u))
    return LatticeReport(True)


def action_residuals(M: QModule, a: int, u: int, v: int) -> tuple[int, int]:
    """``(a\\u, u/v)``: the largest vector w with ``a.w <= u`` and the largest scalar b with ``b.v <= u``."""
    L, act = M.lattice, M.action
    w_mask = 0
    for w in range(M.n):
        if L.leq(act[a][w], u):
            w_mask |= 1 << w
    b_mask = 0
    for b in range(M.scalars.n):
        if L.leq(act[b][v], u):
            b_mask |= 1 << b
    return L.join_mask(w_mask), M.scalars.lattice.join_mask(b_mask)


def saturated_elements_m(M: QModule, theta: Relation) -> frozenset:
    """Vectors s with ``a.v <= s  <=>  a.w <= s`` for every related (v, w) and scalar a."""
    act = M.action
    tests = set()
    for v, w in theta:
        for row in act:
            x, y = row[v], row[w]
            if x != y:
                tests.add((x, y))
    down = M.lattice.down
    out = []
    for s in range(M.n):
        d = down[s]
        for x, y in tests:
            if ((d >> x) ^ (d >> y)) & 1:
                break
        else:
            out.append(s)
    return frozenset(out)


def nucleus_m(M: QModule, theta: Relation) -> tuple:
    return closure_from_closed_set(M.lattice, saturated_elements_m(M, theta))


def is_module_nucleus(M: QModule, g: Sequence[int]) -> bool:
    if len(g) != M.n or not is_closure(M.lattice, g):
        return False
    L, act = M.lattice, M.action
    return all(L.leq(act[a][g[u]], g[act[a][u]]) for a in range(M.scalars.n) for u in range(M.n))


@dataclass(frozen=True)
class ModuleNucleus:
    base: QModule = field(repr=False)
    table: tuple

    def __post_init__(self):
        if not is_module_nucleus(self.base, self.table):
            raise ValueError("table is not a module nucleus")

    def image(self) -> list[int]:
        return sorted(set(self.table))


@dataclass(frozen=True)
class ModuleMorphism:
    source: QModule = field(repr=False)
    target: QModule = field(repr=False)
    table: tuple

    def __call__(self, u: int) -> int:
        return self.table[u]

    def as_supmap(self) -> SupMap:
        return SupMap(self.source.lattice, self.target.lattice, self.table)

    def is_valid(self) -> bool:
        if self.source.scalars is not self.target.scalars and \
                self.source.scalars.product != self.target.scalars.product:
            return False
        if not self.as_supmap().is_morphism():
            return False
        f, sa, ta = self.table, self.source.action, self.target.action
        return all(f[sa[a][u]] == ta[a][f[u]] for a in range(self.source.scalars.n)
                   for u in range(self.source.n))

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def kernel(self) -> list[tuple[int, int]]:
        f = self.table
        return [(u, v) for u in range(len(f)) for v in range(len(f)) if f[u] == f[v]]

    def then(self, g: "ModuleMorphism") -> "ModuleMorphism":
        return ModuleMorphism(self.source, g.target, tuple(g.table[y] for y in self.table))

    def image(self) -> frozenset:
        return frozenset(self.table)


def module_on_closed_set(M: QModule, closed: Iterable[int]) -> tuple[QModule, ModuleMorphism, tuple]:
    """Module induced on a nucleus image: ``a ._g u = g(a.u)``, joins ``g(v)``."""
    sat = sorted(closed)
    L = M.lattice
    rho = closure_from_closed_set(L, sat)
    idx = {s: i for i, s in enumerate(sat)}
    sub = SupLattice.from_leq(len(sat), lambda i, j: L.leq(sat[i], sat[j]), [L.labels[s] for s in sat])
    act = [[idx[rho[M.action[a][s]]] for s in sat] for a in range(M.scalars.n)]
    quo = QModule(M.scalars, sub, act, M.side)
    proj = ModuleMorphism(M, quo, tuple(idx[rho[u]] for u in range(M.n)))
    return quo, proj, rho


def quotient_m(M: QModule, theta: Relation) -> tuple[QModule, ModuleMorphism]:
    quo, proj, _ = module_on_closed_set(M, saturated_elements_m(M, theta))
    return quo, proj


def congruence_oracle_m(M: QModule, theta: Relation) -> list[frozenset]:
    act = M.action
    translations = [lambda x, row=row: row[x] for row in act]
    return generated_congruence(M.n, theta, translations, M.lattice.join2)


def quotient_by_partition_m(M: QModule, blocks: Sequence[frozenset]) -> QModule:
    lat, cls = block_lattice(M.lattice, blocks)
    reps = [min(b) for b in blocks]
    act = [[cls[M.action[a][r]] for r in reps] for a in range(M.scalars.n)]
    return QModule(M.scalars, lat, act, M.side)


def module_isomorphism(A: QModule, B: QModule):
    """Order isomorphism commuting with the actions (scalars are shared), or None."""
    if A.n != B.n or A.scalars.n != B.scalars.n:
        return None
    for phi in order_isomorphisms(A.lattice, B.lattice, first_only=False):
        if all(phi[A.action[a][u]] == B.action[a][phi[u]]
               for a in range(A.scalars.n) for u in range(A.n)):
            return phi
    return None


def nucleus_from_morphism(f: ModuleMorphism) -> ModuleNucleus:
    if not f.is_valid():
        raise LatticeError("nucleus_from_morphism requires a module morphism")
    fs = residual(f.as_supmap())
    return ModuleNucleus(f.source, tuple(fs.table[f.table[u]] for u in range(f.source.n)))


def nucleus_meet(g1: ModuleNucleus, g2: ModuleNucleus) -> ModuleNucleus:
    L = g1.base.lattice
    return ModuleNucleus(g1.base, tuple(L.meet2(g1.table[u], g2.table[u]) for u in range(L.n)))


def nucleus_join(g1: ModuleNucleus, g2: ModuleNucleus) -> ModuleNucleus:
    """Least closure above both: iterate ``u -> g2(g1(u))`` until it stabilises."""
    t1, t2 = g1.table, g2.table
    out = []
    for u in range(len(t1)):
        v = u
        while True:
            w = t2[t1[v]]
            if w == v:
                break
            v = w
        out.append(v)
    return ModuleNucleus(g1.base, tuple(out))


@dataclass
class Product:
    module: QModule
    inj1: ModuleMorphism
    inj2: ModuleMorphism
    proj1: ModuleMorphism
    proj2: ModuleMorphism

    def pair(self, u: int, v: int) -> int:
        return u * self.proj2.target.n + v

    def unpair(self, p: int) -> tuple[int, int]:
        return divmod(p, self.proj2.target.n)


def product_coproduct(M: QModule, N: QModule) -> Product:
    """Cartesian product with componentwise order and action (also the coproduct)."""
    if M.scalars.product != N.scalars.product or M.side != N.side:
        raise ValueError("product needs modules over the same quantale on the same side")
    L = product_lattice(M.lattice, N.lattice)
    nn = N.n
    act = [[M.action[a][p // nn] * nn + N.action[a][p % nn] for p in range(M.n * nn)]
           for a in range(M.scalars.n)]
    P = QModule(M.scalars, L, act, M.side)
    inj1 = ModuleMorphism(M, P, tuple(u * nn + N.lattice.bottom for u in range(M.n)))
    inj2 = ModuleMorphism(N, P, tuple(M.lattice.bottom * nn + v for v in range(nn)))
    proj1 = ModuleMorphism(P, M, tuple(p // nn for p in range(M.n * nn)))
    proj2 = ModuleMorphism(P, N, tuple(p % nn for p in range(M.n * nn)))
    return Product(P, inj1, inj2, proj1, proj2)


@dataclass
class Amalgam:
    """V-formation ``M <-f- P -g-> N`` with injective module morphisms."""
    P: QModule
    M: QModule
    N: QModule
    f: ModuleMorphism
    g: ModuleMorphism

    def validate(self) -> LatticeReport:
        for name, h in (("f", self.f), ("g", self.g)):
            if not h.is_valid():
                return LatticeReport(False, f"{name} is not a module morphism")
            if not h.is_injective():
                return LatticeReport(False, f"{name} is not injective")
        return LatticeReport(True)

    def relation(self, prod: Product) -> list[tuple[int, int]]:
        bm, bn = self.M.lattice.bottom, self.N.lattice.bottom
        return [(prod.pair(self.f(w), bn), prod.pair(bm, self.g(w))) for w in range(self.P.n)]


@dataclass
class AmalgamatedCoproduct:
    module: QModule
    f_prime: ModuleMorphism
    g_prime: ModuleMorphism
    product: Product
    projection: ModuleMorphism
    saturated: frozenset

    def check(self, A: Amalgam) -> LatticeReport:
        """Embeddings injective, square commutes, images meet exactly in the common part."""
        fp, gp = self.f_prime, self.g_prime
        if not fp.is_injective() or not gp.is_injective():
            return LatticeReport(False, "amalgam embedding not injective")
        ff = A.f.then(fp).table
        gg = A.g.then(gp).table
        if ff != gg:
            return LatticeReport(False, "f'f != g'g", (ff, gg))
        if fp.image() & gp.image() != frozenset(ff):
            return LatticeReport(False, "images intersect outside the common part")
        return LatticeReport(True)


def amalgamated_coproduct(A: Amalgam) -> AmalgamatedCoproduct:
    rep = A.validate()
    if not rep:
        raise LatticeError(rep.reason)
    prod = product_coproduct(A.M, A.N)
    sat = saturated_elements_m(prod.module, A.relation(prod))
    quo, proj, _ = module_on_closed_set(prod.module, sat)
    fp = prod.inj1.then(proj)
    gp = prod.inj2.then(proj)
    fp = ModuleMorphism(A.M, quo, fp.table)
    gp = ModuleMorphism(A.N, quo, gp.table)
    result = AmalgamatedCoproduct(quo, fp, gp, prod, proj, sat)
    return result


def is_theta_saturated_pair(A: Amalgam, u: int, v: int) -> bool:
    """Interval test: ``{w | f(w) <= u} == {w | g(w) <= v}``."""
    LM, LN = A.M.lattice, A.N.lattice
    below_u = {w for w in range(A.P.n) if LM.leq(A.f(w), u)}
    below_v = {w for w in range(A.P.n) if LN.leq(A.g(w), v)}
    return below_u == below_v
