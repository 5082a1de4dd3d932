"""Finite quantales, quantic nuclei, saturated elements and quotients."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .lattice import (
    LatticeReport,
    SupLattice,
    SupMap,
    bits,
    order_isomorphisms,
    powerset_lattice,
)

Relation = Iterable[tuple[int, int]]


class Quantale:
    """Sup-lattice with a monoid (or semigroup, if ``unit`` is None) product table."""

    def __init__(self, lattice: SupLattice, product: Sequence[Sequence[int]], unit: int | None):
        self.lattice = lattice
        self.product = tuple(tuple(row) for row in product)
        self.unit = unit
        self.n = lattice.n

    def mul(self, a: int, b: int) -> int:
        return self.product[a][b]

    @property
    def unital(self) -> bool:
        return self.unit is not None

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Quantale(n={self.n}, unit={self.unit})"


def two_element_quantale() -> Quantale:
    """The Boolean quantale {0 < 1} with product = meet and unit 1."""
    L = SupLattice.from_leq(2, lambda i, j: i <= j, ["0", "1"])
    return Quantale(L, [[0, 0], [0, 1]], 1)


def powerset_quantale(elements: Sequence, op: Callable, unit=None) -> tuple[Quantale, list[frozenset]]:
    """Quantale of subsets of a finite (partial) monoid.

    ``op(x, y)`` returns the product or ``None`` when it falls outside the
    carrier; such products are dropped, which keeps the set product
    associative whenever the partial operation is (e.g. length-truncated words).
    """
    L, subsets = powerset_lattice(elements)
    pos = {x: i for i, x in enumerate(elements)}
    single = [[0] * len(elements) for _ in elements]
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            z = op(x, y)
            single[i][j] = 0 if z is None else 1 << pos[z]
    table = []
    for a in range(L.n):
        row = []
        for b in range(L.n):
            m = 0
            for i in bits(a):
                for j in bits(b):
                    m |= single[i][j]
            row.append(m)
        table.append(row)
    u = None if unit is None else 1 << pos[unit]
    return Quantale(L, table, u), subsets


def validate_quantale(Q: Quantale, exhaustive: bool = False) -> LatticeReport:
    """Monoid laws plus distributivity of the product over joins on both sides.

    By default distributivity is checked on the empty join and binary joins,
    which is equivalent on finite carriers; ``exhaustive`` scans every subset.
    """
    L, p, n = Q.lattice, Q.product, Q.n
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if p[p[a][b]][c] != p[a][p[b][c]]:
                    return LatticeReport(False, "associativity fails", (a, b, c))
    if Q.unit is not None:
        for a in range(n):
            if p[Q.unit][a] != a or p[a][Q.unit] != a:
                return LatticeReport(False, "unit law fails", (a,))
    bot = L.bottom
    for a in range(n):
        if p[a][bot] != bot or p[bot][a] != bot:
            return LatticeReport(False, "distributivity fails on the empty join", (a,))
    if exhaustive:
        for a in range(n):
            for mask in range(1 << n):
                j = L.join_mask(mask)
                if p[a][j] != L.join(p[a][b] for b in bits(mask)):
                    return LatticeReport(False, "left distributivity fails", (a, tuple(bits(mask))))
                if p[j][a] != L.join(p[b][a] for b in bits(mask)):
                    return LatticeReport(False, "right distributivity fails", (a, tuple(bits(mask))))
    else:
        for a in range(n):
            for b in range(n):
                for c in range(b + 1, n):
                    j = L.join2(b, c)
                    if p[a][j] != L.join2(p[a][b], p[a][c]):
                        return LatticeReport(False, "left distributivity fails", (a, (b, c)))
                    if p[j][a] != L.join2(p[b][a], p[c][a]):
                        return LatticeReport(False, "right distributivity fails", (a, (b, c)))
    return LatticeReport(True)


def residuals(Q: Quantale, a: int, b: int) -> tuple[int, int]:
    """Return ``(b\\a, a/b)``: the largest c with ``b*c <= a`` and with ``c*b <= a``."""
    L, p = Q.lattice, Q.product
    left = right = 0
    for c in range(Q.n):
        if L.leq(p[b][c], a):
            left |= 1 << c
        if L.leq(p[c][b], a):
            right |= 1 << c
    return L.join_mask(left), L.join_mask(right)


def is_closure(L: SupLattice, j: Sequence[int]) -> bool:
    for a in range(L.n):
        if not L.leq(a, j[a]) or j[j[a]] != j[a]:
            return False
        for b in bits(L.up[a]):
            if not L.leq(j[a], j[b]):
                return False
    return True


def is_quantic_nucleus(j: Sequence[int], Q: Quantale) -> bool:
    if len(j) != Q.n or not is_closure(Q.lattice, j):
        return False
    L, p = Q.lattice, Q.product
    return all(L.leq(p[j[a]][j[b]], j[p[a][b]]) for a in range(Q.n) for b in range(Q.n))


def nucleus_meet_q(Q: Quantale, j1: Sequence[int], j2: Sequence[int]) -> tuple:
    return tuple(Q.lattice.meet2(j1[a], j2[a]) for a in range(Q.n))


def saturated_elements_q(Q: Quantale, theta: Relation, all_conditions: bool | None = None) -> frozenset:
    """Elements s such that no translate ``c*a*d`` of a related pair is split by ``<= s``.

    For unital quantales only the two-sided condition is tested unless
    ``all_conditions`` is set; without a unit the one-sided and bare
    conditions are needed as well.
    """
    L, p, n = Q.lattice, Q.product, Q.n
    theta = list(theta)
    if all_conditions is None:
        all_conditions = Q.unit is None
    # for every pair, the sets of elements below which the relevant translates fall
    tests = []
    for a, b in theta:
        for c in range(n):
            for d in range(n):
                tests.append((p[p[c][a]][d], p[p[c][b]][d]))
        if all_conditions:
            for c in range(n):
                tests.append((p[a][c], p[b][c]))
                tests.append((p[c][a], p[c][b]))
            tests.append((a, b))
    out = []
    for s in range(n):
        down = L.down[s]
        if all(((down >> x) & 1) == ((down >> y) & 1) for x, y in tests):
            out.append(s)
    return frozenset(out)


def closure_from_closed_set(L: SupLattice, closed: Iterable[int]) -> tuple:
    """``rho(a) = meet{s in closed | a <= s}`` for a meet-closed family."""
    cmask = 0
    for s in closed:
        cmask |= 1 << s
    return tuple(L.meet_mask(L.up[a] & cmask) for a in range(L.n))


def nucleus_q(Q: Quantale, theta: Relation) -> tuple:
    return closure_from_closed_set(Q.lattice, saturated_elements_q(Q, theta))


def quotient_q(Q: Quantale, theta: Relation) -> tuple[Quantale, SupMap]:
    """Quantale on the saturated elements with ``a .j b = rho(ab)`` and the projection."""
    sat = sorted(saturated_elements_q(Q, theta))
    rho = closure_from_closed_set(Q.lattice, sat)
    L = Q.lattice
    idx = {s: i for i, s in enumerate(sat)}
    sub = SupLattice.from_leq(len(sat), lambda i, j: L.leq(sat[i], sat[j]), [L.labels[s] for s in sat])
    prod = [[idx[rho[Q.product[a][b]]] for b in sat] for a in sat]
    unit = None if Q.unit is None else idx[rho[Q.unit]]
    quo = Quantale(sub, prod, unit)
    proj = SupMap(L, sub, tuple(idx[rho[a]] for a in range(L.n)))
    return quo, proj


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True

    def blocks(self) -> list[frozenset]:
        groups: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted((frozenset(g) for g in groups.values()), key=min)


def generated_congruence(n: int, seeds: Relation, translations: Sequence[Callable[[int], int]],
                         join2: Callable[[int, int], int]) -> list[frozenset]:
    """Least equivalence containing ``seeds`` and compatible with binary joins and
    every unary translation, computed as a fixpoint over the finite pair set."""
    uf = _UnionFind(n)
    for a, b in seeds:
        uf.union(a, b)
    changed = True
    while changed:
        changed = False
        for x in range(n):
            r = uf.find(x)
            if r == x:
                continue
            for c in range(n):
                if uf.union(join2(x, c), join2(r, c)):
                    changed = True
            for t in translations:
                if uf.union(t(x), t(r)):
                    changed = True
    return uf.blocks()


def congruence_oracle_q(Q: Quantale, theta: Relation) -> list[frozenset]:
    p = Q.product
    translations = []
    for c in range(Q.n):
        translations.append(lambda x, c=c: p[c][x])
        translations.append(lambda x, c=c: p[x][c])
    return generated_congruence(Q.n, theta, translations, Q.lattice.join2)


def _block_index(n: int, blocks: Sequence[frozenset]) -> list[int]:
    cls = [0] * n
    for i, blk in enumerate(blocks):
        for x in blk:
            cls[x] = i
    return cls


def block_lattice(L: SupLattice, blocks: Sequence[frozenset]) -> tuple[SupLattice, list[int]]:
    """Quotient order on congruence blocks: ``[a] <= [b]`` iff ``[a v b] = [b]``."""
    cls = _block_index(L.n, blocks)
    reps = [min(b) for b in blocks]
    lat = SupLattice.from_leq(len(blocks), lambda i, j: cls[L.join2(reps[i], reps[j])] == j,
                              ["[" + L.labels[r] + "]" for r in reps])
    return lat, cls


def quotient_by_partition_q(Q: Quantale, blocks: Sequence[frozenset]) -> Quantale:
    lat, cls = block_lattice(Q.lattice, blocks)
    reps = [min(b) for b in blocks]
    prod = [[cls[Q.product[a][b]] for b in reps] for a in reps]
    unit = None if Q.unit is None else cls[Q.unit]
    return Quantale(lat, prod, unit)


def quantale_isomorphism(A: Quantale, B: Quantale):
    """An order isomorphism preserving product and unit, or None."""
    if A.n != B.n or A.unital != B.unital:
        return None
    for phi in order_isomorphisms(A.lattice, B.lattice, first_only=False):
        if A.unit is not None and phi[A.unit] != B.unit:
            continue
        if all(phi[A.product[a][b]] == B.product[phi[a]][phi[b]]
               for a in range(A.n) for b in range(A.n)):
            return phi
    return None


@dataclass(frozen=True)
class QuanticNucleus:
    base: Quantale
    table: tuple

    def __post_init__(self):
        if not is_quantic_nucleus(self.table, self.base):
            raise ValueError("table is not a quantic nucleus")
