"""Exhaustive generation of small lattices, quantales, modules and amalgams.

Everything is enumerated up to isomorphism: two structures on the same
lattice are identified when a lattice automorphism carries one onto the
other, and lattices themselves are deduplicated by order isomorphism.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

from .lattice import SupLattice, automorphisms, bits, order_isomorphisms, validate_lattice
from .qmodule import Amalgam, ModuleMorphism, QModule
from .quantale import Quantale


@lru_cache(maxsize=None)
def lattices(n: int) -> tuple[SupLattice, ...]:
    """All lattices with exactly ``n`` elements, up to isomorphism.

    Index 0 is the bottom and ``n-1`` the top; the order on the middle
    elements is any transitive relation compatible with index order.
    """
    if n == 1:
        return (SupLattice.chain(1),)
    mid = list(range(1, n - 1))
    pairs = list(combinations(mid, 2))
    found: list[SupLattice] = []
    for choice in product((False, True), repeat=len(pairs)):
        rel = {p for p, c in zip(pairs, choice) if c}
        if any((i, j) in rel and (j, k) in rel and (i, k) not in rel
               for i in mid for j in mid for k in mid):
            continue
        L = SupLattice.from_leq(
            n, lambda i, j: i == j or i == 0 or j == n - 1 or (i, j) in rel)
        if not validate_lattice(L):
            continue
        if any(order_isomorphisms(L, other) for other in found):
            continue
        found.append(L)
    return tuple(found)


def lattices_upto(n: int) -> list[SupLattice]:
    return [L for k in range(1, n + 1) for L in lattices(k)]


def _canonical_quantale(L: SupLattice, table, unit, auts) -> tuple:
    best = None
    n = L.n
    for phi in auts:
        inv = [0] * n
        for i, p in enumerate(phi):
            inv[p] = i
        t = tuple(tuple(phi[table[inv[a]][inv[b]]] for b in range(n)) for a in range(n))
        key = (phi[unit], t)
        if best is None or key < best:
            best = key
    return best


def quantales_on(L: SupLattice) -> list[Quantale]:
    """All unital quantales on ``L`` up to isomorphism, by backtracking over the table."""
    n = L.n
    bot = L.bottom
    auts = automorphisms(L)
    seen = set()
    out = []
    units = [0] if n == 1 else [u for u in range(n) if u != bot]
    for unit in units:
        table = [[None] * n for _ in range(n)]
        for x in range(n):
            table[bot][x] = table[x][bot] = bot
        for x in range(n):
            table[unit][x] = table[x][unit] = x
        free = [(a, b) for a in range(n) for b in range(n) if table[a][b] is None]

        def consistent() -> bool:
            t = table
            for a in range(n):
                for b in range(n):
                    ab = t[a][b]
                    if ab is None:
                        continue
                    for b2 in bits(L.up[b]):
                        v = t[a][b2]
                        if v is not None and not L.leq(ab, v):
                            return False
                        v = t[b2][a] if t[b][a] is not None else None
                        if v is not None and not L.leq(t[b][a], v):
                            return False
                    for c in range(n):
                        bc = t[b][c]
                        if bc is None:
                            continue
                        l = t[ab][c]
                        r = t[a][bc]
                        if l is not None and r is not None and l != r:
                            return False
            for a in range(n):
                for b in range(n):
                    for c in range(b + 1, n):
                        j = L.join2(b, c)
                        x, y, z = table[a][j], table[a][b], table[a][c]
                        if None not in (x, y, z) and x != L.join2(y, z):
                            return False
                        x, y, z = table[j][a], table[b][a], table[c][a]
                        if None not in (x, y, z) and x != L.join2(y, z):
                            return False
            return True

        def fill(k):
            if k == len(free):
                key = _canonical_quantale(L, table, unit, auts)
                if key not in seen:
                    seen.add(key)
                    out.append(Quantale(L, [row[:] for row in table], unit))
                return
            a, b = free[k]
            for v in range(n):
                table[a][b] = v
                if consistent():
                    fill(k + 1)
            table[a][b] = None

        if consistent():
            fill(0)
    return out


@lru_cache(maxsize=None)
def quantales_upto(n: int) -> tuple[Quantale, ...]:
    return tuple(Q for L in lattices_upto(n) for Q in quantales_on(L))


@lru_cache(maxsize=None)
def sup_endomorphisms(L: SupLattice) -> tuple[tuple, ...]:
    """Every join-preserving self-map of ``L``."""
    n = L.n
    order = sorted(range(n), key=lambda i: bin(L.down[i]).count("1"))
    out = []
    f = [None] * n

    def ok_so_far(e):
        # every pair whose join is already assigned, not only pairs touching e
        for d in range(n):
            if f[d] is None:
                continue
            for d2 in range(d, n):
                if f[d2] is None:
                    continue
                j = L.join2(d, d2)
                if f[j] is not None and f[j] != L.join2(f[d], f[d2]):
                    return False
        return True

    def go(k):
        if k == n:
            out.append(tuple(f))
            return
        e = order[k]
        choices = [L.bottom] if e == L.bottom else range(n)
        for v in choices:
            f[e] = v
            if ok_so_far(e):
                go(k + 1)
        f[e] = None

    go(0)
    return tuple(out)


def _canonical_action(L: SupLattice, action, auts) -> tuple:
    n = L.n
    best = None
    for phi in auts:
        inv = [0] * n
        for i, p in enumerate(phi):
            inv[p] = i
        key = tuple(tuple(phi[row[inv[u]]] for u in range(n)) for row in action)
        if best is None or key < best:
            best = key
    return best


def modules_on(Q: Quantale, L: SupLattice) -> list[QModule]:
    """All left ``Q``-module structures on ``L`` up to isomorphism.

    Each scalar acts by a join-preserving endomorphism; the assignment
    ``a -> lambda_a`` must preserve joins, products and the unit.
    """
    ends = sup_endomorphisms(L)
    n, qn = L.n, Q.n
    QL, qp = Q.lattice, Q.product
    zero = tuple([L.bottom] * n)
    ident = tuple(range(n))
    lam: list = [None] * qn
    lam[QL.bottom] = zero
    if Q.unit == QL.bottom:
        if n != 1:
            return []
    lam[Q.unit] = ident
    free = [a for a in range(qn) if lam[a] is None]

    def compatible() -> bool:
        for a in range(qn):
            la = lam[a]
            if la is None:
                continue
            for b in range(qn):
                lb = lam[b]
                if lb is None:
                    continue
                j = lam[QL.join2(a, b)]
                if j is not None and any(j[u] != L.join2(la[u], lb[u]) for u in range(n)):
                    return False
                p = lam[qp[a][b]]
                if p is not None and any(p[u] != la[lb[u]] for u in range(n)):
                    return False
        return True

    if not compatible():
        return []
    auts = automorphisms(L)
    seen = set()
    out = []

    def go(k):
        if k == len(free):
            action = tuple(lam)
            key = _canonical_action(L, action, auts)
            if key not in seen:
                seen.add(key)
                out.append(QModule(Q, L, [list(r) for r in action]))
            return
        a = free[k]
        for e in ends:
            lam[a] = e
            if compatible():
                go(k + 1)
        lam[a] = None

    go(0)
    return out


def modules_upto(Q: Quantale, m: int) -> list[QModule]:
    return [M for L in lattices_upto(m) for M in modules_on(Q, L)]


def module_morphisms(M: QModule, N: QModule, injective: bool = False) -> list[ModuleMorphism]:
    """All module morphisms ``M -> N`` (optionally only injective ones)."""
    LM, LN = M.lattice, N.lattice
    n = M.n
    order = sorted(range(n), key=lambda i: bin(LM.down[i]).count("1"))
    f = [None] * n
    out = []
    qn = M.scalars.n

    def ok(e):
        for d in range(n):
            if f[d] is None:
                continue
            if injective and d != e and f[d] == f[e]:
                return False
            for d2 in range(d, n):
                if f[d2] is None:
                    continue
                j = LM.join2(d, d2)
                if f[j] is not None and f[j] != LN.join2(f[d], f[d2]):
                    return False
        for a in range(qn):
            for d in range(n):
                if f[d] is None:
                    continue
                t = f[M.action[a][d]]
                if t is not None and t != N.action[a][f[d]]:
                    return False
        return True

    def go(k):
        if k == n:
            out.append(ModuleMorphism(M, N, tuple(f)))
            return
        e = order[k]
        choices = [LN.bottom] if e == LM.bottom else range(N.n)
        for v in choices:
            f[e] = v
            if ok(e):
                go(k + 1)
        f[e] = None

    go(0)
    return out


def relations_upto(n: int, max_pairs: int = 2) -> list[tuple[tuple[int, int], ...]]:
    """Relations of at most ``max_pairs`` unordered, non-diagonal pairs.

    Saturation and generated congruences ignore pair orientation and
    diagonal pairs, so this covers every relation of that size.
    """
    pairs = list(combinations(range(n), 2))
    out = [()]
    for k in range(1, max_pairs + 1):
        out.extend(combinations(pairs, k))
    return out


def amalgams(Q: Quantale, max_p: int, max_mn: int):
    """Every V-formation ``M <- P -> N`` of modules in the family with injective legs.

    Yields one amalgam per (P, M, f, N, g), with P ranging over modules up to
    ``max_p`` elements and M, N over modules up to ``max_mn``.  Legs are taken
    as unordered pairs, since swapping them gives the mirror amalgam.
    """
    small = modules_upto(Q, max_p)
    big = modules_upto(Q, max_mn)
    for P in small:
        legs = [(M, f) for M in big if M.n >= P.n for f in module_morphisms(P, M, injective=True)]
        for i, (M, f) in enumerate(legs):
            for N, g in legs[i:]:
                yield Amalgam(P, M, N, f, g)
