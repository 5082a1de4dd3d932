"""Tensor products ``M1 (x)_Q M2`` of a right and a left module.

Two routes compute the same sup-lattice:

* ``powerset``: the free sup-lattice on ``M1 x M2`` viewed as a module over
  the two-element quantale, quotiented through its elements saturated for the
  three generating pair families (join in the first slot, join in the second
  slot, balanced scalars).  Exponential; the oracle.
* ``lazy``: saturated subsets are exactly the subsets closed under a handful
  of local rules (bottom rows, downward closure and binary joins in each
  slot, scalar balancing), so each element is grown by forward closure from
  generators and the lattice is swept out by binary joins of closed sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .lattice import SizeGuardError, SupLattice, bits, powerset_lattice
from .qmodule import LEFT, RIGHT, QModule, boolean_module, saturated_elements_m

POWERSET_LIMIT = 12


@dataclass
class Tensor:
    lattice: SupLattice
    members: list[int]              # each element as a bitmask over ``points``
    points: list[tuple[int, int]]
    closure: Callable[[int], int] = field(repr=False)
    method: str = "lazy"

    def __post_init__(self):
        self._index = {m: i for i, m in enumerate(self.members)}

    def element(self, mask: int) -> int:
        return self._index[self.closure(mask)]

    def pure(self, x: int, y: int) -> int:
        """Class of the elementary tensor ``x (x) y``."""
        return self.element(1 << self.points.index((x, y)))

    def __len__(self):
        return len(self.members)


def tensor_relation(M1: QModule, M2: QModule) -> list[tuple[int, int]]:
    """The generating pairs, each side a bitmask over ``M1 x M2`` (index ``x*|M2| + y``)."""
    n1, n2 = M1.n, M2.n
    L1, L2 = M1.lattice, M2.lattice
    pt = lambda x, y: 1 << (x * n2 + y)
    rel = []
    for X in range(1 << n1):
        jx = L1.join_mask(X)
        for y in range(n2):
            rel.append((pt(jx, y), sum(pt(x, y) for x in bits(X))))
    for Y in range(1 << n2):
        jy = L2.join_mask(Y)
        for x in range(n1):
            rel.append((pt(x, jy), sum(pt(x, y) for y in bits(Y))))
    for a in range(M1.scalars.n):
        for x in range(n1):
            for y in range(n2):
                rel.append((pt(M1.action[a][x], y), pt(x, M2.action[a][y])))
    return rel


def _check_pair(M1: QModule, M2: QModule):
    if M1.side != RIGHT or M2.side != LEFT:
        raise ValueError("tensor product pairs a right module with a left module")
    if M1.scalars.product != M2.scalars.product:
        raise ValueError("modules act by different quantales")


def _finish(members: list[int], points, closure, method) -> Tensor:
    members = sorted(members, key=lambda m: (bin(m).count("1"), m))
    labels = [str(sorted(points[i] for i in bits(m))) for m in members]
    lat = SupLattice.from_leq(len(members), lambda i, j: members[i] & ~members[j] == 0, labels)
    return Tensor(lat, members, points, closure, method)


def tensor_powerset(M1: QModule, M2: QModule, guard: int = POWERSET_LIMIT) -> Tensor:
    _check_pair(M1, M2)
    points = [(x, y) for x in range(M1.n) for y in range(M2.n)]
    if len(points) > guard:
        raise SizeGuardError(f"|M1 x M2| = {len(points)} exceeds the powerset limit {guard}")
    free, _ = powerset_lattice(points, guard=1 << guard)
    freeM = boolean_module(free)
    # element m of the free lattice is the subset with bitmask m
    sat = sorted(saturated_elements_m(freeM, tensor_relation(M1, M2)))

    def closure(mask: int) -> int:
        best = None
        for s in sat:
            if mask & ~s == 0 and (best is None or s & ~best == 0):
                best = s
        return best

    return _finish(sat, points, closure, "powerset")


def tensor_lazy(M1: QModule, M2: QModule) -> Tensor:
    _check_pair(M1, M2)
    n1, n2 = M1.n, M2.n
    L1, L2 = M1.lattice, M2.lattice
    points = [(x, y) for x in range(n1) for y in range(n2)]
    bot1, bot2 = L1.bottom, L2.bottom
    base = 0
    for y in range(n2):
        base |= 1 << (bot1 * n2 + y)
    for x in range(n1):
        base |= 1 << (x * n2 + bot2)
    acts = list(zip(M1.action, M2.action))
    memo: dict[int, int] = {}

    def closure(mask: int) -> int:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        s = mask | base
        while True:
            new = s
            for p in bits(s):
                x, y = divmod(p, n2)
                for x2 in bits(L1.down[x]):
                    new |= 1 << (x2 * n2 + y)
                for y2 in bits(L2.down[y]):
                    new |= 1 << (x * n2 + y2)
                for q in bits(s):
                    x3, y3 = divmod(q, n2)
                    if y3 == y:
                        new |= 1 << (L1.join2(x, x3) * n2 + y)
                    if x3 == x:
                        new |= 1 << (x * n2 + L2.join2(y, y3))
            for r1, r2 in acts:
                for x in range(n1):
                    for y in range(n2):
                        left = (new >> (r1[x] * n2 + y)) & 1
                        right = (new >> (x * n2 + r2[y])) & 1
                        if left and not right:
                            new |= 1 << (x * n2 + r2[y])
                        elif right and not left:
                            new |= 1 << (r1[x] * n2 + y)
            if new == s:
                break
            s = new
        memo[mask] = s
        return s

    gens = {closure(1 << p) for p in range(len(points))}
    found = {closure(0)} | gens
    frontier = list(found)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = closure(a | g)
                if c not in found:
                    found.add(c)
                    nxt.append(c)
        frontier = nxt
    return _finish(list(found), points, closure, "lazy")


def tensor_product(M1: QModule, M2: QModule, method: str = "auto") -> Tensor:
    if method == "auto":
        method = "powerset" if M1.n * M2.n <= POWERSET_LIMIT else "lazy"
    if method == "powerset":
        return tensor_powerset(M1, M2)
    if method == "lazy":
        return tensor_lazy(M1, M2)
    raise ValueError(f"unknown tensor method {method!r}")


def check_bimorphism(T: Tensor, M1: QModule, M2: QModule) -> list[str]:
    """Exhaustive check that ``(x, y) -> x (x) y`` preserves joins in each slot and balances scalars."""
    problems = []
    L, L1, L2 = T.lattice, M1.lattice, M2.lattice
    for y in range(M2.n):
        for X in range(1 << M1.n):
            lhs = T.pure(L1.join_mask(X), y)
            rhs = L.join(T.pure(x, y) for x in bits(X))
            if lhs != rhs:
                problems.append(f"first slot join fails at X={list(bits(X))}, y={y}")
    for x in range(M1.n):
        for Y in range(1 << M2.n):
            lhs = T.pure(x, L2.join_mask(Y))
            rhs = L.join(T.pure(x, y) for y in bits(Y))
            if lhs != rhs:
                problems.append(f"second slot join fails at x={x}, Y={list(bits(Y))}")
    for a in range(M1.scalars.n):
        for x in range(M1.n):
            for y in range(M2.n):
                if T.pure(M1.action[a][x], y) != T.pure(x, M2.action[a][y]):
                    problems.append(f"balance fails at a={a}, x={x}, y={y}")
    return problems
