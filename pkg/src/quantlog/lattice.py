"""Finite sup-lattices stored as explicit order relations.

Elements are the integers ``0 .. n-1``.  The order is kept as two tuples of
bitmasks, ``up[i]`` (everything above ``i``) and ``down[i]`` (everything
below ``i``), which makes joins and meets of arbitrary subsets a matter of
AND-ing masks and picking the extremal bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

DEFAULT_SIZE_GUARD = 4096
_TABLE_LIMIT = 256


class LatticeError(ValueError):
    pass


class SizeGuardError(LatticeError):
    pass


def bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class LatticeReport:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


class SupLattice:
    """A finite poset that is expected (not assumed) to be a complete lattice.

    Construction never validates; call :func:`validate_lattice` first when the
    input is untrusted.  Labels are metadata only, identity is the index.
    """

    def __init__(self, up: Sequence[int], labels: Sequence[str] | None = None):
        n = len(up)
        self.n = n
        self.up = tuple(up)
        down = [0] * n
        for i, mask in enumerate(self.up):
            for j in bits(mask):
                down[j] |= 1 << i
        self.down = tuple(down)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(self.labels) != n:
            raise LatticeError("label count does not match carrier size")
        self.full = (1 << n) - 1
        self._join_memo: dict[tuple[int, int], int] = {}
        self._meet_memo: dict[tuple[int, int], int] = {}
        self._bottom = None
        self._top = None
        self._jt = None
        self._mt = None

    # -- construction -----------------------------------------------------
    @classmethod
    def from_leq(cls, n: int, leq: Callable[[int, int], bool], labels=None) -> "SupLattice":
        up = []
        for i in range(n):
            mask = 0
            for j in range(n):
                if leq(i, j):
                    mask |= 1 << j
            up.append(mask)
        return cls(up, labels)

    @classmethod
    def from_covers(cls, labels: Sequence[str], covers: Iterable[tuple[str, str]]) -> "SupLattice":
        """Build the reflexive-transitive closure of ``lower < upper`` pairs."""
        index = {name: i for i, name in enumerate(labels)}
        if len(index) != len(labels):
            raise LatticeError("duplicate element names")
        n = len(labels)
        up = [1 << i for i in range(n)]
        for lo, hi in covers:
            if lo not in index or hi not in index:
                raise LatticeError(f"cover ({lo}, {hi}) mentions an unknown element")
            up[index[lo]] |= 1 << index[hi]
        # transitive closure by repeated squaring of the masks
        changed = True
        while changed:
            changed = False
            for i in range(n):
                mask = up[i]
                for j in bits(mask):
                    mask |= up[j]
                if mask != up[i]:
                    up[i] = mask
                    changed = True
        return cls(up, labels)

    @classmethod
    def from_sets(cls, family: Iterable[frozenset], labels=None) -> "SupLattice":
        """Lattice of a family of sets ordered by inclusion (order of first appearance)."""
        members = list(dict.fromkeys(frozenset(s) for s in family))
        lat = cls.from_leq(len(members), lambda i, j: members[i] <= members[j], labels)
        return lat

    @classmethod
    def chain(cls, n: int) -> "SupLattice":
        return cls.from_leq(n, lambda i, j: i <= j)

    # -- order ------------------------------------------------------------
    def leq(self, a: int, b: int) -> bool:
        return (self.up[a] >> b) & 1 == 1

    def elements(self) -> range:
        return range(self.n)

    @property
    def bottom(self) -> int:
        if self._bottom is None:
            self._bottom = self.join_mask(0)
        return self._bottom

    @property
    def top(self) -> int:
        if self._top is None:
            self._top = self.meet_mask(0)
        return self._top

    def _least(self, mask: int) -> int:
        for u in bits(mask):
            if mask & ~self.up[u] == 0:
                return u
        raise LatticeError("no least element")

    def _greatest(self, mask: int) -> int:
        for u in bits(mask):
            if mask & ~self.down[u] == 0:
                return u
        raise LatticeError("no greatest element")

    def join_mask(self, mask: int) -> int:
        """Join of the subset encoded by ``mask`` (bit ``i`` set means ``i`` is in it)."""
        ub = self.full
        for i in bits(mask):
            ub &= self.up[i]
        return self._least(ub)

    def meet_mask(self, mask: int) -> int:
        lb = self.full
        for i in bits(mask):
            lb &= self.down[i]
        return self._greatest(lb)

    def _tables(self):
        if self._jt is None and self.n <= _TABLE_LIMIT:
            n = self.n
            self._jt = [[self._least(self.up[a] & self.up[b]) for b in range(n)] for a in range(n)]
            self._mt = [[self._greatest(self.down[a] & self.down[b]) for b in range(n)] for a in range(n)]
        return self._jt

    def join2(self, a: int, b: int) -> int:
        jt = self._tables()
        if jt is not None:
            return jt[a][b]
        key = (a, b) if a <= b else (b, a)
        r = self._join_memo.get(key)
        if r is None:
            r = self._least(self.up[a] & self.up[b])
            self._join_memo[key] = r
        return r

    def meet2(self, a: int, b: int) -> int:
        if self._tables() is not None:
            return self._mt[a][b]
        key = (a, b) if a <= b else (b, a)
        r = self._meet_memo.get(key)
        if r is None:
            r = self._greatest(self.down[a] & self.down[b])
            self._meet_memo[key] = r
        return r

    def join(self, elems: Iterable[int]) -> int:
        mask = 0
        for e in elems:
            mask |= 1 << e
        return self.join_mask(mask)

    def meet(self, elems: Iterable[int]) -> int:
        mask = 0
        for e in elems:
            mask |= 1 << e
        return self.meet_mask(mask)

    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs ``(a, b)`` with ``a < b`` and nothing strictly between."""
        out = []
        for a in range(self.n):
            strict = self.up[a] & ~(1 << a)
            for b in bits(strict):
                between = strict & self.down[b] & ~(1 << b)
                if not between:
                    out.append((a, b))
        return out

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LatticeError(f"unknown element {label!r}") from None

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"SupLattice(n={self.n})"


def join(L: SupLattice, S: Iterable[int]) -> int:
    return L.join(S)


def validate_lattice(L: SupLattice) -> LatticeReport:
    """Check that the order is a partial order in which every subset has a join.

    For a finite poset it is enough to find a bottom and all binary joins;
    pairs are scanned before the empty set so the usual culprit (two
    incomparable elements without a least upper bound) is the one reported.
    """
    n = L.n
    for i in range(n):
        if not L.leq(i, i):
            return LatticeReport(False, "reflexivity violated", (L.labels[i],))
    for i in range(n):
        for j in bits(L.up[i]):
            if j != i and L.leq(j, i):
                return LatticeReport(False, "antisymmetry violated", (L.labels[i], L.labels[j]))
            for k in bits(L.up[j]):
                if not L.leq(i, k):
                    return LatticeReport(False, "transitivity violated",
                                         (L.labels[i], L.labels[j], L.labels[k]))
    for a, b in combinations(range(n), 2):
        try:
            L._least(L.up[a] & L.up[b])
        except LatticeError:
            return LatticeReport(False, "missing join", (L.labels[a], L.labels[b]))
    if n == 0:
        return LatticeReport(False, "missing join", ())
    try:
        L._least(L.full)
    except LatticeError:
        return LatticeReport(False, "missing join", ())
    return LatticeReport(True)


def validate_lattice_exhaustive(L: SupLattice) -> LatticeReport:
    """Subset-by-subset join scan; exponential, used as an oracle for small carriers."""
    base = validate_lattice_order(L)
    if not base:
        return base
    for size in list(range(1, L.n + 1)) + [0]:
        for subset in combinations(range(L.n), size):
            ub = L.full
            for e in subset:
                ub &= L.up[e]
            least = [u for u in bits(ub) if all(L.leq(u, v) for v in bits(ub))]
            if not least:
                return LatticeReport(False, "missing join", tuple(L.labels[e] for e in subset))
    return LatticeReport(True)


def validate_lattice_order(L: SupLattice) -> LatticeReport:
    n = L.n
    for i in range(n):
        if not L.leq(i, i):
            return LatticeReport(False, "reflexivity violated", (L.labels[i],))
        for j in range(n):
            if i != j and L.leq(i, j) and L.leq(j, i):
                return LatticeReport(False, "antisymmetry violated", (L.labels[i], L.labels[j]))
            for k in range(n):
                if L.leq(i, j) and L.leq(j, k) and not L.leq(i, k):
                    return LatticeReport(False, "transitivity violated",
                                         (L.labels[i], L.labels[j], L.labels[k]))
    return LatticeReport(True)


@dataclass(frozen=True)
class SupMap:
    source: SupLattice = field(repr=False)
    target: SupLattice = field(repr=False)
    table: tuple

    def __call__(self, x: int) -> int:
        return self.table[x]

    def is_morphism(self) -> bool:
        """Preserves bottom and binary joins (equivalent to all joins when finite)."""
        S, T, f = self.source, self.target, self.table
        if f[S.bottom] != T.bottom:
            return False
        for a in range(S.n):
            for b in range(a + 1, S.n):
                if f[S.join2(a, b)] != T.join2(f[a], f[b]):
                    return False
        return True

    def is_morphism_exhaustive(self) -> bool:
        S, T, f = self.source, self.target, self.table
        for mask in range(1 << S.n):
            if f[S.join_mask(mask)] != T.join(f[i] for i in bits(mask)):
                return False
        return True

    def is_monotone(self) -> bool:
        S, T, f = self.source, self.target, self.table
        return all(T.leq(f[a], f[b]) for a in range(S.n) for b in bits(S.up[a]))

    def then(self, g: "SupMap") -> "SupMap":
        """Composite ``g . self``."""
        return SupMap(self.source, g.target, tuple(g.table[y] for y in self.table))

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def image(self) -> frozenset:
        return frozenset(self.table)


def identity_map(L: SupLattice) -> SupMap:
    return SupMap(L, L, tuple(range(L.n)))


def residual(f: SupMap) -> SupMap:
    """Upper adjoint ``f_*(y) = join{x | f(x) <= y}``.

    The result is meet-preserving rather than a sup-lattice morphism; it is
    returned as a plain table-carrying :class:`SupMap`.
    """
    if not f.is_morphism():
        raise LatticeError("residual requires a join-preserving map")
    S, T = f.source, f.target
    table = []
    for y in range(T.n):
        mask = 0
        for x in range(S.n):
            if T.leq(f.table[x], y):
                mask |= 1 << x
        table.append(S.join_mask(mask))
    return SupMap(T, S, tuple(table))


def powerset_lattice(X: Sequence, guard: int = DEFAULT_SIZE_GUARD) -> tuple[SupLattice, list[frozenset]]:
    """Free sup-lattice on ``X``: all subsets under inclusion.

    Element ``m`` is the subset whose members are ``X[i]`` for the set bits
    ``i`` of ``m``; the returned list maps indices back to frozensets.
    """
    X = list(X)
    size = 1 << len(X)
    if size > guard:
        raise SizeGuardError(f"powerset of {len(X)} points has {size} elements (guard {guard})")
    up = []
    for m in range(size):
        # supersets of m: enumerate complements' submasks
        comp = (size - 1) & ~m
        mask = 0
        sub = comp
        while True:
            mask |= 1 << (m | sub)
            if sub == 0:
                break
            sub = (sub - 1) & comp
        up.append(mask)
    subsets = [frozenset(X[i] for i in bits(m)) for m in range(size)]
    labels = ["{" + ",".join(str(x) for x in sorted(s, key=str)) + "}" for s in subsets]
    return SupLattice(up, labels), subsets


def product_lattice(A: SupLattice, B: SupLattice) -> SupLattice:
    """Componentwise order; pair ``(a, b)`` has index ``a * B.n + b``."""
    nb = B.n
    up = []
    for a in range(A.n):
        above_a = list(bits(A.up[a]))
        for b in range(nb):
            row = B.up[b]
            mask = 0
            for a2 in above_a:
                mask |= row << (a2 * nb)
            up.append(mask)
    labels = [f"({A.labels[a]},{B.labels[b]})" for a in range(A.n) for b in range(nb)]
    return SupLattice(up, labels)


def export_dot(L: SupLattice, name: str = "L") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i in range(L.n):
        lines.append(f'  n{i} [label="{L.labels[i]}"];')
    for a, b in L.covers():
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def order_isomorphisms(A: SupLattice, B: SupLattice, first_only: bool = True):
    """Backtracking search for order isomorphisms ``A -> B`` (as index tuples)."""
    if A.n != B.n:
        return []
    n = A.n
    sig_a = [(bin(A.up[i]).count("1"), bin(A.down[i]).count("1")) for i in range(n)]
    sig_b = [(bin(B.up[i]).count("1"), bin(B.down[i]).count("1")) for i in range(n)]
    if sorted(sig_a) != sorted(sig_b):
        return []
    order = sorted(range(n), key=lambda i: sig_a[i])
    found = []
    image = [-1] * n
    used = [False] * n

    def extend(pos):
        if pos == n:
            found.append(tuple(image))
            return first_only
        a = order[pos]
        for b in range(n):
            if used[b] or sig_b[b] != sig_a[a]:
                continue
            ok = True
            for prev in order[:pos]:
                pb = image[prev]
                if A.leq(prev, a) != B.leq(pb, b) or A.leq(a, prev) != B.leq(b, pb):
                    ok = False
                    break
            if not ok:
                continue
            image[a] = b
            used[b] = True
            if extend(pos + 1):
                return True
            used[b] = False
            image[a] = -1
        return False

    extend(0)
    return found


def automorphisms(L: SupLattice) -> list[tuple]:
    return order_isomorphisms(L, L, first_only=False)
