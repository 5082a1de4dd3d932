"""Propositional syntax: languages, formulas, equations, sequents, substitutions.

Formulas are terms over a finite list of variables ``x1 .. xn``.  The
concrete text form is prefix application, ``name(arg, ...)``, with
nullary connectives written bare.  Equations are written ``s = t`` and
sequents ``a, b => c``.

Nothing here truncates: applying a substitution can produce arbitrarily
deep terms, and it is up to the deduction layer to decide what to keep.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence, Union

ENUMERATION_GUARD = 200_000


class FormulaSyntaxError(ValueError):
    """Malformed formula text; ``pos`` is the character offset."""

    def __init__(self, msg: str, pos: int = 0, text: str = ""):
        super().__init__(f"{msg} at position {pos}" + (f" in {text!r}" if text else ""))
        self.pos = pos


ParseError = FormulaSyntaxError


# ---------------------------------------------------------------------------
# languages

@dataclass(frozen=True)
class Language:
    connectives: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        names = [c for c, _ in self.connectives]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate connective names in {names}")
        for name, ar in self.connectives:
            if ar < 0:
                raise ValueError(f"negative arity for {name}")
            if _VAR_RE.fullmatch(name) or not _NAME_RE.fullmatch(name):
                raise ValueError(f"bad connective name {name!r}")

    @classmethod
    def of(cls, **arities: int) -> "Language":
        return cls(tuple(arities.items()))

    @property
    def arity(self) -> dict[str, int]:
        return dict(self.connectives)

    @property
    def names(self) -> list[str]:
        return [c for c, _ in self.connectives]

    def __contains__(self, name: str) -> bool:
        return any(c == name for c, _ in self.connectives)

    def __len__(self):
        return len(self.connectives)

    def restrict(self, names: Iterable[str]) -> "Language":
        keep = set(names)
        return Language(tuple(c for c in self.connectives if c[0] in keep))


def common_fragment(L1: Language, L2: Language) -> Language:
    """Connectives present in both languages with the same arity."""
    a2 = L2.arity
    return Language(tuple((c, ar) for c, ar in L1.connectives if a2.get(c) == ar))


def union_language(L1: Language, L2: Language) -> Language:
    a1 = L1.arity
    extra = []
    for c, ar in L2.connectives:
        if c in a1:
            if a1[c] != ar:
                raise ValueError(f"connective {c} has arity {a1[c]} and {ar}")
            continue
        extra.append((c, ar))
    return Language(L1.connectives + tuple(extra))


# ---------------------------------------------------------------------------
# formulas and items

@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True, slots=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self):
        return format_formula(self)


Formula = Union[Var, App]


@dataclass(frozen=True, slots=True)
class Equation:
    lhs: Formula
    rhs: Formula

    def __str__(self):
        return format_item(self)


@dataclass(frozen=True, slots=True)
class Sequent:
    left: tuple
    right: tuple

    @property
    def type(self) -> tuple[int, int]:
        return (len(self.left), len(self.right))

    def __str__(self):
        return format_item(self)


Item = Union[Var, App, Equation, Sequent]

FORMULAS, EQUATIONS, SEQUENTS = "formulas", "equations", "sequents"
KINDS = (FORMULAS, EQUATIONS, SEQUENTS)


def depth(phi: Formula) -> int:
    if isinstance(phi, Var):
        return 0
    return 1 + max((depth(a) for a in phi.args), default=0)


def components(it: Item) -> tuple:
    if isinstance(it, Equation):
        return (it.lhs, it.rhs)
    if isinstance(it, Sequent):
        return it.left + it.right
    return (it,)


def item_depth(it: Item) -> int:
    return max((depth(c) for c in components(it)), default=0)


def item_kind(it: Item) -> str:
    if isinstance(it, Equation):
        return EQUATIONS
    if isinstance(it, Sequent):
        return SEQUENTS
    return FORMULAS


def formula_vars(phi: Formula, acc: set | None = None) -> set[int]:
    acc = set() if acc is None else acc
    if isinstance(phi, Var):
        acc.add(phi.index)
    else:
        for a in phi.args:
            formula_vars(a, acc)
    return acc


def item_vars(it: Item) -> set[int]:
    acc: set[int] = set()
    for c in components(it):
        formula_vars(c, acc)
    return acc


def connectives_of(phi: Formula, acc: set | None = None) -> set[str]:
    acc = set() if acc is None else acc
    if isinstance(phi, App):
        acc.add(phi.op)
        for a in phi.args:
            connectives_of(a, acc)
    return acc


def item_connectives(it: Item) -> set[str]:
    acc: set[str] = set()
    for c in components(it):
        connectives_of(c, acc)
    return acc


def map_item(fn, it: Item) -> Item:
    """Apply a formula-level map to every component of an item."""
    if isinstance(it, Equation):
        return Equation(fn(it.lhs), fn(it.rhs))
    if isinstance(it, Sequent):
        return Sequent(tuple(fn(a) for a in it.left), tuple(fn(b) for b in it.right))
    return fn(it)


def in_language(it: Item, lang: Language) -> bool:
    ar = lang.arity

    def ok(phi):
        if isinstance(phi, Var):
            return True
        return ar.get(phi.op) == len(phi.args) and all(ok(a) for a in phi.args)

    return all(ok(c) for c in components(it))


# ---------------------------------------------------------------------------
# text form

_VAR_RE = re.compile(r"x[0-9]+")
_NAME_RE = re.compile(r"[A-Za-z0-9_:.']+")
_TOKEN_RE = re.compile(r"\s*(=>|=|,|\(|\)|[A-Za-z0-9_:.']+)")


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Var):
        return f"x{phi.index}"
    if not phi.args:
        return phi.op
    return phi.op + "(" + ",".join(format_formula(a) for a in phi.args) + ")"


def format_item(it: Item) -> str:
    if isinstance(it, Equation):
        return f"{format_formula(it.lhs)} = {format_formula(it.rhs)}"
    if isinstance(it, Sequent):
        left = ", ".join(format_formula(a) for a in it.left)
        right = ", ".join(format_formula(b) for b in it.right)
        return f"{left} => {right}".strip()
    return format_formula(it)


def format_set(items: Iterable[Item]) -> str:
    return "{" + ", ".join(format_item(i) for i in sort_items(items)) + "}"


def item_key(it: Item):
    return (item_depth(it), format_item(it))


def sort_items(items: Iterable[Item]) -> list:
    return sorted(items, key=item_key)


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start, text)
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, lang: Language | None, text: str):
        self.lang = lang
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self):
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def take(self, expected=None):
        if self.i >= len(self.toks):
            raise FormulaSyntaxError("unexpected end of input" + (f", expected {expected!r}" if expected else ""),
                               len(self.text), self.text)
        tok, p = self.toks[self.i]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", p, self.text)
        self.i += 1
        return tok

    def formula(self) -> Formula:
        p = self.pos()
        tok = self.take()
        if tok in ("(", ")", ",", "=", "=>"):
            raise FormulaSyntaxError(f"expected a formula, found {tok!r}", p, self.text)
        if _VAR_RE.fullmatch(tok):
            idx = int(tok[1:])
            if idx < 1:
                raise FormulaSyntaxError("variables are numbered from x1", p, self.text)
            if self.peek() == "(":
                raise FormulaSyntaxError(f"variable {tok} cannot be applied", self.pos(), self.text)
            return Var(idx)
        args: list = []
        if self.peek() == "(":
            self.take("(")
            if self.peek() != ")":
                args.append(self.formula())
                while self.peek() == ",":
                    self.take(",")
                    args.append(self.formula())
            self.take(")")
        if self.lang is not None:
            ar = self.lang.arity
            if tok not in ar:
                raise FormulaSyntaxError(f"unknown connective {tok!r}", p, self.text)
            if ar[tok] != len(args):
                raise FormulaSyntaxError(f"{tok} takes {ar[tok]} argument(s), got {len(args)}", p, self.text)
        return App(tok, tuple(args))

    def flist(self, stop) -> list:
        out = []
        if self.peek() in stop:
            return out
        out.append(self.formula())
        while self.peek() == ",":
            self.take(",")
            out.append(self.formula())
        return out

    def item(self) -> Item:
        left = self.flist({"=>", None})
        if self.peek() == "=>":
            self.take("=>")
            right = self.flist({None})
            return Sequent(tuple(left), tuple(right))
        if len(left) != 1:
            raise FormulaSyntaxError("expected '=>' after a formula list", self.pos(), self.text)
        if self.peek() == "=":
            self.take("=")
            return Equation(left[0], self.formula())
        return left[0]

    def done(self):
        if self.i != len(self.toks):
            raise FormulaSyntaxError(f"trailing input {self.peek()!r}", self.pos(), self.text)


def parse_formula(lang: Language | None, text: str) -> Formula:
    p = _Parser(lang, text)
    phi = p.formula()
    p.done()
    return phi


def parse_item(lang: Language | None, text: str) -> Item:
    p = _Parser(lang, text)
    it = p.item()
    p.done()
    return it


# ---------------------------------------------------------------------------
# truncation universe

@dataclass(frozen=True)
class TruncationParams:
    n: int = 2                      # number of variables
    d: int = 3                      # maximum formula depth
    k: int = 8                      # maximum derivation rounds
    premise_bound: int = 10_000     # bound on leftover-variable enumeration

    def __post_init__(self):
        if self.n < 1 or self.d < 0 or self.k < 1 or self.premise_bound < 1:
            raise ValueError(f"bad truncation {self}")

    def echo(self) -> str:
        return f"n={self.n} d={self.d} k={self.k} premise_bound={self.premise_bound}"


def enumerate_formulas(lang: Language, n: int, d: int, guard: int = ENUMERATION_GUARD) -> list[Formula]:
    """All formulas of depth <= d over x1..xn, by depth and then by generation order."""
    out: list[Formula] = [Var(i) for i in range(1, n + 1)]
    for level in range(1, d + 1):
        below = list(out)
        for c, ar in lang.connectives:
            if ar == 0:
                if level == 1:
                    out.append(App(c))
                continue
            for args in product(below, repeat=ar):
                # at least one argument sits exactly one level down
                if any(depth(a) == level - 1 for a in args):
                    out.append(App(c, args))
                    if len(out) > guard:
                        raise OverflowError(f"more than {guard} formulas at depth <= {d}")
    return out


def enumerate_items(lang: Language, kind: str, n: int, d: int, types: Sequence[tuple[int, int]] = (),
                    guard: int = ENUMERATION_GUARD) -> list[Item]:
    fms = enumerate_formulas(lang, n, d, guard)
    if kind == FORMULAS:
        return fms
    if kind == EQUATIONS:
        if len(fms) ** 2 > guard:
            raise OverflowError("equation universe exceeds the guard")
        return [Equation(a, b) for a in fms for b in fms]
    if kind == SEQUENTS:
        out = []
        for m, k in types:
            if len(fms) ** (m + k) > guard:
                raise OverflowError(f"sequents of type {(m, k)} exceed the guard")
            for parts in product(fms, repeat=m + k):
                out.append(Sequent(tuple(parts[:m]), tuple(parts[m:])))
        return out
    raise ValueError(f"unknown domain kind {kind!r}")


# ---------------------------------------------------------------------------
# substitutions

def substitute(phi: Formula, image) -> Formula:
    """Replace each variable ``xi`` by ``image[i]`` (a mapping or a Substitution);
    variables without an image are left alone."""
    if isinstance(phi, Var):
        got = image.get(phi.index)
        return phi if got is None else got
    if not phi.args:
        return phi
    return App(phi.op, tuple(substitute(a, image) for a in phi.args))


@dataclass(frozen=True)
class Substitution:
    images: tuple                   # images[i] is the value of x(i+1)

    @classmethod
    def identity(cls, n: int) -> "Substitution":
        return cls(tuple(Var(i) for i in range(1, n + 1)))

    @classmethod
    def from_map(cls, n: int, mapping: dict) -> "Substitution":
        return cls(tuple(mapping.get(i, Var(i)) for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def get(self, i: int):
        return self.images[i - 1] if 1 <= i <= len(self.images) else None

    def __call__(self, it: Item) -> Item:
        return apply_substitution(self, it)

    def depth(self) -> int:
        return max((depth(phi) for phi in self.images), default=0)

    def is_renaming(self) -> bool:
        return all(isinstance(phi, Var) for phi in self.images)

    def __str__(self):
        return "[" + ", ".join(f"x{i + 1}->{format_formula(p)}" for i, p in enumerate(self.images)) + "]"


def apply_substitution(sigma: Substitution, it: Item) -> Item:
    return map_item(lambda phi: substitute(phi, sigma), it)


def compose(sigma: Substitution, tau: Substitution) -> Substitution:
    """``(sigma o tau)(x) = sigma(tau(x))``."""
    if sigma.n != tau.n:
        raise ValueError("substitutions over different variable lists")
    return Substitution(tuple(substitute(phi, sigma) for phi in tau.images))


def enumerate_substitutions(lang: Language, n: int, d: int, guard: int = ENUMERATION_GUARD) -> list[Substitution]:
    fms = enumerate_formulas(lang, n, d, guard)
    if len(fms) ** n > guard:
        raise OverflowError(f"{len(fms)}^{n} substitutions exceed the guard")
    return [Substitution(imgs) for imgs in product(fms, repeat=n)]


def renamings(n: int) -> list[Substitution]:
    """Substitutions sending variables to variables: a finite submonoid."""
    return [Substitution(tuple(Var(i) for i in imgs)) for imgs in product(range(1, n + 1), repeat=n)]


def kappa(kind: str, n: int, blocks: Sequence[Iterable[int]] | None = None,
          targets: Sequence[int] | None = None) -> Substitution:
    """The collapsing substitutions: every variable of block ``i`` goes to ``targets[i]``.

    ``kind`` is ``"x"`` (one block), ``"x~y"`` (two blocks) or ``"tuple"``.
    Targets default to ``x1, x2, ...`` in block order.
    """
    if blocks is None:
        if kind != "x":
            raise ValueError(f"kappa {kind} needs a partition")
        blocks = [range(1, n + 1)]
    blocks = [sorted(set(b)) for b in blocks]
    want = {"x": 1, "x~y": 2}.get(kind)
    if kind not in ("x", "x~y", "tuple"):
        raise ValueError(f"unknown kappa kind {kind!r}")
    if want is not None and len(blocks) != want:
        raise ValueError(f"kappa {kind} takes {want} block(s), got {len(blocks)}")
    flat = [v for b in blocks for v in b]
    if sorted(flat) != list(range(1, n + 1)) or any(not b for b in blocks):
        raise ValueError(f"blocks {blocks} do not partition x1..x{n}")
    targets = list(targets) if targets is not None else list(range(1, len(blocks) + 1))
    if len(targets) != len(blocks) or len(set(targets)) != len(targets):
        raise ValueError("one distinct target per block is required")
    mapping = {}
    for b, t in zip(blocks, targets):
        for v in b:
            mapping[v] = Var(t)
    return Substitution.from_map(n, mapping)


# ---------------------------------------------------------------------------
# translations

@dataclass(frozen=True)
class Translation:
    source: Language
    target: Language
    templates: tuple                # (name, template formula over x1..x_arity)

    def __post_init__(self):
        ar = self.source.arity
        got = dict(self.templates)
        missing = set(ar) - set(got)
        if missing:
            raise ValueError(f"translation misses connectives {sorted(missing)}")
        for name, tpl in self.templates:
            if name not in ar:
                raise ValueError(f"{name} is not a source connective")
            if any(v > ar[name] for v in formula_vars(tpl)):
                raise ValueError(f"template for {name} uses a variable beyond its arity")
            if not in_language(tpl, self.target):
                raise ValueError(f"template for {name} leaves the target language")

    @classmethod
    def from_dict(cls, source: Language, target: Language, templates: dict) -> "Translation":
        return cls(source, target, tuple(templates.items()))

    @property
    def table(self) -> dict:
        return dict(self.templates)

    def formula(self, phi: Formula) -> Formula:
        return translate_formula(self, phi)

    def __call__(self, it: Item) -> Item:
        return translate(self, it)

    def substitution(self, sigma: Substitution) -> Substitution:
        return Substitution(tuple(self.formula(p) for p in sigma.images))

    def then(self, other: "Translation") -> "Translation":
        return Translation(self.source, other.target,
                           tuple((c, other.formula(t)) for c, t in self.templates))


def translate_formula(tau: Translation, phi: Formula) -> Formula:
    table = tau.table

    def go(p):
        if isinstance(p, Var):
            return p
        args = [go(a) for a in p.args]
        return substitute(table[p.op], {i + 1: a for i, a in enumerate(args)})

    return go(phi)


def translate(tau: Translation, it: Item) -> Item:
    return map_item(lambda phi: translate_formula(tau, phi), it)


def connective_translation(source: Language, target: Language, rename: dict[str, str]) -> Translation:
    """Translation sending each connective ``c`` to ``rename[c](x1, .., xk)``."""
    return Translation(source, target, tuple(
        (c, App(rename[c], tuple(Var(i) for i in range(1, ar + 1)))) for c, ar in source.connectives))


def disjoint_union(L1: Language, L2: Language) -> tuple[Language, Translation, Translation]:
    """Tag connectives ``1:name`` and ``2:name``; the two tagged copies share only variables."""
    L = Language(tuple((f"1:{c}", ar) for c, ar in L1.connectives)
                 + tuple((f"2:{c}", ar) for c, ar in L2.connectives))
    inj1 = connective_translation(L1, L, {c: f"1:{c}" for c in L1.names})
    inj2 = connective_translation(L2, L, {c: f"2:{c}" for c in L2.names})
    return L, inj1, inj2


def inclusion(L: Language, big: Language) -> Translation:
    return connective_translation(L, big, {c: c for c in L.names})


# ---------------------------------------------------------------------------
# matching

def match(pattern: Formula, term: Formula, binding: dict | None = None) -> dict | None:
    """One-sided matching: extend ``binding`` so that pattern instantiates to term."""
    b = {} if binding is None else dict(binding)
    stack = [(pattern, term)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            got = b.get(p.index)
            if got is None:
                b[p.index] = t
            elif got != t:
                return None
        elif isinstance(t, Var) or p.op != t.op or len(p.args) != len(t.args):
            return None
        else:
            stack.extend(zip(p.args, t.args))
    return b


def match_item(pattern: Item, it: Item, binding: dict | None = None) -> dict | None:
    if type(pattern) is Sequent or type(it) is Sequent:
        if type(pattern) is not type(it) or pattern.type != it.type:
            return None
    elif (type(pattern) is Equation) != (type(it) is Equation):
        return None
    b = binding
    for p, t in zip(components(pattern), components(it)):
        b = match(p, t, b if b is not None else {})
        if b is None:
            return None
    return b if b is not None else dict(binding or {})


# ---------------------------------------------------------------------------
# monoid amalgamation (truncated)

@dataclass
class MonoidAmalgamReport:
    ok: bool
    cases: int
    failures: list = field(default_factory=list)
    sizes: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def monoid_amalgam_check(L1: Language, L2: Language, n: int = 2, image_depth: int = 2,
                         compose_check: bool = True) -> MonoidAmalgamReport:
    """Strong amalgamation of substitution monoids over their common fragment, truncated.

    Substitutions of each language are those whose images have depth at most
    ``image_depth``.  ``i1, i2`` embed the common fragment's substitutions and
    ``j1, j2`` embed each side into the union language; all four maps act by
    translating images through connective inclusions.
    """
    L = common_fragment(L1, L2)
    U = union_language(L1, L2)
    i1, i2 = inclusion(L, L1), inclusion(L, L2)
    j1, j2 = inclusion(L1, U), inclusion(L2, U)
    S, S1, S2 = (enumerate_substitutions(X, n, image_depth) for X in (L, L1, L2))
    failures = []
    cases = 0
    for name, j, dom in (("j1", j1, S1), ("j2", j2, S2)):
        imgs = {}
        for s in dom:
            img = j.substitution(s)
            if img in imgs:
                failures.append(f"{name} not injective: {imgs[img]} and {s}")
            imgs[img] = s
        if compose_check:
            for s in dom:
                for t in dom:
                    st = compose(s, t)
                    if st.depth() > image_depth:
                        continue
                    cases += 1
                    if j.substitution(st) != compose(j.substitution(s), j.substitution(t)):
                        failures.append(f"{name} does not preserve {s} o {t}")
            if j.substitution(Substitution.identity(n)) != Substitution.identity(n):
                failures.append(f"{name} moves the identity")
    for s in S:
        cases += 1
        if j1.substitution(i1.substitution(s)) != j2.substitution(i2.substitution(s)):
            failures.append(f"j1 i1 and j2 i2 differ on {s}")
    common = {i1.substitution(s) for s in S}
    common2 = {i2.substitution(s) for s in S}
    for s in S1:
        js = j1.substitution(s)
        for t in S2:
            cases += 1
            equal = js == j2.substitution(t)
            shared = s in common and t in common2 and s == t
            if equal != shared:
                failures.append(f"j1({s}) = j2({t}) is {equal}, common-fragment test says {shared}")
    inter = {j1.substitution(s) for s in S1} & {j2.substitution(t) for t in S2}
    if inter != {j1.substitution(i1.substitution(s)) for s in S}:
        failures.append("intersection of images differs from the image of the common monoid")
    return MonoidAmalgamReport(not failures, cases, failures[:20],
                               {"common": len(S), "left": len(S1), "right": len(S2)})
