"""Loading lattices, quantales, modules, amalgams, systems and combinations from TOML spec files.

The grammar is documented in ``docs/spec-format.md``.  Element references
are by name; file references are resolved relative to the referring file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:      # Python < 3.11
    import tomli as tomllib

from .deduction import DeductionError, DeductiveSystem, InferenceRule
from .lattice import LatticeError, SupLattice
from .qmodule import LEFT, RIGHT, Amalgam, ModuleMorphism, QModule
from .quantale import Quantale, two_element_quantale
from .syntax import FORMULAS, SEQUENTS, FormulaSyntaxError, Language, Translation, TruncationParams, parse_formula, parse_item


class SpecError(ValueError):
    def __init__(self, msg: str, path: str = ""):
        super().__init__(f"{path}: {msg}" if path else msg)
        self.path = path


@dataclass
class Spec:
    path: str
    data: dict

    def section(self, name: str, required: bool = True) -> dict:
        sec = self.data.get(name)
        if sec is None:
            if required:
                raise SpecError(f"missing [{name}] section", self.path)
            return {}
        if not isinstance(sec, dict):
            raise SpecError(f"[{name}] must be a table", self.path)
        return sec

    def ref(self, target: str) -> str:
        return os.path.join(os.path.dirname(self.path), target)

    def error(self, msg: str) -> SpecError:
        return SpecError(msg, self.path)


def read_spec(path: str) -> Spec:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise SpecError("file not found", path) from None
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"malformed TOML: {exc}", path) from None
    return Spec(path, data)


def kind_of(spec: Spec) -> str:
    for name in ("combine", "amalgam", "module", "quantale", "system", "lattice"):
        if name in spec.data:
            return name
    raise spec.error("no known section ([lattice], [quantale], [module], [amalgam], [system], [combine])")


# ---------------------------------------------------------------------------
# algebra

def _names(spec: Spec, sec: dict, key: str) -> list[str]:
    vals = sec.get(key)
    if not isinstance(vals, list) or not all(isinstance(v, str) for v in vals):
        raise spec.error(f"{key} must be a list of names")
    return vals


def lattice_from(spec: Spec) -> SupLattice:
    sec = spec.section("lattice")
    elements = _names(spec, sec, "elements")
    covers = sec.get("covers", [])
    if not all(isinstance(c, list) and len(c) == 2 for c in covers):
        raise spec.error("covers must be a list of [lower, upper] pairs")
    try:
        return SupLattice.from_covers(elements, [tuple(c) for c in covers])
    except LatticeError as exc:
        raise spec.error(str(exc)) from None


def _lookup(spec: Spec, L: SupLattice, name, where: str) -> int:
    try:
        return L.labels.index(name)
    except ValueError:
        raise spec.error(f"{where}: unknown element {name!r}") from None


def _table(spec: Spec, rows, rowL: SupLattice, colL: SupLattice, outL: SupLattice, where: str) -> list[list[int]]:
    if isinstance(rows, dict):
        missing = [x for x in rowL.labels if x not in rows]
        if missing:
            raise spec.error(f"{where}: no row for {missing}")
        rows = [rows[x] for x in rowL.labels]
    if len(rows) != rowL.n or any(not isinstance(r, list) or len(r) != colL.n for r in rows):
        raise spec.error(f"{where}: expected a {rowL.n} x {colL.n} table")
    return [[_lookup(spec, outL, v, where) for v in r] for r in rows]


def quantale_from(spec: Spec) -> Quantale:
    L = lattice_from(spec)
    sec = spec.section("quantale")
    prod = _table(spec, sec.get("product"), L, L, L, "product")
    unit = sec.get("unit")
    return Quantale(L, prod, None if unit is None else _lookup(spec, L, unit, "unit"))


def _scalars(spec: Spec, ref) -> Quantale:
    if ref == "two":
        return two_element_quantale()
    if not isinstance(ref, str):
        raise spec.error("scalars must be \"two\" or a quantale file")
    return quantale_from(read_spec(spec.ref(ref)))


def module_from(spec: Spec) -> QModule:
    sec = spec.section("module")
    Q = _scalars(spec, sec.get("scalars", "two"))
    L = lattice_from(spec)
    side = sec.get("side", LEFT)
    if side not in (LEFT, RIGHT):
        raise spec.error(f"side must be left or right, not {side!r}")
    action = _table(spec, sec.get("action"), Q.lattice, L, L, "action")
    return QModule(Q, L, action, side)


def amalgam_from(spec: Spec) -> Amalgam:
    sec = spec.section("amalgam")
    mods = {}
    for k in ("P", "M", "N"):
        if k not in sec:
            raise spec.error(f"[amalgam] needs {k}")
        mods[k] = module_from(read_spec(spec.ref(sec[k])))
    legs = {}
    for k, src, dst in (("f", "P", "M"), ("g", "P", "N")):
        names = _names(spec, sec, k)
        if len(names) != mods[src].n:
            raise spec.error(f"{k} must list one image per element of {src}")
        table = tuple(_lookup(spec, mods[dst].lattice, v, k) for v in names)
        legs[k] = ModuleMorphism(mods[src], mods[dst], table)
    return Amalgam(mods["P"], mods["M"], mods["N"], legs["f"], legs["g"])


def relation_from(spec: Spec, L: SupLattice) -> list[tuple[int, int]]:
    pairs = spec.data.get("relation", {}).get("pairs", [])
    return [(_lookup(spec, L, a, "relation"), _lookup(spec, L, b, "relation")) for a, b in pairs]


# ---------------------------------------------------------------------------
# logic

def truncation_from(spec: Spec, base: TruncationParams | None = None) -> TruncationParams:
    base = base or TruncationParams()
    sec = spec.section("truncation", required=False)
    unknown = set(sec) - {"n", "d", "k", "premise_bound"}
    if unknown:
        raise spec.error(f"unknown truncation keys {sorted(unknown)}")
    try:
        return TruncationParams(n=sec.get("n", base.n), d=sec.get("d", base.d), k=sec.get("k", base.k),
                                premise_bound=sec.get("premise_bound", base.premise_bound))
    except (TypeError, ValueError) as exc:
        raise spec.error(f"bad truncation: {exc}") from None


def language_from(spec: Spec) -> Language:
    sec = spec.section("language")
    if not all(isinstance(v, int) and v >= 0 for v in sec.values()):
        raise spec.error("[language] maps connective names to arities")
    return Language(tuple(sec.items()))


def _parse(spec: Spec, lang: Language, text, where: str):
    if not isinstance(text, str):
        raise spec.error(f"{where}: expected a formula string")
    try:
        return parse_item(lang, text)
    except FormulaSyntaxError as exc:
        raise spec.error(f"{where}: {exc}") from None


def system_from(spec: Spec) -> DeductiveSystem:
    lang = language_from(spec)
    sec = spec.section("system")
    kind = sec.get("kind", FORMULAS)
    types = tuple(tuple(t) for t in sec.get("types", ()))
    if kind == SEQUENTS and not types:
        raise spec.error("sequent systems must declare types")
    axioms = tuple(_parse(spec, lang, a, f"axiom {i + 1}") for i, a in enumerate(sec.get("axioms", [])))
    rules = []
    for i, r in enumerate(sec.get("rules", [])):
        if not isinstance(r, dict) or "conclusion" not in r:
            raise spec.error(f"rule {i + 1} needs premises and a conclusion")
        prem = tuple(_parse(spec, lang, p, f"rule {i + 1} premise") for p in r.get("premises", []))
        rules.append(InferenceRule(prem, _parse(spec, lang, r["conclusion"], f"rule {i + 1} conclusion")))
    try:
        return DeductiveSystem(lang, kind, axioms, tuple(rules), types,
                               sec.get("name", os.path.splitext(os.path.basename(spec.path))[0]))
    except DeductionError as exc:
        raise spec.error(str(exc)) from None


def translation_from(spec: Spec, table: dict, source: Language, target: Language) -> Translation:
    templates = {}
    for name, text in table.items():
        try:
            templates[name] = parse_formula(target, text)
        except FormulaSyntaxError as exc:
            raise spec.error(f"translation of {name}: {exc}") from None
    try:
        return Translation.from_dict(source, target, templates)
    except ValueError as exc:
        raise spec.error(str(exc)) from None


@dataclass
class CombineSpec:
    left: DeductiveSystem
    right: DeductiveSystem
    params: TruncationParams
    common: DeductiveSystem | None = None
    tau: tuple | None = None
    bridge_depth: int | None = None


def combine_from(spec: Spec) -> CombineSpec:
    sec = spec.section("combine")
    parts = {}
    for k in ("left", "right", "common"):
        if k in sec:
            sub = read_spec(spec.ref(sec[k]))
            parts[k] = system_from(sub)
            parts[k + "_spec"] = sub
    if "left" not in parts or "right" not in parts:
        raise spec.error("[combine] needs left and right")
    params = truncation_from(parts["left_spec"])
    params = truncation_from(spec, params)
    out = CombineSpec(parts["left"], parts["right"], params, bridge_depth=sec.get("bridge_depth"))
    if "common" in parts:
        tr = spec.section("translations")
        if "left" not in tr or "right" not in tr:
            raise spec.error("[translations] needs left and right tables")
        out.common = parts["common"]
        out.tau = (translation_from(spec, tr["left"], out.common.language, out.left.language),
                   translation_from(spec, tr["right"], out.common.language, out.right.language))
    return out
