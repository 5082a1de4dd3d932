"""Small named systems used by the tests, the acceptance suite and the CLI."""

from __future__ import annotations

from .deduction import DeductiveSystem, InferenceRule
from .syntax import App, Language, Translation, Var, connective_translation

x, y = Var(1), Var(2)

BOX = Language.of(box=1)
DIA = Language.of(dia=1)
CIRC = Language.of(circ=1)
BIN = Language.of(c=2)


def _four(lang: Language, op: str, name: str) -> DeductiveSystem:
    once = App(op, (x,))
    return DeductiveSystem(lang, rules=(InferenceRule((once,), App(op, (once,))),), name=name)


def necessitation() -> DeductiveSystem:
    """{x} / box x, no axioms."""
    return DeductiveSystem(BOX, rules=(InferenceRule((x,), App("box", (x,))),), name="necessitation")


def box4() -> DeductiveSystem:
    return _four(BOX, "box", "box4")


def dia4() -> DeductiveSystem:
    return _four(DIA, "dia", "dia4")


def circ4() -> DeductiveSystem:
    return _four(CIRC, "circ", "circ4")


def projection() -> DeductiveSystem:
    """{c(x, y)} / x, no axioms."""
    return DeductiveSystem(BIN, rules=(InferenceRule((App("c", (x, y)),), x),), name="projection")


def modal_translations() -> tuple[Translation, Translation]:
    """circ |-> box and circ |-> dia."""
    return (connective_translation(CIRC, BOX, {"circ": "box"}),
            connective_translation(CIRC, DIA, {"circ": "dia"}))
