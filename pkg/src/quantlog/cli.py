"""Command line front end.

Exit status: 0 when everything checked passes, 1 when a verification
produced a counterexample, 2 for malformed input or an exceeded guard.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .combine.coproduct import CombineError
from .deduction import DeductionError, closure, theory_lattice
from .lattice import LatticeError, export_dot, validate_lattice
from .qmodule import amalgamated_coproduct, quotient_m, validate_module
from .quantale import quotient_q, validate_quantale
from .report import Report
from .specfile import (
    SpecError,
    amalgam_from,
    combine_from,
    kind_of,
    lattice_from,
    module_from,
    quantale_from,
    read_spec,
    relation_from,
    system_from,
    truncation_from,
)
from .syntax import FormulaSyntaxError, TruncationParams, format_set, parse_item
from .tensor import tensor_product

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _params(args, base: TruncationParams) -> TruncationParams:
    over = {k: getattr(args, k) for k in ("n", "d", "k") if getattr(args, k, None) is not None}
    if getattr(args, "premise_bound", None) is not None:
        over["premise_bound"] = args.premise_bound
    return replace(base, **over) if over else base


def _emit(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish(args, rep: Report) -> int:
    _emit(args, rep.text())
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    spec = read_spec(args.file)
    kind = kind_of(spec)
    rep = Report(f"validate {kind}")
    L = lattice_from(spec)
    r = validate_lattice(L)
    if not r:
        _emit(args, f"invalid lattice: {r.reason} {list(r.witness)}\n")
        return EXIT_ERROR
    rep.check(True, "")
    if kind in ("quantale", "module"):
        r = validate_quantale(quantale_from(spec)) if kind == "quantale" else validate_module(module_from(spec))
        if not r:
            _emit(args, f"invalid {kind}: {r.reason} {list(r.witness)}\n")
            return EXIT_ERROR
        rep.check(True, "")
    rep.note(f"{L.n} elements")
    return _finish(args, rep)


def cmd_quotient(args) -> int:
    spec = read_spec(args.file)
    kind = kind_of(spec)
    if kind == "quantale":
        Q = quantale_from(spec)
        quo, proj = quotient_q(Q, relation_from(spec, Q.lattice))
        L, table = quo.lattice, proj.table
        src = Q.lattice
    elif kind == "module":
        M = module_from(spec)
        quo, proj = quotient_m(M, relation_from(spec, M.lattice))
        L, table = quo.lattice, proj.table
        src = M.lattice
    else:
        raise UsageError("quotient needs a quantale or module file")
    lines = [f"quotient of {kind}: {src.n} -> {L.n} elements"]
    for u in range(src.n):
        lines.append(f"  {src.labels[u]} -> {L.labels[table[u]]}")
    _emit(args, "\n".join(lines) + "\n" + (export_dot(L, "quotient") if args.dot else ""))
    return EXIT_OK


def cmd_tensor(args) -> int:
    M1 = module_from(read_spec(args.right))
    M2 = module_from(read_spec(args.left))
    T = tensor_product(M1, M2, args.method)
    lines = [f"tensor product ({T.method}): {len(T)} elements"]
    for i, m in enumerate(T.members):
        lines.append(f"  t{i}: {T.lattice.labels[i]}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_amalgamate_modules(args) -> int:
    A = amalgam_from(read_spec(args.file))
    AC = amalgamated_coproduct(A)
    rep = Report("amalgamated coproduct of modules")
    r = AC.check(A)
    rep.check(bool(r), lambda: r.reason)
    rep.note(f"|M x N| = {AC.product.module.n}, amalgam has {AC.module.n} elements")
    return _finish(args, rep)


def cmd_close(args) -> int:
    spec = read_spec(args.file)
    S = system_from(spec)
    params = _params(args, truncation_from(spec))
    try:
        phi = [parse_item(S.language, a) for a in args.assume]
    except FormulaSyntaxError as exc:
        raise SpecError(f"--assume: {exc}") from None
    th = closure(S, phi, params)
    flags = [f for f in ("overflow", "budget_hit", "rounds_hit") if getattr(th, f)]
    out = [f"closure of {format_set(phi)} under {S.name} ({params.echo()}):", format_set(th.items)]
    if flags:
        out.append("flags: " + ", ".join(flags))
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_theories(args) -> int:
    spec = read_spec(args.file)
    S = system_from(spec)
    params = _params(args, truncation_from(spec))
    TL = theory_lattice(S, params, args.cap)
    if args.dot:
        _emit(args, export_dot(TL.lattice, "theories"))
        return EXIT_OK
    lines = [f"{len(TL)} theories of {S.name} (generators <= {args.cap}, {params.echo()})"]
    lines += [f"  {format_set(T)}" for T in TL.theories]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _combine(args):
    from .combine import build_amalgam, build_coproduct

    cs = combine_from(read_spec(args.file))
    params = _params(args, cs.params)
    if cs.common is None:
        return build_coproduct(cs.left, cs.right, params), None
    A = build_amalgam(cs.common, cs.tau[0], cs.tau[1], cs.left, cs.right, params, cs.bridge_depth)
    return A.coproduct, A


def cmd_coproduct_logics(args) -> int:
    from .combine import coproduct_embedding, embed_theories, verify_deltapsi

    C, _ = _combine(args)
    rep = Report("coproduct of deductive systems", C.params.echo())
    rep.note(f"language: {', '.join(f'{c}/{a}' for c, a in C.language.connectives)}")
    rep.note(f"|U| = {len(C.U)}")
    for fn in (verify_deltapsi, embed_theories, coproduct_embedding):
        rep.add(fn(C, cap=args.cap))
    return _finish(args, rep)


def cmd_amalgamate_logics(args) -> int:
    from .combine import algebraic_amalgam_embedding, verify_epsilon_embeddings, verify_zetadelta

    _, A = _combine(args)
    if A is None:
        raise UsageError("amalgamate-logics needs a common system and translations")
    rep = Report("amalgamation of deductive systems", A.params.echo())
    rep.note(f"{sum(1 for r in A.theta if r.premises != (r.conclusion,))} active bridge rules "
             f"up to depth {A.bridge_depth}")
    rep.add(verify_zetadelta(A, cap=args.cap))
    rep.add(verify_epsilon_embeddings(A, cap=1))
    rep.add(algebraic_amalgam_embedding(A, cap=args.cap))
    return _finish(args, rep)


def cmd_verify(args) -> int:
    from .suites import ALGEBRAIC, LOGIC

    name = args.suite
    if name in ALGEBRAIC:
        opts = {}
        if args.max_q is not None:
            opts["max_q"] = args.max_q
        if args.max_m is not None:
            opts["max_m"] = opts["max_mn"] = args.max_m
        rep = ALGEBRAIC[name](**opts)
    elif name in LOGIC:
        A = None
        params = _params(args, TruncationParams())
        if args.file:
            C, A = _combine(args)
            params = C.params
            if A is None:
                raise UsageError(f"suite {name} needs an amalgam combine file")
        rep = LOGIC[name](params=params, amalgam=A, cap=args.cap)
    else:
        raise UsageError(f"unknown suite {name!r}")
    return _finish(args, rep)


def cmd_export_dot(args) -> int:
    spec = read_spec(args.file)
    kind = kind_of(spec)
    if kind == "system":
        S = system_from(spec)
        TL = theory_lattice(S, _params(args, truncation_from(spec)), args.cap)
        _emit(args, export_dot(TL.lattice, "theories"))
    else:
        L = lattice_from(spec)
        r = validate_lattice(L)
        if not r:
            _emit(args, f"invalid lattice: {r.reason} {list(r.witness)}\n")
            return EXIT_ERROR
        _emit(args, export_dot(L, kind))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES

    p = argparse.ArgumentParser(prog="quantlog", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")
        return sp

    def trunc(sp):
        sp.add_argument("--n", type=int, help="number of variables")
        sp.add_argument("--d", type=int, help="maximum depth")
        sp.add_argument("--k", type=int, help="maximum forward-chaining rounds")
        sp.add_argument("--premise-bound", type=int, dest="premise_bound")
        sp.add_argument("--cap", type=int, default=2, help="generator cap for theory lattices")

    sp = add("validate", cmd_validate, "check lattice, quantale or module laws")
    sp.add_argument("file")
    sp = add("quotient", cmd_quotient, "quotient by the relation in the file's [relation] section")
    sp.add_argument("file")
    sp.add_argument("--dot", action="store_true")
    sp = add("tensor", cmd_tensor, "tensor product of a right and a left module")
    sp.add_argument("right")
    sp.add_argument("left")
    sp.add_argument("--method", choices=("auto", "powerset", "lazy"), default="auto")
    sp = add("amalgamate-modules", cmd_amalgamate_modules, "amalgamated coproduct of an amalgam file")
    sp.add_argument("file")
    sp = add("close", cmd_close, "closure of assumptions under a system")
    sp.add_argument("file")
    sp.add_argument("--assume", action="append", default=[], help="an assumption, repeatable")
    trunc(sp)
    sp = add("theories", cmd_theories, "list the capped theory lattice")
    sp.add_argument("file")
    sp.add_argument("--dot", action="store_true")
    trunc(sp)
    sp = add("coproduct-logics", cmd_coproduct_logics, "build and verify a coproduct of systems")
    sp.add_argument("file")
    trunc(sp)
    sp = add("amalgamate-logics", cmd_amalgamate_logics, "build and verify an amalgamation of systems")
    sp.add_argument("file")
    trunc(sp)
    sp = add("verify", cmd_verify, "run a named verification suite")
    sp.add_argument("--suite", required=True, choices=sorted(SUITES))
    sp.add_argument("--max-q", type=int, dest="max_q")
    sp.add_argument("--max-m", type=int, dest="max_m")
    sp.add_argument("--file", help="combine file for the logic suites (default: modal fixtures)")
    trunc(sp)
    sp = add("export-dot", cmd_export_dot, "Hasse diagram of a lattice or theory lattice")
    sp.add_argument("file")
    trunc(sp)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (SpecError, UsageError, LatticeError, DeductionError, FormulaSyntaxError, CombineError,
            OverflowError) as exc:
        # SizeGuardError is a LatticeError, OverflowError comes from enumeration guards
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
