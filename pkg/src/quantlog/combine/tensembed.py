"""Truncated check of the saturation conditions behind extending a theory along a language expansion.

For a theory ``Phi`` of the small system, ``Phi_bar`` is the set of pairs
``(Omega, Psi)``, with ``Omega`` a set of substitutions of the big language
and ``Psi`` a small theory, such that every ``omega`` in ``Omega`` sends
``Psi`` into the small domain and into ``Phi``.  Pairs whose images leave
the universe are undecided and skipped.
"""

from __future__ import annotations

import random

from ..deduction import act
from ..report import Report
from ..syntax import Substitution, compose, format_set
from .coproduct import CoproductSystem, _substitutions


def _member(C: CoproductSystem, i: int, phi: frozenset, omega, psi) -> bool | None:
    U = C.U
    imgs = act(omega, psi)
    if not U.contains_all(imgs):
        return None
    return all(C.in_D(i, x) for x in imgs) and imgs <= phi


def tensembed_saturation_check(C: CoproductSystem, cap: int = 2, samples: int = 1500, seed: int = 0) -> Report:
    rng = random.Random(seed)
    rep = Report("saturation of Phi_bar along the language expansion", C.params.echo())
    ident = Substitution.identity(C.params.n)
    big = _substitutions(C.language, C.params)
    for i in (1, 2):
        TL = C.theories(i, cap)
        ths = TL.theories
        small = _substitutions(C.sublanguage(i), C.params)
        gamma = lambda x: C.gamma(i, x)

        def omega():
            return frozenset(rng.sample(big, rng.choice((1, 2))))

        def run(sec, draw, trials):
            tries = 0
            while sec.instances < trials and tries < 50 * trials:
                tries += 1
                res = draw()
                if res is None:
                    sec.skipped += 1
                    continue
                ok, msg = res
                sec.check(ok, msg)

        first = rep.add(Report(f"i={i}: join in the first slot"))

        def d_first():
            phi, psi = rng.choice(ths), rng.choice(ths)
            o1, o2 = omega(), omega()
            vals = [_member(C, i, phi, o, psi) for o in (o1 | o2, o1, o2)]
            if None in vals:
                return None
            return vals[0] == (vals[1] and vals[2]), \
                lambda: f"Omega={[str(s) for s in o1 | o2]}, Psi={format_set(psi)}, Phi={format_set(phi)}"

        run(first, d_first, samples)

        second = rep.add(Report(f"i={i}: join in the second slot"))

        def d_second():
            phi, p1, p2 = rng.choice(ths), rng.choice(ths), rng.choice(ths)
            o = omega()
            vals = [_member(C, i, phi, o, x) for x in (gamma(p1 | p2), p1, p2)]
            if None in vals:
                return None
            return vals[0] == (vals[1] and vals[2]), \
                lambda: f"Omega={[str(s) for s in o]}, Psi={format_set(p1)} v {format_set(p2)}, Phi={format_set(phi)}"

        run(second, d_second, samples)

        balance = rep.add(Report(f"i={i}: scalar balance"))
        Ui = C.D(i)
        Uiset = set(Ui)

        def d_balance():
            phi, psi = rng.choice(ths), rng.choice(ths)
            o = omega()
            sigma = frozenset(rng.sample(small, rng.choice((1, 2))))
            moved = act(sigma, psi)
            if not moved <= Uiset:
                return None
            lhs = _member(C, i, phi, o, gamma(moved))
            rhs = _member(C, i, phi, {compose(w, s) for w in o for s in sigma}, psi)
            if lhs is None or rhs is None:
                return None
            return lhs == rhs, \
                lambda: f"Omega={[str(s) for s in o]}, Sigma={[str(s) for s in sigma]}, " \
                        f"Psi={format_set(psi)}, Phi={format_set(phi)}"

        run(balance, d_balance, samples)

        empty = rep.add(Report(f"i={i}: empty joins"))
        least = TL.least
        for phi in ths:
            empty.check(_member(C, i, phi, (), rng.choice(ths)) is True, "empty Omega is not in Phi_bar")
            empty.check(_member(C, i, phi, {ident}, least) == (least <= phi),
                        lambda: f"({{id}}, least) membership is wrong for {format_set(phi)}")
            for _ in range(8):
                o = omega()
                m = _member(C, i, phi, o, least)
                if m is None:
                    empty.skipped += 1
                    continue
                empty.check(m, lambda: f"(Omega, least) not in Phi_bar for {format_set(phi)}")

        inj = rep.add(Report(f"i={i}: Phi -> Phi_bar injective"))
        for a in range(len(ths)):
            for b in range(a + 1, len(ths)):
                p, q = ths[a], ths[b]
                w = (_member(C, i, p, {ident}, p) != _member(C, i, q, {ident}, p)
                     or _member(C, i, q, {ident}, q) != _member(C, i, p, {ident}, q))
                inj.check(w, lambda: f"({{id}}, Phi) separates neither {format_set(p)} nor {format_set(q)}")
    return rep
