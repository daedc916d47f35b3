"""Command line front end. Exit codes: 0 success, 1 domain error, 2 parse error."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import ParseError, ReesError


def _out(args, plain: str, lines: list[str] | None = None):
    if args.format == "lines" and lines is not None:
        print("\n".join(lines))
    else:
        print(plain)


def _automaton(args):
    from .automaton import load_automaton
    return load_automaton(args.automaton)


def _system(args, backend=None):
    from .rees import ActionSystem
    return ActionSystem.from_automaton(_automaton(args), backend or args.backend, depth=args.depth)


def _bool(v) -> str:
    return "true" if v else "false"


# -- self-similar actions

def cmd_verify(args):
    from .engine import verify_axioms
    rep = verify_axioms(_automaton(args), args.depth)
    _out(args, str(rep))
    return 0 if rep.ok else 1


def cmd_act(args):
    from .engine import act, restrict
    aut = _automaton(args)
    word = aut.graph.parse_word(args.word) if args.word.strip() else None
    g = aut.parse_word(args.element, None if word is None else word.range)
    if word is None:
        word = aut.graph.empty(g.domain)
    if args.command == "act":
        print(str(act(aut, g, word)) or "ε")
    else:
        print(str(restrict(aut, g, word)))
    return 0


def cmd_mul(args):
    sysm = _system(args, "words")
    a = sysm.parse_element(args.left)
    b = sysm.parse_element(args.right)
    print(sysm.fmt(sysm.multiply(a, b)))
    return 0


def cmd_orbits(args):
    from .rees import orbits
    orbs = orbits(_system(args))
    _out(args, " ".join("{" + " ".join(o) + "}" for o in orbs), [" ".join(o) for o in orbs])
    return 0


def _verdict(args, name, v, sysm):
    fmt = sysm.fmt_g
    wit = None
    if v.witness is not None:
        x, g, h = v.witness
        wit = f"({x}, {fmt(g) if g is not None else '-'}, {fmt(h) if h is not None else '-'})"
    plain = _bool(v.value) + (f" {wit}" if wit else "")
    if not v.exact:
        plain += f" [approximate, depth {args.depth}]"
    lines = [f"{name}: {_bool(v.value)}", f"exact: {_bool(v.exact)}"]
    if wit:
        lines.append(f"witness: {wit}")
    if v.note:
        lines.append(f"note: {v.note}")
    _out(args, plain, lines)
    return 0


def cmd_cancellative(args):
    from .rees import is_right_cancellative
    sysm = _system(args)
    return _verdict(args, "right cancellative", is_right_cancellative(sysm, args.radius), sysm)


def cmd_symmetric(args):
    from .rees import is_symmetric
    sysm = _system(args)
    return _verdict(args, "symmetric", is_symmetric(sysm, args.radius), sysm)


def cmd_wreath(args):
    from .engine import format_wreath
    aut = _automaton(args)
    gs = [aut.parse_word(args.element)] if args.element else [aut.word(((q, 1),)) for q in aut.states]
    for g in gs:
        print(format_wreath(aut, g))
    return 0


# -- HNN

def cmd_hnn_presentation(args):
    from .hnn import hnn_presentation
    sysm = _system(args)
    reps = {}
    for r in args.rep or []:
        reps[r] = r
    # representatives are given as letters; map each to its orbit's first letter
    if reps:
        from .rees import orbits
        reps = {o[0]: r for o in orbits(sysm) for r in reps if r in o}
    p = hnn_presentation(sysm, reps)
    b = p.group
    lines = [f"generators: {' '.join(p.generators + [s.name for s in p.stable])}"]
    lines += [f"relation: {r}" for r in p.relations + p.stable_relations()]
    for s in p.stable:
        lines.append(f"stable: {s.name} letter={s.letter} transversal={','.join(b.fmt(t) for t in s.transversal)}")
    _out(args, p.display(), lines)
    return 0


def cmd_nf(args):
    from .hnn import britton_normal_form, format_mixed, hnn_normal_form, load_presentation
    p = load_presentation(args.presentation)
    f = hnn_normal_form if args.command == "nf-hnn" else britton_normal_form
    print(format_mixed(p, f(p, args.word)))
    return 0


# -- associated inverse semigroup

def cmd_ais(args):
    from . import assoc
    if args.automaton in ("P1", "P2", "P3", "P4"):
        sysm = assoc.polycyclic(int(args.automaton[1]))
    else:
        sysm = _system(args)
    s = assoc.parse_ais(sysm, args.left)
    op = args.op
    if op == "inv":
        print(assoc.format_ais(sysm, assoc.ais_inverse(sysm, s)))
    elif op == "gauge":
        print(_bool(assoc.gauge_member(s)))
    elif op == "idempotent":
        print(_bool(assoc.ais_is_idempotent(sysm, s)))
    else:
        if args.right is None:
            raise ParseError(f"ais {op} needs --right")
        t = assoc.parse_ais(sysm, args.right)
        if op == "mul":
            print(assoc.format_ais(sysm, assoc.ais_multiply(sysm, s, t)))
        else:
            print(_bool(assoc.ais_leq(sysm, s, t)))
    return 0


# -- K-theory

def _semigroup(args):
    from .rook import builtin_semigroup, parse_semigroup
    if getattr(args, "builtin", None):
        return builtin_semigroup(args.builtin)
    return parse_semigroup(Path(args.table).read_text(encoding="utf-8"), Path(args.table).stem)


def cmd_kgroup(args):
    from .graph import parse_graph
    from .ktheory import a_presentation, cuntz_graph, k_group, k_group_cuntz_krieger
    if args.ck:
        print(k_group_cuntz_krieger(parse_graph(Path(args.ck).read_text(encoding="utf-8"))))
        return 0
    if args.builtin and args.builtin.startswith("Cuntz:"):
        try:
            n = int(args.builtin.split(":", 1)[1])
        except ValueError:
            raise ParseError(f"bad builtin {args.builtin!r}") from None
        if n < 1:
            raise ReesError("Cuntz:n needs n >= 1")
        print(k_group_cuntz_krieger(cuntz_graph(n)))
        return 0
    S = _semigroup(args)
    g = k_group(S)
    _out(args, str(g), a_presentation(S).lines() + [f"K: {g}"])
    return 0


def cmd_trace(args):
    from .ktheory import parse_trace, trace_on_k, validate_trace
    S = _semigroup(args)
    tau = parse_trace(Path(args.trace).read_text(encoding="utf-8"), S)
    rep = validate_trace(S, tau)
    if not rep:
        print(str(rep))
        return 1
    vals = trace_on_k(S, tau)
    _out(args, " ".join(f"{k}={v}" for k, v in vals.items()), [f"{k} {v}" for k, v in vals.items()])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reeskit", description="Self-similar actions, Rees monoids and K-groups.")
    p.add_argument("--version", action="version", version=f"reeskit {__version__}")
    p.add_argument("--format", choices=("plain", "lines"), default="plain")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "lines"), default=argparse.SUPPRESS,
                        help="plain (default) or lines, one fact per line")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    def aut(sp, depth=6):
        sp.add_argument("--automaton", required=True, help="automaton file or builtin name")
        sp.add_argument("--depth", type=int, default=depth, help="word depth for equality tests")
        sp.add_argument("--backend", choices=("auto", "table", "z", "words"), default="auto")

    sp = cmd("verify", help="check the self-similarity axioms")
    aut(sp, 4)
    sp.set_defaults(func=cmd_verify)

    for name in ("act", "restrict"):
        sp = cmd(name, help=f"{name} a state word on a word")
        aut(sp)
        sp.add_argument("--element", required=True)
        sp.add_argument("--word", required=True)
        sp.set_defaults(func=cmd_act)

    sp = cmd("mul", help="product of two elements WORD|GTOKENS")
    aut(sp)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.set_defaults(func=cmd_mul)

    for name, fn in (("orbits", cmd_orbits), ("cancellative", cmd_cancellative),
                     ("symmetric", cmd_symmetric), ("wreath", cmd_wreath)):
        sp = cmd(name)
        aut(sp)
        sp.add_argument("--radius", type=int, default=4, help="word radius when G is infinite")
        if name == "wreath":
            sp.add_argument("--element")
        sp.set_defaults(func=fn)

    sp = cmd("hnn-presentation")
    aut(sp)
    sp.add_argument("--rep", action="append", help="orbit representative letter (repeatable)")
    sp.set_defaults(func=cmd_hnn_presentation)

    for name in ("nf-hnn", "nf-britton"):
        sp = cmd(name)
        sp.add_argument("--presentation", required=True, help=".hnn file or builtin name")
        sp.add_argument("--word", required=True)
        sp.set_defaults(func=cmd_nf)

    sp = cmd("ais", help="associated inverse semigroup arithmetic")
    sp.add_argument("op", choices=("mul", "inv", "leq", "gauge", "idempotent"))
    aut(sp)
    sp.add_argument("--left", "--element", dest="left", required=True, help="[WORD|G, WORD] or 0")
    sp.add_argument("--right")
    sp.set_defaults(func=cmd_ais)

    sp = cmd("kgroup")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--table")
    g.add_argument("--ck", help="graph file for the Cuntz-Krieger formula")
    g.add_argument("--builtin", help="In:n, Bn:n, G0:C2, G0:C3, G0:S3 or Cuntz:n")
    sp.set_defaults(func=cmd_kgroup)

    sp = cmd("trace")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--table")
    g.add_argument("--builtin")
    sp.add_argument("--trace", required=True)
    sp.set_defaults(func=cmd_trace)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except (OSError, UnicodeDecodeError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except ReesError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
