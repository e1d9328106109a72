"""Command-line front end.

Exit statuses: 0 success, 2 parse/usage error, 3 invalid filtration,
4 domain error, 5 enumeration cap exceeded, 1 internal error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from fractions import Fraction

from . import core, persistence, rigidity
from .errors import DomainError, EnumerationCapExceeded, RigidityError, ValidationError
from .formats import FormatError, fmt_q, format_cycle, parse_cycle, parse_q, parse_simplex, read_filtration, write_filtration
from .persistence import FieldSpec

EXIT_USAGE, EXIT_INVALID, EXIT_DOMAIN, EXIT_CAP, EXIT_INTERNAL = 2, 3, 4, 5, 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _prime(text: str) -> FieldSpec:
    try:
        return FieldSpec(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a prime") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        v = 0
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not a positive integer")
    return v


def _rational(text: str) -> Fraction:
    try:
        q = parse_q(text)
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not isinstance(q, Fraction):
        raise argparse.ArgumentTypeError("expected a finite rational")
    return q


def _bar_spec(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected 'a,b'")
    try:
        return parse_q(parts[0]), parse_q(parts[1])
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--field", type=_prime, default=FieldSpec(2), metavar="P",
                        help="prime coefficient field (default 2)")
    shared.add_argument("--json", action="store_true", help="emit one JSON object")
    shared.add_argument("--cap", type=_positive_int, default=10**6, metavar="N",
                        help="maximum number of orders the oracle may examine")
    shared.add_argument("--threads", type=_positive_int, default=1, metavar="N",
                        help="parallel workers for the oracle")

    parser = _Parser(prog="rigidph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_text):
        p = sub.add_parser(name, parents=[shared], help=help_text)
        p.add_argument("file", help="filtration file")
        return p

    cmd("check", "validate a filtration file")
    p = cmd("barcode", "barcode with birth/terminal simplices")
    p.add_argument("--dim", type=int)
    for name, text in [("lifespan", "birth, termination scale and terminal simplex of a cycle"),
                       ("rigidity", "rigidity radius certificate of a cycle"),
                       ("breaking", "first break of terminal rigidity")]:
        cmd(name, text).add_argument("--cycle", required=True)
    p = cmd("sigma", "exact set of terminal simplices under eps-perturbations")
    p.add_argument("--cycle", required=True)
    p.add_argument("--epsilon", type=_rational, required=True)
    p.add_argument("--method", choices=("prefix", "enumerate"), default="prefix")
    p.add_argument("--all-witnesses", action="store_true")
    p = cmd("bar-rigidity", "barcode-level rigidity hypotheses for one bar")
    p.add_argument("--bar", type=_bar_spec, required=True, metavar="A,B")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--epsilon", type=_rational, required=True)
    p = cmd("perturb", "write an eps-perturbation realizing a swap or block order")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--swap", metavar="S1,S2")
    group.add_argument("--block", metavar="S1,S2,...")
    p.add_argument("--perm", metavar="I,J,...", help="block indices from lowest to highest new value")
    p.add_argument("--epsilon", type=_rational, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--bar", type=_bar_spec, metavar="A,B", help="also resolve this bar's match")
    p.add_argument("--dim", type=int)
    return parser


# -- rendering ----------------------------------------------------------------

def _s(s):
    return None if s is None else list(s.vertices)


def _lbl(s):
    return "none" if s is None else s.label()


def _order(order):
    return ",".join(s.label() for s in order)


def _bar_json(bar):
    return {"dim": bar.dimension, "a": fmt_q(bar.a), "b": fmt_q(bar.b),
            "birth": _s(bar.birth_simplex), "terminal": _s(bar.terminal_simplex)}


def _bar_text(bar):
    return f"[{fmt_q(bar.a)}, {fmt_q(bar.b)}) birth {_lbl(bar.birth_simplex)} terminal {_lbl(bar.terminal_simplex)}"


def _bool(x):
    return "true" if x else "false"


# -- commands -------------------------------------------------------------------

def _check(f, args):
    rho = core.injectivity_radius(f) if len(f.complex) > 1 else None
    data = {"closed": True, "injective": True, "monotone": True, "simplices": len(f.complex),
            "dimension": f.complex.dimension, "rho": None if rho is None else fmt_q(rho),
            "generic": core.is_generic(f)}
    text = [f"closed: {_bool(True)}", f"injective: {_bool(True)}", f"monotone: {_bool(True)}",
            f"simplices: {len(f.complex)}", f"dimension: {f.complex.dimension}",
            f"rho: {'undefined' if rho is None else fmt_q(rho)}", f"generic: {_bool(data['generic'])}"]
    return data, text


def _barcode(f, args):
    R = persistence.reduce(f.complex, f.order, args.field)
    dims = [args.dim] if args.dim is not None else range(f.complex.dimension + 1)
    bars = [bar for n in dims for bar in persistence.barcode(R, f, n)]
    data = {"field": args.field.p, "bars": [_bar_json(b) for b in bars]}
    text = [f"field: {args.field.p}"] + [f"dim {b.dimension}: {_bar_text(b)}" for b in bars]
    return data, text


def _lifespan(f, args):
    alpha = parse_cycle(args.cycle)
    R = persistence.reduce(f.complex, f.order, args.field)
    life = persistence.class_lifespan(R, f, alpha)
    data = {"cycle": format_cycle(parse_cycle(args.cycle)), "a": fmt_q(life.a), "b": fmt_q(life.b),
            "birth_simplex": _s(life.birth_simplex), "terminal_simplex": _s(life.terminal_simplex)}
    text = [f"cycle: {data['cycle']}", f"a: {data['a']}", f"b: {data['b']}",
            f"birth simplex: {_lbl(life.birth_simplex)}", f"terminal simplex: {_lbl(life.terminal_simplex)}"]
    return data, text


def _rigidity(f, args):
    cert = rigidity.rigidity_radius(f, parse_cycle(args.cycle), args.field)
    data = {"cycle": format_cycle(parse_cycle(args.cycle)), "a": fmt_q(cert.a), "b": fmt_q(cert.b),
            "R_u": fmt_q(cert.R_u), "R_l": fmt_q(cert.R_l), "epsilon_star": fmt_q(cert.epsilon_star),
            "limiting": list(cert.limiting), "terminal_simplex": _s(cert.terminal_simplex)}
    text = [f"cycle: {data['cycle']}", f"a: {data['a']}", f"b: {data['b']}",
            f"R_u: {data['R_u']}", f"R_l: {data['R_l']}", f"epsilon*: {data['epsilon_star']}",
            f"limiting: {', '.join(cert.limiting)}", f"terminal simplex: {_lbl(cert.terminal_simplex)}"]
    return data, text


def _sigma(f, args):
    res = rigidity.sigma_epsilon(f, parse_cycle(args.cycle), args.epsilon, args.cap, args.field,
                                 method=args.method, all_witnesses=args.all_witnesses,
                                 workers=args.threads)
    members = res.terminal_simplices
    data = {"epsilon": fmt_q(res.epsilon), "in_domain": res.in_domain, "size": len(members),
            "terminal_simplices": [_s(d) for d in members],
            "witnesses": [{"terminal": _s(d), "order": [_s(s) for s in res.witnesses[d]]} for d in members],
            "orders_examined": res.orders_examined, "method": res.method}
    text = [f"epsilon: {data['epsilon']}", f"in domain: {_bool(res.in_domain)}",
            f"|Sigma|: {len(members)}", "Sigma: {" + ", ".join(d.label() for d in members) + "}"]
    for d in members:
        text.append(f"witness {d.label()}: {_order(res.witnesses[d])}")
    if res.all_witnesses is not None:
        data["all_witnesses"] = [{"terminal": _s(d), "orders": [[_s(s) for s in o] for o in res.all_witnesses[d]]}
                                 for d in members]
        for d in members:
            for o in res.all_witnesses[d]:
                text.append(f"order {d.label()}: {_order(o)}")
    text += [f"orders examined: {res.orders_examined}", f"method: {res.method}"]
    return data, text


def _breaking(f, args):
    rep = rigidity.breaking_analysis(f, parse_cycle(args.cycle), args.cap, args.field, workers=args.threads)
    opt = lambda q: None if q is None else fmt_q(q)
    data = {"cycle": format_cycle(parse_cycle(args.cycle)), "a": fmt_q(rep.a), "b": fmt_q(rep.b), "t0": opt(rep.t0),
            "delta1": _s(rep.delta1), "probe": opt(rep.probe),
            "sigma_above": [_s(s) for s in rep.sigma_above],
            "new_terminals": [_s(s) for s in rep.new_terminals],
            "partner_candidates": [_s(s) for s in rep.partner_candidates],
            "partner_prediction": _s(rep.partner_prediction),
            "classification": rep.classification, "prediction_agrees": rep.prediction_agrees}
    if rep.t0 is None:
        text = [f"cycle: {data['cycle']}", f"a: {data['a']}", f"b: {data['b']}",
                "t0: none (terminal simplex rigid on the whole domain)", f"delta1: {rep.delta1.label()}"]
        return data, text
    agree = "agrees" if rep.prediction_agrees else "disagrees"
    text = [f"cycle: {data['cycle']}", f"a: {data['a']}", f"b: {data['b']}", f"t0: {data['t0']}",
            f"delta1: {rep.delta1.label()}", f"probe epsilon: {data['probe']}",
            "Sigma above t0: {" + ", ".join(s.label() for s in rep.sigma_above) + "}",
            "new terminals (oracle): {" + ", ".join(s.label() for s in rep.new_terminals) + "}",
            "partner candidates: {" + ", ".join(s.label() for s in rep.partner_candidates) + "}",
            f"partner prediction: {_lbl(rep.partner_prediction)}",
            f"classification: {rep.classification}",
            f"prediction vs oracle: {agree}"]
    return data, text


def _bar_rigidity(f, args):
    a, b = args.bar
    bar = rigidity.find_bar(f, args.dim, a, b, args.field)
    v = rigidity.bar_rigidity_check(f, bar, args.epsilon, args.field)
    data = {"bar": _bar_json(bar), "epsilon": fmt_q(v.epsilon), "narrow_enough": v.narrow_enough,
            "separated": v.separated, "violating_bars": [_bar_json(x) for x in v.violating_bars],
            "within_r_bounds": v.within_r_bounds, "R_u": fmt_q(v.R_u), "R_l": fmt_q(v.R_l),
            "hypotheses_ok": v.hypotheses_ok, "rigid": v.rigid}
    text = [f"bar: {_bar_text(bar)}", f"epsilon: {data['epsilon']}",
            f"eps < (b-a)/4: {_bool(v.narrow_enough)}", f"separated: {_bool(v.separated)}"]
    text += [f"  violates separation: {_bar_text(x)}" for x in v.violating_bars]
    text += [f"R_u: {data['R_u']}", f"R_l: {data['R_l']}",
             f"eps <= min(R_u, R_l)/2: {_bool(v.within_r_bounds)}", f"rigid: {_bool(v.rigid)}"]
    return data, text


def _simplex_list(text: str):
    return [parse_simplex(t) for t in text.split(",")]


def _perturb(f, args):
    eps = args.epsilon
    if args.swap is not None:
        pair = _simplex_list(args.swap)
        if len(pair) != 2:
            raise FormatError("--swap expects exactly two simplices 'S1,S2'")
        g = core.switch_pair(f, pair[0], pair[1], eps)
        relation = [pair[1], pair[0]]
    else:
        block = _simplex_list(args.block)
        if args.perm is None:
            raise FormatError("--block needs --perm")
        try:
            perm = [int(x) for x in args.perm.split(",")]
        except ValueError:
            raise FormatError("--perm expects comma-separated integers") from None
        g = core.permute_block(f, block, perm, eps)
        relation = [block[i] for i in perm if 0 <= i < len(block)]
    write_filtration(g, args.out, header=[f"perturbation of size <= {fmt_q(eps)}"])
    data = {"out": args.out, "epsilon": fmt_q(eps), "sup_distance": fmt_q(g.sup_distance(f)),
            "order": [_s(s) for s in g.order], "relation": [_s(s) for s in relation]}
    text = [f"wrote: {args.out}", f"epsilon: {data['epsilon']}", f"|f-g|: {data['sup_distance']}",
            f"g order: {_order(g.order)}", "realized: " + " < ".join(s.label() for s in relation)]
    if args.bar is not None:
        if args.dim is None:
            raise FormatError("--bar needs --dim")
        bar = rigidity.find_bar(f, args.dim, *args.bar, args.field)
        match = rigidity.matched_bar(f, g, bar, eps, args.field)
        data["matched_bar"] = _bar_json(match)
        data["same_terminal"] = match.terminal_simplex == bar.terminal_simplex
        text += [f"matched bar: {_bar_text(match)}", f"same terminal simplex: {_bool(data['same_terminal'])}"]
    return data, text


COMMANDS = {"check": _check, "barcode": _barcode, "lifespan": _lifespan, "rigidity": _rigidity,
            "sigma": _sigma, "breaking": _breaking, "bar-rigidity": _bar_rigidity, "perturb": _perturb}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        f = read_filtration(args.file)
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"invalid filtration: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INVALID
    try:
        data, text = COMMANDS[args.command](f, args)
    except FormatError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"invalid filtration: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INVALID
    except DomainError as exc:
        print(f"domain error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_DOMAIN
    except EnumerationCapExceeded as exc:
        print(f"EnumerationCapExceeded: {exc}", file=stderr)
        return EXIT_CAP
    except RigidityError as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INTERNAL
    if args.json:
        stdout.write(json.dumps({"command": args.command, **data}, indent=2) + "\n")
    else:
        stdout.write("\n".join(text) + "\n")
    return 0


def main():  # pragma: no cover
    raise SystemExit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
