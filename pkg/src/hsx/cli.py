"""Command-line front end.

Exit codes: 0 success, 1 hard error (syntax, invalid input), 2 an honest
Undecided/Unknown/Stuck outcome of the fragment.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import HsxError, ParseError, StuckError, UndecidedError
from . import expansion as xp
from . import expr as ex
from . import loghyp
from . import nested
from . import paths as pth
from . import series
from . import textio
from . import treeexp

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDECIDED = 2


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hsx", description="hyperseries expansion toolkit")
    sub = p.add_subparsers(dest="verb", required=True)

    def with_expr(sp):
        sp.add_argument("expr", help="expression in the hsx grammar")
        sp.add_argument("--json", action="store_true")
        return sp

    with_expr(sub.add_parser("normalize", help="print the expansion normal form"))
    with_expr(sub.add_parser("expand", help="print the expansion tuple of a monomial"))
    sp = with_expr(sub.add_parser("paths", help="enumerate paths"))
    sp.add_argument("--all", action="store_true", help="include non-maximal paths")
    sp = with_expr(sub.add_parser("tree", help="tree expansion"))
    sp.add_argument("--settle", type=int, default=None, metavar="N")
    sp.add_argument("--dot", action="store_true")
    sp = sub.add_parser("cmp", help="compare two expressions")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--json", action="store_true")
    sp = sub.add_parser("deriv", help="derivative of a logarithmic hyperseries")
    sp.add_argument("expr", help="log-series in l[ordinal] atoms, e.g. 'l[0]*l[1]^2'")
    sp.add_argument("--json", action="store_true")
    sp = sub.add_parser("check-coding", help="validate a coding-sequence file")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp = sub.add_parser("probe-admissible", help="finite-horizon admissibility probe")
    sp.add_argument("file")
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--samples", default="1/2,1,2")
    sp.add_argument("--json", action="store_true")
    sp = sub.add_parser("unfold", help="unfold a registered nested atom")
    sp.add_argument("file", help="coding-sequence file; registered under its basename")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--rank", default=None)
    sp.add_argument("--json", action="store_true")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (UndecidedError, StuckError) as e:
        print(f"undecided: {e}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (ParseError, HsxError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def _dispatch(args) -> int:
    if args.verb == "normalize":
        v = textio.parse_number(args.expr)
        out = textio.print_number(v)
        print(json.dumps({"normal": out}) if args.json else out)
        return EXIT_OK

    if args.verb == "expand":
        v = textio.parse_number(args.expr)
        if len(v.terms) != 1 or v.terms[0][0] != 1:
            raise ValueError("expand wants a single monomial")
        t = xp.expand(v.terms[0][1])
        d = xp.tuple_as_dict(t)
        if args.json:
            print(json.dumps(d, indent=2))
        else:
            print(", ".join(f"{k}={x}" for k, x in d.items()))
        return EXIT_OK

    if args.verb == "paths":
        v = textio.parse_number(args.expr)
        allp = pth.enumerate_paths(v)
        if not args.all:
            maximal = []
            for p in allp:
                if not any(q is not p and len(q) > len(p) and q.entries[: len(p)] == p.entries for q in allp):
                    maximal.append(p)
            allp = maximal
        rows = []
        for p in allp:
            entries = [
                {"coeff": str(c), "mono": textio.print_monomial(m)} for c, m in p.entries
            ]
            cls = [str(pth.classify_index(p, i)) for i in range(len(p))]
            rows.append({"entries": entries, "classification": cls})
        if args.json:
            print(json.dumps(rows, indent=2))
        else:
            for row in rows:
                line = ", ".join(f"{e['coeff']}*{e['mono']}" for e in row["entries"])
                print(f"[{line}]  {' '.join(row['classification'])}")
        return EXIT_OK

    if args.verb == "tree":
        v = textio.parse_number(args.expr)
        if args.settle is not None:
            tree = treeexp.settle(v, args.settle)
            desc = treeexp.Description(tree, {})
        else:
            desc = treeexp.tree_expansion(v)
        if args.dot:
            print(treeexp.to_dot(desc))
        else:
            print(treeexp.to_json(desc))
        return EXIT_OK

    if args.verb == "cmp":
        f = textio.parse_number(args.left)
        g = textio.parse_number(args.right)
        c = series.compare_series(f, g)
        name = {-1: "less", 0: "equal", 1: "greater", None: "undecided"}[c]
        print(json.dumps({"order": name}) if args.json else name)
        return EXIT_UNDECIDED if c is None else EXIT_OK

    if args.verb == "deriv":
        s = _parse_log_series(args.expr)
        d = loghyp.derive(s)
        out = _print_log_series(d)
        print(json.dumps({"derivative": out}) if args.json else out)
        return EXIT_OK

    if args.verb == "check-coding":
        seq = _load_coding(args.file)
        report = nested.validate(seq)
        ok = nested.validation_ok(report)
        if args.json:
            print(json.dumps([v.__dict__ for v in report], indent=2))
        else:
            for v in report:
                where = "period" if v.level < 0 else f"level {v.level}"
                print(f"({v.condition}) {where}: {v.state}  {v.detail}")
        return EXIT_OK if ok else EXIT_ERROR

    if args.verb == "probe-admissible":
        seq = _load_coding(args.file)
        samples = tuple(Fraction(s) for s in args.samples.split(","))
        res = nested.probe_admissible(seq, args.depth, samples)
        if args.json:
            print(json.dumps({"state": res.state, "witness": res.witness}))
        else:
            print(res.state if not res.witness else f"{res.state}: {res.witness}")
        if res.state == "unknown":
            return EXIT_UNDECIDED
        return EXIT_OK if res.state == "consistent" else EXIT_ERROR

    if args.verb == "unfold":
        seq = _load_coding(args.file)
        import os
        name = os.path.splitext(os.path.basename(args.file))[0]
        rank = textio.parse_number(args.rank) if args.rank else None
        h = nested.register(seq, name, rank)
        v = nested.unfold(h, args.k)
        out = textio.print_number(v)
        print(json.dumps({"unfolded": out}) if args.json else out)
        return EXIT_OK

    raise ValueError(f"unknown verb {args.verb!r}")


def _load_coding(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return textio.parse_coding(fh.read())


# minimal log-series reader/printer for the deriv verb


def _parse_log_series(text: str):
    from .textio import _Scanner, ParseError
    sc = _Scanner(text)
    terms = []
    sign = 1
    while True:
        sc.skip_ws()
        coeff = Fraction(sign)
        if sc.peek().isdigit():
            coeff *= sc.rational()
            sc.eat("*")
        mono = loghyp.LOG_ONE
        while sc.eat("l["):
            g = textio._parse_ord(sc) if sc.peek() != "0" else (sc.eat("0"), textio.ords.ZERO)[1]
            sc.expect("]")
            e = 1
            if sc.eat("^"):
                s = -1 if sc.eat("-") else 1
                e = s * sc.nat()
            mono = loghyp.mono_mul(mono, loghyp.ell(g, e))
            if not sc.eat("*"):
                break
        terms.append((coeff, mono))
        if sc.eat("+"):
            sign = 1
        elif sc.eat("-"):
            sign = -1
        else:
            break
    sc.skip_ws()
    if sc.pos != len(text):
        raise ParseError("trailing input", None)
    return loghyp.log_series(terms)


def _print_log_series(s) -> str:
    from .ordinal import print_ordinal
    if s.is_zero():
        return "0"
    parts = []
    for idx, (c, m) in enumerate(s.terms):
        factors = []
        for g, e in m.powers:
            atom = f"l[{print_ordinal(g)}]"
            factors.append(atom if e == 1 else f"{atom}^{e}")
        for g, e in m.sym:
            atom = f"invp[{print_ordinal(g)}]"
            factors.append(atom if e == 1 else f"{atom}^{e}")
        body = "*".join(factors) if factors else "1"
        mag = abs(c)
        if mag != 1 or not factors:
            body = f"{mag}*{body}" if factors else str(mag)
        if idx == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


if __name__ == "__main__":
    sys.exit(main())
