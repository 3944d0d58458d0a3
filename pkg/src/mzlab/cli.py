"""mz-lab command line.

Exit codes: 0 success, 1 property violated or witness found, 2 input
error, 3 inconclusive (cap, bound or truncation order too small).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import InconclusiveError, InputError, MZLabError, UnsupportedError
from .jordan import (eventual_period_certificate, jc_decompose, jordan_block_check,
                     nilpotence_index, roots_of_unity_orders)
from .locfin import cyclic_space, d_degree, detect_periodicity, normalize_endomorphism
from .mzspace import (DiagonalSpec, image_membership_bounded, image_membership_diagonal,
                      mz_falsify, radical_membership)
from .operators import Derivation, EDerivation, Endomorphism, graded_decompose, iterate_operator
from .parse import (Context, infer_nvars, parse_expr, parse_matrix, parse_operator,
                    parse_subspace, parse_vector)
from .repro import REGISTRY, run_case
from .report import Report
from .rings import GF, QQ, LocalSeries, TruncSeries, formal_inverse

OK, VIOLATION, INPUT_ERROR, INCONCLUSIVE = 0, 1, 2, 3

DEFAULTS = {"order": 32, "cap": 64, "mmax": 50, "m0": 1, "imax": 10, "char": 0}
COMMON_KEYS = ("machine", "char", "order", "cap", "mmax", "nvars", "series", "config")
_INT_KEYS = {"order", "cap", "mmax", "m0", "m", "imax", "bound", "char", "nvars", "p"}


@dataclass
class Lines(Report):
    rows: list

    def items(self):
        return self.rows


def _text(value: str | None) -> str | None:
    """``@path`` reads the value from a file."""
    if value is None or not value.startswith("@"):
        return value
    try:
        return Path(value[1:]).read_text().strip()
    except OSError as exc:
        raise InputError(f"cannot read {value[1:]}: {exc}") from exc


def _get(args, key):
    v = getattr(args, key, None)
    return DEFAULTS.get(key) if v is None else v


def _field(args):
    p = _get(args, "char")
    return GF(p) if p else QQ


def _context(args, *texts: str | None, carrier: str | None = None) -> Context:
    nvars = args.nvars or infer_nvars(*(t for t in texts if t))
    carrier = carrier or ("series" if args.series else "laurent")
    return Context(nvars, _field(args), carrier, _get(args, "order"))


def _op_text(args) -> str:
    given = [(k, getattr(args, k)) for k in ("derivation", "endo", "ederivation", "op")
             if getattr(args, k, None)]
    if len(given) != 1:
        raise InputError("give exactly one of --derivation, --endo, --ederivation, --op")
    kind, body = given[0]
    body = _text(body)
    return body if kind == "op" else f"{kind}: {body}"


def _operator(args, *texts, carrier=None):
    spec = _op_text(args)
    ctx = _context(args, spec, *texts, carrier=carrier)
    return parse_operator(spec, ctx), ctx


def _matrix(args):
    if not args.matrix:
        raise InputError("--matrix is required")
    raw = args.matrix
    if raw.startswith("@"):
        return parse_matrix(_text(raw), _field(args))
    if Path(raw).is_file():
        return parse_matrix(Path(raw).read_text(), _field(args))
    rows = [r.split() for r in raw.split(";") if r.strip()]
    return parse_matrix("\n".join([str(len(rows))] + [" ".join(r) for r in rows]), _field(args))


# -- subcommands -----------------------------------------------------------------

def cmd_apply(args):
    f_text = _text(args.f)
    L, ctx = _operator(args, f_text)
    f = parse_expr(f_text, ctx)
    res = L(f)
    rows = [("operator", _op_text(args)), ("f", f), ("result", res)]
    if isinstance(res, TruncSeries):
        rows.append(("order", res.order))
    return Lines(rows), OK


def cmd_iterate(args):
    f_text = _text(args.f)
    L, ctx = _operator(args, f_text)
    f = parse_expr(f_text, ctx)
    res = iterate_operator(L, args.m, f)
    rows = [("operator", _op_text(args)), ("m", args.m), ("f", f), ("result", res)]
    if isinstance(res, TruncSeries):
        rows.append(("order", res.order))
    return Lines(rows), OK


def cmd_cyclic(args):
    f_text = _text(args.f)
    L, ctx = _operator(args, f_text)
    rep = cyclic_space(L, parse_expr(f_text, ctx), _get(args, "cap"))
    return rep, OK if rep.closed else INCONCLUSIVE


def cmd_ddeg(args):
    f_text = _text(args.f)
    D, ctx = _operator(args, f_text)
    n = d_degree(D, parse_expr(f_text, ctx), _get(args, "cap"))
    return Lines([("d_degree", n), ("cap", _get(args, "cap"))]), OK


def cmd_periodicity(args):
    if args.matrix:
        target = _matrix(args)
    else:
        target, _ = _operator(args)
        if not isinstance(target, Endomorphism):
            raise InputError("periodicity needs --endo or --matrix")
    cert = detect_periodicity(target, _get(args, "imax"))
    if cert is None:
        return Lines([("status", "none"), ("i_max", _get(args, "imax"))]), INCONCLUSIVE
    return cert, OK


def cmd_jc(args):
    A = _matrix(args)
    jc = jc_decompose(A)
    rows = jc.items() + [("N_index", nilpotence_index(jc.N))]
    return Lines(rows), OK


def cmd_cyclo(args):
    A = _matrix(args)
    cyc = roots_of_unity_orders(A)
    blocks = jordan_block_check(A)
    cert = eventual_period_certificate(A)
    rows = cyc.items() + [("block." + k, v) for k, v in blocks.items()] + \
        [("period." + k, v) for k, v in cert.items()]
    return Lines(rows), VIOLATION if cert.refused else OK


def _element(text: str, ctx: Context, local: bool):
    if not local:
        return parse_expr(text, ctx)
    f = parse_expr(text, Context(ctx.nvars, ctx.field, "laurent", ctx.order))
    if f.is_zero():
        return LocalSeries.from_series(TruncSeries({}, ctx.nvars, ctx.order, ctx.field))
    shift = tuple(min(a[i] for a in f.terms) for i in range(ctx.nvars))
    body = {tuple(e - s for e, s in zip(a, shift)): c for a, c in f.terms.items()}
    return LocalSeries(shift, TruncSeries(body, ctx.nvars, ctx.order, ctx.field))


def _local_series_text(text: str, ctx: Context):
    """Series-context parse (so 1/(1-x1) expands), then viewed in k[[x]][x^-1]."""
    return LocalSeries.from_series(parse_expr(text, Context(ctx.nvars, ctx.field, "series", ctx.order)))


def cmd_radical(args):
    f_text = _text(args.f)
    M = parse_subspace(_text(args.support))
    ctx = _context(args, f_text)
    a = _element(f_text, ctx, args.local)
    rep = radical_membership(a, M, _get(args, "m0"), _get(args, "mmax"))
    return rep, OK if rep.in_radical else VIOLATION


def cmd_mz(args):
    a_text = _text(args.a)
    b_texts = [_text(b) for b in args.b or []]
    M = parse_subspace(_text(args.support))
    ctx = _context(args, a_text, *b_texts)
    a = _element(a_text, ctx, args.local)
    if args.local:
        bs = [_element(t, ctx, True) if "^-" in t else _local_series_text(t, ctx) for t in b_texts]
    else:
        bs = [parse_expr(t, ctx) for t in b_texts]
    rep = mz_falsify(a, M, bs, _get(args, "mmax"))
    return rep, VIOLATION if rep.violated else OK


def _diagonal_spec(L) -> DiagonalSpec | None:
    if isinstance(L, Endomorphism):
        w = []
        for i, g in enumerate(L.images):
            e = tuple(1 if k == i else 0 for k in range(L.nvars))
            if len(g.terms) != 1 or e not in g.terms:
                return None
            w.append(g.terms[e])
        return DiagonalSpec("endo", tuple(w))
    if isinstance(L, Derivation):
        w = []
        for i, p in enumerate(L.coeffs):
            e = tuple(1 if k == i else 0 for k in range(L.nvars))
            if p.is_zero():
                w.append((0,))
            elif len(p.terms) == 1 and e in p.terms:
                w.append((p.terms[e],))
            else:
                return None
        return DiagonalSpec("derivation", tuple(w))
    return None


def cmd_image(args):
    f_text = _text(args.f)
    if args.weights:
        vecs = [parse_vector(v) for v in _text(args.weights).split(";") if v.strip()]
        spec = DiagonalSpec("derivation", tuple(vecs))
        ctx = Context(args.nvars or len(vecs), _field(args), "laurent", _get(args, "order"))
        rep = image_membership_diagonal(spec, parse_expr(f_text, ctx))
        return rep, OK if rep.member else VIOLATION
    L, ctx = _operator(args, f_text, carrier="laurent")
    if isinstance(L, Endomorphism):
        L = EDerivation(L)   # the image of an endomorphism spec means im(1 - phi)
    f = parse_expr(f_text, ctx)
    spec = _diagonal_spec(L.phi if isinstance(L, EDerivation) else L)
    if args.bound is None and spec is not None and ctx.field.char == 0:
        rep = image_membership_diagonal(spec, f)
        return rep, OK if rep.member else VIOLATION
    if args.bound is None:
        raise InputError("operator is not diagonal; give --bound for the bounded solver")
    rep = image_membership_bounded(L, f, args.bound)
    if rep.member:
        return rep, OK
    return rep, VIOLATION if rep.unconditional else INCONCLUSIVE


def cmd_grade(args):
    D, _ = _operator(args, carrier="laurent")
    if not isinstance(D, Derivation):
        raise InputError("grade needs --derivation")
    w = tuple(int(x) for x in parse_vector(args.weight))
    return graded_decompose(D, w), OK


def cmd_inverse(args):
    texts = [t for t in _text(args.F).split(";") if t.strip()]
    ctx = _context(args, *texts, carrier="series")
    if args.nvars is None and len(texts) > ctx.nvars:
        ctx = Context(len(texts), ctx.field, "series", ctx.order)
    F = [parse_expr(t, ctx) for t in texts]
    G = formal_inverse(F, ctx.order)
    rows = [("order", ctx.order)] + [(f"G{i + 1}", g) for i, g in enumerate(G)]
    return Lines(rows), OK


def cmd_normalize(args):
    phi, ctx = _operator(args, carrier="series")
    if not isinstance(phi, Endomorphism):
        raise InputError("normalize needs --endo")
    return normalize_endomorphism(phi, ctx.order, _get(args, "cap")), OK


def cmd_repro(args, out):
    ids = list(REGISTRY) if args.all else args.ids
    if not ids:
        raise InputError("name a case or pass --all; known cases: " + ", ".join(REGISTRY))
    params = {"p": args.p, "mmax": args.mmax, "order": args.order}
    results = [run_case(i, **params) for i in ids]
    sep = "\t" if args.machine else ": "
    if len(results) == 1:
        r = results[0]
        body = r.text if args.machine else r.text.replace("\t", ": ")
        out.write(body)
        if r.golden is not None:
            out.write(f"golden{sep}{'match' if r.golden else 'MISMATCH'}\n")
        out.write(f"result{sep}{'PASS' if r.passed else 'FAIL'}\n")
    else:
        for r in results:
            out.write(f"{r.ident}{sep}{'PASS' if r.passed else 'FAIL'}\n")
    return OK if all(r.passed for r in results) else VIOLATION


# -- argument parsing --------------------------------------------------------------

def _add_operator_flags(p):
    p.add_argument("--derivation", help="D(x1)=..., D(x2)=...")
    p.add_argument("--endo", help="phi(x1)=..., phi(x2)=...")
    p.add_argument("--ederivation", help="phi(x1)=...; acts as 1 - phi")
    p.add_argument("--op", help="full spec, e.g. 'derivation: D(x1)=1'")


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand's copy of these flags from resetting a value
    # given before the subcommand name
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False,
                                     argument_default=argparse.SUPPRESS)
    common.add_argument("--machine", action="store_true",
                        help="emit key<TAB>value lines")
    common.add_argument("--char", type=int, help="prime characteristic (default 0, i.e. Q)")
    common.add_argument("--order", type=int, help="series truncation order (default 32)")
    common.add_argument("--cap", type=int, help="dimension cap (default 64)")
    common.add_argument("--mmax", type=int, help="power bound (default 50)")
    common.add_argument("--nvars", type=int, help="number of variables (default: inferred)")
    common.add_argument("--series", action="store_true",
                        help="parse expressions as truncated power series")
    common.add_argument("--config", help="key = value file mirroring these flags")

    parser = argparse.ArgumentParser(prog="mz-lab", description=__doc__.splitlines()[0],
                                     allow_abbrev=False,
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common], allow_abbrev=False)

    p = add("apply", "apply an operator to an element")
    _add_operator_flags(p)
    p.add_argument("--f", required=True)
    p = add("iterate", "apply an operator m times")
    _add_operator_flags(p)
    p.add_argument("--f", required=True)
    p.add_argument("--m", type=int, required=True)
    p = add("cyclic", "span of the iterates of an element")
    _add_operator_flags(p)
    p.add_argument("--f", required=True)
    p = add("ddeg", "D-degree of an element")
    _add_operator_flags(p)
    p.add_argument("--f", required=True)
    p = add("periodicity", "least (i, j) with phi^i = phi^j")
    _add_operator_flags(p)
    p.add_argument("--matrix")
    p.add_argument("--imax", type=int, help="largest power compared (default 10)")
    for name, text in (("jc", "Jordan-Chevalley decomposition of a matrix"),
                       ("cyclo", "root-of-unity certificate of a matrix")):
        p = add(name, text)
        p.add_argument("--matrix", help="file, @file, or rows separated by ';'")
    p = add("radical", "scan powers a^m for membership in a subspace")
    p.add_argument("--f", required=True)
    p.add_argument("--support", required=True, help="e.g. '{(0,0)}'")
    p.add_argument("--m0", type=int)
    p.add_argument("--local", action="store_true", help="carrier k[[x]][x^-1]")
    p = add("mz", "look for b*a^m outside a subspace")
    p.add_argument("--a", required=True)
    p.add_argument("--b", action="append")
    p.add_argument("--support", required=True)
    p.add_argument("--local", action="store_true", help="carrier k[[x]][x^-1]")
    p = add("image", "is f in the image of an operator (1 - phi for --endo)?")
    _add_operator_flags(p)
    p.add_argument("--weights", help="derivation weights c_i in Q^d, e.g. '(1,0);(0,1)'")
    p.add_argument("--f", required=True)
    p.add_argument("--bound", type=int)
    p = add("grade", "split a derivation by weight")
    _add_operator_flags(p)
    p.add_argument("--weight", required=True, help="e.g. '(1,1)'")
    p = add("inverse", "formal inverse of a series map")
    p.add_argument("--F", required=True, help="components separated by ';'")
    p = add("normalize", "eigen-coordinates of an endomorphism of k[[x]]")
    _add_operator_flags(p)
    p = add("repro", "run reproduction cases")
    p.add_argument("ids", nargs="*")
    p.add_argument("--all", action="store_true")
    p.add_argument("--p", type=int)
    return parser


def _apply_config(args):
    if not args.config:
        return
    try:
        lines = Path(args.config).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config {args.config}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"{args.config}:{n}: expected key = value")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not hasattr(args, key):
            raise InputError(f"{args.config}:{n}: unknown key {key!r}")
        if getattr(args, key) is not None and getattr(args, key) is not False:
            continue
        if key in _INT_KEYS:
            value = int(value)
        elif key in ("machine", "series", "local", "all"):
            value = value.lower() in ("1", "true", "yes")
        setattr(args, key, value)


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else INPUT_ERROR
    for key in COMMON_KEYS:
        if not hasattr(args, key):
            setattr(args, key, None)
    try:
        _apply_config(args)
        if args.command == "repro":
            return cmd_repro(args, out)
        handler = globals()[f"cmd_{args.command}"]
        report, code = handler(args)
        out.write((report.machine() if args.machine else report.human()) + "\n")
        return code
    except InconclusiveError as exc:
        err.write(f"inconclusive: {exc}\n")
        return INCONCLUSIVE
    except (InputError, UnsupportedError, ZeroDivisionError) as exc:
        err.write(f"error: {exc}\n")
        return INPUT_ERROR
    except MZLabError as exc:
        err.write(f"error: {exc}\n")
        return INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
