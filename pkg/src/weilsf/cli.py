"""Command-line interface.

One verb per library capability:

    parse, classify, factor, newton, base-change, angle-rank, histogram,
    moments, enumerate, verify

Inputs are LMFDB labels (arguments, --file, or '-' for stdin; '#' starts a
comment), or a single polynomial as --coeffs "1,0,-1,0,25" --q 5.  Output is
JSON lines by default (--format csv/text where it makes sense).  Exit codes:
0 ok, 1 input error, 2 partial classification, 3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import _intpoly as ip
from .anglerank import angle_rank_numeric, torsion_order_structural
from .classify import Partial, classify, report
from .distribution import histogram, moment_report
from .newton import newton_polygon, stratify
from .polyarith import base_change, factor
from .weilpoly import (DEFAULT_PRECISION, WeilError, from_middle, parse_label,
                       validate)

PAPER_SAMPLES = 16 ** 6
PAPER_BUCKETS = 4 ** 6
EXIT_OK, EXIT_INPUT, EXIT_PARTIAL, EXIT_INTERNAL = 0, 1, 2, 3


def _default_precision():
    env = os.environ.get("WEILSF_PRECISION")
    if env:
        try:
            return max(64, int(env))
        except ValueError:
            pass
    return DEFAULT_PRECISION


def _read_inputs(args):
    """Yield WeilPolynomials from labels/file/stdin/coeffs, preserving order."""
    sources = sum([bool(getattr(args, "coeffs", None)),
                   bool(getattr(args, "labels", []) or []),
                   bool(getattr(args, "file", None))])
    if sources > 1:
        raise WeilError("pass exactly one input source "
                        "(labels, --file, or --coeffs)")
    if getattr(args, "coeffs", None):
        coeffs = [int(c) for c in args.coeffs.replace(" ", "").split(",")]
        if args.q is None:
            raise WeilError("--coeffs requires --q")
        yield validate(coeffs, args.q)
        return
    labels = list(getattr(args, "labels", []) or [])
    if getattr(args, "file", None):
        stream = sys.stdin if args.file == "-" else open(args.file)
        try:
            for line in stream:
                line = line.split("#", 1)[0].strip()
                if line:
                    labels.append(line)
        finally:
            if stream is not sys.stdin:
                stream.close()
    if not labels:
        raise WeilError("no input: pass labels, --file, or --coeffs/--q")
    for lab in labels:
        yield parse_label(lab)


def _emit(obj, args):
    if getattr(args, "format", "json") == "text":
        print(obj if isinstance(obj, str) else json.dumps(obj, sort_keys=True))
    else:
        print(json.dumps(obj, sort_keys=True))


# ---------------------------------------------------------------------------
# enumeration of all formally valid coefficient tuples


def _power_sum_ok(partial, k, g, q):
    """Necessary bound |s_k| <= 2g q^(k/2) given a_1..a_k, exact arithmetic."""
    s = ip.power_sums(tuple([1] + list(partial) + [0] * (2 * g - k)), k)
    return s[k - 1] ** 2 <= 4 * g * g * q ** k


def enumerate_weil(g, q):
    """All validated Weil polynomials of dimension g over F_q.

    A superset of the isogeny classes that actually occur (existence of an
    abelian variety is not checked).  Candidate tuples are pruned by the
    exact power-sum bounds before the full root-modulus validation.
    """
    bounds = [math.floor(math.comb(2 * g, i) * q ** (i / 2.0))
              for i in range(1, g + 1)]

    def rec(prefix):
        k = len(prefix) + 1
        for a in range(-bounds[k - 1], bounds[k - 1] + 1):
            cand = prefix + [a]
            if not _power_sum_ok(cand, k, g, q):
                continue
            if k == g:
                try:
                    yield from_middle(g, q, cand)
                except WeilError:
                    pass
            else:
                yield from rec(cand)

    yield from rec([])


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args):
    for P in _read_inputs(args):
        out = P.to_json()
        out["label"] = P.label
        out["schema_version"] = 1
        _emit(out, args)
    return EXIT_OK


def _report_worker(payload):
    coeffs, q, precision = payload
    return report(validate(coeffs, q), precision=precision)


def cmd_classify(args):
    code = EXIT_OK
    inputs = list(_read_inputs(args))
    if args.jobs > 1 and len(inputs) > 1:
        import multiprocessing
        with multiprocessing.Pool(args.jobs) as pool:
            reports = pool.imap(
                _report_worker,
                [(P.coeffs, P.q, args.precision) for P in inputs])
            for rep in reports:   # imap preserves input order
                _emit(rep, args)
                if rep.get("partial"):
                    code = max(code, EXIT_PARTIAL)
        return code
    for P in inputs:
        rep = report(P, precision=args.precision)
        _emit(rep, args)
        if rep.get("partial"):
            code = max(code, EXIT_PARTIAL)
    return code


def cmd_factor(args):
    for P in _read_inputs(args):
        _emit({"schema_version": 1, "label": P.label,
               "factors": factor(P).to_json()}, args)
    return EXIT_OK


def cmd_newton(args):
    for P in _read_inputs(args):
        npd = newton_polygon(P)
        out = npd.to_json()
        out.update({"schema_version": 1, "label": P.label,
                    "stratum": stratify(npd, P.g).value})
        _emit(out, args)
    return EXIT_OK


def cmd_base_change(args):
    for P in _read_inputs(args):
        Q = base_change(P, args.r)
        out = Q.to_json()
        out.update({"schema_version": 1, "label": Q.label,
                    "source": P.label, "r": args.r})
        _emit(out, args)
    return EXIT_OK


def cmd_angle_rank(args):
    for P in _read_inputs(args):
        lat = angle_rank_numeric(P, args.precision)
        out = lat.to_json()
        out.update({"schema_version": 1, "label": P.label})
        if args.structural_m:
            out["m_structural"] = torsion_order_structural(P, precision=args.precision)
        _emit(out, args)
    return EXIT_OK


def cmd_histogram(args):
    n = PAPER_SAMPLES if args.paper_scale else args.samples
    b = PAPER_BUCKETS if args.paper_scale else args.buckets
    for P in _read_inputs(args):
        h = histogram(P, n, b, precision=args.precision)
        if args.format == "csv":
            sys.stdout.write(h.to_csv())
        else:
            out = h.to_json()
            out.update({"schema_version": 1, "label": P.label})
            _emit(out, args)
    return EXIT_OK


def cmd_moments(args):
    for P in _read_inputs(args):
        repm = moment_report(P, args.samples, args.max_order,
                             precision=args.precision)
        _emit({"schema_version": 1, "label": P.label,
               "moments": repm.to_json()}, args)
    return EXIT_OK


def cmd_enumerate(args):
    for P in enumerate_weil(args.g, args.q):
        print(P.label)
    return EXIT_OK


def _verify_one(P, precision):
    from .classify import InvalidTrace
    try:
        sf = classify(P, precision)
    except InvalidTrace as exc:
        # the enumerated corpus is a superset of the realizable classes;
        # g = 1 inputs outside the Waterhouse list are reported, not failed
        return {"label": P.label, "status": "not_realizable", "detail": str(exc)}
    if isinstance(sf, Partial):
        return {"label": P.label, "status": "partial"}
    lat = angle_rank_numeric(P, precision)
    ok_pair = (sf.delta, sf.m) == (lat.delta, lat.torsion_order)
    ok_table = sf.in_allowed_tables()
    npd = newton_polygon(P)
    ok_ss = (sf.delta == 0) == npd.is_supersingular()
    entry = {"label": P.label, "structural": [sf.delta, sf.m],
             "numeric": [lat.delta, lat.torsion_order],
             "in_tables": ok_table, "ss_consistent": ok_ss}
    entry["status"] = "ok" if (ok_pair and ok_table and ok_ss) else "mismatch"
    return entry


def cmd_verify(args):
    mismatches = 0
    skipped = 0
    total = 0
    if args.g is not None and args.q is not None:
        inputs = enumerate_weil(args.g, args.q)
    else:
        inputs = _read_inputs(args)
    for P in inputs:
        entry = _verify_one(P, args.precision)
        total += 1
        if entry["status"] == "mismatch":
            mismatches += 1
            _emit(entry, args)
        elif entry["status"] == "not_realizable":
            skipped += 1
            if args.verbose:
                _emit(entry, args)
        elif args.verbose:
            _emit(entry, args)
    summary = {"schema_version": 1, "checked": total,
               "mismatches": mismatches, "not_realizable": skipped}
    _emit(summary, args)
    return EXIT_OK if mismatches == 0 else EXIT_INPUT


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=_default_precision(),
                        help="working precision in bits (>= 64; env WEILSF_PRECISION)")
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--jobs", type=int, default=1,
                        help="accepted for interface compatibility; batches are "
                             "processed and emitted in input order")

    top = argparse.ArgumentParser(
        prog="weilsf",
        description="Serre-Frobenius groups and trace distributions of "
                    "Weil polynomials")
    sub = top.add_subparsers(dest="command", required=True)

    def add_inputs(p):
        p.add_argument("labels", nargs="*", help="LMFDB labels g.q.iso")
        p.add_argument("--file", help="file of labels, one per line ('-' = stdin)")
        p.add_argument("--coeffs", help="comma-separated a_0..a_2g (a_0 = 1)")
        p.add_argument("--q", type=int, help="field size for --coeffs")

    p = sub.add_parser("parse", parents=[common],
                       help="decode labels to coefficient data")
    add_inputs(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("classify", parents=[common],
                       help="Serre-Frobenius group of each input")
    add_inputs(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("factor", parents=[common],
                       help="irreducible factorization")
    add_inputs(p)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("newton", parents=[common],
                       help="q-Newton polygon and stratum")
    add_inputs(p)
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("base-change", parents=[common],
                       help="extension of scalars")
    add_inputs(p)
    p.add_argument("-r", type=int, required=True, help="extension degree")
    p.set_defaults(func=cmd_base_change)

    p = sub.add_parser("angle-rank", parents=[common],
                       help="numeric angle rank and torsion order")
    add_inputs(p)
    p.add_argument("--structural-m", action="store_true",
                   help="also compute the torsion order by base-change search")
    p.set_defaults(func=cmd_angle_rank)

    p = sub.add_parser("histogram", parents=[common],
                       help="bucketed counts of the trace sequence")
    add_inputs(p)
    p.add_argument("-N", "--samples", type=int, default=16 ** 4)
    p.add_argument("-B", "--buckets", type=int, default=4 ** 3)
    p.add_argument("--paper-scale", action="store_true",
                   help="16^6 samples into 4^6 buckets")
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("moments", parents=[common],
                       help="empirical vs exact pushforward moments")
    add_inputs(p)
    p.add_argument("-N", "--samples", type=int, default=16 ** 4)
    p.add_argument("-K", "--max-order", type=int, default=8)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("enumerate", parents=[common],
                       help="all valid coefficient tuples as labels")
    p.add_argument("-g", type=int, required=True, choices=[1, 2, 3])
    p.add_argument("-q", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", parents=[common],
                       help="structural vs numeric cross-check over a corpus")
    add_inputs(p)
    p.add_argument("-g", type=int, help="enumerate dimension g instead of labels")
    p.add_argument("-q", type=int, help="enumerate over F_q instead of labels")
    p.add_argument("--verbose", action="store_true", help="print matching entries too")
    p.set_defaults(func=cmd_verify)

    return top


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.precision < 64:
        print("error: precision must be >= 64", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except WeilError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print("internal invariant breach: %s" % exc, file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
