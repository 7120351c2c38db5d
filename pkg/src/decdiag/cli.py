"""Command-line interface.

Exit codes: 0 success, 1 check failed (not decreasing / not confluent /
invalid certificate / Newman preconditions), 2 parse error, 3 internal error.
The environment variable ``DECDIAG_FUEL`` overrides the completion fuel cap.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import jsonio
from .analysis import (
    certificate_problems,
    certify,
    check_locally_decreasing,
    confluent_oracle,
    conv_map_from_report,
    find_precedence,
    newman_labeling,
    valley_map_from_report,
)
from .completion import CompletionError, complete_peak, complete_peak_conv
from .document import (
    doc_to_lars,
    doc_to_unlabeled,
    parse_ars,
    parse_peak_spec,
    peak_of,
)
from .errors import DecdiagError, ParseError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_INTERNAL = 3

MODES = {"valley": "valley", "conv": "conversion"}


def _emit(payload: dict) -> None:
    print(jsonio.dumps(payload))


def _fail(kind: str, message: str, line=None, code: int = EXIT_CHECK_FAILED) -> int:
    _emit({"error": {"kind": kind, "message": message, "line": line}})
    return code


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def cmd_check(args) -> int:
    doc = parse_ars(_read(args.file))
    ars, prec = doc_to_lars(doc)
    report = check_locally_decreasing(ars, prec, MODES[args.mode])
    _emit(jsonio.report_to_json(report))
    return EXIT_OK if report.all_decreasing else EXIT_CHECK_FAILED


def cmd_complete(args) -> int:
    doc = parse_ars(_read(args.file))
    ars, prec = doc_to_lars(doc)
    spec = parse_peak_spec(args.left, args.right, doc, ars)
    mode = MODES[args.mode]
    report = check_locally_decreasing(ars, prec, mode)
    if not report.all_decreasing:
        return _fail("check", "ARS is not locally decreasing under the document order")
    if mode == "valley":
        lcm = valley_map_from_report(ars, prec, report)
        diagram, trace = complete_peak(ars, prec, lcm, peak_of(spec))
    else:
        lconv = conv_map_from_report(ars, prec, report)
        diagram, trace = complete_peak_conv(ars, prec, lconv, peak_of(spec))
    _emit(
        {
            "diagram": jsonio.diagram_to_json(diagram),
            "trace": jsonio.trace_to_json(trace),
        }
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    doc = parse_ars(_read(args.file))
    confluent = confluent_oracle(doc_to_unlabeled(doc))
    _emit({"confluent": confluent})
    return EXIT_OK if confluent else EXIT_CHECK_FAILED


def cmd_newman(args) -> int:
    doc = parse_ars(_read(args.file))
    labeled, prec = newman_labeling(doc_to_unlabeled(doc))
    cert = certify(labeled, prec, "valley")
    _emit(
        {
            "labeling": {"steps": [list(s) for s in sorted(labeled.steps)]},
            "precedence": jsonio.precedence_to_json(prec),
            "certificate": jsonio.certificate_to_json(cert),
        }
    )
    return EXIT_OK


def cmd_find_prec(args) -> int:
    doc = parse_ars(_read(args.file))
    ars, _ = doc_to_lars(doc)
    prec = find_precedence(ars, cap=args.cap)
    if prec is None:
        _emit({"precedence": None})
        return EXIT_CHECK_FAILED
    _emit({"precedence": jsonio.precedence_to_json(prec)})
    return EXIT_OK


def cmd_verify(args) -> int:
    raw = _read(args.certificate)
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"certificate is not valid JSON: {exc}") from exc
    cert = jsonio.certificate_from_json(payload)
    problems = certificate_problems(cert)
    _emit({"valid": not problems, "problems": problems})
    return EXIT_OK if not problems else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decdiag",
        description="Decreasing-diagrams confluence toolkit for labeled ARSs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check local decreasingness of a labeled ARS")
    p.add_argument("--mode", choices=sorted(MODES), default="valley")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("complete", help="complete a peak into a decreasing diagram")
    p.add_argument("file")
    p.add_argument("--left", required=True, help="path like s,ls,t,lt,v")
    p.add_argument("--right", required=True)
    p.add_argument("--mode", choices=sorted(MODES), default="valley")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("oracle", help="brute-force confluence of the unlabeled ARS")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser(
        "newman", help="derive the source labeling (labels/prec sections ignored)"
    )
    p.add_argument("file")
    p.set_defaults(func=cmd_newman)

    p = sub.add_parser("find-prec", help="search for a witnessing precedence")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=5, help="label-count cap (default 5)")
    p.set_defaults(func=cmd_find_prec)

    p = sub.add_parser("verify", help="re-validate a certificate without search")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        return _fail("parse", str(exc), line=exc.line, code=EXIT_PARSE)
    except CompletionError as exc:
        return _fail("internal", str(exc), code=EXIT_INTERNAL)
    except DecdiagError as exc:
        return _fail("check", str(exc), code=EXIT_CHECK_FAILED)
    except Exception as exc:  # pragma: no cover - defensive
        return _fail("internal", f"{type(exc).__name__}: {exc}", code=EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
