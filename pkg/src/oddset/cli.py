"""Command-line entry point: ``oddset <verb> ...``.

Every verb prints one JSON document on stdout.  Exit status is 0 exactly when
the verb's claim holds, 1 when it was checked and fails, and 2 for unusable
input.  Point numbers in diagnostics and JSON output are 1-based.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from oddset.construct import build_odd_set
from oddset.errors import OddSetError
from oddset.exact_arith import format_rational, parse_rational
from oddset.geometry import PointSet, parity_audit, verify_odd_set
from oddset.rationalize import DecimalPointSet, dyadic_scale, rationalize_set
from oddset.search import LatticeBox, bound_report, search_box


class CliError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from None


def _read_point_set(path: str) -> PointSet:
    return PointSet.from_json_obj(_read_json(path))


def _write_point_set(ps: PointSet, path: str, extra: dict | None = None) -> None:
    obj = ps.to_json_obj()
    if extra:
        obj.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def _emit(obj: dict) -> None:
    json.dump(obj, sys.stdout)
    sys.stdout.write("\n")


def _bounds(text: str, dimension: int) -> tuple:
    parts = [parse_rational(t) for t in text.split(",")]
    if len(parts) == 1:
        return tuple(parts) * dimension
    if len(parts) != dimension:
        raise CliError(f"bound {text!r} has {len(parts)} entries for dimension {dimension}")
    return tuple(parts)


def cmd_construct(args) -> int:
    ps = build_odd_set(args.n)
    cert = verify_odd_set(ps)
    out = {"size": len(ps), "verdict": cert.verdict}
    if args.output:
        _write_point_set(ps, args.output)
        out["output"] = args.output
    else:
        out.update(ps.to_json_obj())
    _emit(out)
    return 0 if cert.verdict else 1


def cmd_verify(args) -> int:
    ps = _read_point_set(args.file)
    cert = verify_odd_set(ps, workers=args.workers)
    _emit(cert.to_json_obj())
    if not cert.verdict:
        i, j, d, _ = cert.first_failure()
        print(
            f"oddset: pair ({i + 1}, {j + 1}) has distance {format_rational(d)}, "
            "not an odd integer",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_audit(args) -> int:
    audit = parity_audit(_read_point_set(args.file))
    _emit(audit.to_json_obj())
    return 0 if audit.passes else 1


def cmd_search(args) -> int:
    lo, hi = _bounds(args.lo, args.n), _bounds(args.hi, args.n)
    box = LatticeBox(args.n, args.lattice, lo, hi)
    threads = args.threads if args.threads else (os.cpu_count() or 1)
    result = search_box(box, threads=threads)
    report = bound_report(args.n, result, args.lattice)
    out = result.to_json_obj()
    out.update(report.to_json_obj())
    _emit(out)
    print(f"oddset: {report.summary()}", file=sys.stderr)
    return 1 if report.violation else 0


def cmd_rationalize(args) -> int:
    dps = DecimalPointSet.from_json_obj(_read_json(args.file))
    res = rationalize_set(dps, details=True)
    ps, scale = res.points, 1
    if args.dyadic:
        ps, scale = dyadic_scale(ps)
    provenance = res.provenance()
    provenance["scale"] = scale
    if args.output:
        _write_point_set(ps, args.output, {"provenance": provenance})
        _emit({"size": len(ps), "output": args.output, "provenance": provenance})
    else:
        out = ps.to_json_obj()
        out["provenance"] = provenance
        _emit(out)
    return 0


def cmd_dyadic(args) -> int:
    ps, scale = dyadic_scale(_read_point_set(args.file))
    if args.output:
        _write_point_set(ps, args.output)
        _emit({"scale": scale, "output": args.output})
    else:
        out = ps.to_json_obj()
        out["scale"] = scale
        _emit(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oddset", description="Odd-distance sets under the Manhattan metric."
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("construct", help="build a 2^n-point odd-distance set")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check all pairwise distances")
    p.add_argument("file")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="half-integer parity fingerprints")
    p.add_argument("file")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("search", help="maximum odd-distance set in a lattice box")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--lattice", choices=["half", "int"], required=True)
    p.add_argument("--lo", required=True, help="lower bound, scalar or comma list")
    p.add_argument("--hi", required=True, help="upper bound, scalar or comma list")
    p.add_argument("--threads", type=int, default=0, help="default: available CPUs")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("rationalize", help="exact rational copy of a decimal odd-distance set")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--dyadic", action="store_true", help="also apply the odd dyadic rescaling")
    p.set_defaults(func=cmd_rationalize)

    p = sub.add_parser("dyadic", help="rescale to power-of-two denominators")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dyadic)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, OddSetError, ValueError) as exc:
        print(f"oddset: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
