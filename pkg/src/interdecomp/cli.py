"""Command-line front end.

    interdecomp check     --kind measure --input m.json
    interdecomp decompose --kind split   --input g.json --output out.json

Exit status: 0 decomposable, 1 not decomposable, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any

from .factor_spaces import OFF_SUPPORT_MODES, build_family, is_product, product_factors
from .jsonio import (
    SchemaError,
    dumps,
    family_from_json,
    matrix_to_json,
    measure_from_json,
    split_from_json,
    subspace_to_json,
)
from .linalg import format_fraction
from .projectors import NotDecomposable, ProjectorFamily, decompose
from .split_functors import SplitFunctor, decompose_split, intersection_failures

__all__ = ["main", "build_parser", "run"]

EXIT = {"decomposable": 0, "not-decomposable": 1, "invalid-input": 2}
KINDS = ("projectors", "measure", "split")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="interdecomp", description="Interaction decompositions over finite posets.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("check", "decide decomposability"), ("decompose", "write the full decomposition")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", required=True, help="JSON input file")
        p.add_argument("--kind", required=True, choices=KINDS)
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument(
            "--off-support",
            choices=OFF_SUPPORT_MODES,
            default="product",
            help="conditional expectation rows outside the marginal support (measure kind)",
        )
        p.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    return parser


def _family_report(f: ProjectorFamily, full: bool) -> dict:
    try:
        dec = decompose(f)
    except NotDecomposable as exc:
        return {"verdict": "not-decomposable", "witnesses": [list(exc.witness)]}
    dims = dec.dims
    if not dec.certified:
        return {"verdict": "not-decomposable", "witnesses": [], "error": "certificate check failed"}
    payload: dict[str, Any] = {"certified": True}
    if full:
        payload["s"] = {a: matrix_to_json(m) for a, m in dec.s.s.items()}
        payload["s_top"] = matrix_to_json(dec.s.s_top)
        payload["subspaces"] = {a: subspace_to_json(sp) for a, sp in dec.subspaces.items()}
    return {"verdict": "decomposable", "witnesses": [], "decomposition": payload, "dims": dims}


def _split_report(sf: SplitFunctor, full: bool) -> dict:
    failures = intersection_failures(sf)
    if failures:
        witnesses = [{"alpha": al, "pair": list(w)} for al, w in failures.items()]
        return {"verdict": "not-decomposable", "witnesses": witnesses}
    dec = decompose_split(sf)
    if not dec.certified:
        return {"verdict": "not-decomposable", "witnesses": [], "error": "certificate check failed"}
    payload: dict[str, Any] = {"certified": True}
    if full:
        p = sf.poset
        payload["components"] = {
            a: {
                "dim": dec.component_dims[a],
                "levels": {al: subspace_to_json(dec.spaces[(al, a)]) for al in p.up_set(a)},
            }
            for a in p.elements
        }
        payload["psi"] = {al: matrix_to_json(m) for al, m in dec.psi.items()}
    return {"verdict": "decomposable", "witnesses": [], "decomposition": payload, "dims": dict(dec.component_dims)}


def run(command: str, kind: str, data: Any, off_support: str = "product") -> dict:
    """Build the report for already-parsed JSON ``data``; raises SchemaError on bad input."""
    full = command == "decompose"
    if kind == "projectors":
        return _family_report(family_from_json(data), full)
    if kind == "measure":
        m = measure_from_json(data)
        report = _family_report(build_family(m, off_support), full)
        factors = product_factors(m)
        report["is_product"] = is_product(m)
        if factors is not None:
            report["factors"] = [[format_fraction(x) for x in p] for p in factors]
        report["off_support"] = off_support
        return report
    return _split_report(split_from_json(data), full)


def _as_text(report: dict) -> str:
    lines = [f"verdict: {report['verdict']}"]
    if "error" in report:
        lines.append(f"error: {report['error']}")
    for w in report.get("witnesses", []):
        if isinstance(w, dict):
            lines.append(f"witness: alpha={w['alpha']} pair=({w['pair'][0]}, {w['pair'][1]})")
        else:
            lines.append(f"witness: ({w[0]}, {w[1]})")
    if "dims" in report:
        lines.append("dims: " + ", ".join(f"{a}={d}" for a, d in sorted(report["dims"].items())))
    if "is_product" in report:
        lines.append(f"product measure: {'yes' if report['is_product'] else 'no'}")
    if "timing" in report:
        lines.append(f"seconds: {report['timing']['seconds']}")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    echo = {"command": args.command, "kind": args.kind, "input": Path(args.input).name}
    try:
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except OSError as exc:
            raise SchemaError(f"cannot read input ({exc.strerror})", args.input) from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON ({exc.msg})", f"line {exc.lineno} column {exc.colno}") from None
        report = run(args.command, args.kind, data, args.off_support)
    except SchemaError as exc:
        report = {"verdict": "invalid-input", "witnesses": [], "error": str(exc), "location": exc.location}
    report.update(echo)
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    out = dumps(report) if args.format == "json" else _as_text(report)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT[report["verdict"]]


if __name__ == "__main__":
    sys.exit(main())
