"""Regenerate the JSON fixtures and golden CLI reports under tests/.

    python scripts/make_fixtures.py            # fixtures + golden reports
    python scripts/make_fixtures.py --check    # compare instead of writing

Golden reports are frozen outputs; rerun only after an intended format change.
"""

from __future__ import annotations

import argparse
import io
import random
import sys
from contextlib import redirect_stdout
from fractions import Fraction
from pathlib import Path

from interdecomp.cli import main as cli_main
from interdecomp.factor_spaces import ConfigurationSpace, Measure
from interdecomp.generators import (
    FamilyConfig,
    PosetConfig,
    SplitConfig,
    perturb_split,
    planted_family,
    random_split_instance,
)
from interdecomp.jsonio import dumps, family_to_json, measure_to_json, split_to_json
from interdecomp.linalg import RatMatrix
from interdecomp.poset import FinitePoset
from interdecomp.projectors import ProjectorFamily

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = ROOT / "tests" / "golden"


def fixtures() -> dict[str, tuple[str, dict]]:
    out = {}
    vee = FinitePoset.from_relations(["0", "1", "1'"], [("0", "1"), ("0", "1'")])
    example = ProjectorFamily(
        vee, 3, {"0": RatMatrix.diag([1, 0, 0]), "1": RatMatrix.diag([1, 1, 0]), "1'": RatMatrix.diag([1, 0, 1])}
    )
    out["example_family"] = ("projectors", family_to_json(example))
    bad = family_to_json(example)
    bad["projectors"]["1"] = [["2", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]]
    out["non_idempotent"] = ("projectors", bad)
    out["planted_family"] = ("projectors", family_to_json(planted_family(random.Random(2), FamilyConfig()).family))

    square = ConfigurationSpace(("1", "2"), (2, 2))
    out["uniform_square"] = ("measure", measure_to_json(Measure.uniform(square)))
    diag = Measure.from_mapping(square, {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)})
    out["diagonal_measure"] = ("measure", measure_to_json(diag))
    prod = Measure.product_of(
        ConfigurationSpace(("x", "y"), (2, 3)), [[Fraction(1, 4), Fraction(3, 4)], [Fraction(1, 2), 0, Fraction(1, 2)]]
    )
    out["product_measure"] = ("measure", measure_to_json(prod))

    rng = random.Random(6)
    inst = random_split_instance(rng, SplitConfig(poset=PosetConfig(max_elements=4, min_elements=3, edge_probability=0.6)))
    out["split_sum"] = ("split", split_to_json(inst.functor))
    perturbable = SplitConfig(poset=PosetConfig(max_elements=4, min_elements=3, edge_probability=0.5), min_component_dim=1)
    while True:
        new = perturb_split(rng, random_split_instance(rng, perturbable))
        if new is not None:
            break
    out["split_perturbed"] = ("split", split_to_json(new))
    return out


def report(name: str, kind: str, command: str) -> tuple[int, str]:
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main([command, "--kind", kind, "--input", str(FIXTURES / f"{name}.json")])
    return code, buf.getvalue()


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--check", action="store_true")
    args = parser.parse_args()
    FIXTURES.mkdir(parents=True, exist_ok=True)
    GOLDEN.mkdir(parents=True, exist_ok=True)
    stale = []
    items = fixtures()
    for name, (kind, data) in items.items():
        path = FIXTURES / f"{name}.json"
        text = dumps(data)
        if args.check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                stale.append(path)
        else:
            path.write_text(text, encoding="utf-8")
    for name, (kind, _) in items.items():
        for command in ("check", "decompose"):
            code, text = report(name, kind, command)
            path = GOLDEN / f"{name}.{command}.json"
            if args.check:
                if not path.exists() or path.read_text(encoding="utf-8") != text:
                    stale.append(path)
            else:
                path.write_text(text, encoding="utf-8")
            print(f"{name:18s} {command:9s} exit {code}")
    for p in stale:
        print(f"stale: {p.relative_to(ROOT)}")
    return 1 if stale else 0


if __name__ == "__main__":
    sys.exit(main())
