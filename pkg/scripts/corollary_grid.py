"""Certified vs product over the 1/k grid of measures on a small product space.

    python scripts/corollary_grid.py --denominator 8
    python scripts/corollary_grid.py --off-support zero   # the literal zero-row convention
"""

from __future__ import annotations

import argparse
from collections import Counter

from interdecomp.factor_spaces import OFF_SUPPORT_MODES, build_family, interaction_decomposition, is_product
from interdecomp.generators import grid_measures
from interdecomp.projectors import NotDecomposable, check_functorial, check_presheafable


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--sizes", type=int, nargs="+", default=[2, 2])
    parser.add_argument("--denominator", type=int, default=8)
    parser.add_argument("--off-support", choices=OFF_SUPPORT_MODES, default="product")
    args = parser.parse_args()

    tally = Counter()
    for m in grid_measures(tuple(args.sizes), args.denominator):
        fam = build_family(m, args.off_support)
        try:
            certified = interaction_decomposition(m, args.off_support).certified
        except NotDecomposable:
            certified = False
        prod = is_product(m)
        tally["measures"] += 1
        tally["products"] += prod
        tally["certified"] += certified
        tally["mismatches"] += certified != prod
        tally["not functorial"] += not check_functorial(fam)
        tally["not presheafable"] += not check_presheafable(fam)
    for key in ("measures", "products", "certified", "mismatches", "not functorial", "not presheafable"):
        print(f"{key:17s} {tally[key]}")


if __name__ == "__main__":
    main()
