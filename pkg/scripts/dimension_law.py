"""Interaction-space dimensions for random full-support product measures.

Prints brute-force ranks of s_a next to prod_{i in a} (|E_i| - 1).

    python scripts/dimension_law.py --sizes 3 3 2 --seed 0
"""

from __future__ import annotations

import argparse
import random
from fractions import Fraction
from itertools import combinations

from interdecomp.factor_spaces import ConfigurationSpace, Measure, interaction_decomposition
from interdecomp.linalg import image
from interdecomp.poset import subset_name


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--sizes", type=int, nargs="+", default=[3, 3, 2])
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    space = ConfigurationSpace(tuple(str(i + 1) for i in range(len(args.sizes))), tuple(args.sizes))
    margs = []
    for k in space.sizes:
        raw = [rng.randint(1, 9) for _ in range(k)]
        margs.append([Fraction(x, sum(raw)) for x in raw])
    s = interaction_decomposition(Measure.product_of(space, margs)).s.s
    print(f"{'subset':10s} {'rank':>4s} {'law':>4s}")
    for r in range(len(space.names) + 1):
        for sub in combinations(space.names, r):
            law = 1
            for i in space.positions(sub):
                law *= space.sizes[i] - 1
            rank = image(s[subset_name(sub)]).dim
            print(f"{subset_name(sub):10s} {rank:4d} {law:4d}{'' if rank == law else '  <-- differs'}")


if __name__ == "__main__":
    main()
