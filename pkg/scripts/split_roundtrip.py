"""Round trip sum_of_components -> decompose_split, plus perturbations that break it.

    python scripts/split_roundtrip.py --instances 200 --seed 1
"""

from __future__ import annotations

import argparse
import random
import time

from interdecomp.generators import PosetConfig, SplitConfig, perturb_split, random_split_instance
from interdecomp.projectors import NotDecomposable
from interdecomp.split_functors import check_intersection, decompose_split


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--instances", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-elements", type=int, default=5)
    parser.add_argument("--max-component-dim", type=int, default=3)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    poset_cfg = PosetConfig(max_elements=args.max_elements, min_elements=2, edge_probability=0.5)
    cfg = SplitConfig(poset=poset_cfg, max_component_dim=args.max_component_dim)
    start = time.perf_counter()
    recovered = perturbed = flipped = 0
    for _ in range(args.instances):
        inst = random_split_instance(rng, cfg)
        dec = decompose_split(inst.functor)
        recovered += dec.certified and dict(dec.component_dims) == dict(inst.component_dims)
        new = perturb_split(rng, inst)
        if new is None:
            continue
        perturbed += 1
        try:
            decompose_split(new)
        except NotDecomposable:
            flipped += not check_intersection(new)
    print(f"instances           {args.instances}")
    print(f"dims recovered      {recovered}")
    print(f"perturbable         {perturbed}")
    print(f"perturbed and fail  {flipped}")
    print(f"seconds             {time.perf_counter() - start:.2f}")


if __name__ == "__main__":
    main()
