"""Seeded random instances for experiments and tests.

Every generator takes a :class:`random.Random` so runs are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .factor_spaces import ConfigurationSpace, Measure
from .linalg import RatMatrix, Subspace, image, inverse
from .poset import FinitePoset
from .projectors import ProjectorFamily, intersection_witness
from .split_functors import SplitFunctor, projector_family_at, sum_of_components, validate_split

__all__ = [
    "PosetConfig",
    "FamilyConfig",
    "MeasureConfig",
    "SplitConfig",
    "PlantedFamily",
    "SplitInstance",
    "random_poset",
    "random_rational",
    "random_invertible",
    "random_family_values",
    "planted_family",
    "random_measure",
    "grid_measures",
    "random_split_instance",
    "gauge_arrows",
    "perturb_split",
]


@dataclass(frozen=True)
class PosetConfig:
    max_elements: int = 8
    min_elements: int = 1
    edge_probability: float = 0.35


@dataclass(frozen=True)
class FamilyConfig:
    poset: PosetConfig = PosetConfig(max_elements=5)
    max_dim: int = 8
    entry_range: int = 2


@dataclass(frozen=True)
class MeasureConfig:
    sizes: tuple[int, ...] = (2, 3)
    max_denominator: int = 12
    zero_probability: float = 0.0


@dataclass(frozen=True)
class SplitConfig:
    poset: PosetConfig = PosetConfig(max_elements=5, min_elements=2, edge_probability=0.5)
    max_component_dim: int = 3
    min_component_dim: int = 0
    entry_range: int = 2


def random_poset(rng: random.Random, cfg: PosetConfig = PosetConfig()) -> FinitePoset:
    """Random order: relations i < j drawn independently, then closed."""
    n = rng.randint(cfg.min_elements, cfg.max_elements)
    names = [f"e{i}" for i in range(n)]
    pairs = [
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < cfg.edge_probability
    ]
    perm = names[:]
    rng.shuffle(perm)
    p = FinitePoset.from_relations(names, pairs)
    # Shuffled element order, so nothing downstream relies on a topological listing.
    return p.subposet(perm)


def random_rational(rng: random.Random, bound: int = 3, max_denominator: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, max_denominator))


def random_invertible(rng: random.Random, n: int, entry_range: int = 2) -> RatMatrix:
    """Product of unit triangular matrices, a permutation and a nonzero diagonal."""
    lower = [[1 if i == j else (rng.randint(-entry_range, entry_range) if j < i else 0) for j in range(n)] for i in range(n)]
    upper = [[1 if i == j else (rng.randint(-entry_range, entry_range) if j > i else 0) for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    pm = [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)]
    diag = RatMatrix.diag([rng.choice([-2, -1, 1, 2, 3]) for _ in range(n)]) if n else RatMatrix.zeros(0, 0)
    return RatMatrix(pm, cols=n) @ RatMatrix(lower, cols=n) @ diag @ RatMatrix(upper, cols=n)


def random_family_values(rng: random.Random, p: FinitePoset, width: int) -> dict:
    return {a: tuple(random_rational(rng) for _ in range(width)) for a in p.elements}


@dataclass(frozen=True)
class PlantedFamily:
    family: ProjectorFamily
    planted: Mapping[str, Subspace]


def planted_family(rng: random.Random, cfg: FamilyConfig = FamilyConfig()) -> PlantedFamily:
    """pi_a = sum_{b <= a} s_b for a random direct-sum splitting of Q^n.

    ``planted`` holds S_a = im s_a for each element and for the top residual.
    """
    from .poset import TOP

    p = random_poset(rng, cfg.poset)
    n = rng.randint(1, cfg.max_dim)
    labels = list(p.elements) + [TOP]
    owner = [rng.choice(labels) for _ in range(n)]
    basis = random_invertible(rng, n, cfg.entry_range)
    binv = inverse(basis)
    s = {}
    for lab in labels:
        sel = RatMatrix.diag([1 if o == lab else 0 for o in owner])
        s[lab] = basis @ sel @ binv
    pi = {}
    for a in p.elements:
        acc = RatMatrix.zeros(n, n)
        for b in p.down_set(a):
            acc = acc + s[b]
        pi[a] = acc
    return PlantedFamily(ProjectorFamily(p, n, pi), {lab: image(m) for lab, m in s.items()})


def random_measure(rng: random.Random, cfg: MeasureConfig = MeasureConfig()) -> Measure:
    space = ConfigurationSpace(tuple(str(i + 1) for i in range(len(cfg.sizes))), cfg.sizes)
    raw = [
        0 if rng.random() < cfg.zero_probability else rng.randint(1, cfg.max_denominator)
        for _ in range(len(space))
    ]
    if not any(raw):
        raw[rng.randrange(len(raw))] = 1
    total = sum(raw)
    return Measure(space, tuple(Fraction(x, total) for x in raw))


def grid_measures(sizes: tuple[int, ...] = (2, 2), denominator: int = 8) -> list[Measure]:
    """Every measure whose weights are multiples of 1/denominator."""
    space = ConfigurationSpace(tuple(str(i + 1) for i in range(len(sizes))), sizes)
    k = len(space)

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    return [Measure(space, tuple(Fraction(x, denominator) for x in c)) for c in compositions(denominator, k)]


def gauge_arrows(
    poset: FinitePoset, gauges: Mapping[tuple[str, str], RatMatrix]
) -> dict[tuple[str, str, str], RatMatrix]:
    """Coherent component arrows T_a(c) T_a(b)^-1 over every cover b < c above a."""
    out = {}
    for b, c in poset.covers():
        for a in poset.down_set(b):
            out[(a, b, c)] = gauges[(a, c)] @ inverse(gauges[(a, b)])
    return out


@dataclass(frozen=True)
class SplitInstance:
    functor: SplitFunctor
    component_dims: Mapping[str, int]
    arrows: Mapping[tuple[str, str, str], RatMatrix]


def random_split_instance(rng: random.Random, cfg: SplitConfig = SplitConfig()) -> SplitInstance:
    p = random_poset(rng, cfg.poset)
    dims = {a: rng.randint(cfg.min_component_dim, cfg.max_component_dim) for a in p.elements}
    gauges = {
        (a, b): random_invertible(rng, dims[a], cfg.entry_range)
        for a in p.elements
        for b in p.up_set(a)
    }
    arrows = gauge_arrows(p, gauges)
    return SplitInstance(sum_of_components(p, dims, arrows), dims, arrows)


def _block_offsets(p: FinitePoset, dims: Mapping[str, int], level: str) -> dict[str, tuple[int, int]]:
    out, k = {}, 0
    for a in p.down_set(level):
        out[a] = (k, k + dims[a])
        k += dims[a]
    return out


def perturb_split(
    rng: random.Random, inst: SplitInstance, attempts: int = 20, entry_range: int = 2
) -> SplitFunctor | None:
    """Replace F from a maximal c to a lower cover b by another retraction of G.

    The change maps a component a < c with a not below b into the b-block, so
    F o G = id and functoriality survive while pi_b pi_a picks up a term the
    s-sum lacks. The break is confirmed on the projector families; None when
    the instance has no such (a, b, c).
    """
    sf = inst.functor
    p = sf.poset
    d = inst.component_dims
    candidates = []
    for b, c in p.covers():
        if len(p.up_set(c)) > 1 or d[b] == 0:
            continue
        moved = [a for a in p.down_set(c) if a != c and not p.leq(a, b) and d[a] > 0]
        if moved:
            candidates.append((b, c, moved))
    if not candidates:
        return None
    for _ in range(attempts):
        b, c, moved = rng.choice(candidates)
        ob = _block_offsets(p, d, b)[b]
        oc = _block_offsets(p, d, c)
        x = [[0] * sf.dims[c] for _ in range(sf.dims[b])]
        for a in moved:
            for i in range(*ob):
                for j in range(*oc[a]):
                    x[i][j] = rng.randint(-entry_range, entry_range)
        xm = RatMatrix(x, cols=sf.dims[c])
        if xm.is_zero():
            continue
        G = {(lo, hi): sf.g(lo, hi) for lo, hi in p.covers()}
        F = {(hi, lo): sf.f(hi, lo) for lo, hi in p.covers()}
        F[(c, b)] = F[(c, b)] + xm
        new = validate_split(p, sf.dims, G, F)
        if any(intersection_witness(projector_family_at(new, al)) for al in p.elements):
            return new
    return None
