"""Conditional expectations on finite product spaces.

Configurations are enumerated with the first factor varying slowest, which
is the order of :func:`itertools.product`. Matrices act on functions
``f: E -> Q`` written as column vectors in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .linalg import RatMatrix, to_fraction
from .poset import FinitePoset, boolean_lattice, subset_name
from .projectors import Decomposition, ProjectorFamily, decompose

__all__ = [
    "OFF_SUPPORT_MODES",
    "MeasureError",
    "ConfigurationSpace",
    "Measure",
    "marginal",
    "conditional_expectation",
    "subset_poset",
    "build_family",
    "product_factors",
    "is_product",
    "interaction_decomposition",
]


OFF_SUPPORT_MODES = ("product", "zero")


class MeasureError(ValueError):
    pass


@dataclass(frozen=True)
class ConfigurationSpace:
    names: tuple[str, ...]
    sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "sizes", tuple(int(k) for k in self.sizes))
        if len(self.names) != len(self.sizes):
            raise MeasureError("one size per factor")
        if len(set(self.names)) != len(self.names):
            raise MeasureError("duplicate factor names")
        if any(k < 1 for k in self.sizes):
            raise MeasureError("factor sizes must be positive")

    @classmethod
    def from_dict(cls, factors: Mapping[str, int]) -> "ConfigurationSpace":
        return cls(tuple(factors), tuple(factors.values()))

    @cached_property
    def configurations(self) -> tuple[tuple[int, ...], ...]:
        return tuple(product(*(range(k) for k in self.sizes)))

    @cached_property
    def _position(self) -> dict[tuple[int, ...], int]:
        return {w: i for i, w in enumerate(self.configurations)}

    def __len__(self) -> int:
        return len(self.configurations)

    def index(self, config: Sequence[int]) -> int:
        try:
            return self._position[tuple(config)]
        except KeyError:
            raise MeasureError(f"{tuple(config)} is not a configuration") from None

    def positions(self, subset: Iterable[str]) -> tuple[int, ...]:
        """Factor positions of ``subset``, in declaration order."""
        subset = set(subset)
        unknown = subset - set(self.names)
        if unknown:
            raise MeasureError(f"unknown factor {sorted(unknown)[0]!r}")
        return tuple(i for i, n in enumerate(self.names) if n in subset)

    def project(self, config: Sequence[int], positions: Sequence[int]) -> tuple[int, ...]:
        return tuple(config[i] for i in positions)


@dataclass(frozen=True)
class Measure:
    space: ConfigurationSpace
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        w = tuple(to_fraction(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != len(self.space):
            raise MeasureError("one weight per configuration")
        if any(x < 0 for x in w):
            raise MeasureError("weights must be nonnegative")
        if sum(w) != 1:
            raise MeasureError(f"weights sum to {sum(w)}, not 1")

    @classmethod
    def from_mapping(cls, space: ConfigurationSpace, weights: Mapping[tuple, object]) -> "Measure":
        """Missing configurations get weight zero."""
        w = [Fraction(0)] * len(space)
        for config, x in weights.items():
            w[space.index(config)] = to_fraction(x)
        return cls(space, tuple(w))

    @classmethod
    def uniform(cls, space: ConfigurationSpace) -> "Measure":
        n = len(space)
        return cls(space, (Fraction(1, n),) * n)

    @classmethod
    def product_of(cls, space: ConfigurationSpace, marginals: Sequence[Sequence]) -> "Measure":
        if len(marginals) != len(space.names):
            raise MeasureError("one marginal per factor")
        ps = [tuple(to_fraction(x) for x in p) for p in marginals]
        for p, k in zip(ps, space.sizes):
            if len(p) != k:
                raise MeasureError("marginal length differs from factor size")
        w = []
        for config in space.configurations:
            x = Fraction(1)
            for p, v in zip(ps, config):
                x *= p[v]
            w.append(x)
        return cls(space, tuple(w))

    def __getitem__(self, config: Sequence[int]) -> Fraction:
        return self.weights[self.space.index(config)]

    def support(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c for c, x in zip(self.space.configurations, self.weights) if x)


def marginal(m: Measure, subset: Iterable[str]) -> dict[tuple[int, ...], Fraction]:
    """Push-forward of ``m`` to the factors in ``subset`` (keys in declaration order)."""
    pos = m.space.positions(subset)
    keys = product(*(range(m.space.sizes[i]) for i in pos))
    out = {k: Fraction(0) for k in keys}
    for config, x in zip(m.space.configurations, m.weights):
        out[m.space.project(config, pos)] += x
    return out


def conditional_expectation(m: Measure, subset: Iterable[str], off_support: str = "product") -> RatMatrix:
    """E[. | F_subset] as an |E| x |E| matrix.

    On rows whose subset-marginal is positive this is the usual conditional
    expectation. Rows outside that support depend on ``off_support``:

    * ``"product"``: average the remaining coordinates under the product of
      their single-factor marginals. Keeps the tower identity in both
      directions for every measure.
    * ``"zero"``: the row is zero. Breaks ``pi_a pi_b == pi_b`` (b below a)
      as soon as a marginal has a zero.
    """
    if off_support not in OFF_SUPPORT_MODES:
        raise MeasureError(f"off_support must be one of {OFF_SUPPORT_MODES}")
    space = m.space
    pos = space.positions(subset)
    rest = [i for i in range(len(space.names)) if i not in pos]
    marg = marginal(m, [space.names[i] for i in pos])
    singles = [marginal(m, [n]) for n in space.names]
    configs = space.configurations
    keys = [space.project(c, pos) for c in configs]
    rows = []
    for k in keys:
        mass = marg[k]
        if mass:
            rows.append([x / mass if kk == k else 0 for kk, x in zip(keys, m.weights)])
        elif off_support == "zero":
            rows.append([0] * len(configs))
        else:
            row = []
            for kk, config in zip(keys, configs):
                if kk != k:
                    row.append(0)
                    continue
                x = Fraction(1)
                for i in rest:
                    x *= singles[i][(config[i],)]
                row.append(x)
            rows.append(row)
    return RatMatrix(rows, cols=len(configs))


def subset_poset(space: ConfigurationSpace) -> FinitePoset:
    return boolean_lattice(space.names)


def build_family(m: Measure, off_support: str = "product") -> ProjectorFamily:
    """Conditional expectations over the lattice of factor subsets."""
    p = subset_poset(m.space)
    names = m.space.names
    subsets = [c for k in range(len(names) + 1) for c in combinations(names, k)]
    pi = {subset_name(s): conditional_expectation(m, s, off_support) for s in subsets}
    return ProjectorFamily(p, len(m.space), pi)


def product_factors(m: Measure) -> list[tuple[Fraction, ...]] | None:
    """Single-factor marginals when ``m`` is their product, else None."""
    margs = []
    for name, k in zip(m.space.names, m.space.sizes):
        d = marginal(m, [name])
        margs.append(tuple(d[(v,)] for v in range(k)))
    for config, x in zip(m.space.configurations, m.weights):
        y = Fraction(1)
        for p, v in zip(margs, config):
            y *= p[v]
        if x != y:
            return None
    return margs


def is_product(m: Measure) -> bool:
    return product_factors(m) is not None


def interaction_decomposition(m: Measure, off_support: str = "product") -> Decomposition:
    return decompose(build_family(m, off_support))
