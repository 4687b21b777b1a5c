"""Finite posets: down-sets, meets, Möbius function, zeta/Möbius on families.

A *family* over a poset is a mapping ``element -> value`` where the values
support ``+`` and multiplication by an integer (tuples of Fractions are
treated as vectors, :class:`RatMatrix` values work as they are).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .linalg import RatMatrix

__all__ = [
    "PosetError",
    "UnknownElement",
    "ReflexivityError",
    "AntisymmetryError",
    "TransitivityError",
    "FinitePoset",
    "MobiusTable",
    "TOP",
    "validate",
    "chain",
    "antichain",
    "boolean_lattice",
    "zeta_apply",
    "mobius_apply",
    "w_space_membership",
]

TOP = "⊤"


class PosetError(ValueError):
    pass


class UnknownElement(PosetError, KeyError):
    def __str__(self) -> str:
        return f"unknown poset element {self.args[0]!r}"


class ReflexivityError(PosetError):
    pass


class AntisymmetryError(PosetError):
    pass


class TransitivityError(PosetError):
    pass


class FinitePoset:
    """A finite poset on named elements with a dense order table.

    ``leq[i][j]`` is True when ``elements[i] <= elements[j]``. Instances are
    immutable; build them with :func:`validate` or :meth:`from_relations`.
    """

    def __init__(self, elements: Sequence[str], leq: Sequence[Sequence[bool]]):
        self.elements = tuple(elements)
        self._leq = tuple(tuple(bool(x) for x in row) for row in leq)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise PosetError("duplicate element names")

    @classmethod
    def from_relations(cls, elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "FinitePoset":
        """Reflexive-transitive closure of generating pairs ``(a, b)`` meaning a <= b."""
        elements = tuple(elements)
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        t = [[i == j for j in range(n)] for i in range(n)]
        for a, b in pairs:
            if a not in idx:
                raise UnknownElement(a)
            if b not in idx:
                raise UnknownElement(b)
            t[idx[a]][idx[b]] = True
        for k in range(n):
            for i in range(n):
                if t[i][k]:
                    row_k = t[k]
                    row_i = t[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        return validate(elements, t)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a) -> bool:
        return a in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and self._leq == other._leq

    def __hash__(self) -> int:
        return hash((self.elements, self._leq))

    def __repr__(self) -> str:
        return f"FinitePoset({list(self.elements)}, covers={self.covers()})"

    def index(self, a: str) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise UnknownElement(a) from None

    def leq(self, a: str, b: str) -> bool:
        return self._leq[self.index(a)][self.index(b)]

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    @property
    def table(self) -> tuple[tuple[bool, ...], ...]:
        return self._leq

    @cached_property
    def _down(self) -> dict[str, tuple[str, ...]]:
        n = len(self.elements)
        return {
            a: tuple(self.elements[j] for j in range(n) if self._leq[j][i])
            for i, a in enumerate(self.elements)
        }

    @cached_property
    def _up(self) -> dict[str, tuple[str, ...]]:
        n = len(self.elements)
        return {
            a: tuple(self.elements[j] for j in range(n) if self._leq[i][j])
            for i, a in enumerate(self.elements)
        }

    def down_set(self, a: str) -> tuple[str, ...]:
        """All b <= a, in element order."""
        self.index(a)
        return self._down[a]

    def up_set(self, a: str) -> tuple[str, ...]:
        self.index(a)
        return self._up[a]

    def is_lower_set(self, subset: Iterable[str]) -> bool:
        s = set(subset)
        for b in s:
            self.index(b)
        return all(a in s for b in s for a in self._down[b])

    def subposet(self, subset: Iterable[str]) -> "FinitePoset":
        """Induced order on ``subset``; element order follows this poset."""
        s = set(subset)
        for b in s:
            self.index(b)
        keep = [i for i, e in enumerate(self.elements) if e in s]
        return FinitePoset(
            [self.elements[i] for i in keep], [[self._leq[i][j] for j in keep] for i in keep]
        )

    def strict_pairs(self) -> list[tuple[str, str]]:
        """The nerve's 2-simplices: pairs (a, b) with a < b."""
        return [(a, b) for a in self.elements for b in self._up[a] if a != b]

    def covers(self) -> list[tuple[str, str]]:
        """Pairs (a, b) with a < b and nothing strictly between."""
        out = []
        for a, b in self.strict_pairs():
            if not any(c != a and c != b and self.leq(a, c) for c in self._down[b]):
                out.append((a, b))
        return out

    def linear_extension(self) -> tuple[str, ...]:
        """Elements sorted so that a < b puts a first; stable on element order."""
        return tuple(sorted(self.elements, key=lambda e: (len(self._down[e]), self._index[e])))

    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(a for a in self.elements if len(self._down[a]) == 1)

    def maximal_elements(self) -> tuple[str, ...]:
        return tuple(a for a in self.elements if len(self._up[a]) == 1)

    def bottom(self) -> str | None:
        m = self.minimal_elements()
        return m[0] if len(m) == 1 and len(self._up[m[0]]) == len(self) else None

    def meet(self, a: str, b: str) -> str | None:
        """Greatest lower bound of a and b, or None when it does not exist."""
        lower = set(self.down_set(a)) & set(self.down_set(b))
        for d in lower:
            if all(self.leq(c, d) for c in lower):
                return d
        return None

    def is_meet_semilattice(self) -> bool:
        return all(self.meet(a, b) is not None for a in self.elements for b in self.elements)

    def augmented(self, top: str = TOP) -> "FinitePoset":
        """This poset with a fresh greatest element ``top`` adjoined."""
        if top in self._index:
            raise PosetError(f"element {top!r} already present")
        n = len(self.elements)
        table = [list(r) + [True] for r in self._leq]
        table.append([False] * n + [True])
        return FinitePoset(self.elements + (top,), table)

    def zeta_matrix(self) -> RatMatrix:
        """Z[a][b] = 1 if b <= a, so (Z m)(a) = sum over b <= a of m(b)."""
        n = len(self.elements)
        return RatMatrix([[1 if self._leq[j][i] else 0 for j in range(n)] for i in range(n)], cols=n)

    @cached_property
    def _mobius(self) -> "MobiusTable":
        values: dict[tuple[str, str], int] = {}
        order = self.linear_extension()
        rank = {e: k for k, e in enumerate(order)}
        for a in self.elements:
            below = sorted(self._down[a], key=rank.__getitem__, reverse=True)
            values[(a, a)] = 1
            for b in below:
                if b == a:
                    continue
                values[(a, b)] = -sum(
                    values[(a, c)] for c in below if c != b and self.leq(b, c)
                )
        return MobiusTable(self, values)

    def mobius(self) -> "MobiusTable":
        return self._mobius

    def to_dict(self) -> dict:
        return {"elements": list(self.elements), "leq": [list(p) for p in self.covers()]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "FinitePoset":
        try:
            elements = data["elements"]
            pairs = data.get("leq", [])
        except (KeyError, AttributeError, TypeError) as exc:
            raise PosetError(f"malformed poset description: {exc}") from None
        if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
            raise PosetError("'elements' must be a list of strings")
        checked = []
        for p in pairs:
            if not (isinstance(p, (list, tuple)) and len(p) == 2):
                raise PosetError(f"relation {p!r} is not a pair")
            checked.append((p[0], p[1]))
        return cls.from_relations(elements, checked)


@dataclass(frozen=True)
class MobiusTable:
    """Möbius values mu(a, b) for b <= a."""

    poset: FinitePoset
    values: Mapping[tuple[str, str], int]

    def __call__(self, a: str, b: str) -> int:
        if not self.poset.leq(b, a):
            return 0
        return self.values[(a, b)]

    def as_matrix(self) -> RatMatrix:
        els = self.poset.elements
        return RatMatrix([[self(a, b) for b in els] for a in els], cols=len(els))


def validate(elements: Sequence[str], table: Sequence[Sequence[bool]]) -> FinitePoset:
    """Check a square relation table and return the poset it describes."""
    n = len(elements)
    if len(table) != n or any(len(r) != n for r in table):
        raise PosetError("relation table must be square and match the element list")
    for i in range(n):
        if not table[i][i]:
            raise ReflexivityError(f"{elements[i]!r} is not <= itself")
    for i in range(n):
        for j in range(i + 1, n):
            if table[i][j] and table[j][i]:
                raise AntisymmetryError(
                    f"{elements[i]!r} <= {elements[j]!r} and back, but they differ"
                )
    for i in range(n):
        for j in range(n):
            if not table[i][j]:
                continue
            for k in range(n):
                if table[j][k] and not table[i][k]:
                    raise TransitivityError(
                        f"{elements[i]!r} <= {elements[j]!r} <= {elements[k]!r} "
                        f"but not {elements[i]!r} <= {elements[k]!r}"
                    )
    return FinitePoset(elements, table)


def chain(names: Sequence[str]) -> FinitePoset:
    return FinitePoset.from_relations(names, zip(names, names[1:]))


def antichain(names: Sequence[str]) -> FinitePoset:
    return FinitePoset.from_relations(names, [])


def subset_name(subset: Sequence[str]) -> str:
    return "{" + ",".join(subset) + "}"


def boolean_lattice(ground: Sequence[str]) -> FinitePoset:
    """Subsets of ``ground`` ordered by inclusion, named like ``{x,y}``.

    Element order is by size, then lexicographic in the ground order.
    """
    from itertools import combinations

    ground = tuple(ground)
    subsets = [c for k in range(len(ground) + 1) for c in combinations(ground, k)]
    names = [subset_name(s) for s in subsets]
    n = len(subsets)
    table = [[set(subsets[i]) <= set(subsets[j]) for j in range(n)] for i in range(n)]
    return FinitePoset(names, table)


def _as_value(v):
    if isinstance(v, RatMatrix):
        return v
    return tuple(Fraction(x) for x in v)


def _width(v) -> object:
    return v.shape if isinstance(v, RatMatrix) else len(v)


def _combine(terms: list[tuple[int, object]], template):
    """Integer linear combination of family values."""
    if isinstance(template, RatMatrix):
        acc = RatMatrix.zeros(*template.shape)
        for c, v in terms:
            if c:
                acc = acc + v * c
        return acc
    acc = [Fraction(0)] * len(template)
    for c, v in terms:
        if c:
            for k, x in enumerate(v):
                acc[k] += c * x
    return tuple(acc)


def _check_family(p: FinitePoset, m: Mapping):
    missing = [a for a in p.elements if a not in m]
    if missing:
        raise PosetError(f"family has no value at {missing[0]!r}")
    vals = {a: _as_value(m[a]) for a in p.elements}
    widths = {_width(v) for v in vals.values()}
    if len(widths) > 1:
        raise PosetError("family values have differing dimensions")
    return vals


def zeta_apply(p: FinitePoset, m: Mapping) -> dict:
    """(zeta m)(a) = sum of m(b) over b <= a."""
    vals = _check_family(p, m)
    if not vals:
        return {}
    template = next(iter(vals.values()))
    return {a: _combine([(1, vals[b]) for b in p.down_set(a)], template) for a in p.elements}


def mobius_apply(p: FinitePoset, m: Mapping) -> dict:
    """(mu m)(a) = sum of mu(a, b) m(b) over b <= a."""
    vals = _check_family(p, m)
    if not vals:
        return {}
    mu = p.mobius()
    template = next(iter(vals.values()))
    return {
        a: _combine([(mu(a, b), vals[b]) for b in p.down_set(a)], template) for a in p.elements
    }


def w_space_membership(p: FinitePoset, lower: Iterable[str], u: Mapping) -> bool:
    """Is ``u`` constant on classes of a ~ c given by (down(a) & B) == (down(c) & B)?"""
    lower = frozenset(lower)
    if not p.is_lower_set(lower):
        raise PosetError("W-space needs a lower set")
    vals = _check_family(p, u)
    trace = {a: frozenset(p.down_set(a)) & lower for a in p.elements}
    return all(
        vals[a] == vals[c] for a in p.elements for c in p.elements if trace[a] == trace[c]
    )
