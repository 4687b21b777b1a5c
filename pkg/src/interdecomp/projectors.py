"""Poset-indexed families of projectors and their interaction decomposition.

Given projectors ``pi[a]`` on Q^n indexed by a finite poset, the Möbius
transform ``s[a] = sum_{b <= a} mu(a, b) pi[b]`` always reconstructs the
family (``pi[a] = sum_{b <= a} s[b]``). The family is decomposable exactly
when ``pi[a] @ pi[b] == sum_{c <= a, c <= b} s[c]`` for every pair; then the
``s[a]`` together with ``s_top = id - sum_a s[a]`` are mutually annihilating
projectors whose images split Q^n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .linalg import RatMatrix, Subspace, direct_sum_is_ambient, image, is_projector
from .poset import TOP, FinitePoset

__all__ = [
    "FamilyError",
    "NotAProjector",
    "NotMeetSemilattice",
    "NotDecomposable",
    "ProjectorFamily",
    "SFamily",
    "Decomposition",
    "check_functorial",
    "check_presheafable",
    "compute_s",
    "check_intersection_semilattice",
    "check_intersection_general",
    "check_intersection_images",
    "intersection_witness",
    "verify_decomposition",
    "decompose",
]


class FamilyError(ValueError):
    pass


class NotAProjector(FamilyError):
    def __init__(self, element: str):
        super().__init__(f"matrix at {element!r} is not idempotent")
        self.element = element


class NotMeetSemilattice(FamilyError):
    pass


class NotDecomposable(Exception):
    """Raised when the intersection identity fails; ``witness`` is the pair (a, b)."""

    def __init__(self, witness: tuple[str, str], alpha: str | None = None):
        self.witness = witness
        self.alpha = alpha
        where = f" at {alpha!r}" if alpha is not None else ""
        super().__init__(f"intersection identity fails for {witness}{where}")


@dataclass(frozen=True)
class ProjectorFamily:
    poset: FinitePoset
    dim: int
    pi: Mapping[str, RatMatrix]

    def __post_init__(self):
        if set(self.pi) != set(self.poset.elements):
            raise FamilyError("projectors must be given for exactly the poset elements")
        for a in self.poset.elements:
            m = self.pi[a]
            if m.shape != (self.dim, self.dim):
                raise FamilyError(f"matrix at {a!r} has shape {m.shape}, expected {self.dim}x{self.dim}")
            if not is_projector(m):
                raise NotAProjector(a)

    def __getitem__(self, a: str) -> RatMatrix:
        return self.pi[a]


@dataclass(frozen=True)
class SFamily:
    poset: FinitePoset
    s: Mapping[str, RatMatrix]
    s_top: RatMatrix

    def reconstruct(self, a: str) -> RatMatrix:
        n = self.s_top.rows
        acc = RatMatrix.zeros(n, n)
        for b in self.poset.down_set(a):
            acc = acc + self.s[b]
        return acc

    def items_with_top(self) -> list[tuple[str, RatMatrix]]:
        return [(a, self.s[a]) for a in self.poset.elements] + [(TOP, self.s_top)]


@dataclass(frozen=True)
class Decomposition:
    s: SFamily
    subspaces: Mapping[str, Subspace]
    certified: bool = field(default=False)

    @property
    def dims(self) -> dict[str, int]:
        return {a: sp.dim for a, sp in self.subspaces.items()}


def check_functorial(f: ProjectorFamily) -> bool:
    """pi[a] pi[b] == pi[b] for b <= a, i.e. the images grow along the order."""
    return all(f[a] @ f[b] == f[b] for b, a in f.poset.strict_pairs())


def check_presheafable(f: ProjectorFamily) -> bool:
    """pi[b] pi[a] == pi[b] for b <= a, i.e. ker pi[a] is inside ker pi[b]."""
    return all(f[b] @ f[a] == f[b] for b, a in f.poset.strict_pairs())


def compute_s(f: ProjectorFamily) -> SFamily:
    p = f.poset
    mu = p.mobius()
    n = f.dim
    s = {}
    for a in p.elements:
        acc = RatMatrix.zeros(n, n)
        for b in p.down_set(a):
            c = mu(a, b)
            if c:
                acc = acc + f[b] * c
        s[a] = acc
    total = RatMatrix.zeros(n, n)
    for a in p.elements:
        total = total + s[a]
    return SFamily(p, s, RatMatrix.identity(n) - total)


def check_intersection_semilattice(f: ProjectorFamily) -> bool:
    """pi[a] pi[b] == pi[meet(a, b)] for all pairs; needs a meet semi-lattice."""
    p = f.poset
    for a in p.elements:
        for b in p.elements:
            m = p.meet(a, b)
            if m is None:
                raise NotMeetSemilattice(f"{a!r} and {b!r} have no meet")
            if f[a] @ f[b] != f[m]:
                return False
    return True


def _common_sum(p: FinitePoset, s: Mapping[str, RatMatrix], a: str, b: str, n: int) -> RatMatrix:
    acc = RatMatrix.zeros(n, n)
    below_b = set(p.down_set(b))
    for c in p.down_set(a):
        if c in below_b:
            acc = acc + s[c]
    return acc


def intersection_witness(f: ProjectorFamily, s: SFamily | None = None) -> tuple[str, str] | None:
    """First pair (a, b), in element order, where pi[a] pi[b] differs from the s-sum."""
    if s is None:
        s = compute_s(f)
    p = f.poset
    for a in p.elements:
        for b in p.elements:
            if f[a] @ f[b] != _common_sum(p, s.s, a, b, f.dim):
                return (a, b)
    return None


def check_intersection_general(f: ProjectorFamily) -> bool:
    return intersection_witness(f) is None


def check_intersection_images(f: ProjectorFamily) -> bool:
    """Column form: ``s[c] @ pi[b] == [c <= b] s[c]`` for all c, b.

    The c <= b half says s[c] kills ker pi[b]; the other half says it kills im pi[b].
    """
    s = compute_s(f).s
    p = f.poset
    zero = RatMatrix.zeros(f.dim, f.dim)
    return all(
        s[c] @ f[b] == (s[c] if p.leq(c, b) else zero) for b in p.elements for c in p.elements
    )


def verify_decomposition(s: SFamily) -> bool:
    """s_a s_b == [a == b] s_a over the poset plus the top, and the images split Q^n."""
    items = s.items_with_top()
    for i, (_, x) in enumerate(items):
        for j, (_, y) in enumerate(items):
            prod = x @ y
            if i == j:
                if prod != x:
                    return False
            elif not prod.is_zero():
                return False
    return direct_sum_is_ambient([image(x) for _, x in items])


def decompose(f: ProjectorFamily) -> Decomposition:
    """Certified interaction decomposition, or NotDecomposable with a witness pair."""
    s = compute_s(f)
    witness = intersection_witness(f, s)
    if witness is not None:
        raise NotDecomposable(witness)
    subspaces = {a: image(m) for a, m in s.items_with_top()}
    return Decomposition(s, subspaces, certified=verify_decomposition(s))
