"""Exact dense linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` entries; there is no
floating point path. Subspaces are stored as the nonzero rows of a reduced
row echelon form, so two subspaces are equal exactly when their bases are.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

__all__ = [
    "RatMatrix",
    "Subspace",
    "DimensionMismatch",
    "SingularMatrix",
    "to_fraction",
    "format_fraction",
    "rref",
    "rank",
    "image",
    "kernel",
    "inverse",
    "is_projector",
    "subspace_leq",
    "direct_sum_is_ambient",
    "restrict",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionMismatch(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


def to_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings. Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def format_fraction(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class RatMatrix:
    """Immutable rows x cols matrix of Fractions.

    Zero-width and zero-height matrices are allowed; pass ``cols`` explicitly
    when ``data`` has no rows.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable] = (), cols: int | None = None):
        grid = tuple(tuple(to_fraction(x) for x in row) for row in data)
        if cols is None:
            if not grid:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(grid[0])
        for row in grid:
            if len(row) != cols:
                raise DimensionMismatch("ragged matrix rows")
        self.rows = len(grid)
        self.cols = cols
        self._data = grid
        self._hash = None

    @classmethod
    def _raw(cls, grid: tuple, cols: int) -> "RatMatrix":
        m = cls.__new__(cls)
        m.rows = len(grid)
        m.cols = cols
        m._data = grid
        m._hash = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls._raw(tuple((ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls._raw(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def diag(cls, entries: Sequence) -> "RatMatrix":
        vals = [to_fraction(x) for x in entries]
        n = len(vals)
        return cls._raw(
            tuple(tuple(vals[i] if i == j else ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RatMatrix":
        cols = [tuple(to_fraction(x) for x in c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise DimensionMismatch("column length does not match row count")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(rows)), len(cols))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["RatMatrix"]]) -> "RatMatrix":
        """Assemble a block matrix; every block row must agree on heights."""
        out = []
        cols = None
        for brow in blocks:
            heights = {b.rows for b in brow}
            if len(heights) != 1:
                raise DimensionMismatch("block row with unequal heights")
            width = sum(b.cols for b in brow)
            if cols is None:
                cols = width
            elif cols != width:
                raise DimensionMismatch("block rows with unequal widths")
            for i in range(heights.pop()):
                out.append(tuple(x for b in brow for x in b._data[i]))
        return cls._raw(tuple(out), cols or 0)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def to_strings(self) -> list[list[str]]:
        return [[format_fraction(x) for x in r] for r in self._data]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix._raw(
            tuple(tuple(self._data[i][j] for i in range(self.rows)) for j in range(self.cols)),
            self.rows,
        )

    transpose = T

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_fraction(x) for x in r) + "]" for r in self._data)
        return f"RatMatrix([{body}], cols={self.cols})"

    def _check_same_shape(self, other: "RatMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other)
        return RatMatrix._raw(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.cols,
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other)
        return RatMatrix._raw(
            tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.cols,
        )

    def __neg__(self) -> "RatMatrix":
        return RatMatrix._raw(tuple(tuple(-x for x in r) for r in self._data), self.cols)

    def __mul__(self, scalar) -> "RatMatrix":
        if isinstance(scalar, RatMatrix):
            return NotImplemented
        c = to_fraction(scalar)
        return RatMatrix._raw(tuple(tuple(c * x for x in r) for r in self._data), self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        # Integer kernels: scale rows/columns by their common denominator,
        # multiply exactly in ints, then normalise each entry once.
        cols = [_scaled(c) for c in other.T._data]
        out = []
        for r in self._data:
            d, ints = _scaled(r)
            nz = [(k, x) for k, x in enumerate(ints) if x]
            if not nz:
                out.append((ZERO,) * other.cols)
                continue
            out.append(tuple(Fraction(sum(x * c[k] for k, x in nz), d * e) for e, c in cols))
        return RatMatrix._raw(tuple(out), other.cols)

    def apply(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise DimensionMismatch("vector length does not match matrix width")
        return tuple(sum((x * y for x, y in zip(r, v) if x), ZERO) for r in self._data)

    def is_zero(self) -> bool:
        return all(not x for r in self._data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix._raw(tuple(tuple(self._data[i][j] for j in cols) for i in rows), len(cols))


def _scaled(v: Sequence[Fraction]) -> tuple[int, list[int]]:
    d = lcm(*(x.denominator for x in v)) if v else 1
    return d, [x.numerator * (d // x.denominator) for x in v]


def _rref_rows(m: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(r) for r in m._data]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        p = next((i for i in range(r, m.rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        if lead != 1:
            a[r] = [x / lead for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return a, pivots


def rref(m: RatMatrix) -> RatMatrix:
    """Reduced row echelon form, same shape as ``m`` (zero rows kept at the bottom)."""
    a, _ = _rref_rows(m)
    return RatMatrix._raw(tuple(tuple(r) for r in a), m.cols)


def rank(m: RatMatrix) -> int:
    return len(_rref_rows(m)[1])


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n given by the rows of a reduced echelon basis."""

    ambient_dim: int
    basis: RatMatrix

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise DimensionMismatch("basis width differs from ambient dimension")

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        m = RatMatrix(vectors, cols=ambient_dim)
        a, pivots = _rref_rows(m)
        return cls(ambient_dim, RatMatrix._raw(tuple(tuple(r) for r in a[: len(pivots)]), ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, RatMatrix.zeros(0, ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, RatMatrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis._data)

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return [self.basis.row(i) for i in range(self.dim)]

    def coordinates(self, v: Sequence) -> tuple[Fraction, ...] | None:
        """Coordinates of ``v`` in the echelon basis, or None if ``v`` is outside."""
        v = tuple(to_fraction(x) for x in v)
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length differs from ambient dimension")
        coords = tuple(v[p] for p in self.pivots)
        recon = [ZERO] * self.ambient_dim
        for c, b in zip(coords, self.basis._data):
            if c:
                for j, x in enumerate(b):
                    if x:
                        recon[j] += c * x
        return coords if tuple(recon) == v else None

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def __le__(self, other: "Subspace") -> bool:
        return subspace_leq(self, other)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        return Subspace.span(self.vectors() + other.vectors(), self.ambient_dim)


def image(m: RatMatrix) -> Subspace:
    """Column space of ``m`` inside Q^rows."""
    return Subspace.span(m.T._data, m.rows)


def kernel(m: RatMatrix) -> Subspace:
    """Null space of ``m`` inside Q^cols."""
    a, pivots = _rref_rows(m)
    free = [j for j in range(m.cols) if j not in pivots]
    vecs = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -a[r][f]
        vecs.append(v)
    return Subspace.span(vecs, m.cols)


def inverse(m: RatMatrix) -> RatMatrix:
    if not m.is_square():
        raise DimensionMismatch("only square matrices are invertible")
    n = m.rows
    aug = RatMatrix._raw(
        tuple(r + tuple(ONE if i == j else ZERO for j in range(n)) for i, r in enumerate(m._data)),
        2 * n,
    )
    a, pivots = _rref_rows(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise SingularMatrix("matrix is singular")
    return RatMatrix._raw(tuple(tuple(r[n:]) for r in a), n)


def is_invertible(m: RatMatrix) -> bool:
    return m.is_square() and rank(m) == m.rows


def is_projector(m: RatMatrix) -> bool:
    return m.is_square() and m @ m == m


def subspace_leq(s1: Subspace, s2: Subspace) -> bool:
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionMismatch("ambient dimensions differ")
    return all(s2.contains(v) for v in s1.vectors())


def direct_sum_is_ambient(spaces: Sequence[Subspace]) -> bool:
    """True iff the spaces are independent and together span the ambient space."""
    if not spaces:
        return False
    n = spaces[0].ambient_dim
    if any(s.ambient_dim != n for s in spaces):
        raise DimensionMismatch("ambient dimensions differ")
    vecs = [v for s in spaces for v in s.vectors()]
    if len(vecs) != n:
        return False
    return n == 0 or rank(RatMatrix(vecs, cols=n)) == n


def restrict(m: RatMatrix, src: Subspace, dst: Subspace) -> RatMatrix:
    """Matrix of ``m`` restricted to ``src`` -> ``dst`` in their echelon bases.

    Raises ValueError when ``m`` does not carry ``src`` into ``dst``.
    """
    if m.cols != src.ambient_dim or m.rows != dst.ambient_dim:
        raise DimensionMismatch("map does not fit the given subspaces")
    columns = []
    for v in src.vectors():
        c = dst.coordinates(m.apply(v))
        if c is None:
            raise ValueError("map does not send the source subspace into the target")
        columns.append(c)
    return RatMatrix.from_columns(columns, dst.dim)


def embedding(s: Subspace) -> RatMatrix:
    """The ambient_dim x dim matrix whose columns are the basis of ``s``."""
    return s.basis.T
