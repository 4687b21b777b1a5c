from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from interdecomp.linalg import (
    DimensionMismatch,
    RatMatrix,
    SingularMatrix,
    Subspace,
    direct_sum_is_ambient,
    embedding,
    format_fraction,
    image,
    inverse,
    is_projector,
    kernel,
    rank,
    restrict,
    rref,
    subspace_leq,
    to_fraction,
)

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    return RatMatrix([[draw(rationals) for _ in range(c)] for _ in range(r)], cols=c)


def test_rref_examples():
    assert rref(RatMatrix.identity(3)) == RatMatrix.identity(3)
    assert rref(RatMatrix([[2, 4], [1, 2]])) == RatMatrix([[1, 2], [0, 0]])
    assert rref(RatMatrix.zeros(2, 3)) == RatMatrix.zeros(2, 3)


def test_image_and_kernel_of_diag():
    d = RatMatrix.diag([1, 0])
    assert image(d) == Subspace.span([[1, 0]], 2)
    assert kernel(d) == Subspace.span([[0, 1]], 2)


def test_projector_and_direct_sum_examples():
    assert is_projector(RatMatrix.diag([1, 1, 0]))
    e = [Subspace.span([v], 3) for v in ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
    assert direct_sum_is_ambient(e)
    skew = [Subspace.span([v], 3) for v in ([1, 0, 0], [1, 1, 0], [0, 1, 0])]
    assert not direct_sum_is_ambient(skew)


def test_rationals_are_parsed_and_printed_canonically():
    assert to_fraction("6/4") == Fraction(3, 2)
    assert format_fraction(Fraction(3, 2)) == "3/2"
    assert format_fraction(Fraction(-4, 2)) == "-2"
    with pytest.raises(TypeError):
        to_fraction(0.5)
    with pytest.raises(TypeError):
        to_fraction(True)


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        RatMatrix([[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        RatMatrix.identity(2) @ RatMatrix.identity(3)
    with pytest.raises(SingularMatrix):
        inverse(RatMatrix([[1, 2], [2, 4]]))
    with pytest.raises(DimensionMismatch):
        subspace_leq(Subspace.zero(2), Subspace.zero(3))


def test_zero_sized_matrices():
    z = RatMatrix.zeros(0, 3)
    assert z.shape == (0, 3)
    assert (RatMatrix.zeros(3, 0) @ z) == RatMatrix.zeros(3, 3)
    assert image(RatMatrix.zeros(2, 0)).dim == 0
    assert inverse(RatMatrix.zeros(0, 0)).shape == (0, 0)


@given(matrices())
def test_rref_is_idempotent_and_keeps_row_space(m):
    r = rref(m)
    assert rref(r) == r
    assert Subspace.span(m.tolist(), m.cols) == Subspace.span(r.tolist(), m.cols)


@given(matrices())
def test_rank_nullity_and_transpose(m):
    assert rank(m) == rank(m.T)
    assert image(m).dim + kernel(m).dim == m.cols
    assert (m @ embedding(kernel(m))).is_zero()


@given(matrices(max_rows=4, max_cols=4))
def test_projector_image_and_kernel_split_the_space(m):
    # Projector onto the row space of m along its orthogonal complement.
    n = m.cols
    s = Subspace.span(m.tolist(), n)
    comp = kernel(s.basis) if s.dim else Subspace.full(n)
    basis = RatMatrix.block([[embedding(s), embedding(comp)]]) if n else RatMatrix.zeros(0, 0)
    sel = RatMatrix.diag([1] * s.dim + [0] * comp.dim) if n else RatMatrix.zeros(0, 0)
    pi = basis @ sel @ inverse(basis)
    assert is_projector(pi)
    assert image(pi) == s
    assert direct_sum_is_ambient([image(pi), kernel(pi)]) or n == 0


@given(matrices(max_rows=4, max_cols=4))
def test_inverse_round_trip_when_invertible(m):
    if m.is_square() and rank(m) == m.rows:
        assert m @ inverse(m) == RatMatrix.identity(m.rows)
        assert inverse(m) @ m == RatMatrix.identity(m.rows)


def test_restrict_to_subspaces():
    src = Subspace.span([[1, 1, 0]], 3)
    dst = Subspace.span([[1, 0], [0, 1]], 2)
    m = RatMatrix([[1, 0, 0], [0, 0, 1]])
    assert restrict(m, src, dst) == RatMatrix([[1], [0]])
    with pytest.raises(ValueError):
        restrict(m, src, Subspace.span([[0, 1]], 2))


def test_coordinates_in_echelon_basis():
    s = Subspace.span([[2, 0, 2], [0, 3, 0]], 3)
    assert s.basis == RatMatrix([[1, 0, 1], [0, 1, 0]])
    assert s.coordinates([4, 5, 4]) == (4, 5)
    assert s.coordinates([1, 0, 0]) is None
    assert Subspace.span([[1, 0, 1]], 3) <= s
