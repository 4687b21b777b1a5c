import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from interdecomp.generators import FamilyConfig, PosetConfig, planted_family, random_invertible, random_poset
from interdecomp.linalg import RatMatrix, Subspace, direct_sum_is_ambient, image, inverse
from interdecomp.poset import TOP, FinitePoset, boolean_lattice, chain
from interdecomp.projectors import (
    FamilyError,
    NotAProjector,
    NotDecomposable,
    NotMeetSemilattice,
    ProjectorFamily,
    check_functorial,
    check_intersection_general,
    check_intersection_images,
    check_intersection_semilattice,
    check_presheafable,
    compute_s,
    decompose,
    intersection_witness,
    verify_decomposition,
)
from oracles import intersection_holds_image_form, lemma_pair_fails, s_by_inversion

HALF = Fraction(1, 2)
DIAG_LINE = RatMatrix([[HALF, HALF], [HALF, HALF]])  # onto span{e1 + e2}


def example_family() -> ProjectorFamily:
    p = FinitePoset.from_relations(["0", "1", "1'"], [("0", "1"), ("0", "1'")])
    return ProjectorFamily(
        p,
        3,
        {"0": RatMatrix.diag([1, 0, 0]), "1": RatMatrix.diag([1, 1, 0]), "1'": RatMatrix.diag([1, 0, 1])},
    )


def bowtie() -> FinitePoset:
    return FinitePoset.from_relations(
        ["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
    )


seeds = st.integers(0, 2**32 - 1)


@st.composite
def random_families(draw):
    """Families of commuting-or-not projectors: pi_a = B_a D_a B_a^-1 with random data."""
    rng = random.Random(draw(seeds))
    p = random_poset(rng, PosetConfig(max_elements=4))
    n = rng.randint(1, 4)
    pi = {}
    shared = random_invertible(rng, n)
    for a in p.elements:
        basis = shared if rng.random() < 0.5 else random_invertible(rng, n)
        d = RatMatrix.diag([rng.randint(0, 1) for _ in range(n)])
        pi[a] = basis @ d @ inverse(basis)
    return ProjectorFamily(p, n, pi)


# -- construction -----------------------------------------------------------------


def test_family_validation():
    p = chain(["0"])
    with pytest.raises(NotAProjector):
        ProjectorFamily(p, 2, {"0": RatMatrix([[1, 1], [0, 0]]) * 2})
    with pytest.raises(FamilyError):
        ProjectorFamily(p, 2, {"0": RatMatrix.identity(3)})
    with pytest.raises(FamilyError):
        ProjectorFamily(p, 2, {})


def test_functorial_examples():
    assert check_functorial(example_family())
    assert check_functorial(ProjectorFamily(chain(["x"]), 2, {"x": DIAG_LINE}))
    bad = ProjectorFamily(chain(["0", "1"]), 2, {"0": DIAG_LINE, "1": RatMatrix.diag([1, 0])})
    assert not check_functorial(bad)


def test_presheafable_examples():
    assert check_presheafable(example_family())
    bad = ProjectorFamily(chain(["0", "1"]), 2, {"0": RatMatrix.diag([0, 1]), "1": DIAG_LINE})
    assert not check_presheafable(bad)


def test_s_of_the_example():
    s = compute_s(example_family())
    assert s.s["0"] == RatMatrix.diag([1, 0, 0])
    assert s.s["1"] == RatMatrix.diag([0, 1, 0])
    assert s.s["1'"] == RatMatrix.diag([0, 0, 1])
    assert s.s_top.is_zero()


def test_s_trivial_cases():
    single = ProjectorFamily(chain(["x"]), 2, {"x": DIAG_LINE})
    assert compute_s(single).s["x"] == DIAG_LINE
    flat = ProjectorFamily(chain(["0", "1"]), 2, {"0": DIAG_LINE, "1": DIAG_LINE})
    assert compute_s(flat).s["1"].is_zero()


@given(random_families())
def test_s_reconstructs_the_family(f):
    s = compute_s(f)
    for a in f.poset.elements:
        assert s.reconstruct(a) == f[a]
    assert s.s == s_by_inversion(f.poset, f.pi, f.dim)


# -- intersection property ----------------------------------------------------------


def test_semilattice_form_on_the_example():
    assert check_intersection_semilattice(example_family())
    assert check_intersection_semilattice(ProjectorFamily(chain(["x"]), 2, {"x": DIAG_LINE}))
    ids = {a: RatMatrix.identity(1) for a in "abcd"}
    with pytest.raises(NotMeetSemilattice):
        check_intersection_semilattice(ProjectorFamily(bowtie(), 1, ids))


def test_general_form_on_the_bowtie():
    good = {"a": RatMatrix.diag([1, 0]), "b": RatMatrix.diag([0, 1]), "c": RatMatrix.identity(2), "d": RatMatrix.identity(2)}
    f = ProjectorFamily(bowtie(), 2, good)
    assert check_intersection_general(f)
    # pi_a pi_b = 0 agrees with the (empty) s-sum.
    assert (f["a"] @ f["b"]).is_zero()
    bad = {"a": DIAG_LINE, "b": DIAG_LINE, "c": RatMatrix.identity(2), "d": RatMatrix.identity(2)}
    g = ProjectorFamily(bowtie(), 2, bad)
    # Brute force: pi_a pi_b is the line projector while no element lies below both.
    assert lemma_pair_fails(bowtie(), bad, 2, "a", "b")
    assert not check_intersection_general(g)
    assert intersection_witness(g) == ("a", "b")


@given(random_families())
def test_general_and_column_forms_agree(f):
    ok = check_intersection_general(f)
    assert ok == check_intersection_images(f)
    assert ok == intersection_holds_image_form(f.poset, f.pi, f.dim)


def test_nested_images_without_nested_kernels():
    # Functorial but not presheafable: only the kernel half of the column form fails.
    f = ProjectorFamily(
        chain(["0", "1"]), 2, {"0": RatMatrix([[3, -4], [Fraction(3, 2), -2]]), "1": RatMatrix([[2, -2], [1, -1]])}
    )
    assert check_functorial(f) and not check_presheafable(f)
    assert not check_intersection_general(f)
    assert not check_intersection_images(f)


@given(random_families())
def test_general_and_semilattice_forms_agree_on_semilattices(f):
    if f.poset.is_meet_semilattice():
        assert check_intersection_general(f) == check_intersection_semilattice(f)


@given(random_families())
def test_witness_is_a_genuine_failure(f):
    w = intersection_witness(f)
    if w is None:
        return
    assert lemma_pair_fails(f.poset, f.pi, f.dim, *w)
    # Lexicographically first in element order.
    order = {a: i for i, a in enumerate(f.poset.elements)}
    for a in f.poset.elements:
        for b in f.poset.elements:
            if (order[a], order[b]) < (order[w[0]], order[w[1]]):
                assert not lemma_pair_fails(f.poset, f.pi, f.dim, a, b)


# -- decomposition ----------------------------------------------------------------


def test_decompose_the_example():
    d = decompose(example_family())
    assert d.certified
    assert d.subspaces["0"] == Subspace.span([[1, 0, 0]], 3)
    assert d.subspaces["1"] == Subspace.span([[0, 1, 0]], 3)
    assert d.subspaces["1'"] == Subspace.span([[0, 0, 1]], 3)
    assert d.subspaces[TOP].dim == 0


def test_identity_family_concentrates_on_the_bottom():
    p = boolean_lattice(["1", "2"])
    d = decompose(ProjectorFamily(p, 3, {a: RatMatrix.identity(3) for a in p.elements}))
    assert d.dims == {"{}": 3, "{1}": 0, "{2}": 0, "{1,2}": 0, TOP: 0}


def test_decompose_raises_with_the_witness():
    bad = {"a": DIAG_LINE, "b": DIAG_LINE, "c": RatMatrix.identity(2), "d": RatMatrix.identity(2)}
    with pytest.raises(NotDecomposable) as exc:
        decompose(ProjectorFamily(bowtie(), 2, bad))
    assert exc.value.witness == ("a", "b")


@given(seeds)
def test_planted_families_are_recovered(seed):
    pf = planted_family(random.Random(seed), FamilyConfig())
    d = decompose(pf.family)
    assert d.certified
    assert dict(d.subspaces) == dict(pf.planted)


@given(random_families())
def test_passing_families_carry_a_certificate(f):
    if not check_intersection_general(f):
        return
    s = compute_s(f)
    assert verify_decomposition(s)
    assert direct_sum_is_ambient([image(m) for _, m in s.items_with_top()])


@given(random_families())
def test_s_times_pi_on_semilattices(f):
    p = f.poset
    if not p.is_meet_semilattice() or not check_intersection_general(f):
        return
    s = compute_s(f).s
    for a in p.elements:
        for b in p.elements:
            expected = s[b] if p.leq(b, a) else RatMatrix.zeros(f.dim, f.dim)
            assert s[b] @ f[a] == expected
