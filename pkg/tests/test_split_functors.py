import random

import pytest
from hypothesis import given, strategies as st

from interdecomp.factor_spaces import ConfigurationSpace, Measure, build_family
from interdecomp.generators import PosetConfig, SplitConfig, perturb_split, random_split_instance
from interdecomp.linalg import RatMatrix, Subspace, embedding, image, inverse, is_invertible, restrict
from interdecomp.poset import FinitePoset, chain
from interdecomp.projectors import NotDecomposable, intersection_witness
from interdecomp.split_functors import (
    FunctorialityViolation,
    ShapeMismatch,
    SplitError,
    SplitViolation,
    build_couplings,
    check_intersection,
    decompose_split,
    intersection_failures,
    j_is_mono,
    j_map,
    j_natural,
    phi_is_iso,
    projector_family_at,
    sum_of_components,
    validate_split,
    verify_couplings,
    zeta_mobius_natural,
)

M = RatMatrix
seeds = st.integers(0, 2**32 - 1)
PERTURBABLE = SplitConfig(
    poset=PosetConfig(max_elements=5, min_elements=3, edge_probability=0.5), min_component_dim=1
)


def vee() -> FinitePoset:
    return FinitePoset.from_relations(["0", "1", "1'"], [("0", "1"), ("0", "1'")])


def constant(p: FinitePoset, d: int):
    gens = {(b, a): M.identity(d) for b, a in p.covers()}
    return validate_split(p, {a: d for a in p.elements}, gens, {(a, b): M.identity(d) for b, a in p.covers()})


def chain_example(f_row=(1, 0)):
    return validate_split(chain(["0", "1"]), {"0": 1, "1": 2}, {("0", "1"): M([[1], [0]])}, {("1", "0"): M([f_row])})


def instances():
    return seeds.map(lambda s: random_split_instance(random.Random(s)))


def perturbed():
    def build(seed):
        rng = random.Random(seed)
        while True:
            inst = random_split_instance(rng, PERTURBABLE)
            new = perturb_split(rng, inst)
            if new is not None:
                return new

    return seeds.map(build)


# -- validation -----------------------------------------------------------------


def test_constant_functor_is_valid():
    sf = constant(vee(), 2)
    assert all(m == M.identity(2) for m in sf.G.values())


def test_chain_example_is_valid_and_bad_retraction_is_rejected():
    chain_example()
    with pytest.raises(SplitViolation) as exc:
        chain_example((0, 1))
    assert exc.value.witness == ("0", "1")


def test_shape_and_missing_generators():
    with pytest.raises(ShapeMismatch):
        validate_split(chain(["0", "1"]), {"0": 1, "1": 2}, {("0", "1"): M([[1, 0]])}, {("1", "0"): M([[1, 0]])})
    with pytest.raises(SplitError):
        validate_split(chain(["0", "1"]), {"0": 1, "1": 2}, {}, {("1", "0"): M([[1, 0]])})


def test_functoriality_violation_on_a_diamond():
    p = FinitePoset.from_relations(["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")])
    dims = {a: 1 for a in p.elements}
    one, two = M([[1]]), M([[2]])
    G = {("0", "x"): one, ("0", "y"): one, ("x", "1"): one, ("y", "1"): two}
    F = {("x", "0"): one, ("y", "0"): one, ("1", "x"): one, ("1", "y"): inverse(two)}
    with pytest.raises(FunctorialityViolation):
        validate_split(p, dims, G, F)


# -- projector families and intersection ------------------------------------------


def test_projector_families():
    sf = constant(vee(), 2)
    assert all(m == M.identity(2) for m in projector_family_at(sf, "1").pi.values())
    fam = projector_family_at(chain_example(), "1")
    assert fam["0"] == M.diag([1, 0])
    assert fam["1"] == M.identity(2)


def test_sum_of_components_gives_coordinate_projections():
    sf = sum_of_components(vee(), {"0": 1, "1": 1, "1'": 1})
    assert sf.dims == {"0": 1, "1": 2, "1'": 2}
    assert sf.g("0", "1") == M([[1], [0]])
    assert sf.f("1", "0") == M([[1, 0]])
    assert projector_family_at(sf, "1")["0"] == M.diag([1, 0])
    assert check_intersection(sf)


def test_degenerate_components():
    sf = sum_of_components(vee(), {"0": 0, "1": 2, "1'": 1})
    assert sf.dims == {"0": 0, "1": 2, "1'": 1}
    assert sf.g("0", "1").shape == (2, 0)
    assert decompose_split(sf).component_dims == {"0": 0, "1": 2, "1'": 1}
    single = sum_of_components(FinitePoset(["x"], [[True]]), {"x": 3})
    assert single.G[("x", "x")] == M.identity(3) == single.F[("x", "x")]


def test_bad_component_arrows():
    with pytest.raises(SplitError):
        sum_of_components(chain(["0", "1"]), {"0": 2}, {("0", "0", "1"): M([[1, 1], [1, 1]])})
    p = FinitePoset.from_relations(["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")])
    arrows = {("0", "x", "1"): M([[2]])}
    with pytest.raises(SplitError):
        sum_of_components(p, {"0": 1}, arrows)


def _uniform_factor_functor():
    """G = inclusions of factor subspaces, F = conditional expectations read inside them."""
    m = Measure.uniform(ConfigurationSpace(("1", "2"), (2, 2)))
    fam = build_family(m)
    p = fam.poset
    spaces = {a: image(fam[a]) for a in p.elements}
    dims = {a: spaces[a].dim for a in p.elements}
    ident = M.identity(fam.dim)
    G = {(b, a): restrict(ident, spaces[b], spaces[a]) for b, a in p.covers()}
    F = {(a, b): restrict(fam[b], spaces[a], spaces[b]) for b, a in p.covers()}
    return validate_split(p, dims, G, F)


def test_uniform_factor_functor_satisfies_intersection():
    sf = _uniform_factor_functor()
    assert check_intersection(sf)
    assert decompose_split(sf).component_dims == {"{}": 1, "{1}": 1, "{2}": 1, "{1,2}": 1}


@given(instances())
def test_sums_of_components_satisfy_intersection(inst):
    assert check_intersection(inst.functor)
    assert intersection_failures(inst.functor) == {}


@given(perturbed())
def test_failures_propagate_upwards(sf):
    failures = intersection_failures(sf)
    assert failures
    for al in failures:
        for be in sf.poset.up_set(al):
            assert be in failures
    assert not check_intersection(sf)


# -- couplings ------------------------------------------------------------------------


def test_coupling_examples():
    cd = build_couplings(chain_example())
    assert cd.spaces[("1", "0")] == Subspace.span([[1, 0]], 2)
    for al in ("0", "1"):
        assert cd.spaces[(al, al)] == Subspace.full(cd.base.dims[al])
    cd = build_couplings(constant(vee(), 2))
    assert all(s == Subspace.full(2) for s in cd.spaces.values())


@given(instances())
def test_couplings_are_coherent(inst):
    cd = build_couplings(inst.functor)
    assert verify_couplings(cd) == []
    assert len(cd.a1) == len(cd.pairs)


@given(perturbed())
def test_couplings_are_coherent_without_intersection(sf):
    assert verify_couplings(build_couplings(sf)) == []


@given(st.one_of(instances().map(lambda i: i.functor), perturbed()))
def test_zeta_and_mobius_commute_with_transport(sf):
    assert zeta_mobius_natural(sf)


@given(st.one_of(instances().map(lambda i: i.functor), perturbed()))
def test_phi_is_an_isomorphism_onto_the_limit(sf):
    assert phi_is_iso(build_couplings(sf))


@given(instances())
def test_j_is_a_natural_monomorphism(inst):
    cd = build_couplings(inst.functor)
    assert j_is_mono(cd)
    assert j_natural(cd)


@given(perturbed())
def test_j_vertical_squares_hold_without_intersection(sf):
    cd = build_couplings(sf)
    assert j_is_mono(cd)
    assert j_natural(cd, require_intersection=False)


# -- decomposition ----------------------------------------------------------------


def test_constant_identity_on_a_chain():
    dec = decompose_split(constant(chain(["0", "1"]), 3))
    assert dec.component_dims == {"0": 3, "1": 0}


def test_chain_split_example():
    dec = decompose_split(chain_example())
    assert dec.certified
    assert dec.component_dims == {"0": 1, "1": 1}
    assert dec.psi["1"].shape == (2, 2) and is_invertible(dec.psi["1"])


@given(instances())
def test_round_trip_recovers_component_dimensions(inst):
    dec = decompose_split(inst.functor)
    assert dec.certified
    assert dict(dec.component_dims) == dict(inst.component_dims)
    for key, up in dec.arrows.items():
        assert is_invertible(up)
        assert inverse(up) == dec.coarrows[key]


@given(instances())
def test_psi_is_j_in_component_coordinates(inst):
    sf = inst.functor
    dec = decompose_split(sf)
    cd = build_couplings(sf)
    for al in sf.poset.elements:
        j = j_map(cd, al, al)
        n = sf.dims[al]
        row = 0
        prow = 0
        for b in sf.poset.down_set(al):
            d = dec.component_dims[b]
            block_j = j.submatrix(range(row, row + n), range(j.cols))
            block_psi = dec.psi[al].submatrix(range(prow, prow + d), range(n))
            transport = sf.g(b, al) @ embedding(dec.spaces[(b, b)])
            assert block_j == transport @ block_psi
            row += n
            prow += d


@given(perturbed())
def test_perturbed_instances_are_not_decomposable(sf):
    with pytest.raises(NotDecomposable) as exc:
        decompose_split(sf)
    al, w = exc.value.alpha, exc.value.witness
    assert intersection_witness(projector_family_at(sf, al)) == w


def test_direct_sums_stay_split():
    a = chain_example()
    b = constant(chain(["0", "1"]), 1)
    dims = {x: a.dims[x] + b.dims[x] for x in ("0", "1")}

    def bd(x, y):
        return RatMatrix.block([[x, M.zeros(x.rows, y.cols)], [M.zeros(y.rows, x.cols), y]])

    sf = validate_split(
        chain(["0", "1"]),
        dims,
        {("0", "1"): bd(a.g("0", "1"), b.g("0", "1"))},
        {("1", "0"): bd(a.f("1", "0"), b.f("1", "0"))},
    )
    assert decompose_split(sf).component_dims == {"0": 2, "1": 1}
