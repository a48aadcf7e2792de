"""Tests for the two_term module."""
import random

import pytest

from halgebra.errors import HomogeneityError, InvalidStructureError, SpaceMismatchError
from halgebra.graded import GradedSpace, MultiMap
from halgebra.infinity import check_inf_morphism, check_leibniz_infinity
from halgebra.two_term import (
    TwoTermHomotopy,
    TwoTermLeibniz,
    TwoTermMorphism,
    check_homotopy,
    check_two_term_algebra,
    check_two_term_morphism,
    compose_two_term,
    hcompose,
    homotopy_defect,
    homotopy_target,
    push_forward,
    relation_tables,
    vcompose,
    whisker_left,
    whisker_right,
)

import builders

# Relation families of check_two_term_algebra grouped by the generic identity index they come from.
IDENTITY_GROUPS = {2: ("a1", "a2", "b"), 3: ("c", "d1", "d2", "d3"), 4: ("e",)}


@pytest.fixture
def square(rng, crossed_module):
    """θ: f ⇒ g and θ': g ⇒ k out of V, τ: f' ⇒ g' and τ': g' ⇒ k' out of W."""
    f = builders.random_morphism(rng, crossed_module)
    f_prime = builders.random_morphism(rng, f.target, name="X")
    theta, theta_prime = builders.homotopy_chain(rng, f, 2)
    tau, tau_prime = builders.homotopy_chain(rng, f_prime, 2)
    return theta, theta_prime, tau, tau_prime


def test_crossed_module_passes(crossed_module):
    """Test that the crossed module satisfies every 2-term relation."""
    # Act
    report = check_two_term_algebra(crossed_module)

    # Assert
    assert report.passed
    assert report.name == "two-term-algebra"
    assert report.checked == relation_tables(crossed_module)


def test_relation_tables(crossed_module):
    """Test the input counts per relation family."""
    tables = relation_tables(crossed_module)
    assert tables["a1"] == 4
    assert tables["c"] == 8
    assert tables["e"] == 16


def test_space_must_have_two_terms():
    """Test that a space with a degree-2 part is refused."""
    with pytest.raises(HomogeneityError):
        TwoTermLeibniz.build(GradedSpace("V", {0: 1, 2: 1}))


def test_infinity_round_trip(crossed_module):
    """Test the passage to a Leibniz∞ structure and back."""
    assert TwoTermLeibniz.from_infinity(crossed_module.to_infinity()) == crossed_module


def test_broken_jacobiator_fails_relation_c():
    """Test that a bracket violating the Leibniz identity up to l_1 l_3 fails family c."""
    # Arrange
    V = builders.two_term_space()
    l2 = builders.entries(2, 0, V, [(("x", "y"), "x", 1)])
    a = TwoTermLeibniz.build(V, l2=l2)

    # Act
    report = check_two_term_algebra(a)

    # Assert
    assert not report.family_passed("c")
    assert not report.residual("c", (V["x"], V["y"], V["y"])).is_zero()


@pytest.mark.parametrize("seed", builders.seeds(200, fast=6))
def test_relations_match_generic_identities(seed):
    """Test that each group of 2-term relations fails exactly when the matching generic identity fails."""
    # Arrange
    a = builders.random_two_term(random.Random(seed))

    # Act
    direct = check_two_term_algebra(a)
    generic = check_leibniz_infinity(a.to_infinity(), n_max=5)

    # Assert
    assert direct.passed == generic.passed
    for n, families in IDENTITY_GROUPS.items():
        assert all(direct.family_passed(f) for f in families) == generic.family_passed(f"n={n}"), n
    assert generic.family_passed("n=1")
    assert generic.family_passed("n=5")


def test_valid_algebras_pass_the_generic_checker(rng, crossed_module):
    """Test valid algebras, including transported ones, against the generic checker."""
    for a in (crossed_module, builders.random_morphism(rng, crossed_module).target):
        assert check_two_term_algebra(a).passed
        assert check_leibniz_infinity(a.to_infinity(), n_max=5).passed


def test_push_forward_gives_a_valid_morphism(morphism):
    """Test that transport along an invertible f_1 produces a valid target and morphism."""
    assert check_two_term_algebra(morphism.target).passed
    assert check_two_term_morphism(morphism).passed
    assert check_inf_morphism(morphism.to_infinity()).passed


def test_push_forward_needs_an_inverse(rng, crossed_module):
    """Test that a wrong inverse of f_1 is refused."""
    W = builders.two_term_space("W", prefix="w")
    V = crossed_module.space
    f1, _ = builders.unipotent_pair(rng, V, W)
    with pytest.raises(InvalidStructureError):
        push_forward(crossed_module, f1, MultiMap.zero(1, 0, W, V), MultiMap.zero(2, 1, V, W))


def test_perturbed_morphism_fails(rng, morphism):
    """Test that changing f_2 breaks the morphism relations and the two checkers agree."""
    # Arrange
    extra = builders.random_map(rng, 2, 1, morphism.source.space, morphism.target.space, values=(1, 2))
    broken = TwoTermMorphism(morphism.source, morphism.target, morphism.f1, morphism.f2 + extra)

    # Act
    report = check_two_term_morphism(broken)

    # Assert
    assert not report.passed
    assert not check_inf_morphism(broken.to_infinity()).passed


def test_morphism_maps_are_validated(crossed_module):
    """Test that components of the wrong degree are refused."""
    V = crossed_module.space
    with pytest.raises(HomogeneityError):
        TwoTermMorphism(crossed_module, crossed_module, MultiMap.zero(1, 1, V, V), MultiMap.zero(2, 1, V, V))


def test_composition(rng, morphism):
    """Test that composites of valid morphisms are valid and identities are units."""
    # Arrange
    g = builders.random_morphism(rng, morphism.target, name="X")

    # Act
    gf = compose_two_term(g, morphism)

    # Assert
    assert check_two_term_morphism(gf).passed
    assert compose_two_term(TwoTermMorphism.identity(morphism.target), morphism) == morphism
    assert compose_two_term(morphism, TwoTermMorphism.identity(morphism.source)) == morphism
    with pytest.raises(SpaceMismatchError):
        compose_two_term(morphism, g)


def test_identity_homotopy(morphism):
    """Test that the zero homotopy from f to itself is valid."""
    report = check_homotopy(TwoTermHomotopy.identity(morphism))
    assert report.passed
    assert report.name == "two-term-homotopy"


def test_homotopy_target_solves_the_relations(homotopy):
    """Test that the solved target is a morphism and θ a homotopy to it."""
    assert check_homotopy(homotopy).passed
    assert check_two_term_morphism(homotopy.target).passed
    assert homotopy.target != homotopy.source


def test_wrong_endpoint_fails_the_homotopy(homotopy):
    """Test that θ is not a homotopy from f to itself."""
    report = homotopy_defect(homotopy.source, homotopy.source, homotopy.theta)
    assert not report.family_passed("a")


def test_homotopy_validation(morphism, rng, crossed_module):
    """Test that θ must have degree 1 and both ends must act between the same algebras."""
    V, W = morphism.source.space, morphism.target.space
    with pytest.raises(HomogeneityError):
        TwoTermHomotopy(morphism, morphism, MultiMap.zero(1, 0, V, W))
    other = builders.random_morphism(rng, crossed_module, name="U")
    with pytest.raises(SpaceMismatchError):
        TwoTermHomotopy(morphism, other, MultiMap.zero(1, 1, V, W))


def test_vertical_composition(rng, morphism):
    """Test that θ' • θ has component θ + θ' and is a homotopy from f to k."""
    # Arrange
    theta, theta_prime = builders.homotopy_chain(rng, morphism, 2)

    # Act
    composite = vcompose(theta_prime, theta)

    # Assert
    assert composite.source == theta.source
    assert composite.target == theta_prime.target
    assert composite.theta == theta.theta + theta_prime.theta
    assert check_homotopy(composite).passed
    with pytest.raises(SpaceMismatchError):
        vcompose(theta, theta_prime)


def test_whiskering(square):
    """Test that whiskering by morphisms on either side gives valid homotopies."""
    theta, _, tau, _ = square

    # Act
    left = whisker_left(tau, theta.source)
    right = whisker_right(theta, tau.source)

    # Assert
    assert check_homotopy(left).passed
    assert check_homotopy(right).passed
    assert left.theta == tau.theta.compose(theta.source.f1)
    with pytest.raises(SpaceMismatchError):
        whisker_left(theta, theta.source)


def test_horizontal_composition_is_a_whiskered_composite(square):
    """Test τ ∘ θ = (g' ∘ θ) • (τ ∘ f)."""
    theta, _, tau, _ = square

    # Act
    composite = hcompose(tau, theta)

    # Assert
    assert check_homotopy(composite).passed
    assert composite == vcompose(whisker_right(theta, tau.target), whisker_left(tau, theta.source))


def test_interchange_law(square):
    """Test (τ' • τ) ∘ (θ' • θ) = (τ' ∘ θ') • (τ ∘ θ)."""
    theta, theta_prime, tau, tau_prime = square

    # Act
    lhs = hcompose(vcompose(tau_prime, tau), vcompose(theta_prime, theta))
    rhs = vcompose(hcompose(tau_prime, theta_prime), hcompose(tau, theta))

    # Assert
    assert lhs == rhs


def test_homotopy_target_of_zero_is_the_source(morphism):
    """Test that θ = 0 leaves the morphism unchanged."""
    zero = MultiMap.zero(1, 1, morphism.source.space, morphism.target.space)
    assert homotopy_target(morphism, zero) == morphism


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(50))
def test_random_homotopies_and_composites(seed):
    """Test the homotopy operations over many random instances."""
    rng = random.Random(seed)
    a = builders.crossed_module()
    f = builders.random_morphism(rng, a)
    f_prime = builders.random_morphism(rng, f.target, name="X")
    theta, theta_prime = builders.homotopy_chain(rng, f, 2)
    tau, tau_prime = builders.homotopy_chain(rng, f_prime, 2)
    for h in (theta, theta_prime, tau, vcompose(theta_prime, theta), hcompose(tau, theta)):
        assert check_homotopy(h).passed
        assert check_two_term_morphism(h.target).passed
    assert hcompose(vcompose(tau_prime, tau), vcompose(theta_prime, theta)) == vcompose(
        hcompose(tau_prime, theta_prime), hcompose(tau, theta)
    )
