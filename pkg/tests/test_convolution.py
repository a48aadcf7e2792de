"""Tests for the convolution module."""
from fractions import Fraction

import pytest

from halgebra.convolution import (
    ConvElement,
    ConvolutionAlgebra,
    StructureAlgebra,
    conv_bracket,
    linear_element,
    linear_part,
    mc_coefficient,
    mc_residual,
    mc_to_morphism,
    morphism_to_mc,
)
from halgebra.errors import ArityError, HomogeneityError, SpaceMismatchError
from halgebra.graded import MultiMap
from halgebra.infinity import InftyMorphism
from halgebra.two_term import TwoTermMorphism

import builders


@pytest.fixture
def algebra(morphism):
    return ConvolutionAlgebra(morphism.source.to_infinity(), morphism.target.to_infinity())


def test_mc_coefficients():
    """Test the weights (1/p!)(-1)^{p(p-1)/2}."""
    assert [mc_coefficient(p) for p in (1, 2, 3, 4)] == [1, Fraction(-1, 2), Fraction(-1, 6), Fraction(1, 24)]


def test_structure_algebra(heisenberg_module_algebra):
    """Test brackets on vectors and the Maurer-Cartan condition in degree -1."""
    # Arrange
    alg = heisenberg_module_algebra
    V = alg.space

    # Act / Assert
    assert alg.bracket(2, [V.vector("x"), V.vector("y")]) == V.vector("z")
    assert alg.bracket(3, [V.vector("x")] * 3).is_zero()
    assert alg.is_mc(V.vector("ax") + V.vector("ay") * 3)
    assert alg.degree_of(V.vector("ax")) == -1
    with pytest.raises(ArityError):
        alg.bracket(2, [V.vector("x")])
    with pytest.raises(HomogeneityError):
        alg.degree_of(alg.zero(0))


def test_structure_algebra_needs_a_lie_structure(crossed_module):
    """Test that Leibniz structures are refused."""
    with pytest.raises(SpaceMismatchError):
        StructureAlgebra(crossed_module.to_infinity())


def test_convolution_algebra_needs_leibniz_structures():
    """Test that Lie structures are refused."""
    s = builders.heisenberg_module()
    with pytest.raises(SpaceMismatchError):
        ConvolutionAlgebra(s, s)


def test_arity_bound(algebra):
    """Test the degree bound on the arity of convolution elements between 2-term algebras."""
    assert algebra.arity_bound(-2) == 3
    assert algebra.arity_bound(-1) == 2
    assert algebra.arity_bound(0) == 1
    assert algebra.filtration_length() == 2


def test_element_validation(algebra):
    """Test that components of the wrong arity, degree or space are refused."""
    S, W = algebra.suspended, algebra.target_space
    with pytest.raises(ArityError):
        ConvElement(algebra, -1, {2: MultiMap.zero(1, -1, S, W)})
    with pytest.raises(HomogeneityError):
        ConvElement(algebra, -1, {1: MultiMap.zero(1, 0, S, W)})
    with pytest.raises(SpaceMismatchError):
        ConvElement(algebra, -1, {1: MultiMap.zero(1, -1, W, W)})


def test_element_arithmetic(algebra, morphism, homotopy):
    """Test sums, scalar multiples and the zero element."""
    alpha = morphism_to_mc(morphism.to_infinity(), algebra)
    assert alpha + alpha == alpha * 2
    assert (alpha - alpha).is_zero()
    assert algebra.zero(3) == algebra.zero(-1)
    with pytest.raises(HomogeneityError):
        _ = alpha + linear_element(algebra, homotopy.theta)


def test_morphisms_are_maurer_cartan(morphism, algebra):
    """Test that a valid 2-term morphism is a Maurer-Cartan element and survives the round trip."""
    # Act
    alpha = morphism_to_mc(morphism.to_infinity(), algebra)

    # Assert
    assert alpha.degree == -1
    assert mc_residual(alpha).is_zero()
    assert algebra.is_mc(alpha)
    back = mc_to_morphism(alpha)
    assert back.component(1) == morphism.f1
    assert back.component(2) == morphism.f2
    assert TwoTermMorphism.from_infinity(back) == morphism


def test_broken_morphism_is_not_maurer_cartan(rng, morphism):
    """Test that changing f_2 gives a nonzero Maurer-Cartan residual."""
    # Arrange
    extra = builders.random_map(rng, 2, 1, morphism.source.space, morphism.target.space, values=(1, 2))
    broken = InftyMorphism(
        morphism.source.to_infinity(), morphism.target.to_infinity(), {1: morphism.f1, 2: morphism.f2 + extra}
    )

    # Act
    residual = mc_residual(morphism_to_mc(broken))

    # Assert
    assert not residual.is_zero()
    assert residual.degree == -2


def test_mc_residual_needs_degree_minus_one(algebra, homotopy):
    """Test that elements of other degrees are refused."""
    with pytest.raises(HomogeneityError):
        mc_residual(linear_element(algebra, homotopy.theta))


def test_morphism_must_match_the_algebra(rng, morphism, algebra):
    """Test that a morphism between other algebras is refused."""
    other = builders.random_morphism(rng, morphism.source, name="U")
    with pytest.raises(SpaceMismatchError):
        morphism_to_mc(other.to_infinity(), algebra)


def test_linear_elements(algebra, homotopy):
    """Test b(sx) = θ(x) for a homotopy component and its inverse."""
    # Act
    b = linear_element(algebra, homotopy.theta)

    # Assert
    assert b.degree == 0
    assert sorted(b.components) == [1]
    assert linear_part(b) == homotopy.theta
    with pytest.raises(SpaceMismatchError):
        linear_element(algebra, MultiMap.identity(algebra.suspended))


def test_differential_squares_to_zero(algebra, homotopy, morphism):
    """Test ℒ_1 ∘ ℒ_1 = 0 on elements of several degrees."""
    for f in (linear_element(algebra, homotopy.theta), morphism_to_mc(morphism.to_infinity(), algebra)):
        assert algebra.differential(algebra.differential(f)).is_zero()


def test_binary_bracket_is_graded_antisymmetric(rng, algebra, morphism):
    """Test ℒ_2(a, b) = -ℒ_2(b, a) for degree-0 elements."""
    # Arrange
    V, W = morphism.source.space, morphism.target.space
    a = linear_element(algebra, builders.random_map(rng, 1, 1, V, W, values=(1, -1, 2)))
    b = linear_element(algebra, builders.random_map(rng, 1, 1, V, W, values=(1, 2)))

    # Act
    ab = conv_bracket(2, [a, b])
    ba = conv_bracket(2, [b, a])

    # Assert
    assert ab == -ba
    assert conv_bracket(2, [a, a]).is_zero()


def test_brackets_check_their_inputs(algebra, morphism):
    """Test empty brackets and elements of another algebra."""
    other = ConvolutionAlgebra(morphism.source.to_infinity(), morphism.target.to_infinity())
    a = linear_element(algebra, morphism.f1)
    with pytest.raises(ArityError):
        conv_bracket(2, [])
    with pytest.raises(ArityError):
        algebra.bracket(2, [a])
    with pytest.raises(SpaceMismatchError):
        algebra.bracket(2, [a, linear_element(other, morphism.f1)])
