"""Tests for the simplex module."""
import random

import pytest

from halgebra.convolution import ConvolutionAlgebra, linear_element
from halgebra.errors import ArityError, ConvergenceError, HomogeneityError, InvalidStructureError
from halgebra.forms import SimplexForm
from halgebra.simplex import (
    SimplexTensor,
    b_forward,
    b_inverse,
    b_inverse_iterates,
    closed_form,
    extract_homotopy,
    filler_data,
    is_simplex_mc,
    lift_homotopy,
    simplex_bracket,
    tensor_mc_residual,
    vcompose_via_simplex,
)
from halgebra.two_term import vcompose

import builders


@pytest.fixture
def module_algebra(heisenberg_module_algebra):
    return heisenberg_module_algebra


def test_tensor_validation(module_algebra):
    """Test that mixed degrees and zero constants are refused."""
    V = module_algebra.space
    with pytest.raises(HomogeneityError):
        SimplexTensor(module_algebra, 1, 0, {((), (0,)): V.vector("x"), ((0,), (0,)): V.vector("x")})
    with pytest.raises(HomogeneityError):
        SimplexTensor.constant(module_algebra, 1, V.vector("x") * 0)


def test_tensor_arithmetic(module_algebra):
    """Test that c ⊗ ω is linear in both factors."""
    # Arrange
    V = module_algebra.space
    t = SimplexForm.affine(1, 1)
    x, y = V.vector("x"), V.vector("y")

    # Act
    total = SimplexTensor.tensor(module_algebra, x, t) + SimplexTensor.tensor(module_algebra, y, t)

    # Assert
    assert total == SimplexTensor.tensor(module_algebra, x + y, t)
    assert (total - total).is_zero()
    assert SimplexTensor.tensor(module_algebra, x, t * 2) == total * 2 - SimplexTensor.tensor(module_algebra, y, t) * 2
    assert total.degree == 0


def test_evaluation_and_restriction(module_algebra):
    """Test ε̄ at the vertices and pulling back along an edge."""
    # Arrange
    V = module_algebra.space
    c = V.vector("ay")
    alpha = SimplexTensor.tensor(module_algebra, c, SimplexForm.affine(2, 2))

    # Act / Assert
    assert alpha.evaluate(2) == c
    assert alpha.evaluate(0).is_zero()
    assert alpha.restrict_to_edge(0, 2) == SimplexTensor.tensor(module_algebra, c, SimplexForm.affine(1, 1))
    assert alpha.restrict_to_edge(0, 1).is_zero()


@pytest.mark.parametrize("i", [0, 1])
def test_tensor_contraction_is_a_homotopy(module_algebra, i):
    """Test d̄ h̄ + h̄ d̄ = id - ε̄ on a tensor with a function and a 1-form part."""
    # Arrange
    V = module_algebra.space
    alpha = (
        SimplexTensor.tensor(module_algebra, V.vector("ax"), SimplexForm.monomial(1, (), (2,), 3))
        + SimplexTensor.tensor(module_algebra, V.vector("ay"), SimplexForm.constant(1))
        + SimplexTensor.tensor(module_algebra, V.vector("x"), SimplexForm.monomial(1, (0,), (1,)))
    )

    # Act
    lhs = alpha.h(i).d() + alpha.d().h(i)

    # Assert
    assert lhs == alpha - SimplexTensor.constant(module_algebra, 1, alpha.evaluate(i))
    assert alpha.d().d().is_zero()


def test_constants_of_maurer_cartan_elements(module_algebra):
    """Test that μ ⊗ 1 is Maurer-Cartan and a nonconstant path of the same elements is not."""
    V = module_algebra.space
    mu = V.vector("ax") + V.vector("az")
    assert is_simplex_mc(SimplexTensor.constant(module_algebra, 2, mu))
    path = SimplexTensor.tensor(module_algebra, V.vector("ax"), SimplexForm.affine(1, 1))
    assert not is_simplex_mc(path)
    with pytest.raises(HomogeneityError):
        tensor_mc_residual(SimplexTensor.constant(module_algebra, 1, V.vector("x")))


def test_simplex_bracket_on_constants(module_algebra):
    """Test ℓ̄_2(c ⊗ 1, d ⊗ ω) = ℓ_2(c, d) ⊗ ω."""
    # Arrange
    V = module_algebra.space
    omega = SimplexForm.affine(1, 0)
    first = SimplexTensor.constant(module_algebra, 1, V.vector("x"))
    second = SimplexTensor.tensor(module_algebra, V.vector("ay"), omega)

    # Act
    result = simplex_bracket(2, [first, second])

    # Assert
    assert result == SimplexTensor.tensor(module_algebra, V.vector("az"), omega)
    assert simplex_bracket(1, [second]) == second.differential()
    with pytest.raises(ArityError):
        simplex_bracket(2, [first])


@pytest.mark.parametrize("i", [0, 1])
def test_lift_is_maurer_cartan_and_inverts_extraction(homotopy, i):
    """Test that the filler of θ: f ⇒ g is Maurer-Cartan with endpoints f, g and gives θ back."""
    # Act
    alpha = lift_homotopy(homotopy, i)

    # Assert
    assert is_simplex_mc(alpha)
    assert extract_homotopy(alpha, i) == homotopy


def test_filler_matches_the_data(homotopy):
    """Test b(b⁻¹(μ, ν)) = (μ, ν) at vertex 0."""
    # Arrange
    mu, nu = filler_data(homotopy, 0)

    # Act
    alpha = b_inverse(mu, nu, 0)

    # Assert
    assert b_forward(alpha, 0) == (mu, nu)


def test_iterates_stop_at_the_fixed_point(homotopy):
    """Test that the last two iterates agree and a zero step budget is reported."""
    mu, nu = filler_data(homotopy, 0)
    iterates = list(b_inverse_iterates(mu, nu, 0))
    assert iterates[-1] == iterates[-2]
    assert iterates[0] == SimplexTensor.constant(nu.algebra, 1, mu) + nu
    with pytest.raises(ConvergenceError):
        list(b_inverse_iterates(mu, nu, 0, max_steps=0))


def test_closed_form_filler(homotopy):
    """Test that the closed-form filler agrees with the fixed-point iteration."""
    # Arrange
    f = homotopy.source
    mu, nu = filler_data(homotopy, 0)
    algebra = mu.algebra
    beta = SimplexTensor.tensor(algebra, linear_element(algebra, homotopy.theta), SimplexForm.affine(1, 1))

    # Act
    alpha = closed_form(mu, beta)

    # Assert
    assert beta.differential() == nu
    assert alpha == b_inverse(mu, nu, 0)
    assert isinstance(algebra, ConvolutionAlgebra)
    assert algebra.source == f.source.to_infinity()


def test_filler_data_needs_a_vertex(homotopy):
    """Test that Δ¹ has only two vertices."""
    with pytest.raises(ArityError):
        filler_data(homotopy, 2)


def test_extraction_needs_an_edge(homotopy, module_algebra):
    """Test that triangles and structure algebras are refused."""
    alpha = lift_homotopy(homotopy, 0)
    triangle = SimplexTensor.constant(alpha.algebra, 2, alpha.evaluate(0))
    with pytest.raises(ArityError):
        extract_homotopy(triangle)
    with pytest.raises(ArityError):
        extract_homotopy(SimplexTensor.constant(module_algebra, 1, module_algebra.space.vector("ax")))


def test_extraction_rejects_invalid_endpoints(rng, homotopy):
    """Test that an endpoint which is not a morphism is reported."""
    # Arrange
    alpha = lift_homotopy(homotopy, 0)
    algebra = alpha.algebra
    V, W = homotopy.source.source.space, homotopy.source.target.space
    wrong = linear_element(algebra, builders.random_map(rng, 1, 0, V, W, values=(1, 2)))

    # Act / Assert
    with pytest.raises(InvalidStructureError):
        extract_homotopy(alpha + SimplexTensor.constant(algebra, 1, wrong))


@pytest.mark.parametrize("seed", builders.seeds(50, fast=2))
def test_vertical_composite_through_a_triangle(seed, crossed_module):
    """Test that the filler on Δ² restricted to the long edge gives θ' • θ on random composable pairs."""
    # Arrange
    rng = random.Random(seed)
    morphism = builders.random_morphism(rng, crossed_module)
    theta, theta_prime = builders.homotopy_chain(rng, morphism, 2)

    # Act
    composite = vcompose_via_simplex(theta_prime, theta)

    # Assert
    assert composite == vcompose(theta_prime, theta)
    with pytest.raises(InvalidStructureError):
        vcompose_via_simplex(theta, theta_prime)
