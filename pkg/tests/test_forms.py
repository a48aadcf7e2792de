"""Tests for the forms module."""
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from halgebra.config import use_settings
from halgebra.errors import ArityError, HomogeneityError, PolynomialDegreeError
from halgebra.forms import (
    SimplexForm,
    coordinates,
    describe,
    form_d,
    form_eval,
    form_h,
    integrate_edge,
    merge_indices,
    random_form,
    restrict_to_edge,
    vertex,
    vertex_value,
)

coefficient_lists = st.lists(st.integers(min_value=-3, max_value=3), min_size=1, max_size=5)


def mixed_form(n, coefficients):
    """The sum of a random k-form for every k."""
    total = SimplexForm.zero(n)
    for k in range(n + 1):
        total = total + random_form(n, k, coefficients[k:] + coefficients[:k], max_degree=2)
    return total


def test_vertices():
    """Test vertex coordinates and the refusal of other simplices."""
    assert vertex(2, 0) == (0, 0)
    assert vertex(2, 2) == (0, 1)
    assert vertex(1, 1) == (1,)
    with pytest.raises(ArityError):
        vertex(1, 2)
    with pytest.raises(ArityError):
        coordinates(3)


def test_merge_indices():
    """Test the sign of a wedge of differential monomials."""
    assert merge_indices((0,), (1,)) == (1, (0, 1))
    assert merge_indices((1,), (0,)) == (-1, (0, 1))
    assert merge_indices((), (1,)) == (1, (1,))
    assert merge_indices((0, 1), (1,))[0] == 0


def test_form_basics():
    """Test constructors, degrees and the wedge product."""
    # Arrange
    ds, dt = SimplexForm.differential(2, 0), SimplexForm.differential(2, 1)

    # Act / Assert
    assert ds.wedge(dt) == -dt.wedge(ds)
    assert ds.wedge(ds).is_zero()
    assert ds.wedge(dt).degree == -2
    assert SimplexForm.zero(2).degree is None
    assert SimplexForm.affine(2, 0) + SimplexForm.affine(2, 1) + SimplexForm.affine(2, 2) == SimplexForm.constant(2)
    with pytest.raises(HomogeneityError):
        _ = (ds + SimplexForm.constant(2)).degree
    with pytest.raises(ArityError):
        _ = ds + SimplexForm.differential(1, 0)
    with pytest.raises(ArityError):
        SimplexForm.affine(1, 2)


def test_part_and_terms():
    """Test the k-form parts and the monomial listing."""
    omega = SimplexForm.monomial(1, (), (2,), 3) + SimplexForm.monomial(1, (0,), (1,), Fraction(1, 2))
    assert omega.part(0) == SimplexForm.monomial(1, (), (2,), 3)
    assert sorted(omega.terms()) == [((), (2,), Fraction(3)), ((0,), (1,), Fraction(1, 2))]


def test_invalid_indices_are_refused():
    """Test that unsorted or out-of-range differential indices are reported."""
    s, t = coordinates(2)
    with pytest.raises(ArityError):
        SimplexForm.from_exprs(2, {(1, 0): s})
    with pytest.raises(ArityError):
        SimplexForm.from_exprs(1, {(1,): 1})


def test_polynomial_degree_cap():
    """Test that coefficients above the configured degree are refused."""
    with use_settings(max_polynomial_degree=2):
        SimplexForm.monomial(1, (), (2,))
        with pytest.raises(PolynomialDegreeError):
            SimplexForm.monomial(1, (), (3,))


def test_de_rham_differential():
    """Test d on coordinates and d ∘ d = 0."""
    s, t = coordinates(2)
    assert repr(form_d(SimplexForm.coordinate(1, 0))) == "dt"
    assert form_d(SimplexForm.from_exprs(2, {(): s * t})) == SimplexForm.from_exprs(2, {(0,): t, (1,): s})
    assert form_d(SimplexForm.from_exprs(2, {(0,): t})) == SimplexForm.from_exprs(2, {(0, 1): -1})
    for k in (0, 1):
        assert form_d(form_d(random_form(2, k, [1, -2, 3]))).is_zero()


def test_contraction_examples():
    """Test h on dt at both vertices of the edge."""
    (t,) = coordinates(1)
    dt = SimplexForm.differential(1, 0)
    assert form_h(1, 0, dt) == SimplexForm.coordinate(1, 0)
    assert form_h(1, 1, dt) == SimplexForm.from_exprs(1, {(): t - 1})
    assert form_h(1, 0, SimplexForm.constant(1)).is_zero()
    with pytest.raises(ArityError):
        form_h(2, 0, dt)


@pytest.mark.parametrize("n,i", [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)])
def test_contraction_is_a_homotopy(n, i):
    """Test d h + h d = id - ε on a form with every degree present."""
    # Arrange
    omega = mixed_form(n, [1, -1, 2, 0, 3])

    # Act
    lhs = form_d(form_h(n, i, omega)) + form_h(n, i, form_d(omega))

    # Assert
    assert lhs == omega - form_eval(n, i, omega)


@settings(max_examples=15, deadline=None)
@given(coefficients=coefficient_lists, i=st.integers(min_value=0, max_value=2))
def test_contraction_identities_on_the_triangle(coefficients, i):
    """Test the homotopy formula, h ∘ h = 0 and ε ∘ h = 0 for random forms on Δ²."""
    # Arrange
    omega = mixed_form(2, coefficients)

    # Act
    h = form_h(2, i, omega)

    # Assert
    assert form_d(h) + form_h(2, i, form_d(omega)) == omega - form_eval(2, i, omega)
    assert form_h(2, i, h).is_zero()
    assert vertex_value(h, i) == 0


@settings(max_examples=10, deadline=None)
@given(coefficients=coefficient_lists)
def test_contractions_anticommute(coefficients):
    """Test h^i h^j + h^j h^i = 0 on Δ²."""
    omega = mixed_form(2, coefficients)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        assert (form_h(2, i, form_h(2, j, omega)) + form_h(2, j, form_h(2, i, omega))).is_zero()


def test_vertex_values():
    """Test evaluation of the 0-form part at vertices."""
    s, t = coordinates(2)
    omega = SimplexForm.from_exprs(2, {(): 1 + 2 * s - t, (0,): s})
    assert [vertex_value(omega, i) for i in range(3)] == [1, 3, 0]
    assert form_eval(2, 1, omega) == SimplexForm.constant(2, 3)


def test_restriction_to_edges():
    """Test pulling forms back to the edges of the triangle."""
    # Arrange
    s, t = coordinates(2)
    (u,) = coordinates(1)
    omega = SimplexForm.from_exprs(2, {(): s * t, (0,): 1, (1,): s})

    # Act / Assert
    assert restrict_to_edge(omega, 0, 1) == SimplexForm.differential(1, 0)
    assert restrict_to_edge(omega, 1, 2) == SimplexForm.from_exprs(1, {(): (1 - u) * u, (0,): -1 + (1 - u)})
    assert restrict_to_edge(SimplexForm.differential(2, 0).wedge(SimplexForm.differential(2, 1)), 0, 2).is_zero()
    with pytest.raises(ArityError):
        restrict_to_edge(SimplexForm.constant(1), 0, 1)


def test_edge_integration():
    """Test ∫ t dt = 1/2 and Stokes on the edge."""
    (t,) = coordinates(1)
    assert integrate_edge(SimplexForm.from_exprs(1, {(0,): t})) == Fraction(1, 2)
    f = SimplexForm.from_exprs(1, {(): t**3 - 2 * t + 5})
    assert integrate_edge(form_d(f)) == vertex_value(f, 1) - vertex_value(f, 0)
    with pytest.raises(ArityError):
        integrate_edge(SimplexForm.constant(2))


def test_describe():
    """Test the readable rendering of forms."""
    assert describe(SimplexForm.zero(1)) == "0"
    assert describe(SimplexForm.from_exprs(1, {(0,): 2 * sympy.Symbol("t")})) == "2*t*dt"
    assert describe(SimplexForm.monomial(2, (0, 1), (0, 2), Fraction(-1, 3))) == "-1/3*t^2*ds∧dt"
