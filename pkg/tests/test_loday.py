"""Tests for the loday module."""
import random
from fractions import Fraction

import pytest

from halgebra.config import use_settings
from halgebra.errors import ArityError, HomogeneityError, SpaceMismatchError
from halgebra.graded import GradedSpace, MultiMap, Vector, parity_sign
from halgebra.loday import (
    Bimodule,
    LeibnizAlgebra,
    LodayCochain,
    Representation,
    box_contraction,
    cartan_check,
    cartan_lie_derivative,
    check_bimodule,
    check_leibniz_algebra,
    check_lie_algebra,
    check_representation,
    check_squares_ideal,
    coboundary_matrix,
    cohomology_dimensions,
    contraction,
    contraction_square,
    lie_derivative,
    loday_coboundary,
    scalars,
    shuffle_product,
    squares_ideal_quotient,
    unit_cochain,
)

import builders


def scalar_cochain(alg, arity, values):
    return LodayCochain.from_scalars(alg, arity, {tuple(alg.space[x] for x in k): c for k, c in values.items()})


def test_algebra_validation():
    """Test that algebras and modules must live in degree 0."""
    V = GradedSpace("V", {1: 1})
    with pytest.raises(HomogeneityError):
        LeibnizAlgebra.abelian(V)
    plane = builders.plane()
    with pytest.raises(SpaceMismatchError):
        LeibnizAlgebra(plane, MultiMap.zero(2, 1, plane, plane))
    with pytest.raises(HomogeneityError):
        Representation(builders.sl2(), V)


@pytest.mark.parametrize(
    "build,leibniz,lie",
    [
        (builders.sl2, True, True),
        (builders.heisenberg, True, True),
        (builders.square_leibniz, True, False),
        (builders.left_leibniz, True, False),
        (builders.right_leibniz, False, False),
    ],
)
def test_algebra_checks(build, leibniz, lie):
    """Test the Leibniz and Lie checkers on the example algebras."""
    alg = build()
    assert check_leibniz_algebra(alg).passed is leibniz
    assert check_lie_algebra(alg).passed is lie


def test_failing_jacobi_residual():
    """Test the residual of [x, y] = x at (x, y, y)."""
    alg = builders.right_leibniz()
    V = alg.space
    report = check_leibniz_algebra(alg)
    assert report.residual("jacobi", (V["x"], V["y"], V["y"])) == -V.vector("x")


def test_representations_and_bimodules(sl2, square_leibniz):
    """Test that adjoint representations and their bimodules satisfy their relations."""
    for alg in (sl2, square_leibniz):
        rep = Representation.adjoint(alg)
        assert check_representation(rep).passed
        assert check_bimodule(rep.to_bimodule()).passed
        assert check_representation(Representation.trivial(alg)).passed


def test_broken_representation(sl2):
    """Test that ρ(x) = id for every x is not a representation of sl2."""
    V = sl2.space
    rep = Representation(sl2, V, {b: MultiMap.identity(V) for b in sl2.basis()})
    assert not check_representation(rep).passed


def test_bimodule_operators_are_validated(sl2):
    """Test that actions must be degree-0 operators on the module, indexed by algebra letters."""
    K = scalars()
    other = builders.heisenberg().space
    with pytest.raises(SpaceMismatchError):
        Bimodule(sl2, K, {other["x"]: MultiMap.identity(K)})
    with pytest.raises(SpaceMismatchError):
        Bimodule(sl2, K, {sl2.space["e"]: MultiMap.identity(sl2.space)})


def test_coboundary_examples(heisenberg):
    """Test ∂ on scalar 1-cochains of the Heisenberg algebra."""
    # Arrange
    V = heisenberg.space
    trivial = Representation.trivial(heisenberg)
    z_star = scalar_cochain(heisenberg, 1, {("z",): 1})
    x_star = scalar_cochain(heisenberg, 1, {("x",): 1})

    # Act
    dz = loday_coboundary(z_star, trivial)

    # Assert
    assert loday_coboundary(x_star, trivial).is_zero()
    assert loday_coboundary(unit_cochain(heisenberg), trivial).is_zero()
    assert dz.on_basis((V["x"], V["y"])) == Vector({scalars().basis(0)[0]: Fraction(-1)})
    assert dz.on_basis((V["y"], V["x"])) == Vector({scalars().basis(0)[0]: Fraction(1)})
    assert dz.on_basis((V["x"], V["x"])).is_zero()


def test_coboundary_squares_to_zero(sl2, square_leibniz):
    """Test ∂ ∘ ∂ = 0 with adjoint coefficients through the Cartan family."""
    for alg in (sl2, square_leibniz):
        report = cartan_check(Representation.adjoint(alg), max_arity=1)
        assert report.family_passed("a")


@pytest.mark.parametrize("seed", builders.seeds(50, fast=5))
def test_coboundary_squares_to_zero_on_random_algebras(seed):
    """Test ∂∂c = 0 through arity 4 for random Leibniz algebras with adjoint and trivial coefficients."""
    rng = random.Random(seed)
    alg = builders.random_leibniz(rng)
    assert check_leibniz_algebra(alg).passed
    for rep in (Representation.adjoint(alg), Representation.trivial(alg)):
        assert check_representation(rep).passed
        for p in (1, 2):
            c = builders.random_cochain(rng, alg, rep.module, p)
            assert loday_coboundary(loday_coboundary(c, rep), rep).is_zero(), p


def test_broken_bracket_breaks_the_coboundary_square(sl2):
    """Test that adding [e, e] = h to sl2 makes ∂∂ nonzero."""
    V = sl2.space
    broken = LeibnizAlgebra(V, sl2.bracket_map + builders.entries(2, 0, V, [(("e", "e"), "h", 1)]))
    assert not check_leibniz_algebra(broken).passed
    assert not cartan_check(Representation.trivial(broken), max_arity=1).family_passed("a")


@pytest.mark.parametrize("seed", range(8))
def test_coboundary_square_measures_the_leibniz_identity(sl2, seed):
    """Test ∂∂c(x, y, z) = -c([x, [y, z]] - [[x, y], z] - [y, [x, z]]) for perturbed sl2 brackets."""
    # Arrange
    rng = random.Random(seed)
    V = sl2.space
    noise = builders.random_map(rng, 2, 0, V, V, values=(0, 0, 0, 0, 0, 0, 1, -1))
    alg = LeibnizAlgebra(V, sl2.bracket_map + noise)
    trivial = Representation.trivial(alg)
    c = builders.random_cochain(rng, alg, scalars(), 1)

    # Act
    jacobi = check_leibniz_algebra(alg)
    square = loday_coboundary(loday_coboundary(c, trivial), trivial)

    # Assert
    for key in V.tuples(3):
        assert square.on_basis(key) == -c(jacobi.residual("jacobi", key)), key
    assert cartan_check(trivial, max_arity=1).family_passed("a") is jacobi.passed


def test_coboundary_checks_coefficients(sl2, heisenberg):
    """Test that foreign coefficients and the arity cap are reported."""
    c = LodayCochain.zero(sl2, scalars(), 1)
    with pytest.raises(SpaceMismatchError):
        loday_coboundary(c, Representation.trivial(heisenberg))
    with use_settings(max_cochain_arity=1):
        with pytest.raises(ArityError):
            loday_coboundary(c, Representation.trivial(sl2))


@pytest.mark.parametrize("build", [builders.sl2, builders.square_leibniz])
def test_cartan_identities(build):
    """Test the Cartan calculus on the adjoint and trivial representations."""
    alg = build()
    for rep in (Representation.adjoint(alg), Representation.trivial(alg)):
        report = cartan_check(rep, max_arity=2)
        assert report.passed, report.summary()
        assert set(report.families) == set("abcde")


def test_cartan_check_finds_broken_coefficients(sl2):
    """Test that a map which is not a representation breaks ∂² = 0 or the Cartan formulas."""
    V = sl2.space
    rep = Representation(sl2, V, {b: MultiMap.identity(V) for b in sl2.basis()})
    assert not cartan_check(rep, max_arity=1).passed


def test_lie_derivative_is_cartan_formula(square_leibniz):
    """Test L_X = ∂ i_X + i_X ∂ on a scalar 2-cochain."""
    # Arrange
    alg = square_leibniz
    V = alg.space
    rep = Representation.trivial(alg)
    c = scalar_cochain(alg, 2, {("x", "y"): 1, ("y", "y"): 3})

    # Act / Assert
    for letter in ("x", "y"):
        x = V.vector(letter)
        assert lie_derivative(x, c, rep) == cartan_lie_derivative(x, c, rep)


def test_shuffle_product(heisenberg):
    """Test the shuffle product of scalar 1-cochains and its unit."""
    # Arrange
    V = heisenberg.space
    x_star = scalar_cochain(heisenberg, 1, {("x",): 1})
    y_star = scalar_cochain(heisenberg, 1, {("y",): 1})
    one = scalars().basis(0)[0]

    # Act
    product = shuffle_product(x_star, y_star)

    # Assert
    assert product.on_basis((V["x"], V["y"])) == Vector({one: 1})
    assert product.on_basis((V["y"], V["x"])) == Vector({one: -1})
    assert product == shuffle_product(y_star, x_star) * -1
    assert shuffle_product(unit_cochain(heisenberg), x_star) == x_star
    with pytest.raises(SpaceMismatchError):
        shuffle_product(x_star, LodayCochain.zero(heisenberg, heisenberg.space, 1))


DERIVATION_ARITIES = [(1, 1), (2, 1), (1, 2), (2, 2), (1, 3), (3, 1)]


@pytest.mark.parametrize("p,q", DERIVATION_ARITIES)
@pytest.mark.parametrize("build", [builders.heisenberg, builders.sl2, builders.square_leibniz])
def test_coboundary_is_a_derivation_of_the_shuffle_product(build, p, q, rng):
    """Test ∂(a ⋔ b) = ∂a ⋔ b + (-1)^p a ⋔ ∂b on random scalar cochains."""
    alg = build()
    trivial = Representation.trivial(alg)
    with use_settings(max_cochain_arity=5):
        for _ in range(3):
            # Arrange
            a = builders.random_cochain(rng, alg, scalars(), p)
            b = builders.random_cochain(rng, alg, scalars(), q)

            # Act
            lhs = loday_coboundary(shuffle_product(a, b), trivial)
            rhs = shuffle_product(loday_coboundary(a, trivial), b) + shuffle_product(
                a, loday_coboundary(b, trivial)
            ) * parity_sign(p)

            # Assert
            assert lhs == rhs


@pytest.mark.parametrize("build", [builders.heisenberg, builders.square_leibniz])
def test_shuffle_product_is_associative_and_graded_commutative(build, rng):
    """Test (a ⋔ b) ⋔ c = a ⋔ (b ⋔ c) and a ⋔ b = (-1)^{pq} b ⋔ a on random cochains."""
    alg = build()
    K = scalars()
    for p, q, r in [(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1)]:
        a, b, c = (builders.random_cochain(rng, alg, K, n) for n in (p, q, r))
        assert shuffle_product(shuffle_product(a, b), c) == shuffle_product(a, shuffle_product(b, c))
    for p, q in DERIVATION_ARITIES:
        a, b = builders.random_cochain(rng, alg, K, p), builders.random_cochain(rng, alg, K, q)
        assert shuffle_product(a, b) == shuffle_product(b, a) * parity_sign(p * q), (p, q)


@pytest.mark.parametrize("p,q", DERIVATION_ARITIES)
def test_contraction_is_a_derivation_of_the_shuffle_product(heisenberg, rng, p, q):
    """Test i_X(a ⋔ b) = i_X a ⋔ b + (-1)^p a ⋔ i_X b."""
    # Arrange
    V = heisenberg.space
    x = V.vector("x") + V.vector("z", 2)
    a = builders.random_cochain(rng, heisenberg, scalars(), p)
    b = builders.random_cochain(rng, heisenberg, scalars(), q)

    # Act
    lhs = contraction(x, shuffle_product(a, b))
    rhs = shuffle_product(contraction(x, a), b) + shuffle_product(a, contraction(x, b)) * parity_sign(p)

    # Assert
    assert lhs == rhs


def test_contractions(square_leibniz):
    """Test i_X, the square of contractions and its closed form."""
    # Arrange
    alg = square_leibniz
    V = alg.space
    c = scalar_cochain(alg, 2, {("x", "y"): 1, ("y", "x"): 2, ("y", "y"): 5})
    x, y = V.vector("x"), V.vector("y")

    # Act / Assert
    assert contraction(x, c) == scalar_cochain(alg, 1, {("y",): 1})
    assert contraction_square(x, y, c) == box_contraction(x, y, c)
    assert box_contraction(x, y, c).on_basis(()) == Vector({scalars().basis(0)[0]: 3})
    with pytest.raises(ArityError):
        contraction(x, unit_cochain(alg))
    with pytest.raises(ArityError):
        box_contraction(x, y, scalar_cochain(alg, 1, {("x",): 1}))


def test_squares_ideal_quotient(square_leibniz):
    """Test Ē⁰ = span{x} for [y, y] = x and the Lie quotient."""
    # Act
    result = squares_ideal_quotient(square_leibniz)

    # Assert
    assert result.ideal == [square_leibniz.space.vector("x")]
    assert result.quotient.dimension == 1
    assert check_lie_algebra(result.quotient).passed
    assert check_squares_ideal(square_leibniz, result).passed
    assert result.projection(square_leibniz.space.vector("x")).is_zero()


def test_squares_ideal_of_a_lie_algebra_is_zero(sl2):
    """Test that a Lie algebra is its own quotient."""
    result = squares_ideal_quotient(sl2)
    assert result.ideal == []
    assert result.quotient.dimension == 3
    assert check_lie_algebra(result.quotient).passed


def test_left_leibniz_quotient():
    """Test the quotient of [y, x] = x, whose squares ideal is spanned by x."""
    alg = builders.left_leibniz()
    result = squares_ideal_quotient(alg)
    assert result.ideal == [alg.space.vector("x")]
    assert check_squares_ideal(alg, result).passed


def test_coboundary_matrix_shape(sl2):
    """Test the size of ∂: C^1 -> C^2 with trivial coefficients."""
    matrix = coboundary_matrix(Representation.trivial(sl2), 1)
    assert matrix.shape == (9, 3)
    assert matrix.rank() == 3


def test_cohomology_dimensions():
    """Test HL^p for sl2 and the abelian line with trivial coefficients."""
    sl2 = builders.sl2()
    line = builders.abelian_line()
    assert cohomology_dimensions(Representation.trivial(sl2), 3) == {0: 1, 1: 0, 2: 0}
    assert cohomology_dimensions(Representation.trivial(line), 3) == {0: 1, 1: 1, 2: 1}
    with use_settings(max_cochain_arity=2):
        with pytest.raises(ArityError):
            cohomology_dimensions(Representation.trivial(line), 3)


@pytest.mark.parametrize("seed", builders.seeds(50, fast=5))
def test_random_leibniz_algebras_have_lie_quotients(seed):
    """Test that the quotient by the squares ideal is Lie on random Leibniz algebras of dimension at most 4."""
    # Arrange
    alg = builders.random_leibniz(random.Random(seed))

    # Act
    result = squares_ideal_quotient(alg)

    # Assert
    assert alg.dimension <= 4
    assert check_leibniz_algebra(alg).passed
    assert check_lie_algebra(result.quotient).passed
    assert check_squares_ideal(alg, result).passed
    assert result.quotient.dimension == alg.dimension - len(result.ideal)


@pytest.mark.slow
@pytest.mark.parametrize("build", [builders.sl2, builders.square_leibniz, builders.heisenberg])
def test_cartan_identities_through_arity_three(build):
    """Test the five Cartan identities on adjoint cochains of arity up to 3."""
    report = cartan_check(Representation.adjoint(build()), max_arity=3)
    assert report.passed, report.summary()
