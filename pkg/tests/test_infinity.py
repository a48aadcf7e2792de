"""Tests for the infinity module."""
import pytest

from halgebra.coalgebras import is_coderivation
from halgebra.errors import ArityError, HomogeneityError, SpaceMismatchError
from halgebra.graded import GradedSpace, MultiMap
from halgebra.infinity import (
    Flavor,
    InftyMorphism,
    InftyStructure,
    check_antisymmetry,
    check_inf_morphism,
    check_infinity,
    check_leibniz_infinity,
    check_lie_infinity,
    coalgebra_morphism_defect,
    codifferential_square_residual,
    component_bound,
    compose_inf_morphisms,
    from_codifferential,
    identity_bound,
    jacobi_residual_map,
    square_to_jacobi,
    to_codifferential,
)

import builders
from builders import entries, random_lie_structure, random_map, random_structure


@pytest.fixture
def two_term_space():
    return GradedSpace("V", {0: 1, 1: 1}, labels={0: ["a"], 1: ["b"]})


@pytest.fixture
def three_term_space():
    return GradedSpace("V", {0: 1, 1: 1, 2: 1}, labels={0: ["a"], 1: ["b"], 2: ["c"]})


def test_structure_validation(two_term_space):
    """Test that brackets of the wrong arity, degree or space are refused."""
    V = two_term_space
    other = GradedSpace("W", {0: 1})
    with pytest.raises(HomogeneityError):
        InftyStructure(Flavor.LEIBNIZ, V, {2: MultiMap.zero(2, 1, V, V)})
    with pytest.raises(ArityError):
        InftyStructure(Flavor.LEIBNIZ, V, {2: MultiMap.zero(1, 0, V, V)})
    with pytest.raises(SpaceMismatchError):
        InftyStructure(Flavor.LEIBNIZ, V, {1: MultiMap.zero(1, -1, other, other)})


def test_missing_brackets_are_zero(two_term_space):
    """Test that unset brackets read as zero maps of the right degree."""
    s = InftyStructure.zero(Flavor.LIE, two_term_space)
    assert s.bracket(3).is_zero()
    assert s.bracket(3).degree == 1
    assert s.max_arity == 0


def test_identity_bound(two_term_space, three_term_space):
    """Test the structural identity bound and its cap."""
    assert identity_bound(two_term_space) == 5
    assert identity_bound(three_term_space) == 6
    assert identity_bound(GradedSpace("V", {-1: 1, 0: 1})) == 6


def test_degree_zero_leibniz_algebra_passes():
    """Test that [y, y] = x is a Leibniz∞ structure concentrated in degree 0."""
    # Arrange
    alg = builders.square_leibniz()
    s = InftyStructure(Flavor.LEIBNIZ, alg.space, {2: alg.bracket_map})

    # Act
    report = check_leibniz_infinity(s)

    # Assert
    assert report.passed
    assert sorted(report.families) == ["n=1", "n=2", "n=3"]
    assert report.notes == []


def test_failing_leibniz_identity_is_reported():
    """Test that [x, y] = x fails the third identity."""
    # Arrange
    alg = builders.right_leibniz()
    s = InftyStructure(Flavor.LEIBNIZ, alg.space, {2: alg.bracket_map})

    # Act
    report = check_leibniz_infinity(s)

    # Assert
    assert not report.passed
    assert not report.family_passed("n=3")
    assert report.family_passed("n=2")
    V = alg.space
    assert not report.residual("n=3", (V["x"], V["y"], V["y"])).is_zero()


def test_lowered_bound_is_noted():
    """Test that checking below the structural bound leaves a note instead of failing."""
    alg = builders.square_leibniz()
    s = InftyStructure(Flavor.LEIBNIZ, alg.space, {2: alg.bracket_map})

    # Act
    report = check_leibniz_infinity(s, n_max=2)

    # Assert
    assert report.passed
    assert report.notes == ["identity index capped at 2, below the structural bound 3"]


def test_crossed_module_is_leibniz_infinity(crossed_module):
    """Test that a valid 2-term algebra passes the generic checker through n = 5."""
    report = check_leibniz_infinity(crossed_module.to_infinity(), n_max=5)
    assert report.passed
    assert len(report.families) == 5


def test_lie_checker_reports_antisymmetry():
    """Test that a non-antisymmetric Lie bracket fails the antisymmetry family."""
    # Arrange
    alg = builders.left_leibniz()
    s = InftyStructure(Flavor.LIE, alg.space, {2: alg.bracket_map})

    # Act
    report = check_lie_infinity(s)

    # Assert
    assert not report.family_passed("antisymmetry:l_2")
    assert not check_antisymmetry(s).passed


def test_heisenberg_module_is_lie_infinity():
    """Test a Lie structure with a negative degree and the note about its missing bound."""
    # Act
    report = check_infinity(builders.heisenberg_module(), n_max=3)

    # Assert
    assert report.passed
    assert report.name == "lie-infinity"
    assert report.notes == ["no structural identity bound for negative degrees; checked up to n=3"]


def test_checkers_refuse_the_other_flavor(crossed_module):
    """Test that the Leibniz and Lie checkers check the structure flavor."""
    with pytest.raises(SpaceMismatchError):
        check_lie_infinity(crossed_module.to_infinity())
    with pytest.raises(SpaceMismatchError):
        check_leibniz_infinity(builders.heisenberg_module())


@pytest.mark.parametrize("flavor", [Flavor.LEIBNIZ, Flavor.LIE])
def test_codifferential_round_trip(rng, two_term_space, flavor):
    """Test that brackets survive the passage to the codifferential and back."""
    # Arrange
    if flavor is Flavor.LIE:
        s = random_lie_structure(rng, two_term_space, 3)
    else:
        s = random_structure(rng, flavor, two_term_space, 3)

    # Act
    d = to_codifferential(s)
    back = from_codifferential(d)

    # Assert
    assert d.degree == -1
    assert d.space == two_term_space.suspend()
    assert back.flavor is flavor
    for i in (1, 2, 3):
        assert back.bracket(i) == s.bracket(i)
    assert is_coderivation(d, 3) == {}


def _assert_dictionary(s: InftyStructure, n_max: int) -> None:
    report = check_infinity(s, n_max=n_max)
    square = codifferential_square_residual(to_codifferential(s), n_max)
    for n in range(1, n_max + 1):
        assert report.family_passed(f"n={n}") == square[n].is_zero(), n
        assert square_to_jacobi(square[n], s.flavor) == jacobi_residual_map(s, n), n


@pytest.mark.parametrize("seed", builders.seeds(100))
def test_jacobi_identities_match_codifferential_square_leibniz(seed, two_term_space):
    """Test that each Leibniz Jacobi sum is the translated square of the codifferential."""
    import random

    s = random_structure(random.Random(seed), Flavor.LEIBNIZ, two_term_space, 3)
    _assert_dictionary(s, 4)


@pytest.mark.parametrize("seed", builders.seeds(100))
def test_jacobi_identities_match_codifferential_square_lie(seed, two_term_space):
    """Test that each Lie Jacobi sum is the translated square of the codifferential."""
    import random

    s = random_lie_structure(random.Random(seed), two_term_space, 3)
    _assert_dictionary(s, 4)


def test_valid_structures_have_square_zero_codifferentials(crossed_module):
    """Test that valid structures of both flavors give D² = 0."""
    for s in (crossed_module.to_infinity(), builders.heisenberg_module()):
        square = codifferential_square_residual(to_codifferential(s), 3)
        assert all(f.is_zero() for f in square.values())


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(50))
@pytest.mark.parametrize("flavor", [Flavor.LEIBNIZ, Flavor.LIE])
def test_dictionary_on_three_term_spaces(seed, flavor, three_term_space):
    """Test the bracket and codifferential pictures against each other on 3-term spaces."""
    import random

    rng = random.Random(seed)
    if flavor is Flavor.LIE:
        s = random_lie_structure(rng, three_term_space, 3)
    else:
        s = random_structure(rng, flavor, three_term_space, 3)
    _assert_dictionary(s, 5)


def test_morphism_validation(crossed_module):
    """Test that a component of the wrong degree is refused."""
    s = crossed_module.to_infinity()
    V = s.space
    with pytest.raises(HomogeneityError):
        InftyMorphism(s, s, {1: MultiMap.zero(1, 1, V, V)})
    with pytest.raises(SpaceMismatchError):
        InftyMorphism(s, builders.heisenberg_module(), {})


def test_identity_morphism_passes(crossed_module):
    """Test that the identity is an ∞-morphism."""
    report = check_inf_morphism(InftyMorphism.identity(crossed_module.to_infinity()))
    assert report.passed
    assert report.name == "leibniz-infinity-morphism"


def test_component_bound(two_term_space):
    """Test the largest arity at which morphism identities can be nonzero."""
    assert component_bound(two_term_space, two_term_space, -2) == 3
    assert component_bound(GradedSpace("V", {-1: 1}), two_term_space, -2) == 6


def test_transported_morphism_passes_both_checks(morphism):
    """Test a valid morphism against the bracket-level and coalgebra-level identities."""
    m = morphism.to_infinity()

    # Act
    report = check_inf_morphism(m)
    defect = coalgebra_morphism_defect(m)

    # Assert
    assert report.passed
    assert all(f.is_zero() for f in defect.values())


@pytest.mark.parametrize("seed", builders.seeds(100))
def test_morphism_identities_match_coalgebra_defect(seed, crossed_module):
    """Test that each morphism identity fails exactly when the coalgebra defect of that arity is nonzero."""
    import random

    # Arrange
    rng = random.Random(seed)
    valid = builders.random_morphism(rng, crossed_module)
    f2 = valid.f2 + random_map(rng, 2, 1, valid.source.space, valid.target.space)
    m = InftyMorphism(valid.source.to_infinity(), valid.target.to_infinity(), {1: valid.f1, 2: f2})

    # Act
    report = check_inf_morphism(m)
    defect = coalgebra_morphism_defect(m)

    # Assert
    assert sorted(defect) == [1, 2, 3]
    for n, f in defect.items():
        assert report.family_passed(f"n={n}") == f.is_zero(), n


def test_lie_morphism_between_heisenberg_modules():
    """Test that a rescaling automorphism of the Heisenberg module is a Lie∞ morphism."""
    # Arrange
    s = builders.heisenberg_module()
    V = s.space
    scale = entries(
        1, 0, V, [(("x",), "x", 1), (("y",), "y", 2), (("z",), "z", 2), (("ax",), "ax", 1), (("ay",), "ay", 2), (("az",), "az", 2)]
    )
    m = InftyMorphism(s, s, {1: scale})

    # Act
    report = check_inf_morphism(m, n_max=3)

    # Assert
    assert report.passed
    assert report.name == "lie-infinity-morphism"


def test_compose_morphisms_matches_two_term_composite(rng, morphism):
    """Test composition through the coalgebra against the 2-term formula."""
    from halgebra.two_term import compose_two_term

    # Arrange
    g = builders.random_morphism(rng, morphism.target, name="X")

    # Act
    composite = compose_inf_morphisms(g.to_infinity(), morphism.to_infinity())

    # Assert
    expected = compose_two_term(g, morphism)
    assert composite.component(1) == expected.f1
    assert composite.component(2) == expected.f2
    assert composite.component(3).is_zero()
    with pytest.raises(SpaceMismatchError):
        compose_inf_morphisms(morphism.to_infinity(), morphism.to_infinity())
