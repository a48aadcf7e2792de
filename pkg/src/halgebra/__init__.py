"""
halgebra - exact arithmetic for homotopy Lie and Leibniz algebras.

The package works over the rationals on finite-dimensional graded spaces: structure
constants of Leibniz∞ and Lie∞ algebras and their ∞-morphisms, the free Zinbiel and
symmetric coalgebras that encode them, 2-term homotopies and their compositions,
Maurer-Cartan elements of convolution algebras on simplices, and Loday cohomology.
Every identity is evaluated exactly and reported as a residual.
"""

__version__ = "0.1.0"

from halgebra.config import Settings, get_settings, load_settings, use_settings
from halgebra.errors import HalgebraError
from halgebra.graded import Basis, GradedSpace, MultiMap, Permutation, Vector
from halgebra.infinity import (
    Flavor,
    InftyMorphism,
    InftyStructure,
    check_inf_morphism,
    check_infinity,
    check_leibniz_infinity,
    check_lie_infinity,
)
from halgebra.reports import IdentityReport
from halgebra.two_term import (
    TwoTermHomotopy,
    TwoTermLeibniz,
    TwoTermMorphism,
    check_homotopy,
    check_two_term_algebra,
    check_two_term_morphism,
)

# Import app components
import halgebra.app  # noqa: E402

__all__ = [
    # Settings and errors
    "HalgebraError",
    "Settings",
    "get_settings",
    "load_settings",
    "use_settings",
    # Graded linear algebra
    "Basis",
    "GradedSpace",
    "MultiMap",
    "Permutation",
    "Vector",
    # Structures
    "Flavor",
    "IdentityReport",
    "InftyMorphism",
    "InftyStructure",
    "TwoTermHomotopy",
    "TwoTermLeibniz",
    "TwoTermMorphism",
    "check_homotopy",
    "check_inf_morphism",
    "check_infinity",
    "check_leibniz_infinity",
    "check_lie_infinity",
    "check_two_term_algebra",
    "check_two_term_morphism",
    # App submodule
    "app",
]
