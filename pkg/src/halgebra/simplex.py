"""
Lie∞ algebras tensored with polynomial forms on a simplex, and the Kan-filling bijection.

A :class:`SimplexTensor` is a finite sum Σ c ⊗ x^e dx_I with c in a Lie∞ algebra L. The
operators act as

    δ̄(c ⊗ ω) = ℓ_1(c) ⊗ ω                 d̄(c ⊗ ω) = (-1)^{|c|} c ⊗ dω
    h̄(c ⊗ ω) = (-1)^{|c|} c ⊗ h ω         ε̄(c ⊗ ω) = c ε(ω)

and ℓ̄_p(c_1 ⊗ ω_1, ..., c_p ⊗ ω_p) = ± ℓ_p(c_1..c_p) ⊗ ω_1 ∧ ... ∧ ω_p with the Koszul sign
of moving every ω_i past the later c_j.

The bijection b_n^i sends a Maurer-Cartan element α on Δⁿ to (ε̄^i α, (δ̄ + d̄) h̄^i α); its
inverse is the fixed point of α ↦ μ + ν - h̄^i (nonlinear part of the Maurer-Cartan sum of α).
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, Iterator, Mapping, Optional, Sequence, Tuple

from halgebra.config import get_settings
from halgebra.convolution import (
    ConvElement,
    ConvolutionAlgebra,
    Element,
    LInfinityAlgebra,
    linear_element,
    linear_part,
    mc_coefficient,
    mc_to_morphism,
    morphism_to_mc,
)
from halgebra.errors import ArityError, ConvergenceError, HomogeneityError, InvalidStructureError, PolynomialDegreeError
from halgebra.forms import (
    Exponents,
    Indices,
    SimplexForm,
    form_d,
    form_h,
    merge_indices,
    restrict_to_edge,
    vertex,
)
from halgebra.graded import ScalarLike, parity_sign, to_scalar
from halgebra.two_term import TwoTermHomotopy, TwoTermMorphism, check_two_term_morphism

logger = logging.getLogger("halgebra.simplex")

TermKey = Tuple[Indices, Exponents]
FormOperator = Callable[[SimplexForm], SimplexForm]


class SimplexTensor:
    """
    A homogeneous element of L ⊗ Ω(Δⁿ).

    Parameters
    ----------
    algebra : LInfinityAlgebra
        The Lie∞ algebra L.
    n : int
        Dimension of the simplex (1 or 2).
    degree : int
        Total degree |c| - k of every term c ⊗ (k-form).
    terms : Optional[Mapping[TermKey, Element]], optional
        Algebra element per (differential indices, monomial exponents).
    """

    __slots__ = ("_terms", "algebra", "degree", "n")

    def __init__(
        self,
        algebra: LInfinityAlgebra,
        n: int,
        degree: int,
        terms: Optional[Mapping[TermKey, Element]] = None,
    ) -> None:
        self.algebra = algebra
        self.n = n
        self.degree = degree
        cap = get_settings().max_polynomial_degree
        clean: Dict[TermKey, Element] = {}
        for (indices, exponents), c in (terms or {}).items():
            if c.is_zero():
                continue
            if sum(exponents) > cap:
                raise PolynomialDegreeError(f"Monomial of degree {sum(exponents)} exceeds the cap {cap}")
            if algebra.degree_of(c) - len(indices) != degree:
                raise HomogeneityError(
                    f"Term of degree {algebra.degree_of(c) - len(indices)} in a tensor of degree {degree}"
                )
            clean[(tuple(indices), tuple(exponents))] = c
        self._terms = clean

    @classmethod
    def zero(cls, algebra: LInfinityAlgebra, n: int, degree: int) -> "SimplexTensor":
        return cls(algebra, n, degree)

    @classmethod
    def constant(cls, algebra: LInfinityAlgebra, n: int, c: Element) -> "SimplexTensor":
        """c ⊗ 1."""
        if c.is_zero():
            raise HomogeneityError("Use SimplexTensor.zero for the zero element")
        return cls(algebra, n, algebra.degree_of(c), {((), (0,) * n): c})

    @classmethod
    def tensor(cls, algebra: LInfinityAlgebra, c: Element, omega: SimplexForm) -> "SimplexTensor":
        """c ⊗ ω for a homogeneous form ω."""
        form_degree = omega.degree
        if c.is_zero() or form_degree is None:
            return cls(algebra, omega.n, 0)
        acc: Dict[TermKey, Element] = {}
        for indices, exponents, q in omega.terms():
            key = (indices, exponents)
            acc[key] = acc[key] + c * q if key in acc else c * q
        return cls(algebra, omega.n, algebra.degree_of(c) + form_degree, acc)

    @property
    def terms(self) -> Dict[TermKey, Element]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[TermKey, Element]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def part(self, k: int) -> "SimplexTensor":
        """The terms whose form factor is a k-form."""
        kept = {key: c for key, c in self._terms.items() if len(key[0]) == k}
        return SimplexTensor(self.algebra, self.n, self.degree, kept)

    def _check(self, other: "SimplexTensor") -> None:
        if other.algebra is not self.algebra or other.n != self.n:
            raise ArityError("Tensors over different algebras or simplices")

    def __add__(self, other: "SimplexTensor") -> "SimplexTensor":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.degree != self.degree:
            raise HomogeneityError(f"Cannot add tensors of degrees {self.degree} and {other.degree}")
        acc = dict(self._terms)
        for key, c in other._terms.items():
            acc[key] = acc[key] + c if key in acc else c
        return SimplexTensor(self.algebra, self.n, self.degree, acc)

    def __sub__(self, other: "SimplexTensor") -> "SimplexTensor":
        return self + (-other)

    def __neg__(self) -> "SimplexTensor":
        return self * -1

    def __mul__(self, scalar: ScalarLike) -> "SimplexTensor":
        k = to_scalar(scalar)
        return SimplexTensor(self.algebra, self.n, self.degree, {key: c * k for key, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplexTensor):
            return NotImplemented
        if self.n != other.n:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.degree == other.degree and (self - other).is_zero()

    def __repr__(self) -> str:
        return f"SimplexTensor(n={self.n}, degree={self.degree}, {len(self._terms)} terms)"

    def _map_forms(self, op: FormOperator, degree_shift: int, twisted: bool) -> "SimplexTensor":
        acc: Dict[TermKey, Element] = {}
        for (indices, exponents), c in self._terms.items():
            image = op(SimplexForm.monomial(self.n, indices, exponents))
            sign = parity_sign(self.algebra.degree_of(c)) if twisted else 1
            for key_indices, key_exponents, q in image.terms():
                key = (key_indices, key_exponents)
                term = c * (q * sign)
                acc[key] = acc[key] + term if key in acc else term
        return SimplexTensor(self.algebra, self.n, self.degree + degree_shift, acc)

    def delta(self) -> "SimplexTensor":
        """δ̄ = ℓ_1 ⊗ id."""
        acc = {key: self.algebra.bracket(1, [c]) for key, c in self._terms.items()}
        return SimplexTensor(self.algebra, self.n, self.degree - 1, acc)

    def d(self) -> "SimplexTensor":
        """d̄(c ⊗ ω) = (-1)^{|c|} c ⊗ dω."""
        return self._map_forms(form_d, -1, twisted=True)

    def h(self, i: int) -> "SimplexTensor":
        """h̄^i(c ⊗ ω) = (-1)^{|c|} c ⊗ h^i ω."""
        return self._map_forms(lambda omega: form_h(self.n, i, omega), 1, twisted=True)

    def differential(self) -> "SimplexTensor":
        """ℓ̄_1 = δ̄ + d̄."""
        return self.delta() + self.d()

    def evaluate(self, i: int) -> Element:
        """ε̄^i: the 0-form part evaluated at the vertex e_i."""
        corner = vertex(self.n, i)
        acc = self.algebra.zero(self.degree)
        for (indices, exponents), c in self._terms.items():
            if indices:
                continue
            if all(e == 0 or x == 1 for x, e in zip(corner, exponents, strict=True)):
                acc = acc + c
        return acc

    def restrict_to_edge(self, a: int, b: int) -> "SimplexTensor":
        """Pull back along the edge e_a -> e_b of Δ² to a tensor over Δ¹."""
        acc: Dict[TermKey, Element] = {}
        for (indices, exponents), c in self._terms.items():
            image = restrict_to_edge(SimplexForm.monomial(2, indices, exponents), a, b)
            for key_indices, key_exponents, q in image.terms():
                key = (key_indices, key_exponents)
                acc[key] = acc[key] + c * q if key in acc else c * q
        return SimplexTensor(self.algebra, 1, self.degree, acc)


def simplex_bracket(p: int, xs: Sequence[SimplexTensor]) -> SimplexTensor:
    """
    ℓ̄_p(c_1 ⊗ ω_1, ..., c_p ⊗ ω_p) = (-1)^{Σ_{i<j} |ω_i||c_j|} ℓ_p(c_1..c_p) ⊗ ω_1 ∧ ... ∧ ω_p.

    ``p = 1`` gives δ̄ + d̄.
    """
    if len(xs) != p or p < 1:
        raise ArityError(f"ℓ̄_{p} applied to {len(xs)} elements")
    first = xs[0]
    for x in xs[1:]:
        first._check(x)
    if p == 1:
        return first.differential()
    algebra = first.algebra
    degree = sum(x.degree for x in xs) + p - 2
    if p > algebra.max_arity or any(x.is_zero() for x in xs):
        return SimplexTensor.zero(algebra, first.n, degree)
    acc: Dict[TermKey, Element] = {}

    def expand(
        position: int,
        indices: Indices,
        exponents: Exponents,
        sign: int,
        form_degrees: int,
        elements: Tuple[Element, ...],
    ) -> None:
        if position == p:
            value = algebra.bracket(p, list(elements))
            if value.is_zero():
                return
            key = (indices, exponents)
            term = value * sign
            acc[key] = acc[key] + term if key in acc else term
            return
        for (key_indices, key_exponents), c in xs[position].items():
            merge_sign, merged = merge_indices(indices, key_indices)
            if merge_sign == 0:
                continue
            # every earlier form passes this element
            twist = parity_sign(form_degrees * algebra.degree_of(c))
            expand(
                position + 1,
                merged,
                tuple(a + b for a, b in zip(exponents, key_exponents, strict=True)),
                sign * merge_sign * twist,
                form_degrees + len(key_indices),
                (*elements, c),
            )

    expand(0, (), (0,) * first.n, 1, 0, ())
    return SimplexTensor(algebra, first.n, degree, acc)


def tensor_mc_residual(alpha: SimplexTensor, start: int = 1) -> SimplexTensor:
    """Σ_{p ≥ start} (1/p!)(-1)^{p(p-1)/2} ℓ̄_p(α, ..., α)."""
    if alpha.degree != -1 and not alpha.is_zero():
        raise HomogeneityError(f"Maurer-Cartan elements have degree -1, got {alpha.degree}")
    acc = SimplexTensor.zero(alpha.algebra, alpha.n, -2)
    top = max(alpha.algebra.max_arity, 1)
    for p in range(start, top + 1):
        term = simplex_bracket(p, [alpha] * p)
        if not term.is_zero():
            acc = acc + term * mc_coefficient(p)
    return acc


def is_simplex_mc(alpha: SimplexTensor) -> bool:
    return tensor_mc_residual(alpha).is_zero()


# ---------------------------------------------------------------------------
# The Kan-filling bijection
# ---------------------------------------------------------------------------


def b_forward(alpha: SimplexTensor, i: int) -> Tuple[Element, SimplexTensor]:
    """b_n^i(α) = (ε̄^i α, (δ̄ + d̄) h̄^i α)."""
    return alpha.evaluate(i), alpha.h(i).differential()


def b_inverse_iterates(
    mu: Element, nu: SimplexTensor, i: int, max_steps: Optional[int] = None
) -> Iterator[SimplexTensor]:
    """
    The iterates α_0 = μ + ν, α_k = α_0 - h̄^i (nonlinear Maurer-Cartan part of α_{k-1}).

    Stops after yielding the first repeated iterate, which is the fixed point.

    Raises
    ------
    ConvergenceError
        If no fixed point is reached within ``max_steps`` (default: filtration length + 2).
    """
    algebra = nu.algebra
    steps = max_steps if max_steps is not None else algebra.filtration_length() + 2
    start = SimplexTensor.constant(algebra, nu.n, mu) + nu if not mu.is_zero() else nu
    current = start
    yield current
    for step in range(1, steps + 1):
        nonlinear = tensor_mc_residual(current, start=2)
        following = start - nonlinear.h(i) if not nonlinear.is_zero() else start
        yield following
        if following == current:
            logger.debug(f"Kan filler stabilised after {step} steps")
            return
        current = following
    raise ConvergenceError(f"Kan filler did not stabilise within {steps} steps")


def b_inverse(mu: Element, nu: SimplexTensor, i: int, max_steps: Optional[int] = None) -> SimplexTensor:
    """
    The unique Maurer-Cartan α with ε̄^i α = μ and (δ̄ + d̄) h̄^i α = ν.

    ``mu`` must be Maurer-Cartan in L and ``nu`` of the form (δ̄ + d̄)β for a β with h̄^i β = β.
    """
    result: Optional[SimplexTensor] = None
    for result in b_inverse_iterates(mu, nu, i, max_steps):
        pass
    if result is None:
        raise ConvergenceError("Kan filler produced no iterate")
    return result


def closed_form(mu: Element, beta: SimplexTensor) -> SimplexTensor:
    """
    α = μ + (δ̄ + d̄)β - ℓ̄_2(μ, β) - ½ ℓ̄_2(δ̄β, β), the filler in closed form.

    It agrees with :func:`b_inverse` for 2-term targets, where the nonlinear part stops at ℓ_2 and
    β is a degree-0 function vanishing at the chosen vertex.
    """
    algebra = beta.algebra
    constant = SimplexTensor.constant(algebra, beta.n, mu)
    return (
        constant
        + beta.differential()
        - simplex_bracket(2, [constant, beta])
        - simplex_bracket(2, [beta.delta(), beta]) * Fraction(1, 2)
    )


# ---------------------------------------------------------------------------
# Homotopies of 2-term morphisms as Maurer-Cartan elements on Δ¹
# ---------------------------------------------------------------------------


def _edge_parameter(algebra: ConvolutionAlgebra, theta: TwoTermHomotopy) -> ConvElement:
    return linear_element(algebra, theta.theta)


def filler_data(theta: TwoTermHomotopy, i: int = 0) -> Tuple[ConvElement, SimplexTensor]:
    """
    The pair (μ, ν) = (ε̄^i α, (δ̄ + d̄)β) that determines the lift of θ: f ⇒ g from vertex i.

    For i = 0 this fills from f with β = t ⊗ b; for i = 1 it fills from g with β = -(1 - t) ⊗ b,
    where b(sx) = θ_1(x).
    """
    f, g = theta.source, theta.target
    algebra = ConvolutionAlgebra(f.source.to_infinity(), f.target.to_infinity())
    b = _edge_parameter(algebra, theta)
    if i == 0:
        mu = morphism_to_mc(f.to_infinity(), algebra)
        beta = SimplexTensor.tensor(algebra, b, SimplexForm.affine(1, 1))
    elif i == 1:
        mu = morphism_to_mc(g.to_infinity(), algebra)
        beta = SimplexTensor.tensor(algebra, b, SimplexForm.affine(1, 0)) * -1
    else:
        raise ArityError(f"Δ¹ has vertices 0 and 1, got {i}")
    return mu, beta.differential()


def lift_homotopy(theta: TwoTermHomotopy, i: int = 0) -> SimplexTensor:
    """Lift θ: f ⇒ g to a Maurer-Cartan element on Δ¹ of the convolution algebra, filling from vertex i."""
    mu, nu = filler_data(theta, i)
    alpha = b_inverse(mu, nu, i)
    logger.info(f"Lifted a homotopy from vertex {i} to a filler with {len(alpha.terms)} terms")
    return alpha


def _endpoint(alpha: SimplexTensor, vertex_index: int) -> TwoTermMorphism:
    element = alpha.evaluate(vertex_index)
    morphism = TwoTermMorphism.from_infinity(mc_to_morphism(element))
    report = check_two_term_morphism(morphism)
    if not report.passed:
        raise InvalidStructureError(f"Endpoint {vertex_index} is not a 2-term morphism: {report.summary()}")
    return morphism


def extract_homotopy(alpha: SimplexTensor, i: int = 0) -> TwoTermHomotopy:
    """
    Read a homotopy ε̄^0 α ⇒ ε̄^1 α off a Maurer-Cartan element on Δ¹.

    θ_1(x) = (ε̄^1 β - ε̄^0 β)(sx) with β = h̄^i α, the integral of the 1-form part over the edge.

    Raises
    ------
    InvalidStructureError
        If an endpoint is not a valid 2-term morphism.
    """
    if alpha.n != 1:
        raise ArityError("Homotopies are extracted from Δ¹")
    if not isinstance(alpha.algebra, ConvolutionAlgebra):
        raise ArityError("Homotopies are extracted from convolution algebras")
    f = _endpoint(alpha, 0)
    g = _endpoint(alpha, 1)
    beta = alpha.h(i)
    difference = beta.evaluate(1) - beta.evaluate(0)
    if difference.is_zero():
        difference = alpha.algebra.zero(0)
    return TwoTermHomotopy(f, g, linear_part(difference))


def vcompose_via_simplex(tau: TwoTermHomotopy, theta: TwoTermHomotopy) -> TwoTermHomotopy:
    """
    Vertical composite of θ: f ⇒ g and τ: g ⇒ h through a filler on Δ².

    β = -(1 - s - t) ⊗ b_θ + t ⊗ b_τ vanishes at e_1; the closed-form filler from g is restricted
    to the edge e_0 -> e_2 and read off as a homotopy f ⇒ h.
    """
    if theta.target != tau.source:
        raise InvalidStructureError("The homotopies are not vertically composable")
    g = theta.target
    algebra = ConvolutionAlgebra(g.source.to_infinity(), g.target.to_infinity())
    b_theta = _edge_parameter(algebra, theta)
    b_tau = _edge_parameter(algebra, tau)
    beta = SimplexTensor.tensor(algebra, b_theta, SimplexForm.affine(2, 0)) * -1 + SimplexTensor.tensor(
        algebra, b_tau, SimplexForm.affine(2, 2)
    )
    mu = morphism_to_mc(g.to_infinity(), algebra)
    alpha = closed_form(mu, beta)
    edge = alpha.restrict_to_edge(0, 2)
    return extract_homotopy(edge, 0)
