"""
Gauge action on Maurer-Cartan elements by degree-0 elements.

For a Maurer-Cartan α and r of degree 0 the curve α(t) = Σ_k t^k/k! e^k solves
dα/dt = -ℓ_1^{α(t)}(r), where ℓ^α is the bracket twisted by α. The coefficients obey

    e^0 = α,   e^{i+1} = -Σ_n (1/n!) Σ_{k_1 + ... + k_n = i} (i! / Π k_j!) ℓ^G_{n+1}(e^{k_1}, ..., e^{k_n}, r)

with ℓ^G_m = (-1)^{m(m-1)/2} ℓ_m. The curve stays Maurer-Cartan and γ(t) - r ⊗ dt is a
Maurer-Cartan element on Δ¹.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterator, List, Sequence, Tuple

from halgebra.convolution import Element, LInfinityAlgebra, mc_coefficient
from halgebra.errors import ConvergenceError, HomogeneityError
from halgebra.forms import SimplexForm
from halgebra.graded import parity_sign
from halgebra.simplex import SimplexTensor

logger = logging.getLogger("halgebra.gauge")

DEFAULT_ORDER = 8


def gauge_sign(m: int) -> int:
    """The sign (-1)^{m(m-1)/2} of ℓ^G_m."""
    return parity_sign(m * (m - 1) // 2)


def _weak_compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first, *rest)


def twisted_bracket(algebra: LInfinityAlgebra, alpha: Element, xs: Sequence[Element]) -> Element:
    """
    ℓ^α_q(x_1..x_q) = Σ_k (1/k!) ℓ^G_{k+q}(α, ..., α, x_1, ..., x_q).

    The sum stops at the algebra's largest bracket arity.
    """
    q = len(xs)
    acc = algebra.zero(sum(algebra.degree_of(x) for x in xs if not x.is_zero()) + q - 2)
    for k in range(0, algebra.max_arity - q + 1):
        m = k + q
        args: List[Element] = [alpha] * k + list(xs)
        term = algebra.bracket(m, args)
        if not term.is_zero():
            acc = acc + term * Fraction(gauge_sign(m), factorial(k))
    return acc


def flow_field(algebra: LInfinityAlgebra, alpha: Element, r: Element) -> Element:
    """The gauge vector field V_r(α) = -ℓ^α_1(r)."""
    return -twisted_bracket(algebra, alpha, [r])


@dataclass
class GaugeCurve:
    """
    The coefficients e^0, ..., e^K of a gauge curve, with e^K = 0.

    Attributes
    ----------
    algebra : LInfinityAlgebra
        The ambient Lie∞ algebra.
    alpha : Element
        The starting Maurer-Cartan element e^0.
    r : Element
        The degree-0 gauge parameter.
    coefficients : List[Element]
        e^0, e^1, ...; the curve is Σ t^k/k! e^k.
    """

    algebra: LInfinityAlgebra
    alpha: Element
    r: Element
    coefficients: List[Element] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def taylor(self) -> List[Element]:
        """The Taylor coefficients a_k = e^k / k!."""
        return [e * Fraction(1, factorial(k)) for k, e in enumerate(self.coefficients)]

    def at(self, t: Fraction) -> Element:
        """α(t) at a rational time."""
        acc = self.algebra.zero(-1)
        for k, a in enumerate(self.taylor()):
            if not a.is_zero():
                acc = acc + a * (Fraction(t) ** k)
        return acc

    def endpoint(self) -> Element:
        """α(1), the gauge transform of α by r."""
        return self.at(Fraction(1))


def gauge_curve(algebra: LInfinityAlgebra, alpha: Element, r: Element, order: int = DEFAULT_ORDER) -> GaugeCurve:
    """
    Compute e^0, ..., e^K for K ≤ ``order`` by the recursion.

    Raises
    ------
    HomogeneityError
        If α does not have degree -1 or r does not have degree 0.
    ConvergenceError
        If e^order is still nonzero, i.e. the algebra is not nilpotent enough.
    """
    if not alpha.is_zero() and algebra.degree_of(alpha) != -1:
        raise HomogeneityError(f"Maurer-Cartan elements have degree -1, got {algebra.degree_of(alpha)}")
    if not r.is_zero() and algebra.degree_of(r) != 0:
        raise HomogeneityError(f"Gauge parameters have degree 0, got {algebra.degree_of(r)}")
    coefficients: List[Element] = [alpha]
    for i in range(order):
        acc = algebra.zero(-1)
        for n in range(0, algebra.max_arity):
            for ks in _weak_compositions(i, n):
                weight = Fraction(factorial(i), factorial(n))
                for k in ks:
                    weight /= factorial(k)
                args = [coefficients[k] for k in ks]
                if any(a.is_zero() for a in args):
                    continue
                term = algebra.bracket(n + 1, [*args, r])
                if not term.is_zero():
                    acc = acc - term * (weight * gauge_sign(n + 1))
        if acc.is_zero():
            logger.debug(f"Gauge series terminated after {i + 1} coefficients")
            return GaugeCurve(algebra, alpha, r, coefficients)
        coefficients.append(acc)
    raise ConvergenceError(f"Gauge series has a nonzero coefficient at order {order}")


def _products(taylor: Sequence[Element], n: int, i: int) -> Iterator[Tuple[Element, ...]]:
    """Tuples (a_{k_1}, ..., a_{k_n}) with Σ k_j = i and every factor nonzero."""
    for ks in _weak_compositions(i, n):
        if all(k < len(taylor) for k in ks):
            args = tuple(taylor[k] for k in ks)
            if not any(a.is_zero() for a in args):
                yield args


def flow_residual(curve: GaugeCurve) -> Dict[int, Element]:
    """
    Per power t^i, the coefficient of dα/dt - V_r(α(t)), computed from the Taylor coefficients.

    All entries vanish for a correct curve.
    """
    algebra = curve.algebra
    taylor = curve.taylor()
    residuals: Dict[int, Element] = {}
    for i in range(curve.order):
        derivative = taylor[i + 1] * (i + 1) if i + 1 < len(taylor) else algebra.zero(-1)
        field_part = algebra.zero(-1)
        for n in range(0, algebra.max_arity):
            for args in _products(taylor, n, i):
                m = n + 1
                term = algebra.bracket(m, [*args, curve.r])
                if not term.is_zero():
                    field_part = field_part - term * Fraction(gauge_sign(m), factorial(n))
        residuals[i] = derivative - field_part
    return residuals


def mc_series_residual(curve: GaugeCurve) -> Dict[int, Element]:
    """Per power t^i, the coefficient of the Maurer-Cartan sum of α(t)."""
    algebra = curve.algebra
    taylor = curve.taylor()
    top = max(algebra.max_arity, 1)
    residuals: Dict[int, Element] = {}
    for i in range((curve.order - 1) * top + 1):
        acc = algebra.zero(-2)
        for p in range(1, top + 1):
            for args in _products(taylor, p, i):
                term = algebra.bracket(p, list(args))
                if not term.is_zero():
                    acc = acc + term * mc_coefficient(p)
        residuals[i] = acc
    return residuals


def quillen_path(curve: GaugeCurve) -> SimplexTensor:
    """γ(t) - r ⊗ dt as an element of L ⊗ Ω(Δ¹)."""
    algebra = curve.algebra
    acc = SimplexTensor.zero(algebra, 1, -1)
    for k, a in enumerate(curve.taylor()):
        if not a.is_zero():
            acc = acc + SimplexTensor.tensor(algebra, a, SimplexForm.monomial(1, (), (k,)))
    if not curve.r.is_zero():
        acc = acc - SimplexTensor.tensor(algebra, curve.r, SimplexForm.differential(1, 0))
    return acc
