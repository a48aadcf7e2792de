"""
Polynomial differential forms on the simplices Δ¹ and Δ².

Coordinates are ``t`` on Δ¹ and ``(s, t)`` on Δ²; the vertex e_0 is the origin and e_i, i ≥ 1,
is the i-th unit point. A form is stored as a mapping from sorted differential index tuples
(``()`` for functions, ``(0,)`` for ds or dt, ...) to sympy polynomials with rational
coefficients. Forms are graded negatively: a k-form has degree -k.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

import sympy
from sympy import QQ, Poly, Rational

from halgebra.config import get_settings
from halgebra.errors import ArityError, HomogeneityError, PolynomialDegreeError
from halgebra.graded import ScalarLike, format_scalar, parity_sign, to_scalar

logger = logging.getLogger("halgebra.forms")

Indices = Tuple[int, ...]
Exponents = Tuple[int, ...]

_COORDINATES: Dict[int, Tuple[sympy.Symbol, ...]] = {
    1: (sympy.Symbol("t"),),
    2: (sympy.Symbol("s"), sympy.Symbol("t")),
}
_FIBER = sympy.Symbol("u")


def coordinates(n: int) -> Tuple[sympy.Symbol, ...]:
    if n not in _COORDINATES:
        raise ArityError(f"Only the simplices of dimension 1 and 2 are supported, got {n}")
    return _COORDINATES[n]


def vertex(n: int, i: int) -> Tuple[int, ...]:
    """Coordinates of the vertex e_i of Δⁿ."""
    if not 0 <= i <= n:
        raise ArityError(f"Vertex {i} does not exist on a {n}-simplex")
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def to_rational(value: Fraction) -> Rational:
    return Rational(value.numerator, value.denominator)


def from_rational(value: sympy.Expr) -> Fraction:
    rational = sympy.nsimplify(value) if not isinstance(value, Rational) else value
    return Fraction(int(rational.p), int(rational.q))


def merge_indices(first: Indices, second: Indices) -> Tuple[int, Indices]:
    """
    Sign and sorted union of dx_I ∧ dx_J; the sign is 0 when I and J overlap.

    Examples
    --------
    >>> merge_indices((1,), (0,))
    (-1, (0, 1))
    >>> merge_indices((0,), (0,))
    (0, ())
    """
    if set(first) & set(second):
        return 0, ()
    inversions = sum(1 for a in first for b in second if a > b)
    return parity_sign(inversions), tuple(sorted(first + second))


class SimplexForm:
    """
    A polynomial differential form on Δ¹ or Δ².

    Parameters
    ----------
    n : int
        Dimension of the simplex.
    components : Optional[Mapping[Indices, Poly]], optional
        Polynomial coefficient per differential monomial.

    Raises
    ------
    PolynomialDegreeError
        If a coefficient exceeds the configured polynomial degree cap.

    Examples
    --------
    >>> SimplexForm.differential(1, 0).degree
    -1
    >>> form_h(1, 0, SimplexForm.differential(1, 0))
    t
    """

    __slots__ = ("_components", "n")

    def __init__(self, n: int, components: Optional[Mapping[Indices, Poly]] = None) -> None:
        gens = coordinates(n)
        self.n = n
        cap = get_settings().max_polynomial_degree
        clean: Dict[Indices, Poly] = {}
        for indices, poly in (components or {}).items():
            key = tuple(indices)
            if list(key) != sorted(set(key)) or any(not 0 <= j < n for j in key):
                raise ArityError(f"Invalid differential indices {key} on a {n}-simplex")
            poly = Poly(poly.as_expr(), *gens, domain=QQ)
            if poly.is_zero:
                continue
            if poly.total_degree() > cap:
                raise PolynomialDegreeError(f"Coefficient of degree {poly.total_degree()} exceeds the cap {cap}")
            clean[key] = poly
        self._components = clean

    @classmethod
    def zero(cls, n: int) -> "SimplexForm":
        return cls(n)

    @classmethod
    def from_exprs(cls, n: int, components: Mapping[Indices, sympy.Expr | int]) -> "SimplexForm":
        gens = coordinates(n)
        return cls(n, {k: Poly(sympy.sympify(v), *gens, domain=QQ) for k, v in components.items()})

    @classmethod
    def constant(cls, n: int, value: ScalarLike = 1) -> "SimplexForm":
        return cls.from_exprs(n, {(): to_rational(to_scalar(value))})

    @classmethod
    def coordinate(cls, n: int, j: int) -> "SimplexForm":
        return cls.from_exprs(n, {(): coordinates(n)[j]})

    @classmethod
    def affine(cls, n: int, i: int) -> "SimplexForm":
        """The barycentric coordinate t_i: 1 - Σ x_j for i = 0 and x_{i-1} otherwise."""
        gens = coordinates(n)
        if not 0 <= i <= n:
            raise ArityError(f"Vertex {i} does not exist on a {n}-simplex")
        expr = 1 - sum(gens) if i == 0 else gens[i - 1]
        return cls.from_exprs(n, {(): expr})

    @classmethod
    def differential(cls, n: int, j: int) -> "SimplexForm":
        return cls.from_exprs(n, {(j,): 1})

    @classmethod
    def monomial(cls, n: int, indices: Indices, exponents: Exponents, coefficient: ScalarLike = 1) -> "SimplexForm":
        gens = coordinates(n)
        poly = Poly.from_dict({tuple(exponents): to_rational(to_scalar(coefficient))}, *gens, domain=QQ)
        return cls(n, {tuple(indices): poly})

    @property
    def components(self) -> Dict[Indices, Poly]:
        return dict(self._components)

    def component(self, indices: Indices) -> Poly:
        poly = self._components.get(tuple(indices))
        return poly if poly is not None else Poly(0, *coordinates(self.n), domain=QQ)

    def terms(self) -> Iterator[Tuple[Indices, Exponents, Fraction]]:
        """Iterate the monomials as (differential indices, exponents, coefficient)."""
        for indices, poly in self._components.items():
            for exponents, coefficient in poly.terms():
                yield indices, tuple(exponents), from_rational(coefficient)

    def is_zero(self) -> bool:
        return not self._components

    @property
    def degree(self) -> Optional[int]:
        degrees = {-len(k) for k in self._components}
        if not degrees:
            return None
        if len(degrees) > 1:
            raise HomogeneityError(f"Form mixes degrees {sorted(degrees)}")
        return degrees.pop()

    def part(self, k: int) -> "SimplexForm":
        """The k-form part."""
        return SimplexForm(self.n, {i: p for i, p in self._components.items() if len(i) == k})

    def _check(self, other: "SimplexForm") -> None:
        if other.n != self.n:
            raise ArityError(f"Forms on simplices of dimension {self.n} and {other.n}")

    def __add__(self, other: "SimplexForm") -> "SimplexForm":
        self._check(other)
        keys = set(self._components) | set(other._components)
        return SimplexForm(self.n, {k: self.component(k) + other.component(k) for k in keys})

    def __sub__(self, other: "SimplexForm") -> "SimplexForm":
        return self + (-other)

    def __neg__(self) -> "SimplexForm":
        return self * -1

    def __mul__(self, scalar: ScalarLike) -> "SimplexForm":
        k = to_rational(to_scalar(scalar))
        return SimplexForm(self.n, {i: p * k for i, p in self._components.items()})

    __rmul__ = __mul__

    def wedge(self, other: "SimplexForm") -> "SimplexForm":
        """The exterior product ω ∧ η."""
        self._check(other)
        acc: Dict[Indices, Poly] = {}
        for i, p in self._components.items():
            for j, q in other._components.items():
                sign, merged = merge_indices(i, j)
                if sign == 0:
                    continue
                term = p * q * sign
                acc[merged] = acc[merged] + term if merged in acc else term
        return SimplexForm(self.n, acc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplexForm):
            return NotImplemented
        return self.n == other.n and (self - other).is_zero()

    def __hash__(self) -> int:
        return hash((self.n, frozenset((k, p.as_expr()) for k, p in self._components.items())))

    def __repr__(self) -> str:
        if not self._components:
            return "0"
        names = [f"d{g}" for g in coordinates(self.n)]
        parts = []
        for indices in sorted(self._components, key=lambda k: (len(k), k)):
            expr = self._components[indices].as_expr()
            if not indices:
                parts.append(str(expr))
                continue
            wedge = "∧".join(names[j] for j in indices)
            parts.append(wedge if expr == 1 else f"({expr})*{wedge}")
        return " + ".join(parts)


def form_d(omega: SimplexForm) -> SimplexForm:
    """
    The de Rham differential: d(p dx_I) = Σ_j ∂_j p dx_j ∧ dx_I.

    Examples
    --------
    >>> form_d(SimplexForm.coordinate(1, 0))
    dt
    """
    gens = coordinates(omega.n)
    acc: Dict[Indices, Poly] = {}
    for indices, poly in omega.components.items():
        for j, gen in enumerate(gens):
            if j in indices:
                continue
            derivative = poly.diff(gen)
            if derivative.is_zero:
                continue
            sign = parity_sign(sum(1 for a in indices if a < j))
            key = tuple(sorted((*indices, j)))
            term = derivative * sign
            acc[key] = acc[key] + term if key in acc else term
    return SimplexForm(omega.n, acc)


def form_h(n: int, i: int, omega: SimplexForm) -> SimplexForm:
    """
    The contraction h_n^i: fiber integration of the pullback along φ(u, x) = u x + (1 - u) e_i.

    Writing φ*ω = du ∧ A + (terms without du), ``h ω = ∫_0^1 A du``. It satisfies
    d h + h d = id - ε_n^i, h_n^i h_n^j + h_n^j h_n^i = 0 and ε_n^i h_n^i = 0.

    Raises
    ------
    ArityError
        If ``i`` is not a vertex of Δⁿ or ``omega`` lives on another simplex.
    """
    if omega.n != n:
        raise ArityError(f"Form on a {omega.n}-simplex passed to h_{n}")
    gens = coordinates(n)
    corner = vertex(n, i)
    offsets = [gens[j] - corner[j] for j in range(n)]
    substitution = {gens[j]: _FIBER * gens[j] + (1 - _FIBER) * corner[j] for j in range(n)}
    acc: Dict[Indices, Poly] = {}
    for indices, poly in omega.components.items():
        k = len(indices)
        if k == 0:
            continue
        pulled = poly.as_expr().subs(substitution, simultaneous=True)
        for r, j in enumerate(indices):
            rest = indices[:r] + indices[r + 1 :]
            integrand = Poly(parity_sign(r) * offsets[j] * _FIBER ** (k - 1) * pulled, _FIBER, *gens, domain=QQ)
            antiderivative = integrand.integrate(_FIBER).as_expr()
            value = sympy.expand(antiderivative.subs(_FIBER, 1) - antiderivative.subs(_FIBER, 0))
            term = Poly(value, *gens, domain=QQ)
            acc[rest] = acc[rest] + term if rest in acc else term
    return SimplexForm(n, acc)


def form_eval(n: int, i: int, omega: SimplexForm) -> SimplexForm:
    """ε_n^i: the value of the 0-form part at the vertex e_i, as a constant form."""
    if omega.n != n:
        raise ArityError(f"Form on a {omega.n}-simplex passed to ε_{n}")
    return SimplexForm.constant(n, vertex_value(omega, i))


def vertex_value(omega: SimplexForm, i: int) -> Fraction:
    """The 0-form part of ``omega`` evaluated at the vertex e_i."""
    gens = coordinates(omega.n)
    corner = vertex(omega.n, i)
    value = omega.component(()).as_expr().subs({g: c for g, c in zip(gens, corner, strict=True)}, simultaneous=True)
    return from_rational(value)


def restrict_to_edge(omega: SimplexForm, a: int, b: int) -> SimplexForm:
    """
    Pull a form on Δ² back along the edge from e_a to e_b, parametrized by t ∈ [0, 1] on Δ¹.

    Forms of degree -2 restrict to zero.
    """
    if omega.n != 2:
        raise ArityError("Edges are restricted from the 2-simplex")
    gens = coordinates(2)
    (t,) = coordinates(1)
    start, end = vertex(2, a), vertex(2, b)
    substitution = {gens[j]: (1 - t) * start[j] + t * end[j] for j in range(2)}
    acc = sympy.Integer(0)
    zero_form = sympy.Integer(0)
    for indices, poly in omega.components.items():
        pulled = poly.as_expr().subs(substitution, simultaneous=True)
        if not indices:
            zero_form += pulled
        elif len(indices) == 1:
            (j,) = indices
            acc += pulled * (end[j] - start[j])
    return SimplexForm.from_exprs(1, {(): sympy.expand(zero_form), (0,): sympy.expand(acc)})


def integrate_edge(omega: SimplexForm) -> Fraction:
    """∫ over Δ¹ of the 1-form part of a form on Δ¹."""
    if omega.n != 1:
        raise ArityError("Only forms on Δ¹ are integrated over the edge")
    (t,) = coordinates(1)
    expr = omega.component((0,)).as_expr()
    return from_rational(sympy.integrate(expr, (t, 0, 1)))


def random_form(n: int, k: int, coefficients: Sequence[int], max_degree: int = 3) -> SimplexForm:
    """A k-form whose monomials up to ``max_degree`` take ``coefficients`` cyclically."""
    gens = coordinates(n)
    monomials = [e for e in _exponents(n, max_degree)]
    keys = [i for i in _index_sets(n) if len(i) == k]
    components: Dict[Indices, sympy.Expr] = {}
    position = 0
    for key in keys:
        expr = sympy.Integer(0)
        for exponents in monomials:
            c = coefficients[position % len(coefficients)]
            position += 1
            term = sympy.Integer(c)
            for g, e in zip(gens, exponents, strict=True):
                term *= g**e
            expr += term
        components[key] = expr
    return SimplexForm.from_exprs(n, components)


def _exponents(n: int, max_degree: int) -> Iterator[Exponents]:
    if n == 1:
        for a in range(max_degree + 1):
            yield (a,)
    else:
        for a in range(max_degree + 1):
            for b in range(max_degree + 1 - a):
                yield (a, b)


def _index_sets(n: int) -> Iterator[Indices]:
    yield ()
    for j in range(n):
        yield (j,)
    if n == 2:
        yield (0, 1)


def describe(omega: SimplexForm) -> str:
    """Readable rendering with rational coefficients."""
    parts = []
    for indices, exponents, coefficient in sorted(omega.terms()):
        monomial = "*".join(
            f"{g}^{e}" if e > 1 else str(g) for g, e in zip(coordinates(omega.n), exponents, strict=True) if e
        )
        differential = "∧".join(f"d{coordinates(omega.n)[j]}" for j in indices)
        body = "*".join(p for p in (monomial, differential) if p) or "1"
        parts.append(f"{format_scalar(coefficient)}*{body}")
    return " + ".join(parts) if parts else "0"
