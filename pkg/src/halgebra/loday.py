"""
Loday cohomology of finite-dimensional Leibniz algebras.

Brackets are left Leibniz: [x, [y, z]] = [[x, y], z] + [y, [x, z]]. Coefficients are a bimodule
(W, μ^l, μ^r) or a representation ρ, which acts as the bimodule μ^l = ρ, μ^r = -ρ. Cochains are
multilinear maps V^{⊗p} -> W with no symmetry imposed, and the coboundary is

    (∂c)(x_1..x_{p+1}) = (-1)^{p+1} μ^r(x_{p+1}) c(x_1..x_p)
                         + Σ_i (-1)^{i+1} μ^l(x_i) c(..x̂_i..)
                         + Σ_{i<j} (-1)^i c(..x̂_i.., [x_i, x_j] at j, ..).

Scalar cochains (W = K) form the shuffle algebra, on which ∂ (trivial coefficients), the
contractions i_X and the Lie derivatives L_X act as graded derivations.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from halgebra.config import get_settings
from halgebra.errors import ArityError, HomogeneityError, SpaceMismatchError
from halgebra.forms import from_rational, to_rational
from halgebra.graded import (
    Basis,
    GradedSpace,
    MultiMap,
    ScalarLike,
    Vector,
    enumerate_shuffles,
    parity_sign,
)
from halgebra.reports import IdentityReport

logger = logging.getLogger("halgebra.loday")

Operators = Dict[Basis, MultiMap]
CochainFunction = Callable[[Tuple[Basis, ...]], Vector]


def scalars(name: str = "K") -> GradedSpace:
    """The one-dimensional coefficient space K in degree 0."""
    return GradedSpace(name, {0: 1}, labels={0: ["1"]})


def _check_degree_zero(space: GradedSpace, role: str) -> None:
    if any(d != 0 for d in space.degrees()):
        raise HomogeneityError(f"The {role} {space.name} must be concentrated in degree 0")


# ---------------------------------------------------------------------------
# Algebras and coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeibnizAlgebra:
    """
    A finite-dimensional (left) Leibniz algebra in degree 0.

    Examples
    --------
    >>> V = GradedSpace("V", {0: 2}, labels={0: ["x", "y"]})
    >>> alg = LeibnizAlgebra(V, MultiMap.from_entries(2, 0, V, V, [((V["y"], V["y"]), V["x"], 1)]))
    >>> check_leibniz_algebra(alg).passed
    True
    """

    space: GradedSpace
    bracket_map: MultiMap

    def __post_init__(self) -> None:
        _check_degree_zero(self.space, "Leibniz algebra")
        f = self.bracket_map
        if f.arity != 2 or f.degree != 0 or f.source != self.space or f.target != self.space:
            raise SpaceMismatchError("The bracket must be a degree 0 bilinear operator on the space")

    @classmethod
    def abelian(cls, space: GradedSpace) -> "LeibnizAlgebra":
        return cls(space, MultiMap.zero(2, 0, space, space))

    @property
    def dimension(self) -> int:
        return self.space.total_dim

    def basis(self) -> List[Basis]:
        return self.space.basis(0)

    def bracket(self, x: Vector, y: Vector) -> Vector:
        return self.bracket_map(x, y)


def _combination(actions: Mapping[Basis, MultiMap], x: Vector, module: GradedSpace) -> MultiMap:
    """The operator Σ x_b A(b) for a vector x."""
    acc = MultiMap.zero(1, 0, module, module)
    for b, c in x.items():
        op = actions.get(b)
        if op is not None:
            acc = acc + op * c
    return acc


def _check_operators(actions: Mapping[Basis, MultiMap], algebra: LeibnizAlgebra, module: GradedSpace) -> Operators:
    clean: Operators = {}
    for b, op in actions.items():
        if b.space != algebra.space:
            raise SpaceMismatchError(f"{b!r} is not a basis letter of {algebra.space.name}")
        if op.arity != 1 or op.degree != 0 or op.source != module or op.target != module:
            raise SpaceMismatchError(f"The action of {b!r} is not a degree 0 operator on {module.name}")
        if not op.is_zero():
            clean[b] = op
    return clean


@dataclass(frozen=True)
class Bimodule:
    """
    A bimodule (W, μ^l, μ^r) over a Leibniz algebra, with μ^l(x) and μ^r(x) stored per basis letter x.
    """

    algebra: LeibnizAlgebra
    module: GradedSpace
    left_actions: Operators = field(default_factory=dict)
    right_actions: Operators = field(default_factory=dict)

    def __post_init__(self) -> None:
        _check_degree_zero(self.module, "coefficient space")
        object.__setattr__(self, "left_actions", _check_operators(self.left_actions, self.algebra, self.module))
        object.__setattr__(self, "right_actions", _check_operators(self.right_actions, self.algebra, self.module))

    def left(self, x: Vector) -> MultiMap:
        return _combination(self.left_actions, x, self.module)

    def right(self, x: Vector) -> MultiMap:
        return _combination(self.right_actions, x, self.module)


@dataclass(frozen=True)
class Representation:
    """
    A representation ρ: V -> End(W) of a Leibniz algebra, stored as ρ(x) per basis letter x.
    """

    algebra: LeibnizAlgebra
    module: GradedSpace
    actions: Operators = field(default_factory=dict)

    def __post_init__(self) -> None:
        _check_degree_zero(self.module, "coefficient space")
        object.__setattr__(self, "actions", _check_operators(self.actions, self.algebra, self.module))

    @classmethod
    def trivial(cls, algebra: LeibnizAlgebra, module: Optional[GradedSpace] = None) -> "Representation":
        return cls(algebra, module if module is not None else scalars())

    @classmethod
    def adjoint(cls, algebra: LeibnizAlgebra) -> "Representation":
        """ρ(x) = [x, ·], a representation by the left Leibniz identity."""
        actions = {x: _left_multiplication(algebra, x) for x in algebra.basis()}
        return cls(algebra, algebra.space, actions)

    def rho(self, x: Vector) -> MultiMap:
        return _combination(self.actions, x, self.module)

    def to_bimodule(self) -> Bimodule:
        """μ^l = ρ and μ^r = -ρ."""
        return Bimodule(
            self.algebra,
            self.module,
            dict(self.actions),
            {b: -op for b, op in self.actions.items()},
        )


def _left_multiplication(algebra: LeibnizAlgebra, x: Basis) -> MultiMap:
    space = algebra.space

    def value(key: Tuple[Basis, ...]) -> Vector:
        return algebra.bracket(Vector.basis(x), Vector.basis(key[0]))

    return MultiMap.from_function(1, 0, space, space, value)


Coefficients = Union[Representation, Bimodule]


def _as_bimodule(coeff: Coefficients) -> Bimodule:
    return coeff.to_bimodule() if isinstance(coeff, Representation) else coeff


# ---------------------------------------------------------------------------
# Cochains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LodayCochain:
    """
    A p-cochain: a multilinear map V^{⊗p} -> W. Arity 0 cochains are elements of W.
    """

    algebra: LeibnizAlgebra
    module: GradedSpace
    values: MultiMap

    def __post_init__(self) -> None:
        f = self.values
        if f.degree != 0 or f.source != self.algebra.space or f.target != self.module:
            raise SpaceMismatchError(f"A cochain is a degree 0 map {self.algebra.space.name}^p -> {self.module.name}")

    @classmethod
    def zero(cls, algebra: LeibnizAlgebra, module: GradedSpace, arity: int) -> "LodayCochain":
        return cls(algebra, module, MultiMap.zero(arity, 0, algebra.space, module))

    @classmethod
    def constant(cls, algebra: LeibnizAlgebra, w: Vector) -> "LodayCochain":
        module = next(iter(w)).space if not w.is_zero() else scalars()
        return cls(algebra, module, MultiMap(0, 0, algebra.space, module, {(): w}))

    @classmethod
    def from_scalars(
        cls, algebra: LeibnizAlgebra, arity: int, values: Mapping[Tuple[Basis, ...], ScalarLike]
    ) -> "LodayCochain":
        """A scalar cochain from its values on basis tuples."""
        module = scalars()
        unit = module.basis(0)[0]
        entries = {tuple(k): Vector({unit: v}) for k, v in values.items()}
        return cls(algebra, module, MultiMap(arity, 0, algebra.space, module, entries))

    @property
    def arity(self) -> int:
        return self.values.arity

    def __call__(self, *xs: Vector) -> Vector:
        return self.values(*xs)

    def on_basis(self, key: Sequence[Basis]) -> Vector:
        return self.values.on_basis(key)

    def is_zero(self) -> bool:
        return self.values.is_zero()

    def _like(self, values: MultiMap) -> "LodayCochain":
        return LodayCochain(self.algebra, self.module, values)

    def __add__(self, other: "LodayCochain") -> "LodayCochain":
        return self._like(self.values + other.values)

    def __sub__(self, other: "LodayCochain") -> "LodayCochain":
        return self._like(self.values - other.values)

    def __neg__(self) -> "LodayCochain":
        return self._like(-self.values)

    def __mul__(self, scalar: ScalarLike) -> "LodayCochain":
        return self._like(self.values * scalar)

    __rmul__ = __mul__


def _tabulate(algebra: LeibnizAlgebra, module: GradedSpace, arity: int, func: CochainFunction) -> LodayCochain:
    return LodayCochain(algebra, module, MultiMap.from_function(arity, 0, algebra.space, module, func))


def _check_arity(arity: int) -> None:
    cap = get_settings().max_cochain_arity
    if arity > cap:
        raise ArityError(f"Cochain arity {arity} exceeds the cap {cap}")


def _insert_bracket(c: LodayCochain, key: Tuple[Basis, ...], i: int, j: int) -> Vector:
    """c(x_1..x̂_i..[x_i, x_j] at j..x_{p+1}) with 0-based positions i < j."""
    bracket = c.algebra.bracket(Vector.basis(key[i]), Vector.basis(key[j]))
    if bracket.is_zero():
        return Vector.zero()
    args = [Vector.basis(b) for b in key]
    args[j] = bracket
    del args[i]
    return c(*args)


def loday_coboundary(c: LodayCochain, coeff: Coefficients) -> LodayCochain:
    """
    The Loday coboundary ∂c, of arity p + 1.

    Raises
    ------
    SpaceMismatchError
        If the coefficients do not act on the cochain's values.
    ArityError
        If p + 1 exceeds the configured cochain arity cap.

    Examples
    --------
    >>> V = GradedSpace("V", {0: 1}, labels={0: ["x"]})
    >>> alg = LeibnizAlgebra.abelian(V)
    >>> c = LodayCochain.from_scalars(alg, 1, {(V["x"],): 1})
    >>> loday_coboundary(c, Representation.trivial(alg)).is_zero()
    True
    """
    bimodule = _as_bimodule(coeff)
    if bimodule.algebra != c.algebra or bimodule.module != c.module:
        raise SpaceMismatchError("Coefficients do not match the cochain")
    p = c.arity
    _check_arity(p + 1)

    def value(key: Tuple[Basis, ...]) -> Vector:
        head = c.on_basis(key[:p])
        acc = bimodule.right(Vector.basis(key[p]))(head) * parity_sign(p + 1) if not head.is_zero() else Vector.zero()
        for i in range(p):
            rest = key[:i] + key[i + 1 :]
            inner = c.on_basis(rest)
            if not inner.is_zero():
                acc = acc + bimodule.left(Vector.basis(key[i]))(inner) * parity_sign(i)
        for i in range(p + 1):
            for j in range(i + 1, p + 1):
                term = _insert_bracket(c, key, i, j)
                if not term.is_zero():
                    # (-1)^i with 1-based i
                    acc = acc + term * parity_sign(i + 1)
        return acc

    return _tabulate(c.algebra, c.module, p + 1, value)


def _scalar(v: Vector) -> Fraction:
    return sum(v.values(), Fraction(0))


def _require_scalar(c: LodayCochain) -> None:
    if c.module.total_dim != 1:
        raise SpaceMismatchError("Shuffle products are defined for scalar cochains")


def shuffle_product(a: LodayCochain, b: LodayCochain) -> LodayCochain:
    """
    (a ⋔ b)(x_1..x_{p+q}) = Σ_{σ ∈ Sh(p,q)} sgn(σ) a(x_σ(1)..x_σ(p)) b(x_σ(p+1)..x_σ(p+q)).

    Raises
    ------
    SpaceMismatchError
        If either cochain is not scalar-valued or they live over different algebras.
    """
    _require_scalar(a)
    _require_scalar(b)
    if a.algebra != b.algebra or a.module != b.module:
        raise SpaceMismatchError("Shuffle product of cochains over different algebras")
    p, q = a.arity, b.arity
    _check_arity(p + q)
    unit = a.module.basis(0)[0]
    shuffles = [(sigma, sigma.sign()) for sigma in enumerate_shuffles(p, q)]

    def value(key: Tuple[Basis, ...]) -> Vector:
        total = Fraction(0)
        for sigma, sign in shuffles:
            moved = sigma.apply(key)
            left = _scalar(a.on_basis(moved[:p]))
            if left == 0:
                continue
            total += sign * left * _scalar(b.on_basis(moved[p:]))
        return Vector({unit: total})

    return _tabulate(a.algebra, a.module, p + q, value)


def unit_cochain(algebra: LeibnizAlgebra) -> LodayCochain:
    """The unit 1 of the shuffle algebra."""
    module = scalars()
    return LodayCochain.constant(algebra, Vector.basis(module.basis(0)[0]))


def contraction(x: Vector, c: LodayCochain) -> LodayCochain:
    """(i_X c)(x_1..x_{p-1}) = c(X, x_1..x_{p-1})."""
    p = c.arity
    if p < 1:
        raise ArityError("Contraction lowers the arity, which is already 0")

    def value(key: Tuple[Basis, ...]) -> Vector:
        return c(x, *(Vector.basis(b) for b in key))

    return _tabulate(c.algebra, c.module, p - 1, value)


def contraction_square(x: Vector, y: Vector, c: LodayCochain) -> LodayCochain:
    """The supercommutator i_X i_Y + i_Y i_X, a derivation of degree -2."""
    return contraction(x, contraction(y, c)) + contraction(y, contraction(x, c))


def box_contraction(x: Vector, y: Vector, c: LodayCochain) -> LodayCochain:
    """i_{X□Y} c = c(Y, X, ...) + c(X, Y, ...), the closed form of :func:`contraction_square`."""
    if c.arity < 2:
        raise ArityError("i_{X□Y} needs a cochain of arity at least 2")

    def value(key: Tuple[Basis, ...]) -> Vector:
        rest = [Vector.basis(b) for b in key]
        return c(y, x, *rest) + c(x, y, *rest)

    return _tabulate(c.algebra, c.module, c.arity - 2, value)


def lie_derivative(x: Vector, c: LodayCochain, rep: Representation) -> LodayCochain:
    """(L_X c)(x_1..x_p) = ρ(X) c(x_1..x_p) - Σ_i c(.., [X, x_i], ..)."""
    if rep.algebra != c.algebra or rep.module != c.module:
        raise SpaceMismatchError("Representation does not match the cochain")
    algebra = c.algebra
    action = rep.rho(x)

    def value(key: Tuple[Basis, ...]) -> Vector:
        acc = action(c.on_basis(key))
        args = [Vector.basis(b) for b in key]
        for i, b in enumerate(key):
            bracket = algebra.bracket(x, Vector.basis(b))
            if bracket.is_zero():
                continue
            acc = acc - c(*args[:i], bracket, *args[i + 1 :])
        return acc

    return _tabulate(algebra, c.module, c.arity, value)


def cartan_lie_derivative(x: Vector, c: LodayCochain, rep: Representation) -> LodayCochain:
    """L_X computed as ∂ i_X + i_X ∂."""
    first = loday_coboundary(contraction(x, c), rep) if c.arity >= 1 else LodayCochain.zero(c.algebra, c.module, 0)
    return first + contraction(x, loday_coboundary(c, rep))


# ---------------------------------------------------------------------------
# Validators
# ---------------------------------------------------------------------------


def check_leibniz_algebra(alg: LeibnizAlgebra) -> IdentityReport:
    """[x, [y, z]] - [[x, y], z] - [y, [x, z]] on every basis triple, family ``jacobi``."""
    report = IdentityReport(name="leibniz-algebra")
    report.touch("jacobi")
    basis = alg.basis()
    for x in basis:
        for y in basis:
            for z in basis:
                vx, vy, vz = Vector.basis(x), Vector.basis(y), Vector.basis(z)
                residual = (
                    alg.bracket(vx, alg.bracket(vy, vz))
                    - alg.bracket(alg.bracket(vx, vy), vz)
                    - alg.bracket(vy, alg.bracket(vx, vz))
                )
                report.record("jacobi", (x, y, z), residual)
    report.log_summary()
    return report


def check_lie_algebra(alg: LeibnizAlgebra) -> IdentityReport:
    """Antisymmetry [x, y] + [y, x] = 0 on basis pairs plus the Jacobi identity."""
    report = IdentityReport(name="lie-algebra")
    report.touch("antisymmetry")
    for x in alg.basis():
        for y in alg.basis():
            vx, vy = Vector.basis(x), Vector.basis(y)
            report.record("antisymmetry", (x, y), alg.bracket(vx, vy) + alg.bracket(vy, vx))
    report.merge(check_leibniz_algebra(alg))
    report.log_summary()
    return report


def _record_operator(report: IdentityReport, family: str, key: Tuple[Basis, ...], op: MultiMap) -> None:
    """Record an operator residual column by column."""
    for w in op.source.basis():
        report.record(family, (*key, w), op.on_basis((w,)))


def check_representation(rep: Representation) -> IdentityReport:
    """ρ([x, y]) - ρ(x)ρ(y) + ρ(y)ρ(x) on basis pairs, family ``homomorphism``."""
    report = IdentityReport(name="representation")
    report.touch("homomorphism")
    alg = rep.algebra
    for x in alg.basis():
        for y in alg.basis():
            vx, vy = Vector.basis(x), Vector.basis(y)
            residual = rep.rho(alg.bracket(vx, vy)) - rep.rho(vx).compose(rep.rho(vy)) + rep.rho(vy).compose(rep.rho(vx))
            _record_operator(report, "homomorphism", (x, y), residual)
    report.log_summary()
    return report


def check_bimodule(b: Bimodule) -> IdentityReport:
    """The three bimodule relations on basis pairs, families ``VVW``, ``WVV`` and ``VWV``."""
    report = IdentityReport(name="bimodule")
    for family in ("VVW", "WVV", "VWV"):
        report.touch(family)
    alg = b.algebra
    for x in alg.basis():
        for y in alg.basis():
            vx, vy = Vector.basis(x), Vector.basis(y)
            xy = alg.bracket(vx, vy)
            lx, ly, rx, ry = b.left(vx), b.left(vy), b.right(vx), b.right(vy)
            _record_operator(report, "VVW", (x, y), b.right(xy) - ry.compose(rx) - lx.compose(ry))
            _record_operator(report, "WVV", (x, y), b.right(xy) - lx.compose(ry) + ry.compose(lx))
            _record_operator(report, "VWV", (x, y), b.left(xy) - lx.compose(ly) + ly.compose(lx))
    report.log_summary()
    return report


# ---------------------------------------------------------------------------
# Cartan calculus
# ---------------------------------------------------------------------------


def basis_cochains(algebra: LeibnizAlgebra, module: GradedSpace, arity: int) -> Iterator[Tuple[Tuple[Basis, ...], LodayCochain]]:
    """The cochains sending one basis tuple to one basis letter of W and everything else to 0."""
    for key in algebra.space.tuples(arity):
        for w in module.basis():
            values = MultiMap(arity, 0, algebra.space, module, {key: Vector.basis(w)})
            yield (*key, w), LodayCochain(algebra, module, values)


def _record_cochain(report: IdentityReport, family: str, key: Tuple[Basis, ...], c: LodayCochain) -> None:
    if c.is_zero():
        report.record(family, key, Vector.zero())
        return
    for inputs, value in c.values.entries.items():
        report.record(family, (*key, *inputs), value)


def cartan_check(rep: Representation, max_arity: int = 3) -> IdentityReport:
    """
    Evaluate the Cartan identities on every basis cochain of arity ≤ ``max_arity``.

    Families: ``a`` (∂² = 0), ``b`` (L_X = ∂ i_X + i_X ∂), ``c`` ([∂, L_X] = 0),
    ``d`` ([L_X, i_Y] = i_{[X,Y]}) and ``e`` ([L_X, L_Y] = L_{[X,Y]}). Every identity is linear
    in the cochain, so basis cochains cover all cochains. Identities whose evaluation would
    exceed the cochain arity cap are skipped for that arity.
    """
    report = IdentityReport(name="cartan")
    for family in "abcde":
        report.touch(family)
    alg = rep.algebra
    cap = get_settings().max_cochain_arity
    letters = [Vector.basis(b) for b in alg.basis()]
    for p in range(0, max_arity + 1):
        for key, c in basis_cochains(alg, rep.module, p):
            if p + 2 <= cap:
                _record_cochain(report, "a", key, loday_coboundary(loday_coboundary(c, rep), rep))
            for bx, x in zip(alg.basis(), letters, strict=True):
                lx = lie_derivative(x, c, rep)
                if p + 1 <= cap:
                    _record_cochain(report, "b", (bx, *key), lx - cartan_lie_derivative(x, c, rep))
                    residual = loday_coboundary(lx, rep) - lie_derivative(x, loday_coboundary(c, rep), rep)
                    _record_cochain(report, "c", (bx, *key), residual)
                for by, y in zip(alg.basis(), letters, strict=True):
                    xy = alg.bracket(x, y)
                    if p >= 1:
                        residual = (
                            lie_derivative(x, contraction(y, c), rep)
                            - contraction(y, lx)
                            - contraction(xy, c)
                        )
                        _record_cochain(report, "d", (bx, by, *key), residual)
                    residual = (
                        lie_derivative(x, lie_derivative(y, c, rep), rep)
                        - lie_derivative(y, lx, rep)
                        - lie_derivative(xy, c, rep)
                    )
                    _record_cochain(report, "e", (bx, by, *key), residual)
    report.log_summary()
    return report


# ---------------------------------------------------------------------------
# Squares ideal and the Lie quotient
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SquaresQuotient:
    """
    The squares ideal Ē⁰ = span{[x, x]} and the Lie algebra V / Ē⁰.

    Attributes
    ----------
    ideal : List[Vector]
        A reduced-echelon basis of Ē⁰.
    quotient : LeibnizAlgebra
        The quotient, on a space labelled by the complement basis letters.
    projection : MultiMap
        The quotient map V -> V / Ē⁰.
    """

    ideal: List[Vector]
    quotient: LeibnizAlgebra
    projection: MultiMap


def _coordinates(v: Vector, basis: Sequence[Basis]) -> List[sympy.Rational]:
    return [to_rational(v[b]) for b in basis]


def _vector(row: Sequence[sympy.Expr], basis: Sequence[Basis]) -> Vector:
    return Vector({b: from_rational(c) for b, c in zip(basis, row, strict=True) if c != 0})


def squares_ideal_quotient(alg: LeibnizAlgebra) -> SquaresQuotient:
    """
    Compute Ē⁰ from the polarizations [x, y] + [y, x] and the quotient bracket.

    Examples
    --------
    >>> V = GradedSpace("V", {0: 2}, labels={0: ["x", "y"]})
    >>> alg = LeibnizAlgebra(V, MultiMap.from_entries(2, 0, V, V, [((V["y"], V["y"]), V["x"], 1)]))
    >>> result = squares_ideal_quotient(alg)
    >>> result.ideal, result.quotient.dimension
    ([x], 1)
    """
    basis = alg.basis()
    rows = []
    for i, x in enumerate(basis):
        for y in basis[i:]:
            vx, vy = Vector.basis(x), Vector.basis(y)
            polarized = alg.bracket(vx, vy) + alg.bracket(vy, vx)
            if not polarized.is_zero():
                rows.append(_coordinates(polarized, basis))
    pivots: Tuple[int, ...] = ()
    ideal: List[Vector] = []
    reduced = sympy.zeros(0, len(basis))
    if rows:
        reduced, pivots = sympy.Matrix(rows).rref()
        ideal = [_vector(list(reduced.row(k)), basis) for k in range(len(pivots))]
    kept = [b for k, b in enumerate(basis) if k not in pivots]
    labels = [b.label() for b in kept]
    quotient_space = GradedSpace(f"{alg.space.name}/E0", {0: len(kept)}, labels={0: labels})
    index = {b: quotient_space.basis(0)[k] for k, b in enumerate(kept)}

    def reduce(v: Vector) -> Vector:
        coordinates = _coordinates(v, basis)
        for k, column in enumerate(pivots):
            factor = coordinates[column]
            if factor != 0:
                coordinates = [c - factor * r for c, r in zip(coordinates, reduced.row(k), strict=True)]
        return Vector({index[b]: from_rational(c) for b, c in zip(basis, coordinates, strict=True) if c != 0})

    projection = MultiMap.from_function(1, 0, alg.space, quotient_space, lambda key: reduce(Vector.basis(key[0])))
    quotient_bracket = MultiMap.from_function(
        2,
        0,
        quotient_space,
        quotient_space,
        lambda key: reduce(alg.bracket(Vector.basis(kept[key[0].index]), Vector.basis(kept[key[1].index]))),
    )
    logger.info(f"Squares ideal of dimension {len(ideal)}; quotient of dimension {len(kept)}")
    return SquaresQuotient(ideal, LeibnizAlgebra(quotient_space, quotient_bracket), projection)


def check_squares_ideal(alg: LeibnizAlgebra, result: SquaresQuotient) -> IdentityReport:
    """
    Families ``left-annihilates`` ([Ē⁰, V] = 0) and ``right-ideal`` ([V, Ē⁰] ⊆ Ē⁰, tested by projecting).
    """
    report = IdentityReport(name="squares-ideal")
    report.touch("left-annihilates")
    report.touch("right-ideal")
    for e in result.ideal:
        # generators are in reduced echelon form, so the leading letter names them
        lead = min(e, key=lambda b: b.index)
        for x in alg.basis():
            vx = Vector.basis(x)
            report.record("left-annihilates", (lead, x), alg.bracket(e, vx))
            report.record("right-ideal", (lead, x), result.projection(alg.bracket(vx, e)))
    report.log_summary()
    return report


# ---------------------------------------------------------------------------
# Cohomology dimensions
# ---------------------------------------------------------------------------


def coboundary_matrix(coeff: Coefficients, arity: int) -> sympy.Matrix:
    """The matrix of ∂: C^p -> C^{p+1} in the basis-cochain bases."""
    bimodule = _as_bimodule(coeff)
    alg, module = bimodule.algebra, bimodule.module
    rows = [(*key, w) for key in alg.space.tuples(arity + 1) for w in module.basis()]
    position = {row: k for k, row in enumerate(rows)}
    columns = list(basis_cochains(alg, module, arity))
    matrix = sympy.zeros(len(rows), len(columns))
    for j, (_, c) in enumerate(columns):
        image = loday_coboundary(c, bimodule)
        for inputs, value in image.values.entries.items():
            for w, coefficient in value.items():
                matrix[position[(*inputs, w)], j] = to_rational(coefficient)
    return matrix


def cohomology_dimensions(coeff: Coefficients, max_arity: int) -> Dict[int, int]:
    """
    dim HL^p = dim C^p - rank ∂_p - rank ∂_{p-1} for p = 0..max_arity - 1.

    ∂_p is computed up to arity ``max_arity``, which must respect the cochain arity cap.
    """
    bimodule = _as_bimodule(coeff)
    _check_arity(max_arity)
    n, m = bimodule.algebra.dimension, bimodule.module.total_dim
    ranks = {p: coboundary_matrix(bimodule, p).rank() for p in range(max_arity)}
    dimensions = {}
    for p in range(max_arity):
        previous = ranks[p - 1] if p >= 1 else 0
        dimensions[p] = n**p * m - ranks[p] - previous
    logger.info(f"Loday cohomology dimensions: {dimensions}")
    return dimensions
