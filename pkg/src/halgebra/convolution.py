"""
The convolution Lie∞ algebra Hom(Zin^c(sV), W) and its Maurer-Cartan elements.

For Leibniz∞ algebras (V, l) and (W, m) the space of maps from the free Zinbiel coalgebra
on sV to W carries brackets

    ℒ_1 f = m_1 ∘ f + (-1)^{|f|} f ∘ D
    ℒ_p(f_1, ..., f_p) = m_p ∘ (Σ_{τ ∈ S_p} ε(τ) sgn(τ) f_τ(1) ⊗ ... ⊗ f_τ(p)) ∘ Δ^{p-1}

where D is the codifferential of V. Its Maurer-Cartan elements (degree -1) are exactly the
∞-morphisms V -> W, via α^p(sv_1..sv_p) = (-1)^{Σ(p-i)|v_i|} φ_p(v_1..v_p).

Every algebra in this module implements :class:`LInfinityAlgebra`, which is all the
simplicial and gauge machinery needs.
"""

import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from math import factorial
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from halgebra.coalgebras import CoalgebraFlavor, Coderivation, Word, iterated_coproduct, word_degree
from halgebra.config import get_settings
from halgebra.errors import ArityError, HomogeneityError, SpaceMismatchError
from halgebra.graded import (
    Basis,
    GradedSpace,
    MultiMap,
    ScalarLike,
    Vector,
    all_permutations,
    parity_sign,
    reorder_sign,
    suspension_sign,
    to_scalar,
)
from halgebra.infinity import Flavor, InftyMorphism, InftyStructure, to_codifferential

logger = logging.getLogger("halgebra.convolution")

Element = Any


def mc_coefficient(p: int) -> Fraction:
    """(1/p!)(-1)^{p(p-1)/2}, the weight of ℒ_p(α, ..., α) in the Maurer-Cartan sum."""
    return Fraction(parity_sign(p * (p - 1) // 2), factorial(p))


class LInfinityAlgebra(ABC):
    """
    A Lie∞ algebra whose elements support ``+``, ``-``, scalar ``*`` and ``is_zero()``.

    Brackets follow the homological convention: ℓ_p has degree p - 2.
    """

    @abstractmethod
    def zero(self, degree: int) -> Element:
        """The zero element of the given degree."""

    @abstractmethod
    def degree_of(self, x: Element) -> int:
        """Degree of a nonzero homogeneous element."""

    @abstractmethod
    def bracket(self, p: int, xs: Sequence[Element]) -> Element:
        """ℓ_p(x_1, ..., x_p)."""

    @property
    @abstractmethod
    def max_arity(self) -> int:
        """Largest p for which ℓ_p can be nonzero."""

    def filtration_length(self) -> int:
        """Length of the descending filtration; nested brackets vanish beyond it."""
        return get_settings().max_word_length

    def mc_residual(self, alpha: Element) -> Element:
        """Σ_p (1/p!)(-1)^{p(p-1)/2} ℓ_p(α, ..., α) for a degree -1 element α."""
        return self.mc_sum(alpha, start=1)

    def mc_nonlinear(self, alpha: Element) -> Element:
        """The part of the Maurer-Cartan sum with p ≥ 2."""
        return self.mc_sum(alpha, start=2)

    def mc_sum(self, alpha: Element, start: int = 1) -> Element:
        acc = self.zero(-2)
        for p in range(start, self.max_arity + 1):
            term = self.bracket(p, [alpha] * p)
            if not term.is_zero():
                acc = acc + term * mc_coefficient(p)
        return acc

    def is_mc(self, alpha: Element) -> bool:
        return bool(self.mc_residual(alpha).is_zero())


# ---------------------------------------------------------------------------
# Structure algebras: the brackets of a Lie∞ structure acting on vectors
# ---------------------------------------------------------------------------


class StructureAlgebra(LInfinityAlgebra):
    """
    A Lie∞ structure viewed as an algebra of vectors.

    Examples
    --------
    >>> V = GradedSpace("V", {-1: 1}, labels={-1: ["a"]})
    >>> StructureAlgebra(InftyStructure(Flavor.LIE, V, {})).is_mc(V.vector("a"))
    True
    """

    def __init__(self, structure: InftyStructure) -> None:
        if structure.flavor is not Flavor.LIE:
            raise SpaceMismatchError("Structure algebras are built from Lie∞ structures")
        self.structure = structure
        self.space = structure.space

    def zero(self, degree: int) -> Vector:
        return Vector.zero()

    def degree_of(self, x: Vector) -> int:
        degree = x.degree
        if degree is None:
            raise HomogeneityError("The zero vector has no degree")
        return degree

    def bracket(self, p: int, xs: Sequence[Vector]) -> Vector:
        if len(xs) != p:
            raise ArityError(f"ℓ_{p} applied to {len(xs)} elements")
        if p > self.max_arity:
            return Vector.zero()
        return self.structure.bracket(p)(*xs)

    @property
    def max_arity(self) -> int:
        return self.structure.max_arity


# ---------------------------------------------------------------------------
# Convolution elements
# ---------------------------------------------------------------------------


class ConvElement:
    """
    A homogeneous element of Hom(Zin^c(sV), W): one component (sV)^{⊗p} -> W per arity.

    Components above the arity bound of the degree are rejected because they are
    forced to vanish by degree reasons.
    """

    __slots__ = ("_components", "algebra", "degree")

    def __init__(
        self, algebra: "ConvolutionAlgebra", degree: int, components: Optional[Mapping[int, MultiMap]] = None
    ) -> None:
        self.algebra = algebra
        self.degree = degree
        bound = algebra.arity_bound(degree)
        clean: Dict[int, MultiMap] = {}
        for p, f in (components or {}).items():
            if f.arity != p:
                raise ArityError(f"Component {p} has arity {f.arity}")
            if f.source != algebra.suspended or f.target != algebra.target_space:
                raise SpaceMismatchError(
                    f"Component {p} is not a map {algebra.suspended.name} -> {algebra.target_space.name}"
                )
            if f.degree != degree:
                raise HomogeneityError(f"Component {p} has degree {f.degree}, expected {degree}")
            if f.is_zero():
                continue
            if p > bound:
                raise ArityError(f"Component {p} exceeds the arity bound {bound} for degree {degree}")
            clean[p] = f
        self._components = clean

    @property
    def components(self) -> Dict[int, MultiMap]:
        return dict(self._components)

    def component(self, p: int) -> MultiMap:
        f = self._components.get(p)
        return f if f is not None else MultiMap.zero(p, self.degree, self.algebra.suspended, self.algebra.target_space)

    def on_word(self, word: Sequence[Basis]) -> Vector:
        f = self._components.get(len(word))
        return f.on_basis(word) if f is not None else Vector.zero()

    def is_zero(self) -> bool:
        return not self._components

    def _combine(self, other: "ConvElement", sign: int) -> "ConvElement":
        if other.algebra is not self.algebra:
            raise SpaceMismatchError("Elements of different convolution algebras")
        if other.is_zero():
            return self
        if self.is_zero():
            return other if sign == 1 else -other
        if other.degree != self.degree:
            raise HomogeneityError(f"Cannot add elements of degrees {self.degree} and {other.degree}")
        keys = set(self._components) | set(other._components)
        return ConvElement(
            self.algebra,
            self.degree,
            {p: self.component(p) + other.component(p) * sign for p in keys},
        )

    def __add__(self, other: "ConvElement") -> "ConvElement":
        return self._combine(other, 1)

    def __sub__(self, other: "ConvElement") -> "ConvElement":
        return self._combine(other, -1)

    def __neg__(self) -> "ConvElement":
        return self * -1

    def __mul__(self, scalar: ScalarLike) -> "ConvElement":
        k = to_scalar(scalar)
        return ConvElement(self.algebra, self.degree, {p: f * k for p, f in self._components.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConvElement):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self._components == other._components

    def __hash__(self) -> int:
        return hash((self.degree, frozenset(self._components.items())))

    def __repr__(self) -> str:
        arities = sorted(self._components)
        return f"ConvElement(degree={self.degree}, arities={arities})"


class ConvolutionAlgebra(LInfinityAlgebra):
    """
    The convolution Lie∞ algebra Hom(Zin^c(sV), W) of two Leibniz∞ algebras.

    Parameters
    ----------
    source, target : InftyStructure
        Leibniz∞ structures on V and W.
    """

    def __init__(self, source: InftyStructure, target: InftyStructure) -> None:
        if source.flavor is not Flavor.LEIBNIZ or target.flavor is not Flavor.LEIBNIZ:
            raise SpaceMismatchError("Convolution algebras are built from two Leibniz∞ algebras")
        self.source = source
        self.target = target
        self.suspended = source.space.suspend()
        self.target_space = target.space
        self.codifferential: Coderivation = to_codifferential(source)

    def arity_bound(self, degree: int) -> int:
        """
        Largest arity p for which a degree ``degree`` map (sV)^{⊗p} -> W can be nonzero.

        With min(sV) > 0 this is floor((max W - degree) / min sV); otherwise the word-length cap.
        """
        cap = get_settings().max_word_length
        low, high = self.suspended.min_degree, self.target_space.max_degree
        if low is None or high is None:
            return 0
        if low <= 0:
            return cap
        return max(0, min(cap, (high - degree) // low))

    def filtration_length(self) -> int:
        return self.arity_bound(-1)

    def zero(self, degree: int) -> ConvElement:
        return ConvElement(self, degree)

    def element(self, degree: int, components: Mapping[int, MultiMap]) -> ConvElement:
        return ConvElement(self, degree, components)

    def degree_of(self, x: ConvElement) -> int:
        return x.degree

    @property
    def max_arity(self) -> int:
        return max(self.target.max_arity, 1)

    def _check(self, xs: Sequence[ConvElement]) -> None:
        for x in xs:
            if not isinstance(x, ConvElement) or x.algebra is not self:
                raise SpaceMismatchError("Bracket of elements from another algebra")

    def bracket(self, p: int, xs: Sequence[ConvElement]) -> ConvElement:
        if len(xs) != p:
            raise ArityError(f"ℒ_{p} applied to {len(xs)} elements")
        self._check(xs)
        if p == 1:
            return self.differential(xs[0])
        out_degree = sum(x.degree for x in xs) + p - 2
        m_p = self.target.bracket(p)
        if m_p.is_zero() or any(x.is_zero() for x in xs):
            return self.zero(out_degree)
        degrees = [x.degree for x in xs]
        twists: List[Tuple[Tuple[int, ...], int]] = []
        for tau in all_permutations(p):
            twists.append((tau.images, reorder_sign(tau.images, degrees) * tau.sign()))

        def value(word: Tuple[Basis, ...]) -> Vector:
            terms = iterated_coproduct(word, p, CoalgebraFlavor.ZINBIEL)
            acc = Vector.zero()
            for images, twist in twists:
                ordered = [xs[i - 1] for i in images]
                for blocks, c in terms.items():
                    outputs = _evaluate_blocks(ordered, blocks)
                    if outputs is None:
                        continue
                    sign, vectors = outputs
                    acc = acc + m_p(*vectors) * (c * twist * sign)
            return acc

        components = {
            n: MultiMap.from_function(n, out_degree, self.suspended, self.target_space, value)
            for n in range(p, self.arity_bound(out_degree) + 1)
        }
        return ConvElement(self, out_degree, components)

    def differential(self, f: ConvElement) -> ConvElement:
        """ℒ_1 f = m_1 ∘ f + (-1)^{|f|} f ∘ D."""
        self._check([f])
        out_degree = f.degree - 1
        m_1 = self.target.bracket(1)
        sign = parity_sign(f.degree)

        def value(word: Tuple[Basis, ...]) -> Vector:
            acc = m_1(f.on_word(word)) if not m_1.is_zero() else Vector.zero()
            for inner, c in self.codifferential.on_word(word).items():
                image = f.on_word(inner)
                if not image.is_zero():
                    acc = acc + image * (sign * c)
            return acc

        components = {
            n: MultiMap.from_function(n, out_degree, self.suspended, self.target_space, value)
            for n in range(1, self.arity_bound(out_degree) + 1)
        }
        return ConvElement(self, out_degree, components)


def _evaluate_blocks(maps: Sequence[ConvElement], blocks: Sequence[Word]) -> Optional[Tuple[int, List[Vector]]]:
    """(f_1 ⊗ ... ⊗ f_p)(w_1 ⊗ ... ⊗ w_p) with the Koszul sign (-1)^{Σ_j |f_j| Σ_{i<j} |w_i|}."""
    exponent = 0
    passed = 0
    vectors: List[Vector] = []
    for f, block in zip(maps, blocks, strict=True):
        exponent += f.degree * passed
        passed += word_degree(block)
        v = f.on_word(block)
        if v.is_zero():
            return None
        vectors.append(v)
    return parity_sign(exponent), vectors


def conv_bracket(p: int, xs: Sequence[ConvElement]) -> ConvElement:
    """ℒ_p on convolution elements that share one algebra."""
    if not xs:
        raise ArityError("Brackets need at least one element")
    return xs[0].algebra.bracket(p, xs)


def mc_residual(alpha: ConvElement) -> ConvElement:
    """
    The Maurer-Cartan sum of a degree -1 convolution element.

    It is s^{-1} applied to the corestriction of 𝔇F - FD for the coalgebra map F
    with F_p = s α^p, so it vanishes exactly for ∞-morphisms.
    """
    if alpha.degree != -1:
        raise HomogeneityError(f"Maurer-Cartan elements have degree -1, got {alpha.degree}")
    residual = alpha.algebra.mc_residual(alpha)
    logger.debug(f"Maurer-Cartan residual has arities {sorted(residual.components)}")
    return residual


def _suspended_key(space: GradedSpace, key: Tuple[Basis, ...]) -> Tuple[Basis, ...]:
    return tuple(space.shift_basis(b, 1) for b in key)


def morphism_to_mc(m: InftyMorphism, algebra: Optional[ConvolutionAlgebra] = None) -> ConvElement:
    """
    The Maurer-Cartan element α^p(sv_1..sv_p) = (-1)^{Σ(p-i)|v_i|} φ_p(v_1..v_p) of a morphism.

    Raises
    ------
    SpaceMismatchError
        If ``algebra`` is given and does not connect the morphism's structures.
    """
    if algebra is None:
        algebra = ConvolutionAlgebra(m.source, m.target)
    elif algebra.source != m.source or algebra.target != m.target:
        raise SpaceMismatchError("The convolution algebra does not match the morphism")
    space = m.source.space
    components: Dict[int, MultiMap] = {}
    for p, phi in m.components.items():
        entries = {
            _suspended_key(space, key): value * suspension_sign([b.degree for b in key])
            for key, value in phi.entries.items()
        }
        components[p] = MultiMap(p, -1, algebra.suspended, algebra.target_space, entries)
    return ConvElement(algebra, -1, components)


def mc_to_morphism(alpha: ConvElement) -> InftyMorphism:
    """Inverse of :func:`morphism_to_mc`."""
    if alpha.degree != -1:
        raise HomogeneityError(f"Maurer-Cartan elements have degree -1, got {alpha.degree}")
    algebra = alpha.algebra
    suspended = algebra.suspended
    components: Dict[int, MultiMap] = {}
    for p, f in alpha.components.items():
        entries = {}
        for key, value in f.entries.items():
            inner = tuple(suspended.shift_basis(b, -1) for b in key)
            entries[inner] = value * suspension_sign([b.degree for b in inner])
        components[p] = MultiMap(p, p - 1, algebra.source.space, algebra.target_space, entries)
    return InftyMorphism(algebra.source, algebra.target, components)


def linear_element(algebra: ConvolutionAlgebra, f: MultiMap) -> ConvElement:
    """
    The arity-one convolution element b with b(sx) = f(x), for a linear map f: V -> W.

    Its degree is |f| - 1.
    """
    if f.arity != 1 or f.source != algebra.source.space or f.target != algebra.target_space:
        raise SpaceMismatchError("Expected a linear map between the algebras' spaces")
    entries = {_suspended_key(f.source, key): value for key, value in f.entries.items()}
    component = MultiMap(1, f.degree - 1, algebra.suspended, algebra.target_space, entries)
    return ConvElement(algebra, f.degree - 1, {1: component})


def linear_part(b: ConvElement) -> MultiMap:
    """Inverse of :func:`linear_element` on the arity-one component."""
    algebra = b.algebra
    suspended = algebra.suspended
    entries = {
        tuple(suspended.shift_basis(x, -1) for x in key): value for key, value in b.component(1).entries.items()
    }
    return MultiMap(1, b.degree + 1, algebra.source.space, algebra.target_space, entries)
