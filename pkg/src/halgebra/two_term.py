"""
2-term Leibniz∞ algebras, their morphisms and homotopies.

A 2-term algebra lives on V = V_0 ⊕ V_1 with l_1: V_1 -> V_0, a degree-0 bracket l_2 and
l_3: V_0^{⊗3} -> V_1. Morphisms are pairs (f_1, f_2) and homotopies are single maps θ_1
of degree 1. Every relation is evaluated on basis inputs and reported per family.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from halgebra.errors import ArityError, HomogeneityError, InvalidStructureError, SpaceMismatchError
from halgebra.graded import Basis, GradedSpace, MultiMap, Vector
from halgebra.infinity import Flavor, InftyMorphism, InftyStructure
from halgebra.reports import IdentityReport

logger = logging.getLogger("halgebra.two_term")


def _check_two_term_space(space: GradedSpace) -> None:
    if any(d not in (0, 1) for d in space.degrees()):
        raise HomogeneityError(f"A 2-term space lives in degrees 0 and 1, {space.name} has {space.degrees()}")


def _check_map(f: MultiMap, name: str, arity: int, degree: int, source: GradedSpace, target: GradedSpace) -> None:
    if f.arity != arity:
        raise ArityError(f"{name} has arity {f.arity}, expected {arity}")
    if f.degree != degree:
        raise HomogeneityError(f"{name} has degree {f.degree}, expected {degree}")
    if f.source != source or f.target != target:
        raise SpaceMismatchError(f"{name} is not a map {source.name} -> {target.name}")


def _v(b: Basis) -> Vector:
    return Vector.basis(b)


@dataclass(frozen=True)
class TwoTermLeibniz:
    """
    A 2-term Leibniz∞ algebra (V, l_1, l_2, l_3).

    Parameters
    ----------
    space : GradedSpace
        V, concentrated in degrees 0 and 1.
    l1, l2, l3 : MultiMap
        Brackets of arity 1, 2 and 3 and degree -1, 0 and 1.
    """

    space: GradedSpace
    l1: MultiMap
    l2: MultiMap
    l3: MultiMap

    def __post_init__(self) -> None:
        _check_two_term_space(self.space)
        _check_map(self.l1, "l_1", 1, -1, self.space, self.space)
        _check_map(self.l2, "l_2", 2, 0, self.space, self.space)
        _check_map(self.l3, "l_3", 3, 1, self.space, self.space)

    @classmethod
    def build(
        cls,
        space: GradedSpace,
        l1: Optional[MultiMap] = None,
        l2: Optional[MultiMap] = None,
        l3: Optional[MultiMap] = None,
    ) -> "TwoTermLeibniz":
        """Fill missing brackets with zero maps."""
        return cls(
            space,
            l1 if l1 is not None else MultiMap.zero(1, -1, space, space),
            l2 if l2 is not None else MultiMap.zero(2, 0, space, space),
            l3 if l3 is not None else MultiMap.zero(3, 1, space, space),
        )

    @property
    def v0(self) -> List[Basis]:
        return self.space.basis(0)

    @property
    def v1(self) -> List[Basis]:
        return self.space.basis(1)

    def to_infinity(self) -> InftyStructure:
        return InftyStructure(Flavor.LEIBNIZ, self.space, {1: self.l1, 2: self.l2, 3: self.l3})

    @classmethod
    def from_infinity(cls, s: InftyStructure) -> "TwoTermLeibniz":
        """Read off l_1, l_2, l_3. Higher brackets vanish on a 2-term space for degree reasons."""
        if s.flavor is not Flavor.LEIBNIZ:
            raise SpaceMismatchError("A 2-term Leibniz algebra needs a Leibniz structure")
        return cls(s.space, s.bracket(1), s.bracket(2), s.bracket(3))


def check_two_term_algebra(a: TwoTermLeibniz) -> IdentityReport:
    """
    Evaluate relations (a) to (e) of a 2-term Leibniz∞ algebra on all basis inputs.

    Families are ``a1, a2, b, c, d1, d2, d3, e``. With x, y, z, w in V_0 and h, k in V_1 they read

    - a1: l1 l2(x,h) = l2(x, l1 h); a2: l1 l2(h,x) = l2(l1 h, x)
    - b: l2(l1 h, k) = l2(h, l1 k)
    - c: l1 l3(x,y,z) = l2(x,l2(y,z)) - l2(y,l2(x,z)) - l2(l2(x,y),z)
    - d1..d3: l3 with l1 h in the third, second and first slot against the matching Jacobiators
    - e: the ten-term coherence of l3 with l2.
    """
    l1, l2, l3 = a.l1, a.l2, a.l3
    report = IdentityReport(name="two-term-algebra")
    for family in ("a1", "a2", "b", "c", "d1", "d2", "d3", "e"):
        report.touch(family)
    v0, v1 = a.v0, a.v1

    for x in v0:
        for h in v1:
            X, H = _v(x), _v(h)
            report.record("a1", (x, h), l1(l2(X, H)) - l2(X, l1(H)))
            report.record("a2", (h, x), l1(l2(H, X)) - l2(l1(H), X))
    for h in v1:
        for k in v1:
            H, K = _v(h), _v(k)
            report.record("b", (h, k), l2(l1(H), K) - l2(H, l1(K)))
    for x in v0:
        for y in v0:
            X, Y = _v(x), _v(y)
            for z in v0:
                Z = _v(z)
                jacobiator = l2(X, l2(Y, Z)) - l2(Y, l2(X, Z)) - l2(l2(X, Y), Z)
                report.record("c", (x, y, z), l1(l3(X, Y, Z)) - jacobiator)
            for h in v1:
                H = _v(h)
                d1 = l3(X, Y, l1(H)) - (l2(X, l2(Y, H)) - l2(Y, l2(X, H)) - l2(l2(X, Y), H))
                d2 = l3(X, l1(H), Y) - (l2(X, l2(H, Y)) - l2(H, l2(X, Y)) - l2(l2(X, H), Y))
                d3 = l3(l1(H), X, Y) - (l2(H, l2(X, Y)) - l2(X, l2(H, Y)) - l2(l2(H, X), Y))
                report.record("d1", (x, y, h), d1)
                report.record("d2", (x, h, y), d2)
                report.record("d3", (h, x, y), d3)
    for w in v0:
        W = _v(w)
        for x in v0:
            X = _v(x)
            for y in v0:
                Y = _v(y)
                for z in v0:
                    Z = _v(z)
                    e = (
                        l2(l3(W, X, Y), Z)
                        + l2(W, l3(X, Y, Z))
                        - l2(X, l3(W, Y, Z))
                        + l2(Y, l3(W, X, Z))
                        - l3(l2(W, X), Y, Z)
                        + l3(W, l2(X, Y), Z)
                        - l3(X, l2(W, Y), Z)
                        - l3(W, X, l2(Y, Z))
                        + l3(W, Y, l2(X, Z))
                        - l3(X, Y, l2(W, Z))
                    )
                    report.record("e", (w, x, y, z), e)
    report.log_summary()
    return report


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoTermMorphism:
    """
    An ∞-morphism (f_1, f_2) between 2-term Leibniz∞ algebras.

    ``f1`` is linear of degree 0 and ``f2`` is bilinear of degree 1, hence V_0 ⊗ V_0 -> W_1.
    """

    source: TwoTermLeibniz
    target: TwoTermLeibniz
    f1: MultiMap
    f2: MultiMap

    def __post_init__(self) -> None:
        _check_map(self.f1, "f_1", 1, 0, self.source.space, self.target.space)
        _check_map(self.f2, "f_2", 2, 1, self.source.space, self.target.space)

    @classmethod
    def identity(cls, a: TwoTermLeibniz) -> "TwoTermMorphism":
        return cls(a, a, MultiMap.identity(a.space), MultiMap.zero(2, 1, a.space, a.space))

    def to_infinity(self) -> InftyMorphism:
        return InftyMorphism(self.source.to_infinity(), self.target.to_infinity(), {1: self.f1, 2: self.f2})

    @classmethod
    def from_infinity(cls, m: InftyMorphism) -> "TwoTermMorphism":
        return cls(
            TwoTermLeibniz.from_infinity(m.source),
            TwoTermLeibniz.from_infinity(m.target),
            m.component(1),
            m.component(2),
        )


def check_two_term_morphism(m: TwoTermMorphism) -> IdentityReport:
    """
    Evaluate relations (a) to (d) of a 2-term ∞-morphism; families ``a, b, c1, c2, d``.

    - a: m1 f1 h = f1 l1 h
    - b: m2(f1 x, f1 y) + m1 f2(x,y) = f1 l2(x,y)
    - c1: m2(f1 x, f1 h) = f1 l2(x,h) - f2(x, l1 h); c2 is the mirror with h first
    - d: m3(f1 x, f1 y, f1 z) - m2(f2(x,y), f1 z) + m2(f1 x, f2(y,z)) - m2(f1 y, f2(x,z))
      = f1 l3(x,y,z) + f2(l2(x,y),z) - f2(x,l2(y,z)) + f2(y,l2(x,z))
    """
    src, tgt = m.source, m.target
    l1, l2, l3 = src.l1, src.l2, src.l3
    m1, m2, m3 = tgt.l1, tgt.l2, tgt.l3
    f1, f2 = m.f1, m.f2
    report = IdentityReport(name="two-term-morphism")
    for family in ("a", "b", "c1", "c2", "d"):
        report.touch(family)
    v0, v1 = src.v0, src.v1

    for h in v1:
        H = _v(h)
        report.record("a", (h,), m1(f1(H)) - f1(l1(H)))
    for x in v0:
        X = _v(x)
        for y in v0:
            Y = _v(y)
            report.record("b", (x, y), m2(f1(X), f1(Y)) + m1(f2(X, Y)) - f1(l2(X, Y)))
            for z in v0:
                Z = _v(z)
                lhs = m3(f1(X), f1(Y), f1(Z)) - m2(f2(X, Y), f1(Z)) + m2(f1(X), f2(Y, Z)) - m2(f1(Y), f2(X, Z))
                rhs = f1(l3(X, Y, Z)) + f2(l2(X, Y), Z) - f2(X, l2(Y, Z)) + f2(Y, l2(X, Z))
                report.record("d", (x, y, z), lhs - rhs)
        for h in v1:
            H = _v(h)
            report.record("c1", (x, h), m2(f1(X), f1(H)) - (f1(l2(X, H)) - f2(X, l1(H))))
            report.record("c2", (h, x), m2(f1(H), f1(X)) - (f1(l2(H, X)) - f2(l1(H), X)))
    report.log_summary()
    return report


def _pair_map(
    func: Callable[[Vector, Vector], Vector], source: GradedSpace, target: GradedSpace, degree: int
) -> MultiMap:
    return MultiMap.from_function(2, degree, source, target, lambda key: func(_v(key[0]), _v(key[1])))


def compose_two_term(g: TwoTermMorphism, f: TwoTermMorphism) -> TwoTermMorphism:
    """
    The composite ``g ∘ f``: (g∘f)_1 = g_1 f_1 and (g∘f)_2 = g_1 f_2 + g_2(f_1 ⊗ f_1).

    Raises
    ------
    SpaceMismatchError
        If ``f.target`` is not ``g.source``.
    """
    if f.target != g.source:
        raise SpaceMismatchError("Morphisms are not composable")
    first = g.f1.compose(f.f1)
    second = g.f1.compose(f.f2) + _pair_map(
        lambda x, y: g.f2(f.f1(x), f.f1(y)), f.source.space, g.target.space, 1
    )
    return TwoTermMorphism(f.source, g.target, first, second)


def push_forward(a: TwoTermLeibniz, f1: MultiMap, f1_inverse: MultiMap, f2: MultiMap) -> TwoTermMorphism:
    """
    Transport a 2-term structure along an invertible f_1 and an arbitrary f_2.

    The target brackets m_1, m_2, m_3 on ``f1.target`` are solved from the morphism relations, so the
    returned morphism is valid whenever ``a`` is.
    """
    W = f1.target
    if f1_inverse.compose(f1) != MultiMap.identity(a.space):
        raise InvalidStructureError("f1_inverse is not a left inverse of f1")
    back = f1_inverse
    l1, l2, l3 = a.l1, a.l2, a.l3
    m1 = f1.compose(l1).compose(back)

    def bracket(u: Vector, v: Vector) -> Vector:
        x, y = back(u), back(v)
        return f1(l2(x, y)) - m1(f2(x, y)) - f2(x, l1(y)) - f2(l1(x), y)

    m2 = _pair_map(bracket, W, W, 0)

    def ternary(key: Tuple[Basis, ...]) -> Vector:
        X, Y, Z = (back(_v(b)) for b in key)
        return (
            f1(l3(X, Y, Z))
            + f2(l2(X, Y), Z)
            - f2(X, l2(Y, Z))
            + f2(Y, l2(X, Z))
            + m2(f2(X, Y), f1(Z))
            - m2(f1(X), f2(Y, Z))
            + m2(f1(Y), f2(X, Z))
        )

    m3 = MultiMap.from_function(3, 1, W, W, ternary)
    target = TwoTermLeibniz(W, m1, m2, m3)
    return TwoTermMorphism(a, target, f1, f2)


# ---------------------------------------------------------------------------
# Homotopies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoTermHomotopy:
    """
    A 2-term ∞-homotopy θ_1: f ⇒ g, a degree-1 linear map V -> W (so V_0 -> W_1).
    """

    source: TwoTermMorphism
    target: TwoTermMorphism
    theta: MultiMap

    def __post_init__(self) -> None:
        if self.source.source != self.target.source or self.source.target != self.target.target:
            raise SpaceMismatchError("Homotopy endpoints act between different algebras")
        _check_map(self.theta, "θ_1", 1, 1, self.source.source.space, self.source.target.space)

    @classmethod
    def identity(cls, f: TwoTermMorphism) -> "TwoTermHomotopy":
        return cls(f, f, MultiMap.zero(1, 1, f.source.space, f.target.space))


def homotopy_defect(f: TwoTermMorphism, g: TwoTermMorphism, theta: MultiMap) -> IdentityReport:
    """
    Relations (a) to (c) of a homotopy θ: f ⇒ g; families ``a, b, c``.

    - a: g1 x - f1 x = m1 θ x
    - b: g1 h - f1 h = θ l1 h
    - c: g2(x,y) - f2(x,y) = θ l2(x,y) - m2(f1 x, θ y) - m2(θ x, g1 y)
    """
    src, tgt = f.source, f.target
    m1, m2 = tgt.l1, tgt.l2
    report = IdentityReport(name="two-term-homotopy")
    for family in ("a", "b", "c"):
        report.touch(family)
    for x in src.v0:
        X = _v(x)
        report.record("a", (x,), g.f1(X) - f.f1(X) - m1(theta(X)))
        for y in src.v0:
            Y = _v(y)
            rhs = theta(src.l2(X, Y)) - m2(f.f1(X), theta(Y)) - m2(theta(X), g.f1(Y))
            report.record("c", (x, y), g.f2(X, Y) - f.f2(X, Y) - rhs)
    for h in src.v1:
        H = _v(h)
        report.record("b", (h,), g.f1(H) - f.f1(H) - theta(src.l1(H)))
    report.log_summary()
    return report


def check_homotopy(h: TwoTermHomotopy) -> IdentityReport:
    return homotopy_defect(h.source, h.target, h.theta)


def homotopy_target(f: TwoTermMorphism, theta: MultiMap) -> TwoTermMorphism:
    """
    Solve relations (a) to (c) for the target: g = f + E(f, θ).

    g_1 = f_1 + m_1 θ + θ l_1 and g_2 = f_2 + θ l_2 - m_2(f_1 ·, θ ·) - m_2(θ ·, g_1 ·).
    """
    src, tgt = f.source, f.target
    _check_map(theta, "θ_1", 1, 1, src.space, tgt.space)
    g1 = f.f1 + tgt.l1.compose(theta) + theta.compose(src.l1)
    g2 = (
        f.f2
        + theta.compose(src.l2)
        - _pair_map(lambda x, y: tgt.l2(f.f1(x), theta(y)), src.space, tgt.space, 1)
        - _pair_map(lambda x, y: tgt.l2(theta(x), g1(y)), src.space, tgt.space, 1)
    )
    return TwoTermMorphism(src, tgt, g1, g2)


def vcompose(tau: TwoTermHomotopy, theta: TwoTermHomotopy) -> TwoTermHomotopy:
    """
    Vertical composite of θ: f ⇒ g and τ: g ⇒ h, with component τ_1 + θ_1.

    Raises
    ------
    SpaceMismatchError
        If ``tau.source`` is not ``theta.target``.
    """
    if tau.source != theta.target:
        raise SpaceMismatchError("Homotopies are not vertically composable")
    return TwoTermHomotopy(theta.source, tau.target, tau.theta + theta.theta)


def whisker_left(tau: TwoTermHomotopy, f: TwoTermMorphism) -> TwoTermHomotopy:
    """τ ∘ f: f'∘f ⇒ g'∘f with component τ_1 f_1."""
    if f.target != tau.source.source:
        raise SpaceMismatchError("Morphism and homotopy are not composable")
    return TwoTermHomotopy(compose_two_term(tau.source, f), compose_two_term(tau.target, f), tau.theta.compose(f.f1))


def whisker_right(theta: TwoTermHomotopy, k: TwoTermMorphism) -> TwoTermHomotopy:
    """k ∘ θ: k∘f ⇒ k∘g with component k_1 θ_1."""
    if theta.source.target != k.source:
        raise SpaceMismatchError("Homotopy and morphism are not composable")
    return TwoTermHomotopy(
        compose_two_term(k, theta.source), compose_two_term(k, theta.target), k.f1.compose(theta.theta)
    )


def hcompose(tau: TwoTermHomotopy, theta: TwoTermHomotopy) -> TwoTermHomotopy:
    """
    Horizontal composite of θ: f ⇒ g (V -> W) and τ: f' ⇒ g' (W -> X).

    The component is g'_1 θ_1 + τ_1 f_1, which must agree with f'_1 θ_1 + τ_1 g_1.

    Raises
    ------
    SpaceMismatchError
        If the homotopies are not composable.
    InvalidStructureError
        If the two expressions differ, which happens only for invalid homotopies.
    """
    if theta.source.target != tau.source.source:
        raise SpaceMismatchError("Homotopies are not horizontally composable")
    f, g = theta.source, theta.target
    f_prime, g_prime = tau.source, tau.target
    first = g_prime.f1.compose(theta.theta) + tau.theta.compose(f.f1)
    second = f_prime.f1.compose(theta.theta) + tau.theta.compose(g.f1)
    if first != second:
        raise InvalidStructureError("The two horizontal composites differ; the homotopies are not valid")
    return TwoTermHomotopy(compose_two_term(f_prime, f), compose_two_term(g_prime, g), first)


def relation_tables(a: TwoTermLeibniz) -> Dict[str, int]:
    """Number of inputs per relation family, as evaluated by :func:`check_two_term_algebra`."""
    n0, n1 = len(a.v0), len(a.v1)
    return {
        "a1": n0 * n1,
        "a2": n0 * n1,
        "b": n1 * n1,
        "c": n0**3,
        "d1": n0 * n0 * n1,
        "d2": n0 * n0 * n1,
        "d3": n0 * n0 * n1,
        "e": n0**4,
    }
