"""
Leibniz∞ and Lie∞ structures and morphisms.

Structures are stored as brackets ``l_i: V^{⊗i} -> V`` of degree ``i - 2`` (homological
convention). They are checked either directly through the higher Jacobi identities or
through the square of the corresponding codifferential on the free Zinbiel (Leibniz)
or symmetric (Lie) coalgebra on ``sV``.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from halgebra.coalgebras import CoalgebraFlavor, CoalgebraMorphism, Coderivation
from halgebra.config import get_settings
from halgebra.errors import ArityError, HomogeneityError, SpaceMismatchError
from halgebra.graded import (
    Basis,
    GradedSpace,
    MultiMap,
    Vector,
    compositions,
    desuspend_map,
    parity_sign,
    reorder_sign,
    suspend_map,
    unshuffle_images,
)
from halgebra.parallel import parallel_map
from halgebra.reports import IdentityReport

logger = logging.getLogger("halgebra.infinity")

Key = Tuple[Basis, ...]


class Flavor(str, Enum):
    """Which kind of homotopy algebra a structure describes."""

    LEIBNIZ = "leibniz"
    LIE = "lie"

    @property
    def coalgebra(self) -> CoalgebraFlavor:
        return CoalgebraFlavor.ZINBIEL if self is Flavor.LEIBNIZ else CoalgebraFlavor.SYMMETRIC


def permutation_parity(images: Sequence[int]) -> int:
    return reorder_sign(images, [1] * len(images))


def _signed_reorder(images: Sequence[int], degrees: Sequence[int]) -> int:
    """ε(σ; v)·sign(σ) for the permutation with the given images."""
    return reorder_sign(images, degrees) * permutation_parity(images)


def _apply_with_insert(f: MultiMap, before: Key, inner: Vector, after: Key) -> Vector:
    """``f(before, inner, after)`` for basis letters around one vector argument."""
    acc = Vector.zero()
    for b, c in inner.items():
        value = f.on_basis((*before, b, *after))
        if not value.is_zero():
            acc = acc + value * c
    return acc


def _apply_to_vectors(f: MultiMap, values: Sequence[Vector]) -> Vector:
    if any(v.is_zero() for v in values):
        return Vector.zero()
    return f(*values)


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InftyStructure:
    """
    A Leibniz∞ or Lie∞ structure on a graded space.

    Parameters
    ----------
    flavor : Flavor
        Leibniz or Lie.
    space : GradedSpace
        The underlying space V.
    brackets : Dict[int, MultiMap]
        Brackets keyed by arity. ``l_i`` must be an operator on V of degree ``i - 2``.
        Missing arities are zero.

    Examples
    --------
    >>> V = GradedSpace("V", {0: 2}, labels={0: ["x", "y"]})
    >>> l2 = MultiMap.from_entries(2, 0, V, V, [((V["y"], V["y"]), V["x"], 1)])
    >>> check_leibniz_infinity(InftyStructure(Flavor.LEIBNIZ, V, {2: l2})).passed
    True
    """

    flavor: Flavor
    space: GradedSpace
    brackets: Dict[int, MultiMap] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for i, f in self.brackets.items():
            if i < 1 or f.arity != i:
                raise ArityError(f"Bracket l_{i} has arity {f.arity}")
            if f.source != self.space or f.target != self.space:
                raise SpaceMismatchError(f"Bracket l_{i} is not an operator on {self.space.name}")
            if f.degree != i - 2:
                raise HomogeneityError(f"Bracket l_{i} has degree {f.degree}, expected {i - 2}")

    @classmethod
    def zero(cls, flavor: Flavor, space: GradedSpace) -> "InftyStructure":
        return cls(flavor, space, {})

    def bracket(self, i: int) -> MultiMap:
        f = self.brackets.get(i)
        return f if f is not None else MultiMap.zero(i, i - 2, self.space, self.space)

    @property
    def max_arity(self) -> int:
        live = [i for i, f in self.brackets.items() if not f.is_zero()]
        return max(live, default=0)

    def identity_bound(self) -> int:
        """Largest identity index that can be nonvacuous, capped by the word-length setting."""
        return identity_bound(self.space)


def identity_bound(space: GradedSpace) -> int:
    """
    Structural bound 2n+1 for a space spread over n consecutive degrees starting at 0 or above.

    Spaces with negative degrees have no vacuity bound; the word-length cap is used.
    """
    cap = get_settings().max_word_length
    low, high = space.min_degree, space.max_degree
    if low is None or high is None:
        return 1
    if low < 0:
        return cap
    return min(2 * (high - low + 1) + 1, cap)


def _resolve_n_max(space: GradedSpace, n_max: Optional[int], report: IdentityReport) -> int:
    low, high = space.min_degree, space.max_degree
    if low is not None and high is not None and low >= 0:
        structural = 2 * (high - low + 1) + 1
    else:
        structural = None
    if n_max is None:
        n_max = identity_bound(space)
    if structural is None:
        report.notes.append(f"no structural identity bound for negative degrees; checked up to n={n_max}")
    elif n_max < structural:
        note = f"identity index capped at {n_max}, below the structural bound {structural}"
        report.notes.append(note)
        logger.warning(note)
    return n_max


def _output_in_range(key: Key, shift: int, space: GradedSpace) -> bool:
    return space.dim(sum(b.degree for b in key) + shift) > 0


# ---------------------------------------------------------------------------
# Bracket-level residuals
# ---------------------------------------------------------------------------


def leibniz_jacobi_residual(s: InftyStructure, key: Key) -> Vector:
    """
    The n-th higher Jacobi sum of a Leibniz∞ structure on one basis tuple.

    Σ_{i+j=n+1} Σ_{k=j}^{n} Σ_{σ∈Sh(k-j,j-1)} (-1)^{(n-k+1)(j-1)} (-1)^{j(|v_σ(1)|+...+|v_σ(k-j)|)}
    ε(σ) sign(σ) l_i(v_σ(1..k-j), l_j(v_σ(k-j+1..k-1), v_k), v_{k+1..n}).
    """
    n = len(key)
    degrees = [b.degree for b in key]
    acc = Vector.zero()
    for j, inner_map in s.brackets.items():
        i = n + 1 - j
        outer = s.brackets.get(i)
        if j > n or outer is None or outer.is_zero() or inner_map.is_zero():
            continue
        for k in range(j, n + 1):
            prefix = degrees[: k - 1]
            for images in unshuffle_images(k - j, j - 1):
                first, chosen = images[: k - j], images[k - j :]
                inner = inner_map.on_basis(tuple(key[a - 1] for a in chosen) + (key[k - 1],))
                if inner.is_zero():
                    continue
                sign = (
                    _signed_reorder(images, prefix)
                    * parity_sign((n - k + 1) * (j - 1))
                    * parity_sign(j * sum(degrees[a - 1] for a in first))
                )
                value = _apply_with_insert(outer, tuple(key[a - 1] for a in first), inner, key[k:])
                acc = acc + value * sign
    return acc


def lie_jacobi_residual(s: InftyStructure, key: Key) -> Vector:
    """
    The n-th higher Jacobi sum of a Lie∞ structure on one basis tuple.

    Σ_{i+j-1=n} Σ_{σ∈Sh(i,j-1)} (-1)^{i(j-1)} sign(σ) ε(σ) l_j(l_i(v_σ(1..i)), v_σ(i+1..n)).
    """
    n = len(key)
    degrees = [b.degree for b in key]
    acc = Vector.zero()
    for i, inner_map in s.brackets.items():
        j = n + 1 - i
        outer = s.brackets.get(j)
        if i > n or outer is None or outer.is_zero() or inner_map.is_zero():
            continue
        for images in unshuffle_images(i, j - 1):
            inner = inner_map.on_basis(tuple(key[a - 1] for a in images[:i]))
            if inner.is_zero():
                continue
            sign = _signed_reorder(images, degrees) * parity_sign(i * (j - 1))
            value = _apply_with_insert(outer, (), inner, tuple(key[a - 1] for a in images[i:]))
            acc = acc + value * sign
    return acc


def jacobi_residual_map(s: InftyStructure, n: int) -> MultiMap:
    """The n-th higher Jacobi sum tabulated as a map V^{⊗n} -> V of degree n - 3."""
    residual = leibniz_jacobi_residual if s.flavor is Flavor.LEIBNIZ else lie_jacobi_residual
    return MultiMap.from_function(n, n - 3, s.space, s.space, lambda key: residual(s, key))


def _jacobi_family(task: Tuple[InftyStructure, int]) -> Tuple[int, int, Dict[Key, Vector]]:
    s, n = task
    residual = leibniz_jacobi_residual if s.flavor is Flavor.LEIBNIZ else lie_jacobi_residual
    checked = 0
    failures: Dict[Key, Vector] = {}
    for key in s.space.tuples(n):
        if not _output_in_range(key, n - 3, s.space):
            continue
        checked += 1
        value = residual(s, key)
        if not value.is_zero():
            failures[key] = value
    return n, checked, failures


def _collect(report: IdentityReport, family: str, checked: int, failures: Dict[Key, Vector]) -> None:
    report.touch(family)
    report.checked[family] += checked
    report.families[family].update(failures)
    for key, value in failures.items():
        logger.debug(f"{report.name}: {family} fails at {key} with residual {value!r}")


def _run_families(
    report: IdentityReport,
    worker: Callable[[Tuple], Tuple[int, int, Dict[Key, Vector]]],
    tasks: List[Tuple],
) -> IdentityReport:
    for n, checked, failures in parallel_map(worker, tasks, get_settings().max_workers):
        _collect(report, f"n={n}", checked, failures)
    report.log_summary()
    return report


def check_antisymmetry(s: InftyStructure) -> IdentityReport:
    """
    Graded antisymmetry l(..., v_{a+1}, v_a, ...) = -(-1)^{|v_a||v_{a+1}|} l(..., v_a, v_{a+1}, ...).

    Adjacent transpositions generate every permutation, so they suffice.
    """
    report = IdentityReport(name="antisymmetry")
    for i, f in sorted(s.brackets.items()):
        family = f"l_{i}"
        report.touch(family)
        for key in s.space.tuples(i):
            for a in range(i - 1):
                swapped = (*key[:a], key[a + 1], key[a], *key[a + 2 :])
                sign = -parity_sign(key[a].degree * key[a + 1].degree)
                residual = f.on_basis(swapped) - f.on_basis(key) * sign
                report.record(family, key, residual)
    return report


def check_leibniz_infinity(s: InftyStructure, n_max: Optional[int] = None) -> IdentityReport:
    """
    Evaluate the higher Jacobi identities of a Leibniz∞ structure on every basis tuple.

    Parameters
    ----------
    s : InftyStructure
        A structure of Leibniz flavor.
    n_max : Optional[int], optional
        Largest identity index to check. Defaults to the structural bound.

    Returns
    -------
    IdentityReport
        One family ``n=<index>`` per identity. A bound below the structural one is noted,
        not raised.
    """
    if s.flavor is not Flavor.LEIBNIZ:
        raise SpaceMismatchError("check_leibniz_infinity needs a Leibniz structure")
    report = IdentityReport(name="leibniz-infinity")
    top = _resolve_n_max(s.space, n_max, report)
    return _run_families(report, _jacobi_family, [(s, n) for n in range(1, top + 1)])


def check_lie_infinity(s: InftyStructure, n_max: Optional[int] = None) -> IdentityReport:
    """
    Evaluate graded antisymmetry, then the higher Jacobi identities of a Lie∞ structure.

    Antisymmetry failures land in families ``antisymmetry:l_<i>``.
    """
    if s.flavor is not Flavor.LIE:
        raise SpaceMismatchError("check_lie_infinity needs a Lie structure")
    report = IdentityReport(name="lie-infinity")
    report.merge(check_antisymmetry(s), prefix="antisymmetry:")
    top = _resolve_n_max(s.space, n_max, report)
    return _run_families(report, _jacobi_family, [(s, n) for n in range(1, top + 1)])


def check_infinity(s: InftyStructure, n_max: Optional[int] = None) -> IdentityReport:
    if s.flavor is Flavor.LEIBNIZ:
        return check_leibniz_infinity(s, n_max)
    return check_lie_infinity(s, n_max)


# ---------------------------------------------------------------------------
# Codifferential dictionary
# ---------------------------------------------------------------------------


def to_codifferential(s: InftyStructure) -> Coderivation:
    """
    The degree -1 coderivation with corestrictions D_i = s ∘ l_i ∘ (s^{-1})^{⊗i} on the coalgebra over sV.

    Examples
    --------
    >>> V = GradedSpace("V", {0: 1, 1: 1}, labels={0: ["a"], 1: ["b"]})
    >>> l1 = MultiMap.from_entries(1, -1, V, V, [((V["b"],), V["a"], 1)])
    >>> to_codifferential(InftyStructure(Flavor.LEIBNIZ, V, {1: l1})).degree
    -1
    """
    components = {i: desuspend_map(f) for i, f in s.brackets.items()}
    return Coderivation(components, s.space.suspend(), s.flavor.coalgebra, degree=-1)


def from_codifferential(d: Coderivation, flavor: Optional[Flavor] = None) -> InftyStructure:
    """Translate a degree -1 coderivation back into brackets."""
    if d.degree != -1:
        raise HomogeneityError(f"A codifferential has degree -1, got {d.degree}")
    if flavor is None:
        flavor = Flavor.LEIBNIZ if d.flavor is CoalgebraFlavor.ZINBIEL else Flavor.LIE
    brackets = {i: suspend_map(f) for i, f in d.components.items()}
    return InftyStructure(flavor, d.space.desuspend(), brackets)


def codifferential_square_residual(d: Coderivation, max_arity: Optional[int] = None) -> Dict[int, MultiMap]:
    """
    Corestrictions (D ∘ D)_n for n = 1..max_arity, computed on the coalgebra.

    All of them vanish exactly when the corresponding structure passes its Jacobi check.
    """
    top = max_arity if max_arity is not None else identity_bound(d.space.desuspend())
    return {n: d.square_component(n) for n in range(1, top + 1)}


def square_to_jacobi(square: MultiMap, flavor: Flavor) -> MultiMap:
    """
    Translate (D²)_n into the n-th Jacobi sum on V.

    Leibniz: R_n = (-1)^{n+1} s^{-1}(D²)_n s^{⊗n}. Lie: R_n = s^{-1}(D²)_n s^{⊗n}.
    """
    translated = suspend_map(square)
    if flavor is Flavor.LEIBNIZ:
        translated = translated * parity_sign(square.arity + 1)
    return translated


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InftyMorphism:
    """
    An ∞-morphism between two structures of one flavor, with components φ_i of degree i - 1.

    Parameters
    ----------
    source, target : InftyStructure
        Structures on V and W.
    components : Dict[int, MultiMap]
        φ_i: V^{⊗i} -> W keyed by arity. Missing arities are zero.
    """

    source: InftyStructure
    target: InftyStructure
    components: Dict[int, MultiMap] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.source.flavor is not self.target.flavor:
            raise SpaceMismatchError("Morphism between structures of different flavors")
        for i, f in self.components.items():
            if i < 1 or f.arity != i:
                raise ArityError(f"Component φ_{i} has arity {f.arity}")
            if f.source != self.source.space or f.target != self.target.space:
                raise SpaceMismatchError(
                    f"Component φ_{i} is not a map {self.source.space.name} -> {self.target.space.name}"
                )
            if f.degree != i - 1:
                raise HomogeneityError(f"Component φ_{i} has degree {f.degree}, expected {i - 1}")

    @property
    def flavor(self) -> Flavor:
        return self.source.flavor

    @classmethod
    def identity(cls, s: InftyStructure) -> "InftyMorphism":
        return cls(s, s, {1: MultiMap.identity(s.space)})

    def component(self, i: int) -> MultiMap:
        f = self.components.get(i)
        return f if f is not None else MultiMap.zero(i, i - 1, self.source.space, self.target.space)

    def to_coalgebra(self) -> CoalgebraMorphism:
        """The coalgebra morphism with corestrictions F_i = s ∘ φ_i ∘ (s^{-1})^{⊗i}."""
        components = {i: desuspend_map(f) for i, f in self.components.items()}
        return CoalgebraMorphism(
            components, self.source.space.suspend(), self.target.space.suspend(), self.flavor.coalgebra
        )

    @classmethod
    def from_coalgebra(
        cls, morphism: CoalgebraMorphism, source: InftyStructure, target: InftyStructure
    ) -> "InftyMorphism":
        components = {i: suspend_map(f) for i, f in morphism.components.items()}
        return cls(source, target, components)


def component_bound(source: GradedSpace, target: GradedSpace, shift: int) -> int:
    """
    Largest arity n for which a map V^{⊗n} -> W of degree n + shift can be nonzero.

    Capped by the word-length setting.
    """
    cap = get_settings().max_word_length
    low, high = source.min_degree, target.max_degree
    if low is None or high is None:
        return 1
    if low + 1 <= 0:
        return cap
    return max(1, min(cap, (high - shift) // (low + 1)))


def morphism_residual(m: InftyMorphism, key: Key) -> Vector:
    """
    Left side minus right side of the n-th ∞-morphism identity on one basis tuple.

    Left: Σ_p (1/p!)^{Lie} Σ_{k_1+...+k_p=n} Σ_σ ± m_p(φ_{k_1}(...), ..., φ_{k_p}(...)), over half-unshuffles
    for Leibniz and unshuffles for Lie. Right: Σ ± φ_i(..., l_j(...), ...).
    """
    n = len(key)
    degrees = [b.degree for b in key]
    lie = m.flavor is Flavor.LIE
    lhs = Vector.zero()
    for p, outer in m.target.brackets.items():
        if p > n or outer.is_zero():
            continue
        weight = Fraction(1, factorial(p)) if lie else Fraction(1)
        for ks in compositions(n, p):
            if any(k not in m.components for k in ks):
                continue
            base = parity_sign(p * (p - 1) // 2 + sum((p - r) * k for r, k in enumerate(ks, start=1)))
            for images in unshuffle_images(*ks, half=not lie):
                values: List[Vector] = []
                start = 0
                shift_exponent = 0
                passed = 0
                for r, k in enumerate(ks):
                    block = tuple(key[a - 1] for a in images[start : start + k])
                    start += k
                    if r > 0:
                        shift_exponent += (k - 1) * passed
                    passed += sum(b.degree for b in block)
                    values.append(m.components[k].on_basis(block))
                value = _apply_to_vectors(outer, values)
                if value.is_zero():
                    continue
                sign = base * parity_sign(shift_exponent) * _signed_reorder(images, degrees)
                lhs = lhs + value * (weight * sign)
    rhs = Vector.zero()
    for j, inner_map in m.source.brackets.items():
        if j > n or inner_map.is_zero():
            continue
        if lie:
            p = n - j + 1
            phi = m.components.get(p)
            if phi is None:
                continue
            for images in unshuffle_images(j, p - 1):
                inner = inner_map.on_basis(tuple(key[a - 1] for a in images[:j]))
                if inner.is_zero():
                    continue
                sign = _signed_reorder(images, degrees) * parity_sign(j * (p - 1))
                rhs = rhs + _apply_with_insert(phi, (), inner, tuple(key[a - 1] for a in images[j:])) * sign
        else:
            i = n + 1 - j
            phi = m.components.get(i)
            if phi is None:
                continue
            for k in range(j, n + 1):
                prefix = degrees[: k - 1]
                for images in unshuffle_images(k - j, j - 1):
                    first, chosen = images[: k - j], images[k - j :]
                    inner = inner_map.on_basis(tuple(key[a - 1] for a in chosen) + (key[k - 1],))
                    if inner.is_zero():
                        continue
                    sign = (
                        _signed_reorder(images, prefix)
                        * parity_sign(k + (n - k + 1) * j)
                        * parity_sign(j * sum(degrees[a - 1] for a in first))
                    )
                    value = _apply_with_insert(phi, tuple(key[a - 1] for a in first), inner, key[k:])
                    rhs = rhs + value * sign
    return lhs - rhs


def _morphism_family(task: Tuple[InftyMorphism, int]) -> Tuple[int, int, Dict[Key, Vector]]:
    m, n = task
    checked = 0
    failures: Dict[Key, Vector] = {}
    for key in m.source.space.tuples(n):
        if not _output_in_range(key, n - 2, m.target.space):
            continue
        checked += 1
        value = morphism_residual(m, key)
        if not value.is_zero():
            failures[key] = value
    return n, checked, failures


def check_inf_morphism(m: InftyMorphism, n_max: Optional[int] = None) -> IdentityReport:
    """
    Evaluate both sides of the ∞-morphism identities on every basis tuple up to ``n_max``.

    The default bound is the largest arity at which an identity can have a nonzero term.
    """
    report = IdentityReport(name=f"{m.flavor.value}-infinity-morphism")
    top = n_max if n_max is not None else component_bound(m.source.space, m.target.space, -2)
    return _run_families(report, _morphism_family, [(m, n) for n in range(1, top + 1)])


def coalgebra_morphism_defect(m: InftyMorphism, max_arity: Optional[int] = None) -> Dict[int, MultiMap]:
    """
    Letter projections of 𝔇F - FD on the coalgebra over sV, per arity.

    Translated through the dictionary they coincide with the bracket-level morphism residuals.
    """
    source_d = to_codifferential(m.source)
    target_d = to_codifferential(m.target)
    f = m.to_coalgebra()
    top = max_arity if max_arity is not None else component_bound(m.source.space, m.target.space, -2)
    sv, sw = source_d.space, target_d.space
    result: Dict[int, MultiMap] = {}
    for n in range(1, top + 1):

        def value(key: Key) -> Vector:
            return (target_d(f.apply_word(key)) - f(source_d.apply_word(key))).corestriction()

        result[n] = MultiMap.from_function(n, -1, sv, sw, value)
    return result


def compose_inf_morphisms(g: InftyMorphism, f: InftyMorphism, max_arity: Optional[int] = None) -> InftyMorphism:
    """
    The composite ``g ∘ f``, computed by composing the coalgebra morphisms.

    Raises
    ------
    SpaceMismatchError
        If ``f.target`` is not ``g.source``.
    """
    if f.target != g.source:
        raise SpaceMismatchError("Morphisms are not composable")
    top = max_arity if max_arity is not None else component_bound(f.source.space, g.target.space, -1)
    composite = g.to_coalgebra().compose(f.to_coalgebra(), max_arity=top)
    logger.debug(f"Composed morphisms into {len(composite.components)} nonzero components")
    return InftyMorphism.from_coalgebra(composite, f.source, g.target)
