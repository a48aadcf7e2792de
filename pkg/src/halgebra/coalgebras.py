"""
Free Zinbiel and reduced symmetric (co)algebras on a graded space.

Words are tuples of basis letters. The Zinbiel coalgebra Zin^c(W) has the
half-unshuffle coproduct with the last letter pinned to the right factor. The
symmetric coalgebra S^c(W) has the full unshuffle coproduct on canonically
ordered words. Coderivations and coalgebra morphisms are determined by their
corestrictions, the component maps W^{⊗k} -> W, and are extended here by the
explicit shuffle formulas.
"""

import itertools
import logging
from collections.abc import Callable, ItemsView, Iterator, Mapping, Sequence
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial
from types import MappingProxyType
from typing import Dict, List, Optional, Tuple

from halgebra.config import get_settings
from halgebra.errors import ArityError, HomogeneityError, SpaceMismatchError, WordLengthError
from halgebra.graded import (
    Basis,
    GradedSpace,
    MultiMap,
    ScalarLike,
    Vector,
    compositions,
    parity_sign,
    reorder_sign,
    to_scalar,
    unshuffle_images,
)

logger = logging.getLogger("halgebra.coalgebras")

Word = Tuple[Basis, ...]


class CoalgebraFlavor(str, Enum):
    """Which free coalgebra words live in."""

    ZINBIEL = "zinbiel"
    SYMMETRIC = "symmetric"


def word_degree(word: Sequence[Basis]) -> int:
    return sum(b.degree for b in word)


def check_word_length(length: int) -> None:
    cap = get_settings().max_word_length
    if length > cap:
        raise WordLengthError(f"Word length {length} exceeds the maximum word length {cap}")


def canonical_symmetric(word: Sequence[Basis]) -> Tuple[int, Word]:
    """
    Sort a word by (degree, index) and return the Koszul sign absorbed by the reordering.

    A repeated odd letter makes the symmetric word vanish; the sign is then 0.
    """
    order = sorted(range(len(word)), key=lambda i: (word[i].degree, word[i].index))
    ordered = tuple(word[i] for i in order)
    for a, b in itertools.pairwise(ordered):
        if a == b and a.degree % 2:
            return 0, ordered
    images = tuple(i + 1 for i in order)
    return reorder_sign(images, [b.degree for b in word]), ordered


def _normalize(word: Sequence[Basis], flavor: CoalgebraFlavor) -> Tuple[int, Word]:
    if flavor is CoalgebraFlavor.SYMMETRIC:
        return canonical_symmetric(word)
    return 1, tuple(word)


class CoalgElement(Mapping[Word, Fraction]):
    """
    A rational combination of words in a free Zinbiel or symmetric coalgebra.

    Symmetric-flavor words are stored in canonical order with the reordering sign
    folded into the coefficient, so equality is exact.
    """

    __slots__ = ("_terms", "flavor")

    def __init__(
        self,
        terms: Optional[Mapping[Sequence[Basis], ScalarLike]] = None,
        flavor: CoalgebraFlavor = CoalgebraFlavor.ZINBIEL,
    ) -> None:
        self.flavor = flavor
        acc: Dict[Word, Fraction] = {}
        for word, coefficient in (terms or {}).items():
            if not word:
                raise ArityError("Reduced coalgebras have no empty word")
            sign, key = _normalize(word, flavor)
            if sign == 0:
                continue
            acc[key] = acc.get(key, Fraction(0)) + sign * to_scalar(coefficient)
        self._terms = {w: c for w, c in acc.items() if c != 0}

    @classmethod
    def _raw(cls, terms: Dict[Word, Fraction], flavor: CoalgebraFlavor) -> "CoalgElement":
        element = cls.__new__(cls)
        element.flavor = flavor
        element._terms = {w: c for w, c in terms.items() if c != 0}
        return element

    @classmethod
    def word(
        cls, letters: Sequence[Basis], flavor: CoalgebraFlavor = CoalgebraFlavor.ZINBIEL, coefficient: ScalarLike = 1
    ) -> "CoalgElement":
        return cls({tuple(letters): coefficient}, flavor)

    @classmethod
    def from_vector(cls, v: Vector, flavor: CoalgebraFlavor = CoalgebraFlavor.ZINBIEL) -> "CoalgElement":
        return cls._raw({(b,): c for b, c in v.items()}, flavor)

    @classmethod
    def zero(cls, flavor: CoalgebraFlavor = CoalgebraFlavor.ZINBIEL) -> "CoalgElement":
        return cls._raw({}, flavor)

    def __getitem__(self, word: Word) -> Fraction:
        return self._terms.get(word, Fraction(0))

    def items(self) -> ItemsView[Word, Fraction]:
        return self._terms.items()

    def __iter__(self) -> Iterator[Word]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "CoalgElement") -> None:
        if other.flavor is not self.flavor:
            raise SpaceMismatchError(f"Cannot combine {self.flavor.value} and {other.flavor.value} elements")

    def __add__(self, other: "CoalgElement") -> "CoalgElement":
        self._check(other)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = acc.get(w, Fraction(0)) + c
        return CoalgElement._raw(acc, self.flavor)

    def __sub__(self, other: "CoalgElement") -> "CoalgElement":
        return self + (-other)

    def __neg__(self) -> "CoalgElement":
        return CoalgElement._raw({w: -c for w, c in self._terms.items()}, self.flavor)

    def __mul__(self, scalar: ScalarLike) -> "CoalgElement":
        k = to_scalar(scalar)
        return CoalgElement._raw({w: k * c for w, c in self._terms.items()}, self.flavor)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoalgElement):
            return NotImplemented
        return self.flavor is other.flavor and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.flavor, frozenset(self._terms.items())))

    def weight(self, n: int) -> "CoalgElement":
        """The part made of words of length n."""
        return CoalgElement._raw({w: c for w, c in self._terms.items() if len(w) == n}, self.flavor)

    def corestriction(self) -> Vector:
        """Projection onto the cogenerators (words of length 1)."""
        return Vector({w[0]: c for w, c in self._terms.items() if len(w) == 1})

    @property
    def degree(self) -> Optional[int]:
        degrees = {word_degree(w) for w in self._terms}
        if not degrees:
            return None
        if len(degrees) > 1:
            raise HomogeneityError(f"Coalgebra element is not homogeneous (degrees {sorted(degrees)})")
        return degrees.pop()

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in self._terms.items():
            text = "".join(b.label() for b in w)
            parts.append(text if c == 1 else f"({c})*{text}")
        return " + ".join(parts)


class TensorSum(Mapping[Tuple[Word, ...], Fraction]):
    """A rational combination of tensor products of words, e.g. Δ(w) in C ⊗ C."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Tuple[Word, ...], Fraction]] = None) -> None:
        self._terms = {k: c for k, c in (terms or {}).items() if c != 0}

    def __getitem__(self, key: Tuple[Word, ...]) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def items(self) -> ItemsView[Tuple[Word, ...], Fraction]:
        return self._terms.items()

    def __iter__(self) -> Iterator[Tuple[Word, ...]]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "TensorSum") -> "TensorSum":
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, Fraction(0)) + c
        return TensorSum(acc)

    def __sub__(self, other: "TensorSum") -> "TensorSum":
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, Fraction(0)) - c
        return TensorSum(acc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            f"({c})*" + " ⊗ ".join("".join(b.label() for b in w) for w in key) for key, c in self._terms.items()
        )


TensorPairSum = TensorSum


# ---------------------------------------------------------------------------
# Products and coproducts
# ---------------------------------------------------------------------------


def zinbiel_product(a: Sequence[Basis], b: Sequence[Basis]) -> CoalgElement:
    """
    The free Zinbiel product a · b.

    Sums over σ in Sh(p, q-1) the word whose σ(i)-th letter is the i-th letter of
    a b', with b's last letter fixed at the end, weighted by ε(σ^{-1}).

    Examples
    --------
    >>> from halgebra.graded import GradedSpace
    >>> V = GradedSpace("V", {0: 2}, labels={0: ["u", "v"]})
    >>> zinbiel_product((V["u"],), (V["v"],))
    uv
    """
    if not a or not b:
        raise ArityError("The Zinbiel product is defined on nonempty words")
    check_word_length(len(a) + len(b))
    p, q = len(a), len(b)
    letters = tuple(a) + tuple(b[:-1])
    degrees = [x.degree for x in letters]
    acc: Dict[Word, Fraction] = {}
    for images in unshuffle_images(p, q - 1):
        inverse = [0] * len(images)
        for i, image in enumerate(images, start=1):
            inverse[image - 1] = i
        sign = reorder_sign(inverse, degrees)
        word = tuple(letters[i - 1] for i in inverse) + (b[-1],)
        acc[word] = acc.get(word, Fraction(0)) + sign
    return CoalgElement._raw(acc, CoalgebraFlavor.ZINBIEL)


def zinbiel_multiply(x: CoalgElement, y: CoalgElement) -> CoalgElement:
    """Bilinear extension of :func:`zinbiel_product`."""
    acc = CoalgElement.zero(CoalgebraFlavor.ZINBIEL)
    for wa, ca in x.items():
        for wb, cb in y.items():
            acc = acc + zinbiel_product(wa, wb) * (ca * cb)
    return acc


def symmetric_multiply(x: CoalgElement, y: CoalgElement) -> CoalgElement:
    """The graded commutative product of the symmetric algebra on canonical words."""
    acc: Dict[Word, Fraction] = {}
    for wa, ca in x.items():
        for wb, cb in y.items():
            sign, word = canonical_symmetric(wa + wb)
            if sign:
                acc[word] = acc.get(word, Fraction(0)) + sign * ca * cb
    return CoalgElement._raw(acc, CoalgebraFlavor.SYMMETRIC)


@lru_cache(maxsize=1 << 14)
def _zinbiel_coproduct(word: Word) -> Tuple[Tuple[Tuple[Word, Word], Fraction], ...]:
    n = len(word)
    degrees = [b.degree for b in word[:-1]]
    acc: Dict[Tuple[Word, Word], Fraction] = {}
    for k in range(1, n):
        for images in unshuffle_images(k, n - k - 1):
            sign = reorder_sign(images, degrees)
            left = tuple(word[i - 1] for i in images[:k])
            right = tuple(word[i - 1] for i in images[k:]) + (word[-1],)
            acc[(left, right)] = acc.get((left, right), Fraction(0)) + sign
    return tuple((key, c) for key, c in acc.items() if c != 0)


@lru_cache(maxsize=1 << 14)
def _sym_coproduct(word: Word) -> Tuple[Tuple[Tuple[Word, Word], Fraction], ...]:
    n = len(word)
    degrees = [b.degree for b in word]
    acc: Dict[Tuple[Word, Word], Fraction] = {}
    for k in range(1, n):
        for images in unshuffle_images(k, n - k):
            sign = reorder_sign(images, degrees)
            s1, left = canonical_symmetric(tuple(word[i - 1] for i in images[:k]))
            s2, right = canonical_symmetric(tuple(word[i - 1] for i in images[k:]))
            if s1 * s2 == 0:
                continue
            acc[(left, right)] = acc.get((left, right), Fraction(0)) + sign * s1 * s2
    return tuple((key, c) for key, c in acc.items() if c != 0)


def zinbiel_coproduct(word: Sequence[Basis]) -> TensorSum:
    """
    Reduced coproduct of the cofree Zinbiel coalgebra on one word.

    Examples
    --------
    >>> from halgebra.graded import GradedSpace
    >>> V = GradedSpace("V", {0: 2}, labels={0: ["u", "v"]})
    >>> zinbiel_coproduct((V["u"], V["v"]))
    (1)*u ⊗ v
    """
    if not word:
        raise ArityError("The coproduct is defined on nonempty words")
    return TensorSum(dict(_zinbiel_coproduct(tuple(word))))


def sym_coproduct(word: Sequence[Basis]) -> TensorSum:
    """Reduced unshuffle coproduct of the symmetric coalgebra on one (canonicalized) word."""
    if not word:
        raise ArityError("The coproduct is defined on nonempty words")
    sign, canonical = canonical_symmetric(word)
    if sign == 0:
        return TensorSum()
    return TensorSum({k: sign * c for k, c in _sym_coproduct(canonical)})


def coproduct(element: CoalgElement) -> TensorSum:
    """Linear extension of the flavor's coproduct."""
    single = zinbiel_coproduct if element.flavor is CoalgebraFlavor.ZINBIEL else sym_coproduct
    acc: Dict[Tuple[Word, ...], Fraction] = {}
    for word, c in element.items():
        for key, d in single(word).items():
            acc[key] = acc.get(key, Fraction(0)) + c * d
    return TensorSum(acc)


def iterated_coproduct(word: Sequence[Basis], p: int, flavor: CoalgebraFlavor) -> TensorSum:
    """
    Δ^{p-1} = (Δ ⊗ id^{p-2}) ∘ ... ∘ Δ, always splitting the leftmost factor.

    ``p = 1`` returns the word itself as a 1-fold tensor.
    """
    if p < 1:
        raise ArityError(f"Iterated coproduct needs p >= 1, got {p}")
    sign, start = _normalize(word, flavor)
    current: Dict[Tuple[Word, ...], Fraction] = {(start,): Fraction(sign)} if sign else {}
    single = zinbiel_coproduct if flavor is CoalgebraFlavor.ZINBIEL else sym_coproduct
    for _ in range(p - 1):
        nxt: Dict[Tuple[Word, ...], Fraction] = {}
        for key, c in current.items():
            for (left, right), d in single(key[0]).items():
                new_key = (left, right, *key[1:])
                nxt[new_key] = nxt.get(new_key, Fraction(0)) + c * d
        current = {k: c for k, c in nxt.items() if c != 0}
    return TensorSum(current)


def flip_first_two(t: TensorSum) -> TensorSum:
    """The graded flip τ ⊗ id on the first two factors: a ⊗ b ⊗ ... -> (-1)^{|a||b|} b ⊗ a ⊗ ..."""
    acc: Dict[Tuple[Word, ...], Fraction] = {}
    for key, c in t.items():
        a, b = key[0], key[1]
        new_key = (b, a, *key[2:])
        acc[new_key] = acc.get(new_key, Fraction(0)) + parity_sign(word_degree(a) * word_degree(b)) * c
    return TensorSum(acc)


def apply_coproduct_on_factor(t: TensorSum, factor: int, flavor: CoalgebraFlavor) -> TensorSum:
    """Apply Δ to one tensor factor (Δ has degree 0, so no Koszul sign)."""
    single = zinbiel_coproduct if flavor is CoalgebraFlavor.ZINBIEL else sym_coproduct
    acc: Dict[Tuple[Word, ...], Fraction] = {}
    for key, c in t.items():
        for (left, right), d in single(key[factor]).items():
            new_key = (*key[:factor], left, right, *key[factor + 1 :])
            acc[new_key] = acc.get(new_key, Fraction(0)) + c * d
    return TensorSum(acc)


# ---------------------------------------------------------------------------
# Coderivations
# ---------------------------------------------------------------------------


def _components_degree(components: Mapping[int, MultiMap], space: GradedSpace, same_target: bool = True) -> int:
    degrees = {f.degree for f in components.values()}
    if len(degrees) > 1:
        raise HomogeneityError(f"Inhomogeneous family: component degrees {sorted(degrees)}")
    for k, f in components.items():
        if f.arity != k:
            raise ArityError(f"Component {k} has arity {f.arity}")
        if f.source != space or (same_target and f.target != space):
            raise SpaceMismatchError(f"Component {k} is not an operator on {space.name}")
    return degrees.pop() if degrees else 0


class Coderivation:
    """
    The coderivation of Zin^c(W) or S^c(W) with the given corestrictions D_k: W^{⊗k} -> W.

    Parameters
    ----------
    components : Mapping[int, MultiMap]
        Corestrictions keyed by arity. Missing arities are zero. All must share one degree.
    space : GradedSpace
        The cogenerating space W (usually a suspension sV).
    flavor : CoalgebraFlavor
        Zinbiel or symmetric.
    """

    def __init__(
        self,
        components: Mapping[int, MultiMap],
        space: GradedSpace,
        flavor: CoalgebraFlavor = CoalgebraFlavor.ZINBIEL,
        degree: Optional[int] = None,
    ) -> None:
        self.components = {k: f for k, f in components.items() if not f.is_zero()}
        self.space = space
        self.flavor = flavor
        self.degree = _components_degree(components, space) if components else (degree or 0)
        if degree is not None and components and self.degree != degree:
            raise HomogeneityError(f"Components have degree {self.degree}, expected {degree}")
        # private memo of on_word; components are never reassigned
        self._memo: Dict[Word, Dict[Word, Fraction]] = {}

    def on_word(self, word: Word) -> Mapping[Word, Fraction]:
        """The image of a basis word as a read-only {word: coefficient} table."""
        cached = self._memo.get(word)
        if cached is None:
            check_word_length(len(word))
            if self.flavor is CoalgebraFlavor.ZINBIEL:
                cached = self._zinbiel_word(word)
            else:
                cached = self._symmetric_word(word)
            self._memo[word] = cached
        return MappingProxyType(cached)

    def _zinbiel_word(self, word: Word) -> Dict[Word, Fraction]:
        n = len(word)
        degrees = [b.degree for b in word]
        acc: Dict[Word, Fraction] = {}
        for k, component in self.components.items():
            # the k-ary component eats k-1 letters taken from the prefix and the letter at position m
            for m in range(k, n + 1):
                prefix_degrees = degrees[: m - 1]
                for images in unshuffle_images(m - k, k - 1):
                    unchosen, chosen = images[: m - k], images[m - k :]
                    value = component.on_basis(tuple(word[i - 1] for i in chosen) + (word[m - 1],))
                    if value.is_zero():
                        continue
                    sign = reorder_sign(images, prefix_degrees) * parity_sign(
                        self.degree * sum(degrees[i - 1] for i in unchosen)
                    )
                    head = tuple(word[i - 1] for i in unchosen)
                    tail = word[m:]
                    for b, c in value.items():
                        key = (*head, b, *tail)
                        acc[key] = acc.get(key, Fraction(0)) + sign * c
        return {w: c for w, c in acc.items() if c != 0}

    def _symmetric_word(self, word: Word) -> Dict[Word, Fraction]:
        sign0, word = canonical_symmetric(word)
        if sign0 == 0:
            return {}
        n = len(word)
        degrees = [b.degree for b in word]
        acc: Dict[Word, Fraction] = {}
        for k, component in self.components.items():
            if k > n:
                continue
            for images in unshuffle_images(k, n - k):
                value = component.on_basis(tuple(word[i - 1] for i in images[:k]))
                if value.is_zero():
                    continue
                sign = sign0 * reorder_sign(images, degrees)
                rest = tuple(word[i - 1] for i in images[k:])
                for b, c in value.items():
                    s, key = canonical_symmetric((b, *rest))
                    if s:
                        acc[key] = acc.get(key, Fraction(0)) + sign * s * c
        return {w: c for w, c in acc.items() if c != 0}

    def __call__(self, element: CoalgElement) -> CoalgElement:
        if element.flavor is not self.flavor:
            raise SpaceMismatchError("Coderivation applied to an element of the other flavor")
        acc: Dict[Word, Fraction] = {}
        for word, c in element.items():
            for w, d in self.on_word(word).items():
                acc[w] = acc.get(w, Fraction(0)) + c * d
        return CoalgElement._raw(acc, self.flavor)

    def apply_word(self, word: Sequence[Basis]) -> CoalgElement:
        return self(CoalgElement.word(word, self.flavor))

    def square_component(self, n: int) -> MultiMap:
        """The corestriction (D ∘ D)_n as a map W^{⊗n} -> W of degree 2|D|."""
        def value(key: Tuple[Basis, ...]) -> Vector:
            return self(self.apply_word(key)).corestriction()

        return MultiMap.from_function(n, 2 * self.degree, self.space, self.space, value)


def extend_coderivation(
    corestrictions: Mapping[int, MultiMap] | Sequence[MultiMap],
    space: GradedSpace,
    flavor: CoalgebraFlavor = CoalgebraFlavor.ZINBIEL,
) -> Coderivation:
    """
    Extend corestrictions D_k to the unique coderivation having them.

    ``corestrictions`` may be a mapping arity -> map or a list ``[D_1, D_2, ...]``.
    """
    if not isinstance(corestrictions, Mapping):
        corestrictions = {k: f for k, f in enumerate(corestrictions, start=1)}
    return Coderivation(corestrictions, space, flavor)


# ---------------------------------------------------------------------------
# Coalgebra morphisms
# ---------------------------------------------------------------------------


class CoalgebraMorphism:
    """
    The degree-0 coalgebra morphism with corestrictions F_k: W^{⊗k} -> W'.

    Zinbiel flavor sums over half-unshuffles. Symmetric flavor sums over
    unshuffles with the factor 1/p! that compensates for ordered blocks.
    """

    def __init__(
        self,
        components: Mapping[int, MultiMap],
        source: GradedSpace,
        target: GradedSpace,
        flavor: CoalgebraFlavor = CoalgebraFlavor.ZINBIEL,
    ) -> None:
        self.components = {k: f for k, f in components.items() if not f.is_zero()}
        self.source = source
        self.target = target
        self.flavor = flavor
        for k, f in components.items():
            if f.arity != k:
                raise ArityError(f"Component {k} has arity {f.arity}")
            if f.source != source or f.target != target:
                raise SpaceMismatchError(f"Component {k} is not a map {source.name} -> {target.name}")
            if f.degree != 0:
                raise HomogeneityError(f"Coalgebra morphism components have degree 0, component {k} has {f.degree}")
        # private memo of on_word
        self._memo: Dict[Word, Dict[Word, Fraction]] = {}

    def on_word(self, word: Word) -> Mapping[Word, Fraction]:
        """The image of a basis word as a read-only {word: coefficient} table."""
        cached = self._memo.get(word)
        if cached is None:
            check_word_length(len(word))
            cached = self._evaluate(word)
            self._memo[word] = cached
        return MappingProxyType(cached)

    def _evaluate(self, word: Word) -> Dict[Word, Fraction]:
        symmetric = self.flavor is CoalgebraFlavor.SYMMETRIC
        sign0 = 1
        if symmetric:
            sign0, word = canonical_symmetric(word)
            if sign0 == 0:
                return {}
        n = len(word)
        degrees = [b.degree for b in word]
        acc: Dict[Word, Fraction] = {}
        for p in range(1, n + 1):
            weight = Fraction(1, factorial(p)) if symmetric else Fraction(1)
            for ks in compositions(n, p):
                if any(k not in self.components for k in ks):
                    continue
                for images in unshuffle_images(*ks, half=not symmetric):
                    values: List[List[Tuple[Basis, Fraction]]] = []
                    start = 0
                    for k in ks:
                        block = tuple(word[i - 1] for i in images[start : start + k])
                        start += k
                        value = self.components[k].on_basis(block)
                        if value.is_zero():
                            break
                        values.append(list(value.items()))
                    else:
                        sign = sign0 * reorder_sign(images, degrees)
                        for combo in itertools.product(*values):
                            out = tuple(b for b, _ in combo)
                            coefficient = weight * sign
                            for _, c in combo:
                                coefficient *= c
                            if symmetric:
                                s, out = canonical_symmetric(out)
                                coefficient *= s
                            if coefficient:
                                acc[out] = acc.get(out, Fraction(0)) + coefficient
        return {w: c for w, c in acc.items() if c != 0}

    def __call__(self, element: CoalgElement) -> CoalgElement:
        if element.flavor is not self.flavor:
            raise SpaceMismatchError("Morphism applied to an element of the other flavor")
        acc: Dict[Word, Fraction] = {}
        for word, c in element.items():
            for w, d in self.on_word(word).items():
                acc[w] = acc.get(w, Fraction(0)) + c * d
        return CoalgElement._raw(acc, self.flavor)

    def apply_word(self, word: Sequence[Basis]) -> CoalgElement:
        return self(CoalgElement.word(word, self.flavor))

    def compose(self, first: "CoalgebraMorphism", max_arity: Optional[int] = None) -> "CoalgebraMorphism":
        """Corestrictions of ``self ∘ first`` up to ``max_arity`` (default: the word-length cap)."""
        if first.target != self.source or first.flavor is not self.flavor:
            raise SpaceMismatchError("Morphisms are not composable")
        top = max_arity or get_settings().max_word_length
        components = {}
        for n in range(1, top + 1):
            component = MultiMap.from_function(
                n, 0, first.source, self.target, lambda key: self(first.apply_word(key)).corestriction()
            )
            components[n] = component
        return CoalgebraMorphism(components, first.source, self.target, self.flavor)


def extend_morphism(
    corestrictions: Mapping[int, MultiMap] | Sequence[MultiMap],
    source: GradedSpace,
    target: GradedSpace,
    flavor: CoalgebraFlavor = CoalgebraFlavor.ZINBIEL,
) -> CoalgebraMorphism:
    """Extend corestrictions F_k to the unique coalgebra morphism having them."""
    if not isinstance(corestrictions, Mapping):
        corestrictions = {k: f for k, f in enumerate(corestrictions, start=1)}
    return CoalgebraMorphism(corestrictions, source, target, flavor)


def morphism_via_coproduct(morphism: CoalgebraMorphism, word: Sequence[Basis]) -> CoalgElement:
    """
    Evaluate a morphism as Σ_p (1/p!)^{sym} μ ∘ F_{·}^{⊗p} ∘ Δ^{p-1}.

    This is an independent route to :meth:`CoalgebraMorphism.apply_word` and is used to
    validate the shuffle formula.
    """
    flavor = morphism.flavor
    acc: Dict[Word, Fraction] = {}
    for p in range(1, len(word) + 1):
        weight = Fraction(1, factorial(p)) if flavor is CoalgebraFlavor.SYMMETRIC else Fraction(1)
        for key, c in iterated_coproduct(word, p, flavor).items():
            values = []
            for factor in key:
                component = morphism.components.get(len(factor))
                value = component.on_basis(factor) if component is not None else Vector.zero()
                if value.is_zero():
                    break
                values.append(list(value.items()))
            else:
                for combo in itertools.product(*values):
                    coefficient = weight * c
                    for _, d in combo:
                        coefficient *= d
                    out = tuple(b for b, _ in combo)
                    sign, out = _normalize(out, flavor)
                    if sign:
                        acc[out] = acc.get(out, Fraction(0)) + sign * coefficient
    return CoalgElement._raw(acc, flavor)


# ---------------------------------------------------------------------------
# Diagram checks
# ---------------------------------------------------------------------------


def words_up_to(space: GradedSpace, max_length: int, flavor: CoalgebraFlavor) -> Iterator[Word]:
    """Basis words of length 1..max_length; canonical representatives for the symmetric flavor."""
    for n in range(1, max_length + 1):
        for word in space.tuples(n):
            if flavor is CoalgebraFlavor.SYMMETRIC:
                sign, canonical = canonical_symmetric(word)
                if sign == 0 or canonical != word:
                    continue
            yield word


def _tensor_of(elements: Sequence[CoalgElement], sign: int = 1) -> TensorSum:
    acc: Dict[Tuple[Word, ...], Fraction] = {}
    for combo in itertools.product(*(list(e.items()) for e in elements)):
        key = tuple(w for w, _ in combo)
        coefficient = Fraction(sign)
        for _, c in combo:
            coefficient *= c
        acc[key] = acc.get(key, Fraction(0)) + coefficient
    return TensorSum(acc)


def coderivation_defect(derivation: Coderivation, word: Sequence[Basis]) -> TensorSum:
    """Δ∘D − (D⊗id + id⊗D)∘Δ on one word."""
    flavor = derivation.flavor
    lhs = coproduct(derivation.apply_word(word))
    rhs = TensorSum()
    for (left, right), c in coproduct(CoalgElement.word(word, flavor)).items():
        left_elem = CoalgElement._raw({left: c}, flavor)
        right_elem = CoalgElement._raw({right: Fraction(1)}, flavor)
        rhs = rhs + _tensor_of([derivation(left_elem), right_elem])
        rhs = rhs + _tensor_of([left_elem, derivation(right_elem)], parity_sign(derivation.degree * word_degree(left)))
    return lhs - rhs


def morphism_defect(morphism: CoalgebraMorphism, word: Sequence[Basis]) -> TensorSum:
    """Δ∘F − (F⊗F)∘Δ on one word."""
    flavor = morphism.flavor
    lhs = coproduct(morphism.apply_word(word))
    rhs = TensorSum()
    for (left, right), c in coproduct(CoalgElement.word(word, flavor)).items():
        rhs = rhs + _tensor_of([morphism.apply_word(left) * c, morphism.apply_word(right)])
    return lhs - rhs


def is_coderivation(derivation: Coderivation, max_length: int) -> Dict[Word, TensorSum]:
    """Nonzero coderivation defects on all basis words up to ``max_length``."""
    return {
        w: d
        for w in words_up_to(derivation.space, max_length, derivation.flavor)
        if not (d := coderivation_defect(derivation, w)).is_zero()
    }


def is_coalgebra_morphism(morphism: CoalgebraMorphism, max_length: int) -> Dict[Word, TensorSum]:
    """Nonzero morphism defects on all basis words up to ``max_length``."""
    return {
        w: d
        for w in words_up_to(morphism.source, max_length, morphism.flavor)
        if not (d := morphism_defect(morphism, w)).is_zero()
    }


# ---------------------------------------------------------------------------
# Symmetric product of maps
# ---------------------------------------------------------------------------


class SymmetricMap:
    """
    A homogeneous linear map from S^c(W) to the symmetric algebra S(W'), given by its
    action on canonical words.

    Parameters
    ----------
    degree : int
        Degree of the map.
    source, target : GradedSpace
        W and W'.
    func : Callable[[Word], CoalgElement]
        Value on a canonical word; must return a symmetric-flavor element.
    """

    def __init__(
        self, degree: int, source: GradedSpace, target: GradedSpace, func: Callable[[Word], CoalgElement]
    ) -> None:
        self.degree = degree
        self.source = source
        self.target = target
        self._func = func

    @classmethod
    def from_multimap(cls, f: MultiMap) -> "SymmetricMap":
        """The map that is ``f`` on words of length ``f.arity`` and zero elsewhere."""
        def func(word: Word) -> CoalgElement:
            if len(word) != f.arity:
                return CoalgElement.zero(CoalgebraFlavor.SYMMETRIC)
            return CoalgElement.from_vector(f.on_basis(word), CoalgebraFlavor.SYMMETRIC)

        return cls(f.degree, f.source, f.target, func)

    def __call__(self, word: Sequence[Basis]) -> CoalgElement:
        sign, canonical = canonical_symmetric(word)
        if sign == 0:
            return CoalgElement.zero(CoalgebraFlavor.SYMMETRIC)
        return self._func(canonical) * sign

    def table(self, max_length: int) -> Dict[Word, CoalgElement]:
        """Values on every canonical word up to ``max_length``; nonzero values only."""
        return {
            w: v for w in words_up_to(self.source, max_length, CoalgebraFlavor.SYMMETRIC) if not (v := self(w)).is_zero()
        }


def symmetric_product(f: SymmetricMap | MultiMap, g: SymmetricMap | MultiMap) -> SymmetricMap:
    """
    The symmetric product f ⊙ g = μ ∘ (f ⊗ g) ∘ Δ.

    On a word v_1..v_n it is Σ_{i+j=n} Σ_{σ∈Sh(i,j)} ε(σ) (-1)^{|g|(|v_σ(1)|+...+|v_σ(i)|)}
    f(v_σ(1..i)) · g(v_σ(i+1..n)). The product is graded commutative:
    f ⊙ g = (-1)^{|f||g|} g ⊙ f.
    """
    fm = SymmetricMap.from_multimap(f) if isinstance(f, MultiMap) else f
    gm = SymmetricMap.from_multimap(g) if isinstance(g, MultiMap) else g
    if fm.source != gm.source or fm.target != gm.target:
        raise SpaceMismatchError("Symmetric product of maps over different spaces")

    def func(word: Word) -> CoalgElement:
        n = len(word)
        degrees = [b.degree for b in word]
        acc = CoalgElement.zero(CoalgebraFlavor.SYMMETRIC)
        for i in range(1, n):
            for images in unshuffle_images(i, n - i):
                first = tuple(word[k - 1] for k in images[:i])
                second = tuple(word[k - 1] for k in images[i:])
                sign = reorder_sign(images, degrees) * parity_sign(gm.degree * word_degree(first))
                acc = acc + symmetric_multiply(fm(first), gm(second)) * sign
        return acc

    return SymmetricMap(fm.degree + gm.degree, fm.source, fm.target, func)
