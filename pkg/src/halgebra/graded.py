"""
Graded linear algebra over the rationals.

This module is the substrate every other halgebra module computes in: exact
scalars, finite-dimensional graded spaces with named bases, sparse vectors,
homogeneous multilinear maps, permutations with their Koszul signs, shuffle
enumeration and the suspension dictionary that trades brackets on V for
coderivation components on sV.

Signs follow the Koszul rule: moving a symbol of degree a past a symbol of
degree b costs (-1)^(ab).
"""

import itertools
import logging
from collections.abc import ItemsView, Iterable, Iterator, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple, TypeVar, Union

from halgebra.config import get_settings
from halgebra.errors import (
    ArityError,
    DegreeWindowError,
    HalgebraError,
    HomogeneityError,
    SpaceMismatchError,
)

logger = logging.getLogger("halgebra.graded")

Scalar = Fraction
ScalarLike = Union[int, Fraction, str]
T = TypeVar("T")


def to_scalar(value: ScalarLike) -> Fraction:
    """
    Convert an int, Fraction or ``"p/q"`` string to an exact rational.

    Floats are rejected because they are not exact.

    Examples
    --------
    >>> to_scalar("3/6")
    Fraction(1, 2)
    >>> to_scalar(2)
    Fraction(2, 1)
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise HalgebraError(f"Refusing inexact scalar {value!r}; use a Fraction or a 'p/q' string")
    if isinstance(value, Fraction):
        return value
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise HalgebraError(f"Cannot read scalar {value!r}: {e}") from e


def format_scalar(value: Fraction) -> str:
    """Format a rational as ``"p/q"`` (or ``"p"`` for integers)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parity_sign(exponent: int) -> int:
    """Return (-1)**exponent."""
    return -1 if exponent % 2 else 1


# ---------------------------------------------------------------------------
# Graded spaces and basis letters
# ---------------------------------------------------------------------------


def _shifted_label(label: str, shift: int) -> str:
    if shift > 0 and label.startswith("s^-1"):
        return label[len("s^-1"):]
    if shift < 0 and label.startswith("s") and not label.startswith("s^-1"):
        return label[1:]
    return ("s" if shift > 0 else "s^-1") + label


class GradedSpace:
    """
    A finite-dimensional Z-graded vector space with a named basis in each degree.

    Parameters
    ----------
    name : str
        Base name of the space. Suspensions derive their name from it.
    dims : Mapping[int, int]
        Dimension per degree. Zero entries are dropped.
    labels : Optional[Mapping[int, Sequence[str]]], optional
        Basis labels per degree. Defaults to ``e{degree}_{index}``.
    shift : int, optional
        Number of suspensions applied to the base space. Default is 0.

    Examples
    --------
    >>> V = GradedSpace("V", {0: 2, 1: 1}, labels={0: ["x", "y"], 1: ["h"]})
    >>> V.dim(0), V.total_dim
    (2, 3)
    >>> V.suspend().label(V.suspend().basis(1)[0])
    'sx'
    """

    __slots__ = ("_basis", "_dim_map", "_dims", "_hash", "_label_map", "_labels", "_shift_cache", "base", "shift")

    def __init__(
        self,
        name: str,
        dims: Mapping[int, int],
        labels: Optional[Mapping[int, Sequence[str]]] = None,
        shift: int = 0,
    ) -> None:
        window = get_settings().degree_window
        clean: Dict[int, int] = {}
        for degree, dim in dims.items():
            if dim < 0:
                raise HalgebraError(f"Negative dimension {dim} in degree {degree} of {name}")
            if dim == 0:
                continue
            if not window[0] <= degree <= window[1]:
                raise DegreeWindowError(f"Degree {degree} of space {name} is outside the window {window}")
            clean[int(degree)] = int(dim)
        names: Dict[int, Tuple[str, ...]] = {}
        for degree, dim in clean.items():
            given = list(labels.get(degree, [])) if labels else []
            if given and len(given) != dim:
                raise HalgebraError(f"Space {name} has {dim} basis vectors in degree {degree} but {len(given)} labels")
            names[degree] = tuple(given) if given else tuple(f"e{degree}_{i}" for i in range(dim))
        self.base = name
        self.shift = shift
        self._dims: Tuple[Tuple[int, int], ...] = tuple(sorted(clean.items()))
        self._labels: Tuple[Tuple[int, Tuple[str, ...]], ...] = tuple(sorted(names.items()))
        self._hash = hash((self.base, self.shift, self._dims, self._labels))
        self._basis: Optional[Tuple["Basis", ...]] = None
        self._dim_map = clean
        self._label_map = names
        self._shift_cache: Dict[int, GradedSpace] = {}

    @property
    def name(self) -> str:
        if self.shift == 0:
            return self.base
        if self.shift == 1:
            return f"s{self.base}"
        return f"s^{self.shift}{self.base}"

    @property
    def dims(self) -> Dict[int, int]:
        return dict(self._dims)

    @property
    def labels(self) -> Dict[int, Tuple[str, ...]]:
        return dict(self._labels)

    def degrees(self) -> List[int]:
        """Degrees with nonzero dimension, ascending."""
        return [d for d, _ in self._dims]

    def dim(self, degree: int) -> int:
        return self._dim_map.get(degree, 0)

    @property
    def total_dim(self) -> int:
        return sum(n for _, n in self._dims)

    @property
    def min_degree(self) -> Optional[int]:
        return self._dims[0][0] if self._dims else None

    @property
    def max_degree(self) -> Optional[int]:
        return self._dims[-1][0] if self._dims else None

    def basis(self, degree: Optional[int] = None) -> List["Basis"]:
        """Basis letters of one degree, or of the whole space ordered by (degree, index)."""
        if self._basis is None:
            self._basis = tuple(Basis(self, d, i) for d, n in self._dims for i in range(n))
        if degree is None:
            return list(self._basis)
        return [b for b in self._basis if b.degree == degree]

    def label(self, b: "Basis") -> str:
        return self._label_map[b.degree][b.index]

    def __getitem__(self, label: str) -> "Basis":
        for degree, names in self._labels:
            if label in names:
                return Basis(self, degree, names.index(label))
        raise KeyError(f"No basis vector labelled '{label}' in {self.name}")

    def vector(self, label: str, coefficient: ScalarLike = 1) -> "Vector":
        """Return ``coefficient`` times the basis vector named ``label``."""
        return Vector({self[label]: to_scalar(coefficient)})

    def contains(self, b: "Basis") -> bool:
        return b.space == self and 0 <= b.index < self.dim(b.degree)

    def tuples(self, arity: int) -> Iterator[Tuple["Basis", ...]]:
        """All basis tuples of the given arity."""
        return itertools.product(self.basis(), repeat=arity)

    def shifted(self, k: int) -> "GradedSpace":
        """The k-fold suspension (k > 0) or desuspension (k < 0) of this space."""
        if k == 0:
            return self
        cached = self._shift_cache.get(k)
        if cached is None:
            dims = {d + k: n for d, n in self._dims}
            labels = {d + k: [self._relabel(name, k) for name in names] for d, names in self._labels}
            cached = GradedSpace(self.base, dims, labels, shift=self.shift + k)
            self._shift_cache[k] = cached
        return cached

    @staticmethod
    def _relabel(name: str, k: int) -> str:
        step = 1 if k > 0 else -1
        for _ in range(abs(k)):
            name = _shifted_label(name, step)
        return name

    def suspend(self) -> "GradedSpace":
        return self.shifted(1)

    def desuspend(self) -> "GradedSpace":
        return self.shifted(-1)

    def shift_basis(self, b: "Basis", k: int) -> "Basis":
        """Image of a letter of this space in its k-fold shift."""
        if b.space != self:
            raise SpaceMismatchError(f"{b} does not belong to {self.name}")
        return Basis(self.shifted(k), b.degree + k, b.index)

    def dual(self) -> "GradedSpace":
        """The graded dual, with (V*)_{-k} = (V_k)* and labels suffixed by ``*``."""
        if self.shift != 0:
            raise SpaceMismatchError("Dual spaces are only formed for unshifted spaces")
        base = self.base[:-1] if self.base.endswith("*") else f"{self.base}*"
        labels = {
            -d: [name[:-1] if name.endswith("*") else f"{name}*" for name in names] for d, names in self._labels
        }
        return GradedSpace(base, {-d: n for d, n in self._dims}, labels)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, GradedSpace):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.base == other.base
            and self.shift == other.shift
            and self._dims == other._dims
            and self._labels == other._labels
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"GradedSpace({self.name!r}, {dict(self._dims)})"


class Basis(NamedTuple):
    """A basis letter: the ``index``-th basis vector of ``space`` in ``degree``."""

    space: GradedSpace
    degree: int
    index: int

    def label(self) -> str:
        return self.space.label(self)

    def __repr__(self) -> str:
        return self.space.label(self)


# ---------------------------------------------------------------------------
# Vectors
# ---------------------------------------------------------------------------


class Vector(Mapping[Basis, Fraction]):
    """
    An immutable sparse rational combination of basis letters.

    Zero coefficients are never stored, so equality is exact structural equality.

    Examples
    --------
    >>> V = GradedSpace("V", {0: 2}, labels={0: ["x", "y"]})
    >>> v = V.vector("x") + V.vector("y", "1/2")
    >>> v - V.vector("x") == V.vector("y", "1/2")
    True
    """

    __slots__ = ("_hash", "_terms")

    def __init__(self, terms: Optional[Mapping[Basis, ScalarLike]] = None) -> None:
        clean: Dict[Basis, Fraction] = {}
        if terms:
            for b, c in terms.items():
                value = to_scalar(c)
                if value != 0:
                    clean[b] = value
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, terms: Dict[Basis, Fraction]) -> "Vector":
        v = cls.__new__(cls)
        v._terms = {b: c for b, c in terms.items() if c != 0}
        v._hash = None
        return v

    @classmethod
    def basis(cls, b: Basis, coefficient: ScalarLike = 1) -> "Vector":
        return cls({b: coefficient})

    @classmethod
    def zero(cls) -> "Vector":
        return cls._raw({})

    @classmethod
    def sum(cls, vectors: Iterable["Vector"]) -> "Vector":
        acc: Dict[Basis, Fraction] = {}
        for v in vectors:
            for b, c in v._terms.items():
                acc[b] = acc.get(b, Fraction(0)) + c
        return cls._raw(acc)

    def __getitem__(self, b: Basis) -> Fraction:
        return self._terms.get(b, Fraction(0))

    def __iter__(self) -> Iterator[Basis]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def items(self) -> ItemsView[Basis, Fraction]:
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> Optional[int]:
        """The common degree of all terms, or None for the zero vector."""
        degrees = {b.degree for b in self._terms}
        if not degrees:
            return None
        if len(degrees) > 1:
            raise HomogeneityError(f"Vector {self!r} is not homogeneous (degrees {sorted(degrees)})")
        return degrees.pop()

    def __add__(self, other: "Vector") -> "Vector":
        acc = dict(self._terms)
        for b, c in other._terms.items():
            acc[b] = acc.get(b, Fraction(0)) + c
        return Vector._raw(acc)

    def __sub__(self, other: "Vector") -> "Vector":
        acc = dict(self._terms)
        for b, c in other._terms.items():
            acc[b] = acc.get(b, Fraction(0)) - c
        return Vector._raw(acc)

    def __neg__(self) -> "Vector":
        return Vector._raw({b: -c for b, c in self._terms.items()})

    def __mul__(self, scalar: ScalarLike) -> "Vector":
        k = to_scalar(scalar)
        if k == 0:
            return Vector.zero()
        return Vector._raw({b: k * c for b, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Vector):
            return self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for b in sorted(self._terms, key=lambda x: (x.space.name, x.degree, x.index)):
            c = self._terms[b]
            parts.append(b.label() if c == 1 else f"({format_scalar(c)})*{b.label()}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Homogeneous multilinear maps
# ---------------------------------------------------------------------------

EntryKey = Tuple[Basis, ...]


class MultiMap:
    """
    A homogeneous multilinear map ``source^{⊗arity} -> target`` of a fixed degree.

    The map is stored sparsely as structure constants keyed by input tuples of basis
    letters. Every stored output satisfies
    ``output degree = sum of input degrees + degree``.

    Parameters
    ----------
    arity : int
        Number of inputs. Arity 0 stands for a constant (an element of ``target``).
    degree : int
        Degree of the map.
    source, target : GradedSpace
        Input and output spaces.
    entries : Optional[Mapping[EntryKey, Vector]], optional
        Structure constants. Zero values are dropped.
    """

    __slots__ = ("_entries", "arity", "degree", "source", "target")

    def __init__(
        self,
        arity: int,
        degree: int,
        source: GradedSpace,
        target: GradedSpace,
        entries: Optional[Mapping[EntryKey, Vector]] = None,
    ) -> None:
        if arity < 0:
            raise ArityError(f"Arity must be non-negative, got {arity}")
        self.arity = arity
        self.degree = degree
        self.source = source
        self.target = target
        clean: Dict[EntryKey, Vector] = {}
        for key, value in (entries or {}).items():
            if value.is_zero():
                continue
            self._validate(key, value)
            clean[tuple(key)] = value
        self._entries = clean

    def _validate(self, key: EntryKey, value: Vector) -> None:
        if len(key) != self.arity:
            raise ArityError(f"Entry {key} has {len(key)} inputs, map arity is {self.arity}")
        for b in key:
            if b.space != self.source:
                raise SpaceMismatchError(f"Input {b} is not a basis letter of {self.source.name}")
        expected = sum(b.degree for b in key) + self.degree
        for b in value:
            if b.space != self.target:
                raise SpaceMismatchError(f"Output {b} is not a basis letter of {self.target.name}")
            if b.degree != expected:
                raise HomogeneityError(
                    f"Entry {key} -> {b} has output degree {b.degree}, expected {expected} for a map of degree {self.degree}"
                )

    @classmethod
    def from_entries(
        cls,
        arity: int,
        degree: int,
        source: GradedSpace,
        target: GradedSpace,
        entries: Iterable[Tuple[Sequence[Basis], Basis, ScalarLike]],
    ) -> "MultiMap":
        """
        Build a map from (inputs, output, coefficient) triples.

        Raises
        ------
        HomogeneityError
            If the same (inputs, output) key is given twice.
        """
        acc: Dict[EntryKey, Dict[Basis, Fraction]] = {}
        for inputs, output, coefficient in entries:
            slot = acc.setdefault(tuple(inputs), {})
            if output in slot:
                raise HomogeneityError(f"Duplicate entry for {tuple(inputs)} -> {output}")
            slot[output] = to_scalar(coefficient)
        return cls(arity, degree, source, target, {k: Vector(v) for k, v in acc.items()})

    @classmethod
    def zero(cls, arity: int, degree: int, source: GradedSpace, target: GradedSpace) -> "MultiMap":
        return cls(arity, degree, source, target)

    @classmethod
    def identity(cls, space: GradedSpace) -> "MultiMap":
        return cls(1, 0, space, space, {(b,): Vector.basis(b) for b in space.basis()})

    @classmethod
    def from_function(
        cls,
        arity: int,
        degree: int,
        source: GradedSpace,
        target: GradedSpace,
        func: Callable[[EntryKey], Vector],
        tuples: Optional[Iterable[EntryKey]] = None,
    ) -> "MultiMap":
        """Tabulate ``func`` on basis tuples of the right output degree."""
        window = target.degrees()
        entries: Dict[EntryKey, Vector] = {}
        for key in tuples if tuples is not None else source.tuples(arity):
            if sum(b.degree for b in key) + degree not in window:
                continue
            value = func(key)
            if not value.is_zero():
                entries[key] = value
        return cls(arity, degree, source, target, entries)

    @property
    def entries(self) -> Dict[EntryKey, Vector]:
        return dict(self._entries)

    def triples(self) -> Iterator[Tuple[EntryKey, Basis, Fraction]]:
        """Iterate the sparse entry list as (inputs, output, coefficient)."""
        for key, value in self._entries.items():
            for b, c in value.items():
                yield key, b, c

    def on_basis(self, key: Sequence[Basis]) -> Vector:
        return self._entries.get(tuple(key), Vector.zero())

    def __call__(self, *args: Vector) -> Vector:
        """Multilinear evaluation on vectors."""
        if len(args) != self.arity:
            raise ArityError(f"Map of arity {self.arity} applied to {len(args)} arguments")
        acc: Dict[Basis, Fraction] = {}
        for combo in itertools.product(*(list(a.items()) for a in args)):
            key = tuple(b for b, _ in combo)
            value = self._entries.get(key)
            if value is None:
                continue
            coefficient = Fraction(1)
            for _, c in combo:
                coefficient *= c
            for b, c in value.items():
                acc[b] = acc.get(b, Fraction(0)) + coefficient * c
        return Vector._raw(acc)

    def is_zero(self) -> bool:
        return not self._entries

    def same_shape(self, other: "MultiMap") -> bool:
        return (
            self.arity == other.arity
            and self.degree == other.degree
            and self.source == other.source
            and self.target == other.target
        )

    def _check_shape(self, other: "MultiMap") -> None:
        if not self.same_shape(other):
            raise SpaceMismatchError(
                f"Cannot combine maps of shape ({self.arity}, {self.degree}, {self.source.name}->{self.target.name}) "
                f"and ({other.arity}, {other.degree}, {other.source.name}->{other.target.name})"
            )

    def __add__(self, other: "MultiMap") -> "MultiMap":
        self._check_shape(other)
        keys = set(self._entries) | set(other._entries)
        return MultiMap(
            self.arity, self.degree, self.source, self.target, {k: self.on_basis(k) + other.on_basis(k) for k in keys}
        )

    def __sub__(self, other: "MultiMap") -> "MultiMap":
        return self + (-other)

    def __neg__(self) -> "MultiMap":
        return self * -1

    def __mul__(self, scalar: ScalarLike) -> "MultiMap":
        k = to_scalar(scalar)
        return MultiMap(self.arity, self.degree, self.source, self.target, {key: v * k for key, v in self._entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiMap):
            return NotImplemented
        return self.same_shape(other) and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.arity, self.degree, self.source, self.target, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return (
            f"MultiMap(arity={self.arity}, degree={self.degree}, {self.source.name}->{self.target.name}, "
            f"{len(self._entries)} entries)"
        )

    def compose(self, inner: "MultiMap") -> "MultiMap":
        """``self ∘ inner`` for a linear ``self`` (arity 1)."""
        if self.arity != 1:
            raise ArityError("Only linear maps can be post-composed")
        if inner.target != self.source:
            raise SpaceMismatchError(f"Cannot compose {self.source.name}-map after {inner.target.name}-valued map")
        entries = {key: self(value) for key, value in inner._entries.items()}
        return MultiMap(inner.arity, inner.degree + self.degree, inner.source, self.target, entries)


MapFunction = Callable[[EntryKey], Vector]


def apply_multimap(f: MultiMap, args: Sequence[Vector]) -> Vector:
    """Evaluate ``f`` on a tuple of vectors (multilinear extension of its entry table)."""
    return f(*args)


# ---------------------------------------------------------------------------
# Permutations, Koszul signs, shuffles
# ---------------------------------------------------------------------------


class Permutation:
    """
    A permutation of {1..n} stored by its 1-based images.

    Composition follows functions: ``(s.compose(t))(a) == s(t(a))``.

    Examples
    --------
    >>> Permutation((2, 3, 1)).inverse().images
    (3, 1, 2)
    >>> Permutation((2, 1)).sign()
    -1
    """

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]) -> None:
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise HalgebraError(f"{images} is not a permutation of 1..{len(images)}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = images[j - 1], images[i - 1]
        return cls(images)

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, a: int) -> int:
        return self.images[a - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        if other.size != self.size:
            raise ArityError("Cannot compose permutations of different sizes")
        return Permutation(tuple(self.images[other.images[a] - 1] for a in range(self.size)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for a, image in enumerate(self.images, start=1):
            inv[image - 1] = a
        return Permutation(inv)

    def apply(self, items: Sequence[T]) -> Tuple[T, ...]:
        """The reordered tuple (items[σ(1)], ..., items[σ(n)])."""
        return tuple(items[i - 1] for i in self.images)

    def sign(self) -> int:
        return koszul_sign(self, [1] * self.size)

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.size + 1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({self.images})"


@lru_cache(maxsize=1 << 16)
def _koszul(images: Tuple[int, ...], degrees: Tuple[int, ...]) -> int:
    exponent = 0
    n = len(images)
    for a in range(n):
        for b in range(a + 1, n):
            if images[a] > images[b]:
                exponent += degrees[images[a] - 1] * degrees[images[b] - 1]
    return parity_sign(exponent)


def koszul_sign(sigma: Permutation, degrees: Sequence[int]) -> int:
    """
    The Koszul sign ε(σ; v_1..v_n) of reordering v_1..v_n into v_σ(1)..v_σ(n).

    Parameters
    ----------
    sigma : Permutation
        The reordering.
    degrees : Sequence[int]
        Degrees |v_1|, ..., |v_n| of the symbols in their original order.

    Returns
    -------
    int
        +1 or -1.

    Examples
    --------
    >>> koszul_sign(Permutation((2, 1)), [1, 1])
    -1
    >>> koszul_sign(Permutation((2, 3, 1)), [1, 1, 0])
    -1
    """
    if len(degrees) != sigma.size:
        raise ArityError(f"Permutation of size {sigma.size} applied to {len(degrees)} degrees")
    return _koszul(sigma.images, tuple(degrees))


def reorder_sign(images: Sequence[int], degrees: Sequence[int]) -> int:
    """Koszul sign for raw 1-based images; the fast path used by the coalgebra kernels."""
    return _koszul(tuple(images), tuple(degrees))


@lru_cache(maxsize=4096)
def _unshuffles(blocks: Tuple[int, ...], half: bool) -> Tuple[Tuple[int, ...], ...]:
    n = sum(blocks)
    results: List[Tuple[int, ...]] = []

    def extend(remaining: Tuple[int, ...], block: int, acc: List[Tuple[int, ...]]) -> None:
        if block == len(blocks):
            images = tuple(i for chunk in acc for i in chunk)
            if half:
                finals = [chunk[-1] for chunk in acc if chunk]
                if any(a > b for a, b in itertools.pairwise(finals)):
                    return
            results.append(images)
            return
        for chunk in itertools.combinations(remaining, blocks[block]):
            rest = tuple(i for i in remaining if i not in chunk)
            extend(rest, block + 1, [*acc, chunk])

    extend(tuple(range(1, n + 1)), 0, [])
    return tuple(results)


def enumerate_unshuffles(*blocks: int) -> List[Permutation]:
    """
    Unshuffles Sh(i_1, ..., i_k): permutations increasing on each block of positions.

    Examples
    --------
    >>> [p.images for p in enumerate_unshuffles(1, 1)]
    [(1, 2), (2, 1)]
    >>> len(enumerate_unshuffles(2, 1))
    3
    """
    if any(b < 0 for b in blocks):
        raise ArityError(f"Block sizes must be non-negative, got {blocks}")
    return [Permutation(images) for images in _unshuffles(tuple(blocks), False)]


def enumerate_shuffles(p: int, q: int) -> List[Permutation]:
    """The (p, q)-shuffles Sh(p, q)."""
    return enumerate_unshuffles(p, q)


def enumerate_half_unshuffles(*blocks: int) -> List[Permutation]:
    """
    Half-unshuffles Hsh(i_1, ..., i_k): unshuffles whose block-final images increase.

    Empty blocks impose no constraint.

    Examples
    --------
    >>> [p.images for p in enumerate_half_unshuffles(1, 1)]
    [(1, 2)]
    """
    if any(b < 0 for b in blocks):
        raise ArityError(f"Block sizes must be non-negative, got {blocks}")
    return [Permutation(images) for images in _unshuffles(tuple(blocks), True)]


def unshuffle_images(*blocks: int, half: bool = False) -> Tuple[Tuple[int, ...], ...]:
    """Raw image tuples of (half-)unshuffles, cached; used by the inner loops."""
    return _unshuffles(tuple(blocks), half)


def all_permutations(n: int) -> List[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def compositions(total: int, parts: int, minimum: int = 1) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of ``parts`` integers ≥ ``minimum`` summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in compositions(total - first, parts - 1, minimum):
            yield (first, *rest)


# ---------------------------------------------------------------------------
# Suspension dictionary
# ---------------------------------------------------------------------------


def suspension_sign(degrees: Sequence[int]) -> int:
    """(-1)^{Σ (n-i)|v_i|}: the sign of s^{⊗n} on v_1 ⊗ ... ⊗ v_n."""
    n = len(degrees)
    return parity_sign(sum((n - i) * d for i, d in enumerate(degrees, start=1)))


def suspend_word(letters: Sequence[Basis]) -> Tuple[int, Tuple[Basis, ...]]:
    """Apply s^{⊗n} to a word of letters; returns (sign, suspended letters)."""
    sign = suspension_sign([b.degree for b in letters])
    return sign, tuple(b.space.shift_basis(b, 1) for b in letters)


def desuspend_word(letters: Sequence[Basis]) -> Tuple[int, Tuple[Basis, ...]]:
    """Apply (s^{-1})^{⊗n} to a word of letters; returns (sign, desuspended letters)."""
    sign = suspension_sign([b.degree for b in letters])
    return sign, tuple(b.space.shift_basis(b, -1) for b in letters)


def suspend_map(f: MultiMap, n_in: Optional[int] = None, k_out: int = 1) -> MultiMap:
    """
    Transport a map on suspended spaces to the unsuspended ones.

    For ``f: (sV)^{⊗n} -> sW`` this returns ``s^{-1} ∘ f ∘ s^{⊗n}``, i.e.
    ``l(v_1..v_n) = (-1)^{Σ(n-i)|v_i|} s^{-1} f(sv_1..sv_n)``, of degree ``|f| + n - 1``.

    Parameters
    ----------
    f : MultiMap
        A map whose source and target are suspensions (shift ≥ 1).
    n_in : Optional[int], optional
        Expected arity; defaults to ``f.arity``.
    k_out : int, optional
        Number of output tensor factors. Maps here always have one output.
    """
    n = f.arity if n_in is None else n_in
    if n != f.arity:
        raise ArityError(f"Expected arity {n}, map has arity {f.arity}")
    if k_out != 1:
        raise ArityError("Multilinear maps have exactly one output factor")
    if f.source.shift < 1 or f.target.shift < 1:
        raise SpaceMismatchError("suspend_map expects a map between suspended spaces")
    source, target = f.source.desuspend(), f.target.desuspend()
    entries: Dict[EntryKey, Vector] = {}
    for key, value in f.entries.items():
        inner = tuple(f.source.shift_basis(b, -1) for b in key)
        sign = suspension_sign([b.degree for b in inner])
        entries[inner] = Vector({f.target.shift_basis(b, -1): sign * c for b, c in value.items()})
    return MultiMap(n, f.degree + n - k_out, source, target, entries)


def desuspend_map(f: MultiMap, n_in: Optional[int] = None, k_out: int = 1) -> MultiMap:
    """
    Inverse of :func:`suspend_map`: ``D(sv_1..sv_n) = (-1)^{Σ(n-i)|v_i|} s f(v_1..v_n)``.

    The result has degree ``|f| - n + 1``. ``suspend_map(desuspend_map(f)) == f``.
    """
    n = f.arity if n_in is None else n_in
    if n != f.arity:
        raise ArityError(f"Expected arity {n}, map has arity {f.arity}")
    if k_out != 1:
        raise ArityError("Multilinear maps have exactly one output factor")
    source, target = f.source.suspend(), f.target.suspend()
    entries: Dict[EntryKey, Vector] = {}
    for key, value in f.entries.items():
        sign = suspension_sign([b.degree for b in key])
        outer = tuple(f.source.shift_basis(b, 1) for b in key)
        entries[outer] = Vector({f.target.shift_basis(b, 1): sign * c for b, c in value.items()})
    return MultiMap(n, f.degree - n + k_out, source, target, entries)


def permutation_action(sigma: Permutation, letters: Sequence[Basis]) -> Tuple[int, Tuple[Basis, ...]]:
    """The permutation map σ on a word of homogeneous letters: (ε(σ; v), v_σ(1)..v_σ(n))."""
    return koszul_sign(sigma, [b.degree for b in letters]), sigma.apply(letters)


def suspended_permutation_action(sigma: Permutation, letters: Sequence[Basis]) -> Tuple[int, Tuple[Basis, ...]]:
    """
    The conjugate s^{⊗n} ∘ σ ∘ (s^{-1})^{⊗n} evaluated on a word of suspended letters.

    Computed literally, one factor at a time.
    """
    sign_down, inner = desuspend_word(letters)
    sign_perm, moved = permutation_action(sigma, inner)
    sign_up, outer = suspend_word(moved)
    return sign_down * sign_perm * sign_up, outer


# ---------------------------------------------------------------------------
# Tensor products and transposes of maps
# ---------------------------------------------------------------------------

TensorTerms = Dict[Tuple[Basis, ...], Fraction]


def tensor_apply(maps: Sequence[MultiMap], blocks: Sequence[Sequence[Basis]]) -> TensorTerms:
    """
    Evaluate ``f_1 ⊗ ... ⊗ f_k`` on ``x_1 ⊗ ... ⊗ x_k`` where each x_j is a block of letters.

    The Koszul sign is ``(-1)^{Σ_j |f_j| Σ_{i<j} |x_i|}``.

    Returns
    -------
    TensorTerms
        Map from output letter tuples to coefficients.

    Examples
    --------
    >>> V = GradedSpace("V", {0: 1, 1: 1}, labels={0: ["w"], 1: ["v"]})
    >>> f = MultiMap(1, 1, V, V, {(V["w"],): V.vector("v")})
    >>> tensor_apply([MultiMap.identity(V), f], [[V["v"]], [V["w"]]])
    {(v, v): Fraction(-1, 1)}
    """
    if len(maps) != len(blocks):
        raise ArityError(f"{len(maps)} maps applied to {len(blocks)} blocks")
    sign_exponent = 0
    passed = 0
    outputs: List[List[Tuple[Basis, Fraction]]] = []
    for f, block in zip(maps, blocks, strict=True):
        if len(block) != f.arity:
            raise ArityError(f"Map of arity {f.arity} applied to a block of {len(block)} letters")
        sign_exponent += f.degree * passed
        passed += sum(b.degree for b in block)
        value = f.on_basis(block)
        if value.is_zero():
            return {}
        outputs.append(list(value.items()))
    sign = parity_sign(sign_exponent)
    result: TensorTerms = {}
    for combo in itertools.product(*outputs):
        coefficient = Fraction(sign)
        for _, c in combo:
            coefficient *= c
        key = tuple(b for b, _ in combo)
        result[key] = result.get(key, Fraction(0)) + coefficient
    return {k: c for k, c in result.items() if c != 0}


def transpose(f: MultiMap) -> MultiMap:
    """
    The transpose ``f*: W* -> V*`` of a linear map ``f: V -> W``, with (f*λ)(v) = (-1)^{|f||λ|} λ(fv).

    Composition rule: ``transpose(f.compose(g)) == (-1)^{|f||g|} transpose(g).compose(transpose(f))``.
    """
    if f.arity != 1:
        raise ArityError("Only linear maps have transposes here")
    source_dual, target_dual = f.target.dual(), f.source.dual()
    acc: Dict[EntryKey, Dict[Basis, Fraction]] = {}
    for (a,), value in f.entries.items():
        a_dual = Basis(target_dual, -a.degree, a.index)
        for b, c in value.items():
            b_dual = Basis(source_dual, -b.degree, b.index)
            sign = parity_sign(f.degree * b.degree)
            slot = acc.setdefault((b_dual,), {})
            slot[a_dual] = slot.get(a_dual, Fraction(0)) + sign * c
    return MultiMap(1, f.degree, source_dual, target_dual, {k: Vector(v) for k, v in acc.items()})
