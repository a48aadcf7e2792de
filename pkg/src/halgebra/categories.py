"""
Chain complexes of length three and the linear 2-categories they determine.

An m-cell is a tuple (v_0, ..., v_m) with v_i in V_i. Source drops the last entry, target
replaces (v_{m-1}, v_m) by v_{m-1} + d v_m, the identity appends a zero and composition
along a p-cell adds the tails.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

from halgebra.errors import ArityError, HomogeneityError, InvalidStructureError, SpaceMismatchError
from halgebra.graded import Basis, GradedSpace, MultiMap, Vector
from halgebra.reports import IdentityReport

logger = logging.getLogger("halgebra.categories")

Cell = Tuple[Vector, ...]


@dataclass(frozen=True)
class ChainComplex:
    """
    A chain complex V_0 <- V_1 <- V_2 stored as one graded space and a degree -1 differential.

    Raises
    ------
    InvalidStructureError
        If d ∘ d is not zero.
    """

    space: GradedSpace
    d: MultiMap

    def __post_init__(self) -> None:
        if any(k not in (0, 1, 2) for k in self.space.degrees()):
            raise HomogeneityError(f"Chain complexes here live in degrees 0..2, got {self.space.degrees()}")
        if self.d.arity != 1 or self.d.degree != -1 or self.d.source != self.space or self.d.target != self.space:
            raise SpaceMismatchError("The differential must be a degree -1 linear operator on the space")
        if not self.d.compose(self.d).is_zero():
            raise InvalidStructureError("d ∘ d is not zero")


def _check_cell(cell: Cell) -> None:
    for i, v in enumerate(cell):
        for b in v:
            if b.degree != i:
                raise HomogeneityError(f"Entry {i} of a cell must lie in degree {i}, found {b!r}")


def _cells_equal(a: Cell, b: Cell) -> bool:
    return len(a) == len(b) and all(x == y for x, y in zip(a, b, strict=True))


def cell_difference(a: Cell, b: Cell) -> Vector:
    """Flatten a - b into one vector; entries of a cell live in distinct degrees so nothing is lost."""
    if len(a) != len(b):
        raise ArityError(f"Cells of levels {len(a) - 1} and {len(b) - 1} cannot be compared")
    return Vector.sum(x - y for x, y in zip(a, b, strict=True))


class Linear2Category:
    """
    The linear 2-category of a three-term chain complex.

    Parameters
    ----------
    complex_ : ChainComplex
        The underlying chain complex.

    Examples
    --------
    >>> V = GradedSpace("V", {0: 1, 1: 1}, labels={0: ["x"], 1: ["f"]})
    >>> d = MultiMap.from_entries(1, -1, V, V, [((V["f"],), V["x"], 1)])
    >>> cat = Linear2Category(ChainComplex(V, d))
    >>> cat.target((V.vector("x"), V.vector("f")))
    ((2)*x,)
    """

    def __init__(self, complex_: ChainComplex) -> None:
        self.complex = complex_
        self.space = complex_.space
        self.d = complex_.d

    def level_basis(self, m: int) -> List[Basis]:
        """Basis of L_m = V_0 ⊕ ... ⊕ V_m."""
        return [b for k in range(m + 1) for b in self.space.basis(k)]

    def cell(self, *components: Vector) -> Cell:
        cell = tuple(components)
        _check_cell(cell)
        return cell

    def basis_cell(self, b: Basis, m: int) -> Cell:
        """The m-cell with b in slot ``b.degree`` and zeros elsewhere."""
        if b.degree > m:
            raise ArityError(f"{b!r} does not fit in an {m}-cell")
        return tuple(Vector.basis(b) if i == b.degree else Vector.zero() for i in range(m + 1))

    def source(self, cell: Cell) -> Cell:
        if len(cell) < 2:
            raise ArityError("Objects have no source")
        return cell[:-1]

    def target(self, cell: Cell) -> Cell:
        if len(cell) < 2:
            raise ArityError("Objects have no target")
        return (*cell[:-2], cell[-2] + self.d(cell[-1]))

    def identity(self, cell: Cell) -> Cell:
        return (*cell, Vector.zero())

    def source_at(self, cell: Cell, p: int) -> Cell:
        """Iterated source down to a p-cell."""
        while len(cell) > p + 1:
            cell = self.source(cell)
        return cell

    def target_at(self, cell: Cell, p: int) -> Cell:
        """Iterated target down to a p-cell."""
        while len(cell) > p + 1:
            cell = self.target(cell)
        return cell

    def identity_at(self, cell: Cell, m: int) -> Cell:
        """Iterated identity up to an m-cell."""
        while len(cell) < m + 1:
            cell = self.identity(cell)
        return cell

    def composable(self, a: Cell, b: Cell, p: int) -> bool:
        return _cells_equal(self.target_at(a, p), self.source_at(b, p))

    def compose(self, a: Cell, b: Cell, p: int) -> Cell:
        """
        a followed by b along p-cells: (a_0, ..., a_p, a_{p+1} + b_{p+1}, ..., a_m + b_m).

        Raises
        ------
        SpaceMismatchError
            If the p-target of a is not the p-source of b.
        """
        if len(a) != len(b) or p >= len(a) - 1:
            raise ArityError(f"Cannot compose {len(a) - 1}-cell and {len(b) - 1}-cell along {p}-cells")
        if not self.composable(a, b, p):
            raise SpaceMismatchError(f"Cells are not composable along {p}-cells")
        return (*a[: p + 1], *(x + y for x, y in zip(a[p + 1 :], b[p + 1 :], strict=True)))


def chain_to_2cat(complex_: ChainComplex) -> Linear2Category:
    return Linear2Category(complex_)


def linear_2cat_to_chain(cat: Linear2Category) -> ChainComplex:
    """
    Recover the chain complex: V_m is the kernel of the source map on m-cells and d is read off the target.
    """
    entries: Dict[Tuple[Basis, ...], Vector] = {}
    for m in (1, 2):
        for b in cat.space.basis(m):
            cell = cat.basis_cell(b, m)
            image = cat.target(cell)[-1] - cell[-2]
            if not image.is_zero():
                entries[(b,)] = image
    d = MultiMap(1, -1, cat.space, cat.space, entries)
    logger.debug(f"Recovered a differential with {len(entries)} nonzero columns")
    return ChainComplex(cat.space, d)


def _parameter_vectors(space: GradedSpace, degrees: Sequence[int]) -> Iterator[Tuple[Vector, ...]]:
    """One tuple per basis letter of the listed slots, all other slots zero."""
    for slot, degree in enumerate(degrees):
        for b in space.basis(degree):
            yield tuple(Vector.basis(b) if i == slot else Vector.zero() for i in range(len(degrees)))


def check_linear_2category(cat: Linear2Category) -> IdentityReport:
    """
    Check the linear 2-category axioms on basis cells.

    Every axiom is linear in the free parameters of the cells involved, so one basis letter
    per parameter slot suffices. Families: ``globular``, ``composite-ends``, ``units``,
    ``associativity``, ``interchange`` and ``identity-composite``.
    """
    report = IdentityReport(name="linear-2-category")
    for family in ("globular", "composite-ends", "units", "associativity", "interchange", "identity-composite"):
        report.touch(family)

    for b in cat.level_basis(2):
        cell = cat.basis_cell(b, 2)
        report.record("globular", (b,), cell_difference(cat.source(cat.source(cell)), cat.source(cat.target(cell))))
        report.record("globular", (b,), cell_difference(cat.target(cat.source(cell)), cat.target(cat.target(cell))))

    for m in (1, 2):
        for p in range(m):
            # a is free; b shares a's p-target and has free tail slots p+1..m
            for params in _parameter_vectors(cat.space, [*range(m + 1), *range(p + 1, m + 1)]):
                a = params[: m + 1]
                tail_b = params[m + 1 :]
                b = (*cat.target_at(a, p), *tail_b)
                key = tuple(basis for v in params for basis in v)
                ab = cat.compose(a, b, p)
                report.record("composite-ends", key, cell_difference(cat.source_at(ab, p), cat.source_at(a, p)))
                report.record("composite-ends", key, cell_difference(cat.target_at(ab, p), cat.target_at(b, p)))
                left = cat.compose(cat.identity_at(cat.source_at(a, p), m), a, p)
                right = cat.compose(a, cat.identity_at(cat.target_at(a, p), m), p)
                report.record("units", key, cell_difference(left, a))
                report.record("units", key, cell_difference(right, a))
                # a third cell after b, with its own free tail
                for tail_c in _parameter_vectors(cat.space, list(range(p + 1, m + 1))):
                    c = (*cat.target_at(b, p), *tail_c)
                    lhs = cat.compose(cat.compose(a, b, p), c, p)
                    rhs = cat.compose(a, cat.compose(b, c, p), p)
                    report.record("associativity", key + tuple(x for v in tail_c for x in v), cell_difference(lhs, rhs))

    # 1-cells x --f--> y --g--> z; identity of a composite is the composite of identities
    for params in _parameter_vectors(cat.space, [0, 1, 1]):
        x, f, g = params
        a = (x, f)
        b = (*cat.target(a), g)
        key = tuple(basis for v in params for basis in v)
        lhs = cat.identity(cat.compose(a, b, 0))
        rhs = cat.compose(cat.identity(a), cat.identity(b), 0)
        report.record("identity-composite", key, cell_difference(lhs, rhs))

    # 2-cells α: f => f', β: f' => f'' over x -> y, and γ, δ likewise over y -> z
    for params in _parameter_vectors(cat.space, [0, 1, 2, 2, 1, 2, 2]):
        x, f, alpha, beta, g, gamma, delta = params
        a = (x, f, alpha)
        b = (*cat.target(a), beta)
        y = cat.target_at(a, 0)[0]
        c = (y, g, gamma)
        d = (*cat.target(c), delta)
        key = tuple(basis for v in params for basis in v)
        lhs = cat.compose(cat.compose(a, b, 1), cat.compose(c, d, 1), 0)
        rhs = cat.compose(cat.compose(a, c, 0), cat.compose(b, d, 0), 1)
        report.record("interchange", key, cell_difference(lhs, rhs))

    report.log_summary()
    return report

