"""
Structure files and reports: the JSON format read and written by the ``halg`` command.

A structure file declares graded spaces, sparse multilinear maps and the roles those maps
play (brackets of a structure, components of a morphism, a homotopy parameter, the bracket and
actions of a Leibniz algebra, a Maurer-Cartan element on a simplex). Basis letters are
addressed as ``[space, degree, index]`` triples and rationals are ``"p/q"`` strings, so files
survive a round trip exactly. :func:`dump_structure_file` writes a canonical form: sorted keys,
sorted entries and reduced fractions.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from halgebra.convolution import ConvElement, ConvolutionAlgebra
from halgebra.errors import HalgebraError, SchemaError
from halgebra.graded import Basis, GradedSpace, MultiMap, Vector, format_scalar, to_scalar
from halgebra.infinity import Flavor, InftyMorphism, InftyStructure
from halgebra.loday import Bimodule, LeibnizAlgebra, LodayCochain, Representation
from halgebra.reports import IdentityReport, format_key
from halgebra.simplex import SimplexTensor
from halgebra.two_term import TwoTermHomotopy, TwoTermLeibniz, TwoTermMorphism

logger = logging.getLogger("halgebra.schema")

FORMAT = "halgebra/1"
CONVENTION = "homological"

Address = Tuple[str, int, int]


def _rational(value: Union[str, int]) -> str:
    try:
        return format_scalar(to_scalar(value))
    except HalgebraError as e:
        raise ValueError(str(e)) from e


class SpaceModel(BaseModel):
    """
    A graded space, either given by dimensions or as a shift of another declared space.

    Attributes
    ----
    dims : Dict[int, int]
        Dimension per degree.
    labels : Dict[int, List[str]]
        Basis labels per degree.
    shift_of : Optional[str]
        Name of the base space when this space is its ``shift``-fold suspension.
    shift : int
        Number of suspensions.
    """

    dims: Dict[int, int] = Field(default_factory=dict)
    labels: Dict[int, List[str]] = Field(default_factory=dict)
    shift_of: Optional[str] = None
    shift: int = 0


class EntryModel(BaseModel):
    """One structure constant: inputs -> coefficient * output."""

    inputs: List[Address]
    output: Address
    coefficient: str

    @field_validator("coefficient", mode="before")
    @classmethod
    def _exact(cls, value: Union[str, int]) -> str:
        return _rational(value)


class MapModel(BaseModel):
    """A sparse homogeneous multilinear map between declared spaces."""

    arity: int = Field(ge=0)
    degree: int
    source: str
    target: str
    entries: List[EntryModel] = Field(default_factory=list)


class StructureRole(BaseModel):
    """Brackets l_i of a Leibniz∞ or Lie∞ structure, keyed by arity."""

    flavor: Literal["leibniz", "lie"] = "leibniz"
    space: str
    brackets: Dict[int, str] = Field(default_factory=dict)


class MorphismRole(BaseModel):
    """Components φ_i between two declared structures."""

    source: str
    target: str
    components: Dict[int, str] = Field(default_factory=dict)


class HomotopyRole(BaseModel):
    """A 2-term homotopy θ_1 between two declared morphisms."""

    source: str
    target: str
    theta: str


class AlgebraRole(BaseModel):
    """
    A Leibniz algebra with optional coefficients.

    ``actions`` gives ρ(x) (or μ^l(x) for a bimodule) per basis label x; ``right_actions`` turns
    the coefficients into a bimodule.
    """

    space: str
    bracket: str
    module: Optional[str] = None
    actions: Dict[str, str] = Field(default_factory=dict)
    right_actions: Optional[Dict[str, str]] = None


class CochainRole(BaseModel):
    """A Loday cochain: a map V^{⊗p} -> W over a declared algebra."""

    algebra: str
    values: str


class TermModel(BaseModel):
    """One term c ⊗ x^e dx_I of a Maurer-Cartan element, c given by its components."""

    indices: List[int] = Field(default_factory=list)
    exponents: List[int]
    degree: int
    components: Dict[int, str]


class ElementRole(BaseModel):
    """A homogeneous element of Hom(Zin^c(sV), W) ⊗ Ω(Δⁿ)."""

    source: str
    target: str
    simplex: int = Field(ge=1, le=2)
    degree: int = -1
    terms: List[TermModel] = Field(default_factory=list)


class StructureFile(BaseModel):
    """
    The top-level structure file.

    Attributes
    ----
    format : str
        Format tag, ``halgebra/1``.
    convention : str
        Grading convention of all brackets, always ``homological``.
    spaces, maps : Dict
        Declared spaces and maps, by name.
    structures, morphisms, homotopies, algebras, cochains, elements : Dict
        Roles, by name.
    """

    format: str = FORMAT
    convention: str = CONVENTION
    spaces: Dict[str, SpaceModel] = Field(default_factory=dict)
    maps: Dict[str, MapModel] = Field(default_factory=dict)
    structures: Dict[str, StructureRole] = Field(default_factory=dict)
    morphisms: Dict[str, MorphismRole] = Field(default_factory=dict)
    homotopies: Dict[str, HomotopyRole] = Field(default_factory=dict)
    algebras: Dict[str, AlgebraRole] = Field(default_factory=dict)
    cochains: Dict[str, CochainRole] = Field(default_factory=dict)
    elements: Dict[str, ElementRole] = Field(default_factory=dict)

    @field_validator("convention")
    @classmethod
    def _homological(cls, value: str) -> str:
        if value != CONVENTION:
            raise ValueError(f"only the {CONVENTION} convention is supported, got {value!r}")
        return value


# ---------------------------------------------------------------------------
# Reading
# ---------------------------------------------------------------------------


def parse_structure_file(text: str) -> StructureFile:
    """
    Parse and validate a structure file.

    Raises
    ------
    SchemaError
        If the text is not JSON or does not match the schema.
    """
    try:
        return StructureFile.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise SchemaError(f"Not a JSON document: {e}") from e
    except ValidationError as e:
        raise SchemaError(f"Structure file does not match the schema: {e}") from e


def read_structure_file(path: Union[str, Path]) -> StructureFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SchemaError(f"Cannot read {path}: {e}") from e
    logger.debug(f"Read {len(text)} characters from {path}")
    return parse_structure_file(text)


class FileResolver:
    """
    Turns a :class:`StructureFile` into domain objects, resolving names lazily and caching them.

    Every lookup failure or inconsistency raises :class:`SchemaError`.
    """

    def __init__(self, model: StructureFile) -> None:
        self.model = model
        self._spaces: Dict[str, GradedSpace] = {}
        self._maps: Dict[str, MultiMap] = {}
        self._structures: Dict[str, InftyStructure] = {}

    def _lookup(self, table: str, name: str) -> object:
        entries = getattr(self.model, table)
        if name not in entries:
            raise SchemaError(f"Unknown entry '{name}' in {table}")
        return entries[name]

    def space(self, name: str, _seen: Tuple[str, ...] = ()) -> GradedSpace:
        cached = self._spaces.get(name)
        if cached is not None:
            return cached
        if name in _seen:
            raise SchemaError(f"Space '{name}' is defined in terms of itself")
        decl = self.model.spaces.get(name)
        if decl is None:
            raise SchemaError(f"Unknown space '{name}'")
        try:
            if decl.shift_of is not None:
                space = self.space(decl.shift_of, (*_seen, name)).shifted(decl.shift)
            else:
                labels = {d: names for d, names in decl.labels.items()} or None
                space = GradedSpace(name, decl.dims, labels)
        except HalgebraError as e:
            raise SchemaError(f"Invalid space '{name}': {e}") from e
        self._spaces[name] = space
        return space

    def _basis(self, address: Address) -> Basis:
        space_name, degree, index = address
        space = self.space(space_name)
        if not 0 <= index < space.dim(degree):
            raise SchemaError(f"No basis letter {list(address)}")
        return Basis(space, degree, index)

    def map(self, name: str) -> MultiMap:
        cached = self._maps.get(name)
        if cached is not None:
            return cached
        decl = self.model.maps.get(name)
        if decl is None:
            raise SchemaError(f"Unknown map '{name}'")
        source, target = self.space(decl.source), self.space(decl.target)
        try:
            triples = [
                (tuple(self._basis(a) for a in e.inputs), self._basis(e.output), e.coefficient) for e in decl.entries
            ]
            for inputs, output, _ in triples:
                if any(b.space != source for b in inputs) or output.space != target:
                    raise SchemaError(f"Map '{name}' has an entry outside {decl.source} -> {decl.target}")
            f = MultiMap.from_entries(decl.arity, decl.degree, source, target, triples)
        except SchemaError:
            raise
        except HalgebraError as e:
            raise SchemaError(f"Invalid map '{name}': {e}") from e
        self._maps[name] = f
        return f

    def structure(self, name: str) -> InftyStructure:
        cached = self._structures.get(name)
        if cached is not None:
            return cached
        decl = self.model.structures.get(name)
        if decl is None:
            raise SchemaError(f"Unknown structure '{name}'")
        try:
            s = InftyStructure(
                Flavor(decl.flavor), self.space(decl.space), {i: self.map(m) for i, m in decl.brackets.items()}
            )
        except SchemaError:
            raise
        except HalgebraError as e:
            raise SchemaError(f"Invalid structure '{name}': {e}") from e
        self._structures[name] = s
        return s

    def two_term(self, name: str) -> TwoTermLeibniz:
        try:
            return TwoTermLeibniz.from_infinity(self.structure(name))
        except SchemaError:
            raise
        except HalgebraError as e:
            raise SchemaError(f"Structure '{name}' is not a 2-term Leibniz∞ algebra: {e}") from e

    def morphism(self, name: str) -> InftyMorphism:
        decl = self.model.morphisms.get(name)
        if decl is None:
            raise SchemaError(f"Unknown morphism '{name}'")
        try:
            return InftyMorphism(
                self.structure(decl.source),
                self.structure(decl.target),
                {i: self.map(m) for i, m in decl.components.items()},
            )
        except SchemaError:
            raise
        except HalgebraError as e:
            raise SchemaError(f"Invalid morphism '{name}': {e}") from e

    def two_term_morphism(self, name: str) -> TwoTermMorphism:
        try:
            return TwoTermMorphism.from_infinity(self.morphism(name))
        except SchemaError:
            raise
        except HalgebraError as e:
            raise SchemaError(f"Morphism '{name}' is not a 2-term morphism: {e}") from e

    def homotopy(self, name: str) -> TwoTermHomotopy:
        decl = self.model.homotopies.get(name)
        if decl is None:
            raise SchemaError(f"Unknown homotopy '{name}'")
        try:
            return TwoTermHomotopy(
                self.two_term_morphism(decl.source), self.two_term_morphism(decl.target), self.map(decl.theta)
            )
        except SchemaError:
            raise
        except HalgebraError as e:
            raise SchemaError(f"Invalid homotopy '{name}': {e}") from e

    def leibniz_algebra(self, name: str) -> LeibnizAlgebra:
        decl = self._algebra_role(name)
        try:
            return LeibnizAlgebra(self.space(decl.space), self.map(decl.bracket))
        except SchemaError:
            raise
        except HalgebraError as e:
            raise SchemaError(f"Invalid Leibniz algebra '{name}': {e}") from e

    def _algebra_role(self, name: str) -> AlgebraRole:
        decl = self.model.algebras.get(name)
        if decl is None:
            raise SchemaError(f"Unknown algebra '{name}'")
        return decl

    def _actions(self, algebra: LeibnizAlgebra, actions: Dict[str, str]) -> Dict[Basis, MultiMap]:
        try:
            return {algebra.space[label]: self.map(m) for label, m in actions.items()}
        except KeyError as e:
            raise SchemaError(f"Unknown basis label in actions: {e}") from e

    def coefficients(self, name: str) -> Union[Representation, Bimodule]:
        """The representation (or bimodule, when right actions are given) of an algebra role."""
        decl = self._algebra_role(name)
        algebra = self.leibniz_algebra(name)
        try:
            if decl.module is None:
                return Representation.trivial(algebra)
            module = self.space(decl.module)
            left = self._actions(algebra, decl.actions)
            if decl.right_actions is not None:
                return Bimodule(algebra, module, left, self._actions(algebra, decl.right_actions))
            return Representation(algebra, module, left)
        except SchemaError:
            raise
        except HalgebraError as e:
            raise SchemaError(f"Invalid coefficients for '{name}': {e}") from e

    def cochain(self, name: str) -> LodayCochain:
        decl = self.model.cochains.get(name)
        if decl is None:
            raise SchemaError(f"Unknown cochain '{name}'")
        algebra = self.leibniz_algebra(decl.algebra)
        values = self.map(decl.values)
        try:
            return LodayCochain(algebra, values.target, values)
        except HalgebraError as e:
            raise SchemaError(f"Invalid cochain '{name}': {e}") from e

    def element(self, name: str) -> SimplexTensor:
        decl = self.model.elements.get(name)
        if decl is None:
            raise SchemaError(f"Unknown element '{name}'")
        try:
            algebra = ConvolutionAlgebra(self.structure(decl.source), self.structure(decl.target))
            terms = {}
            for term in decl.terms:
                c = ConvElement(algebra, term.degree, {p: self.map(m) for p, m in term.components.items()})
                terms[(tuple(term.indices), tuple(term.exponents))] = c
            return SimplexTensor(algebra, decl.simplex, decl.degree, terms)
        except SchemaError:
            raise
        except HalgebraError as e:
            raise SchemaError(f"Invalid element '{name}': {e}") from e


# ---------------------------------------------------------------------------
# Writing
# ---------------------------------------------------------------------------


def _address(b: Basis) -> Address:
    return (b.space.name, b.degree, b.index)


class FileBuilder:
    """
    Accumulates domain objects into a :class:`StructureFile`, naming spaces after themselves.

    Examples
    --------
    >>> V = GradedSpace("V", {0: 1}, labels={0: ["x"]})
    >>> builder = FileBuilder()
    >>> builder.add_map("id", MultiMap.identity(V))
    'id'
    >>> sorted(builder.build().spaces)
    ['V']
    """

    def __init__(self) -> None:
        self.model = StructureFile()

    def add_space(self, space: GradedSpace) -> str:
        name = space.name
        if name in self.model.spaces:
            return name
        if space.shift != 0:
            base = space.shifted(-space.shift)
            self.add_space(base)
            self.model.spaces[name] = SpaceModel(shift_of=base.name, shift=space.shift)
        else:
            self.model.spaces[name] = SpaceModel(
                dims=space.dims, labels={d: list(names) for d, names in space.labels.items()}
            )
        return name

    def add_map(self, name: str, f: MultiMap) -> str:
        source, target = self.add_space(f.source), self.add_space(f.target)
        entries = [
            EntryModel(inputs=[_address(b) for b in key], output=_address(out), coefficient=format_scalar(c))
            for key, out, c in f.triples()
        ]
        entries.sort(key=lambda e: (e.inputs, e.output))
        self.model.maps[name] = MapModel(arity=f.arity, degree=f.degree, source=source, target=target, entries=entries)
        return name

    def add_structure(self, name: str, s: InftyStructure) -> str:
        brackets = {i: self.add_map(f"{name}.l{i}", f) for i, f in sorted(s.brackets.items()) if not f.is_zero()}
        self.model.structures[name] = StructureRole(flavor=s.flavor.value, space=self.add_space(s.space), brackets=brackets)
        return name

    def add_morphism(self, name: str, m: InftyMorphism, source: str = "source", target: str = "target") -> str:
        self.add_structure(source, m.source)
        self.add_structure(target, m.target)
        components = {i: self.add_map(f"{name}.phi{i}", f) for i, f in sorted(m.components.items()) if not f.is_zero()}
        self.model.morphisms[name] = MorphismRole(source=source, target=target, components=components)
        return name

    def add_homotopy(self, name: str, h: TwoTermHomotopy) -> str:
        self.add_morphism(f"{name}.from", h.source.to_infinity())
        self.add_morphism(f"{name}.to", h.target.to_infinity())
        theta = self.add_map(f"{name}.theta", h.theta)
        self.model.homotopies[name] = HomotopyRole(source=f"{name}.from", target=f"{name}.to", theta=theta)
        return name

    def add_element(self, name: str, alpha: SimplexTensor) -> str:
        algebra = alpha.algebra
        if not isinstance(algebra, ConvolutionAlgebra):
            raise SchemaError("Only convolution-algebra elements are written to files")
        self.add_structure("source", algebra.source)
        self.add_structure("target", algebra.target)
        terms = []
        for k, ((indices, exponents), c) in enumerate(sorted(alpha.items(), key=lambda item: item[0])):
            components = {p: self.add_map(f"{name}.t{k}.a{p}", f) for p, f in sorted(c.components.items())}
            terms.append(TermModel(indices=list(indices), exponents=list(exponents), degree=c.degree, components=components))
        self.model.elements[name] = ElementRole(
            source="source", target="target", simplex=alpha.n, degree=alpha.degree, terms=terms
        )
        return name

    def add_algebra(self, name: str, alg: LeibnizAlgebra, coeff: Optional[Union[Representation, Bimodule]] = None) -> str:
        role = AlgebraRole(space=self.add_space(alg.space), bracket=self.add_map(f"{name}.bracket", alg.bracket_map))
        if isinstance(coeff, Representation) and coeff.actions:
            role.module = self.add_space(coeff.module)
            role.actions = {b.label(): self.add_map(f"{name}.rho.{b.label()}", op) for b, op in coeff.actions.items()}
        elif isinstance(coeff, Bimodule):
            role.module = self.add_space(coeff.module)
            role.actions = {b.label(): self.add_map(f"{name}.left.{b.label()}", op) for b, op in coeff.left_actions.items()}
            role.right_actions = {
                b.label(): self.add_map(f"{name}.right.{b.label()}", op) for b, op in coeff.right_actions.items()
            }
        self.model.algebras[name] = role
        return name

    def add_cochain(self, name: str, c: LodayCochain, algebra: str = "algebra") -> str:
        if algebra not in self.model.algebras:
            self.add_algebra(algebra, c.algebra)
        self.model.cochains[name] = CochainRole(algebra=algebra, values=self.add_map(f"{name}.values", c.values))
        return name

    def build(self) -> StructureFile:
        return self.model


def dump_structure_file(model: StructureFile) -> str:
    """Canonical JSON: sorted keys, two-space indent, UTF-8 text and a trailing newline."""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_structure_file(model: StructureFile, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_structure_file(model), encoding="utf-8")
    logger.info(f"Wrote structure file {path}")


def canonicalize(text: str) -> str:
    """Parse and re-dump a structure file; idempotent."""
    return dump_structure_file(parse_structure_file(text))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


class FamilyModel(BaseModel):
    """Outcome of one identity family."""

    passed: bool
    checked: int
    failures: int


class ResidualModel(BaseModel):
    """One failing evaluation: the basis tuple and the residual vector."""

    family: str
    key: str
    residual: Dict[str, str]


class Report(BaseModel):
    """
    Machine-readable outcome of a command.

    Attributes
    ----
    command : str
        The command line that produced the report, without options.
    convention : str
        Grading convention.
    passed : bool
        True when every family passed.
    families : Dict[str, FamilyModel]
        Per-family outcome.
    residuals : List[ResidualModel]
        The first failing evaluations, capped by the report limit.
    total_failures : int
        Number of failing evaluations in all.
    elapsed_seconds : float
        Wall-clock time of the command.
    notes : List[str]
        Truncation warnings and other remarks.
    """

    command: str
    convention: str = CONVENTION
    passed: bool = True
    families: Dict[str, FamilyModel] = Field(default_factory=dict)
    residuals: List[ResidualModel] = Field(default_factory=list)
    total_failures: int = 0
    elapsed_seconds: float = 0.0
    notes: List[str] = Field(default_factory=list)


def _render_vector(v: Vector) -> Dict[str, str]:
    return {b.label(): format_scalar(c) for b, c in sorted(v.items(), key=lambda item: (item[0].degree, item[0].index))}


def report_from_identities(
    command: str, reports: List[IdentityReport], elapsed: float, limit: int
) -> Report:
    """Fold identity reports into one :class:`Report`, keeping at most ``limit`` residual samples."""
    out = Report(command=command, elapsed_seconds=round(elapsed, 6))
    for report in reports:
        prefix = f"{report.name}:" if len(reports) > 1 else ""
        for family in sorted(report.checked):
            failures = report.families.get(family, {})
            out.families[f"{prefix}{family}"] = FamilyModel(
                passed=not failures, checked=report.checked[family], failures=len(failures)
            )
        out.notes.extend(report.notes)
        out.total_failures += report.failure_count()
        for family, key, vector in report.failures():
            if len(out.residuals) >= limit:
                break
            out.residuals.append(
                ResidualModel(family=f"{prefix}{family}", key=format_key(key), residual=_render_vector(vector))
            )
    out.passed = all(f.passed for f in out.families.values())
    return out


def dump_report(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
