"""Residual reports returned by every identity checker."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from halgebra.graded import Basis, Vector

logger = logging.getLogger("halgebra.reports")

ResidualKey = Tuple[Basis, ...]


def format_key(key: Tuple[object, ...]) -> str:
    return "(" + ", ".join(repr(k) for k in key) + ")"


@dataclass
class IdentityReport:
    """
    Residuals of a family of identities, evaluated on basis inputs.

    Attributes
    ----------
    name : str
        What was checked, e.g. ``"leibniz-infinity"``.
    families : Dict[str, Dict[ResidualKey, Vector]]
        Nonzero residuals per identity family, keyed by the basis input tuple.
    checked : Dict[str, int]
        Number of evaluated inputs per family, including the passing ones.
    notes : List[str]
        Free-form remarks such as warnings about a lowered identity bound.
    convention : str
        Sign convention the residuals were computed in.
    """

    name: str
    families: Dict[str, Dict[ResidualKey, Vector]] = field(default_factory=dict)
    checked: Dict[str, int] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    convention: str = "homological"

    @property
    def passed(self) -> bool:
        return all(not residuals for residuals in self.families.values())

    def record(self, family: str, key: ResidualKey, residual: Vector) -> None:
        """Count one evaluation and keep the residual if it is nonzero."""
        self.checked[family] = self.checked.get(family, 0) + 1
        bucket = self.families.setdefault(family, {})
        if not residual.is_zero():
            bucket[key] = residual
            logger.debug(f"{self.name}: {family} fails at {format_key(key)} with residual {residual!r}")

    def touch(self, family: str) -> None:
        """Register a family even if no input was evaluated for it."""
        self.families.setdefault(family, {})
        self.checked.setdefault(family, 0)

    def family_passed(self, family: str) -> bool:
        return not self.families.get(family)

    def residual(self, family: str, key: ResidualKey) -> Vector:
        return self.families.get(family, {}).get(key, Vector.zero())

    def failure_count(self) -> int:
        return sum(len(r) for r in self.families.values())

    def failures(self, limit: Optional[int] = None) -> Iterator[Tuple[str, ResidualKey, Vector]]:
        """Iterate (family, inputs, residual), at most ``limit`` entries."""
        count = 0
        for family, residuals in self.families.items():
            for key, value in residuals.items():
                if limit is not None and count >= limit:
                    return
                count += 1
                yield family, key, value

    def merge(self, other: "IdentityReport", prefix: str = "") -> "IdentityReport":
        """Fold ``other`` into this report, optionally prefixing its family names."""
        for family, residuals in other.families.items():
            name = f"{prefix}{family}"
            self.families.setdefault(name, {}).update(residuals)
            self.checked[name] = self.checked.get(name, 0) + other.checked.get(family, 0)
        self.notes.extend(other.notes)
        return self

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failing = [f for f in self.families if not self.family_passed(f)]
        text = f"{self.name}: {status} ({len(self.families)} families, {sum(self.checked.values())} evaluations)"
        if failing:
            text += f"; failing: {', '.join(failing)}"
        return text

    def log_summary(self) -> None:
        logger.info(self.summary())
