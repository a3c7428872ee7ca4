from fractions import Fraction
from pydantic import BaseModel, Field, field_validator
from typing import Dict, List, Optional, Union

from .errors import ParseError


def parse_fraction(text: Union[str, int]) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Not an exact fraction: {text!r} ({e})")


class PosetFile(BaseModel):
    elements: List[str] = Field(..., description="Element labels in declaration order")
    covers: List[List[str]] = Field(default_factory=list, description="Cover pairs [a, b] meaning a is below b")
    subset: Optional[List[str]] = Field(default=None, description="Optional subset D examined by the density suite")

    @field_validator("elements", mode="before")
    @classmethod
    def _labels_as_text(cls, value):
        return [str(v) for v in value]

    @field_validator("covers", mode="before")
    @classmethod
    def _pairs_as_text(cls, value):
        pairs = []
        for pair in value:
            if len(pair) != 2:
                raise ValueError(f"cover entries must be pairs, got {pair!r}")
            pairs.append([str(pair[0]), str(pair[1])])
        return pairs


class UtilityFunction(BaseModel):
    name: str
    values: Dict[str, str] = Field(..., description="Element label to exact fraction 'p/q'")


class MultiUtilityFile(BaseModel):
    functions: List[UtilityFunction] = Field(default_factory=list)


class ClauseResult(BaseModel):
    property: str
    holds: Optional[bool] = Field(default=None, description="None when the clause was skipped")
    witness: Optional[List[str]] = Field(default=None, description="Counter-witness labels on failure")
    subset: Optional[List[str]] = Field(default=None, description="Checked subset for positive density flags")
    note: Optional[str] = None
    degenerate: bool = Field(default=False, description="Clause is trivially true at finite scale")
    theorem: bool = Field(default=True, description="Clause is backed by a theorem, so failure is a defect")


class Report(BaseModel):
    subject: str
    suite: str
    clauses: List[ClauseResult] = Field(default_factory=list)

    @property
    def failures(self) -> List[ClauseResult]:
        return [c for c in self.clauses if c.theorem and c.holds is False]

    @property
    def ok(self) -> bool:
        return not self.failures

    def clause(self, name: str) -> ClauseResult:
        for c in self.clauses:
            if c.property == name:
                return c
        raise KeyError(name)


class SuiteResult(BaseModel):
    reports: List[Report] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)
