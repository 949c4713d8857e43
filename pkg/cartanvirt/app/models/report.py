import math
from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.errors import CartanVirtError
from ..core.serialization import dumps_stable

SPACE_SEPARATOR = " + "


class CheckRecord(BaseModel):
    """One identity, checked over `samples` probes."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str
    anchor: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool = Field(alias="pass")

    @classmethod
    def judge(cls, name: str, anchor: str, samples: int, max_residual: float, tolerance: float) -> "CheckRecord":
        residual = float(max_residual)
        return cls(name=name, anchor=anchor, samples=samples, max_residual=residual,
                   tolerance=tolerance, passed=not math.isnan(residual) and residual <= tolerance)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }

    def sort_key(self):
        return (self.name, self.anchor, self.samples, repr(self.max_residual), repr(self.tolerance), self.passed)


class VerificationReport(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    space: str
    config: Dict[str, Any]
    checks: List[CheckRecord]
    passed: bool = Field(default=True, alias="pass")

    @model_validator(mode="before")
    @classmethod
    def derive_overall(cls, data: Any) -> Any:
        # Overall pass is always recomputed from the records
        if isinstance(data, dict):
            data = dict(data)
            records = data.get("checks", [])
            data.pop("pass", None)
            data["passed"] = all(
                (r.passed if isinstance(r, CheckRecord) else bool(r.get("pass", r.get("passed", False))))
                for r in records
            )
        return data

    @property
    def components(self) -> List[str]:
        return self.space.split(SPACE_SEPARATOR)

    def qualified(self) -> List[CheckRecord]:
        """Records named 'space/name'; names that already carry a space are kept."""
        return [r if "/" in r.name else r.model_copy(update={"name": f"{self.space}/{r.name}"})
                for r in self.checks]

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        """
        Concatenate records under space-qualified names and re-derive the
        overall verdict. Associative and commutative: records are sorted and
        the space descriptor lists the sorted components.
        """
        if self.config != other.config:
            raise CartanVirtError("Cannot merge reports produced with different configurations")
        records = sorted(self.qualified() + other.qualified(), key=CheckRecord.sort_key)
        space = SPACE_SEPARATOR.join(sorted(self.components + other.components))
        return VerificationReport(space=space, config=dict(self.config), checks=records)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "space": self.space,
            "config": dict(self.config),
            "checks": [r.to_dict() for r in self.checks],
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return dumps_stable(self.to_dict())
