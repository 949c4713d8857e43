from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class FactorSpec(BaseModel):
    """One factor of a space-definition file; unknown kinds and keys are rejected."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    kind: Literal["sphere", "hyperbolic2", "hyperbolic", "sl_so", "euclidean"]
    n: Optional[int] = None
    r: Optional[int] = None
    lam: Optional[float] = Field(default=None, alias="lambda")

    @model_validator(mode="after")
    def check_parameter(self) -> "FactorSpec":
        if self.kind == "euclidean":
            if self.r is None or self.n is not None:
                raise ValueError("euclidean factors take 'r' (and no 'n')")
        elif self.kind == "hyperbolic2":
            if self.n not in (None, 2) or self.r is not None:
                raise ValueError("hyperbolic2 takes no parameter")
        elif self.n is None or self.r is not None:
            raise ValueError(f"{self.kind} factors take 'n'")
        return self

    @property
    def param(self) -> Optional[int]:
        if self.kind == "euclidean":
            return self.r
        if self.kind == "hyperbolic2":
            return None
        return self.n


class IsometrySpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    matrix: List[List[float]]

    @field_validator("matrix")
    @classmethod
    def check_square(cls, matrix: List[List[float]]) -> List[List[float]]:
        if not matrix or any(len(row) != len(matrix) for row in matrix):
            raise ValueError("isometry matrix must be square and non-empty")
        return matrix


class SpaceDefinition(BaseModel):
    """
    {"factors": [{"kind": "sphere", "n": 2, "lambda": -0.5}, {"kind": "euclidean", "r": 1}],
     "isometries": [{"name": "antipodal", "matrix": [[-1, 0, 0], ...]}]}
    """

    model_config = ConfigDict(extra="forbid")

    factors: List[FactorSpec] = Field(min_length=1)
    isometries: List[IsometrySpec] = []
