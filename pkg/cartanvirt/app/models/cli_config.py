from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class CliConfig(BaseModel):
    """Parsed command line; numeric overrides are checked again by FDConfig."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    command: Literal["list", "verify", "curvature", "uniqueness", "invariance"]
    space_spec: Optional[str] = None
    tol_algebraic: Optional[float] = None
    tol_fd: Optional[float] = None
    fd_step: Optional[float] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    output_format: Literal["json", "text"] = Field(default="text", alias="format")
    lambdas: List[float] = []
    gammas: List[str] = []
    verbose: bool = False
