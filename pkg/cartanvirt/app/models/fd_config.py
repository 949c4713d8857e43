from pydantic import BaseModel, ConfigDict, Field


class FDConfig(BaseModel):
    """Sampling, step sizes and tolerances shared by every check."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    step: float = Field(1e-4, ge=1e-8, le=1e-1, description="Central-difference step h")
    richardson: bool = True
    samples: int = Field(100, ge=1)
    seed: int = 0
    tol_algebraic: float = Field(1e-9, gt=0)
    tol_fd: float = Field(1e-5, gt=0)
    # Both steps of nested derivatives (curvature oracles, classical II)
    second_step: float = Field(1e-3, ge=1e-6, le=1e-1)
    # Coarse step of the order-2 convergence check
    convergence_step: float = Field(1e-2, ge=1e-4, le=1e-1)
