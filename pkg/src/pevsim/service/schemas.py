"""Request/response models for the HTTP service.

The JSON shapes here are the package's wire contract; the CLI renders
them directly, so field names match the documented output schemas.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

OracleName = Literal["f1", "f2", "f3", "f4"]
SemanticsName = Literal["unitary", "projection"]
ModelName = Literal["coherent_flip", "incoherent_flip", "phase"]


class HealthResponse(BaseModel):
    status: str


class StepState(BaseModel):
    tau: int
    rho_re: list[list[float]]
    rho_im: list[list[float]]


class RunRequest(BaseModel):
    oracle: OracleName
    dump_steps: bool = False


class RunResponse(BaseModel):
    oracle: str
    steps: Optional[list[StepState]] = None
    outcome: int
    classification: str


class SweepRequest(BaseModel):
    alpha2_from: float = Field(ge=0.0, le=1.0)
    alpha2_to: float = Field(ge=0.0, le=1.0)
    steps: int = Field(ge=2)


class SweepRowOut(BaseModel):
    alpha2: float
    prob0: float
    prob1: float
    single_gate_err: float
    ratio: Optional[float] = None


class SweepResponse(BaseModel):
    rows: list[SweepRowOut]


class McRequest(BaseModel):
    oracle: OracleName = "f1"
    alpha2: float = Field(ge=0.0, le=1.0)
    semantics: SemanticsName
    model: ModelName = "coherent_flip"
    phase_angle: float = 0.0
    trials: int = Field(ge=1)
    seed: int


class McResponse(BaseModel):
    oracle: str
    semantics: str
    model: str
    trials: int
    seed: int
    empirical: dict[int, float]
    exact: dict[int, float]
    std_error: float
    within_four_sigma: bool


class VerifyRequest(BaseModel):
    only: Optional[str] = None


class CheckOut(BaseModel):
    name: str
    passed: bool
    max_deviation: float
    detail: str = ""


class VerifyResponse(BaseModel):
    passed: bool
    checks: list[CheckOut]


class CircuitRequest(BaseModel):
    text: str
    seed: int = 0


class CircuitResponse(BaseModel):
    steps: list[str]
    outcome: Optional[int] = None
    distribution: Optional[dict[int, float]] = None
