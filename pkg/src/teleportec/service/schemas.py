"""Pydantic request/response models for the service API."""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class CodeSpec(BaseModel):
    """A code source: a library name, a random (n, k) draw, or file text."""

    kind: Literal["library", "random", "text"]
    name: Optional[str] = None
    n: Optional[int] = None
    k: Optional[int] = None
    text: Optional[str] = None
    label: Optional[str] = None

    @model_validator(mode="after")
    def _check_fields(self):
        if self.kind == "library" and not self.name:
            raise ValueError("library source needs a name")
        if self.kind == "random" and (self.n is None or self.k is None):
            raise ValueError("random source needs n and k")
        if self.kind == "text" and self.text is None:
            raise ValueError("text source needs the file contents")
        return self


class RangeSpec(BaseModel):
    """Inclusive start:stop:step grid axis."""

    start: float
    stop: float
    step: float = Field(gt=0)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.start, self.stop, self.step)


Axis = float | RangeSpec | None


def axis_value(axis: Axis):
    if isinstance(axis, RangeSpec):
        return axis.as_tuple()
    return axis


class CheckCodeRequest(BaseModel):
    code: CodeSpec
    seed: int = 0


class ErasureSummaryEntry(BaseModel):
    size: int
    correctable: int
    total: int


class CheckCodeResponse(BaseModel):
    code: str
    n: int
    l: int
    k: int
    rows: list[str]
    distance: Optional[int]
    distance_note: Optional[str]
    logical_x: Optional[str]
    logical_z: Optional[str]
    erasure_summary: list[ErasureSummaryEntry]


class SweepRequest(BaseModel):
    model: Literal["erasure", "depolarizing"]
    codes: list[CodeSpec]
    trials: int
    seed: int
    em: Axis = None
    eb: Axis = None
    dm: Axis = None
    db: Axis = None
    dp: Axis = None


class SweepRowModel(BaseModel):
    seed: int
    model: str
    code: str
    n: int
    param1: float
    param2: float
    param3: float
    trials: int
    failures: int
    rate: float
    ci95: float


class SweepResponse(BaseModel):
    rows: list[SweepRowModel]


class TeleportDemoRequest(BaseModel):
    code: CodeSpec
    seed: int
    model: Literal["erasure", "depolarizing"] = "erasure"
    em: float = 0.0
    eb: float = 0.0
    dm: float = 0.0
    db: float = 0.0
    dp: float = 0.0
    inject: Optional[str] = None
    dense: bool = False


class DenseVerdict(BaseModel):
    verdict: str
    syndrome: list[int]
    fidelity: float


class TeleportDemoResponse(BaseModel):
    code: str
    n: int
    model: str
    incoming: str
    erased: list[int]
    outcomes: list[str]
    correction_product: str
    inferred_syndrome: list[int]
    decoder_correction: Optional[str]
    status: str
    residual_class: str
    dense: Optional[DenseVerdict] = None


class CurveRequest(BaseModel):
    model: Literal["erasure", "depolarizing"]
    resolution: int = Field(ge=2)


class CurveResponse(BaseModel):
    columns: list[str]
    points: list[list[float]]


class ErrorDetail(BaseModel):
    kind: Literal["config", "parse", "validation", "guard"]
    message: str
