"""
Pydantic schemas for circsep result records
One record per command, printed as a single JSON line with 17 significant digits
"""
import json
import math
from enum import Enum
from typing import Any, List, Optional

from pydantic import BaseModel, Field

from circsep.geom_core import Circle2, Line2
from circsep.inscribed import InscribedResult
from circsep.separability import SeparationKind, SeparationResult
from circsep.witness import Witness


class ResultKind(str, Enum):
    """Kinds of result record"""
    CIRCLE = "circle"
    LINE = "line"
    INFEASIBLE = "infeasible"
    NOT_SEPARABLE = "not_separable"
    POLYGONS_INTERSECT = "polygons_intersect"


class CircleRecord(BaseModel):
    center: List[float] = Field(..., min_length=2, max_length=2, description="Center (x, y)")
    radius: float

    @classmethod
    def of(cls, circle: Circle2) -> "CircleRecord":
        return cls(center=[circle.center.x, circle.center.y], radius=circle.radius)


class LineRecord(BaseModel):
    """a*x + b*y + c = 0 with the enclosed polygon on the negative side"""
    a: float
    b: float
    c: float

    @classmethod
    def of(cls, line: Line2) -> "LineRecord":
        return cls(a=line.a, b=line.b, c=line.c)


class LabeledPoint(BaseModel):
    label: str = Field(..., description="Polygon whose interior holds the point")
    x: float
    y: float


class WitnessRecord(BaseModel):
    circle: CircleRecord
    points: List[LabeledPoint]

    @classmethod
    def of(cls, witness: Witness) -> "WitnessRecord":
        return cls(circle=CircleRecord.of(witness.circle),
                   points=[LabeledPoint(label=l, x=p.x, y=p.y) for p, l in zip(witness.points, witness.labels)])


class ResultRecord(BaseModel):
    """Structured output of a separate or inscribe command"""
    kind: ResultKind
    direction: Optional[str] = Field(None, description="Which polygon the circle encloses")
    case: Optional[str] = Field(None, description="Query branch that produced the circle")
    circle: Optional[CircleRecord] = None
    line: Optional[LineRecord] = None
    witness: Optional[WitnessRecord] = None
    elapsed_us: Optional[float] = Field(None, description="Wall time in microseconds")

    def to_json(self) -> str:
        return _encode(self.model_dump(mode="json", exclude_none=True))


def _encode(value: Any) -> str:
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in value) + "]"
    if isinstance(value, float):
        return format(value, ".17g") if math.isfinite(value) else "null"
    return json.dumps(value)


def record_from_separation(result: SeparationResult, elapsed_us: Optional[float] = None) -> ResultRecord:
    direction = result.direction.value if result.direction is not None else None
    if result.kind == SeparationKind.POLYGONS_INTERSECT:
        return ResultRecord(kind=ResultKind.POLYGONS_INTERSECT, elapsed_us=elapsed_us)
    if result.kind == SeparationKind.NOT_SEPARABLE:
        witness = WitnessRecord.of(result.witness) if result.witness is not None else None
        return ResultRecord(kind=ResultKind.NOT_SEPARABLE, witness=witness, elapsed_us=elapsed_us)
    if result.circle.is_finite:
        return ResultRecord(kind=ResultKind.CIRCLE, direction=direction,
                            circle=CircleRecord.of(result.circle.circle), elapsed_us=elapsed_us)
    return ResultRecord(kind=ResultKind.LINE, direction=direction,
                        line=LineRecord.of(result.circle.line), elapsed_us=elapsed_us)


def record_from_inscribed(result: InscribedResult, elapsed_us: Optional[float] = None) -> ResultRecord:
    if not result.feasible:
        return ResultRecord(kind=ResultKind.INFEASIBLE, elapsed_us=elapsed_us)
    return ResultRecord(kind=ResultKind.CIRCLE, case=result.case.value,
                        circle=CircleRecord.of(result.circle), elapsed_us=elapsed_us)
