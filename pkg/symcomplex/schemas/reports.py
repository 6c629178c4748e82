"""Report schemas emitted by the CLI."""
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field


class ComplexityReport(BaseModel):
    """One measure evaluated over a range of n."""

    measure: str
    n_values: List[int]
    values: List[Optional[float]]
    metadata: Dict[str, Any] = Field(default_factory=dict, description="prefix_length, stable, window, ...")


class IntricacyResult(BaseModel):
    asc: float
    int_: float = Field(..., alias="int")
    n: Union[int, str] = Field(..., description="Horizon, or 'limit' for series values")
    weights: str = "uniform"
    method: str
    metadata: Dict[str, Any] = Field(default_factory=dict)

    model_config = {"populate_by_name": True}


class MarkovEvaluation(BaseModel):
    sft: str
    order: int
    parameters: Dict[str, float]
    h: float
    asc: float
    int_: float = Field(..., alias="int")
    marginal_entropy: float
    metadata: Dict[str, Any] = Field(default_factory=dict)

    model_config = {"populate_by_name": True}


class Maximum(BaseModel):
    parameters: Dict[str, float]
    value: float


class OptimizationReport(BaseModel):
    target: str
    family: str
    maxima: List[Maximum]
    metadata: Dict[str, Any] = Field(default_factory=dict)
