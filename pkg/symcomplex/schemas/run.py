"""Run spec: what a CLI invocation asks for."""
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class InputSource(BaseModel):
    """Exactly one of a named generator, a sequence file or an inline word."""

    name: Optional[str] = None
    length: Optional[int] = Field(None, ge=1)
    block: Optional[str] = None
    file: Optional[str] = None
    word: Optional[str] = None

    @model_validator(mode="after")
    def check_single_source(self):
        given = [field for field in ("name", "file", "word") if getattr(self, field)]
        if len(given) != 1:
            raise ValueError(f"give exactly one input source (name, file, word); got {given or 'none'}")
        if self.name and self.length is None:
            raise ValueError("named inputs need a length")
        return self


class RunSpec(BaseModel):
    command: str
    source: Optional[InputSource] = None
    measures: List[str] = Field(default_factory=list)
    parameters: Dict[str, Any] = Field(default_factory=dict)
    output_format: Literal["csv", "json"] = "json"
    out: Optional[str] = None
