"""Generator spec schema.

Examples:
- {"kind": "substitution", "images": {"0": "01", "1": "0"}, "seed": "0", "length": 13}
- {"kind": "mechanical", "cf": [0, 2, 1, 1, 1, 1, 1], "variant": "lower", "length": 10}
- {"kind": "characteristic", "cf": [0, 2, 1, 1, 1, 1, 1, 1, 1, 1], "length": 18}
- {"kind": "named", "name": "periodic", "block": "01", "length": 5}
"""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class GeneratorSpec(BaseModel):
    kind: Literal["substitution", "mechanical", "characteristic", "named"]
    length: int = Field(..., ge=1, description="Prefix length")

    # substitution
    images: Optional[Dict[str, str]] = None
    seed: Optional[str] = None

    # mechanical / characteristic
    alpha: Optional[float] = Field(None, ge=0.0, le=1.0)
    cf: Optional[List[int]] = None
    beta: float = Field(0.0, ge=0.0, le=1.0)
    variant: Literal["lower", "upper"] = "lower"

    # named
    name: Optional[str] = None
    block: Optional[str] = None
    order: int = Field(4, ge=1, description="de Bruijn order")

    @model_validator(mode="after")
    def check_kind_fields(self):
        if self.kind == "substitution" and (not self.images or self.seed is None):
            raise ValueError("substitution generators need images and seed")
        if self.kind in ("mechanical", "characteristic") and (self.alpha is None) == (self.cf is None):
            raise ValueError(f"{self.kind} generators need exactly one of alpha or cf")
        if self.kind == "named" and not self.name:
            raise ValueError("named generators need a name")
        return self
