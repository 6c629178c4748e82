"""SFT input schema.

Accepted forms:
- {"alphabet": ["0", "1"], "matrix": [[1, 1], [1, 0]]}
- {"alphabet": ["0", "1"], "forbidden": ["11"]}
- {"edges": [[0, 0], [0, 1], [1, 0]]}
"""
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator


class SftSpec(BaseModel):
    """Exactly one of matrix, forbidden or edges."""

    name: Optional[str] = Field(None, description="Label used in reports")
    alphabet: List[str] = Field(default_factory=list, description="Ordered symbol labels")
    matrix: Optional[List[List[int]]] = Field(None, description="0/1 adjacency matrix")
    forbidden: Optional[List[str]] = Field(None, description="Forbidden blocks")
    edges: Optional[List[Tuple[int, int]]] = Field(None, description="Directed edges between symbol indices")

    @model_validator(mode="after")
    def check_single_definition(self):
        given = [field for field in ("matrix", "forbidden", "edges") if getattr(self, field) is not None]
        if len(given) != 1:
            raise ValueError(f"give exactly one of matrix, forbidden, edges (got {given or 'none'})")
        if self.forbidden is not None and not self.alphabet:
            raise ValueError("forbidden-word SFTs need an alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet labels must be distinct")
        return self
