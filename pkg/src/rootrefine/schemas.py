"""Wire and file schemas: problem documents in, result records out.

The same pydantic models back the JSON problem file the CLI reads, the
request body of the HTTP service, and the JSON-lines records both emit.
Numbers travel as strings so no precision is lost in transport.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

Number = Union[str, int, float]


def _as_string(value: Number) -> str:
    if isinstance(value, str):
        return value
    return repr(value)


class DiscSpec(BaseModel):
    """One isolated disc: center (cx, cy), radius, certified isolation."""

    cx: str
    cy: str = "0"
    r: str
    isolation: float
    count: Optional[int] = Field(default=None, ge=0)
    multiplicity: Optional[int] = Field(default=None, ge=1)

    @field_validator("cx", "cy", "r", mode="before")
    @classmethod
    def _stringify(cls, v):
        return _as_string(v)


class ProblemSpec(BaseModel):
    """A problem document: polynomial, discs, target accuracy, mode."""

    coeffs: List[List[str]]
    discs: List[DiscSpec] = []
    eps_bits: int = Field(ge=1)
    mode: Literal["refine", "all", "factor", "oracle"]
    precision_bits: Optional[int] = Field(default=None, ge=2)

    @field_validator("coeffs", mode="before")
    @classmethod
    def _coerce_pairs(cls, v):
        if not isinstance(v, list):
            raise ValueError("coeffs must be a list of [re, im] pairs")
        out = []
        for i, item in enumerate(v):
            if isinstance(item, (str, int, float)):
                out.append([_as_string(item), "0"])
                continue
            if not isinstance(item, list) or not 1 <= len(item) <= 2:
                raise ValueError(f"coeffs[{i}] must be [re] or [re, im]")
            pair = [_as_string(x) for x in item]
            if len(pair) == 1:
                pair.append("0")
            out.append(pair)
        return out


class ResultRecord(BaseModel):
    """Per-disc outcome; root mode fills root/err_exp, factor mode fills
    factor coefficients, failures carry error text instead."""

    index: int
    root: Optional[List[str]] = None
    factor: Optional[List[List[str]]] = None
    err_exp: Optional[int] = None
    iters: Optional[int] = None
    q: Optional[int] = None
    ms: float = 0.0
    error: Optional[str] = None


class RunSummary(BaseModel):
    mode: str
    degree: int
    eps_bits: int
    lambda_bits: int
    n_ok: int
    n_failed: int
    total_ms: float


class SolveResponse(BaseModel):
    records: List[ResultRecord]
    summary: RunSummary
