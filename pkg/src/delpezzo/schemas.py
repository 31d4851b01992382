"""Request/response models for the service and the CLI jobspec format.

All coordinates are exact integers, accepted either as JSON integers or as
decimal strings; floats are rejected so no request can silently lose
precision.  Big integers (witness coefficients) are serialized as strings.
"""

from __future__ import annotations

import re
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

_INT_RE = re.compile(r"^[+-]?\d+$")


def parse_exact_int(v) -> int:
    if isinstance(v, bool):
        raise ValueError("booleans are not integers")
    if isinstance(v, int):
        return v
    if isinstance(v, str) and _INT_RE.match(v.strip()):
        return int(v.strip())
    raise ValueError(f"expected an integer or integer string, got {v!r}")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _validate_coords(vals, n, what):
    if len(vals) != n:
        raise ValueError(f"{what} needs exactly {n} coordinates")
    return [parse_exact_int(v) for v in vals]


class ExteriorPointModel(_Strict):
    exterior: List[Union[int, str]]
    mult: int = Field(default=1, ge=1)

    @field_validator("exterior")
    @classmethod
    def _coords(cls, v):
        return _validate_coords(v, 3, "an exterior point")


class OnExceptionalModel(_Strict):
    onE: int = Field(ge=1, le=8)
    dir: List[Union[int, str]]
    mult: int = Field(default=1, ge=1)

    @field_validator("dir")
    @classmethod
    def _coords(cls, v):
        v = _validate_coords(v, 2, "a direction")
        if v == [0, 0]:
            raise ValueError("direction must be nonzero")
        return v


SurfacePointModel = Union[ExteriorPointModel, OnExceptionalModel]


class BundleModel(_Strict):
    d: int = Field(ge=1)
    mults: List[int]

    @field_validator("mults")
    @classmethod
    def _nonneg(cls, v):
        if any(m < 0 for m in v):
            raise ValueError("bundle multiplicities must be nonnegative")
        return v


class SurfaceModel(_Strict):
    """r base points: explicit integer coordinates, or sampled from a seed."""

    r: int = Field(ge=1, le=8)
    base_points: Optional[List[List[Union[int, str]]]] = None
    seed: Optional[int] = None

    @field_validator("base_points")
    @classmethod
    def _coords(cls, v):
        if v is None:
            return v
        return [_validate_coords(p, 3, "a base point") for p in v]


class AlphaRequest(_Strict):
    surface: SurfaceModel
    bundle: Optional[BundleModel] = None  # default: anticanonical
    z: List[SurfacePointModel] = Field(min_length=1)
    m: Optional[int] = Field(default=None, ge=1)  # uniform override of mults
    kmax: int = Field(default=12, ge=1)
    prime: Optional[int] = None
    modular: bool = True


class SequenceRequest(_Strict):
    surface: SurfaceModel
    bundle: Optional[BundleModel] = None
    z: List[SurfacePointModel] = Field(min_length=1)
    m_max: int = Field(ge=1, le=40, alias="M")
    kmax: int = Field(default=12, ge=1)
    prime: Optional[int] = None
    modular: bool = True
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class H0Request(_Strict):
    surface: SurfaceModel
    bundle: Optional[BundleModel] = None
    k: int = Field(ge=1)
    prime: Optional[int] = None
    modular: bool = True


class ChudnovskyRequest(_Strict):
    surface: SurfaceModel  # r <= 6
    z: Optional[List[SurfacePointModel]] = None
    n_points: Optional[int] = Field(default=None, ge=1)  # sampled if z absent
    m_max: int = Field(default=4, ge=1, le=12)
    kmax: int = Field(default=12, ge=1)
    prime: Optional[int] = None
    modular: bool = True


class VerifyTheoremsRequest(_Strict):
    cases: Optional[List[str]] = None  # default: all
    kmax: int = Field(default=12, ge=1)
    prime: Optional[int] = None
    modular: bool = True


class FalsifyRequest(_Strict):
    family: Literal["S1.triple", "S6.nonconcurrent", "S8.generic"]
    trials: int = Field(default=20, ge=1, le=200)
    seed: int
    prime: Optional[int] = None
    modular: bool = True


class CheckWitnessRequest(_Strict):
    surface: SurfaceModel
    bundle: Optional[BundleModel] = None
    k: int = Field(ge=1)
    z: List[SurfacePointModel] = Field(min_length=1)
    m: Optional[int] = Field(default=None, ge=1)
    witness: List[Union[int, str]]

    @field_validator("witness")
    @classmethod
    def _ints(cls, v):
        return [parse_exact_int(c) for c in v]


# ---------------------------------------------------------------------------
# Responses
# ---------------------------------------------------------------------------

class SurfaceEcho(BaseModel):
    r: int
    base_points: List[List[str]]


class AlphaResponse(BaseModel):
    surface: SurfaceEcho
    value: int
    system_rank: int
    kernel_dim: int
    witness: List[str]  # primitive integer coefficients over the monomial basis
    witness_degree: int


class SequenceEntry(BaseModel):
    m: int
    value: int
    system_rank: int
    kernel_dim: int
    witness: List[str]
    witness_degree: int


class SequenceResponse(BaseModel):
    surface: SurfaceEcho
    values: List[int]
    runs: List[List[int]]  # (start m, length)
    max_run: List[int]
    entries: List[SequenceEntry]


class H0Response(BaseModel):
    surface: SurfaceEcho
    k: int
    computed: int
    closed_form: Optional[int]  # only for the anticanonical bundle
    match: Optional[bool]


class ChudnovskyEntry(BaseModel):
    m: int
    alpha: int
    ratio: str  # exact fraction "p/q"
    holds: bool


class ChudnovskyResponse(BaseModel):
    surface: SurfaceEcho
    alpha1: int
    hypothesis_holds: bool
    bound: str
    entries: List[ChudnovskyEntry]
    passed: bool


class ScenarioCaseResult(BaseModel):
    id: str
    values: List[int]
    expected_prefix: List[int]
    expected_next: int
    passed: bool


class VerifyTheoremsResponse(BaseModel):
    cases: List[ScenarioCaseResult]
    passed: bool


class FalsifyResponse(BaseModel):
    family: str
    trials: int
    seed: int
    failures: List[int]  # trial indices where the signature unexpectedly held
    passed: bool


class CheckWitnessPointResult(BaseModel):
    point: str
    demanded: int
    total_mult: int
    ok: bool


class CheckWitnessResponse(BaseModel):
    surface: SurfaceEcho
    degree: int
    points: List[CheckWitnessPointResult]
    passed: bool
