"""Request/response models for the laboratory service.

Positions in responses are 1-based; everything the core returns 0-based is
converted here at the boundary.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class PermutationRequest(BaseModel):
    values: list[int]


class RandomPermRequest(BaseModel):
    n: int = Field(ge=1)
    master_seed: int = Field(default=0, ge=0)
    trial_index: int = Field(default=0, ge=0)


class PermutationResponse(BaseModel):
    n: int
    values: list[int]


class AnalyzeResponse(BaseModel):
    n: int
    inversions: int
    lis_length: int
    lis_positions: list[int]
    lds_length: int
    lds_positions: list[int]
    inversion_table: list[int]


class IncrementsRequest(BaseModel):
    family: Literal["shell", "pratt", "chazelle", "geometric", "target", "custom"]
    n: int = Field(ge=1)
    p: Optional[int] = None
    a: Optional[int] = None
    ratio: Optional[float] = None
    custom: Optional[list[int]] = None


class IncrementsResponse(BaseModel):
    family: str
    increments: list[int]
    passes: int
    serialized: str


class TraceModel(BaseModel):
    n: int
    p: int
    increments: list[int]
    m: list[list[int]]
    per_pass_inversions: list[int]
    total_M: int
    comparisons: list[int]
    raw_comparisons: list[int]


class TraceRequest(BaseModel):
    values: list[int]
    increments: Optional[list[int]] = None
    family: Optional[str] = None
    p: Optional[int] = None
    a: Optional[int] = None
    ratio: Optional[float] = None


class TraceResponse(BaseModel):
    sorted_values: list[int]
    trace: TraceModel
    flat_counters: list[int]


class TraceDecodeRequest(BaseModel):
    counters: list[int]
    increments: list[int]
    n: int = Field(ge=1)


class MoveModel(BaseModel):
    op: Literal["push", "pop"]
    stack: int = Field(ge=0)


class ParallelSortRequest(BaseModel):
    values: list[int]
    record_moves: bool = True


class ParallelRunResponse(BaseModel):
    kind: str
    containers_used: int
    container_final_sizes: list[int]
    output: list[int]
    moves: Optional[list[MoveModel]] = None
    witness_positions: Optional[list[int]] = None  # stacks only, 1-based


class SequentialSimRequest(BaseModel):
    values: list[int]
    moves: list[MoveModel]
    k: int = Field(ge=1)


class SequentialSimResponse(BaseModel):
    output: list[int]
    ok: bool
    error_index: Optional[int] = None
    reason: Optional[str] = None


class SequentialSearchRequest(BaseModel):
    values: list[int]
    k_max: int = Field(default=6, ge=1)
    max_states: int = Field(default=2_000_000, ge=1)


class SequentialSearchResponse(BaseModel):
    min_k: Optional[int]
    schedule: Optional[list[MoveModel]]
    states_explored: int


class PushpopEncodeRequest(BaseModel):
    moves: list[MoveModel]
    k: int = Field(ge=1)
    n: int = Field(ge=1)


class PushpopEncodeResponse(BaseModel):
    strings: list[str]
    per_stack_bits: int
    global_events: int
    interleaving_bits: int


class PushpopDecodeRequest(BaseModel):
    strings: list[str]
    k: int = Field(ge=1)
    n: int = Field(ge=1)


class BoundRequest(BaseModel):
    n: int = Field(ge=2)
    p: int = Field(ge=1)


class BoundResponse(BaseModel):
    n: int
    p: int
    m_star: int
    threshold_bits: float
    p_n_ratio: float


class BoundTableRequest(BaseModel):
    n_grid: list[int]
    p_grid: list[int]


class BoundTableResponse(BaseModel):
    rows: list[dict]
    skipped: list[dict]
    csv: str


class FitPointModel(BaseModel):
    n: int = Field(ge=1)
    mean: float
    stderr: Optional[float] = None
    trials: Optional[int] = None


class FitRequest(BaseModel):
    points: list[FitPointModel]


class FitResponse(BaseModel):
    exponent: float
    constant: float
    r_squared: float
    points: list[FitPointModel]
    rejected: list[FitPointModel]


class LisCheckRequest(BaseModel):
    n: int = Field(ge=4)
    trials: int = Field(default=100, ge=1)
    master_seed: int = Field(default=0, ge=0)


class LisCheckResponse(BaseModel):
    n: int
    trials: int
    mean_lis: float
    max_lis: int
    mean_over_sqrt_n: float
    threshold: float
    frac_exceeding: float


class ExperimentRequest(BaseModel):
    experiment: Literal["shellsort", "pstacks", "pqueues", "seqsearch",
                        "bounds", "verify"]
    n_grid: list[int] = Field(default_factory=list)
    p_grid: list[int] = Field(default_factory=list)
    families: list[str] = Field(default_factory=lambda: ["target"])
    trials: int = Field(default=100, ge=1)
    master_seed: int = Field(default=0, ge=0)
    exhaustive: bool = False
    threads: int = Field(default=1, ge=1)
    chazelle_a: int = Field(default=2, ge=2)
    geometric_ratio: float = 2.0
    fit: bool = False
    k_max: int = Field(default=6, ge=1)
    verify_deep: bool = True


class ExperimentResponse(BaseModel):
    record_count: int
    jsonl: str
    summary: dict
    summary_csv: str


class CheckModel(BaseModel):
    name: str
    passed: bool
    checked: int
    detail: str = ""
    counterexample: Optional[str] = None


class VerifyRequest(BaseModel):
    deep: bool = True


class VerifyResponse(BaseModel):
    all_passed: bool
    total_checked: int
    checks: list[CheckModel]


class HealthResponse(BaseModel):
    status: str
    version: str
