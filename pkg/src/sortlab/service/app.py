"""FastAPI surface wrapping the laboratory core.

Every endpoint is a thin adapter: validate with pydantic, call the core,
convert 0-based positions to 1-based. Core ValueErrors map to HTTP 400.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, analysis, experiments, networks, perms, shellsort
from ..increments import IncrementSequence, make_increments
from ..rng import Seed
from . import schemas as S


def _moves_out(moves) -> list[S.MoveModel]:
    return [S.MoveModel(op=op, stack=j) for op, j in moves]


def _moves_in(models) -> list[networks.Move]:
    return [(m.op, m.stack) for m in models]


def _increments_from(req) -> IncrementSequence:
    if req.increments:
        return IncrementSequence(tuple(req.increments))
    if req.family:
        return make_increments(req.family, len(req.values), p=req.p, a=req.a,
                               ratio=req.ratio)
    raise ValueError("provide either explicit increments or a family")


def create_app() -> FastAPI:
    app = FastAPI(title="sortlab", version=__version__,
                  description="Instrumented sorting laboratory")

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=S.HealthResponse)
    def health():
        return S.HealthResponse(status="ok", version=__version__)

    # -- permutations -------------------------------------------------------

    @app.post("/perm/random", response_model=S.PermutationResponse)
    def perm_random(req: S.RandomPermRequest):
        pi = perms.random_permutation(req.n, Seed(req.master_seed, req.trial_index))
        return S.PermutationResponse(n=req.n, values=list(pi))

    @app.post("/perm/analyze", response_model=S.AnalyzeResponse)
    def perm_analyze(req: S.PermutationRequest):
        pi = perms.as_permutation(req.values)
        lis_len, lis_pos = perms.longest_increasing_subsequence(pi)
        lds_len, lds_pos = perms.longest_decreasing_subsequence(pi)
        return S.AnalyzeResponse(
            n=len(pi),
            inversions=perms.count_inversions(pi),
            lis_length=lis_len,
            lis_positions=[i + 1 for i in lis_pos],
            lds_length=lds_len,
            lds_positions=[i + 1 for i in lds_pos],
            inversion_table=list(perms.inversion_table_encode(pi)),
        )

    @app.post("/perm/from-inversion-table", response_model=S.PermutationResponse)
    def perm_from_table(req: S.PermutationRequest):
        pi = perms.inversion_table_decode(req.values, len(req.values))
        return S.PermutationResponse(n=len(pi), values=list(pi))

    # -- shellsort ----------------------------------------------------------

    @app.post("/shellsort/increments", response_model=S.IncrementsResponse)
    def shellsort_increments(req: S.IncrementsRequest):
        inc = make_increments(req.family, req.n, p=req.p, a=req.a, ratio=req.ratio,
                              custom=tuple(req.custom) if req.custom else None)
        return S.IncrementsResponse(family=inc.family, increments=list(inc.increments),
                                    passes=inc.passes, serialized=inc.serialize())

    @app.post("/shellsort/trace", response_model=S.TraceResponse)
    def shellsort_trace(req: S.TraceRequest):
        inc = _increments_from(req)
        out, trace = shellsort.shellsort_traced(req.values, inc)
        return S.TraceResponse(
            sorted_values=list(out),
            trace=S.TraceModel(**trace.to_json_dict()),
            flat_counters=list(shellsort.trace_encode(trace)),
        )

    @app.post("/shellsort/decode", response_model=S.PermutationResponse)
    def shellsort_decode(req: S.TraceDecodeRequest):
        inc = IncrementSequence(tuple(req.increments))
        pi = shellsort.trace_decode(req.counters, inc, req.n)
        return S.PermutationResponse(n=req.n, values=list(pi))

    # -- stack/queue networks ------------------------------------------------

    def _parallel_response(run: networks.ParallelRun) -> S.ParallelRunResponse:
        witness = None
        if run.kind == "stacks":
            witness = [i + 1 for i in networks.backtrace_increasing_witness(run)]
        return S.ParallelRunResponse(
            kind=run.kind,
            containers_used=run.containers_used,
            container_final_sizes=list(run.container_final_sizes),
            output=list(run.output),
            moves=_moves_out(run.move_log) if run.move_log is not None else None,
            witness_positions=witness,
        )

    @app.post("/networks/stacks", response_model=S.ParallelRunResponse)
    def networks_stacks(req: S.ParallelSortRequest):
        return _parallel_response(
            networks.parallel_stack_sort(req.values, record_moves=req.record_moves))

    @app.post("/networks/queues", response_model=S.ParallelRunResponse)
    def networks_queues(req: S.ParallelSortRequest):
        return _parallel_response(
            networks.parallel_queue_sort(req.values, record_moves=req.record_moves))

    @app.post("/networks/sequential/simulate", response_model=S.SequentialSimResponse)
    def sequential_simulate(req: S.SequentialSimRequest):
        res = networks.sequential_simulate(req.values, _moves_in(req.moves), req.k)
        return S.SequentialSimResponse(output=list(res.output), ok=res.ok,
                                       error_index=res.error_index, reason=res.reason)

    @app.post("/networks/sequential/search", response_model=S.SequentialSearchResponse)
    def sequential_search(req: S.SequentialSearchRequest):
        res = networks.sequential_search_min_stacks(req.values, k_max=req.k_max,
                                                    max_states=req.max_states)
        return S.SequentialSearchResponse(
            min_k=res.min_k,
            schedule=_moves_out(res.schedule) if res.schedule is not None else None,
            states_explored=res.states_explored,
        )

    @app.post("/networks/pushpop/encode", response_model=S.PushpopEncodeResponse)
    def pushpop_encode(req: S.PushpopEncodeRequest):
        moves = _moves_in(req.moves)
        strings = networks.pushpop_encode(moves, req.k, req.n)
        report = networks.schedule_encoding_report(moves, req.k, req.n)
        return S.PushpopEncodeResponse(strings=strings,
                                       per_stack_bits=report["per_stack_bits"],
                                       global_events=report["global_events"],
                                       interleaving_bits=report["interleaving_bits"])

    @app.post("/networks/pushpop/decode", response_model=S.PermutationResponse)
    def pushpop_decode(req: S.PushpopDecodeRequest):
        pi = networks.pushpop_decode(req.strings, req.k, req.n)
        return S.PermutationResponse(n=req.n, values=list(pi))

    # -- bounds and statistics ----------------------------------------------

    @app.post("/analysis/bound", response_model=S.BoundResponse)
    def analysis_bound(req: S.BoundRequest):
        q = analysis.BoundQuery(req.n, req.p)
        m_star = analysis.inversion_lower_bound(q)
        return S.BoundResponse(
            n=req.n, p=req.p, m_star=m_star,
            threshold_bits=analysis.description_threshold_bits(req.n),
            p_n_ratio=m_star / (req.p * req.n ** (1.0 + 1.0 / req.p)),
        )

    @app.post("/analysis/bound-table", response_model=S.BoundTableResponse)
    def analysis_bound_table(req: S.BoundTableRequest):
        csv_text, rows, skipped = experiments.emit_bound_table(req.n_grid, req.p_grid)
        return S.BoundTableResponse(rows=rows, skipped=skipped, csv=csv_text)

    @app.post("/analysis/fit", response_model=S.FitResponse)
    def analysis_fit(req: S.FitRequest):
        fr = analysis.fit_power_law(
            [analysis.FitPoint(p.n, p.mean, p.stderr, p.trials) for p in req.points])
        return S.FitResponse(
            exponent=fr.exponent, constant=fr.constant, r_squared=fr.r_squared,
            points=[S.FitPointModel(n=p.n, mean=p.mean, stderr=p.stderr,
                                    trials=p.trials) for p in fr.points],
            rejected=[S.FitPointModel(n=p.n, mean=p.mean, stderr=p.stderr,
                                      trials=p.trials) for p in fr.rejected],
        )

    @app.post("/analysis/lis-check", response_model=S.LisCheckResponse)
    def analysis_lis_check(req: S.LisCheckRequest):
        rep = analysis.lis_bound_check(req.n, req.trials, req.master_seed)
        return S.LisCheckResponse(n=rep.n, trials=rep.trials, mean_lis=rep.mean_lis,
                                  max_lis=rep.max_lis,
                                  mean_over_sqrt_n=rep.mean_over_sqrt_n,
                                  threshold=rep.threshold,
                                  frac_exceeding=rep.frac_exceeding)

    # -- experiments ----------------------------------------------------------

    @app.post("/experiments/run", response_model=S.ExperimentResponse)
    def experiments_run(req: S.ExperimentRequest):
        cfg = experiments.ExperimentConfig.from_dict(req.model_dump())
        result = experiments.run_experiment(cfg)
        return S.ExperimentResponse(
            record_count=len(result.records),
            jsonl=experiments.records_to_jsonl(result),
            summary=result.summary,
            summary_csv=experiments.summary_rows_csv(result.summary),
        )

    @app.post("/verify", response_model=S.VerifyResponse)
    def verify(req: S.VerifyRequest):
        report = experiments.verify_suite(deep=req.deep)
        d = report.to_json_dict()
        return S.VerifyResponse(all_passed=d["all_passed"],
                                total_checked=d["total_checked"],
                                checks=[S.CheckModel(**c) for c in d["checks"]])

    return app


app = create_app()
