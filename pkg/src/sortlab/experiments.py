"""Seeded experiment harness: trial execution, persistence, verification.

A config pins everything: (config, master_seed) determines every emitted
byte except the wall_time fields. Trials are independent, so they may run
on any number of workers; records are keyed and sorted before writing, and
the derived seed stored in each record re-runs that trial alone.
"""

from __future__ import annotations

import io
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import oracles
from .analysis import (BoundQuery, Welford, fit_power_law, inversion_lower_bound,
                       log_divisions)
from .increments import (IncrementSequence, gen_chazelle, gen_geometric,
                         gen_pratt, gen_shell_original, target_pass_count)
from .networks import (parallel_queue_sort, parallel_stack_sort, pushpop_decode,
                       pushpop_encode, search_schedule_at_k,
                       sequential_search_min_stacks)
from .perms import (identity, lds_length, lis_length, longest_increasing_subsequence,
                    random_permutation, unrank_permutation)
from .rng import Seed, derive_seed
from .shellsort import (CorruptTraceError, shellsort_traced, trace_decode,
                        trace_encode)

SCHEMA_VERSION = 1

EXPERIMENTS = ("shellsort", "pstacks", "pqueues", "seqsearch", "bounds", "verify")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n_grid: tuple[int, ...] = ()
    p_grid: tuple[int, ...] = ()
    families: tuple[str, ...] = ("target",)
    trials: int = 100
    master_seed: int = 0
    exhaustive: bool = False
    threads: int = 1
    chazelle_a: int = 2
    geometric_ratio: float = 2.0
    fit: bool = False
    k_max: int = 6
    verify_deep: bool = True

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if not self.n_grid:
            if self.experiment in ("shellsort", "pstacks", "pqueues", "bounds"):
                object.__setattr__(self, "n_grid", DEFAULT_N_GRID)
            elif self.experiment != "verify":
                raise ValueError("n_grid must not be empty")
        if any(n < 1 for n in self.n_grid):
            raise ValueError("sizes must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        for n in self.n_grid:
            for p in self.p_grid:
                if not 1 <= p < n:
                    raise ValueError(f"pass count p={p} needs 1 <= p < n={n}")
        if self.exhaustive and any(n > 8 for n in self.n_grid):
            raise ValueError("exhaustive mode is limited to n <= 8")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        for key in ("n_grid", "p_grid", "families"):
            if key in d and d[key] is not None:
                d[key] = tuple(d[key])
        return cls(**d)


@dataclass(frozen=True)
class TrialRecord:
    experiment: str
    n: int
    p: int
    family: str
    trial_index: int
    derived_seed: int
    metrics: dict
    wall_time: float
    schema_version: int = SCHEMA_VERSION

    def sort_key(self) -> tuple:
        return (self.n, self.p, self.family, self.trial_index)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "type": "trial",
            "experiment": self.experiment,
            "n": self.n,
            "p": self.p,
            "family": self.family,
            "trial_index": self.trial_index,
            "derived_seed": self.derived_seed,
            "metrics": self.metrics,
            "wall_time": self.wall_time,
        }


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    summary: dict


DEFAULT_N_GRID = (2 ** 8, 2 ** 10, 2 ** 12, 2 ** 14)


def default_p_grid(n: int) -> tuple[int, ...]:
    """1, 2, 3, ceil(log n / log log n), ceil(log n); deduplicated, all < n."""
    lg = math.log2(n)
    ps = [1, 2, 3]
    if lg > 1:
        ps.append(math.ceil(lg / math.log2(lg)))
        ps.append(math.ceil(lg))
    out = sorted({p for p in ps if 1 <= p < n})
    return tuple(out)


def _increments_for(family: str, n: int, p: int, cfg: ExperimentConfig) -> IncrementSequence:
    if family == "shell":
        return gen_shell_original(n)
    if family == "pratt":
        return gen_pratt(n)
    if family == "chazelle":
        return gen_chazelle(n, cfg.chazelle_a)
    if family == "geometric":
        return gen_geometric(n, cfg.geometric_ratio)
    if family == "target":
        return target_pass_count(n, p)
    raise ValueError(f"unknown increment family {family!r}")


def _expand_rows(cfg: ExperimentConfig) -> list[dict]:
    """One row per (n, family[, p]); p is the realized pass count of the row."""
    rows = []
    for n in cfg.n_grid:
        if cfg.experiment == "shellsort":
            for family in cfg.families:
                if family == "target":
                    p_grid = cfg.p_grid or default_p_grid(n)
                    for p in p_grid:
                        if p >= n:
                            continue
                        inc = _increments_for(family, n, p, cfg)
                        rows.append({"n": n, "family": family, "inc": inc,
                                     "p": inc.passes})
                else:
                    inc = _increments_for(family, n, 0, cfg)
                    rows.append({"n": n, "family": family, "inc": inc,
                                 "p": inc.passes})
        elif cfg.experiment == "pstacks":
            rows.append({"n": n, "family": "stacks", "inc": None, "p": 0})
        elif cfg.experiment == "pqueues":
            rows.append({"n": n, "family": "queues", "inc": None, "p": 0})
        elif cfg.experiment == "seqsearch":
            rows.append({"n": n, "family": "seqstacks", "inc": None, "p": 0})
    return rows


def _run_trial(task: dict) -> TrialRecord:
    """Execute one trial; must stay module-level picklable for worker pools."""
    t0 = time.perf_counter()
    experiment = task["experiment"]
    n = task["n"]
    if task["mode"] == "exhaustive":
        pi = unrank_permutation(n, task["trial_index"])
    else:
        pi = random_permutation(n, Seed(task["master_seed"], task["trial_index"]))
    metrics: dict = {}
    if experiment == "shellsort":
        inc = IncrementSequence(tuple(task["increments"]), task["family"])
        out, trace = shellsort_traced(pi, inc, validate=False)
        assert out == identity(n)
        metrics = {
            "total_M": trace.total_M,
            "per_pass_inversions": list(trace.per_pass_inversions),
            "comparisons_total": sum(trace.comparisons),
            "raw_comparisons_total": sum(trace.raw_comparisons),
        }
    elif experiment == "pstacks":
        run = parallel_stack_sort(pi, record_moves=False, validate=False)
        assert run.output == identity(n)
        metrics = {"containers_used": run.containers_used, "lis": lis_length(pi)}
    elif experiment == "pqueues":
        run = parallel_queue_sort(pi, record_moves=False, validate=False)
        assert run.output == identity(n)
        metrics = {"containers_used": run.containers_used, "lds": lds_length(pi)}
    elif experiment == "seqsearch":
        res = sequential_search_min_stacks(pi, k_max=task["k_max"])
        metrics = {"min_k": res.min_k if res.min_k is not None else -1,
                   "states": res.states_explored}
    else:
        raise ValueError(f"experiment {experiment!r} has no per-trial work")
    return TrialRecord(
        experiment=experiment,
        n=n,
        p=task["p"],
        family=task["family"],
        trial_index=task["trial_index"],
        derived_seed=task["derived_seed"],
        metrics=metrics,
        wall_time=time.perf_counter() - t0,
    )


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    if cfg.experiment == "bounds":
        return _run_bounds(cfg)
    if cfg.experiment == "verify":
        report = verify_suite(deep=cfg.verify_deep)
        return ExperimentResult(cfg, [], {"type": "summary",
                                          "schema_version": SCHEMA_VERSION,
                                          "experiment": "verify",
                                          "verify": report.to_json_dict()})
    rows = _expand_rows(cfg)
    tasks: list[dict] = []
    counter = 0
    for row in rows:
        n = row["n"]
        if cfg.exhaustive:
            count = math.factorial(n)
            indices = range(count)
            mode = "exhaustive"
        else:
            indices = range(cfg.trials)
            mode = "random"
        for t in indices:
            trial_index = t if cfg.exhaustive else counter
            tasks.append({
                "experiment": cfg.experiment,
                "mode": mode,
                "n": n,
                "p": row["p"],
                "family": row["family"],
                "increments": row["inc"].increments if row["inc"] else None,
                "trial_index": trial_index,
                "master_seed": cfg.master_seed,
                "derived_seed": 0 if cfg.exhaustive else derive_seed(cfg.master_seed,
                                                                     trial_index),
                "k_max": cfg.k_max,
            })
            counter += 1
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            records = list(pool.map(_run_trial, tasks,
                                    chunksize=max(1, len(tasks) // (cfg.threads * 8))))
    else:
        records = [_run_trial(t) for t in tasks]
    records.sort(key=TrialRecord.sort_key)
    summary = _summarize(cfg, rows, records)
    return ExperimentResult(cfg, records, summary)


_PRIMARY_METRIC = {"shellsort": "total_M", "pstacks": "containers_used",
                   "pqueues": "containers_used", "seqsearch": "min_k"}


def _summarize(cfg: ExperimentConfig, rows: list[dict],
               records: list[TrialRecord]) -> dict:
    metric = _PRIMARY_METRIC[cfg.experiment]
    per_row = []
    by_key: dict[tuple, Welford] = {}
    for r in records:
        key = (r.n, r.p, r.family)
        acc = by_key.setdefault(key, Welford())
        acc.add(r.metrics[metric])
    for row in rows:
        key = (row["n"], row["p"], row["family"])
        acc = by_key.get(key)
        if acc is None:
            continue
        entry = {"n": row["n"], "p": row["p"], "family": row["family"],
                 "metric": metric, **acc.as_dict()}
        if cfg.experiment == "shellsort":
            q = BoundQuery(row["n"], row["p"])
            m_star = inversion_lower_bound(q)
            entry["m_star"] = m_star
            entry["mean_over_bound"] = acc.mean / m_star if m_star else None
            entry["increments"] = list(row["inc"].increments)
        elif cfg.experiment in ("pstacks", "pqueues"):
            entry["mean_over_sqrt_n"] = acc.mean / math.sqrt(row["n"])
        per_row.append(entry)
    summary = {
        "type": "summary",
        "schema_version": SCHEMA_VERSION,
        "experiment": cfg.experiment,
        "master_seed": cfg.master_seed,
        "trials": cfg.trials,
        "exhaustive": cfg.exhaustive,
        "rows": per_row,
    }
    if cfg.fit and cfg.experiment in ("shellsort", "pstacks", "pqueues"):
        fits = []
        series: dict[tuple, list] = {}
        for e in per_row:
            series.setdefault((e["family"], e["p"]), []).append(
                (e["n"], e["mean"], e["stderr"], e["count"]))
        for (family, p), pts in sorted(series.items()):
            if len(pts) >= 3:
                fr = fit_power_law(pts)
                fits.append({"family": family, "p": p, "exponent": fr.exponent,
                             "constant": fr.constant, "r_squared": fr.r_squared})
        summary["fits"] = fits
    return summary


def _run_bounds(cfg: ExperimentConfig) -> ExperimentResult:
    csv_text, rows, skipped = emit_bound_table(cfg.n_grid,
                                               cfg.p_grid or (1, 2, 3))
    summary = {"type": "summary", "schema_version": SCHEMA_VERSION,
               "experiment": "bounds", "rows": rows, "skipped": skipped,
               "csv": csv_text}
    return ExperimentResult(cfg, [], summary)


def emit_bound_table(n_grid, p_grid) -> tuple[str, list[dict], list[dict]]:
    """CSV table of the solved move-count bound per (n, p) pair.

    Returns (csv text, row dicts, skipped pairs). Invalid pairs (p >= n) are
    skipped, not fatal.
    """
    buf = io.StringIO()
    buf.write("n,p,M_star,p_n_ratio\n")
    rows, skipped = [], []
    for n in n_grid:
        for p in p_grid:
            if not 1 <= p < n:
                skipped.append({"n": n, "p": p, "reason": "requires 1 <= p < n"})
                continue
            m_star = inversion_lower_bound(BoundQuery(n, p))
            ratio = m_star / (p * n ** (1.0 + 1.0 / p))
            rows.append({"n": n, "p": p, "M_star": m_star, "p_n_ratio": ratio})
            buf.write(f"{n},{p},{m_star},{ratio:.10g}\n")
    return buf.getvalue(), rows, skipped


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def records_to_jsonl(result: ExperimentResult) -> str:
    """One JSON object per trial, then the summary block, fixed key order."""
    lines = [json.dumps(r.to_json_dict(), separators=(",", ":"))
             for r in result.records]
    lines.append(json.dumps(result.summary, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def write_jsonl(result: ExperimentResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(records_to_jsonl(result))


def summary_rows_csv(summary: dict) -> str:
    """Flat CSV of the per-row aggregates in a summary block."""
    rows = summary.get("rows", [])
    cols = ["n", "p", "family", "metric", "count", "mean", "stderr", "min", "max",
            "m_star", "mean_over_bound", "mean_over_sqrt_n", "M_star", "p_n_ratio"]
    extras = sorted({k for r in rows for k in r} - set(cols) - {"increments"})
    present = [c for c in cols + extras if any(c in r for r in rows)]
    buf = io.StringIO()
    buf.write(",".join(present) + "\n")
    for r in rows:
        buf.write(",".join(_csv_cell(r.get(c)) for c in present) + "\n")
    return buf.getvalue()


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, list):
        return '"' + " ".join(str(x) for x in v) + '"'
    return str(v)


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""
    counterexample: str | None = None

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "detail": self.detail, "counterexample": self.counterexample}


@dataclass
class VerifyReport:
    checks: list[CheckResult]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def total_checked(self) -> int:
        return sum(c.checked for c in self.checks)

    def to_json_dict(self) -> dict:
        return {"all_passed": self.all_passed, "total_checked": self.total_checked,
                "checks": [c.to_json_dict() for c in self.checks]}


def _check_trace_roundtrip(limit: int) -> CheckResult:
    incs = [IncrementSequence((1,)), IncrementSequence((2, 1)),
            IncrementSequence((3, 2, 1))]
    checked = 0
    for n in range(1, limit + 1):
        for pi in itertools.permutations(range(1, n + 1)):
            for inc in incs:
                _, trace = shellsort_traced(pi, inc, validate=False)
                checked += 1
                try:
                    back = trace_decode(trace_encode(trace), inc, n)
                except CorruptTraceError as exc:
                    return CheckResult("trace-roundtrip", False, checked,
                                       detail=str(exc),
                                       counterexample=f"pi={pi}, inc={inc.increments}")
                if back != pi:
                    return CheckResult("trace-roundtrip", False, checked,
                                       counterexample=f"pi={pi}, inc={inc.increments}")
    return CheckResult("trace-roundtrip", True, checked,
                       detail=f"all permutations n <= {limit}, 3 increment sequences")


def _check_lis_oracle(limit: int) -> CheckResult:
    checked = 0
    for n in range(1, limit + 1):
        for pi in itertools.permutations(range(1, n + 1)):
            checked += 1
            length, witness = longest_increasing_subsequence(pi)
            if length != oracles.lis_dp_length(pi):
                return CheckResult("lis-oracle", False, checked,
                                   counterexample=f"pi={pi}")
            vals = [pi[i] for i in witness]
            if len(vals) != length or any(a >= b for a, b in zip(vals, vals[1:])):
                return CheckResult("lis-oracle", False, checked,
                                   counterexample=f"pi={pi} witness={witness}")
    return CheckResult("lis-oracle", True, checked,
                       detail=f"patience vs quadratic DP, all permutations n <= {limit}")


def _check_compositions(limit: int) -> CheckResult:
    checked = 0
    for parts in range(1, limit + 1):
        for total in range(0, limit + 1):
            checked += 1
            exact = oracles.count_compositions(total, parts)
            approx = round(2 ** log_divisions(total, parts))
            if approx != exact:
                return CheckResult("composition-counts", False, checked,
                                   counterexample=f"M={total}, parts={parts}: "
                                                  f"{approx} != {exact}")
    return CheckResult("composition-counts", True, checked,
                       detail=f"enumerated vs log-gamma, all M, parts <= {limit}")


def _check_pushpop_injectivity(limit: int) -> CheckResult:
    checked = 0
    for n in range(2, limit + 1):
        k = 1
        seen: dict[tuple, tuple] = {}
        perms = list(itertools.permutations(range(1, n + 1)))
        while True:
            seen.clear()
            ok = True
            for pi in perms:
                schedule = search_schedule_at_k(pi, k)
                if schedule is None:
                    k += 1
                    ok = False
                    break
                strings = tuple(pushpop_encode(schedule, k, n))
                checked += 1
                if pushpop_decode(strings, k, n) != pi:
                    return CheckResult("pushpop-injectivity", False, checked,
                                       counterexample=f"roundtrip failed for {pi}")
                if strings in seen:
                    return CheckResult("pushpop-injectivity", False, checked,
                                       counterexample=f"{pi} and {seen[strings]} "
                                                      f"share {strings}")
                seen[strings] = pi
            if ok:
                break
    return CheckResult("pushpop-injectivity", True, checked,
                       detail=f"distinct bitstrings and exact roundtrip, n <= {limit}")


def verify_suite(deep: bool = True) -> VerifyReport:
    """Exhaustive small-size cross-checks of the codecs and oracles.

    deep runs the full advertised ranges (trace roundtrips n <= 7, patience
    vs DP n <= 10, composition counts <= 12, bitstring injectivity n <= 6);
    deep=False shrinks each range for quick smoke runs.
    """
    if deep:
        limits = {"trace": 7, "lis": 10, "comp": 12, "inj": 6}
    else:
        limits = {"trace": 5, "lis": 7, "comp": 8, "inj": 4}
    checks = [
        _check_trace_roundtrip(limits["trace"]),
        _check_lis_oracle(limits["lis"]),
        _check_compositions(limits["comp"]),
        _check_pushpop_injectivity(limits["inj"]),
    ]
    return VerifyReport(checks)
