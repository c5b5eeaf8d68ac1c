"""sortlab: an instrumented laboratory for sorting procedures.

Core pieces: traced multi-pass insertion sorting (Shellsort) with a lossless
per-pass counter codec, parallel stack/queue sorting tied to monotone
subsequence lengths, serial-stack schedule search with a push/pop bitstring
codec, the counting lower bound on average move counts, and a seeded,
reproducible experiment harness exposed over HTTP and a CLI.
"""

__version__ = "0.1.0"

from .analysis import (BoundQuery, FitResult, fit_power_law, inversion_lower_bound,
                       lis_bound_check, log_divisions, summarize_trials)
from .increments import (IncrementSequence, gen_chazelle, gen_geometric, gen_pratt,
                         gen_shell_original, target_pass_count)
from .networks import (ParallelRun, backtrace_increasing_witness, parallel_queue_sort,
                       parallel_stack_sort, pushpop_decode, pushpop_encode,
                       sequential_search_min_stacks, sequential_simulate)
from .perms import (Perm, as_permutation, count_inversions, inversion_table_decode,
                    inversion_table_encode, longest_decreasing_subsequence,
                    longest_increasing_subsequence, random_permutation)
from .rng import Seed, SplitMix64, derive_seed
from .shellsort import ShellTrace, shellsort_traced, trace_decode, trace_encode

__all__ = [
    "__version__",
    "BoundQuery", "FitResult", "fit_power_law", "inversion_lower_bound",
    "lis_bound_check", "log_divisions", "summarize_trials",
    "IncrementSequence", "gen_chazelle", "gen_geometric", "gen_pratt",
    "gen_shell_original", "target_pass_count",
    "ParallelRun", "backtrace_increasing_witness", "parallel_queue_sort",
    "parallel_stack_sort", "pushpop_decode", "pushpop_encode",
    "sequential_search_min_stacks", "sequential_simulate",
    "Perm", "as_permutation", "count_inversions", "inversion_table_decode",
    "inversion_table_encode", "longest_decreasing_subsequence",
    "longest_increasing_subsequence", "random_permutation",
    "Seed", "SplitMix64", "derive_seed",
    "ShellTrace", "shellsort_traced", "trace_decode", "trace_encode",
]
