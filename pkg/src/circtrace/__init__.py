"""Trace reconstruction tools for sparse strings under the circular deletion channel."""

__version__ = "0.1.0"

from .channel import (
    ChannelParams,
    brute_force_trace_distribution,
    conditioned_gap_prob,
    exact_trace_prob,
    make_rng,
    sample_gap_trace,
    sample_gap_traces,
    sample_trace,
    sample_traces,
)
from .cyclicstats import (
    StatIndex,
    matched_order,
    min_distinguishing_stat,
    shifted_stat,
    signature,
    stat,
    stats_equal_up_to,
    symmetry_period,
    verify_characterization,
)
from .distinguisher import (
    DistinguishInstance,
    DistinguishResult,
    Verdict,
    estimator_f,
    run_trial,
    test_cyclic_traces,
    test_similar_traces,
)
from .errors import CircTraceError
from .gapseq import GapSequence, canonical_rotation, cyclic_shift, cyclically_equal, parse_gaps, to_binary
from .lowerbound import (
    LowerBoundPair,
    hellinger_sample_bound,
    paper_pair,
    prob_ratio,
    ratio_deviation_sweep,
    search_complement_pairs,
    search_matching_pairs,
)
from .numfourier import coprime_sum_repr, dft, gcd_class, product_identity_check, zero_pattern
from .partition import SeparatedPartition, assign, build_partition

__all__ = [name for name in dir() if not name.startswith("_")]
