"""Sparse-sample binary classification over large alphabets.

Thin re-export of the compiled extension; see the README for the CLI and
file formats.
"""

from sparseclass._core import (  # noqa: F401
    BoundReport,
    ConditionalFalseAlarmResult,
    Distribution,
    ErrorEstimate,
    Histogram,
    MembershipReport,
    achievability_exponent,
    bi_uniform,
    bi_uniform_all_distinct_convolution,
    check_class_membership,
    chernoff_lambda_bound,
    chernoff_optimal_gamma,
    classify_f,
    classify_t,
    conditional_false_alarm_experiment,
    estimate_error,
    event_a,
    event_b,
    exact_error_bruteforce,
    f_statistic,
    inflate_alphabet,
    l1_distance,
    lemma_a_rate,
    normalization_r,
    oracle_lrt,
    poissonized_histogram,
    prob_all_distinct,
    prob_all_distinct_uniform,
    prob_c_n,
    prob_event_a,
    prob_event_b_given_xy,
    prob_event_b_uniform,
    profile,
    sample_conditioned_count,
    sample_histogram,
    t_statistic,
    uniform,
)

__version__ = "0.1.0"
