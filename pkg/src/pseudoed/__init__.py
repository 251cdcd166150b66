"""Approximate edit distance for pseudorandom strings.

The main entry points are :func:`approx_ed` (known ``(p, B)``),
:func:`detect_single_shot` and :func:`preprocess_source` /
:func:`query_source` (unknown B), the audits :func:`m_exact` and
:func:`sampled_m_test`, and the exact routines :func:`ed_exact` and
:func:`ed_bounded`.
"""

from .audit import AuditReport, is_p_unique_exact, m_exact, sampled_m_test, uniqueness_test_sampled
from .clean import MatchOracle, alignment_cost, brute_force_clean_opt, solve_clean_alignment
from .detect import SourceProfile, detect_single_shot, preprocess_source, query_source
from .distance import ed_bounded, ed_bounded_budgeted, ed_exact
from .errors import GuardRefusal, InvalidInput, PseudoEdError
from .generate import GenSpec, generate
from .reduction import Estimate, PseudoParams, approx_ed
from .script import EditScript, apply_script
from .sparse import max_restricted_alignment, script_from_alignment
from .text import Rng, Text, WorkMeter

__version__ = "0.1.0"

__all__ = [
    "AuditReport", "EditScript", "Estimate", "GenSpec", "GuardRefusal", "InvalidInput", "MatchOracle",
    "PseudoEdError", "PseudoParams", "Rng", "SourceProfile", "Text", "WorkMeter", "alignment_cost",
    "apply_script", "approx_ed", "brute_force_clean_opt", "detect_single_shot", "ed_bounded",
    "ed_bounded_budgeted", "ed_exact", "generate", "is_p_unique_exact", "m_exact",
    "max_restricted_alignment", "preprocess_source", "query_source", "sampled_m_test",
    "script_from_alignment", "solve_clean_alignment", "uniqueness_test_sampled",
]
