"""Necessarily Pareto optimal and necessarily rank-maximal matchings from
top-k preference prefixes, with online elicitation."""

from .core import (
    FullProfile,
    InvalidInputError,
    Matching,
    Signature,
    TopKProfile,
    compare_signatures,
    completions,
    extended_signature_of,
    is_pareto_optimal,
    is_rank_maximal,
    signature_of,
)
from .npo import build_improvement_digraph, check_npo, exists_npo
from .nrm import SigOptQuery, brute_force_nrm_check, check_nrm, exists_nrm, sig_opt

__all__ = [
    "FullProfile",
    "TopKProfile",
    "Matching",
    "Signature",
    "InvalidInputError",
    "compare_signatures",
    "signature_of",
    "extended_signature_of",
    "completions",
    "is_pareto_optimal",
    "is_rank_maximal",
    "build_improvement_digraph",
    "check_npo",
    "exists_npo",
    "SigOptQuery",
    "sig_opt",
    "check_nrm",
    "exists_nrm",
    "brute_force_nrm_check",
]
