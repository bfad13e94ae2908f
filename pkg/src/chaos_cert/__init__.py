"""Certify topological chaos for unimodal interval maps.

The two supported families are the Ricker map r x exp(-x) and the Hassell map
lambda x (alpha x + 1)^(-beta), which are the reduced consumption dynamics of
two overlapping-generations economies.
"""

from .criterion import ChaosVerdict, PiSet, VerdictKind, certify, classify, compute_pi
from .interval import CertifyConfig, GClassCertificate, Membership, build_interval, certify_g_class
from .maps import Family, Iterate, UnimodalMapSpec, eval_iterate, evaluate
from .numeric import RootConfig, ThresholdResult, find_root, scan_brackets, solve_threshold

__version__ = "0.1.0"

__all__ = [
    "CertifyConfig",
    "ChaosVerdict",
    "Family",
    "GClassCertificate",
    "Iterate",
    "Membership",
    "PiSet",
    "RootConfig",
    "ThresholdResult",
    "UnimodalMapSpec",
    "VerdictKind",
    "build_interval",
    "certify",
    "certify_g_class",
    "classify",
    "compute_pi",
    "eval_iterate",
    "evaluate",
    "find_root",
    "scan_brackets",
    "solve_threshold",
]
