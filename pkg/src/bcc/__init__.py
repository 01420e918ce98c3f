"""Bipartite cyclic cluster (BCC) quantum codes: construction, distance, search and simulation."""

from __future__ import annotations

from .circuit import Circuit, Scheme, bell_experiment, parse_circuit, prep_circuit, prep_zero_plus_circuit
from .code import (
    BccSpec,
    CssCode,
    InvalidSpecError,
    PreparedState,
    code_from_spec,
    from_offsets,
    hadamard_swap_permutation,
    is_automorphism,
    logical_count,
    low_weight_stabilizers,
    prepared_logical_state,
    self_orthogonal,
)
from .distance import distance, logical_weight_profile
from .experiment import DecodeFailure, ExperimentStats, decode_block, run_experiment, scaling_exponent, sweep
from .frames import NoiseModel, sample_frames
from .search import SearchTask, canonicalize, run_search
from .tableau import Tableau, simulate_noiseless

__all__ = [
    "BccSpec",
    "Circuit",
    "CssCode",
    "DecodeFailure",
    "ExperimentStats",
    "InvalidSpecError",
    "NoiseModel",
    "PreparedState",
    "Scheme",
    "SearchTask",
    "Tableau",
    "bell_experiment",
    "canonicalize",
    "code_from_spec",
    "decode_block",
    "distance",
    "from_offsets",
    "hadamard_swap_permutation",
    "is_automorphism",
    "logical_count",
    "logical_weight_profile",
    "low_weight_stabilizers",
    "parse_circuit",
    "prep_circuit",
    "prep_zero_plus_circuit",
    "prepared_logical_state",
    "run_experiment",
    "run_search",
    "sample_frames",
    "scaling_exponent",
    "self_orthogonal",
    "simulate_noiseless",
    "sweep",
]

__version__ = "0.1.0"
