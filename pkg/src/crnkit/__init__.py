"""Stochastic analysis of mass-action reaction networks.

Structure checks (weak reversibility, linkage classes, binary complexes),
tier-based asymptotics along parametric state sequences, exact and Monte
Carlo drift diagnostics for an entropy-like Lyapunov function, and
trajectory simulation of the associated continuous-time Markov chain.
"""

from .network import (
    STATE_COORD_MAX,
    Complex,
    MassActionSystem,
    Reaction,
    ReactionNetwork,
)
from .kinetics import (
    embedded_step_distribution,
    generator_applied,
    intensity,
    lyapunov,
    lyapunov_difference,
    path_probability,
    reaction_rate,
    total_rate,
    transition_rates,
)
from .parser import parse, parse_document, serialize
from .structure import (
    VERDICT_INCONCLUSIVE,
    VERDICT_POSITIVE_RECURRENT,
    LinkageClassPartition,
    ReachabilityReport,
    SpeciesConditionReport,
    TheoremVerdict,
    is_binary,
    is_weakly_reversible,
    linkage_classes,
    reachable_states,
    species_complex_condition,
    theorem_verdict,
)
from .tiers import (
    Const,
    Grow,
    HypothesisScanReport,
    ParametricSequence,
    PathTierReport,
    ScanFamily,
    TierPartition,
    d_partition,
    exact_kstep_drift,
    hypothesis_check,
    scan_patterns,
    parse_sequence_spec,
    path_probability_limit,
    path_tier_membership,
    s_partition,
    witness_path,
)
from .simulate import (
    ReturnTimeStats,
    StationaryEstimate,
    TrajectorySample,
    drift_estimate_mc,
    embedded_chain_simulate,
    lyapunov_sublevel,
    occupancy_estimate,
    return_times,
    ssa_simulate,
    truncated_stationary,
)
from . import catalog, errors

__version__ = "0.1.0"
