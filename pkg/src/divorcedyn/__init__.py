"""Divorce dynamics for stable marriage with ties and incomplete lists."""

from .model import (
    AgentId,
    CanonicalKey,
    Comparison,
    GuardExceeded,
    Instance,
    Matching,
    ParseError,
    PreferenceList,
    Side,
    UNMATCHED,
    ValidationError,
    canonical_key,
    compare,
    instance_from_json,
    instance_to_json,
    is_matching,
    matching_from_json,
    matching_from_key,
    matching_to_json,
    normalize_pair,
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_matching,
)
from .dynamics import (
    BlockingPair,
    Infeasible,
    Reason,
    Rejected,
    SequenceResult,
    StepRecord,
    apply_b_interchange,
    b_inter_raw,
    blocking_pairs,
    is_blocking,
    is_stable,
    parse_certificate,
    serialize_certificate,
    verify_sequence,
)
from .explorer import (
    Budget,
    Condensation,
    DivorceGraph,
    SearchVerdict,
    VerdictKind,
    build_divorce_graph,
    condensation,
    export_dot,
    reachable_search,
    sinks,
    verdict_to_json,
)
from .reduction import (
    Claim1Report,
    ReductionArtifact,
    SourceGraph,
    build_certificate,
    check_claim1,
    extract_independent_set,
    parse_source_graph,
    reduce_graph,
    serialize_source_graph,
)
from . import fixtures, oracles

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
