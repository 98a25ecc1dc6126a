from app.applications.broadcast import broadcast_local_vertices
from app.applications.friendliness import SequentialScenario, lf_membership, lf_vertices, sequential_to_pd
from app.applications.inequalities import (
    INEQUALITY_TAGS,
    Inequality,
    ShapeMismatchError,
    build_inequality,
    chsh_family,
    correlator,
    partial_pr_box,
    pr_box,
    probability_term,
)
from app.applications.witnesses import (
    InseparabilityReport,
    PartySubsetCollection,
    inseparability_report,
    ns2_vertices,
    svetlichny_vertices,
)

__all__ = [
    "INEQUALITY_TAGS",
    "Inequality",
    "InseparabilityReport",
    "PartySubsetCollection",
    "SequentialScenario",
    "ShapeMismatchError",
    "broadcast_local_vertices",
    "build_inequality",
    "chsh_family",
    "correlator",
    "inseparability_report",
    "lf_membership",
    "lf_vertices",
    "ns2_vertices",
    "partial_pr_box",
    "pr_box",
    "probability_term",
    "sequential_to_pd",
    "svetlichny_vertices",
]
