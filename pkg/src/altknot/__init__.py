"""altknot: canonical decomposition and achirality certificates for
reduced alternating knot diagrams.

The public surface is re-exported here; see the individual modules for
the full API.
"""

from .decompose import (
    HasemanCurve,
    HasemanFamily,
    Piece,
    PieceClass,
    alternating_extension,
    bounds_singleton,
    canonical_family,
    classify_piece,
    curves_disjoint,
    curves_parallel,
    enumerate_haseman,
    filling,
    split,
    thread_labels,
)
from .diagram import (
    Diagram,
    MapIso,
    ValidationReport,
    canonical_code,
    enumerate_isomorphisms,
    make_alternating,
    map_isomorphic,
    mirror,
    opposite,
    parse,
    parse_gauss,
    parse_pd,
    reverse,
    sigma,
    sigma_inv,
    slot_of,
    validate,
    vertex_of,
)
from .errors import (
    AltknotError,
    ClosureBudgetExceeded,
    EmptyDiagram,
    InconsistentPartition,
    InvalidSite,
    InvariantBandViolation,
    MalformedCode,
    NotAKnot,
    NotAlternating,
    NotMinusAchiral,
    NotPrime,
    NotReduced,
    UnclassifiablePiece,
    WitnessSynthesisFailed,
)
from .flypes import (
    FlypeOrbit,
    FlypeSite,
    Tangle,
    apply_flype,
    flype_closure,
    flype_equivalent_tangles,
    flype_orbits,
    flype_sites,
    tangle_transform,
)
from .generate import (
    inflate,
    octahedron,
    pretzel,
    rational,
    square_antiprism,
    torus,
    vertex_sum,
)
from .tree import (
    FixedLocus,
    StructureTree,
    TreeAut,
    build_tree,
    fixed_locus,
    mirror_automorphisms,
    serialize,
)

__version__ = "0.1.0"

__all__ = [
    "AltknotError",
    "ClosureBudgetExceeded",
    "Diagram",
    "EmptyDiagram",
    "FixedLocus",
    "FlypeOrbit",
    "FlypeSite",
    "HasemanCurve",
    "HasemanFamily",
    "InconsistentPartition",
    "InvalidSite",
    "InvariantBandViolation",
    "MalformedCode",
    "MapIso",
    "NotAKnot",
    "NotAlternating",
    "NotMinusAchiral",
    "NotPrime",
    "NotReduced",
    "Piece",
    "PieceClass",
    "StructureTree",
    "Tangle",
    "TreeAut",
    "UnclassifiablePiece",
    "ValidationReport",
    "WitnessSynthesisFailed",
    "__version__",
    "alternating_extension",
    "apply_flype",
    "bounds_singleton",
    "build_tree",
    "canonical_code",
    "canonical_family",
    "classify_piece",
    "curves_disjoint",
    "curves_parallel",
    "enumerate_haseman",
    "enumerate_isomorphisms",
    "filling",
    "fixed_locus",
    "flype_closure",
    "flype_equivalent_tangles",
    "flype_orbits",
    "flype_sites",
    "inflate",
    "make_alternating",
    "map_isomorphic",
    "mirror",
    "mirror_automorphisms",
    "octahedron",
    "opposite",
    "parse",
    "parse_gauss",
    "parse_pd",
    "pretzel",
    "rational",
    "reverse",
    "serialize",
    "sigma",
    "sigma_inv",
    "slot_of",
    "split",
    "square_antiprism",
    "tangle_transform",
    "thread_labels",
    "torus",
    "validate",
    "vertex_of",
    "vertex_sum",
]
