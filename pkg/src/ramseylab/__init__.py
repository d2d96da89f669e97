"""Finite workbench for structural partition relations.

Ordered structure classes with canonical big members, quantifier-free tuple
types, type-homogeneous subset search, partition relation verification,
coloring reductions, and blueprint term models.
"""

from .structures import (
    KINDS,
    ClassKind,
    FinStructure,
    colored_order,
    convex_equivalence,
    disjoint_orders,
    embed_canonical,
    embeds_canonically,
    hypergraphs,
    induced_substructure,
    is_big,
    is_embedding,
    is_member,
    linear_order,
    make_canonical,
    ordered_graphs,
    subset_closure,
    subset_induces_member,
    subset_is_big,
    tree_class,
)
from .tuple_types import TupleType, enumerate_types, restrict_type, tuple_type
from .colorings import (
    Coloring,
    HomogeneityWitness,
    SearchResult,
    find_type_homogeneous,
    iter_big_member_subsets,
    random_coloring,
    type_homogeneity_witness,
)
from .arrow import (
    ArrowQuery,
    SearchSpaceTooLarge,
    TableReport,
    Verdict,
    arrow_check,
    ramsey_table,
    verify_refutation,
)
from .reductions import (
    ReductionReport,
    StageRecord,
    aux_coloring_ceq,
    aux_coloring_chicolor,
    reduce_ceq,
    reduce_chicolor,
)
from .diagrams import (
    Diagram,
    OutputSignature,
    TargetStructure,
    Term,
    enumerate_terms,
    model_diagram,
)
from .blueprints import (
    Blueprint,
    BlueprintDomainError,
    DeriveResult,
    EmModel,
    ExtractReport,
    InternalCheckError,
    SupportOverflowError,
    check_coherence,
    check_indiscernible,
    coloring_target,
    derive_homogeneous,
    em_model,
    extract_blueprint,
)

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "ClassKind",
    "FinStructure",
    "linear_order",
    "disjoint_orders",
    "colored_order",
    "tree_class",
    "convex_equivalence",
    "ordered_graphs",
    "hypergraphs",
    "make_canonical",
    "is_member",
    "is_big",
    "subset_closure",
    "subset_induces_member",
    "subset_is_big",
    "induced_substructure",
    "embeds_canonically",
    "embed_canonical",
    "is_embedding",
    "TupleType",
    "tuple_type",
    "restrict_type",
    "enumerate_types",
    "Coloring",
    "random_coloring",
    "HomogeneityWitness",
    "type_homogeneity_witness",
    "SearchResult",
    "find_type_homogeneous",
    "iter_big_member_subsets",
    "ArrowQuery",
    "Verdict",
    "arrow_check",
    "verify_refutation",
    "TableReport",
    "ramsey_table",
    "SearchSpaceTooLarge",
    "StageRecord",
    "ReductionReport",
    "aux_coloring_chicolor",
    "reduce_chicolor",
    "aux_coloring_ceq",
    "reduce_ceq",
    "Term",
    "OutputSignature",
    "enumerate_terms",
    "Diagram",
    "TargetStructure",
    "model_diagram",
    "Blueprint",
    "check_coherence",
    "EmModel",
    "em_model",
    "check_indiscernible",
    "ExtractReport",
    "extract_blueprint",
    "DeriveResult",
    "derive_homogeneous",
    "coloring_target",
    "BlueprintDomainError",
    "SupportOverflowError",
    "InternalCheckError",
]
