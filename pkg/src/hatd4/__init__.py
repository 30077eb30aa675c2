"""Tetravalent half-arc-transitive census machinery.

Dart-based graphs, permutation groups with stabiliser chains, graph
symmetry classification, regular covers via voltage assignments, homology
modules over GF(p) with invariant-submodule search, and the census driver
that chains them together.
"""

from hatd4.graphs import (
    Graph,
    GraphError,
    from_simple_edges,
    doubled_cycle,
    four_semiedge_vertex,
    structural_profile,
    certificate,
    read_graph,
    write_graph,
)
from hatd4.perms import Perm, PermGroup, read_group_file, write_group_file
from hatd4.symmetry import (
    GraphAction,
    aut_group,
    transitivity_profile,
    extract_digraph,
    digraph_aut,
    is_relevant_pair,
)
from hatd4.covers import (
    Projection,
    VoltageAssignment,
    quotient,
    is_covering,
    check_lemma_nq,
    derived_cover,
)
from hatd4.homology import homology_rep, minimal_admissible_covers
from hatd4.universal import epimorphism_search, coset_graph, dedupe_pairs
from hatd4.census import CensusConfig, run_census, verify_tables

__all__ = [
    "Graph",
    "GraphError",
    "from_simple_edges",
    "doubled_cycle",
    "four_semiedge_vertex",
    "structural_profile",
    "certificate",
    "read_graph",
    "write_graph",
    "Perm",
    "PermGroup",
    "read_group_file",
    "write_group_file",
    "GraphAction",
    "aut_group",
    "transitivity_profile",
    "extract_digraph",
    "digraph_aut",
    "is_relevant_pair",
    "Projection",
    "VoltageAssignment",
    "quotient",
    "is_covering",
    "check_lemma_nq",
    "derived_cover",
    "homology_rep",
    "minimal_admissible_covers",
    "epimorphism_search",
    "coset_graph",
    "dedupe_pairs",
    "CensusConfig",
    "run_census",
    "verify_tables",
]
