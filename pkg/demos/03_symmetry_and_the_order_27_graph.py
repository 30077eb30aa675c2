"""Automorphisms, transitivity classification, and the smallest
half-arc-transitive graph (order 27, tetravalent)."""

from hatd4 import census
from hatd4.graphs import read_graph, structural_profile
from hatd4.symmetry import aut_group, extract_digraph, transitivity_profile

holt = read_graph(census.packaged_holt_path())
print("fixture:", structural_profile(holt))

act = aut_group(holt)
print("|Aut| =", act.group.order())

prof = transitivity_profile(holt, act)
print("classification:", prof.classification)
print("vertex/edge/dart transitive:", prof.vertex_transitive,
      prof.edge_transitive, prof.dart_transitive)

dig = extract_digraph(holt, act)
print("associated 2-valent digraph: out-valences all 2 ->",
      set(map(int, dig.out_valences())))
