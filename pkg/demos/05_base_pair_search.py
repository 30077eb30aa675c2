"""Finding the base pairs: epimorphisms of the universal group onto the
catalog groups, reconstructed as coset graphs.

The order-42 pair over PGL(2,7) is the smallest: the graph is tetravalent
with 42 vertices, the group acts half-arc-transitively with a dihedral
vertex-stabiliser of order 8, and the full automorphism group (order 672)
is arc-transitive.
"""

from hatd4 import census
from hatd4.symmetry import aut_group, is_relevant_pair, transitivity_profile
from hatd4.universal import coset_graph, epimorphism_search

catalog = {g.name: g for g in census.load_catalog(census.packaged_catalog_dir())}

for name in ("psl_2_7", "pgl_2_7", "alt_6", "sym_6", "pgl_2_9", "m10", "psl_2_17"):
    ws = epimorphism_search(catalog[name])
    print("%-9s order %6d: %d witness classes" % (name, catalog[name].order(), len(ws)))
    for w in ws[:1]:
        graph, action = coset_graph(catalog[name], w.stabiliser_group(), w.g)
        aut = aut_group(graph)
        print("    -> pair of order %d, |G| = %d, relevant: %s, |Aut| = %d (%s)"
              % (graph.n, action.group.order(), is_relevant_pair(graph, action),
                 aut.group.order(), transitivity_profile(graph, aut).classification))
