"""The stretch computation: level-1 covers of the order-5040 pair.

The base group is the degree-8 symmetric group (order 40320); the graph has
5040 vertices, so the homology module is 5041-dimensional and the only
budgeted prime is 2.  The bit-packed GF(2) path finds the common fixed
space of the dual generators in a few seconds; there are exactly 3 covers.

Expect roughly a minute of wall time.
"""

import time

from hatd4 import census
from hatd4.homology import minimal_admissible_covers
from hatd4.symmetry import is_relevant_pair
from hatd4.universal import coset_graph, epimorphism_search

catalog = {g.name: g for g in census.load_catalog(census.packaged_catalog_dir())}
s8 = catalog["sym_8"]

t0 = time.time()
w = epimorphism_search(s8)[0]
graph, action = coset_graph(s8, w.stabiliser_group(), w.g)
print("pair of order %d over %s (%.1fs)" % (graph.n, s8.name, time.time() - t0))

t0 = time.time()
covers = minimal_admissible_covers(graph, action, 10752)
print("level-1 covers within 10752:", len(covers), "(%.1fs)" % (time.time() - t0))
for lp in covers:
    print("   ", lp.metadata_line("id12"), "relevant:",
          is_relevant_pair(lp.cover, lp.action))
