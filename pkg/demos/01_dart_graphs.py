"""Dart-based graphs: construction, structure, and files.

A graph is (darts, vertices, beg, inv): beg sends a dart to its initial
vertex, inv pairs each dart with its reverse.  Semiedges (inv-fixed darts),
loops, and parallel links are all legal, which is exactly what makes
quotients by arbitrary automorphism groups stay inside the category.
"""

import tempfile
from pathlib import Path

from hatd4 import (doubled_cycle, four_semiedge_vertex, from_simple_edges,
                   read_graph, structural_profile, write_graph)

triangle = from_simple_edges(3, [(0, 1), (1, 2), (0, 2)])
print("triangle:", triangle, structural_profile(triangle))

# the doubled cycle: the cycle on n vertices with each edge doubled
for n in (1, 2, 5):
    g = doubled_cycle(n)
    print("doubled cycle n=%d:" % n, structural_profile(g))

print("four semiedges:", structural_profile(four_semiedge_vertex()))

# round-trip through the dart-table format
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "dc4.graph"
    write_graph(doubled_cycle(4), path)
    print("file round-trip equal:", read_graph(path) == doubled_cycle(4))
    print("--- dart table ---")
    print(path.read_text()[:120], "...")
