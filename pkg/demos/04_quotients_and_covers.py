"""Normal quotients and regular covers via voltages.

The quotient equivalence: for a group N acting on a connected graph, semiregular
on vertices <=> valence preserving <=> the quotient projection is a regular
covering with N the covering transformations.
"""

import numpy as np

from hatd4.canon import extend_vertex_map_to_darts
from hatd4.covers import (VoltageAssignment, check_lemma_nq, derived_cover,
                          quotient, spanning_tree_mask, translation_action)
from hatd4.graphs import certificate, from_simple_edges
from hatd4.symmetry import GraphAction


def cycle(n):
    return from_simple_edges(n, [(i, (i + 1) % n) for i in range(n)])


def action(g, vmap):
    vmap = np.asarray(vmap, dtype=np.int32)
    return GraphAction.from_vertex_dart(
        g, [(vmap, extend_vertex_map_to_darts(g, g, vmap))])


c6 = cycle(6)
free = action(c6, [3, 4, 5, 0, 1, 2])       # antipodal rotation, semiregular
print("antipodal rotation:", check_lemma_nq(c6, free))

c4 = cycle(4)
fixing = action(c4, [0, 3, 2, 1])            # reflection with fixed vertices
print("vertex reflection:", check_lemma_nq(c4, fixing))
quot, _ = quotient(c4, fixing)
print("  quotient is a path:", sorted(quot.valences().tolist()))

# a voltage assignment on the triangle: one cotree dart carries 1 over GF(2)
tri = cycle(3)
mask = spanning_tree_mask(tri)
x = int(np.nonzero(~mask)[0][0])
volt = np.zeros((tri.m, 1), dtype=np.int64)
volt[x, 0] = volt[tri.inv[x], 0] = 1
zeta = VoltageAssignment(tri, 2, 1, volt)
cover, proj = derived_cover(zeta)
print("double cover of the triangle is the 6-cycle:",
      certificate(cover).data == certificate(cycle(6)).data)
t = translation_action(zeta, cover)
print("translations:", check_lemma_nq(cover, t))
print("quotient returns the base:",
      certificate(quotient(cover, t)[0]).data == certificate(tri).data)
