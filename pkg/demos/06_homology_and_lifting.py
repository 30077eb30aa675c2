"""Minimal admissible covers from homology: the order-42 pair has exactly 56
of them below the order bound 10752 (one per prime up to 251 plus two more
over GF(2) of degrees 2^6 and 2^8)."""

import time

from hatd4 import census
from hatd4.homology import cover_budget, homology_rep, minimal_admissible_covers

cfg = census.CensusConfig(max_order=700, max_level=0)
pairs, _ = census.base_pairs(cfg)
pair = next(p for p in pairs if p.graph.n == 42)

mod = homology_rep(pair.graph, pair.action, 2)
print("homology dimension over GF(2):", mod.dim, "(= 84 - 42 + 1)")
print("budget (p, dmax) for max order 10752:",
      cover_budget(42, 10752)[:6], "... up to p = 251")

t0 = time.time()
covers = minimal_admissible_covers(pair.graph, pair.action, 10752)
print("minimal admissible covers:", len(covers), "in %.1fs" % (time.time() - t0))
for lp in covers[:5]:
    print("   ", lp.metadata_line("pair-42"))
print("    ...")
