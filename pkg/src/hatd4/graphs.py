"""Dart-based graphs: (darts, vertices, beg, inv) with semiedges allowed.

A graph is a pair of arrays over dart indices 0..m-1: ``beg`` maps a dart
to its initial vertex and ``inv`` is an involution pairing each dart with
its reverse.  Edges are the orbits of ``inv``; an edge is a semiedge when
fixed, a loop when both darts start at the same vertex, and a link
otherwise.  This is the graph model in which quotients by arbitrary
subgroups stay graphs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DTYPE = np.int32


class GraphError(ValueError):
    pass


class Graph:
    __slots__ = ("n", "m", "beg", "inv", "_cache")

    def __init__(self, n, beg, inv, validate=True):
        self.n = int(n)
        self.beg = np.asarray(beg, dtype=DTYPE)
        self.inv = np.asarray(inv, dtype=DTYPE)
        self.m = len(self.beg)
        self._cache = {}
        if validate:
            if self.n < 1:
                raise GraphError("a graph needs at least one vertex")
            if len(self.inv) != self.m:
                raise GraphError("beg and inv must have equal length")
            if self.m and (self.beg.min() < 0 or self.beg.max() >= self.n):
                raise GraphError("beg maps outside the vertex range")
            if self.m and (self.inv.min() < 0 or self.inv.max() >= self.m):
                raise GraphError("inv maps outside the dart range")
            bad = np.nonzero(self.inv[self.inv] != np.arange(self.m, dtype=DTYPE))[0]
            if bad.size:
                raise GraphError("inv not involution at dart %d" % int(bad[0]))
        self.beg.setflags(write=False)
        self.inv.setflags(write=False)

    # -- basic accessors -----------------------------------------------------

    def __repr__(self):
        return "<Graph n=%d m=%d>" % (self.n, self.m)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and np.array_equal(self.beg, other.beg)
            and np.array_equal(self.inv, other.inv)
        )

    def __hash__(self):
        return hash((self.n, self.beg.tobytes(), self.inv.tobytes()))

    def end(self, x=None):
        """Terminal vertex of a dart (initial vertex of its inverse)."""
        if x is None:
            return self.beg[self.inv]
        return int(self.beg[self.inv[x]])

    def valences(self):
        return np.bincount(self.beg, minlength=self.n)

    def neighbourhood(self, v):
        """Darts with initial vertex v."""
        return np.nonzero(self.beg == v)[0]

    def darts_by_vertex(self):
        """CSR-style (indptr, darts sorted by initial vertex)."""
        key = "csr"
        if key not in self._cache:
            order = np.argsort(self.beg, kind="stable")
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(np.bincount(self.beg, minlength=self.n), out=indptr[1:])
            self._cache[key] = (indptr, order.astype(DTYPE))
        return self._cache[key]

    def edges(self):
        """Positive dart of each edge (min of the inv-orbit), ascending."""
        key = "edges"
        if key not in self._cache:
            pos = np.nonzero(np.arange(self.m, dtype=DTYPE) <= self.inv)[0]
            self._cache[key] = pos.astype(DTYPE)
        return self._cache[key]

    def edge_index(self):
        """Array mapping each dart to its edge id (edges() order)."""
        key = "edge_index"
        if key not in self._cache:
            pos = self.edges()
            idx = np.empty(self.m, dtype=DTYPE)
            idx[pos] = np.arange(len(pos), dtype=DTYPE)
            idx[self.inv[pos]] = np.arange(len(pos), dtype=DTYPE)
            self._cache[key] = idx
        return self._cache[key]

    def semiedge_darts(self):
        return np.nonzero(self.inv == np.arange(self.m, dtype=DTYPE))[0]

    def is_connected(self):
        key = "connected"
        if key not in self._cache:
            self._cache[key] = self._component_of(0) == self.n
        return self._cache[key]

    def _component_of(self, start):
        seen = np.zeros(self.n, dtype=bool)
        seen[start] = True
        frontier = [start]
        ends = self.end()
        indptr, darts = self.darts_by_vertex()
        count = 1
        while frontier:
            v = frontier.pop()
            for x in darts[indptr[v] : indptr[v + 1]]:
                w = ends[x]
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    frontier.append(int(w))
        return count


@dataclass(frozen=True)
class StructuralProfile:
    connected: bool
    simple: bool
    valences: tuple
    semiedges: int
    loops: int
    parallel_classes: int


@dataclass(frozen=True)
class GraphCertificate:
    data: bytes

    def hex(self, length=16):
        import hashlib

        return hashlib.sha256(self.data).hexdigest()[:length]


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def from_simple_edges(n, edge_list):
    """Graph of a simple graph given by unordered vertex pairs."""
    norm = []
    seen = set()
    for u, v in edge_list:
        u, v = int(u), int(v)
        if u == v:
            raise GraphError("self-pair {%d,%d} not allowed in a simple graph" % (u, v))
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError("edge endpoint out of range: (%d,%d)" % (u, v))
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError("duplicate edge {%d,%d}" % key)
        seen.add(key)
        norm.append(key)
    norm.sort()
    m = 2 * len(norm)
    beg = np.empty(m, dtype=DTYPE)
    inv = np.empty(m, dtype=DTYPE)
    for k, (u, v) in enumerate(norm):
        beg[2 * k] = u
        beg[2 * k + 1] = v
        inv[2 * k] = 2 * k + 1
        inv[2 * k + 1] = 2 * k
    return Graph(n, beg, inv)


def doubled_cycle(n):
    """Cycle on n vertices with every edge doubled; dart (i,eps,j) -> 4i+2eps+j."""
    if n < 1:
        raise GraphError("doubled cycle needs n >= 1")
    m = 4 * n
    beg = np.repeat(np.arange(n, dtype=DTYPE), 4)
    inv = np.empty(m, dtype=DTYPE)
    for i in range(n):
        for eps in (0, 1):
            for j in (0, 1):
                x = 4 * i + 2 * eps + j
                target_i = (i + (1 if eps == 0 else -1)) % n
                inv[x] = 4 * target_i + 2 * (1 - eps) + j
    return Graph(n, beg, inv)


def four_semiedge_vertex():
    """Single vertex with four semiedges."""
    return Graph(1, np.zeros(4, dtype=DTYPE), np.arange(4, dtype=DTYPE))


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------


def structural_profile(g: Graph) -> StructuralProfile:
    darts = np.arange(g.m, dtype=DTYPE)
    semi = int(np.count_nonzero(g.inv == darts))
    pos = g.edges()
    ends = g.end()
    loops = 0
    pair_count = {}
    for x in pos:
        y = int(g.inv[x])
        if y == x:
            continue
        u, w = int(g.beg[x]), int(ends[x])
        if u == w:
            loops += 1
        else:
            key = (min(u, w), max(u, w))
            pair_count[key] = pair_count.get(key, 0) + 1
    parallel = sum(1 for c in pair_count.values() if c >= 2)
    simple = semi == 0 and loops == 0 and parallel == 0
    return StructuralProfile(
        connected=g.is_connected(),
        simple=simple,
        valences=tuple(sorted(int(v) for v in g.valences())),
        semiedges=semi,
        loops=loops,
        parallel_classes=parallel,
    )


def certificate(g: Graph) -> GraphCertificate:
    """Canonical byte certificate; equal certificates iff isomorphic graphs."""
    if not g.is_connected():
        raise GraphError("certificate requires a connected graph")
    from hatd4 import canon

    return GraphCertificate(canon.certificate_bytes(g))


# ---------------------------------------------------------------------------
# normal forms for non-simple tetravalent edge-transitive graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DoubledCycleForm:
    n: int
    vertex_map: tuple  # this graph -> doubled_cycle(n)
    dart_map: tuple


@dataclass(frozen=True)
class FourSemiedgesForm:
    dart_map: tuple


NOT_APPLICABLE = "not-applicable"


def classify_nonsimple_tetravalent_et(g: Graph, action):
    """Match a connected tetravalent edge-transitive graph against the two
    non-simple normal forms (doubled cycle / four semiedges).

    Returns DoubledCycleForm, FourSemiedgesForm, or NOT_APPLICABLE for a
    simple graph.  The action must be edge-transitive; this is checked.
    """
    from hatd4 import canon, symmetry

    prof = structural_profile(g)
    if not prof.connected:
        raise GraphError("classification requires a connected graph")
    if set(prof.valences) != {4}:
        raise GraphError("classification requires a tetravalent graph")
    tp = symmetry.transitivity_profile(g, action)
    if not tp.edge_transitive:
        raise GraphError("classification requires an edge-transitive action")
    if prof.simple:
        return NOT_APPLICABLE
    if prof.semiedges:
        if g.n == 1 and g.m == 4 and prof.semiedges == 4:
            return FourSemiedgesForm(dart_map=(0, 1, 2, 3))
        raise GraphError("connected tetravalent edge-transitive semiedge graph "
                         "must be the single-vertex form")
    target = doubled_cycle(g.n)
    iso = canon.isomorphism(g, target)
    if iso is None:
        raise GraphError("non-simple edge-transitive graph matches no normal form")
    vmap, dmap = iso
    return DoubledCycleForm(n=g.n, vertex_map=tuple(vmap), dart_map=tuple(dmap))


# ---------------------------------------------------------------------------
# dart-table file format
# ---------------------------------------------------------------------------


def read_graph(path) -> Graph:
    """Read the dart-table format (or the `simple` edge-list variant)."""
    mode = None
    n = m = None
    beg = inv = None
    seen = None
    edges = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if mode is None:
                if parts[0] == "graph" and len(parts) == 3:
                    mode = "graph"
                    n, m = int(parts[1]), int(parts[2])
                    beg = np.full(m, -1, dtype=DTYPE)
                    inv = np.full(m, -1, dtype=DTYPE)
                    seen = np.zeros(m, dtype=bool)
                elif parts[0] == "simple" and len(parts) == 2:
                    mode = "simple"
                    n = int(parts[1])
                else:
                    raise GraphError("%s:%d: expected 'graph <n> <m>' or 'simple <n>'"
                                     % (path, lineno))
                continue
            if mode == "simple":
                if len(parts) != 2:
                    raise GraphError("%s:%d: expected '<u> <v>'" % (path, lineno))
                edges.append((int(parts[0]), int(parts[1])))
                continue
            if len(parts) != 3:
                raise GraphError("%s:%d: expected '<dart> <beg> <inv>'" % (path, lineno))
            x, b, y = int(parts[0]), int(parts[1]), int(parts[2])
            if not (0 <= x < m):
                raise GraphError("%s:%d: dart id %d out of range" % (path, lineno, x))
            if seen[x]:
                raise GraphError("%s:%d: duplicate dart %d" % (path, lineno, x))
            if not (0 <= b < n):
                raise GraphError("%s:%d: beg %d out of range" % (path, lineno, b))
            if not (0 <= y < m):
                raise GraphError("%s:%d: inv %d out of range" % (path, lineno, y))
            seen[x] = True
            beg[x] = b
            inv[x] = y
    if mode is None:
        raise GraphError("%s: empty graph file" % path)
    if mode == "simple":
        return from_simple_edges(n, edges)
    missing = np.nonzero(~seen)[0]
    if missing.size:
        raise GraphError("%s: dart %d has no line" % (path, int(missing[0])))
    bad = np.nonzero(inv[inv] != np.arange(m, dtype=DTYPE))[0]
    if bad.size:
        raise GraphError("%s: inv not involution at dart %d" % (path, int(bad[0])))
    return Graph(n, beg, inv)


def write_graph(g: Graph, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("graph %d %d\n" % (g.n, g.m))
        for x in range(g.m):
            fh.write("%d %d %d\n" % (x, int(g.beg[x]), int(g.inv[x])))
