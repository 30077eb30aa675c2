"""Normal quotients, covering projections, and voltage covers.

Quotients of a graph by a group of automorphisms are taken orbit-wise on
vertices and darts; the projection is a covering exactly when the group is
semiregular on vertices (the equivalence the test suite exercises).
Regular covers over GF(p)^d are built from voltage assignments with
inverse-dart antisymmetry; cover vertices and darts are indexed
lexicographically by (base index, vector in little-endian base-p order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hatd4 import gfp
from hatd4.graphs import DTYPE, Graph, GraphError
from hatd4.perms import PermGroup
from hatd4.symmetry import GraphAction


class CoverError(GraphError):
    pass


@dataclass(frozen=True)
class Projection:
    source: Graph
    target: Graph
    vertex_map: np.ndarray
    dart_map: np.ndarray

    def __post_init__(self):
        vm = np.asarray(self.vertex_map, dtype=DTYPE)
        dm = np.asarray(self.dart_map, dtype=DTYPE)
        s, t = self.source, self.target
        if len(vm) != s.n or len(dm) != s.m:
            raise CoverError("projection maps do not match the source graph")
        if len(np.unique(vm)) != t.n or len(np.unique(dm)) != t.m:
            raise CoverError("projection must be surjective on vertices and darts")
        if not np.array_equal(t.beg[dm], vm[s.beg]):
            raise CoverError("projection does not commute with beg")
        if not np.array_equal(t.inv[dm], dm[s.inv]):
            raise CoverError("projection does not commute with inv")
        object.__setattr__(self, "vertex_map", vm)
        object.__setattr__(self, "dart_map", dm)

    def fibre_sizes(self):
        return np.bincount(self.vertex_map, minlength=self.target.n)


def identity_projection(g: Graph) -> Projection:
    return Projection(g, g, np.arange(g.n, dtype=DTYPE), np.arange(g.m, dtype=DTYPE))


def compose(p2: Projection, p1: Projection) -> Projection:
    """p2 after p1 (target of p1 must be the source of p2)."""
    if p1.target != p2.source:
        raise CoverError("projections do not compose: target/source mismatch")
    return Projection(p1.source, p2.target,
                      p2.vertex_map[p1.vertex_map], p2.dart_map[p1.dart_map])


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------


def _orbit_ids(degree, gens, count_hint=None):
    """Orbit label per point (labels dense, ordered by minimal element)."""
    orb = np.arange(degree, dtype=DTYPE)
    changed = True
    while changed:
        changed = False
        for g in gens:
            m = np.minimum(orb, orb[g])
            if not np.array_equal(m, orb):
                orb = m
                changed = True
        while True:
            m2 = orb[orb]
            if np.array_equal(m2, orb):
                break
            orb = m2
    reps, ids = np.unique(orb, return_inverse=True)
    return ids.astype(DTYPE), reps


def quotient(g: Graph, action: GraphAction):
    """Quotient graph by the orbits of the acting group, with its projection."""
    if action.graph != g:
        raise CoverError("action does not act on this graph")
    gens = action.group.gens
    vids, _ = _orbit_ids(g.n, [p[: g.n] for p in gens])
    dids, dreps = _orbit_ids(g.m, [p[g.n :] - g.n for p in gens]) if g.m else (
        np.zeros(0, dtype=DTYPE), np.zeros(0, dtype=DTYPE))
    nq = int(vids.max()) + 1 if g.n else 0
    mq = len(dreps)
    beg_q = np.empty(mq, dtype=DTYPE)
    inv_q = np.empty(mq, dtype=DTYPE)
    beg_q[dids] = vids[g.beg]
    inv_q[dids] = dids[g.inv]
    quot = Graph(nq, beg_q, inv_q)
    return quot, Projection(g, quot, vids, dids)


def is_covering(proj: Projection) -> bool:
    """Local bijectivity of the dart restriction at every vertex."""
    s, t = proj.source, proj.target
    if not (s.is_connected() and t.is_connected()):
        raise CoverError("covering test requires connected graphs")
    val_t = t.valences()
    indptr, darts = s.darts_by_vertex()
    for v in range(s.n):
        mine = darts[indptr[v] : indptr[v + 1]]
        imgs = proj.dart_map[mine]
        if len(np.unique(imgs)) != len(mine):
            return False
        if len(mine) != val_t[proj.vertex_map[v]]:
            return False
    return True


@dataclass(frozen=True)
class LemmaNQReport:
    semiregular: bool
    valence_preserving: bool
    covering: bool


def check_lemma_nq(g: Graph, action: GraphAction) -> LemmaNQReport:
    """The three independently computed quotient predicates (their
    equivalence is what the randomized suite asserts)."""
    if not g.is_connected():
        raise CoverError("quotient predicates require a connected graph")
    order = action.group.order()
    semiregular = True
    seen = set()
    for v in range(g.n):
        if v in seen:
            continue
        orb = action.group.orbit(v)
        seen |= orb
        if len(orb) != order:
            semiregular = False
            break
    quot, proj = quotient(g, action)
    val_ok = bool(np.all(g.valences() == quot.valences()[proj.vertex_map]))
    covering = is_covering(proj)
    return LemmaNQReport(semiregular, val_ok, covering)


def quotient_group_action(big: GraphAction, normal: GraphAction, proj: Projection) -> GraphAction:
    """Faithful action of G/N on the quotient graph along a covering quotient.

    Checks normality of N in G, that proj is the covering quotient by N, and
    that the induced action has order |G|/|N| (faithfulness).
    """
    g = big.graph
    if normal.graph != g:
        raise CoverError("subgroup acts on a different graph")
    if not is_covering(proj):
        raise CoverError("quotient projection is not a covering")
    for ngen in normal.group.gens:
        if not big.group.contains(ngen):
            raise CoverError("N is not contained in G")
    for ggen in big.group.gens:
        ginv = np.empty_like(ggen)
        ginv[ggen] = np.arange(len(ggen), dtype=ggen.dtype)
        for ngen in normal.group.gens:
            conj = ggen[ngen[ginv]]
            if not normal.group.contains(conj):
                raise CoverError("N is not normal in G")
    quot = proj.target
    t = np.concatenate([proj.vertex_map, proj.dart_map + quot.n])
    induced = []
    for ggen in big.group.gens:
        out = np.full(quot.n + quot.m, -1, dtype=DTYPE)
        out[t] = t[ggen]
        if np.any(out < 0) or not np.array_equal(out[t], t[ggen]):
            raise CoverError("group action does not descend to the quotient")
        induced.append(out)
    want = big.group.order() // normal.group.order()
    grp = PermGroup(quot.n + quot.m, induced, known_order=want)
    if grp.order() != want:
        raise CoverError("quotient action is not faithful: %d != %d"
                         % (grp.order(), want))
    return GraphAction(quot, grp)


# ---------------------------------------------------------------------------
# voltage assignments and derived covers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VoltageAssignment:
    base: Graph
    p: int
    d: int
    volt: np.ndarray  # (m, d) entries mod p

    def __post_init__(self):
        g = self.base
        if g.semiedge_darts().size:
            raise CoverError("voltage base graphs must not have semiedges")
        v = gfp.normalize(self.volt, self.p).reshape(g.m, self.d)
        if np.any((v + v[g.inv]) % self.p):
            raise CoverError("voltages must negate along inverse darts")
        object.__setattr__(self, "volt", v)

    def cotree_span_rank(self, tree_mask=None):
        if tree_mask is None:
            tree_mask = spanning_tree_mask(self.base)
        cot = self.volt[~tree_mask]
        return gfp.rank(cot, self.p) if len(cot) else 0


def spanning_tree(g: Graph):
    """BFS tree from vertex 0, darts explored in id order.

    Returns (parent_dart, order) where parent_dart[v] is the dart leading
    from the parent of v to v (-1 at the root) and order is the BFS order.
    """
    if not g.is_connected():
        raise CoverError("spanning tree requires a connected graph")
    parent_dart = np.full(g.n, -1, dtype=DTYPE)
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    order = [0]
    ends = g.end()
    indptr, darts = g.darts_by_vertex()
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for x in darts[indptr[v] : indptr[v + 1]]:
            w = int(ends[x])
            if not seen[w]:
                seen[w] = True
                parent_dart[w] = x
                order.append(w)
    return parent_dart, np.array(order, dtype=DTYPE)


def spanning_tree_mask(g: Graph):
    parent_dart, _ = spanning_tree(g)
    mask = np.zeros(g.m, dtype=bool)
    used = parent_dart[parent_dart >= 0]
    mask[used] = True
    mask[g.inv[used]] = True
    return mask


def derived_cover(zeta: VoltageAssignment):
    """Derived graph of a voltage assignment, with the forgetful projection.

    Cover vertex (v, a) gets index v*p^d + enc(a), little-endian digits.
    """
    g = zeta.base
    p, d = zeta.p, zeta.d
    q = p**d
    tree_mask = spanning_tree_mask(g)
    span = zeta.cotree_span_rank(tree_mask)
    if span != d:
        raise CoverError(
            "voltages span only a %d-dimensional subspace of GF(%d)^%d; cover disconnected"
            % (span, p, d)
        )
    powers = p ** np.arange(d, dtype=np.int64) if d else np.zeros(0, dtype=np.int64)
    vecs = np.zeros((q, d), dtype=np.int64)
    for k in range(1, q):
        rem = k
        for i in range(d):
            vecs[k, i] = rem % p
            rem //= p
    n2 = g.n * q
    m2 = g.m * q
    beg2 = np.empty(m2, dtype=DTYPE)
    inv2 = np.empty(m2, dtype=DTYPE)
    base_idx = np.arange(q, dtype=np.int64)
    for x in range(g.m):
        rows = x * q + base_idx
        beg2[rows] = int(g.beg[x]) * q + base_idx
        vx = zeta.volt[x]
        if np.any(vx):
            shifted = (vecs + vx) % p
            target = shifted @ powers
        else:
            target = base_idx
        inv2[rows] = int(g.inv[x]) * q + target
    cover = Graph(n2, beg2, inv2)
    vm = (np.arange(n2, dtype=np.int64) // q).astype(DTYPE)
    dm = (np.arange(m2, dtype=np.int64) // q).astype(DTYPE)
    proj = Projection(cover, g, vm, dm)
    if not cover.is_connected():
        raise CoverError("derived cover unexpectedly disconnected")
    return cover, proj


def translation_action(zeta: VoltageAssignment, cover: Graph) -> GraphAction:
    """The GF(p)^d translation group acting on the derived cover."""
    g = zeta.base
    p, d = zeta.p, zeta.d
    q = p**d
    gens = []
    for i in range(d):
        shift = p**i
        base = np.arange(q, dtype=np.int64)
        digit = (base // shift) % p
        tgt = base + shift - np.where(digit == p - 1, p * shift, 0)
        vperm = (np.repeat(np.arange(g.n, dtype=np.int64) * q, q)
                 + np.tile(tgt, g.n)).astype(DTYPE)
        dperm = (np.repeat(np.arange(g.m, dtype=np.int64) * q, q)
                 + np.tile(tgt, g.m)).astype(DTYPE)
        gens.append((vperm, dperm))
    return GraphAction.from_vertex_dart(cover, gens, known_order=q)


# ---------------------------------------------------------------------------
# voltage files
# ---------------------------------------------------------------------------


def read_voltages(path, base: Graph) -> VoltageAssignment:
    p = d = None
    volt = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if p is None:
                if parts[0] != "voltage" or len(parts) != 3:
                    raise CoverError("%s:%d: expected 'voltage <p> <d>'" % (path, lineno))
                p, d = int(parts[1]), int(parts[2])
                volt = np.zeros((base.m, d), dtype=np.int64)
                continue
            if len(parts) != d + 1:
                raise CoverError("%s:%d: expected dart id and %d coordinates"
                                 % (path, lineno, d))
            x = int(parts[0])
            if not (0 <= x < base.m):
                raise CoverError("%s:%d: dart %d out of range" % (path, lineno, x))
            if x > int(base.inv[x]):
                raise CoverError("%s:%d: voltages belong on the smaller dart of an edge"
                                 % (path, lineno))
            vec = np.array([int(c) for c in parts[1:]], dtype=np.int64) % p
            volt[x] = vec
            volt[base.inv[x]] = (-vec) % p
    if p is None:
        raise CoverError("%s: empty voltage file" % path)
    return VoltageAssignment(base, p, d, volt)


def write_voltages(zeta: VoltageAssignment, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("voltage %d %d\n" % (zeta.p, zeta.d))
        for x in map(int, zeta.base.edges()):
            if np.any(zeta.volt[x]):
                fh.write("%d %s\n" % (x, " ".join(str(int(c)) for c in zeta.volt[x])))
