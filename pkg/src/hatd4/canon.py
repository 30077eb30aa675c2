"""Partition-backtrack machinery: canonical forms, automorphisms, isomorphism.

The search works on the vertex set of the colored multigraph skeleton of a
dart graph (loops, semiedges and parallel multiplicities become vertex and
edge colors; an optional arc set adds an orientation layer).  Refinement is
the usual counting refinement to the coarsest equitable ordered partition;
the individualization target is the first smallest non-singleton cell.
Leaves are compared through (node-invariant path, leaf encoding); the best
leaf is the canonical labeling, leaves that tie with it yield automorphisms,
discovered automorphisms prune sibling branches through stabiliser orbits
along the first search path, and a tie triggers a backjump to the deepest
common ancestor with the best path.
"""

from __future__ import annotations

from collections import deque

import numpy as np

DTYPE = np.int32


# ---------------------------------------------------------------------------
# skeleton view
# ---------------------------------------------------------------------------


class _View:
    """Vertex-colored weighted skeleton (+ optional arc layer) of a graph."""

    __slots__ = (
        "n", "base_rank", "base_tuple",
        "eu", "ew", "emult",            # one row per unordered link pair
        "au", "aw", "amult",            # one row per ordered arc pair
        "und_indptr", "und_ind", "und_w",
        "out_indptr", "out_ind", "out_w",
        "in_indptr", "in_ind", "in_w",
        "has_arcs",
    )

    def __init__(self, g, colors=None, arcs=None):
        n = g.n
        self.n = n
        darts = np.arange(g.m, dtype=DTYPE)
        semi_mask = g.inv == darts
        ends = g.end()
        loop_mask = (~semi_mask) & (ends == g.beg)
        link_mask = (~semi_mask) & (~loop_mask)

        semis = np.bincount(g.beg[semi_mask], minlength=n)
        loops = np.bincount(g.beg[loop_mask], minlength=n) // 2

        if arcs is not None:
            arcs = np.asarray(arcs, dtype=bool)
            aloops = np.bincount(g.beg[loop_mask & arcs], minlength=n)
            asemis = np.bincount(g.beg[semi_mask & arcs], minlength=n)
        else:
            aloops = np.zeros(n, dtype=np.int64)
            asemis = np.zeros(n, dtype=np.int64)
        ucolor = np.zeros(n, dtype=np.int64) if colors is None else np.asarray(colors, dtype=np.int64)

        base = np.stack([ucolor, semis, loops, aloops, asemis], axis=1).astype(np.int64)
        self.base_tuple = base
        # rank of each distinct base tuple, ascending: initial cell order
        order = np.lexsort(base.T[::-1])
        ranked = np.zeros(n, dtype=np.int64)
        if n > 1:
            diff = np.any(base[order][1:] != base[order][:-1], axis=1)
            ranked[order] = np.concatenate([[0], np.cumsum(diff)])
        self.base_rank = ranked

        # undirected link multiplicities, one row per unordered pair
        lu = g.beg[link_mask].astype(np.int64)
        lw = ends[link_mask].astype(np.int64)
        a = np.minimum(lu, lw)
        b = np.maximum(lu, lw)
        keys = a * n + b
        uniq, counts = np.unique(keys, return_counts=True)
        self.eu = (uniq // n).astype(DTYPE)
        self.ew = (uniq % n).astype(DTYPE)
        self.emult = (counts // 2).astype(np.int64)  # both darts counted

        self.has_arcs = arcs is not None
        if self.has_arcs:
            am = link_mask & arcs
            au = g.beg[am].astype(np.int64)
            aw = ends[am].astype(np.int64)
            akeys = au * n + aw
            uniq, counts = np.unique(akeys, return_counts=True)
            self.au = (uniq // n).astype(DTYPE)
            self.aw = (uniq % n).astype(DTYPE)
            self.amult = counts.astype(np.int64)
        else:
            self.au = np.zeros(0, dtype=DTYPE)
            self.aw = np.zeros(0, dtype=DTYPE)
            self.amult = np.zeros(0, dtype=np.int64)

        self.und_indptr, self.und_ind, self.und_w = _csr(
            n, np.concatenate([self.eu, self.ew]), np.concatenate([self.ew, self.eu]),
            np.concatenate([self.emult, self.emult]))
        self.out_indptr, self.out_ind, self.out_w = _csr(n, self.au, self.aw, self.amult)
        self.in_indptr, self.in_ind, self.in_w = _csr(n, self.aw, self.au, self.amult)


def _csr(n, src, dst, w):
    order = np.argsort(src, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst[order].astype(DTYPE), w[order].astype(np.int64)


def _gather(indptr, ind, w, pts):
    """Concatenated (targets, weights) of the CSR rows of pts."""
    lens = indptr[pts + 1] - indptr[pts]
    total = int(lens.sum())
    if total == 0:
        return np.zeros(0, dtype=DTYPE), np.zeros(0, dtype=np.int64)
    starts = np.repeat(indptr[pts], lens)
    offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(lens) - lens, lens)
    idx = starts + offs
    return ind[idx], w[idx]


# ---------------------------------------------------------------------------
# ordered partitions
# ---------------------------------------------------------------------------


class _Partition:
    __slots__ = ("lab", "pos", "cstart")

    def __init__(self, lab, pos, cstart):
        self.lab = lab
        self.pos = pos
        self.cstart = cstart

    @classmethod
    def from_ranks(cls, ranks):
        n = len(ranks)
        lab = np.argsort(ranks, kind="stable").astype(DTYPE)
        cstart = np.zeros(n, dtype=DTYPE)
        vals = np.asarray(ranks)[lab]
        for i in range(1, n):
            cstart[i] = i if vals[i] != vals[i - 1] else cstart[i - 1]
        pos = np.empty(n, dtype=DTYPE)
        pos[lab] = np.arange(n, dtype=DTYPE)
        return cls(lab, pos, cstart)

    def copy(self):
        return _Partition(self.lab.copy(), self.pos.copy(), self.cstart.copy())

    def is_discrete(self):
        return bool(np.all(self.cstart == np.arange(len(self.cstart), dtype=DTYPE)))

    def colors(self):
        """Cell id (= start position) per vertex."""
        return self.cstart[self.pos]

    def cells(self):
        starts = np.unique(self.cstart)
        ends = np.append(starts[1:], len(self.lab))
        return starts, ends

    def target_cell(self):
        """Start of the first smallest non-singleton cell, or -1."""
        starts, ends = self.cells()
        sizes = ends - starts
        nontriv = sizes > 1
        if not np.any(nontriv):
            return -1, 0
        best = np.min(sizes[nontriv])
        for s, e in zip(starts, ends):
            if e - s == best:
                return int(s), int(best)
        return -1, 0

    def individualize(self, v):
        s = int(self.cstart[self.pos[v]])
        pv = int(self.pos[v])
        u = int(self.lab[s])
        self.lab[s], self.lab[pv] = v, u
        self.pos[v], self.pos[u] = s, pv
        e = s + 1
        while e < len(self.lab) and self.cstart[e] == s:
            e += 1
        self.cstart[s + 1 : e] = s + 1


def _refine(part: _Partition, view: _View, splitters: deque):
    """Counting refinement to the coarsest equitable partition (in place)."""
    n = view.n
    key = np.zeros(n, dtype=np.int64)
    big = np.int64(max(int(view.emult.sum()) + int(view.amult.sum()), 1) * 4 + 2)
    while splitters:
        w = splitters.popleft()
        t0, w0 = _gather(view.und_indptr, view.und_ind, view.und_w, w)
        touched = [t0]
        np.add.at(key, t0, w0 * big * big)
        if view.has_arcs:
            t1, w1 = _gather(view.in_indptr, view.in_ind, view.in_w, w)
            np.add.at(key, t1, w1 * big)
            t2, w2 = _gather(view.out_indptr, view.out_ind, view.out_w, w)
            np.add.at(key, t2, w2)
            touched.extend([t1, t2])
        touched = np.unique(np.concatenate(touched))
        if touched.size == 0:
            continue
        cids = np.unique(part.cstart[part.pos[touched]])
        for s in cids:
            s = int(s)
            e = s + 1
            lab = part.lab
            while e < n and part.cstart[e] == s:
                e += 1
            if e - s == 1:
                continue
            members = lab[s:e]
            vals = key[members]
            if vals.max() == vals.min():
                continue
            order = np.argsort(vals, kind="stable")
            members = members[order]
            vals = vals[order]
            lab[s:e] = members
            part.pos[members] = np.arange(s, e, dtype=DTYPE)
            breaks = np.nonzero(vals[1:] != vals[:-1])[0] + 1
            frag_starts = np.concatenate([[0], breaks])
            frag_ends = np.concatenate([breaks, [e - s]])
            sizes = frag_ends - frag_starts
            largest = int(np.argmax(sizes))
            for k, (fs, fe) in enumerate(zip(frag_starts, frag_ends)):
                part.cstart[s + fs : s + fe] = s + fs
                if k != largest:
                    splitters.append(members[fs:fe].copy())
            splitters.append(members[frag_starts[largest]:frag_ends[largest]].copy())
        key[touched] = 0


def _node_invariant(part: _Partition, view: _View):
    starts, ends = part.cells()
    c = part.colors()
    pieces = [starts.astype(np.int64).tobytes(),
              (ends - starts).astype(np.int64).tobytes(),
              view.base_rank[part.lab[starts]].tobytes()]
    n = view.n
    cu = c[view.eu].astype(np.int64)
    cw = c[view.ew].astype(np.int64)
    k = np.minimum(cu, cw) * n + np.maximum(cu, cw)
    uk, inv_ = np.unique(k, return_inverse=True)
    sums = np.bincount(inv_, weights=view.emult.astype(np.float64)).astype(np.int64)
    pieces.append(uk.tobytes())
    pieces.append(sums.tobytes())
    if view.has_arcs:
        ka = c[view.au].astype(np.int64) * n + c[view.aw].astype(np.int64)
        uk, inv_ = np.unique(ka, return_inverse=True)
        sums = np.bincount(inv_, weights=view.amult.astype(np.float64)).astype(np.int64)
        pieces.append(uk.tobytes())
        pieces.append(sums.tobytes())
    return b"".join(pieces)


def _leaf_bytes(part: _Partition, view: _View):
    lam = part.pos.astype(np.int64)  # vertex -> canonical position
    pieces = [np.int64(view.n).tobytes(), view.base_tuple[part.lab].tobytes()]
    if len(view.eu):
        a = lam[view.eu]
        b = lam[view.ew]
        rows = np.stack([np.minimum(a, b), np.maximum(a, b), view.emult], axis=1)
        rows = rows[np.lexsort(rows.T[::-1])]
        pieces.append(rows.tobytes())
    pieces.append(b"|arcs|")
    if view.has_arcs and len(view.au):
        rows = np.stack([lam[view.au], lam[view.aw], view.amult], axis=1)
        rows = rows[np.lexsort(rows.T[::-1])]
        pieces.append(rows.tobytes())
    return b"".join(pieces)


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


class _Frame:
    __slots__ = ("part", "state", "cands", "idx", "explored", "on_spine", "_inv")

    def __init__(self, part, state):
        self.part = part
        self.state = state
        self.cands = None
        self.idx = 0
        self.explored = []
        self.on_spine = False
        self._inv = b""


class CanonResult:
    __slots__ = ("cert", "labeling", "aut_gens", "leaves")

    def __init__(self, cert, labeling, aut_gens, leaves):
        self.cert = cert
        self.labeling = labeling  # vertex -> canonical position
        self.aut_gens = aut_gens  # vertex permutations
        self.leaves = leaves


def _orbit_labels(n, gens):
    orb = np.arange(n, dtype=DTYPE)
    if not gens:
        return orb
    changed = True
    while changed:
        changed = False
        for g in gens:
            m = np.minimum(orb, orb[g])
            m = np.minimum(m, m[g])
            if not np.array_equal(m, orb):
                orb = m
                changed = True
    # flatten to representatives
    while True:
        m = orb[orb]
        if np.array_equal(m, orb):
            break
        orb = m
    return orb


def search(view: _View) -> CanonResult:
    n = view.n
    root = _Partition.from_ranks(view.base_rank)
    q = deque(root.lab[s:e].copy() for s, e in zip(*root.cells()))
    _refine(root, view, q)

    best_path = []      # node invariant per depth (1-based)
    best_prefix = []
    best_leaf = None
    best_lab = None
    gens = []
    spine = None
    leaves = 0
    backjump = None

    frames = [_Frame(root, "gt")]
    prefix = []

    while frames:
        if backjump is not None:
            if len(frames) - 1 > backjump:
                frames.pop()
                if prefix:
                    prefix.pop()
                continue
            backjump = None
        fr = frames[-1]
        if fr.cands is None:
            tc, _size = fr.part.target_cell()
            if tc < 0:
                # leaf
                leaves += 1
                lb = _leaf_bytes(fr.part, view)
                if best_leaf is None or fr.state == "gt" or lb > best_leaf:
                    best_leaf = lb
                    best_lab = fr.part.pos.copy()
                    best_prefix = list(prefix)
                    if spine is None:
                        spine = list(prefix)
                    for f in frames:
                        f.state = "eq"
                elif fr.state == "eq" and lb == best_leaf:
                    sigma = best_lab_inverse(best_lab)[fr.part.pos]
                    if not np.array_equal(sigma, np.arange(n, dtype=DTYPE)):
                        gens.append(sigma.astype(DTYPE))
                    div = 0
                    while (div < len(prefix) and div < len(best_prefix)
                           and prefix[div] == best_prefix[div]):
                        div += 1
                    backjump = div
                frames.pop()
                if prefix:
                    prefix.pop()
                continue
            fr.cands = np.sort(fr.part.lab[tc : tc + _size].copy())
            fr.on_spine = spine is None or list(prefix) == spine[: len(prefix)]
        if fr.idx >= len(fr.cands):
            frames.pop()
            if prefix:
                prefix.pop()
            continue
        v = int(fr.cands[fr.idx])
        fr.idx += 1
        if fr.on_spine and fr.explored and gens:
            fixing = [g for g in gens if all(g[u] == u for u in prefix)]
            if fixing:
                orb = _orbit_labels(n, fixing)
                if any(orb[v] == orb[u] for u in fr.explored):
                    continue
        fr.explored.append(v)
        child = fr.part.copy()
        child.individualize(v)
        _refine(child, view, deque([np.array([v], dtype=DTYPE)]))
        inv_bytes = _node_invariant(child, view)
        depth = len(prefix)  # child depth-1 index into best_path
        state = fr.state
        if state == "eq" and best_leaf is not None:
            ref = best_path[depth] if depth < len(best_path) else None
            if ref is not None:
                if inv_bytes < ref:
                    continue
                if inv_bytes > ref:
                    state = "gt"
        nf = _Frame(child, state)
        nf._inv = inv_bytes
        frames.append(nf)
        prefix.append(v)
        # best_path bookkeeping: grow provisional path when strictly better
        if state == "gt":
            if len(best_path) <= depth:
                best_path.extend([None] * (depth + 1 - len(best_path)))
            best_path[depth] = inv_bytes
            best_path[depth + 1 :] = []
        # (when state == eq the stored invariant already matches)

    return CanonResult(best_leaf, best_lab, gens, leaves)


def best_lab_inverse(lab_pos):
    inv = np.empty(len(lab_pos), dtype=DTYPE)
    inv[lab_pos] = np.arange(len(lab_pos), dtype=DTYPE)
    return inv


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def canonical(g, colors=None, arcs=None) -> CanonResult:
    """Canonical search result for a graph skeleton (cached on the graph)."""
    key = ("canon", None if colors is None else bytes(np.asarray(colors, np.int64)),
           None if arcs is None else np.asarray(arcs, bool).tobytes())
    hit = g._cache.get(key)
    if hit is None:
        hit = search(_View(g, colors=colors, arcs=arcs))
        g._cache[key] = hit
    return hit


def certificate_bytes(g, colors=None, arcs=None) -> bytes:
    return canonical(g, colors=colors, arcs=arcs).cert


def vertex_aut_gens(g, colors=None, arcs=None):
    return canonical(g, colors=colors, arcs=arcs).aut_gens


def isomorphism(g1, g2):
    """Vertex and dart maps of an isomorphism g1 -> g2, or None.

    Complete: equal certificates guarantee an isomorphism of the colored
    skeletons, which always extends to the darts.
    """
    if g1.n != g2.n or g1.m != g2.m:
        return None
    c1 = canonical(g1)
    c2 = canonical(g2)
    if c1.cert != c2.cert:
        return None
    lab2_inv = best_lab_inverse(c2.labeling)
    vmap = lab2_inv[c1.labeling]
    dmap = extend_vertex_map_to_darts(g1, g2, vmap)
    if dmap is None:
        raise AssertionError("equal certificates but dart extension failed")
    return vmap.astype(DTYPE), dmap


def extend_vertex_map_to_darts(g1, g2, vmap):
    """Extend a skeleton isomorphism to a dart bijection commuting with
    beg and inv, or None if the multiplicity structure disagrees."""
    vmap = np.asarray(vmap, dtype=DTYPE)
    n, m = g1.n, g1.m
    if g2.n != n or g2.m != m:
        return None
    dmap = np.full(m, -1, dtype=DTYPE)
    groups1 = _dart_classes(g1)
    groups2 = _dart_classes(g2)
    for key, darts1 in groups1.items():
        kind = key[0]
        if kind == "semi":
            tkey = ("semi", int(vmap[key[1]]))
        elif kind == "loop":
            tkey = ("loop", int(vmap[key[1]]))
        else:
            u, w = int(vmap[key[1]]), int(vmap[key[2]])
            tkey = ("link", min(u, w), max(u, w))
        darts2 = groups2.get(tkey)
        if darts2 is None or len(darts2) != len(darts1):
            return None
        if kind == "link":
            # use whichever dart of the matched target edge starts at the
            # image of the source dart's initial vertex
            oriented = []
            for x, y in zip(darts1, darts2):
                want = int(vmap[g1.beg[x]])
                if int(g2.beg[y]) != want:
                    y = int(g2.inv[y])
                if int(g2.beg[y]) != want:
                    return None
                oriented.append(y)
            darts2 = oriented
        for x, y in zip(darts1, darts2):
            dmap[x] = y
            dmap[g1.inv[x]] = g2.inv[y]
    if np.any(dmap < 0):
        return None
    # verify the morphism laws
    if not np.array_equal(g2.beg[dmap], vmap[g1.beg]):
        return None
    if not np.array_equal(g2.inv[dmap], dmap[g1.inv]):
        return None
    return dmap


def _dart_classes(g):
    """Positive darts grouped by (kind, endpoints), sorted within groups."""
    groups = {}
    ends = g.end()
    for x in map(int, g.edges()):
        y = int(g.inv[x])
        u, w = int(g.beg[x]), int(ends[x])
        if y == x:
            key = ("semi", u)
        elif u == w:
            key = ("loop", u)
        else:
            key = ("link", min(u, w), max(u, w))
        groups.setdefault(key, []).append(x)
    return groups


def local_dart_gens(g):
    """Dart permutations generating the kernel of skeleton projection:
    loop flips, loop swaps, semiedge swaps, parallel-link swaps."""
    gens = []
    ends = g.end()
    by_key = _dart_classes(g)
    ident = np.arange(g.m, dtype=DTYPE)
    for key, darts in by_key.items():
        kind = key[0]
        if kind == "semi":
            for a, b in zip(darts, darts[1:]):
                p = ident.copy()
                p[a], p[b] = b, a
                gens.append(p)
        elif kind == "loop":
            first = darts[0]
            p = ident.copy()
            p[first], p[g.inv[first]] = g.inv[first], first
            gens.append(p)
            for a, b in zip(darts, darts[1:]):
                p = ident.copy()
                p[a], p[b] = b, a
                ia, ib = g.inv[a], g.inv[b]
                p[ia], p[ib] = ib, ia
                gens.append(p)
        else:
            for a, b in zip(darts, darts[1:]):
                if ends[a] != ends[b]:
                    # parallel swap must match orientation
                    b_use = int(g.inv[b])
                else:
                    b_use = b
                p = ident.copy()
                p[a], p[b_use] = b_use, a
                ia, ib = g.inv[a], g.inv[b_use]
                p[ia], p[ib] = ib, ia
                gens.append(p)
    return [p for p in gens if not np.array_equal(p, ident)]
