"""Epimorphisms from the universal group onto finite groups, and the coset
graphs that turn them into half-arc-transitive pairs.

The universal group is two-generated: an involution a and an element g with
b = a^g and c = b^g satisfying a^2 = b^2 = c^2 = (ab)^2 = (bc)^2 = 1 and
(ac)^2 = b; the images of <a,b,c> form the dihedral vertex-stabiliser of
order 8.  The search fixes one representative a per involution class and
sweeps g over the whole group with vectorised relation checks; witnesses
are deduplicated up to simultaneous conjugation.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from hatd4.graphs import DTYPE, Graph, GraphError
from hatd4.perms import PermGroup, identity_perm, inverse
from hatd4.symmetry import GraphAction


class SearchError(GraphError):
    pass


@dataclass
class EpiWitness:
    group: PermGroup
    a: np.ndarray
    g: np.ndarray
    b: np.ndarray = field(init=False)
    c: np.ndarray = field(init=False)

    def __post_init__(self):
        gi = inverse(self.g)
        self.b = self.g[self.a[gi]]
        self.c = self.g[self.b[gi]]

    def check(self):
        """All defining relations plus the two subgroup conditions."""
        a, b, c, g = self.a, self.b, self.c, self.g
        ident = identity_perm(len(a))
        for x in (a, b, c):
            if not np.array_equal(x[x], ident):
                return False
        if not np.array_equal(b[a[b[a]]], ident):  # (ab)^2
            return False
        if not np.array_equal(c[b[c[b]]], ident):  # (bc)^2
            return False
        if not np.array_equal(c[a[c[a]]], b):      # (ac)^2 = b
            return False
        if _closure_size((a, b, c), cap=9) != 8:
            return False
        sub = PermGroup(self.group.degree, [a, g])
        return sub.order() == self.group.order()

    def stabiliser_group(self):
        return PermGroup(self.group.degree, [self.a, self.b, self.c], known_order=8)

    def coset_order(self):
        return self.group.order() // 8

    def record_line(self):
        return "epi group=%s a=%s g=%s coset_order=%d" % (
            self.group.name or "unnamed",
            _perm_hash(self.a), _perm_hash(self.g), self.coset_order())


def _perm_hash(p):
    return hashlib.sha256(np.asarray(p, dtype=np.int64).tobytes()).hexdigest()[:12]


def _closure_size(gens, cap):
    seen = {identity_perm(len(gens[0])).tobytes()}
    frontier = [identity_perm(len(gens[0]))]
    while frontier:
        nxt = []
        for e in frontier:
            for s in gens:
                w = s[e]
                key = w.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(w)
                    if len(seen) > cap:
                        return len(seen)
        frontier = nxt
    return len(seen)


def epimorphism_search(group: PermGroup) -> list[EpiWitness]:
    """All witnesses (a, g) up to simultaneous conjugation, deterministic order.

    Exhaustive: a runs over involution class representatives, g over every
    group element; the relation filter is vectorised over g.
    """
    order = group.order()
    if order % 8:
        return []
    els, index = group.elements()
    n, deg = els.shape
    arange = np.arange(deg, dtype=els.dtype)
    sq = np.take_along_axis(els, els, axis=1)
    is_ident = np.all(els == arange, axis=1)
    invol = np.nonzero(np.all(sq == arange, axis=1) & ~is_ident)[0]

    # involution conjugacy classes under generator conjugation
    class_of = {int(i): int(i) for i in invol}
    changed = True
    gens_inv = [(g, inverse(g)) for g in group.gens]
    while changed:
        changed = False
        for i in list(class_of):
            root = _find(class_of, i)
            e = els[i]
            for g, gi in gens_inv:
                conj = g[e[gi]]
                j = _find(class_of, index[conj.tobytes()])
                if j != root:
                    class_of[max(j, root)] = min(j, root)
                    changed = True
    reps = sorted({_find(class_of, int(i)) for i in invol})

    ginv_all = np.argsort(els, axis=1)
    witnesses = []
    for rep in reps:
        a = els[rep]
        t1 = a[ginv_all]                                  # rows: a composed after g^-1
        b = np.take_along_axis(els, t1, axis=1)           # b = g^-1 a g
        t2 = np.take_along_axis(b, ginv_all, axis=1)
        c = np.take_along_axis(els, t2, axis=1)           # c = g^-1 b g
        ab = b[:, a]
        ok = np.all(np.take_along_axis(ab, ab, axis=1) == arange, axis=1)
        bc = np.take_along_axis(c, b, axis=1)
        ok &= np.all(np.take_along_axis(bc, bc, axis=1) == arange, axis=1)
        ac = c[:, a]
        ok &= np.all(np.take_along_axis(ac, ac, axis=1) == b, axis=1)
        ok &= np.any(b != a, axis=1)                      # b = a collapses <a,b,c>
        cand = np.nonzero(ok)[0]

        # centraliser of a, for the remaining conjugation freedom
        cent = np.nonzero(np.all(els[:, a] == a[els], axis=1))[0]
        cent_els = els[cent]
        cent_inv = np.argsort(cent_els, axis=1)

        seen_orbits = set()
        for gidx in cand:
            if int(gidx) in seen_orbits:
                continue
            g = els[gidx]
            w = EpiWitness(group, a.copy(), g.copy())
            if w.check():
                witnesses.append(w)
            # mark the whole conjugation orbit of g under the centraliser
            t = g[cent_inv]
            conj = np.take_along_axis(cent_els, t, axis=1)
            for row in conj:
                seen_orbits.add(int(index[row.tobytes()]))
    return witnesses


def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


# ---------------------------------------------------------------------------
# coset graphs
# ---------------------------------------------------------------------------


def coset_graph(group: PermGroup, stab: PermGroup, g):
    """Graph on the right cosets of stab, darts the two arc orbits of
    (stab, stab*g); returns (graph, action) with the right-multiplication
    action of the group (stabiliser generators included for fast chains)."""
    if stab.order() != 8:
        raise SearchError("coset stabiliser must have order 8")
    for h in stab.gens:
        if not group.contains(h):
            raise SearchError("stabiliser is not a subgroup")
    g = np.asarray(g, dtype=DTYPE)
    if not group.contains(g):
        raise SearchError("connecting element lies outside the group")
    conn = PermGroup(group.degree, list(stab.gens) + [g])
    if conn.order() != group.order():
        raise SearchError("<H, g> is a proper subgroup: coset graph disconnected")

    els, index = group.elements()
    n_el = len(els)
    stab_els, _ = stab.elements()
    gi = inverse(g)

    in_stab = {h.tobytes() for h in stab_els}
    d0 = [h for h in stab_els if gi[h[g]].tobytes() in in_stab]      # H cap H^(g^-1)
    d1 = [h for h in stab_els if g[h[gi]].tobytes() in in_stab]      # H cap H^g
    if len(d0) != 4 or len(d1) != 4:
        raise SearchError("arc stabiliser has order %d, not 4 (valence != 4)" % len(d0))

    def coset_ids(sub_els):
        # right coset of x keyed by the minimal element index over {s*x}
        key = np.full(n_el, n_el, dtype=np.int64)
        for s in sub_els:
            for i in range(n_el):
                j = index[els[i][s].tobytes()]
                if j < key[i]:
                    key[i] = j
        reps, ids = np.unique(key, return_inverse=True)
        return ids.astype(np.int64), reps

    vid, vreps = coset_ids(stab_els)
    did0, d0reps = coset_ids(d0)
    did1, d1reps = coset_ids(d1)
    n = len(vreps)
    m0 = len(d0reps)
    assert m0 == 2 * n and len(d1reps) == 2 * n

    # index of g*x and g^-1*x for every element x
    g_right = np.empty(n_el, dtype=np.int64)
    gi_right = np.empty(n_el, dtype=np.int64)
    for i in range(n_el):
        g_right[i] = index[els[i][g].tobytes()]       # the element g*x
        gi_right[i] = index[els[i][gi].tobytes()]

    beg = np.empty(4 * n, dtype=DTYPE)
    inv = np.empty(4 * n, dtype=DTYPE)
    for k, rep in enumerate(map(int, d0reps)):
        beg[k] = vid[rep]
        inv[k] = 2 * n + did1[g_right[rep]]
    for k, rep in enumerate(map(int, d1reps)):
        beg[2 * n + k] = vid[rep]
        inv[2 * n + k] = did0[gi_right[rep]]
    graph = Graph(n, beg, inv)

    # right multiplication action, generators of G plus stabiliser seeds
    action_gens = []
    for k in list(group.gens) + list(stab.gens):
        rk = np.empty(n_el, dtype=np.int64)
        for i in range(n_el):
            rk[i] = index[k[els[i]].tobytes()]        # the element x*k
        perm = np.empty(n + 4 * n, dtype=DTYPE)
        perm[vid[vreps]] = vid[rk[vreps]]
        perm[n + did0[d0reps]] = n + did0[rk[d0reps]]
        perm[n + 2 * n + did1[d1reps]] = n + 2 * n + did1[rk[d1reps]]
        action_gens.append(perm)
    pg = PermGroup(n + 4 * n, action_gens, known_order=group.order(), base_hint=(0,))
    if pg.order() != group.order():
        raise SearchError("coset action is unfaithful (order %d)" % pg.order())
    action = GraphAction(graph, pg)
    return graph, action


# ---------------------------------------------------------------------------
# relevant pairs
# ---------------------------------------------------------------------------


@dataclass
class RelevantPair:
    graph: Graph
    action: GraphAction
    provenance: dict

    def order(self):
        return self.graph.n

    def group_order(self):
        return self.action.group.order()

    def certificate(self):
        from hatd4.graphs import certificate

        return certificate(self.graph).data

    def digraph_certificate(self):
        """Orientation-insensitive canonical key of (graph, dart orbits)."""
        from hatd4 import canon
        from hatd4.symmetry import extract_digraph

        dig = extract_digraph(self.graph, self.action)
        c1 = canon.certificate_bytes(self.graph, arcs=dig.arcs)
        c2 = canon.certificate_bytes(self.graph, arcs=~dig.arcs)
        return min(c1, c2)


def dedupe_pairs(pairs):
    """One pair per graph certificate, ordered by (order, certificate)."""
    keyed = {}
    for pair in pairs:
        key = (pair.graph.n, pair.certificate())
        if key not in keyed:
            keyed[key] = pair
    return [keyed[k] for k in sorted(keyed.keys())]


def pair_isomorphic(p1: RelevantPair, p2: RelevantPair) -> bool:
    """True iff some graph isomorphism conjugates one acting group onto the
    other (isomorphism of pairs).  Cost grows with the index of the group in
    the full automorphism group; base pairs keep that index small."""
    from hatd4 import canon
    from hatd4.symmetry import aut_group

    if p1.graph.n != p2.graph.n:
        return False
    if p1.group_order() != p2.group_order():
        return False
    iso = canon.isomorphism(p1.graph, p2.graph)
    if iso is None:
        return False
    vmap, dmap = iso
    phi = np.concatenate([vmap, dmap + p2.graph.n]).astype(DTYPE)
    phi_inv = inverse(phi)
    conj_gens = [phi[h[phi_inv]] for h in p1.action.group.gens]
    target = p2.action.group
    aut = aut_group(p2.graph)
    reps = [np.arange(aut.group.degree, dtype=DTYPE)]
    queue = [reps[0]]
    while queue:
        r = queue.pop()
        for a in aut.group.gens:
            x = a[r]
            if not any(target.contains(x[inverse(r2)]) for r2 in reps):
                reps.append(x)
                queue.append(x)
    for alpha in reps:
        ai = inverse(alpha)
        if all(target.contains(alpha[h[ai]]) for h in conj_gens):
            return True
    return False


def dedupe_base_pairs(pairs):
    """Collapse base pairs up to pair isomorphism.

    Pairs whose groups come from different (non-isomorphic) catalog groups
    never merge; within one catalog group and graph certificate the honest
    conjugacy test decides.
    """
    buckets = {}
    for pair in pairs:
        key = (pair.provenance.get("group"), pair.graph.n, pair.certificate())
        buckets.setdefault(key, []).append(pair)
    out = []
    for key in sorted(buckets.keys(), key=lambda k: (k[1], k[2], str(k[0]))):
        kept = []
        for pair in buckets[key]:
            if not any(pair_isomorphic(pair, existing) for existing in kept):
                kept.append(pair)
        out.extend(kept)
    return out
