"""Group actions on first homology over GF(p) and minimal admissible covers.

The cycle space of a connected semiedge-free graph has dimension
beta = |E| - |V| + 1; fundamental cycles of the BFS spanning tree give the
basis, indexed by cotree edges in positive-dart order.  Automorphisms act
on cycle classes row-wise.  Maximal invariant subspaces of codimension d
correspond to minimal admissible covers of degree p^d: the quotient map
projects fundamental cycles to voltages, the derived graph is the cover,
and the acting group lifts vertex potentials along the tree.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from hatd4 import gfp, meataxe
from hatd4.covers import (CoverError, VoltageAssignment, derived_cover,
                          spanning_tree, spanning_tree_mask, translation_action)
from hatd4.graphs import DTYPE, Graph, GraphError
from hatd4.perms import PermGroup
from hatd4.symmetry import GraphAction, combine


@dataclass
class HomologyModule:
    base: Graph
    p: int
    dim: int
    action: list  # one (dim x dim) int64 matrix per generator, row convention
    cotree: np.ndarray  # positive dart per basis cycle
    tree_parent: np.ndarray
    tree_order: np.ndarray
    source: GraphAction

    def is_invariant(self, basis):
        b = np.atleast_2d(basis)
        for a in self.action:
            y = gfp.matmul(b, a, self.p)
            for row in y:
                aug = np.vstack([b, row[None, :]])
                if gfp.rank(aug, self.p) != b.shape[0]:
                    return False
        return True


def _cycle_supports(g: Graph):
    """(tree data, cotree positive darts, phi index/sign arrays).

    phi maps a dart to its fundamental-cycle coordinate: the basis index of
    its cotree edge with sign +1 on the positive dart, -1 on the inverse,
    and -1/index 0 for tree darts (index array holds -1 there).
    """
    parent_dart, order = spanning_tree(g)
    tree_mask = spanning_tree_mask(g)
    pos = g.edges()
    cotree = np.array([x for x in pos if not tree_mask[x]], dtype=DTYPE)
    idx = np.full(g.m, -1, dtype=np.int64)
    sgn = np.zeros(g.m, dtype=np.int64)
    for j, c in enumerate(map(int, cotree)):
        idx[c] = j
        sgn[c] = 1
        idx[g.inv[c]] = j
        sgn[g.inv[c]] = -1
    # semiedge positive darts are their own inverse; excluded by precondition
    return parent_dart, order, cotree, idx, sgn


def _generator_matrix_int(g: Graph, dp, parent_dart, order, cotree, idx, sgn):
    """Integer matrix of the induced homology action of one automorphism."""
    beta = len(cotree)
    psi = np.zeros((g.n, beta), dtype=np.int64)
    ends = g.end()
    for v in map(int, order[1:]):
        t = int(parent_dart[v])
        u = int(g.beg[t])
        img = int(dp[t])
        psi[v] = psi[u]
        if idx[img] >= 0:
            psi[v, idx[img]] += sgn[img]
    mat = np.zeros((beta, beta), dtype=np.int64)
    for j, c in enumerate(map(int, cotree)):
        img = int(dp[c])
        row = psi[int(g.beg[c])] - psi[int(ends[c])]
        if idx[img] >= 0:
            row = row.copy()
            row[idx[img]] += sgn[img]
        mat[j] = row
    return mat


def _integer_rep(g: Graph, action: GraphAction):
    key = ("homology-int",) + tuple(p.tobytes() for p in action.group.gens)
    hit = g._cache.get(key)
    if hit is not None:
        return hit
    if g.semiedge_darts().size:
        raise GraphError("homology needs a semiedge-free graph")
    if not g.is_connected():
        raise GraphError("homology needs a connected graph")
    parent_dart, order, cotree, idx, sgn = _cycle_supports(g)
    mats = []
    for perm in action.group.gens:
        dp = perm[g.n :] - g.n
        mats.append(_generator_matrix_int(g, dp, parent_dart, order, cotree, idx, sgn))
    if not mats:
        mats = [np.eye(len(cotree), dtype=np.int64)]
    out = (parent_dart, order, cotree, idx, sgn, mats)
    g._cache[key] = out
    return out


def homology_rep(g: Graph, action: GraphAction, p: int) -> HomologyModule:
    """Action of the generators on H1(graph; GF(p)) in the cycle basis."""
    parent_dart, order, cotree, idx, sgn, mats = _integer_rep(g, action)
    return HomologyModule(
        base=g, p=p, dim=len(cotree),
        action=[m % p for m in mats],
        cotree=cotree, tree_parent=parent_dart, tree_order=order,
        source=action,
    )


# ---------------------------------------------------------------------------
# invariant subspaces
# ---------------------------------------------------------------------------


def dual_minimal_submodules(mod: HomologyModule, dmax: int, seed=0):
    """Row bases (rref, d x beta with d <= dmax) of the minimal submodules of
    the dual module; their annihilators are the maximal invariant subspaces."""
    if dmax < 1:
        return []
    p = mod.p
    if dmax == 1:
        return _dual_lines(mod)
    dual = [a.T.copy() for a in mod.action]
    return meataxe.minimal_submodules(dual, p, dmax, seed=seed)


def _dual_lines(mod: HomologyModule):
    """1-dimensional dual submodules via eigenvalue branching.

    A dual line satisfies w A^T = lam w per generator, equivalently
    (A - lam) w^T = 0.  Over GF(2) the only eigenvalue is 1, so a single
    (bit-packed) elimination of the stacked blocks finds the common fixed
    space; over odd p the branch filters candidate eigenvalues by rank
    deficiency, stacking constraint blocks.  Every line of a leaf space
    qualifies.
    """
    p = mod.p
    beta = mod.dim
    eye = np.eye(beta, dtype=np.int64)
    if p == 2:
        stacked = np.concatenate([(a + eye) % 2 for a in mod.action], axis=0)
        basis = gfp.gf2_nullspace_packed(gfp.gf2_pack(stacked), beta)
        leaves = [basis] if len(basis) else []
    else:
        # first generator at full size, the rest restricted to the survivors
        a0 = mod.action[0]
        leaves = []
        for lam in range(1, p):
            ns = gfp.nullspace((a0 - lam * eye) % p, p)
            if len(ns):
                leaves.append(ns)
        for a in mod.action[1:]:
            refined = []
            for b in leaves:
                # w = x b with A w^T = lam w^T: solve (A b^T - lam b^T) x^T = 0
                abt = gfp.matmul(a, b.T % p, p)
                for lam in range(1, p):
                    x = gfp.nullspace((abt - lam * (b.T % p)) % p, p)
                    if len(x):
                        refined.append(gfp.matmul(x, b, p))
            leaves = refined
            if not leaves:
                return []
    lines = {}
    for basis in leaves:
        k = len(basis)
        for lam_vec in meataxe._monic_vectors(k, p):
            w = np.zeros(beta, dtype=np.int64)
            for coeff, row in zip(lam_vec, basis):
                if coeff:
                    w = (w + coeff * row) % p
            rr, piv = gfp.rref(w[None, :], p)
            if piv:
                lines[rr.tobytes()] = rr
    return sorted(lines.values(), key=lambda b: b.tobytes())


def maximal_invariant_submodules(mod: HomologyModule, dmax: int, seed=0):
    """Every maximal invariant subspace of codimension <= dmax, rref bases,
    sorted lexicographically by (dimension, entries)."""
    out = []
    for r in dual_minimal_submodules(mod, dmax, seed=seed):
        k = np.atleast_2d(gfp.nullspace(r, p=mod.p))
        out.append(k)
    return sorted(out, key=lambda b: (b.shape[0], b.tobytes()))


def cover_from_kernel(mod: HomologyModule, kernel) -> VoltageAssignment:
    """Voltage assignment of the quotient map with the given invariant kernel."""
    p = mod.p
    k = np.atleast_2d(np.asarray(kernel, dtype=np.int64)) % p
    d = mod.dim - gfp.rank(k, p)
    if d < 1:
        raise CoverError("kernel is the whole space; no cover")
    for i, a in enumerate(mod.action):
        y = gfp.matmul(k, a, p)
        aug = np.vstack([k, y])
        if gfp.rank(aug, p) != k.shape[0]:
            raise CoverError("kernel not invariant under generator %d" % i)
    r = gfp.nullspace(k, p) if k.shape[0] else gfp.identity(mod.dim, p)
    return voltages_from_dual(mod, np.atleast_2d(r))


def voltages_from_dual(mod: HomologyModule, r) -> VoltageAssignment:
    """Voltage assignment whose cotree voltages are the dual projection of
    the fundamental cycles (r is the d x beta dual basis)."""
    return _voltages_from_cotree(mod.base, mod.cotree, r, mod.p)


def _voltages_from_cotree(g: Graph, cotree, r, p) -> VoltageAssignment:
    d = r.shape[0]
    volt = np.zeros((g.m, d), dtype=np.int64)
    for j, c in enumerate(map(int, cotree)):
        volt[c] = r[:, j] % p
        volt[g.inv[c]] = (-r[:, j]) % p
    return VoltageAssignment(g, p, d, volt)


# ---------------------------------------------------------------------------
# lifting
# ---------------------------------------------------------------------------


@dataclass
class LiftedPair:
    cover: Graph
    action: GraphAction
    zeta: VoltageAssignment
    dual_basis: np.ndarray
    translations: GraphAction
    stabiliser_gens: list
    base: Graph
    base_action: GraphAction
    projection: object

    @property
    def p(self):
        return self.zeta.p

    @property
    def d(self):
        return self.zeta.d

    def kernel_hash(self):
        h = hashlib.sha256()
        h.update(b"p=%d;d=%d;" % (self.zeta.p, self.zeta.d))
        h.update(self.dual_basis.astype(np.int64).tobytes())
        return h.hexdigest()[:16]

    def metadata_line(self, base_id):
        return "cover p=%d d=%d base_id=%s kernel_hash=%s |V|=%d |G|=%d" % (
            self.zeta.p, self.zeta.d, base_id, self.kernel_hash(),
            self.cover.n, self.action.group.order())


def _quotient_matrix(mod: HomologyModule, r, a):
    """d x d matrix q with a @ r^T = r^T @ q, or None if the kernel moves."""
    p = mod.p
    rt = r.T % p
    _, piv = gfp.rref(r, p)
    y = gfp.matmul(a, rt, p)
    q = y[piv, :]
    if not np.array_equal(gfp.matmul(rt, q, p), y):
        return None
    return q


def lift_group(g: Graph, action: GraphAction, zeta: VoltageAssignment,
               dual_basis=None, anchor=0, qmats=None) -> LiftedPair:
    """Lift the acting group along the derived cover of an admissible voltage.

    The voltage must come from an invariant kernel (admissibility); each
    generator's lift solves vertex potentials along the spanning tree and is
    rejected if any cotree dart violates the potential equation.  Lifts of
    generators fixing the anchor vertex fix the anchored fibre point, so the
    stabiliser of (anchor, 0) is generated by the lifts of the stabiliser
    generators supplied through the action ordering.  qmats (the induced
    matrices on the voltage group) may be supplied to skip building the
    dense homology representation.
    """
    p, d = zeta.p, zeta.d
    if qmats is None:
        mod = homology_rep(g, action, p)
        if dual_basis is None:
            # recover the dual basis from the voltages on the cotree darts
            dual_basis = np.stack([zeta.volt[int(c)] for c in mod.cotree], axis=1) % p
            dual_basis = gfp.rref(dual_basis, p)[0]
            if dual_basis.shape[0] != d:
                raise CoverError("voltages do not define a rank-d projection")
        qmats = []
        for gi, a in enumerate(mod.action):
            qm = _quotient_matrix(mod, dual_basis, a)
            if qm is None:
                raise CoverError("voltage kernel not invariant under generator %d" % gi)
            qmats.append(qm)
    cover, proj = derived_cover(zeta)
    q = p**d
    powers = p ** np.arange(d, dtype=np.int64)
    vecs = np.zeros((q, d), dtype=np.int64)
    for k in range(1, q):
        rem = k
        for i in range(d):
            vecs[k, i] = rem % p
            rem //= p
    ends = g.end()
    tree_parent, tree_order = spanning_tree(g)
    lifted = []
    stab_lifts = []
    for gi, perm in enumerate(action.group.gens):
        vp = perm[: g.n]
        dp = perm[g.n :] - g.n
        qmat = qmats[gi]
        # delta(x) = zeta(x^g) - zeta(x) Q  must be a tree potential difference
        delta = (zeta.volt[dp] - gfp.matmul(zeta.volt, qmat, p)) % p
        s = np.zeros((g.n, d), dtype=np.int64)
        for v in map(int, tree_order[1:]):
            t = int(tree_parent[v])
            s[v] = (s[int(g.beg[t])] + delta[t]) % p
        if np.any((s[ends] - s[g.beg] - delta) % p):
            raise CoverError("generator %d does not lift (non-admissible voltage)" % gi)
        s = (s - s[anchor]) % p
        shifted = (vecs @ qmat % p)
        vtarget = (shifted[None, :, :] + s[:, None, :]) % p    # (n, q, d)
        venc = vtarget @ powers
        lift_v = (vp.astype(np.int64)[:, None] * q + venc).reshape(-1).astype(DTYPE)
        dtarget = (shifted[None, :, :] + s[g.beg][:, None, :]) % p
        denc = dtarget @ powers
        lift_d = (dp.astype(np.int64)[:, None] * q + denc).reshape(-1).astype(DTYPE)
        lifted.append((lift_v, lift_d))
        if vp[anchor] == anchor:
            stab_lifts.append(combine(cover, lift_v, lift_d))
    trans = translation_action(zeta, cover)
    gens = [combine(cover, v, dpp) for v, dpp in lifted]
    gens.extend(trans.group.gens)
    want = q * action.group.order()
    big = PermGroup(cover.n + cover.m, gens, known_order=want,
                    base_hint=(anchor * q,))
    lifted_action = GraphAction(cover, big)
    if big.order() != want:
        raise CoverError("lifted group has order %d, expected %d"
                         % (big.order(), want))
    return LiftedPair(cover=cover, action=lifted_action, zeta=zeta,
                      dual_basis=dual_basis, translations=trans,
                      stabiliser_gens=stab_lifts, base=g, base_action=action,
                      projection=proj)


# ---------------------------------------------------------------------------
# bit-packed GF(2) path for very large homology dimensions
# ---------------------------------------------------------------------------

_PACKED_DIM = 600


def _packed_generator_matrix(g, dp, parent_dart, order, cotree, idx):
    """One generator's homology matrix over GF(2) as bit-packed rows."""
    beta = len(cotree)
    nwords = (beta + 63) // 64
    psi = np.zeros((g.n, nwords), dtype=np.uint64)
    ends = g.end()
    for v in map(int, order[1:]):
        t = int(parent_dart[v])
        psi[v] = psi[int(g.beg[t])]
        j = int(idx[int(dp[t])])
        if j >= 0:
            psi[v, j >> 6] ^= np.uint64(1) << np.uint64(j & 63)
    mat = np.zeros((beta, nwords), dtype=np.uint64)
    for jj, c in enumerate(map(int, cotree)):
        row = psi[int(g.beg[c])] ^ psi[int(ends[c])]
        j = int(idx[int(dp[c])])
        if j >= 0:
            row = row.copy()
            row[j >> 6] ^= np.uint64(1) << np.uint64(j & 63)
        mat[jj] = row
    return mat


def _gf2_fixed_lines(g: Graph, action: GraphAction):
    """Dual lines over GF(2) without dense matrices: the common fixed space
    of the transposed action is the nullspace of the stacked (A - I)."""
    parent_dart, order, cotree, idx, _sgn = _cycle_supports(g)
    beta = len(cotree)
    blocks = []
    for perm in action.group.gens:
        dp = perm[g.n :] - g.n
        mat = _packed_generator_matrix(g, dp, parent_dart, order, cotree, idx)
        for j in range(beta):  # flip the diagonal: rows of A - I
            mat[j, j >> 6] ^= np.uint64(1) << np.uint64(j & 63)
        blocks.append(mat)
    stacked = np.concatenate(blocks, axis=0) if blocks else np.zeros((0, (beta + 63) // 64), np.uint64)
    basis = gfp.gf2_nullspace_packed(stacked, beta) if len(stacked) else np.eye(beta, dtype=np.int64)
    if len(basis) > 24:
        raise CoverError("fixed space of dimension %d is too large to enumerate"
                         % len(basis))
    lines = {}
    for lam in meataxe._monic_vectors(len(basis), 2):
        w = (lam @ basis) % 2
        rr, piv = gfp.rref(w[None, :], 2)
        if piv:
            lines[rr.tobytes()] = rr
    return sorted(lines.values(), key=lambda b: b.tobytes()), cotree


# ---------------------------------------------------------------------------
# the enumeration
# ---------------------------------------------------------------------------


def _primes_upto(n):
    sieve = np.ones(max(n + 1, 2), dtype=bool)
    sieve[:2] = False
    for k in range(2, int(n**0.5) + 1):
        if sieve[k]:
            sieve[k * k :: k] = False
    return [int(x) for x in np.nonzero(sieve)[0]]


def cover_budget(n0: int, max_order: int, primes=None, dim_override=None):
    """(p, dmax) pairs with p^d * n0 <= max_order for some d >= 1."""
    ratio = max_order // n0
    if ratio < 2:
        return []
    plist = primes if primes is not None else _primes_upto(ratio)
    out = []
    for p in plist:
        if p > ratio:
            continue
        dmax = 0
        v = 1
        while v * p <= ratio:
            v *= p
            dmax += 1
        if dim_override is not None:
            dmax = min(dmax, dim_override)
        if dmax >= 1:
            out.append((p, dmax))
    return out


def minimal_admissible_covers(g: Graph, action: GraphAction, max_order: int,
                              primes=None, dim_override=None, seed=0):
    """All minimal admissible elementary abelian covers of the pair with
    cover order at most max_order, sorted by (p, d, dual basis)."""
    results = {}
    beta = g.m // 2 - g.n + 1
    for p, dmax in cover_budget(g.n, max_order, primes, dim_override):
        if p == 2 and dmax == 1 and beta > _PACKED_DIM:
            lines, cotree = _gf2_fixed_lines(g, action)
            for r in lines:
                zeta = _voltages_from_cotree(g, cotree, r, 2)
                ident = [np.eye(1, dtype=np.int64)] * len(action.group.gens)
                pair = lift_group(g, action, zeta, dual_basis=r, qmats=ident)
                results[(p, 1, r.tobytes())] = pair
            continue
        mod = homology_rep(g, action, p)
        for r in dual_minimal_submodules(mod, dmax, seed=seed):
            d = r.shape[0]
            zeta = voltages_from_dual(mod, r)
            pair = lift_group(g, action, zeta, dual_basis=r)
            key = (p, d, r.tobytes())
            results[key] = pair
    return [results[k] for k in sorted(results.keys())]
