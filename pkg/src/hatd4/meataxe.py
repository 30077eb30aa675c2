"""MeatAxe-style analysis of matrix modules over GF(p).

A module is given by a list of square generator matrices acting on row
vectors (v -> v @ M).  Irreducibility testing follows the Norton criterion:
nullspaces of algebra elements whose minimal polynomial has a factor of
nullity equal to its degree certify irreducibility through one spin on each
side; otherwise nullspace vectors are spun for cheap splits.  All random
choices come from a seeded generator, so runs are reproducible.
"""

from __future__ import annotations

import numpy as np

from hatd4 import gfp


class MeatAxeError(RuntimeError):
    pass


def module_dim(gens):
    return gens[0].shape[0] if gens else 0


def spin(vectors, gens, p):
    """Echelonised basis of the smallest invariant subspace containing vectors."""
    if not gens:
        raise MeatAxeError("spin needs at least one generator")
    n = gens[0].shape[0]
    basis = gfp.EchelonBasis(n, p)
    queue = []
    for v in vectors:
        if basis.insert(v) is not None:
            queue.append(np.asarray(v, dtype=np.int64) % p)
    while queue and basis.dim < n:
        v = queue.pop()
        for m in gens:
            w = gfp.matmul(v[None, :], m, p)[0]
            if basis.insert(w) is not None:
                queue.append(w)
    return basis


def _algebra_element(gens, p, rng, attempt):
    k = len(gens)
    if attempt < k:
        return gens[attempt].copy()
    n = gens[0].shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    terms = 2 + int(rng.integers(0, 3))
    for _ in range(terms):
        length = 1 + int(rng.integers(0, 3))
        word = gens[int(rng.integers(0, k))]
        for _ in range(length - 1):
            word = gfp.matmul(word, gens[int(rng.integers(0, k))], p)
        coeff = 1 + int(rng.integers(0, p - 1)) if p > 2 else 1
        out = (out + coeff * word) % p
    return out


def is_irreducible(gens, p, rng=None, max_tries=200):
    """(True, None) or (False, rref basis of a proper nonzero submodule)."""
    n = module_dim(gens)
    if n == 0:
        raise MeatAxeError("zero module")
    if n == 1:
        return True, None
    if rng is None:
        rng = np.random.default_rng(0)
    gens_t = [m.T.copy() for m in gens]
    for attempt in range(max_tries):
        theta = _algebra_element(gens, p, rng, attempt)
        minpoly = gfp.minimal_polynomial(theta, p)
        if gfp.poly_deg(minpoly) < 1:
            continue
        for f, _mult in gfp.factor_poly(minpoly, p, rng):
            ftheta = gfp.poly_eval_matrix(f, theta, p)
            # row-vector module: the kernel of f(theta) is the left nullspace
            null = gfp.nullspace(ftheta.T, p)
            if not len(null):
                continue
            certified = len(null) == gfp.poly_deg(f)
            for v in null:
                w = spin([v], gens, p)
                if w.dim < n:
                    return False, w.matrix()
                if certified:
                    break
            if certified:
                null_t = gfp.nullspace(ftheta, p)
                wt = spin([null_t[0]], gens_t, p)
                if wt.dim < n:
                    ann = gfp.nullspace(wt.matrix(), p)
                    return False, ann
                return True, None
    raise MeatAxeError("irreducibility test inconclusive after %d tries" % max_tries)


def sub_action(basis, gens, p):
    """Generator matrices restricted to an invariant row space (rref basis)."""
    b = np.atleast_2d(basis)
    r, pivots = gfp.rref(b, p)
    out = []
    for m in gens:
        y = gfp.matmul(r, m, p)
        coords = y[:, pivots]
        if np.any((y - gfp.matmul(coords, r, p)) % p):
            raise MeatAxeError("subspace is not invariant")
        out.append(coords)
    return out, r


def quotient_action(basis, gens, p):
    """Generator matrices induced on GF(p)^n / rowspace(basis)."""
    b = np.atleast_2d(basis)
    n = b.shape[1]
    r, pivots = gfp.rref(b, p)
    free = [c for c in range(n) if c not in pivots]
    out = []
    for m in gens:
        y = m[free, :] % p
        y = (y - gfp.matmul(y[:, pivots], r, p)) % p
        out.append(y[:, free])
    return out, free


def chop(gens, p, seed=0):
    """Composition factors (as generator lists), deterministic order."""
    rng = np.random.default_rng(seed)
    factors = []
    stack = [gens]
    while stack:
        cur = stack.pop()
        n = module_dim(cur)
        if n == 0:
            continue
        irr, wit = is_irreducible(cur, p, rng)
        if irr:
            factors.append(cur)
            continue
        sub, _ = sub_action(wit, cur, p)
        quo, _ = quotient_action(wit, cur, p)
        stack.append(quo)
        stack.append(sub)
    return factors


def hom_space(sgens, tgens, p):
    """Basis of {F : S_i F = F T_i for all i}; F maps rows of S-module into T."""
    e = module_dim(sgens)
    n = module_dim(tgens)
    blocks = []
    eye_e = np.eye(e, dtype=np.int64)
    eye_n = np.eye(n, dtype=np.int64)
    for s, t in zip(sgens, tgens):
        blocks.append((np.kron(s, eye_n) - np.kron(eye_e, t.T)) % p)
    system = np.concatenate(blocks, axis=0)
    null = gfp.nullspace(system, p)
    return [row.reshape(e, n) for row in null]


def modules_isomorphic(a_gens, b_gens, p):
    """Isomorphism test for irreducible modules over the same generator set."""
    if module_dim(a_gens) != module_dim(b_gens):
        return False
    return len(hom_space(a_gens, b_gens, p)) > 0


def minimal_submodules(gens, p, dmax, seed=0, enum_cap=2_000_000):
    """All minimal submodules of dimension <= dmax, as rref bases.

    Complete: candidates are the composition factors (every socle constituent
    is one); each candidate's minimal submodules are the images of its
    nonzero homs, enumerated over scalar-normalised coefficient vectors.
    """
    n = module_dim(gens)
    if dmax < 1:
        return []
    factors = chop(gens, p, seed)
    unique = []
    for f in factors:
        if module_dim(f) > dmax:
            continue
        if any(modules_isomorphic(f, u, p) for u in unique):
            continue
        unique.append(f)
    found = {}
    for s in unique:
        e = module_dim(s)
        homs = hom_space(s, gens, p)
        r = len(homs)
        if r == 0:
            continue
        count = (p**r - 1) // (p - 1)
        if count > enum_cap:
            raise MeatAxeError("hom-space enumeration too large (%d points)" % count)
        for lam in _monic_vectors(r, p):
            f = np.zeros((e, n), dtype=np.int64)
            for c, h in zip(lam, homs):
                if c:
                    f = (f + c * h) % p
            rr, piv = gfp.rref(f, p)
            if len(piv) != e:
                raise MeatAxeError("hom image of an irreducible collapsed")
            found[rr.tobytes() + bytes([len(piv)])] = rr
    return sorted(found.values(), key=lambda b: (b.shape[0], b.tobytes()))


def _monic_vectors(r, p):
    """All vectors in GF(p)^r whose first nonzero coordinate is 1."""
    for lead in range(r):
        tail = r - lead - 1
        total = p**tail
        vec = np.zeros(r, dtype=np.int64)
        vec[lead] = 1
        for k in range(total):
            rem = k
            for i in range(tail):
                vec[lead + 1 + i] = rem % p
                rem //= p
            yield vec.copy()


# ---------------------------------------------------------------------------
# exhaustive oracle (test-scale dimensions only)
# ---------------------------------------------------------------------------


def all_subspaces(n, p):
    """Every subspace of GF(p)^n as an rref basis (empty matrix = zero space)."""
    zero = np.zeros((0, n), dtype=np.int64)
    seen = {zero.tobytes(): zero}
    frontier = [zero]
    vectors = []
    for k in range(1, p**n):
        rem = k
        v = np.zeros(n, dtype=np.int64)
        for i in range(n):
            v[i] = rem % p
            rem //= p
        vectors.append(v)
    while frontier:
        basis = frontier.pop()
        for v in vectors:
            aug = np.vstack([basis, v[None, :]])
            rr, piv = gfp.rref(aug, p)
            if len(piv) == basis.shape[0]:
                continue
            key = rr.tobytes()
            if key not in seen:
                seen[key] = rr
                frontier.append(rr)
    return list(seen.values())


def invariant_subspaces_oracle(gens, p):
    """All invariant subspaces by brute force (use only for tiny dimensions)."""
    n = module_dim(gens)
    out = []
    for basis in all_subspaces(n, p):
        ok = True
        for m in gens:
            y = gfp.matmul(basis, m, p) if basis.shape[0] else basis
            for row in y:
                aug = np.vstack([basis, row[None, :]])
                if gfp.rank(aug, p) != basis.shape[0]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(basis)
    return out


def maximal_invariant_oracle(gens, p, dmax):
    """Maximal invariant subspaces of codimension <= dmax (brute force)."""
    n = module_dim(gens)
    inv = invariant_subspaces_oracle(gens, p)
    keyed = {b.tobytes(): b for b in inv}
    out = []
    for b in inv:
        k = b.shape[0]
        if k == n or n - k > dmax:
            continue
        maximal = True
        for c in inv:
            if c.shape[0] <= k or c.shape[0] == n:
                continue
            if _contains(c, b, p):
                maximal = False
                break
        if maximal:
            out.append(b)
    return sorted(out, key=lambda b: (b.shape[0], b.tobytes()))


def _contains(big, small, p):
    if small.shape[0] == 0:
        return True
    aug = np.vstack([big, small])
    return gfp.rank(aug, p) == big.shape[0]
