"""Dense linear algebra and univariate polynomials over prime fields GF(p).

Matrices are numpy int64 arrays with entries reduced mod p.  Products route
through float64 BLAS whenever the accumulated dot products fit exactly in a
double (n*(p-1)^2 < 2**53, which holds for every size this package touches);
GF(2) additionally gets a bit-packed uint64 row layout for the very large
eliminations where a dense int64 matrix would be wasteful.
"""

from __future__ import annotations

import numpy as np

_FLOAT_EXACT = 2.0**53


def normalize(a, p):
    """Return a as an int64 array reduced mod p."""
    return np.asarray(a, dtype=np.int64) % p


def identity(n, p):
    return np.eye(n, dtype=np.int64) % p


def matmul(a, b, p):
    """Exact matrix product mod p."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1]
    if inner * (p - 1) * (p - 1) < _FLOAT_EXACT:
        c = np.dot(a.astype(np.float64), b.astype(np.float64))
        return np.rint(c).astype(np.int64) % p
    return np.dot(a, b) % p


def matpow(a, k, p):
    n = a.shape[0]
    out = identity(n, p)
    base = normalize(a, p)
    while k:
        if k & 1:
            out = matmul(out, base, p)
        base = matmul(base, base, p)
        k >>= 1
    return out


def inv_mod(x, p):
    """Inverse of a scalar mod p."""
    return pow(int(x) % p, p - 2, p)


def rref(a, p):
    """Reduced row echelon form.

    Returns (R, pivots) where R has unit pivots with zeros above and below,
    and pivots is the list of pivot column indices (len = rank).
    """
    r = normalize(a, p).copy()
    m, n = r.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        sub = r[row:, col]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = (r[row] * inv_mod(r[row, col], p)) % p
        other = np.nonzero(r[:, col])[0]
        other = other[other != row]
        if other.size:
            r[other] = (r[other] - np.outer(r[other, col], r[row])) % p
        pivots.append(col)
        row += 1
    return r[: len(pivots)], pivots


def rank(a, p):
    return len(rref(a, p)[1])


def nullspace(a, p):
    """Rows spanning {x : a @ x = 0 mod p}, in reduced echelon form."""
    a = np.atleast_2d(normalize(a, p))
    n = a.shape[1]
    r, pivots = rref(a, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, c in enumerate(pivots):
            basis[i, c] = (-r[j, f]) % p
    # canonicalise: the free-variable basis spans the kernel but need not be
    # in reduced echelon form itself
    if len(basis):
        basis = rref(basis, p)[0]
    return basis


def inverse(a, p):
    n = a.shape[0]
    aug = np.concatenate([normalize(a, p), identity(n, p)], axis=1)
    r, pivots = rref(aug, p)
    if pivots[: n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular mod %d" % p)
    return r[:, n:]


def solve_right(a, b, p):
    """One solution x of a @ x = b (columns of b), or None if inconsistent."""
    a = normalize(a, p)
    b = normalize(b, p)
    if b.ndim == 1:
        b = b[:, None]
        squeeze = True
    else:
        squeeze = False
    m, n = a.shape
    aug = np.concatenate([a, b], axis=1)
    r, pivots = rref(aug, p)
    if any(c >= n for c in pivots):
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, n:]
    return x[:, 0] if squeeze else x


class EchelonBasis:
    """Incrementally maintained row space in reduced echelon form.

    Supports residual reduction and insertion; used by the spinning and
    Krylov loops where one vector arrives at a time.
    """

    def __init__(self, ncols, p):
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots = []

    def __len__(self):
        return len(self.pivots)

    @property
    def dim(self):
        return len(self.pivots)

    def reduce(self, v):
        """Residual of v after eliminating against the basis."""
        v = normalize(v, self.p).copy()
        if self.pivots:
            coeff = v[self.pivots]
            if np.any(coeff):
                v = (v - coeff @ self.rows) % self.p
        return v

    def insert(self, v):
        """Insert v; returns the new pivot column or None if dependent."""
        r = self.reduce(v)
        nz = np.nonzero(r)[0]
        if nz.size == 0:
            return None
        col = int(nz[0])
        r = (r * inv_mod(r[col], self.p)) % self.p
        if self.pivots:
            coeff = self.rows[:, col].copy()
            if np.any(coeff):
                self.rows = (self.rows - np.outer(coeff, r)) % self.p
        at = int(np.searchsorted(np.asarray(self.pivots), col))
        self.rows = np.insert(self.rows, at, r, axis=0)
        self.pivots.insert(at, col)
        return col

    def contains(self, v):
        return not np.any(self.reduce(v))

    def matrix(self):
        return self.rows.copy()


# ---------------------------------------------------------------------------
# bit-packed GF(2)
# ---------------------------------------------------------------------------


def gf2_pack(a):
    """Pack a 0/1 matrix into uint64 words, little-endian within each word."""
    a = (np.asarray(a) & 1).astype(np.uint8)
    m, n = a.shape
    nwords = (n + 63) // 64
    padded = np.zeros((m, nwords * 64), dtype=np.uint8)
    padded[:, :n] = a
    bits = padded.reshape(m, nwords, 8, 8)
    packed = np.packbits(bits[:, :, :, ::-1], axis=-1).reshape(m, nwords, 8)
    return packed.view(np.uint64).reshape(m, nwords)


def gf2_unpack(w, n):
    m = w.shape[0]
    bytes_ = w.reshape(m, -1, 1).view(np.uint8).reshape(m, -1, 8)
    bits = np.unpackbits(bytes_, axis=-1).reshape(m, -1, 8, 8)
    bits = bits[:, :, :, ::-1].reshape(m, -1)
    return bits[:, :n].astype(np.int64)


def gf2_rref_packed(w, ncols):
    """In-place-ish reduced echelon form of packed rows; returns (rows, pivots)."""
    w = w.copy()
    m = w.shape[0]
    pivots = []
    row = 0
    for col in range(ncols):
        if row == m:
            break
        word, bit = divmod(col, 64)
        mask = np.uint64(1) << np.uint64(bit)
        hit = np.nonzero(w[row:, word] & mask)[0]
        if hit.size == 0:
            continue
        piv = row + int(hit[0])
        if piv != row:
            w[[row, piv]] = w[[piv, row]]
        others = np.nonzero(w[:, word] & mask)[0]
        others = others[others != row]
        if others.size:
            w[others] ^= w[row]
        pivots.append(col)
        row += 1
    return w[: len(pivots)], pivots


def gf2_nullspace_packed(w, ncols):
    """Nullspace basis (unpacked int64 rows, reduced echelon) of a packed GF(2) matrix."""
    r, pivots = gf2_rref_packed(w, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    dense = gf2_unpack(r, ncols) if len(pivots) else np.zeros((0, ncols), np.int64)
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, c in enumerate(pivots):
            basis[i, c] = dense[j, f]
    if len(basis):
        basis = gf2_unpack(gf2_rref_packed(gf2_pack(basis), ncols)[0], ncols)
    return basis


def gf2_matvec_packed(v, at_packed, n_out):
    """v @ A over GF(2); v packed (1d words), at_packed = packed rows of A^T."""
    acc = np.bitwise_count(v[None, :] & at_packed).sum(axis=1)
    return (acc & 1).astype(np.int64)[:n_out]


# ---------------------------------------------------------------------------
# univariate polynomials mod p (coefficient arrays, low degree first)
# ---------------------------------------------------------------------------


def poly_trim(f):
    f = np.asarray(f, dtype=np.int64)
    nz = np.nonzero(f)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=np.int64)
    return f[: int(nz[-1]) + 1]


def poly_deg(f):
    f = poly_trim(f)
    return len(f) - 1 if np.any(f) else -1


def poly_mul(f, g, p):
    return poly_trim(np.convolve(f, g) % p)


def poly_add(f, g, p):
    k = max(len(f), len(g))
    out = np.zeros(k, dtype=np.int64)
    out[: len(f)] += f
    out[: len(g)] += g
    return poly_trim(out % p)


def poly_sub(f, g, p):
    k = max(len(f), len(g))
    out = np.zeros(k, dtype=np.int64)
    out[: len(f)] += f
    out[: len(g)] -= g
    return poly_trim(out % p)


def poly_monic(f, p):
    f = poly_trim(f % p)
    lead = int(f[-1])
    if lead == 1:
        return f
    return (f * inv_mod(lead, p)) % p


def poly_divmod(f, g, p):
    f = poly_trim(normalize(f, p))
    g = poly_trim(normalize(g, p))
    if not np.any(g):
        raise ZeroDivisionError("polynomial division by zero")
    df, dg = len(f) - 1, len(g) - 1
    if not np.any(f) or df < dg:
        return np.zeros(1, dtype=np.int64), f
    ginv = inv_mod(g[-1], p)
    r = f.copy()
    q = np.zeros(df - dg + 1, dtype=np.int64)
    for shift in range(df - dg, -1, -1):
        c = (int(r[shift + dg]) * ginv) % p
        if c:
            q[shift] = c
            r[shift : shift + dg + 1] = (r[shift : shift + dg + 1] - c * g) % p
    return poly_trim(q), poly_trim(r)


def poly_mod(f, g, p):
    return poly_divmod(f, g, p)[1]


def poly_gcd(f, g, p):
    f = poly_trim(f % p)
    g = poly_trim(g % p)
    while np.any(g):
        f, g = g, poly_mod(f, g, p)
    if not np.any(f):
        return f
    return poly_monic(f, p)


def poly_pow_mod(f, e, g, p):
    out = np.ones(1, dtype=np.int64)
    base = poly_mod(f, g, p)
    while e:
        if e & 1:
            out = poly_mod(poly_mul(out, base, p), g, p)
        base = poly_mod(poly_mul(base, base, p), g, p)
        e >>= 1
    return out


def poly_deriv(f, p):
    f = poly_trim(f)
    if len(f) == 1:
        return np.zeros(1, dtype=np.int64)
    return poly_trim((f[1:] * np.arange(1, len(f), dtype=np.int64)) % p)


def _squarefree_parts(f, p):
    """List of (squarefree factor, multiplicity), Yun's algorithm in char p."""
    out = {}

    def rec(g, scale):
        if poly_deg(g) <= 0:
            return
        d = poly_deriv(g, p)
        if not np.any(d):
            # g = h(x^p) = h(x)^p over the prime field
            rec(poly_trim(g[::p]), scale * p)
            return
        c = poly_gcd(g, d, p)
        w = poly_divmod(g, c, p)[0]
        m = 1
        while poly_deg(w) > 0:
            y = poly_gcd(w, c, p)
            z = poly_divmod(w, y, p)[0]
            if poly_deg(z) > 0:
                key = tuple(int(x) for x in poly_monic(z, p))
                out[key] = out.get(key, 0) + m * scale
            c = poly_divmod(c, y, p)[0]
            w = y
            m += 1
        rec(c, scale)  # leftover carries the p-th-power part

    rec(poly_monic(f, p), 1)
    return [(np.array(k, dtype=np.int64), m) for k, m in out.items()]


def _distinct_degree(f, p):
    """Split squarefree monic f into (product of deg-d irreducibles, d)."""
    out = []
    x = np.array([0, 1], dtype=np.int64)
    h = x.copy()
    d = 0
    while poly_deg(f) >= 2 * (d + 1):
        d += 1
        h = poly_pow_mod(h, p, f, p)
        g = poly_gcd(poly_sub(h, x, p), f, p)
        if poly_deg(g) > 0:
            out.append((g, d))
            f = poly_divmod(f, g, p)[0]
            h = poly_mod(h, f, p)
    if poly_deg(f) > 0:
        out.append((f, poly_deg(f)))
    return out


def _equal_degree(f, d, p, rng):
    """Cantor-Zassenhaus split of f into its degree-d irreducible factors."""
    n = poly_deg(f)
    if n == d:
        return [f]
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if poly_deg(g) == d:
            out.append(g)
            continue
        while True:
            h = rng.integers(0, p, size=poly_deg(g), dtype=np.int64)
            h = poly_trim(h)
            if poly_deg(h) < 1:
                continue
            if p == 2:
                t = h.copy()
                acc = h.copy()
                for _ in range(d - 1):
                    t = poly_pow_mod(t, 2, g, p)
                    acc = poly_add(acc, t, p)
                w = poly_gcd(acc, g, p)
            else:
                e = (p**d - 1) // 2
                t = poly_pow_mod(h, e, g, p)
                t = t.copy()
                t[0] = (t[0] - 1) % p
                w = poly_gcd(poly_trim(t), g, p)
            if 0 < poly_deg(w) < poly_deg(g):
                stack.append(w)
                stack.append(poly_divmod(g, w, p)[0])
                break
    return out


def factor_poly(f, p, rng=None):
    """Factor f into monic irreducibles; returns list of (factor, multiplicity).

    Equal-degree splitting uses the supplied seeded generator, so the result
    is deterministic for a fixed seed; the list is sorted by (degree, coeffs).
    """
    if rng is None:
        rng = np.random.default_rng(0)
    factors = []
    for sq, mult in _squarefree_parts(f, p):
        for g, d in _distinct_degree(sq, p):
            for irr in _equal_degree(g, d, p, rng):
                factors.append((poly_monic(irr, p), mult))
    factors.sort(key=lambda fm: (poly_deg(fm[0]), tuple(int(c) for c in fm[0])))
    return factors


def poly_roots(f, p, rng=None):
    """Sorted roots in GF(p) of f (with multiplicity collapsed)."""
    roots = []
    for g, _ in factor_poly(f, p, rng):
        if poly_deg(g) == 1:
            roots.append((-int(g[0])) % p)
    return sorted(set(roots))


def poly_eval_matrix(f, a, p):
    """Evaluate the polynomial f at the square matrix a (Horner)."""
    n = a.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in reversed(poly_trim(f)):
        out = matmul(out, a, p)
        if c:
            out = (out + int(c) * np.eye(n, dtype=np.int64)) % p
    return out


def minimal_polynomial(a, p):
    """Minimal polynomial of the square matrix a over GF(p), monic.

    Spins Krylov sequences from standard basis vectors; each dependency is
    recovered from an augmented elimination and the local relations are
    combined by lcm.
    """
    n = a.shape[0]
    a = normalize(a, p)
    seen = EchelonBasis(n, p)
    m = np.ones(1, dtype=np.int64)
    for start in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[start] = 1
        if seen.contains(e):
            continue
        # rows: [reduced iterate | coordinates in the iterate sequence]
        work = np.zeros((0, n + n + 1), dtype=np.int64)
        piv = []
        v = e
        t = 0
        while True:
            row = np.zeros(n + n + 1, dtype=np.int64)
            row[:n] = v
            row[n + t] = 1
            if piv:
                coeff = row[piv]
                if np.any(coeff):
                    row = (row - coeff @ work) % p
            nz = np.nonzero(row[:n])[0]
            if nz.size == 0:
                rel = row[n : n + t + 1]
                m = _poly_lcm(m, rel, p)
                break
            col = int(nz[0])
            row = (row * inv_mod(row[col], p)) % p
            if piv:
                cc = work[:, col].copy()
                if np.any(cc):
                    work = (work - np.outer(cc, row)) % p
            work = np.vstack([work, row])
            piv.append(col)
            v = (v @ a) % p
            t += 1
        for r in work:
            seen.insert(r[:n])
        if seen.dim == n:
            break
    return poly_monic(m, p)


def _poly_lcm(f, g, p):
    if poly_deg(f) < 0 or poly_deg(g) < 0:
        return poly_trim(f if poly_deg(g) < 0 else g)
    h = poly_gcd(f, g, p)
    q = poly_divmod(f, h, p)[0]
    return poly_monic(poly_mul(q, g, p), p)
