"""Regenerate the packaged fixture data: the group catalog and the order-27
half-arc-transitive graph.  Every fixture is verified before being written.

Run from the repository root:  python tools/make_fixtures.py
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hatd4 import graphs as G
from hatd4 import symmetry as S
from hatd4.perms import PermGroup, from_cycles, write_group_file

DATA = Path(__file__).resolve().parent.parent / "src" / "hatd4" / "data"


# -- projective lines over prime fields --------------------------------------


def moebius_gens(q, extra_nonsquare):
    """Generators of PSL(2,q) (or PGL with the nonsquare scaling) on q+1 points."""
    inf = q
    nonsquare = next(c for c in range(2, q) if pow(c, (q - 1) // 2, q) == q - 1)

    def mk(f):
        return np.array([f(x) for x in range(q + 1)], dtype=np.int32)

    def add1(x):
        return inf if x == inf else (x + 1) % q

    def neginv(x):
        if x == inf:
            return 0
        if x == 0:
            return inf
        return (-pow(x, q - 2, q)) % q

    def mulc(c):
        return lambda x: inf if x == inf else (c * x) % q

    gens = [mk(add1), mk(neginv), mk(mulc(nonsquare * nonsquare % q))]
    if extra_nonsquare:
        gens.append(mk(mulc(nonsquare)))
    return gens


# -- GF(9) for the degree-10 groups -------------------------------------------


def gf9_mul(u, v):
    a, b = u % 3, u // 3
    c, d = v % 3, v // 3
    return (a * c + b * d) % 3 + 3 * ((a * d + b * c + b * d) % 3)  # t^2 = t+1


def gf9_add(u, v):
    return (u % 3 + v % 3) % 3 + 3 * ((u // 3 + v // 3) % 3)


def gf9_pow(u, k):
    r = 1
    for _ in range(k):
        r = gf9_mul(r, u)
    return r


def gf9_neg(u):
    return (-u % 3) % 3 + 3 * ((-(u // 3)) % 3)


def degree10_groups():
    t = 3
    inf = 9

    def mk(f):
        return np.array([f(x) for x in range(10)], dtype=np.int32)

    def add1(x):
        return inf if x == inf else gf9_add(x, 1)

    def neginv(x):
        if x == inf:
            return 0
        if x == 0:
            return inf
        return gf9_neg(gf9_pow(x, 7))

    def mulc(c):
        return lambda x: inf if x == inf else gf9_mul(c, x)

    def frob_mul_t(x):
        return inf if x == inf else gf9_mul(t, gf9_pow(x, 3))

    psl = [mk(add1), mk(neginv), mk(mulc(gf9_mul(t, t)))]
    pgl = psl + [mk(mulc(t))]
    m10 = psl + [mk(frob_mul_t)]
    return pgl, m10


def gf25_mul(u, v):
    a, b = u % 5, u // 5
    c, d = v % 5, v // 5
    return (a * c + 3 * b * d) % 5 + 5 * ((a * d + b * c + b * d) % 5)  # t^2 = t+3


def gf25_add(u, v):
    return (u % 5 + v % 5) % 5 + 5 * ((u // 5 + v // 5) % 5)


def gf25_neg(u):
    return (-u % 5) % 5 + 5 * ((-(u // 5)) % 5)


def gf25_pow(u, k):
    r = 1
    for _ in range(k):
        r = gf25_mul(r, u)
    return r


def degree26_groups():
    """PSL(2,25) and its three order-720*... order-15600 extensions on 26 points."""
    t = 5
    inf = 25

    def mk(f):
        return np.array([f(x) for x in range(26)], dtype=np.int32)

    def add1(x):
        return inf if x == inf else gf25_add(x, 1)

    def neginv(x):
        if x == inf:
            return 0
        if x == 0:
            return inf
        return gf25_neg(gf25_pow(x, 23))

    def mulc(c):
        return lambda x: inf if x == inf else gf25_mul(c, x)

    def frob(x):
        return inf if x == inf else gf25_pow(x, 5)

    def frob_mul_t(x):
        return inf if x == inf else gf25_mul(t, gf25_pow(x, 5))

    psl = [mk(add1), mk(neginv), mk(mulc(gf25_mul(t, t)))]
    return (psl, psl + [mk(mulc(t))], psl + [mk(frob)], psl + [mk(frob_mul_t)])


def pg2_actions():
    """PSL(3,3) on the 13 points of PG(2,3), and its extension by the
    point-line duality on 13 + 13 points."""
    import itertools

    from hatd4.gfp import rref

    q = 3
    pts, seen = [], set()
    for v in itertools.product(range(q), repeat=3):
        if v == (0, 0, 0):
            continue
        v = np.array(v)
        nz = np.nonzero(v)[0][0]
        vn = tuple((v * pow(int(v[nz]), q - 2, q)) % q)
        if vn not in seen:
            seen.add(vn)
            pts.append(vn)
    pts.sort()
    pidx = {v: i for i, v in enumerate(pts)}

    def norm(w):
        nz = np.nonzero(w)[0][0]
        return tuple((w * pow(int(w[nz]), q - 2, q)) % q)

    def inv3(m):
        aug = np.concatenate([np.array(m) % q, np.eye(3, dtype=np.int64)], axis=1)
        return rref(aug.astype(np.int64), q)[0][:, 3:]

    def act13(m):
        return np.array([pidx[norm(np.array(v) @ np.array(m) % q)] for v in pts],
                        dtype=np.int32)

    def act26(m):
        mi_t = inv3(m).T % q
        out = np.empty(26, dtype=np.int32)
        for i, v in enumerate(pts):
            out[i] = pidx[norm(np.array(v) @ np.array(m) % q)]
            out[13 + i] = 13 + pidx[norm(np.array(v) @ mi_t % q)]
        return out

    elem = []
    for i in range(3):
        for j in range(3):
            if i != j:
                m = np.eye(3, dtype=int)
                m[i, j] = 1
                elem.append(m)
    tau = np.concatenate([np.arange(13, 26), np.arange(0, 13)]).astype(np.int32)
    return [act13(m) for m in elem], [act26(m) for m in elem] + [tau]


def unitary_groups():
    """U3(3) on the 28 isotropic points of the standard Hermitian form over
    GF(9), generated by pseudo-reflections, and its Frobenius extension."""
    import itertools

    def conj(u):
        return gf9_pow(u, 3)

    def inv(u):
        return gf9_pow(u, 7)

    def hdot(x, y):
        s = 0
        for xi, yi in zip(x, y):
            s = gf9_add(s, gf9_mul(xi, conj(yi)))
        return s

    def vnorm(x):
        nz = next(i for i, xi in enumerate(x) if xi)
        c = inv(x[nz])
        return tuple(gf9_mul(c, xi) for xi in x)

    iso, seen = [], set()
    aniso = []
    for v in itertools.product(range(9), repeat=3):
        if v == (0, 0, 0):
            continue
        vn = vnorm(v)
        if vn in seen:
            continue
        seen.add(vn)
        (iso if hdot(v, v) == 0 else aniso).append(vn)
    iso.sort()
    aniso.sort()
    iidx = {v: i for i, v in enumerate(iso)}
    norm1 = [z for z in range(1, 9) if gf9_pow(z, 4) == 1]

    def perm_of(f):
        return np.array([iidx[vnorm(f(v))] for v in iso], dtype=np.int32)

    def reflection(v, zeta):
        hvi = inv(hdot(v, v))
        fac = gf9_add(zeta, gf9_neg(1))

        def f(x):
            c = gf9_mul(gf9_mul(fac, hdot(x, v)), hvi)
            return tuple(gf9_add(xi, gf9_mul(c, vi)) for xi, vi in zip(x, v))

        return f

    gens = [perm_of(reflection(v, z)) for v in aniso[:8] for z in norm1[1:]]
    frob = perm_of(lambda x: tuple(conj(xi) for xi in x))
    return gens, gens + [frob]


def product_groups(psl27_gens, delta):
    """The socle PSL(2,7) x PSL(2,7) on 8 + 8 points and its two relevant
    index-2 overgroups of order 56448: the swap extension and the even
    subgroup of PGL x PGL (component pairs in the same PSL-coset)."""
    gens = []
    for g in psl27_gens:
        a = np.arange(16, dtype=np.int32)
        a[:8] = g
        gens.append(a)
        b = np.arange(16, dtype=np.int32)
        b[8:] = g + 8
        gens.append(b)
    swap = np.concatenate([np.arange(8, 16), np.arange(0, 8)]).astype(np.int32)
    diag = np.empty(16, dtype=np.int32)
    diag[:8] = delta
    diag[8:] = delta + 8
    return gens, gens + [swap], gens + [diag]


def holt_edges():
    """The order-27 graph: vertices Z9 x Z3, (i,j) ~ (i +- 4^j, j+1)."""
    def vid(i, j):
        return (i % 9) * 3 + (j % 3)

    edges = set()
    for i in range(9):
        for j in range(3):
            for s in (1, -1):
                u, w = vid(i, j), vid(i + s * 4**j, j + 1)
                edges.add((min(u, w), max(u, w)))
    return sorted(edges)


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "catalog").mkdir(exist_ok=True)

    pgl29, m10 = degree10_groups()
    psl25, pgl25, psigma25, m25 = degree26_groups()
    psl33, psl33_ext = pg2_actions()
    u33, u33_ext = unitary_groups()
    psl27_gens = moebius_gens(7, False)
    pgl27_gens = moebius_gens(7, True)
    psl27_grp = PermGroup(8, psl27_gens)
    delta = next(g for g in pgl27_gens if not psl27_grp.contains(g))
    psl27sq, psl27sq_ext, pgl27sq_even = product_groups(psl27_gens, delta)
    catalog = [
        ("psl_2_7", 8, 168, psl27_gens),
        ("pgl_2_7", 8, 336, moebius_gens(7, True)),
        ("alt_6", 6, 360, [from_cycles(6, [(0, 1, 2)]), from_cycles(6, [(1, 2, 3, 4, 5)])]),
        ("sym_6", 6, 720, [from_cycles(6, [(0, 1)]), from_cycles(6, [(0, 1, 2, 3, 4, 5)])]),
        ("pgl_2_9", 10, 720, pgl29),
        ("m10", 10, 720, m10),
        ("psl_2_17", 18, 2448, moebius_gens(17, False)),
        ("psl_3_3", 13, 5616, psl33),
        ("u_3_3", 28, 6048, u33),
        ("psl_2_23", 24, 6072, moebius_gens(23, False)),
        ("psl_2_25", 26, 7800, psl25),
        ("psl_3_3_ext", 26, 11232, psl33_ext),
        ("u_3_3_ext", 28, 12096, u33_ext),
        ("pgl_2_23", 24, 12144, moebius_gens(23, True)),
        ("psl_2_31", 32, 14880, moebius_gens(31, False)),
        ("pgl_2_25", 26, 15600, pgl25),
        ("psigma_2_25", 26, 15600, psigma25),
        ("m_2_25", 26, 15600, m25),
        ("alt_8", 8, 20160, [from_cycles(8, [(0, 1, 2)]), from_cycles(8, [(1, 2, 3, 4, 5, 6, 7)])]),
        ("psl_2_7_sq", 16, 28224, psl27sq),
        ("psl_2_41", 42, 34440, moebius_gens(41, False)),
        ("sym_8", 8, 40320, [from_cycles(8, [(0, 1)]), from_cycles(8, [(0, 1, 2, 3, 4, 5, 6, 7)])]),
        ("psl_2_47", 48, 51888, moebius_gens(47, False)),
        ("psl_2_7_sq_2", 16, 56448, psl27sq_ext),
        ("pgl_2_7_even_sq", 16, 56448, pgl27sq_even),
        ("pgl_2_41", 42, 68880, moebius_gens(41, True)),
    ]
    for name, degree, order, gens in catalog:
        grp = PermGroup(degree, gens, name=name)
        assert grp.order() == order, (name, grp.order(), order)
        write_group_file(grp, DATA / "catalog" / ("%s.grp" % name), name=name)
        print("catalog %-13s degree %2d order %6d" % (name, degree, order))

    # extensions must genuinely extend: the added generator leaves the socle
    pgl = PermGroup(10, pgl29)
    assert not pgl.contains(m10[-1])
    assert not PermGroup(26, pgl25).contains(m25[-1])
    assert not PermGroup(26, pgl25).contains(psigma25[-1])

    holt = G.from_simple_edges(27, holt_edges())
    prof = G.structural_profile(holt)
    assert prof.connected and prof.simple and set(prof.valences) == {4}
    act = S.aut_group(holt)
    assert act.group.order() == 54, act.group.order()
    tp = S.transitivity_profile(holt, act)
    assert tp.classification == S.HALF_ARC_TRANSITIVE, tp
    with open(DATA / "holt_27.graph", "w", encoding="utf-8") as fh:
        fh.write("# tetravalent half-arc-transitive graph of order 27\n")
        fh.write("simple 27\n")
        for u, w in holt_edges():
            fh.write("%d %d\n" % (u, w))
    print("holt_27.graph: order 27, |Aut| = 54, half-arc-transitive")


if __name__ == "__main__":
    main()
