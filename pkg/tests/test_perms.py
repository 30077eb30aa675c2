import numpy as np
import pytest
from hatd4.perms import (GroupError, PermGroup, compose, from_cycles,
                         identity_perm, inverse, is_dihedral_8,
                         is_elementary_abelian, is_member, is_semiregular,
                         is_solvable, normal_closure, perm_order,
                         point_stabiliser, write_group_file, read_group_file)


def S(n, *cycles_list):
    return PermGroup(n, [from_cycles(n, [c]) for c in cycles_list])


@pytest.fixture(scope="module")
def s4():
    return S(4, (0, 1), (0, 1, 2, 3))


@pytest.fixture(scope="module")
def a5():
    return S(5, (0, 1, 2, 3, 4), (2, 3, 4))


def test_group_orders(s4, a5, catalog):
    assert s4.order() == 24
    assert a5.order() == 60
    assert catalog["pgl_2_7"].order() == 336  # q(q-1)(q+1) at q = 7


def test_orbits(s4):
    triv = PermGroup(5, [])
    assert triv.orbit(3) == {3}
    z5 = S(5, (0, 1, 2, 3, 4))
    assert z5.orbit(0) == {0, 1, 2, 3, 4}
    assert sorted(map(sorted, s4.orbits())) == [[0, 1, 2, 3]]


def test_point_stabiliser(s4):
    st0 = s4.point_stabiliser(0)
    assert st0.order() == 6
    assert all(g[0] == 0 for g in st0.gens)
    # semiregular group: trivial stabilisers
    sr = S(4, ((0, 1), (2, 3))) if False else PermGroup(
        4, [from_cycles(4, [(0, 1), (2, 3)])])
    assert sr.point_stabiliser(2).order() == 1


def test_orbit_stabiliser_random():
    rng = np.random.default_rng(7)
    for _ in range(20):
        deg = int(rng.integers(4, 9))
        gens = [np.array(rng.permutation(deg), dtype=np.int32) for _ in range(2)]
        g = PermGroup(deg, gens)
        p = int(rng.integers(0, deg))
        assert len(g.orbit(p)) * g.point_stabiliser(p).order() == g.order()


def test_membership(s4):
    assert is_member(s4, identity_perm(4))
    assert is_member(s4, from_cycles(4, [(1, 2, 3)]))
    z3 = S(4, (0, 1, 2))
    assert not is_member(z3, from_cycles(4, [(0, 1)]))
    with pytest.raises(GroupError):
        is_member(s4, identity_perm(5))


def test_membership_vs_enumeration():
    g = S(6, (0, 1, 2, 3, 4, 5), (0, 1))
    els, index = g.elements()
    rng = np.random.default_rng(3)
    sub = S(6, (0, 1, 2), (3, 4, 5))
    for _ in range(40):
        w = els[int(rng.integers(0, len(els)))]
        assert is_member(g, w)
        assert is_member(sub, w) == (sub.contains(w))


def test_closure_membership_random_products(s4):
    rng = np.random.default_rng(1)
    w = identity_perm(4)
    for _ in range(10):
        w = compose(w, s4.gens[int(rng.integers(0, len(s4.gens)))])
        assert is_member(s4, w)


def test_semiregular():
    assert is_semiregular(PermGroup(3, []), [0, 1, 2])
    fpf = PermGroup(4, [from_cycles(4, [(0, 1), (2, 3)])])
    assert is_semiregular(fpf, [0, 1, 2, 3])
    fixer = S(3, (0, 1))
    assert not is_semiregular(fixer, [0, 1, 2])
    with pytest.raises(GroupError):
        is_semiregular(fixer, [])


def test_semiregular_orbit_size_equivalence():
    rng = np.random.default_rng(5)
    for _ in range(20):
        deg = int(rng.integers(3, 8))
        g = PermGroup(deg, [np.array(rng.permutation(deg), dtype=np.int32)])
        points = list(range(deg))
        expected = all(len(g.orbit(p)) == g.order() for p in points)
        assert is_semiregular(g, points) == expected


def test_solvability(s4, a5, catalog):
    assert is_solvable(s4)
    assert not is_solvable(a5)
    assert not is_solvable(catalog["pgl_2_7"])
    # p-groups are solvable
    d4 = S(4, (0, 1, 2, 3), (0, 2))
    assert is_solvable(d4)
    # a group with an A5 section
    s5 = S(5, (0, 1), (0, 1, 2, 3, 4))
    assert not is_solvable(s5)


def test_dihedral_recognition():
    d4 = S(4, (0, 1, 2, 3), (0, 2))
    assert d4.order() == 8 and is_dihedral_8(d4)
    z8 = S(8, tuple(range(8)))
    assert not is_dihedral_8(z8)
    klein3 = PermGroup(6, [from_cycles(6, [(0, 1)]), from_cycles(6, [(2, 3)]),
                           from_cycles(6, [(4, 5)])])
    assert not is_dihedral_8(klein3)  # abelian of order 8


def test_q8_is_not_dihedral():
    # Q8 as a regular permutation group of degree 8 via left multiplication
    units = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {("1", "1"): "1", ("1", "i"): "i", ("1", "j"): "j", ("1", "k"): "k",
            ("i", "1"): "i", ("i", "i"): "-1", ("i", "j"): "k", ("i", "k"): "-j",
            ("j", "1"): "j", ("j", "i"): "-k", ("j", "j"): "-1", ("j", "k"): "i",
            ("k", "1"): "k", ("k", "i"): "j", ("k", "j"): "-i", ("k", "k"): "-1"}

    def mul(x, y):
        s = 1
        if x.startswith("-"):
            s, x = -s, x[1:]
        if y.startswith("-"):
            s, y = -s, y[1:]
        z = base[(x, y)]
        return z if s > 0 else ("-" + z if not z.startswith("-") else z[1:])

    uidx = {u: i for i, u in enumerate(units)}
    q8 = PermGroup(8, [np.array([uidx[mul(g, v)] for v in units], dtype=np.int32)
                       for g in ("i", "j")])
    assert q8.order() == 8
    assert not is_dihedral_8(q8)


def test_elementary_abelian():
    assert is_elementary_abelian(PermGroup(4, []))
    klein = PermGroup(4, [from_cycles(4, [(0, 1)]), from_cycles(4, [(2, 3)])])
    assert is_elementary_abelian(klein)
    z4 = S(4, (0, 1, 2, 3))
    assert not is_elementary_abelian(z4)
    z6 = S(6, tuple(range(6)))
    assert not is_elementary_abelian(z6)
    z3z3 = PermGroup(6, [from_cycles(6, [(0, 1, 2)]), from_cycles(6, [(3, 4, 5)])])
    assert is_elementary_abelian(z3z3)


def test_normal_closure(s4, a5):
    triv = normal_closure(s4, [identity_perm(4)])
    assert triv.order() == 1
    klein = normal_closure(s4, [from_cycles(4, [(0, 1), (2, 3)])])
    assert klein.order() == 4
    whole = normal_closure(a5, [from_cycles(5, [(0, 1, 2)])])
    assert whole.order() == 60  # simple group
    with pytest.raises(GroupError):
        normal_closure(PermGroup(4, [from_cycles(4, [(0, 1, 2)])]),
                       [from_cycles(4, [(0, 1)])])


def test_perm_order():
    assert perm_order(from_cycles(6, [(0, 1, 2), (3, 4)])) == 6
    assert perm_order(identity_perm(5)) == 1


def test_catalog_roundtrip(tmp_path, catalog):
    g = catalog["psl_2_17"]
    path = tmp_path / "g.grp"
    write_group_file(g, path)
    h = read_group_file(path)
    assert h.order() == 2448 and h.degree == 18


def test_catalog_rejects_wrong_order(tmp_path):
    path = tmp_path / "bad.grp"
    path.write_text("group bad\ndegree 3\norder 5\ngen 1 2 0\n")
    with pytest.raises(GroupError, match="order"):
        read_group_file(path)


def test_catalog_orders(catalog):
    want = {"psl_2_7": 168, "pgl_2_7": 336, "alt_6": 360, "sym_6": 720,
            "pgl_2_9": 720, "m10": 720, "psl_2_17": 2448, "alt_8": 20160,
            "sym_8": 40320}
    for name, order in want.items():
        assert catalog[name].order() == order


def test_membership_brute_force_midsize(catalog):
    """Membership by chain sifting agrees with closure enumeration (order 2448)."""
    g = catalog["psl_2_17"]
    els, index = g.elements()
    assert len(els) == 2448
    rng = np.random.default_rng(9)
    for _ in range(30):
        w = els[int(rng.integers(0, len(els)))]
        assert g.contains(w)
    # shuffle images to leave the group
    outside = els[0].copy()
    outside[[0, 1]] = outside[[1, 0]]
    assert g.contains(outside) == (outside.tobytes() in index)
