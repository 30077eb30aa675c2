import numpy as np
import pytest

from hatd4 import canon, gfp, meataxe
from hatd4.covers import CoverError, check_lemma_nq, quotient
from hatd4.graphs import certificate, from_simple_edges
from hatd4.homology import (cover_budget, cover_from_kernel,
                            dual_minimal_submodules, homology_rep, lift_group,
                            maximal_invariant_submodules,
                            minimal_admissible_covers, voltages_from_dual)
from hatd4.perms import PermGroup, is_dihedral_8
from hatd4.symmetry import GraphAction, aut_group, is_relevant_pair


def rotation_action(g, vmap):
    vmap = np.asarray(vmap, dtype=np.int32)
    dmap = canon.extend_vertex_map_to_darts(g, g, vmap)
    return GraphAction.from_vertex_dart(g, [(vmap, dmap)])


@pytest.fixture(scope="module")
def triangle():
    return from_simple_edges(3, [(0, 1), (1, 2), (0, 2)])


def test_dimension_formula(base_pair_42, triangle):
    graph, action = base_pair_42
    mod = homology_rep(graph, action, 3)
    assert mod.dim == 2 * 42 - 42 + 1 == 43
    rot = rotation_action(triangle, [1, 2, 0])
    m1 = homology_rep(triangle, rot, 2)
    assert m1.dim == 1
    assert np.array_equal(m1.action[0], np.eye(1, dtype=np.int64))


def test_identity_action_is_identity_matrix(triangle):
    ident = rotation_action(triangle, [0, 1, 2])
    mod = homology_rep(triangle, ident, 7)
    assert all(np.array_equal(a, np.eye(mod.dim, dtype=np.int64)) for a in mod.action)


def test_action_matrices_are_invertible(base_pair_42):
    graph, action = base_pair_42
    for p in (2, 3, 5):
        mod = homology_rep(graph, action, p)
        for a in mod.action:
            assert gfp.rank(a, p) == mod.dim


def test_action_matrices_respect_relations(base_pair_42):
    """Matrix of a word equals the product of generator matrices (spot check)."""
    graph, action = base_pair_42
    p = 3
    mod = homology_rep(graph, action, p)
    rng = np.random.default_rng(0)
    gens = action.group.gens
    for _ in range(20):
        word = rng.integers(0, len(gens), size=int(rng.integers(2, 5)))
        perm = np.arange(graph.n + graph.m, dtype=np.int32)
        mat = np.eye(mod.dim, dtype=np.int64)
        for k in word:
            perm = gens[int(k)][perm]
            mat = gfp.matmul(mat, mod.action[int(k)], p)
        direct = homology_rep(
            graph,
            GraphAction.from_vertex_dart(
                graph, [(perm[: graph.n], perm[graph.n :] - graph.n)]),
            p,
        )
        assert np.array_equal(direct.action[0], mat)


def test_trivial_action_hyperplanes():
    """Trivially acted dim-2 module over GF(2): three maximal subspaces."""
    square = from_simple_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
    ident = rotation_action(square, [0, 1, 2, 3])
    mod = homology_rep(square, ident, 2)
    assert mod.dim == 2
    subs = maximal_invariant_submodules(mod, 1)
    assert len(subs) == 3
    assert all(b.shape[0] == 1 for b in subs)


def test_maximal_invariant_matches_oracle_small():
    rng = np.random.default_rng(12)
    checked = 0
    for p in (2, 3):
        for _ in range(25):
            n = int(rng.integers(2, 5))
            gens = []
            for _ in range(int(rng.integers(1, 3))):
                while True:
                    a = rng.integers(0, p, size=(n, n))
                    if gfp.rank(a, p) == n:
                        gens.append(a)
                        break

            class FakeMod:
                pass

            fm = FakeMod()
            fm.p, fm.dim, fm.action = p, n, gens
            for dmax in (1, 2, n):
                got = maximal_invariant_submodules(fm, dmax)
                want = meataxe.maximal_invariant_oracle(gens, p, dmax)
                assert sorted(b.tobytes() for b in got) == \
                    sorted(b.tobytes() for b in want), (p, n, dmax)
            checked += 1
    assert checked == 50


def test_cover_from_kernel_rejects_non_invariant(base_pair_42):
    graph, action = base_pair_42
    mod = homology_rep(graph, action, 2)
    # a random hyperplane is almost surely not invariant
    rng = np.random.default_rng(5)
    for _ in range(10):
        w = rng.integers(0, 2, size=(1, mod.dim))
        if not np.any(w):
            continue
        k = gfp.nullspace(w, 2)
        if mod.is_invariant(k):
            continue
        with pytest.raises(CoverError, match="generator"):
            cover_from_kernel(mod, k)
        break
    else:
        pytest.skip("all sampled hyperplanes invariant (unexpected)")


def test_cover_from_kernel_rejects_whole_space(base_pair_42):
    graph, action = base_pair_42
    mod = homology_rep(graph, action, 2)
    with pytest.raises(CoverError):
        cover_from_kernel(mod, np.eye(mod.dim, dtype=np.int64))


def test_classic_double_cover_lift(triangle):
    rot = rotation_action(triangle, [1, 2, 0])
    mod = homology_rep(triangle, rot, 2)
    zeta = cover_from_kernel(mod, np.zeros((0, mod.dim), dtype=np.int64))
    pair = lift_group(triangle, rot, zeta)
    assert pair.cover.n == 6
    assert pair.action.group.order() == 6  # Z3 lift + Z2 translations


def test_budget():
    assert cover_budget(42, 84) == [(2, 1)]
    assert cover_budget(42, 42) == []
    got = dict(cover_budget(42, 10752))
    assert got[2] == 8 and got[3] == 5 and got[5] == 3
    assert got[7] == 2 and got[13] == 2 and got[17] == 1 and got[251] == 1
    assert 257 not in got


def test_degree2_cover_of_base_pair(base_pair_42):
    graph, action = base_pair_42
    covers = minimal_admissible_covers(graph, action, 84)
    assert len(covers) == 1
    pair = covers[0]
    assert pair.cover.n == 84
    assert pair.action.group.order() == 672
    stab = PermGroup(pair.cover.n + pair.cover.m, pair.stabiliser_gens)
    assert stab.order() == 8 and is_dihedral_8(stab)
    assert is_relevant_pair(pair.cover, pair.action)


def test_lift_invariants_roundtrip(base_pair_42):
    graph, action = base_pair_42
    for pair in minimal_admissible_covers(graph, action, 42 * 9):
        q = pair.p ** pair.d
        assert pair.cover.n == q * graph.n
        assert pair.action.group.order() == q * action.group.order()
        quot, proj = quotient(pair.cover, pair.translations)
        assert certificate(quot).data == certificate(graph).data
        assert set(proj.fibre_sizes()) == {q}
        rep = check_lemma_nq(pair.cover, pair.translations)
        assert rep.semiregular and rep.covering


def test_quotient_module_irreducible(base_pair_42):
    """Re-running the submodule search inside the quotient finds nothing proper."""
    graph, action = base_pair_42
    p = 2
    mod = homology_rep(graph, action, p)
    for r in dual_minimal_submodules(mod, 8):
        d = r.shape[0]
        if d == 1:
            continue
        qmats = []
        for a in mod.action:
            rt = r.T % p
            _, piv = gfp.rref(r, p)
            y = gfp.matmul(a, rt, p)
            qmats.append(y[piv, :])
        sub = [m.T.copy() for m in qmats]
        assert meataxe.is_irreducible(sub, p)[0]


def test_empty_when_no_room(base_pair_42):
    graph, action = base_pair_42
    assert minimal_admissible_covers(graph, action, graph.n) == []


def test_relator_words_on_small_module():
    """200 sampled words: the homology matrix of a word equals the product."""
    cube = from_simple_edges(8, [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6),
                                 (6, 7), (4, 7), (0, 4), (1, 5), (2, 6), (3, 7)])
    act = aut_group(cube)
    p = 5
    mod = homology_rep(cube, act, p)
    gens = act.group.gens
    rng = np.random.default_rng(1)
    for _ in range(200):
        word = rng.integers(0, len(gens), size=int(rng.integers(1, 6)))
        perm = np.arange(cube.n + cube.m, dtype=np.int32)
        mat = np.eye(mod.dim, dtype=np.int64)
        for k in word:
            perm = gens[int(k)][perm]
            mat = gfp.matmul(mat, mod.action[int(k)], p)
        direct = homology_rep(
            cube, GraphAction.from_vertex_dart(
                cube, [(perm[:cube.n], perm[cube.n:] - cube.n)]), p)
        assert np.array_equal(direct.action[0], mat)


def test_two_level_lineage_composes_to_base(base_pair_42):
    """Composing the two projections gives a covering of the base of degree
    p1^d1 * p2^d2."""
    from hatd4.covers import compose, is_covering

    graph, action = base_pair_42
    lvl1 = minimal_admissible_covers(graph, action, 168)
    first = lvl1[0]  # the degree-2 cover, order 84
    lvl2 = minimal_admissible_covers(first.cover, first.action, 400)
    assert lvl2, "expected at least one second-level cover"
    second = lvl2[0]
    comp = compose(first.projection, second.projection)
    assert comp.source.n == second.cover.n
    assert comp.target.n == graph.n
    assert is_covering(comp)
    assert second.cover.n == graph.n * (first.p ** first.d) * (second.p ** second.d)
