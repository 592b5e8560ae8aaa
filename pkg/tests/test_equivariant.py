from fractions import Fraction

import pytest

from eigenposet.cyclo import CycNum, RootOfUnity, zeta
from eigenposet.exactla import Mat, Subspace
from eigenposet.equivariant import (
    NotConcentratedError,
    build_posets,
    homology_trace,
    induced_character,
    lefschetz_character,
    lefschetz_via_homology,
    maximal_eigenspace_orbits,
    restrict_to_subspace,
    restricted_group,
    top_homology_character,
    verify_decomposition,
    verify_identity_suspension,
    verify_sphere_count,
)
from eigenposet.gposet import GPoset, make_poset, suspension
from eigenposet.homology import QHomology, chain_euler, order_complex
from eigenposet.refl import (
    ReflCoset,
    build_from_generators,
    build_gmpn,
    symmetric_group,
)


@pytest.fixture(scope="module")
def sym3():
    return symmetric_group(3)


@pytest.fixture(scope="module")
def sym3_tower(sym3):
    return build_posets(ReflCoset(sym3), RootOfUnity(1, 0))


def trivial_group_poset(payloads, less):
    group = build_from_generators(1, [Mat.identity(1)])
    p = make_poset(payloads, less)
    return GPoset(p.payloads, p.leq, group=group,
                  perms=[tuple(range(p.n))], tag=p.tag)


def test_orbit_stabilizer(sym3_tower):
    data = maximal_eigenspace_orbits(sym3_tower.truncated)
    assert data.single_orbit
    counts = data.counts()
    assert counts["n_maximal"] * counts["normalizer_order"] == counts["group_order"]
    # zeta = 1: the only maximal eigenspace is the full space, its
    # normalizer is everything and its centralizer is trivial
    assert counts["n_maximal"] == 1
    assert counts["normalizer_order"] == 6
    assert counts["centralizer_order"] == 1


def test_orbit_data_zeta3(sym3):
    tower = build_posets(ReflCoset(sym3), RootOfUnity(3, 1))
    data = maximal_eigenspace_orbits(tower.truncated)
    assert data.single_orbit
    counts = data.counts()
    assert counts["n_maximal"] * counts["normalizer_order"] == 6
    assert data.eigenspace.dim == 1


def test_eigenspace_dimension_matches_divisible_degrees(sym3):
    # dim E = number of degrees divisible by m, instance by instance
    from eigenposet.refl import degree_data

    dd = degree_data(sym3)
    for m in (1, 2, 3):
        tower = build_posets(ReflCoset(sym3), RootOfUnity(m, 1))
        data = maximal_eigenspace_orbits(tower.truncated)
        assert data.eigenspace.dim == sum(1 for d in dd.degrees if d % m == 0)


def test_lefschetz_identity_value(sym3_tower):
    chi = lefschetz_character(sym3_tower.pointed)
    assert chi.value_at_index(chi.group.identity_index) == \
        CycNum.from_rational(chain_euler(sym3_tower.pointed))


def test_lefschetz_contractible_trivial_action():
    p = trivial_group_poset(["a", "b"], [(0, 1)])
    chi = lefschetz_character(p)
    assert all(v.is_zero() for v in chi.values)


def test_top_character_of_pointed_a2(sym3_tower):
    chi = top_homology_character(sym3_tower.pointed)
    assert chi.dimension() == CycNum.from_rational(2)
    assert sorted(str(v) for v in chi.values) == \
        ["cyc(1; -1)", "cyc(1; 0)", "cyc(1; 2)"]


def test_top_character_contractible_is_zero():
    p = trivial_group_poset(["x"], [])
    chi = top_homology_character(p)
    assert all(v.is_zero() for v in chi.values)


def test_top_character_rejects_spread_homology():
    # two points plus a circle: homology in degrees 0 and 1
    circle = suspension(make_poset([0, 1], []))
    payloads = list(circle.payloads) + ["p", "q"]
    leq = [[False] * (circle.n + 2) for _ in range(circle.n + 2)]
    for i in range(circle.n):
        for j in range(circle.n):
            leq[i][j] = bool(circle.leq[i, j])
    for k in range(circle.n, circle.n + 2):
        leq[k][k] = True
    group = build_from_generators(1, [Mat.identity(1)])
    p = GPoset(payloads, leq, group=group, perms=[tuple(range(len(payloads)))])
    with pytest.raises(NotConcentratedError):
        top_homology_character(p)


def test_lefschetz_fast_path_equals_matrix_path(sym3_tower):
    cx = order_complex(sym3_tower.pointed)
    qh = QHomology(cx)
    for k in range(sym3_tower.pointed.group.order):
        fast = chain_euler(sym3_tower.pointed, k)
        slow = lefschetz_via_homology(sym3_tower.pointed, cx, qh,
                                      sym3_tower.pointed.perms[k])
        assert Fraction(fast) == slow


def test_induced_trivial_character_dimension(sym3):
    # Ind of the trivial character of a 2-element subgroup has dim [G : H]
    refl = next(i for i in range(6)
                if sym3.element_order(i) == 2)
    sub = [sym3.identity_index, refl]
    one = CycNum.from_rational(1)
    chi = induced_character(sub, {i: one for i in sub}, sym3)
    assert chi.dimension() == CycNum.from_rational(3)


def test_induced_from_whole_group_is_identity(sym3_tower, sym3):
    chi = top_homology_character(sym3_tower.pointed)
    values = {i: chi.value_at_index(i) for i in range(sym3.order)}
    again = induced_character(list(range(sym3.order)), values, sym3)
    assert again == chi


def test_restrict_to_subspace():
    g = Mat([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    e = Subspace(3, [[1, 1, 0], [0, 0, 1]])
    r = restrict_to_subspace(g, e)
    assert r.is_identity() or r == Mat.identity(2)
    line = Subspace(3, [[1, -1, 0]])
    r2 = restrict_to_subspace(g, line)
    assert r2 == Mat([[-1]])


def test_centralizer_is_normal_in_normalizer(sym3):
    for m in (1, 2, 3):
        tower = build_posets(ReflCoset(sym3), RootOfUnity(m, 1))
        data = maximal_eigenspace_orbits(tower.truncated)
        cent = set(data.centralizer)
        for ni in data.normalizer:
            n = sym3.elements[ni]
            for ci in data.centralizer:
                conj = n * sym3.elements[ci] * n.inverse()
                assert sym3.index(conj) in cent


def test_restricted_group_is_quotient_by_centralizer(sym3):
    tower = build_posets(ReflCoset(sym3), RootOfUnity(3, 1))
    data = maximal_eigenspace_orbits(tower.truncated)
    image, index_map = restricted_group(sym3, data.normalizer, data.eigenspace)
    assert image.order * len(data.centralizer) == len(data.normalizer)
    assert set(index_map) == set(data.normalizer)


def test_verify_identity_suspension_instances():
    for spec_group in [symmetric_group(3), build_gmpn(2, 1, 2)]:
        rep = verify_identity_suspension(spec_group)
        assert rep["verdict"] == "PASS"
        assert rep["isomorphic"] and rep["homology_shift"]


def test_verify_identity_suspension_degenerate():
    triv = build_from_generators(1, [Mat.identity(1)])
    rep = verify_identity_suspension(triv)
    assert rep["verdict"] == "SKIPPED"
    assert "degenerate" in rep["reason"]


def test_verify_decomposition_instances(sym3):
    rep = verify_decomposition(ReflCoset(sym3), RootOfUnity(1, 0))
    assert rep["verdict"] == "PASS"
    assert all(rep["checks"].values())
    rep2 = verify_decomposition(ReflCoset(build_gmpn(2, 1, 2)), RootOfUnity(4, 1))
    assert rep2["verdict"] == "PASS"


def test_verify_decomposition_empty_ideal_branch(sym3):
    rep = verify_decomposition(ReflCoset(sym3), RootOfUnity(2, 1))
    assert rep["verdict"] == "PASS"
    assert any("empty" in note for note in rep.get("notes", []))


def test_verify_sphere_count_examples(sym3):
    rep = verify_sphere_count(ReflCoset(sym3), RootOfUnity(3, 1))
    assert rep["verdict"] == "PASS"
    # formula over degrees (2,3), codegrees (0,1): product of degrees not
    # divisible by 3 times shifted codegrees divisible by 3 = 2 * 1
    assert rep["counts"]["formula"] == 2
    assert rep["counts"]["homology"] == 2
    assert rep["counts"]["fiber"] == 2
    assert rep["regular"] is True


def test_verify_sphere_count_on_nontrivial_coset():
    g212 = build_gmpn(2, 1, 2)
    coset = ReflCoset(g212, Mat.scalar(2, zeta(4)))
    rep = verify_sphere_count(coset, RootOfUnity(4, 1))
    # formula comparisons are skipped off the identity coset, but the
    # homology/fiber agreement and character identity still hold
    assert rep["verdict"] == "PASS"
    assert "formula" not in rep["counts"]
    assert rep["counts"]["homology"] == rep["counts"]["fiber"] == 3


def test_verify_decomposition_on_nontrivial_coset():
    g212 = build_gmpn(2, 1, 2)
    coset = ReflCoset(g212, Mat.scalar(2, zeta(4)))
    rep = verify_decomposition(coset, RootOfUnity(4, 1))
    assert rep["verdict"] == "PASS"


def test_homology_trace_identity_is_rank(sym3_tower):
    cx = order_complex(sym3_tower.pointed)
    qh = QHomology(cx)
    ident = tuple(range(sym3_tower.pointed.n))
    assert homology_trace(sym3_tower.pointed, cx, qh, ident, 1) == 2


def test_nonregular_instance_with_nontrivial_centralizer():
    # no battery instance has a nontrivial centralizer; Sym(6) at a fourth
    # root is the smallest symmetric example (the two letters missed by a
    # 4-cycle can be swapped without moving its eigenline).  This exercises
    # the centralizer division in the count formula and both directions of
    # the regularity criterion.  Takes ~30 s.
    sym6 = symmetric_group(6)
    rep = verify_sphere_count(ReflCoset(sym6), RootOfUnity(4, 1))
    assert rep["verdict"] == "PASS"
    assert rep["regular"] is False
    assert rep["orbit"]["centralizer_order"] == 2
    assert rep["orbit"]["normalizer_order"] == 8
    assert rep["counts"] == {"homology": 90, "fiber": 90, "formula": 90}
    assert rep["checks"]["degree_codegree_balance"] is True
    assert "regular_formula" not in rep["counts"]


def test_multi_orbit_induced_decomposition():
    # Three minimal elements, each under its own two-point antichain; the
    # order-2 group swaps the first two blocks and fixes the third.  The
    # extension has rank-3 first homology whose character must be the sum
    # of the characters induced from the block stabilizers.
    from eigenposet.gposet import GPoset, bottom_extension, make_poset
    from eigenposet.homology import homology, order_complex
    from eigenposet.equivariant import homology_character

    group = build_gmpn(1, 1, 2)  # order 2
    swap_idx = next(i for i in range(2) if i != group.identity_index)
    payloads = ["m1", "m2", "m3", "a1", "b1", "a2", "b2", "a3", "b3"]
    less = [(0, 3), (0, 4), (1, 5), (1, 6), (2, 7), (2, 8)]
    base = make_poset(payloads, less)
    ident = tuple(range(9))
    swap = (1, 0, 2, 5, 6, 3, 4, 7, 8)
    perms = [None, None]
    perms[group.identity_index] = ident
    perms[swap_idx] = swap
    p = GPoset(payloads, base.leq, group=group, perms=perms, tag="poset")
    ideal = [3, 4, 5, 6, 7, 8]
    pq = bottom_extension(p, ideal)
    h = homology(order_complex(pq))
    assert h.rank(1) == 3 and h.rank(0) == 0

    chi = homology_character(pq, 1)
    # orbit {m1, m2}: trivial stabilizer; fiber H~0 has rank 1
    one = CycNum.from_rational(1)
    ind_a = induced_character([group.identity_index], {group.identity_index: one},
                              group)
    # orbit {m3}: full stabilizer acting trivially on the fiber
    ind_b = induced_character([0, 1], {0: one, 1: one}, group)
    expected_at_identity = ind_a.value_at_index(group.identity_index) + \
        ind_b.value_at_index(group.identity_index)
    expected_at_swap = ind_a.value_at_index(swap_idx) + \
        ind_b.value_at_index(swap_idx)
    assert chi.value_at_index(group.identity_index) == expected_at_identity
    assert chi.value_at_index(swap_idx) == expected_at_swap
    assert expected_at_identity == CycNum.from_rational(3)
    assert expected_at_swap == CycNum.from_rational(1)
