import numpy as np
import pytest

from eigenposet.cyclo import RootOfUnity, zeta
from eigenposet.exactla import Mat, Subspace
from eigenposet.gposet import (
    AdjoinedBottom,
    EmptyPosetError,
    ExtensionError,
    GPoset,
    bottom_extension,
    drop_minimals,
    drop_top,
    dump_poset,
    eigenspace_poset,
    fixed_subposet,
    is_gposet,
    isomorphic_gposets,
    make_poset,
    open_upset,
    pointed_eigenspace_poset,
    poset_length,
    poset_product,
    proper_part,
    subposet,
    suspension,
    wedge_collapse_map,
    wedge_of_suspensions,
    wedge_over_minimals,
    with_bottom,
)
from eigenposet.homology import homology, order_complex
from eigenposet.refl import ReflCoset, build_from_generators, build_gmpn, symmetric_group


@pytest.fixture(scope="module")
def a2_tower():
    sym3 = symmetric_group(3)
    S = eigenspace_poset(ReflCoset(sym3), RootOfUnity(1, 0))
    return S


def test_a2_lattice_against_hand_enumeration(a2_tower):
    S = a2_tower
    # brute force over the six elements: fixed lines of the transpositions
    # in the basis v1 = e1-e2, v2 = e2-e3 are (1,2), (2,1), (1,-1)
    expected = {
        Subspace.full(2),
        Subspace.zero(2),
        Subspace(2, [[1, 2]]),
        Subspace(2, [[2, 1]]),
        Subspace(2, [[1, -1]]),
    }
    assert set(S.payloads) == expected
    assert S.n == 5
    assert is_gposet(S)


def test_trivial_group_single_point():
    triv = build_from_generators(1, [Mat.identity(1)])
    S = eigenspace_poset(ReflCoset(triv), RootOfUnity(3, 1))
    assert S.n == 1
    assert S.payloads[0] == Subspace.zero(1)


def test_unique_maximal_element(a2_tower):
    g212 = build_gmpn(2, 1, 2)
    S = eigenspace_poset(ReflCoset(g212), RootOfUnity(4, 1))
    assert S.unique_maximal_index() is not None
    assert a2_tower.unique_maximal_index() is not None


def test_trimmed_variants(a2_tower):
    S = a2_tower
    St = proper_part(S)
    Sp = drop_top(S)
    Tp = drop_minimals(Sp)
    assert St.n == 3 and poset_length(St) == 0   # antichain of lines
    assert Sp.n == 4
    assert Tp.n == 3
    assert set(Tp.payloads) == set(St.payloads)


def test_single_element_degenerate():
    triv = build_from_generators(1, [Mat.identity(1)])
    S = eigenspace_poset(ReflCoset(triv), RootOfUnity(5, 1))
    with pytest.raises(EmptyPosetError):
        drop_top(S)
    with pytest.raises(EmptyPosetError):
        proper_part(S)


def test_no_unique_minimal_makes_proper_equal_topless():
    # scalar i is NOT in G(4,4,2), so its zeta_4 poset has two minimal lines
    g442 = build_gmpn(4, 4, 2)
    S = eigenspace_poset(ReflCoset(g442), RootOfUnity(4, 1))
    assert S.unique_minimal_index() is None
    assert proper_part(S).payloads == drop_top(S).payloads
    # whereas scalar i IS in G(4,2,2), which therefore has a unique minimal
    g422 = build_gmpn(4, 2, 2)
    S2 = eigenspace_poset(ReflCoset(g422), RootOfUnity(4, 1))
    assert S2.unique_minimal_index() is not None
    assert S2.payloads[S2.unique_minimal_index()] == Subspace.full(2)


def test_pointed_poset_matches_extension(a2_tower):
    Sp = drop_top(a2_tower)
    mins = set(Sp.minimal_indices())
    ideal = [i for i in range(Sp.n) if i not in mins]
    U = pointed_eigenspace_poset(Sp)
    U2 = bottom_extension(Sp, ideal)
    assert U.payloads == U2.payloads
    assert (U.leq == U2.leq).all()
    assert U.perms == U2.perms


def test_pointed_poset_with_empty_ideal():
    # Sym(3), zeta = -1: the truncated poset is an antichain of lines, so
    # the new point is isolated
    sym3 = symmetric_group(3)
    S = eigenspace_poset(ReflCoset(sym3), RootOfUnity(2, 1))
    Sp = drop_top(S)
    assert not [i for i in range(Sp.n) if i not in set(Sp.minimal_indices())]
    U = pointed_eigenspace_poset(Sp)
    assert U.n == Sp.n + 1
    assert poset_length(U) == 0


def test_extension_preconditions():
    p = make_poset([0, 1, 2], [(0, 2), (1, 2)])
    with pytest.raises(ExtensionError):
        bottom_extension(p, [0])        # not upward closed
    q = make_poset([0, 1, 2], [(0, 1)])
    with pytest.raises(ExtensionError):
        bottom_extension(q, [1])        # element 2 has nothing above in ideal
    full = bottom_extension(p, [0, 1, 2])
    assert full.n == 4
    wb = with_bottom(p)
    assert wb.payloads == full.payloads and (wb.leq == full.leq).all()


def test_suspension_shapes():
    empty = GPoset([], [], tag="empty")
    s0 = suspension(empty)
    assert s0.n == 2 and poset_length(s0) == 0
    one = make_poset(["x"], [])
    v = suspension(one)
    h = homology(order_complex(v))
    assert all(b == 0 for b in h.betti.values())  # two edges sharing a vertex
    circle = suspension(make_poset([0, 1], []))
    assert homology(order_complex(circle)).rank(1) == 1


def test_double_suspension_payloads_distinct():
    one = make_poset(["x"], [])
    ss = suspension(suspension(one))
    assert len(set(ss.payloads)) == ss.n


def test_wedge_single_part_is_suspension():
    r = make_poset([0, 1], [(0, 1)])
    w = wedge_of_suspensions([r])
    s = suspension(r)
    assert isomorphic_gposets(w, s)


def test_wedge_of_two_empty_parts():
    empty = GPoset([], [], tag="empty")
    w = wedge_of_suspensions([empty, empty])
    # two markers and the apex, mutually incomparable
    assert w.n == 3
    h = homology(order_complex(w))
    assert h.rank(0) == 2  # one reduced class per suspended empty part


def test_wedge_over_minimals_matches_collapse(a2_tower):
    Sp = drop_top(a2_tower)
    mins = set(Sp.minimal_indices())
    ideal = [i for i in range(Sp.n) if i not in mins]
    U = pointed_eigenspace_poset(Sp)
    W, minimals = wedge_over_minimals(Sp, ideal)
    assert minimals == sorted(mins)
    image = wedge_collapse_map(W, U)   # raises unless order-preserving + equivariant
    assert len(image) == W.n
    assert isomorphic_gposets(W, U)


def test_identity_suspension_instance(a2_tower):
    Sp = drop_top(a2_tower)
    U = pointed_eigenspace_poset(Sp)
    Sig = suspension(proper_part(a2_tower))
    assert isomorphic_gposets(U, Sig)


def test_isomorphism_negative_case():
    p = make_poset([0, 1, 2], [(0, 1), (0, 2)])
    q = make_poset([0, 1, 2], [(0, 1), (1, 2)])
    assert not isomorphic_gposets(p, q)


def test_isomorphism_respects_actions():
    # equal as posets, but the actions are incompatible
    p = make_poset([0, 1], [])
    with_swap = GPoset(p.payloads, p.leq, perms=[(0, 1), (1, 0)])
    with_trivial = GPoset(p.payloads, p.leq, perms=[(0, 1), (0, 1)])
    assert isomorphic_gposets(with_swap, with_swap)
    assert not isomorphic_gposets(with_swap, with_trivial)


def test_isomorphism_budget_reports_indeterminate():
    from eigenposet.gposet import IsomorphismBudgetError

    a = make_poset(list(range(9)), [])
    b = make_poset(list("abcdefghi"), [])
    with pytest.raises(IsomorphismBudgetError):
        isomorphic_gposets(a, b, budget=5)


def test_generic_operations():
    chain = make_poset(list("abcd"), [(0, 1), (1, 2), (2, 3)])
    assert poset_length(chain) == 3
    assert open_upset(chain, 3).n == 0
    assert open_upset(chain, 0).n == 3
    with pytest.raises(Exception):
        open_upset(chain, 9)
    pr = poset_product(chain, make_poset([0, 1], [(0, 1)]))
    assert pr.n == 8 and poset_length(pr) == 4


def test_fixed_subposet_identity(a2_tower):
    assert fixed_subposet(a2_tower, a2_tower.group.identity_index).n == a2_tower.n
    # a transposition fixes V, 0, and its own line
    sizes = sorted(fixed_subposet(a2_tower, k).n for k in range(6))
    assert sizes == [2, 2, 3, 3, 3, 5]


def test_action_is_order_automorphism(a2_tower):
    for perm in a2_tower.perms:
        idx = np.array(perm)
        assert (a2_tower.leq[np.ix_(idx, idx)] == a2_tower.leq).all()


def test_action_perms_match_direct_computation():
    # the Cayley-propagated action must equal acting with every element
    for group in (symmetric_group(3), build_gmpn(3, 1, 2)):
        for m, k in ((1, 0), (2, 1), (3, 1)):
            S = eigenspace_poset(ReflCoset(group), RootOfUnity(m, k))
            direct = [tuple(S.index_of(s.apply(g)) for s in S.payloads)
                      for g in group.elements]
            assert list(S.perms) == direct


def test_coset_poset_matches_fixed_space_lattice():
    # gamma = i * identity on G(2,1,2) with zeta = i: eigenspaces of
    # gamma*g at i are exactly the fixed spaces of g
    g212 = build_gmpn(2, 1, 2)
    gamma = Mat.scalar(2, zeta(4))
    coset = ReflCoset(g212, gamma)
    S_coset = eigenspace_poset(coset, RootOfUnity(4, 1))
    S_fixed = eigenspace_poset(ReflCoset(g212), RootOfUnity(1, 0))
    assert S_coset.payloads == S_fixed.payloads
    assert (S_coset.leq == S_fixed.leq).all()
    assert S_coset.perms == S_fixed.perms


def test_dump_golden(a2_tower):
    St = proper_part(a2_tower)
    text = dump_poset(St)
    expected = (
        "gposet tag=proper n=3\n"
        "elem 0: subspace 2 1: cyc(1; 1); cyc(1; -1)\n"
        "elem 1: subspace 2 1: cyc(1; 1); cyc(1; 1/2)\n"
        "elem 2: subspace 2 1: cyc(1; 1); cyc(1; 2)\n"
        "covers: \n"
        "action 0: 0 1 2\n"
        "action 1: 2 1 0\n"
        "action 2: 1 0 2\n"
        "action 3: 2 0 1\n"
        "action 4: 1 2 0\n"
        "action 5: 0 2 1\n"
    )
    assert text == expected


def test_subposet_requires_stable_indices(a2_tower):
    St = proper_part(a2_tower)
    with pytest.raises(Exception):
        subposet(St, [0])  # a single line is not stable under Sym(3)


def test_bottom_marker_payload():
    p = make_poset([0, 1], [(0, 1)])
    e = with_bottom(p)
    assert isinstance(e.payloads[-1], AdjoinedBottom)
    # a second extension picks a fresh marker
    e2 = with_bottom(e)
    assert len(set(e2.payloads)) == e2.n
