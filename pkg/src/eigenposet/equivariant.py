"""Group-level verification: orbits, stabilizers, and homology characters.

The Lefschetz character of a poset action is evaluated by counting chains
in fixed subposets (an order automorphism fixing a chain setwise fixes it
pointwise), which is the fast path.  The slow path computes explicit
action matrices on rational homology bases; agreement of the two is one
of the standing self-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclo import CycNum, RootOfUnity
from .exactla import Mat, Subspace
from .gposet import (
    GPoset,
    drop_top,
    eigenspace_poset,
    isomorphic_gposets,
    open_upset,
    pointed_eigenspace_poset,
    poset_length,
    proper_part,
    subposet,
    suspension,
    wedge_over_minimals,
    EmptyPosetError,
    IsomorphismBudgetError,
)
from .homology import (
    QHomology,
    chain_euler,
    homology,
    order_complex,
    verify_mayer_vietoris,
)
from .refl import (
    GroupError,
    ReflCoset,
    ReflGroup,
    degree_data,
    identify_codegrees,
    molien_degrees,
)

__all__ = [
    "ClassFunction",
    "EigenspaceOrbitData",
    "EigenspacePosets",
    "NotConcentratedError",
    "build_posets",
    "homology_trace",
    "lefschetz_via_homology",
    "maximal_eigenspace_orbits",
    "lefschetz_character",
    "top_homology_character",
    "homology_character",
    "induced_character",
    "restrict_to_subspace",
    "restricted_group",
    "verify_identity_suspension",
    "verify_decomposition",
    "verify_sphere_count",
    "sphere_count_formula",
    "regular_sphere_count_formula",
]


class NotConcentratedError(ValueError):
    pass


@dataclass
class ClassFunction:
    """Exact cyclotomic values on the conjugacy classes of a group."""

    group: ReflGroup
    values: tuple[CycNum, ...]

    def __post_init__(self):
        assert len(self.values) == len(self.group.conjugacy_classes())

    def value_at_index(self, i: int) -> CycNum:
        return self.values[self.group.class_of(i)]

    def value_at(self, g: Mat) -> CycNum:
        return self.value_at_index(self.group.index(g))

    def dimension(self) -> CycNum:
        return self.value_at_index(self.group.identity_index)

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.group is other.group and self.values == other.values

    def table(self):
        reps = self.group.class_representatives()
        return {self.group.elements[r].text(): str(v)
                for r, v in zip(reps, self.values)}


@dataclass
class EigenspaceOrbitData:
    """Maximal eigenspaces with their orbit structure and stabilizers."""

    poset: GPoset
    maximal_indices: tuple[int, ...]
    orbits: tuple[tuple[int, ...], ...]
    representative: int                  # poset index of the chosen eigenspace
    normalizer: tuple[int, ...]          # group element indices with gE = E
    centralizer: tuple[int, ...]         # group element indices fixing E pointwise

    @property
    def eigenspace(self) -> Subspace:
        return self.poset.payloads[self.representative]

    @property
    def single_orbit(self) -> bool:
        return len(self.orbits) == 1

    def counts(self):
        g = self.poset.group
        return {
            "n_maximal": len(self.maximal_indices),
            "orbit_sizes": [len(o) for o in self.orbits],
            "normalizer_order": len(self.normalizer),
            "centralizer_order": len(self.centralizer),
            "group_order": g.order,
        }


def maximal_eigenspace_orbits(sp: GPoset) -> EigenspaceOrbitData:
    """Orbit and stabilizer data for the minimal elements of a truncated
    eigenspace poset (the maximal-dimensional eigenspaces)."""
    group = sp.group
    if group is None:
        raise GroupError("poset has no recorded group")
    mins = sp.minimal_indices()
    min_set = set(mins)
    orbits = []
    remaining = set(mins)
    while remaining:
        seed = min(remaining)
        orbit = sorted({perm[seed] for perm in sp.perms})
        assert set(orbit) <= min_set
        orbits.append(tuple(orbit))
        remaining -= set(orbit)
    rep = mins[0]
    e_space = sp.payloads[rep]
    normalizer = tuple(k for k, perm in enumerate(sp.perms) if perm[rep] == rep)
    centralizer = []
    for k in normalizer:
        g = group.elements[k]
        if all(tuple(g.apply_vec(v)) == tuple(v) for v in e_space.basis):
            centralizer.append(k)
    data = EigenspaceOrbitData(sp, tuple(mins), tuple(orbits), rep,
                               normalizer, tuple(centralizer))
    # orbit-stabilizer bookkeeping
    assert len(data.orbits[0]) * len(data.normalizer) == group.order
    return data


# -- characters ---------------------------------------------------------------

def lefschetz_character(p: GPoset) -> ClassFunction:
    """g -> reduced Euler characteristic of the g-fixed subposet."""
    group = p.group
    if group is None:
        raise GroupError("poset has no recorded group")
    values = []
    for rep in group.class_representatives():
        values.append(CycNum.from_rational(chain_euler(p, rep)))
    return ClassFunction(group, tuple(values))


def homology_character(p: GPoset, d: int, cx=None, qh=None) -> ClassFunction:
    """Character of the action on degree-d rational homology, from explicit
    matrices on the canonical homology bases (the slow path)."""
    group = p.group
    if group is None:
        raise GroupError("poset has no recorded group")
    if cx is None:
        cx = order_complex(p)
        qh = QHomology(cx)
    values = []
    for rep in group.class_representatives():
        values.append(CycNum.from_rational(
            homology_trace(p, cx, qh, p.perms[rep], d)))
    return ClassFunction(group, tuple(values))


def homology_trace(p: GPoset, cx, qh: QHomology, perm, d: int) -> Fraction:
    """Trace of the chain map of the permutation on degree-d homology."""
    basis = qh.basis(d)
    if not basis:
        return Fraction(0)
    index = cx.simplex_index[d + 1]
    trace = Fraction(0)
    for j, h in enumerate(basis):
        pushed = [Fraction(0)] * cx.n_chains(d)
        for i, c in enumerate(h):
            if c:
                simplex = cx.chains[d + 1][i]
                image = tuple(perm[x] for x in simplex)
                pushed[index[image]] += c
        trace += qh.express(pushed, d)[j]
    return trace


def lefschetz_via_homology(p: GPoset, cx, qh: QHomology, perm) -> Fraction:
    """Alternating trace over all homology degrees; the slow-path value
    that must agree with chain counting in fixed subposets."""
    total = Fraction(0)
    for d in range(-1, cx.top_dim + 1):
        t = homology_trace(p, cx, qh, perm, d)
        total += t if d % 2 == 0 else -t
    return total


def top_homology_character(p: GPoset) -> ClassFunction:
    """Character on the single homology degree, which must exist.

    Verified against the homology first; a poset with homology in two or
    more degrees is rejected, and a contractible poset gives the zero
    function.
    """
    h = homology(order_complex(p))
    degrees = h.nonzero_degrees()
    if len(degrees) > 1:
        raise NotConcentratedError(
            f"homology lives in degrees {degrees}, not one")
    group = p.group
    if group is None:
        raise GroupError("poset has no recorded group")
    if not degrees:
        zero = CycNum.from_rational(0)
        return ClassFunction(group, tuple(zero for _ in group.conjugacy_classes()))
    d = degrees[0]
    sign = 1 if d % 2 == 0 else -1
    lef = lefschetz_character(p)
    return ClassFunction(group, tuple(v * sign for v in lef.values))


def induced_character(subgroup_indices, values_by_index, group: ReflGroup) -> ClassFunction:
    """Induce a class function from a subgroup, by the standard average:
    Ind(g) = (1/|H|) * sum over x in G with x^-1 g x in H of the value there.

    subgroup_indices: indices into group.elements forming a subgroup H.
    values_by_index: value of the function at each such index.
    """
    sub = set(subgroup_indices)
    # subgroup sanity: closed under product with itself and inverses
    for i in list(sub)[:8]:
        if group.inverse_index(i) not in sub:
            raise GroupError("not a subgroup: missing inverse")
    order_h = len(sub)
    inverses = [group.elements[group.inverse_index(i)]
                for i in range(group.order)]
    values = []
    for rep in group.class_representatives():
        g = group.elements[rep]
        acc = CycNum.from_rational(0)
        for xi in range(group.order):
            t = group.index(inverses[xi] * g * group.elements[xi])
            if t in sub:
                acc = acc + values_by_index[t]
        values.append(acc * Fraction(1, order_h))
    return ClassFunction(group, tuple(values))


# -- restriction to an eigenspace ----------------------------------------------

def restrict_to_subspace(g: Mat, e: Subspace) -> Mat:
    """The matrix of g on the subspace in its echelon-basis coordinates.

    The basis is in reduced row echelon form, so coordinates of a vector
    in the subspace are read off at the pivot columns.
    """
    cols = []
    for v in e.basis:
        w = g.apply_vec(v)
        coords = [w[p] for p in e.pivots]
        resid = list(w)
        for c, b in zip(coords, e.basis):
            resid = [x - c * y for x, y in zip(resid, b)]
        if any(not x.is_zero() for x in resid):
            raise GroupError("matrix does not stabilize the subspace")
        cols.append(coords)
    return Mat([[cols[j][i] for j in range(len(cols))]
                for i in range(e.dim)])


def restricted_group(group: ReflGroup, element_indices, e: Subspace):
    """The faithful image of the given stabilizer elements on the subspace.

    Returns (image_group, index_map) where index_map sends each input
    element index to the index of its restriction in the image group.
    """
    mats = []
    seen = {}
    index_map = {}
    for i in element_indices:
        r = restrict_to_subspace(group.elements[i], e)
        if r not in seen:
            seen[r] = len(mats)
            mats.append(r)
        index_map[i] = seen[r]
    image = ReflGroup(e.dim, mats, name=None)
    return image, index_map


# -- instance pipelines ---------------------------------------------------------

@dataclass
class EigenspacePosets:
    """The full tower of posets for one (coset, eigenvalue) instance."""

    coset: ReflCoset
    root: RootOfUnity
    full: GPoset            # all eigenspaces
    truncated: GPoset       # top removed
    nonminimal: GPoset      # top and maximal eigenspaces removed
    pointed: GPoset         # truncated plus adjoined point
    ideal_indices: tuple[int, ...]

    @property
    def degenerate(self) -> bool:
        return False


def build_posets(coset: ReflCoset, root: RootOfUnity):
    """Build the poset tower; returns None when the truncated poset would
    be empty (the degenerate case callers report as skipped)."""
    full = eigenspace_poset(coset, root)
    if full.unique_maximal_index() is None:
        raise GroupError("eigenspace poset lacks a unique maximal element")
    if full.n == 1:
        return None
    truncated = drop_top(full)
    mins = set(truncated.minimal_indices())
    ideal = tuple(i for i in range(truncated.n) if i not in mins)
    nonminimal = subposet(truncated, ideal, tag="nonminimal")
    pointed = pointed_eigenspace_poset(truncated)
    return EigenspacePosets(coset, root, full, truncated, nonminimal,
                            pointed, ideal)


def verify_identity_suspension(group: ReflGroup) -> dict:
    """For the trivial eigenvalue: the pointed poset is the suspension of
    the proper part, as posets with action, with the homology shift."""
    coset = ReflCoset(group)
    root = RootOfUnity(1, 0)
    tower = build_posets(coset, root)
    if tower is None:
        return {"verdict": "SKIPPED", "reason": "degenerate: single eigenspace"}
    tilde = proper_part(tower.full)
    sus = suspension(tilde)
    try:
        iso = isomorphic_gposets(tower.pointed, sus)
    except IsomorphismBudgetError as exc:
        return {"verdict": "INDETERMINATE", "reason": str(exc)}
    h_pointed = homology(order_complex(tower.pointed))
    h_tilde = homology(order_complex(tilde))
    top = max([d for d, b in h_pointed.betti.items()] + [1])
    shift_ok = all(
        h_pointed.rank(n) == h_tilde.rank(n - 1)
        and h_pointed.elementary_divisors(n) == h_tilde.elementary_divisors(n - 1)
        for n in range(0, top + 1)
    )
    verdict = "PASS" if (iso and shift_ok) else "FAIL"
    return {
        "verdict": verdict,
        "isomorphic": iso,
        "homology_shift": shift_ok,
        "pointed_betti": {str(d): b for d, b in h_pointed.betti.items() if b},
        "proper_betti": {str(d): b for d, b in h_tilde.betti.items() if b},
    }


def _direct_sum_ranks(parts_h, d):
    return sum(h.rank(d) for h in parts_h)


def _direct_sum_divisors(parts_h, d):
    out = []
    for h in parts_h:
        out.extend(h.elementary_divisors(d))
    return sorted(out)


def verify_decomposition(coset: ReflCoset, root: RootOfUnity) -> dict:
    """The extension sequence, the wedge model, and the induced structure.

    (i) exactness of the long sequence for the truncated poset over its
        non-minimal ideal; (ii) the wedge of suspended up-sets has the
        same homology as the pointed poset, degree by degree with torsion,
        with equal Lefschetz values at every group element; (iii) each
        homology character of the pointed poset is induced from the
        stabilizer of one maximal eigenspace.
    """
    group = coset.group
    tower = build_posets(coset, root)
    if tower is None:
        return {"verdict": "SKIPPED", "reason": "degenerate: single eigenspace"}
    report = {"checks": {}}
    notes = []
    if not tower.ideal_indices:
        notes.append("empty non-minimal ideal; wedge parts are all empty")

    mv = verify_mayer_vietoris(tower.truncated, tower.ideal_indices)
    report["checks"]["exact_sequence"] = mv["exact"]
    report["mv_nodes"] = sum(1 for _ in mv["nodes"])

    wedge, minimals = wedge_over_minimals(tower.truncated, tower.ideal_indices)
    h_pointed = homology(order_complex(tower.pointed))
    h_wedge = homology(order_complex(wedge))
    parts_h = []
    for m in minimals:
        up = open_upset(tower.truncated, m)
        parts_h.append(homology(order_complex(up)))
    top = max([poset_length(tower.pointed), poset_length(wedge), 0])
    hom_ok = True
    for n in range(-1, top + 1):
        if h_pointed.rank(n) != h_wedge.rank(n):
            hom_ok = False
        if h_pointed.elementary_divisors(n) != h_wedge.elementary_divisors(n):
            hom_ok = False
        if h_wedge.rank(n) != _direct_sum_ranks(parts_h, n - 1):
            hom_ok = False
        if h_wedge.elementary_divisors(n) != _direct_sum_divisors(parts_h, n - 1):
            hom_ok = False
    report["checks"]["wedge_homology"] = hom_ok

    lef_ok = all(
        chain_euler(tower.pointed, k) == chain_euler(wedge, k)
        for k in range(group.order)
    )
    report["checks"]["wedge_lefschetz"] = lef_ok

    # (iii): induced characters, one orbit of maximal eigenspaces
    data = maximal_eigenspace_orbits(tower.truncated)
    report["checks"]["single_orbit"] = data.single_orbit
    induced_ok = data.single_orbit
    if data.single_orbit:
        m = data.representative
        up_indices = [j for j in range(tower.truncated.n)
                      if tower.truncated.less(m, j)]
        fiber = _stabilizer_poset(tower.truncated, up_indices, data.normalizer)
        fiber_cx = order_complex(fiber)
        fiber_qh = QHomology(fiber_cx)
        pointed_cx = order_complex(tower.pointed)
        pointed_qh = QHomology(pointed_cx)
        for n in range(-1, top + 1):
            chi_u = homology_character(tower.pointed, n, pointed_cx, pointed_qh)
            fiber_vals = {}
            for k in data.normalizer:
                perm = _restricted_perm(tower.truncated, up_indices, k)
                fiber_vals[k] = CycNum.from_rational(
                    homology_trace(fiber, fiber_cx, fiber_qh, perm, n - 1))
            chi_ind = induced_character(data.normalizer, fiber_vals, group)
            if chi_u != chi_ind:
                induced_ok = False
                report["witness"] = {"degree": n}
                break
    report["checks"]["induced_characters"] = induced_ok

    report["verdict"] = "PASS" if all(report["checks"].values()) else "FAIL"
    if notes:
        report["notes"] = notes
    return report


def _restricted_perm(p: GPoset, indices, k):
    pos = {j: i for i, j in enumerate(indices)}
    perm = p.perms[k]
    return tuple(pos[perm[j]] for j in indices)


def _stabilizer_poset(p: GPoset, indices, stabilizer) -> GPoset:
    """Induced subposet carrying only the permutations of the stabilizer
    elements (in their listed order); group is dropped."""
    import numpy as np

    idx = list(indices)
    leq = p.leq[np.ix_(idx, idx)] if idx else np.zeros((0, 0), dtype=bool)
    perms = [tuple(_restricted_perm(p, idx, k)) for k in stabilizer]
    return GPoset([p.payloads[i] for i in idx], leq, group=None, perms=perms,
                  tag="subposet", validate=False)


def sphere_count_formula(g_degrees, g_order, m: int, c_order: int,
                         nc_codegrees) -> int:
    """Number of spheres from the degree data: the count of maximal
    eigenspaces times the product of the coexponents of the stabilizer
    quotient."""
    prod_nodiv = 1
    for d in g_degrees:
        if d % m != 0:
            prod_nodiv *= d
    prod_coexp = 1
    for c in nc_codegrees:
        prod_coexp *= c + 1
    assert prod_nodiv % c_order == 0
    return (prod_nodiv // c_order) * prod_coexp


def regular_sphere_count_formula(g_degrees, g_codegrees, m: int) -> int:
    """The regular-eigenvalue form: degrees away from m times shifted
    codegrees at m."""
    out = 1
    for d in g_degrees:
        if d % m != 0:
            out *= d
    for c in g_codegrees:
        if c % m == 0:
            out *= c + 1
    return out


def verify_sphere_count(coset: ReflCoset, root: RootOfUnity) -> dict:
    """Bouquet data for one instance: homology count, formula count, and
    fiber count must agree; regularity and divisibility cross-checks; the
    top character must be induced from the eigenspace normalizer."""
    group = coset.group
    m = root.effective_order()
    tower = build_posets(coset, root)
    if tower is None:
        return {"verdict": "SKIPPED", "reason": "degenerate: single eigenspace"}
    report = {"m": m, "checks": {}, "counts": {}}

    length = poset_length(tower.pointed)
    h = homology(order_complex(tower.pointed))
    count_snf = h.rank(length)
    report["counts"]["homology"] = count_snf
    report["length"] = length
    concentration = all(
        h.rank(d) == 0 and not h.torsion_at(d)
        for d in range(-1, length)
    ) and not h.torsion_at(length)
    report["checks"]["concentrated_free"] = concentration

    data = maximal_eigenspace_orbits(tower.truncated)
    report["orbit"] = data.counts()
    report["checks"]["single_orbit"] = data.single_orbit
    e_space = data.eigenspace
    c_order = len(data.centralizer)
    n_order = len(data.normalizer)
    n_max = len(data.maximal_indices)
    report["checks"]["orbit_stabilizer"] = (n_max * n_order == group.order)

    image, index_map = restricted_group(group, data.normalizer, e_space)
    assert image.order * c_order == n_order
    fiber_full = eigenspace_poset(ReflCoset(image), RootOfUnity(1, 0))
    try:
        fiber_tilde = proper_part(fiber_full)
    except EmptyPosetError:
        fiber_tilde = None
    if fiber_tilde is None:
        fiber_rank = 1 if fiber_full.n == 1 else 0
        fiber_top = -1
        report["notes"] = ["fiber proper part empty"]
    else:
        fiber_top = poset_length(fiber_tilde)
        fiber_rank = homology(order_complex(fiber_tilde)).rank(fiber_top)
    count_fiber = n_max * fiber_rank
    report["counts"]["fiber"] = count_fiber
    report["checks"]["fiber_matches_homology"] = (count_fiber == count_snf)

    gd = degree_data(group) if coset.is_identity_coset else None
    if gd is None:
        report["notes"] = report.get("notes", []) + [
            "formula comparisons need the identity coset"]
    else:
        image_degrees = molien_degrees(image)
        expected_degrees = tuple(sorted(d for d in gd.degrees if d % m == 0))
        report["checks"]["stabilizer_degrees"] = (image_degrees == expected_degrees)
        report["checks"]["eigenspace_dimension"] = (
            e_space.dim == len(expected_degrees))
        regular = (c_order == 1)
        report["regular"] = regular
        if gd.codegrees is not None:
            a_m = len(expected_degrees)
            b_m = sum(1 for c in gd.codegrees if c % m == 0)
            report["checks"]["degree_codegree_balance"] = ((a_m == b_m) == regular)
        nc_codegrees = identify_codegrees(image.order, image_degrees)
        if nc_codegrees is None:
            report["notes"] = report.get("notes", []) + [
                f"stabilizer quotient of order {image.order} with degrees "
                f"{image_degrees} not in the catalog; formula skipped"]
        else:
            count_formula = sphere_count_formula(
                gd.degrees, group.order, m, c_order, nc_codegrees)
            report["counts"]["formula"] = count_formula
            report["checks"]["formula_matches_homology"] = (
                count_formula == count_snf)
            if regular and gd.codegrees is not None:
                count_reg = regular_sphere_count_formula(gd.degrees, gd.codegrees, m)
                report["counts"]["regular_formula"] = count_reg
                report["checks"]["regular_formula_matches"] = (
                    count_reg == count_snf)

    # induced-character identity on the top degree
    try:
        chi_top = top_homology_character(tower.pointed)
        if fiber_tilde is not None:
            fiber_stab = _fiber_with_stabilizer_action(
                tower, data, image, index_map, fiber_tilde)
            fiber_cx = order_complex(fiber_stab)
            fiber_qh = QHomology(fiber_cx)
            sign = 1 if fiber_top % 2 == 0 else -1
            fiber_vals = {
                k: CycNum.from_rational(
                    sign * chain_euler(fiber_stab, pos))
                for pos, k in enumerate(data.normalizer)
            }
        else:
            # empty fiber: one homology class in degree -1, fixed by all of
            # the normalizer, so the character is trivial
            fiber_vals = {k: CycNum.from_rational(1)
                          for k in data.normalizer}
        chi_ind = induced_character(data.normalizer, fiber_vals, group)
        report["checks"]["induced_top_character"] = (chi_top == chi_ind)
        report["top_character"] = chi_top.table()
    except NotConcentratedError as exc:
        report["checks"]["induced_top_character"] = False
        report["notes"] = report.get("notes", []) + [str(exc)]

    report["verdict"] = "PASS" if all(report["checks"].values()) else "FAIL"
    return report


def _fiber_with_stabilizer_action(tower, data, image, index_map, fiber_tilde):
    """The reduced intersection lattice of the restricted stabilizer image,
    carrying one permutation per normalizer element (through its image)."""
    perms = []
    base = {payload: i for i, payload in enumerate(fiber_tilde.payloads)}
    for k in data.normalizer:
        g_rest = image.elements[index_map[k]]
        perm = tuple(base[payload.apply(g_rest)] for payload in fiber_tilde.payloads)
        perms.append(perm)
    return GPoset(fiber_tilde.payloads, fiber_tilde.leq, group=None,
                  perms=perms, tag=fiber_tilde.tag, validate=False)
