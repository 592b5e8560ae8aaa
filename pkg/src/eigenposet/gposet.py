"""Finite posets with a recorded group action, and the constructions on them.

A GPoset stores payloads, the full order relation as a boolean matrix,
and one permutation of the element indices per group element.  All the
eigenspace-poset variants, bottom extensions, suspensions, wedges of
suspensions, products and induced subposets live here.

Synthetic elements (adjoined bottoms, suspension points, wedge markers)
carry distinct payload values so that poset equality is structural: the
bottom extension of the once-truncated eigenspace poset over its
non-minimal part is *identical* to the directly built pointed poset,
not merely isomorphic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclo import RootOfUnity
from .exactla import Subspace
from .refl import ReflCoset

__all__ = [
    "GPoset",
    "PosetError",
    "EmptyPosetError",
    "ExtensionError",
    "IsomorphismBudgetError",
    "AdjoinedBottom",
    "SuspensionPoint",
    "WedgeApex",
    "WedgeMarker",
    "WedgePoint",
    "make_poset",
    "eigenspace_poset",
    "proper_part",
    "drop_top",
    "drop_minimals",
    "pointed_eigenspace_poset",
    "bottom_extension",
    "with_bottom",
    "suspension",
    "wedge_of_suspensions",
    "wedge_over_minimals",
    "wedge_collapse_map",
    "open_upset",
    "poset_length",
    "poset_product",
    "fixed_subposet",
    "subposet",
    "is_gposet",
    "isomorphic_gposets",
    "dump_poset",
]


class PosetError(ValueError):
    pass


class EmptyPosetError(PosetError):
    pass


class ExtensionError(PosetError):
    pass


class IsomorphismBudgetError(PosetError):
    pass


@dataclass(frozen=True)
class AdjoinedBottom:
    salt: int = 0

    def __str__(self):
        return "0^" if self.salt == 0 else f"0^#{self.salt}"


@dataclass(frozen=True)
class SuspensionPoint:
    side: int
    salt: int = 0

    def __str__(self):
        tag = f"susp{self.side}"
        return tag if self.salt == 0 else f"{tag}#{self.salt}"


@dataclass(frozen=True)
class WedgeApex:
    salt: int = 0

    def __str__(self):
        return "apex" if self.salt == 0 else f"apex#{self.salt}"


@dataclass(frozen=True)
class WedgeMarker:
    label: object

    def __str__(self):
        return f"marker[{_payload_str(self.label)}]"


@dataclass(frozen=True)
class WedgePoint:
    point: object
    label: object

    def __str__(self):
        return f"({_payload_str(self.point)} @ {_payload_str(self.label)})"


def _payload_str(p) -> str:
    if isinstance(p, Subspace):
        return p.text()
    return str(p)


class GPoset:
    """A finite poset with payloads and a permutation action."""

    def __init__(self, payloads, leq, group=None, perms=(), tag="poset",
                 validate=True):
        self.payloads = tuple(payloads)
        self.leq = np.array(leq, dtype=bool)
        if not self.payloads:
            self.leq = self.leq.reshape((0, 0))
        self.leq.setflags(write=False)
        self.group = group
        self.perms = tuple(tuple(p) for p in perms)
        self.tag = tag
        n = len(self.payloads)
        if self.leq.shape != (n, n):
            raise PosetError("relation matrix shape mismatch")
        self.index = {p: i for i, p in enumerate(self.payloads)}
        if len(self.index) != n:
            raise PosetError("payloads must be distinct")
        if group is not None and len(self.perms) != group.order:
            raise PosetError("need one permutation per group element")
        if validate:
            self._check_partial_order()

    # -- basic structure ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.payloads)

    def __len__(self):
        return len(self.payloads)

    def _check_partial_order(self):
        leq = self.leq
        n = self.n
        if n == 0:
            return
        if not leq.diagonal().all():
            raise PosetError("relation is not reflexive")
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            raise PosetError("relation is not antisymmetric")
        closure = (leq.astype(np.uint8) @ leq.astype(np.uint8)) > 0
        if (closure & ~leq).any():
            raise PosetError("relation is not transitive")
        for perm in self.perms:
            if sorted(perm) != list(range(n)):
                raise PosetError("action entry is not a permutation")
            idx = np.array(perm)
            if not (leq[np.ix_(idx, idx)] == leq).all():
                raise PosetError("action entry is not an order automorphism")

    def less(self, i: int, j: int) -> bool:
        return bool(self.leq[i, j]) and i != j

    def index_of(self, payload) -> int:
        try:
            return self.index[payload]
        except KeyError:
            raise PosetError(f"element not found: {payload!r}") from None

    def minimal_indices(self):
        below = self.leq.sum(axis=0)  # includes self
        return [i for i in range(self.n) if below[i] == 1]

    def maximal_indices(self):
        above = self.leq.sum(axis=1)
        return [i for i in range(self.n) if above[i] == 1]

    def unique_maximal_index(self):
        tops = self.maximal_indices()
        return tops[0] if len(tops) == 1 else None

    def unique_minimal_index(self):
        bots = self.minimal_indices()
        return bots[0] if len(bots) == 1 else None

    def covers(self):
        """Covering pairs (i, j) with i < j and nothing in between."""
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        strict2 = (lt.astype(np.uint8) @ lt.astype(np.uint8)) > 0
        cov = lt & ~strict2
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(cov))]

    def orbits(self):
        """Orbits of the recorded action, as sorted index lists."""
        n = self.n
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for perm in self.perms:
            for i, j in enumerate(perm):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
        groups = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def stabilizer_perm_indices(self, i: int):
        return frozenset(k for k, perm in enumerate(self.perms) if perm[i] == i)

    def __repr__(self):
        return f"GPoset({self.tag}, n={self.n})"


def make_poset(payloads, less_pairs, group=None, perms=(), tag="poset") -> GPoset:
    """Build a poset from strict relations; takes the reflexive-transitive
    closure, so only generators of the order need to be given."""
    n = len(payloads)
    leq = np.eye(n, dtype=bool)
    for a, b in less_pairs:
        leq[a, b] = True
    changed = True
    while changed:
        closure = ((leq.astype(np.uint8) @ leq.astype(np.uint8)) > 0) | leq
        changed = (closure != leq).any()
        leq = closure
    return GPoset(payloads, leq, group=group, perms=perms, tag=tag)


# -- eigenspace posets -------------------------------------------------------

def eigenspace_poset(coset: ReflCoset, root: RootOfUnity,
                     tag="eigenspaces") -> GPoset:
    """All eigenspaces of coset elements for the given eigenvalue, under
    reverse inclusion, with the conjugation action of the group."""
    from .exactla import eigenspace as _eig

    group = coset.group
    ev = root.embed() if isinstance(root, RootOfUnity) else root
    spaces = []
    seen = {}
    for x in coset.elements():
        s = _eig(x, ev)
        if s not in seen:
            seen[s] = len(spaces)
            spaces.append(s)
    order = sorted(range(len(spaces)), key=lambda i: (-spaces[i].dim, spaces[i].text()))
    spaces = [spaces[i] for i in order]
    seen = {s: i for i, s in enumerate(spaces)}
    n = len(spaces)
    leq = np.eye(n, dtype=bool)
    for i in range(n):
        for j in range(n):
            if i != j and spaces[i].contains(spaces[j]):
                leq[i, j] = True  # reverse inclusion: bigger space is lower
    perms = _action_perms(group, spaces, seen)
    return GPoset(spaces, leq, group=group, perms=perms, tag=tag)


def _action_perms(group, spaces, seen):
    """One permutation of the subspaces per group element.

    When a proper generating set is recorded, only the generators act on
    subspaces directly; everything else is composed along a Cayley-graph
    breadth-first search, since x*g moves a space by g first, then x.
    """
    n = len(spaces)
    if len(group.generators) >= group.order:
        return [tuple(seen[s.apply(g)] for s in spaces) for g in group.elements]
    gen_indices = []
    gen_perm = {}
    for g in group.generators:
        gi = group.index(g)
        if gi not in gen_perm:
            gen_indices.append(gi)
            gen_perm[gi] = tuple(seen[s.apply(g)] for s in spaces)
    perm_of = {group.identity_index: tuple(range(n))}
    frontier = [group.identity_index]
    while frontier:
        nxt = []
        for i in frontier:
            base = perm_of[i]
            for gi in gen_indices:
                j = group.mult(i, gi)
                if j not in perm_of:
                    gp = gen_perm[gi]
                    perm_of[j] = tuple(base[gp[k]] for k in range(n))
                    nxt.append(j)
        frontier = nxt
    assert len(perm_of) == group.order
    return [perm_of[i] for i in range(group.order)]


def subposet(p: GPoset, keep, tag=None) -> GPoset:
    """Induced subposet on the given indices; the index set must be stable
    under the recorded action."""
    keep = sorted(set(keep))
    pos = {old: new for new, old in enumerate(keep)}
    idx = np.array(keep, dtype=int)
    if len(keep):
        leq = p.leq[np.ix_(idx, idx)]
    else:
        leq = np.zeros((0, 0), dtype=bool)
    perms = []
    for perm in p.perms:
        if any(perm[i] not in pos for i in keep):
            raise PosetError("subposet indices are not action-stable")
        perms.append(tuple(pos[perm[i]] for i in keep))
    return GPoset([p.payloads[i] for i in keep], leq, group=p.group,
                  perms=perms, tag=tag or "subposet", validate=False)


def proper_part(s: GPoset) -> GPoset:
    """Drop the unique maximal element, and the unique minimal one if any."""
    top = s.unique_maximal_index()
    if top is None:
        raise PosetError("poset has no unique maximal element")
    drop = {top}
    bot = s.unique_minimal_index()
    if bot is not None and bot != top:
        drop.add(bot)
    keep = [i for i in range(s.n) if i not in drop]
    if not keep and s.n <= 1:
        raise EmptyPosetError("removal empties the poset")
    return subposet(s, keep, tag="proper")


def drop_top(s: GPoset) -> GPoset:
    """Drop the unique maximal element only."""
    top = s.unique_maximal_index()
    if top is None:
        raise PosetError("poset has no unique maximal element")
    if s.n == 1:
        raise EmptyPosetError("removal empties the poset")
    return subposet(s, [i for i in range(s.n) if i != top], tag="topless")


def drop_minimals(sp: GPoset) -> GPoset:
    """Drop the minimal elements (the maximal-dimensional eigenspaces when
    applied to a truncated eigenspace poset)."""
    mins = set(sp.minimal_indices())
    return subposet(sp, [i for i in range(sp.n) if i not in mins],
                    tag="nonminimal")


def _fresh_bottom(payloads):
    salt = 0
    while AdjoinedBottom(salt) in payloads:
        salt += 1
    return AdjoinedBottom(salt)


def _adjoin_bottom(p: GPoset, ideal, tag) -> GPoset:
    ideal = sorted(set(ideal))
    marker = _fresh_bottom(set(p.payloads))
    payloads = list(p.payloads) + [marker]
    n = p.n + 1
    leq = np.eye(n, dtype=bool)
    leq[:p.n, :p.n] = p.leq
    for i in ideal:
        leq[n - 1, i] = True
    perms = [tuple(list(perm) + [n - 1]) for perm in p.perms]
    return GPoset(payloads, leq, group=p.group, perms=perms, tag=tag,
                  validate=False)


def _check_upper_ideal(p: GPoset, ideal) -> None:
    ideal = set(ideal)
    for i in ideal:
        for j in range(p.n):
            if p.less(i, j) and j not in ideal:
                raise ExtensionError("index set is not an upper order ideal")
    for perm in p.perms:
        if any(perm[i] not in ideal for i in ideal):
            raise ExtensionError("ideal is not stable under the action")


def bottom_extension(p: GPoset, ideal) -> GPoset:
    """Adjoin a new bottom lying below exactly the given upper order ideal.

    Requires the ideal to meet the up-set of every element, i.e. the poset
    genuinely extends the ideal.
    """
    ideal = set(ideal)
    _check_upper_ideal(p, ideal)
    for i in range(p.n):
        if i not in ideal and not any(p.less(i, j) for j in ideal):
            raise ExtensionError(
                f"element {i} has no ideal element above it")
    return _adjoin_bottom(p, ideal, tag="extension")


def with_bottom(q: GPoset) -> GPoset:
    """The poset with a global bottom adjoined."""
    return _adjoin_bottom(q, range(q.n), tag="extension")


def pointed_eigenspace_poset(sp: GPoset) -> GPoset:
    """Adjoin one new point below every non-minimal element.

    Applied to the once-truncated eigenspace poset this gives the pointed
    variant: the new point sits under everything except the maximal
    eigenspaces.  When there are no non-minimal elements the new point is
    isolated.
    """
    mins = set(sp.minimal_indices())
    ideal = [i for i in range(sp.n) if i not in mins]
    return _adjoin_bottom(sp, ideal, tag="pointed")


# -- suspension and wedges ---------------------------------------------------

def suspension(r: GPoset) -> GPoset:
    """Two new incomparable points below everything."""
    existing = set(r.payloads)
    marks = []
    for side in (0, 1):
        salt = 0
        while SuspensionPoint(side, salt) in existing:
            salt += 1
        marks.append(SuspensionPoint(side, salt))
    payloads = list(marks) + list(r.payloads)
    n = r.n + 2
    leq = np.eye(n, dtype=bool)
    leq[2:, 2:] = r.leq
    leq[0, 2:] = True
    leq[1, 2:] = True
    perms = [tuple([0, 1] + [q + 2 for q in perm]) for perm in r.perms]
    return GPoset(payloads, leq, group=r.group, perms=perms, tag="suspension",
                  validate=False)


def wedge_of_suspensions(parts, labels=None, group=None, label_perms=None,
                         part_perms=None) -> GPoset:
    """The wedge of the suspensions of the given posets.

    Elements are the disjoint copies of the parts, one marker per part,
    and a single apex below all copy points (but below no marker).  When
    an action is supplied, it must permute the parts compatibly:
    label_perms[g] permutes part positions and part_perms[g][t] maps index
    space of part t to index space of part label_perms[g][t].
    """
    k = len(parts)
    if labels is None:
        labels = list(range(k))
    markers = [WedgeMarker(lb) for lb in labels]
    payloads = [WedgeApex()]
    payloads += markers
    offsets = []
    for t, part in enumerate(parts):
        offsets.append(len(payloads))
        payloads += [WedgePoint(pt, labels[t]) for pt in part.payloads]
    n = len(payloads)
    leq = np.eye(n, dtype=bool)
    for t, part in enumerate(parts):
        o = offsets[t]
        leq[o:o + part.n, o:o + part.n] = part.leq
        for i in range(part.n):
            leq[0, o + i] = True          # apex below every copy point
            leq[1 + t, o + i] = True      # marker below its copy
    perms = []
    if group is not None or label_perms is not None:
        assert label_perms is not None and part_perms is not None
        for g, lperm in enumerate(label_perms):
            perm = [0] * n
            perm[0] = 0
            for t in range(k):
                perm[1 + t] = 1 + lperm[t]
                for i in range(parts[t].n):
                    perm[offsets[t] + i] = offsets[lperm[t]] + part_perms[g][t][i]
            perms.append(tuple(perm))
    return GPoset(payloads, leq, group=group, perms=perms, tag="wedge",
                  validate=False)


def wedge_over_minimals(p: GPoset, ideal) -> tuple[GPoset, list]:
    """The wedge of suspensions of the strict up-sets of the elements
    outside the ideal, which must all be minimal.

    Returns (wedge, minimals).  The wedge inherits the action of p.
    """
    ideal = set(ideal)
    _check_upper_ideal(p, ideal)
    minimals = sorted(i for i in range(p.n) if i not in ideal)
    min_set = set(p.minimal_indices())
    for m in minimals:
        if m not in min_set:
            raise ExtensionError(
                "complement of the ideal contains a non-minimal element")
    parts = []
    upsets = []
    for m in minimals:
        up = [j for j in range(p.n) if p.less(m, j)]
        upsets.append(up)
        part_payloads = [p.payloads[j] for j in up]
        part_leq = p.leq[np.ix_(up, up)] if up else np.zeros((0, 0), dtype=bool)
        parts.append(GPoset(part_payloads, part_leq, tag="subposet",
                            validate=False))
    labels = [p.payloads[m] for m in minimals]
    label_perms = []
    part_perms = []
    pos_of_min = {m: t for t, m in enumerate(minimals)}
    pos_in_up = [{j: i for i, j in enumerate(up)} for up in upsets]
    for perm in p.perms:
        lperm = [pos_of_min[perm[m]] for m in minimals]
        pperm = []
        for t, m in enumerate(minimals):
            target = lperm[t]
            pperm.append(tuple(pos_in_up[target][perm[j]] for j in upsets[t]))
        label_perms.append(tuple(lperm))
        part_perms.append(pperm)
    if not p.perms:
        label_perms = None
        part_perms = None
    wedge = wedge_of_suspensions(parts, labels=labels, group=p.group,
                                 label_perms=label_perms, part_perms=part_perms)
    return wedge, minimals


def wedge_collapse_map(wedge: GPoset, extended: GPoset) -> list[int]:
    """The collapse of a wedge of up-set suspensions onto the extension:
    copy points drop their label, markers map to the underlying minimal
    element, and the apex maps to the adjoined bottom.

    Returns the image index for every wedge element; raises if the result
    is not order-preserving or not equivariant.
    """
    bottom = next(i for i, q in enumerate(extended.payloads)
                  if isinstance(q, AdjoinedBottom))
    image = []
    for q in wedge.payloads:
        if isinstance(q, WedgeApex):
            image.append(bottom)
        elif isinstance(q, WedgeMarker):
            image.append(extended.index_of(q.label))
        elif isinstance(q, WedgePoint):
            image.append(extended.index_of(q.point))
        else:
            raise PosetError("not a wedge payload")
    for i in range(wedge.n):
        for j in range(wedge.n):
            if wedge.leq[i, j] and not extended.leq[image[i], image[j]]:
                raise PosetError("collapse map is not order-preserving")
    for pw, pe in zip(wedge.perms, extended.perms):
        for i in range(wedge.n):
            if image[pw[i]] != pe[image[i]]:
                raise PosetError("collapse map is not equivariant")
    return image


# -- generic operations ------------------------------------------------------

def open_upset(p: GPoset, i: int) -> GPoset:
    """The induced subposet of elements strictly above element i."""
    if not 0 <= i < p.n:
        raise PosetError(f"element not found: index {i}")
    up = [j for j in range(p.n) if p.less(i, j)]
    part_leq = p.leq[np.ix_(up, up)] if up else np.zeros((0, 0), dtype=bool)
    return GPoset([p.payloads[j] for j in up], part_leq, tag="subposet",
                  validate=False)


def poset_length(p: GPoset) -> int:
    """Edges in a longest chain: one less than the largest chain size.
    The empty poset has length -1."""
    order = np.argsort(p.leq.sum(axis=0))  # linear extension
    height = {}
    best = -1
    for i in order:
        h = 0
        for j in range(p.n):
            if p.less(j, i):
                h = max(h, height[j] + 1)
        height[int(i)] = h
        best = max(best, h)
    return best if p.n else -1


def poset_product(p: GPoset, q: GPoset) -> GPoset:
    """Componentwise order on pairs, with the product action."""
    payloads = [(a, b) for a in p.payloads for b in q.payloads]
    np_, nq = p.n, q.n
    leq = np.zeros((np_ * nq, np_ * nq), dtype=bool)
    for i in range(np_):
        for j in range(np_):
            if p.leq[i, j]:
                block = q.leq
                leq[i * nq:(i + 1) * nq, j * nq:(j + 1) * nq] = block
    perms = []
    for pp in (p.perms or [tuple(range(np_))]):
        for qq in (q.perms or [tuple(range(nq))]):
            perms.append(tuple(pp[i] * nq + qq[j]
                               for i in range(np_) for j in range(nq)))
    if not p.perms and not q.perms:
        perms = []
    return GPoset(payloads, leq, group=None, perms=perms, tag="product",
                  validate=False)


def fixed_subposet(p: GPoset, perm) -> GPoset:
    """The induced subposet of points fixed by the permutation (given as a
    group element index or an explicit permutation)."""
    if isinstance(perm, int):
        perm = p.perms[perm]
    keep = [i for i in range(p.n) if perm[i] == i]
    part_leq = p.leq[np.ix_(keep, keep)] if keep else np.zeros((0, 0), dtype=bool)
    return GPoset([p.payloads[i] for i in keep], part_leq, tag="subposet",
                  validate=False)


def is_gposet(p: GPoset) -> bool:
    """Order axioms, automorphism property, and (when a group is recorded)
    compatibility of the permutations with multiplication."""
    try:
        p._check_partial_order()
    except PosetError:
        return False
    if p.group is not None:
        g = p.group
        if len(p.perms) != g.order:
            return False
        ident = p.perms[g.identity_index]
        if ident != tuple(range(p.n)):
            return False
        for i in range(g.order):
            for j in range(g.order):
                k = g.mult(i, j)
                pi, pj, pk = p.perms[i], p.perms[j], p.perms[k]
                if any(pi[pj[x]] != pk[x] for x in range(p.n)):
                    return False
    return True


# -- isomorphism --------------------------------------------------------------

def _invariant_vector(p: GPoset):
    down = p.leq.sum(axis=0)
    up = p.leq.sum(axis=1)
    orbit_size = [0] * p.n
    for orb in p.orbits():
        for i in orb:
            orbit_size[i] = len(orb)
    return [
        (int(down[i]), int(up[i]), orbit_size[i],
         len(p.stabilizer_perm_indices(i)) if p.perms else 1)
        for i in range(p.n)
    ]


def isomorphic_gposets(p: GPoset, q: GPoset, budget: int = 200_000):
    """Equivariant poset isomorphism by orbitwise backtracking.

    The action lists must be parallel (same implicit group).  Returns
    True or False; raises IsomorphismBudgetError when the search budget
    is exhausted, so oversized instances stay honest.
    """
    if p.n != q.n or len(p.perms) != len(q.perms):
        return False
    if p.n == 0:
        return True
    inv_p = _invariant_vector(p)
    inv_q = _invariant_vector(q)
    if sorted(inv_p) != sorted(inv_q):
        return False
    orbits_p = p.orbits()
    orbits_p.sort(key=lambda orb: (-len(orb), orb))
    phi = [-1] * p.n
    used = [False] * q.n
    nodes = 0

    def assign_orbit(orbit, rep_image):
        """Propagate phi over an orbit from the representative image;
        returns assigned indices or None on inconsistency."""
        rep = orbit[0]
        new = []
        pending = {rep: rep_image}
        for k, perm in enumerate(p.perms):
            src = perm[rep]
            tgt = q.perms[k][rep_image]
            if src in pending:
                if pending[src] != tgt:
                    return None
            else:
                pending[src] = tgt
        if len(pending) != len(orbit):
            return None
        for a, b in pending.items():
            if used[b] or inv_p[a] != inv_q[b]:
                return None
        for a, b in pending.items():
            phi[a] = b
            used[b] = True
            new.append(a)
        # order consistency against everything assigned so far
        for a in new:
            b = phi[a]
            for c in range(p.n):
                if phi[c] == -1:
                    continue
                if bool(p.leq[a, c]) != bool(q.leq[b, phi[c]]) or \
                   bool(p.leq[c, a]) != bool(q.leq[phi[c], b]):
                    undo(new)
                    return None
        return new

    def undo(new):
        for a in new:
            used[phi[a]] = False
            phi[a] = -1

    def backtrack(t):
        nonlocal nodes
        if t == len(orbits_p):
            return True
        orbit = orbits_p[t]
        rep = orbit[0]
        for cand in range(q.n):
            if used[cand] or inv_q[cand] != inv_p[rep]:
                continue
            nodes += 1
            if nodes > budget:
                raise IsomorphismBudgetError(
                    f"isomorphism search exceeded {budget} nodes")
            new = assign_orbit(orbit, cand)
            if new is None:
                continue
            if backtrack(t + 1):
                return True
            undo(new)
        return False

    return backtrack(0)


def dump_poset(p: GPoset) -> str:
    """Element list, cover relations, and action table as stable text."""
    lines = [f"gposet tag={p.tag} n={p.n}"]
    for i, payload in enumerate(p.payloads):
        lines.append(f"elem {i}: {_payload_str(payload)}")
    cov = " ".join(f"{i}<{j}" for i, j in p.covers())
    lines.append(f"covers: {cov}")
    for k, perm in enumerate(p.perms):
        lines.append(f"action {k}: " + " ".join(str(x) for x in perm))
    return "\n".join(lines) + "\n"
