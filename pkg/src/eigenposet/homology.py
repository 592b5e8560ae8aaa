"""Order complexes, integer chain complexes, and Smith-normal-form homology.

Chain groups are reduced (augmented): dimension -1 holds the empty
simplex, so the homology of the empty poset is Z in degree -1 and a
nonempty contractible poset has no homology at all.  Boundary matrices
are exact integers; homology is Betti numbers plus torsion invariant
factors from the Smith normal form.  Maps induced on rational homology
use canonical echelon bases, which is all the exactness audits need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .gposet import GPoset

__all__ = [
    "ChainComplex",
    "HomologyResult",
    "BudgetExceededError",
    "NotSubposetError",
    "order_complex",
    "homology",
    "snf_diagonal",
    "QHomology",
    "induced_map",
    "connecting_map",
    "verify_mayer_vietoris",
    "chain_euler",
    "matrix_rank_q",
    "mv_simplex_decomposition",
]

DEFAULT_SIMPLEX_BUDGET = 10**7


class BudgetExceededError(RuntimeError):
    pass


class NotSubposetError(ValueError):
    pass


class ChainComplex:
    """Reduced simplicial chains of a poset's order complex.

    chains[k] lists the (k)-simplices for k = -1 .. top as increasing
    tuples of poset indices, lexicographically sorted; boundary k is the
    integer matrix from k-chains to (k-1)-chains.
    """

    def __init__(self, chains, boundaries):
        self.chains = chains            # list indexed by dim+1
        self.boundaries = boundaries    # boundaries[d+1]: C_d -> C_(d-1)
        self.simplex_index = [
            {s: i for i, s in enumerate(level)} for level in chains
        ]

    @property
    def top_dim(self) -> int:
        return len(self.chains) - 2

    def n_chains(self, d: int) -> int:
        if d + 1 < 0 or d + 1 >= len(self.chains):
            return 0
        return len(self.chains[d + 1])

    def boundary(self, d: int):
        """Integer matrix of the boundary C_d -> C_(d-1) as row lists."""
        if d + 1 < 1 or d + 1 >= len(self.boundaries):
            return [[0] * self.n_chains(d) for _ in range(self.n_chains(d - 1))]
        return self.boundaries[d + 1]


def order_complex(p: GPoset, budget: int = DEFAULT_SIMPLEX_BUDGET) -> ChainComplex:
    """All chains of the poset, with augmented boundary maps.

    Chains are enumerated by depth-first search along the strict order and
    listed lexicographically by element index, so boundary matrices are
    reproducible.
    """
    n = p.n
    above = [[j for j in range(n) if p.less(i, j)] for i in range(n)]
    by_dim = [[()]]  # dimension -1: the empty simplex
    count = 1
    frontier = [(i,) for i in range(n)]
    while frontier:
        count += len(frontier)
        if count > budget:
            raise BudgetExceededError(
                f"order complex exceeds simplex budget {budget}")
        by_dim.append(sorted(frontier))
        nxt = []
        for chain in frontier:
            last = chain[-1]
            for j in above[last]:
                nxt.append(chain + (j,))
        frontier = nxt
    index = [{s: i for i, s in enumerate(level)} for level in by_dim]
    boundaries = [None]
    for lvl in range(1, len(by_dim)):
        rows = len(by_dim[lvl - 1])
        mat = [[0] * len(by_dim[lvl]) for _ in range(rows)]
        for col, chain in enumerate(by_dim[lvl]):
            sign = 1
            for omit in range(len(chain)):
                face = chain[:omit] + chain[omit + 1:]
                mat[index[lvl - 1][face]][col] += sign
                sign = -sign
        boundaries.append(mat)
    cx = ChainComplex(by_dim, boundaries)
    _check_dd_zero(cx)
    return cx


def _check_dd_zero(cx: ChainComplex):
    for d in range(1, cx.top_dim + 1):
        dd = _int_matmul(cx.boundary(d - 1), cx.boundary(d))
        if any(any(x != 0 for x in row) for row in dd):
            raise AssertionError(f"boundary squared nonzero at dimension {d}")


def _int_matmul(a, b):
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in range(len(a))]
    cols_b = len(b[0])
    out = [[0] * cols_b for _ in range(len(a))]
    for i, arow in enumerate(a):
        orow = out[i]
        for k, av in enumerate(arow):
            if av:
                brow = b[k]
                for j in range(cols_b):
                    if brow[j]:
                        orow[j] += av * brow[j]
    return out


# -- Smith normal form -------------------------------------------------------

def snf_diagonal(matrix) -> list[int]:
    """Nonzero diagonal of the Smith normal form, divisibility-ordered.

    Greedy minimal pivot by (|value|, row, col); arbitrary-precision ints.
    """
    m = [list(row) for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    diag = []
    top = 0
    while True:
        pivot = None
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = m[i][j]
                if v:
                    key = (abs(v), i, j)
                    if best is None or key < best:
                        best = key
                        pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        m[top], m[pi] = m[pi], m[top]
        for row in m:
            row[top], row[pj] = row[pj], row[top]
        while True:
            p = m[top][top]
            dirty = False
            for i in range(top + 1, rows):
                if m[i][top]:
                    q = m[i][top] // p
                    if q:
                        m[i] = [x - q * y for x, y in zip(m[i], m[top])]
                    if m[i][top]:
                        m[top], m[i] = m[i], m[top]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(top + 1, cols):
                if m[top][j]:
                    q = m[top][j] // p
                    if q:
                        for row in m:
                            row[j] -= q * row[top]
                    if m[top][j]:
                        for row in m:
                            row[top], row[j] = row[j], row[top]
                        dirty = True
                        break
            if not dirty:
                break
        diag.append(abs(m[top][top]))
        top += 1
        if top >= rows or top >= cols:
            break
    # enforce divisibility d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a, b = diag[i], diag[i + 1]
            if b % a != 0:
                g = math.gcd(a, b)
                diag[i], diag[i + 1] = g, a * b // g
                changed = True
    return diag


@dataclass
class HomologyResult:
    """Reduced integer homology: per-degree Betti numbers and torsion."""

    betti: dict[int, int]
    torsion: dict[int, tuple[int, ...]]
    reduced_euler: int

    def rank(self, d: int) -> int:
        return self.betti.get(d, 0)

    def torsion_at(self, d: int):
        return self.torsion.get(d, ())

    def nonzero_degrees(self):
        degs = {d for d, b in self.betti.items() if b}
        degs |= {d for d, t in self.torsion.items() if t}
        return sorted(degs)

    def elementary_divisors(self, d: int):
        """Torsion as a multiset of prime powers, for direct-sum comparisons."""
        out = []
        for f in self.torsion_at(d):
            out.extend(_prime_powers(f))
        return sorted(out)

    def __eq__(self, other):
        if not isinstance(other, HomologyResult):
            return NotImplemented
        degs = set(self.betti) | set(other.betti) | set(self.torsion) | set(other.torsion)
        return all(
            self.rank(d) == other.rank(d)
            and self.elementary_divisors(d) == other.elementary_divisors(d)
            for d in degs
        )


def _prime_powers(n: int):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append(q)
        p += 1
    if n > 1:
        out.append(n)
    return out


def homology(cx: ChainComplex) -> HomologyResult:
    """Betti numbers and torsion from Smith normal forms of the boundaries."""
    top = cx.top_dim
    snfs = {}
    for d in range(0, top + 1):
        snfs[d] = snf_diagonal(cx.boundary(d))
    betti = {}
    torsion = {}
    euler = 0
    for d in range(-1, top + 1):
        nd = cx.n_chains(d)
        euler += (nd if d % 2 == 0 else -nd)
        rank_d = len(snfs.get(d, []))        # rank of boundary out of C_d
        rank_d1 = len(snfs.get(d + 1, []))   # rank of boundary into C_d
        betti[d] = nd - rank_d - rank_d1
        tor = tuple(f for f in snfs.get(d + 1, []) if f > 1)
        if tor:
            torsion[d] = tor
        assert betti[d] >= 0
    return HomologyResult(betti, torsion, euler)


def chain_euler(p: GPoset, fixed_perm=None) -> int:
    """Reduced Euler characteristic of the order complex by chain counting.

    With fixed_perm given, counts only chains of the fixed subposet: an
    order automorphism fixing a chain setwise fixes it pointwise, so this
    equals the alternating trace of the permutation on the chain groups.
    """
    if fixed_perm is None:
        keep = list(range(p.n))
    elif isinstance(fixed_perm, int):
        perm = p.perms[fixed_perm]
        keep = [i for i in range(p.n) if perm[i] == i]
    else:
        keep = [i for i in range(p.n) if fixed_perm[i] == i]
    keep_set = set(keep)
    # a(x) = sum over chains with maximum x of (-1)^(size-1)
    order = sorted(keep, key=lambda i: int(p.leq[:, i].sum()))
    a = {}
    for x in order:
        acc = 1
        for y in keep_set:
            if y != x and p.leq[y, x]:
                acc -= a[y]
        a[x] = acc
    return sum(a.values()) - 1


# -- rational homology bases ---------------------------------------------------

def _rref_q(rows):
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return [], ()
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], tuple(pivots)


def matrix_rank_q(rows) -> int:
    return len(_rref_q(rows)[0])


def _nullspace_q(mat, ncols):
    reduced, pivots = _rref_q(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p_ in zip(reduced, pivots):
            v[p_] = -row[f]
        basis.append(v)
    return basis


class QHomology:
    """Canonical rational homology bases of a chain complex, per degree.

    For each degree: a kernel basis of the boundary, an image basis of the
    incoming boundary, and homology representatives completing the image to
    the kernel.  express() rewrites any cycle in those representatives.
    """

    def __init__(self, cx: ChainComplex):
        self.cx = cx
        self._data = {}

    def _degree(self, d: int):
        if d in self._data:
            return self._data[d]
        nd = self.cx.n_chains(d)
        bnd = self.cx.boundary(d)
        kernel = _nullspace_q(bnd, nd) if nd else []
        incoming = self.cx.boundary(d + 1)
        image_rows = []
        if self.cx.n_chains(d + 1) and nd:
            cols = [[Fraction(incoming[i][j]) for i in range(nd)]
                    for j in range(self.cx.n_chains(d + 1))]
            image_rows, _ = _rref_q(cols)
        # complete the image basis to the kernel: keep kernel vectors that
        # increase the rank of [image; chosen]
        chosen = []
        stack = [list(r) for r in image_rows]
        base_rank = len(image_rows)
        for v in kernel:
            cand = stack + [list(v)]
            if matrix_rank_q(cand) > len(stack):
                stack = _rref_q(cand)[0]
                chosen.append(v)
        data = {
            "dim": nd,
            "image": image_rows,
            "homology": chosen,
        }
        self._data[d] = data
        return data

    def betti(self, d: int) -> int:
        return len(self._degree(d)["homology"])

    def basis(self, d: int):
        return self._degree(d)["homology"]

    def express(self, vec, d: int):
        """Coordinates of a cycle over the homology representatives at d."""
        data = self._degree(d)
        cols = [list(r) for r in data["image"]] + [list(h) for h in data["homology"]]
        k = len(cols)
        if k == 0:
            if any(x != 0 for x in vec):
                raise ValueError("nonzero cycle in zero homology")
            return []
        nd = data["dim"]
        aug = [[cols[j][i] for j in range(k)] + [Fraction(vec[i])]
               for i in range(nd)]
        reduced, pivots = _rref_q(aug)
        sol = [Fraction(0)] * k
        for row, p_ in zip(reduced, pivots):
            if p_ == k:
                raise ValueError("vector is not in the cycle space")
            sol[p_] = row[k]
        return sol[len(data["image"]):]


def _payload_index_map(sub: GPoset, sup: GPoset):
    mapping = []
    for payload in sub.payloads:
        if payload not in sup.index:
            raise NotSubposetError(f"element {payload!r} missing from superposet")
        mapping.append(sup.index[payload])
    for i in range(sub.n):
        for j in range(sub.n):
            if bool(sub.leq[i, j]) != bool(sup.leq[mapping[i], mapping[j]]):
                raise NotSubposetError("order relations disagree; not induced")
    return mapping


def _push_chain_vector(vec, sub_cx: ChainComplex, sup_cx: ChainComplex,
                       mapping, d: int):
    out = [Fraction(0)] * sup_cx.n_chains(d)
    for i, c in enumerate(vec):
        if c:
            simplex = sub_cx.chains[d + 1][i]
            image = tuple(mapping[x] for x in simplex)
            out[sup_cx.simplex_index[d + 1][image]] += c
    return out


def induced_map(sub: GPoset, sup: GPoset, d: int,
                sub_data=None, sup_data=None):
    """Matrix of the inclusion-induced map on degree-d rational homology.

    Columns are the homology representatives of the subposet, written in
    the representatives of the superposet.
    """
    mapping = _payload_index_map(sub, sup)
    sub_cx, sub_q = sub_data if sub_data else _complex_and_bases(sub)
    sup_cx, sup_q = sup_data if sup_data else _complex_and_bases(sup)
    cols = []
    for h in sub_q.basis(d):
        pushed = _push_chain_vector(h, sub_cx, sup_cx, mapping, d)
        cols.append(sup_q.express(pushed, d))
    rows = sup_q.betti(d)
    return [[cols[j][i] for j in range(len(cols))] for i in range(rows)]


def _complex_and_bases(p: GPoset, budget=DEFAULT_SIMPLEX_BUDGET):
    cx = order_complex(p, budget)
    return cx, QHomology(cx)


def connecting_map(pq: GPoset, q: GPoset, d: int, pq_data=None, q_data=None,
                   bottom_index=None):
    """The degree-lowering map of the extension sequence.

    A cycle of the extended poset splits as (chains avoiding the adjoined
    bottom) + (chains through it); the boundary of the first part is a
    cycle supported in the ideal, read off in its homology basis.
    """
    from .gposet import AdjoinedBottom

    if bottom_index is None:
        bottom_index = next(i for i, payload in enumerate(pq.payloads)
                            if isinstance(payload, AdjoinedBottom))
    pq_cx, pq_q = pq_data if pq_data else _complex_and_bases(pq)
    q_cx, q_q = q_data if q_data else _complex_and_bases(q)
    q_map = _payload_index_map(q, pq)
    inv_map = {v: k for k, v in enumerate(q_map)}
    bnd = pq_cx.boundary(d)
    cols = []
    for h in pq_q.basis(d):
        # alpha: the part of the cycle avoiding the bottom
        alpha = [c if bottom_index not in pq_cx.chains[d + 1][i] else Fraction(0)
                 for i, c in enumerate(h)]
        n_prev = pq_cx.n_chains(d - 1)
        dalpha = [Fraction(0)] * n_prev
        for j, c in enumerate(alpha):
            if c:
                for i in range(n_prev):
                    if bnd[i][j]:
                        dalpha[i] += c * bnd[i][j]
        # rewrite in the chains of the ideal
        q_vec = [Fraction(0)] * q_cx.n_chains(d - 1)
        for i, c in enumerate(dalpha):
            if c:
                simplex = pq_cx.chains[d][i]
                pre = tuple(inv_map[x] for x in simplex)  # KeyError = bug
                q_vec[q_cx.simplex_index[d][pre]] += c
        cols.append(q_q.express(q_vec, d - 1))
    rows = q_q.betti(d - 1)
    return [[cols[j][i] for j in range(len(cols))] for i in range(rows)]


def _compose_q(a, b):
    if not b:
        return [[] for _ in range(len(a))]
    out = []
    for i in range(len(a)):
        row = []
        for j in range(len(b[0]) if b else 0):
            row.append(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)))
        out.append(row)
    return out


def _is_zero_matrix(m):
    return all(all(x == 0 for x in row) for row in m)


def mv_simplex_decomposition(p: GPoset, q: GPoset, pq: GPoset) -> dict:
    """Simplex-level decomposition of the extension's order complex.

    Checks that the simplices of the extension split into those of the
    poset and those of the ideal-with-bottom, intersecting exactly in the
    simplices of the ideal.
    """
    from .gposet import AdjoinedBottom

    bottom = next(i for i, payload in enumerate(pq.payloads)
                  if isinstance(payload, AdjoinedBottom))
    p_map = _payload_index_map(p, pq)
    q_map = _payload_index_map(q, pq)
    qq_elems = set(q_map) | {bottom}
    pq_cx = order_complex(pq)
    p_simp, qq_simp = set(), set()
    for level in pq_cx.chains:
        for s in level:
            if bottom not in s:
                p_simp.add(s)
            if set(s) <= qq_elems:
                qq_simp.add(s)
    all_simp = {s for level in pq_cx.chains for s in level}
    q_set = set(q_map)
    q_simp = {s for s in all_simp if set(s) <= q_set}
    return {
        "union_ok": (p_simp | qq_simp) == all_simp,
        "intersection_ok": (p_simp & qq_simp) == q_simp,
    }


def verify_mayer_vietoris(p: GPoset, ideal, budget=DEFAULT_SIMPLEX_BUDGET) -> dict:
    """Exactness audit of the long sequence of the extension over the ideal.

    Builds the three complexes, all maps in all degrees, and checks at
    every node that consecutive maps compose to zero and that ranks of the
    incoming and outgoing maps add up to the dimension.  Returns a report
    dict; a false verdict carries the first offending node.
    """
    from .gposet import _adjoin_bottom, _check_upper_ideal, subposet

    _check_upper_ideal(p, ideal)
    q = subposet(p, ideal, tag="ideal")
    pq = _adjoin_bottom(p, ideal, tag="extension")
    p_cx = _complex_and_bases(p, budget)
    q_cx = _complex_and_bases(q, budget)
    pq_cx = _complex_and_bases(pq, budget)
    decomposition = mv_simplex_decomposition(p, q, pq)
    top = max(pq_cx[0].top_dim, q_cx[0].top_dim + 1, 0)
    nodes = []
    ok = True
    witness = None
    iota = {}
    kappa = {}
    rmap = {}
    for d in range(-1, top + 1):
        iota[d] = induced_map(q, p, d, q_cx, p_cx)
        kappa[d] = induced_map(p, pq, d, p_cx, pq_cx)
        rmap[d] = connecting_map(pq, q, d, pq_cx, q_cx)
    for d in range(-1, top + 1):
        dim_p = p_cx[1].betti(d)
        dim_q = q_cx[1].betti(d)
        dim_pq = pq_cx[1].betti(d)
        checks = {
            ("P", d): (matrix_rank_q(_transpose(iota[d]))
                       + matrix_rank_q(_transpose(kappa[d])) == dim_p
                       and _is_zero_matrix(_compose_q(kappa[d], iota[d]))),
            ("PQ", d): (matrix_rank_q(_transpose(kappa[d]))
                        + matrix_rank_q(_transpose(rmap[d])) == dim_pq
                        and _is_zero_matrix(_compose_q(rmap[d], kappa[d]))),
        }
        r_next = rmap.get(d + 1, [])
        checks[("Q", d)] = (
            matrix_rank_q(_transpose(r_next)) + matrix_rank_q(_transpose(iota[d]))
            == dim_q
            and _is_zero_matrix(_compose_q(iota[d], r_next))
        )
        for node, good in checks.items():
            nodes.append({"node": node[0], "degree": node[1], "exact": good})
            if not good and ok:
                ok = False
                witness = {"node": node[0], "degree": node[1],
                           "dims": {"P": dim_p, "Q": dim_q, "PQ": dim_pq}}
    report = {
        "exact": ok and decomposition["union_ok"] and decomposition["intersection_ok"],
        "decomposition": decomposition,
        "nodes": nodes,
    }
    if witness:
        report["witness"] = witness
    return report


def _transpose(m):
    if not m:
        return []
    return [[m[i][j] for i in range(len(m))] for j in range(len(m[0]))]
