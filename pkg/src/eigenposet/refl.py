"""Finite unitary reflection groups and reflection cosets.

Groups are fully enumerated lists of exact matrices, deduplicated by
their canonical entry serialization.  Degree/codegree data comes from
the classical family formulas or from shipped table rows, and degrees
are independently re-derived from the Molien series whenever the group
is small enough to enumerate.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .cyclo import CycNum, zeta
from .exactla import Mat, rank

__all__ = [
    "ReflGroup",
    "ReflCoset",
    "DegreeData",
    "GroupError",
    "BudgetError",
    "UnknownGroupError",
    "build_gmpn",
    "symmetric_group",
    "build_from_generators",
    "molien_degrees",
    "degree_data",
    "identify_codegrees",
    "normalizes",
    "load_group_file",
    "parse_group_spec",
    "shephard_todd_table",
    "data_dir",
]

DEFAULT_ELEMENT_BUDGET = 10**6


class GroupError(ValueError):
    pass


class BudgetError(GroupError):
    pass


class UnknownGroupError(GroupError):
    pass


@dataclass(frozen=True)
class DegreeData:
    """Invariant degrees and coinvariant codegrees with their provenance."""

    degrees: tuple[int, ...]
    codegrees: tuple[int, ...] | None
    source: str  # "table" | "formula" | "molien"

    def coexponents(self) -> tuple[int, ...]:
        if self.codegrees is None:
            raise UnknownGroupError("codegrees unavailable")
        return tuple(d + 1 for d in self.codegrees)


class ReflGroup:
    """A finite matrix group with reflection-theoretic helpers."""

    def __init__(self, dim, elements, generators=None, name=None,
                 degrees=None, codegrees=None):
        self.dim = dim
        self.elements = tuple(elements)
        self.generators = tuple(generators) if generators else self.elements
        self.name = name
        self.table_degrees = tuple(degrees) if degrees else None
        self.table_codegrees = tuple(codegrees) if codegrees is not None else None
        self.lookup = {g: i for i, g in enumerate(self.elements)}
        if len(self.lookup) != len(self.elements):
            raise GroupError("duplicate elements")
        self._identity_index = None
        self._inverses = None
        self._classes = None
        self._orders = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self.lookup

    def __repr__(self):
        label = self.name or f"dim {self.dim}"
        return f"ReflGroup({label}, order={self.order})"

    @property
    def identity_index(self) -> int:
        if self._identity_index is None:
            self._identity_index = self.lookup[Mat.identity(self.dim)]
        return self._identity_index

    def index(self, g: Mat) -> int:
        try:
            return self.lookup[g]
        except KeyError:
            raise GroupError("element not in group") from None

    def mult(self, i: int, j: int) -> int:
        return self.index(self.elements[i] * self.elements[j])

    def inverse_index(self, i: int) -> int:
        if self._inverses is None:
            self._inverses = [None] * self.order
        if self._inverses[i] is None:
            self._inverses[i] = self.index(self.elements[i].inverse())
        return self._inverses[i]

    def element_order(self, i: int) -> int:
        if i not in self._orders:
            g = self.elements[i]
            p, k = g, 1
            while not p.is_identity():
                p = p * g
                k += 1
            self._orders[i] = k
        return self._orders[i]

    def check_closure(self):
        for g in self.elements:
            if g.inverse() not in self.lookup:
                raise GroupError("not closed under inversion")
            for h in self.elements:
                if g * h not in self.lookup:
                    raise GroupError("not closed under multiplication")
        if Mat.identity(self.dim) not in self.lookup:
            raise GroupError("identity missing")

    def conjugacy_classes(self):
        """Classes as lists of element indices, deterministically ordered."""
        if self._classes is None:
            inverses = [self.elements[self.inverse_index(i)]
                        for i in range(self.order)]
            remaining = set(range(self.order))
            classes = []
            while remaining:
                i = min(remaining, key=lambda k: self.elements[k].text())
                orbit = set()
                g = self.elements[i]
                for x, xi in zip(self.elements, inverses):
                    orbit.add(self.index(x * g * xi))
                orbit_list = sorted(orbit, key=lambda k: self.elements[k].text())
                classes.append(orbit_list)
                remaining -= orbit
            classes.sort(key=lambda cl: (len(cl), self.elements[cl[0]].text()))
            self._classes = classes
        return self._classes

    def class_representatives(self):
        return [cl[0] for cl in self.conjugacy_classes()]

    def class_of(self, i: int) -> int:
        for c, cl in enumerate(self.conjugacy_classes()):
            if i in cl:
                return c
        raise GroupError("index out of range")

    def reflections(self):
        """All elements fixing a hyperplane pointwise."""
        ident = Mat.identity(self.dim)
        return [g for g in self.elements if rank(g - ident) == 1]

    def subgroup(self, indices, name=None) -> "ReflGroup":
        elems = [self.elements[i] for i in sorted(set(indices))]
        sub = ReflGroup(self.dim, elems, name=name)
        return sub


def build_from_generators(dim, gens, budget=DEFAULT_ELEMENT_BUDGET, name=None,
                          degrees=None, codegrees=None) -> ReflGroup:
    """Closure of the generators under multiplication, breadth first."""
    gens = [g if isinstance(g, Mat) else Mat(g) for g in gens]
    for g in gens:
        if g.rows != dim or g.cols != dim:
            raise GroupError("generator has wrong dimension")
        g.inverse()  # raises if not invertible
    seen = {Mat.identity(dim): 0}
    order_list = [Mat.identity(dim)]
    frontier = [Mat.identity(dim)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    if len(seen) >= budget:
                        raise BudgetError(
                            f"group exceeds element budget {budget}")
                    seen[y] = len(order_list)
                    order_list.append(y)
                    nxt.append(y)
        frontier = nxt
    return ReflGroup(dim, order_list, generators=gens, name=name,
                     degrees=degrees, codegrees=codegrees)


def build_gmpn(m: int, p: int, n: int, budget=DEFAULT_ELEMENT_BUDGET) -> ReflGroup:
    """The imprimitive group of monomial matrices G(m, p, n).

    Entries are m-th roots of unity, one per row and column, with the
    product of the nonzero entries an (m/p)-th root of unity.
    """
    if m < 1 or n < 1 or p < 1 or m % p != 0:
        raise GroupError(f"invalid parameters ({m}, {p}, {n})")
    expected = (m ** n) * _factorial(n) // p
    if expected > budget:
        raise BudgetError(
            f"|G({m},{p},{n})| = {expected} exceeds budget {budget}")
    roots = [zeta(m, k) if m > 1 else CycNum.from_rational(1) for k in range(m)]
    zero = CycNum.from_rational(0)
    elements = []
    for perm in itertools.permutations(range(n)):
        for exps in itertools.product(range(m), repeat=n):
            if sum(exps) % p != 0:
                continue
            rows = [[zero] * n for _ in range(n)]
            for j in range(n):
                rows[perm[j]][j] = roots[exps[perm[j]]]
            elements.append(Mat(rows))
    assert len(elements) == expected
    gens = _gmpn_generators(m, p, n)
    return ReflGroup(n, elements, generators=gens, name=f"G({m},{p},{n})")


def _gmpn_generators(m, p, n):
    gens = []
    for i in range(n - 1):
        rows = Mat.identity(n).entries
        rows = [list(r) for r in rows]
        one, zero = CycNum.from_rational(1), CycNum.from_rational(0)
        rows[i][i] = rows[i + 1][i + 1] = zero
        rows[i][i + 1] = rows[i + 1][i] = one
        gens.append(Mat(rows))
    if m > 1:
        if p < m:
            gens.append(Mat.diagonal([zeta(m // p) if j == n - 1 else 1
                                      for j in range(n)]))
        if n >= 2:
            gens.append(Mat.diagonal(
                [zeta(m) if j == n - 2 else (zeta(m, m - 1) if j == n - 1 else 1)
                 for j in range(n)]))
    return gens


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def symmetric_group(n: int, budget=DEFAULT_ELEMENT_BUDGET) -> ReflGroup:
    """Sym(n) in its essential reflection representation on C^(n-1).

    Basis v_i = e_i - e_(i+1); a permutation acts through its action on
    coordinates of C^n.
    """
    if n < 2:
        raise GroupError("need n >= 2 for the reflection representation")
    if _factorial(n) > budget:
        raise BudgetError(f"|Sym({n})| = {_factorial(n)} exceeds budget {budget}")
    dim = n - 1
    one = Fraction(1)

    def perm_matrix(sigma):
        # image of v_j is e_sigma(j) - e_sigma(j+1) = sum of v_k
        cols = []
        for j in range(dim):
            a, b = sigma[j], sigma[j + 1]
            v = [Fraction(0)] * dim
            sgn = 1
            if a > b:
                a, b = b, a
                sgn = -1
            for k in range(a, b):
                v[k] = one * sgn
            cols.append(v)
        return Mat([[cols[j][i] for j in range(dim)] for i in range(dim)])

    elements = [perm_matrix(sigma) for sigma in itertools.permutations(range(n))]
    gens = []
    for i in range(n - 1):
        sigma = list(range(n))
        sigma[i], sigma[i + 1] = sigma[i + 1], sigma[i]
        gens.append(perm_matrix(sigma))
    return ReflGroup(dim, elements, generators=gens, name=f"Sym({n})")


# -- Molien series ---------------------------------------------------------

def _char_poly_coeffs(g: Mat):
    """Coefficients e_k with det(I - t g) = sum_k (-1)^k e_k t^k."""
    n = g.rows
    powers = [Mat.identity(n)]
    for _ in range(n):
        powers.append(powers[-1] * g)
    p = [powers[k].trace() for k in range(n + 1)]  # p[k] = tr(g^k)
    e = [CycNum.from_rational(1)]
    for k in range(1, n + 1):
        acc = CycNum.from_rational(0)
        sign = 1
        for i in range(1, k + 1):
            term = e[k - i] * p[i]
            acc = acc + (term if sign > 0 else -term)
            sign = -sign
        e.append(acc * Fraction(1, k))
    return e


def molien_degrees(group: ReflGroup, max_order=None) -> tuple[int, ...]:
    """Degrees re-derived from the Molien series of the group.

    The series (1/|G|) sum_g 1/det(I - t g) is expanded exactly and the
    degrees are peeled off greedily; the residual series must be 1.
    """
    n = group.dim
    target = max_order if max_order is not None else min(group.order, 256) + 1
    zero = CycNum.from_rational(0)
    total = [zero] * (target + 1)
    for g in group.elements:
        e = _char_poly_coeffs(g)
        # det(I - t g) = sum (-1)^k e_k t^k; invert as a power series
        den = [(e[k] if k % 2 == 0 else -e[k]) for k in range(n + 1)]
        inv = [CycNum.from_rational(1)]
        for k in range(1, target + 1):
            acc = zero
            for j in range(1, min(k, n) + 1):
                if den[j].is_zero():
                    continue
                acc = acc + den[j] * inv[k - j]
            inv.append(-acc)
        total = [t + c for t, c in zip(total, inv)]
    # only the group average is rational; per-element series are not
    if any(not c.is_rational() for c in total):
        raise GroupError("Molien series sum not rational")
    series = [c.as_fraction() / group.order for c in total]
    assert series[0] == 1
    degrees = []
    for _ in range(n):
        d = next((k for k in range(1, target + 1) if series[k] != 0), None)
        if d is None:
            raise GroupError("Molien series ended before all degrees were found")
        degrees.append(d)
        # multiply by (1 - t^d)
        for k in range(target, d - 1, -1):
            series[k] -= series[k - d]
    if any(series[k] != 0 for k in range(1, target + 1)):
        raise GroupError("Molien series does not factor into expected degrees")
    return tuple(sorted(degrees))


# -- degree data -----------------------------------------------------------

MOLIEN_CROSSCHECK_LIMIT = 10**4


def _family_degree_data(name: str):
    if name is None:
        return None
    if name.startswith("Sym(") and name.endswith(")"):
        n = int(name[4:-1])
        return tuple(range(2, n + 1)), tuple(range(0, n - 1))
    if name.startswith("G(") and name.endswith(")"):
        m, p, n = (int(x) for x in name[2:-1].split(","))
        degrees = sorted([m * i for i in range(1, n)] + [n * m // p])
        if p == 1:
            codegrees = tuple(m * i for i in range(n))
        elif p == m:
            if n == 1:
                codegrees = (0,)
            else:
                codegrees = tuple(sorted([m * i for i in range(n - 1)]
                                         + [(n - 1) * m - n]))
        else:
            codegrees = None
        return tuple(degrees), codegrees
    return None


def degree_data(group: ReflGroup) -> DegreeData:
    """Degrees and codegrees with a Molien cross-check on the degrees."""
    fam = _family_degree_data(group.name)
    if group.table_degrees is not None:
        data = DegreeData(group.table_degrees, group.table_codegrees, "table")
    elif fam is not None:
        data = DegreeData(fam[0], fam[1], "formula")
    elif group.order <= MOLIEN_CROSSCHECK_LIMIT:
        data = DegreeData(molien_degrees(group), None, "molien")
    else:
        raise UnknownGroupError(
            f"no degree data for {group!r}; not a recognized family")
    if data.source != "molien" and group.order <= MOLIEN_CROSSCHECK_LIMIT:
        derived = molien_degrees(group, max_order=max(data.degrees) + 1)
        if derived != tuple(sorted(data.degrees)):
            raise GroupError(
                f"Molien degrees {derived} disagree with "
                f"{data.source} degrees {data.degrees}")
    prod = 1
    for d in data.degrees:
        prod *= d
    if prod != group.order:
        raise GroupError(
            f"product of degrees {prod} differs from group order {group.order}")
    if group.order <= MOLIEN_CROSSCHECK_LIMIT:
        n_refl = len(group.reflections())
        if sum(d - 1 for d in data.degrees) != n_refl:
            raise GroupError(
                f"degree sum predicts {sum(d - 1 for d in data.degrees)} "
                f"reflections, found {n_refl}")
    return data


def identify_codegrees(order: int, degrees: tuple[int, ...]):
    """Codegrees of the group matching (order, degrees), if recognized.

    Scans the imprimitive/symmetric family formulas and the shipped
    exceptional table.  Matching groups with equal invariants but from
    different constructions carry equal codegrees at this scale.
    """
    degrees = tuple(sorted(degrees))
    n = len(degrees)
    if degrees == tuple(range(2, n + 2)) and order == _factorial(n + 1):
        return tuple(range(0, n))
    for m in range(1, max(degrees) + 1):
        for p in [1] + ([m] if m > 1 else []):
            dd = _family_degree_data(f"G({m},{p},{n})")
            if dd is None or dd[1] is None:
                continue
            fd = dd[0]
            prod = 1
            for d in fd:
                prod *= d
            if fd == degrees and prod == order:
                return dd[1]
    for row in shephard_todd_table().values():
        if row["order"] == order and tuple(row["degrees"]) == degrees:
            return tuple(row["codegrees"])
    return None


# -- cosets ----------------------------------------------------------------

def normalizes(gamma: Mat, group: ReflGroup) -> bool:
    if gamma.rows != group.dim or gamma.cols != group.dim:
        raise GroupError("dimension mismatch")
    gi = gamma.inverse()
    return all((gamma * g * gi) in group.lookup for g in group.elements)


FINITE_ORDER_BUDGET = 10**4


class ReflCoset:
    """A coset gamma*G of a reflection group by a finite-order normalizer."""

    def __init__(self, group: ReflGroup, gamma: Mat | None = None):
        self.group = group
        self.gamma = gamma if gamma is not None else Mat.identity(group.dim)
        if not normalizes(self.gamma, group):
            raise GroupError("gamma does not normalize the group")
        p, k = self.gamma, 1
        while not p.is_identity():
            p = p * self.gamma
            k += 1
            if k > FINITE_ORDER_BUDGET:
                raise GroupError("gamma does not have (small) finite order")
        self.gamma_order = k

    @property
    def is_identity_coset(self) -> bool:
        return self.gamma.is_identity()

    def elements(self):
        return [self.gamma * g for g in self.group.elements]

    def __repr__(self):
        tag = "identity" if self.is_identity_coset else f"order-{self.gamma_order}"
        return f"ReflCoset({self.group!r}, gamma={tag})"


# -- shipped data ----------------------------------------------------------

def data_dir() -> Path:
    override = os.environ.get("EIGENPOSET_DATA_DIR")
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


@lru_cache(maxsize=None)
def _st_table_cached(path_str: str):
    table = {}
    for line in Path(path_str).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        name = fields[0]
        row = {"name": name}
        for tok in fields[1:]:
            key, _, value = tok.partition("=")
            if key in ("dim", "order"):
                row[key] = int(value)
            else:
                row[key] = tuple(int(x) for x in value.split(","))
        table[name] = row
    return table


def shephard_todd_table():
    return _st_table_cached(str(data_dir() / "sttables.txt"))


def load_group_file(path, budget=DEFAULT_ELEMENT_BUDGET) -> ReflGroup:
    """Read a group-data file: dimension, generators, optional invariants.

    Format: "name", "dim", "order", "degrees", "codegrees" header lines,
    then one "gen" line per generator followed by dim rows in matrix text
    format.
    """
    lines = [ln.rstrip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln.strip() and not ln.strip().startswith("#")]
    meta = {"name": None, "dim": None, "order": None,
            "degrees": None, "codegrees": None}
    gens = []
    i = 0
    while i < len(lines):
        key, _, rest = lines[i].partition(" ")
        if key == "gen":
            if meta["dim"] is None:
                raise GroupError("gen block before dim line")
            block = "\n".join(lines[i + 1:i + 1 + meta["dim"]])
            gens.append(Mat.from_text(block))
            i += 1 + meta["dim"]
            continue
        if key in ("dim", "order"):
            meta[key] = int(rest)
        elif key in ("degrees", "codegrees"):
            meta[key] = tuple(int(x) for x in rest.replace(",", " ").split())
        elif key == "name":
            meta["name"] = rest.strip()
        else:
            raise GroupError(f"unrecognized line in group file: {lines[i]!r}")
        i += 1
    if meta["dim"] is None or not gens:
        raise GroupError("group file needs a dim line and at least one gen")
    group = build_from_generators(meta["dim"], gens, budget=budget,
                                  name=meta["name"], degrees=meta["degrees"],
                                  codegrees=meta["codegrees"])
    if meta["order"] is not None and group.order != meta["order"]:
        raise GroupError(
            f"enumerated order {group.order} differs from declared {meta['order']}")
    return group


def parse_group_spec(spec: str, budget=DEFAULT_ELEMENT_BUDGET) -> ReflGroup:
    """Build a group from a selector: gmpn:m,p,n | sym:n | file:path | st:k."""
    kind, _, rest = spec.partition(":")
    if kind == "gmpn":
        m, p, n = (int(x) for x in rest.split(","))
        return build_gmpn(m, p, n, budget=budget)
    if kind == "sym":
        return symmetric_group(int(rest), budget=budget)
    if kind == "file":
        return load_group_file(rest, budget=budget)
    if kind == "st":
        return load_group_file(data_dir() / f"ST{int(rest)}.grp", budget=budget)
    raise GroupError(f"unrecognized group spec {spec!r}")


def parse_gamma_spec(spec: str, group: ReflGroup) -> Mat:
    """identity | scalar:m:k | file:path."""
    if spec == "identity":
        return Mat.identity(group.dim)
    kind, _, rest = spec.partition(":")
    if kind == "scalar":
        parts = rest.split(":")
        root = zeta(int(parts[0]), int(parts[1]) if len(parts) > 1 else 1)
        return Mat.scalar(group.dim, root)
    if kind == "file":
        return Mat.from_text(Path(rest).read_text())
    raise GroupError(f"unrecognized gamma spec {spec!r}")
