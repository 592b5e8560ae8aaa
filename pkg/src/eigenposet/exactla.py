"""Dense exact linear algebra over cyclotomic scalars.

Matrices act on column vectors.  Subspaces are stored as reduced
row-echelon bases with leftmost pivots, which makes the representation
canonical: two subspaces are equal iff their stored bases are equal.
Ambient dimensions stay small (<= 8), so everything is dense.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclo import CycNum, RootOfUnity, parse_cyc

__all__ = [
    "Mat",
    "Subspace",
    "ShapeError",
    "SingularMatrixError",
    "eigenspace",
    "kernel",
    "rank",
]


class ShapeError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def _cyc(x) -> CycNum:
    if isinstance(x, CycNum):
        return x
    if isinstance(x, (int, Fraction)):
        return CycNum.from_rational(x)
    if isinstance(x, RootOfUnity):
        return x.embed()
    raise TypeError(f"cannot use {type(x).__name__} as a matrix entry")


_C0 = CycNum.from_rational(0)
_C1 = CycNum.from_rational(1)


class Mat:
    """Immutable dense matrix with exact cyclotomic entries."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries):
        rows = tuple(tuple(_cyc(x) for x in row) for row in entries)
        if not rows:
            raise ShapeError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        self.rows = len(rows)
        self.cols = width
        self.entries = rows
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls([[_C1 if i == j else _C0 for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n: int, c) -> "Mat":
        c = _cyc(c)
        return cls([[c if i == j else _C0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values) -> "Mat":
        vals = [_cyc(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else _C0 for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ShapeError(f"{self.rows}x{self.cols} times {other.rows}x{other.cols}")
            cols = other.cols
            out = []
            for arow in self.entries:
                orow = [_C0] * cols
                for k, a in enumerate(arow):
                    if a.is_zero():
                        continue
                    for j, b in enumerate(other.entries[k]):
                        if not b.is_zero():
                            orow[j] = orow[j] + a * b
                out.append(orow)
            return Mat(out)
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in addition")
        return Mat([[a + b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in subtraction")
        return Mat([[a - b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return Mat([[-a for a in row] for row in self.entries])

    def scale(self, c) -> "Mat":
        c = _cyc(c)
        return Mat([[c * a for a in row] for row in self.entries])

    def __pow__(self, k: int) -> "Mat":
        if self.rows != self.cols:
            raise ShapeError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = Mat.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def apply_vec(self, v):
        if len(v) != self.cols:
            raise ShapeError("vector length mismatch")
        out = []
        for row in self.entries:
            acc = _C0
            for a, x in zip(row, v):
                if a.is_zero() or x.is_zero():
                    continue
                acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Mat":
        return Mat(list(zip(*self.entries)))

    def trace(self) -> CycNum:
        if self.rows != self.cols:
            raise ShapeError("trace of a non-square matrix")
        acc = _C0
        for i in range(self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def inverse(self) -> "Mat":
        if self.rows != self.cols:
            raise ShapeError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(self.entries[i]) + [_C1 if j == i else _C0 for j in range(n)]
               for i in range(n)]
        reduced, pivots = rref(aug)
        if pivots != tuple(range(n)):
            raise SingularMatrixError("matrix is singular")
        return Mat([row[n:] for row in reduced])

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            (self.entries[i][j].is_one() if i == j else self.entries[i][j].is_zero())
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def text(self) -> str:
        """One line per row, entries separated by "; ". Round-trips exactly."""
        return "\n".join("; ".join(str(c) for c in row) for row in self.entries)

    @classmethod
    def from_text(cls, text: str) -> "Mat":
        rows = []
        for line in text.strip().splitlines():
            rows.append([parse_cyc(tok) for tok in _split_entries(line)])
        return cls(rows)

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols})"


def _split_entries(line: str):
    """Split a matrix row at semicolons outside parentheses."""
    toks, depth, cur = [], 0, []
    for ch in line:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == ";" and depth == 0:
            toks.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur and "".join(cur).strip():
        toks.append("".join(cur))
    return [t for t in toks if t.strip()]


def rref(rows):
    """Reduced row echelon form with leftmost pivots.

    Takes a list of row lists of CycNum; returns (rows, pivots) with zero
    rows dropped.  This is the single canonicalization path for subspaces.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], ()
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        pr = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], tuple(pivots)


class Subspace:
    """A linear subspace of C^n in canonical reduced row-echelon form."""

    __slots__ = ("ambient_dim", "basis", "pivots", "_hash")

    def __init__(self, ambient_dim: int, spanning_rows=()):
        vecs = [[_cyc(x) for x in row] for row in spanning_rows]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ShapeError("spanning vector has wrong length")
        reduced, pivots = rref(vecs)
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(row) for row in reduced)
        self.pivots = pivots
        self._hash = None

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, Mat.identity(n).entries)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains_vector(self, v) -> bool:
        v = [_cyc(x) for x in v]
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if not c.is_zero():
                v = [x - c * y for x, y in zip(v, row)]
        return all(x.is_zero() for x in v)

    def contains(self, other: "Subspace") -> bool:
        """True iff other is a subspace of self."""
        if self.ambient_dim != other.ambient_dim:
            raise ShapeError("ambient dimension mismatch")
        return all(self.contains_vector(v) for v in other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ShapeError("ambient dimension mismatch")
        # x in A iff N_A x = 0, where the rows of N_A span the annihilator
        constraints = list(_annihilator(self)) + list(_annihilator(other))
        if not constraints:
            return Subspace.full(self.ambient_dim)
        return kernel(Mat(constraints))

    def apply(self, g: Mat) -> "Subspace":
        if g.cols != self.ambient_dim:
            raise ShapeError("matrix does not act on this ambient space")
        return Subspace(g.rows, [g.apply_vec(v) for v in self.basis])

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient_dim, self.basis))
        return self._hash

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def text(self) -> str:
        if not self.basis:
            return f"subspace {self.ambient_dim} 0:"
        rows = " | ".join("; ".join(str(c) for c in row) for row in self.basis)
        return f"subspace {self.ambient_dim} {self.dim}: {rows}"


def _annihilator(s: Subspace):
    if s.dim == 0:
        return list(Mat.identity(s.ambient_dim).entries)
    k = kernel(Mat(s.basis))
    return list(k.basis)


def kernel(m: Mat) -> Subspace:
    """Canonical kernel of m as a subspace of the column space domain."""
    reduced, pivots = rref([list(r) for r in m.entries])
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [_C0] * m.cols
        v[f] = _C1
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return Subspace(m.cols, basis)


def rank(m: Mat) -> int:
    _, pivots = rref([list(r) for r in m.entries])
    return len(pivots)


def eigenspace(x: Mat, ev) -> Subspace:
    """The eigenspace of x for the given eigenvalue, as a canonical subspace."""
    if x.rows != x.cols:
        raise ShapeError("eigenspace of a non-square matrix")
    z = _cyc(ev)
    shifted = x - Mat.scalar(x.rows, z)
    return kernel(shifted)
