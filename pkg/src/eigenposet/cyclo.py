"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A value is a rational linear combination of powers of a primitive N-th
root of unity, stored on the power basis 1, z, ..., z^(phi(N)-1) reduced
modulo the N-th cyclotomic polynomial.  Every value is kept at the
smallest conductor that can carry it, so equality and hashing are plain
structural comparisons.  Coefficients are arbitrary-precision rationals;
there is no floating point anywhere in this module.

Mixed-conductor arithmetic promotes both operands to the lcm conductor
and reduces the result back down, so callers never manage conductors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import gcd, lcm

__all__ = [
    "CycNum",
    "RootOfUnity",
    "zeta",
    "parse_cyc",
    "parse_rootspec",
    "euler_phi",
    "cyclotomic_polynomial",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@cache
def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("conductor must be positive")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@cache
def divisors(n: int) -> tuple[int, ...]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def _int_polydiv(num: list[int], den: tuple[int, ...]) -> list[int]:
    # exact division of integer polynomials, ascending coefficients
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        q, r = divmod(c, den[-1])
        assert r == 0
        out[k] = q
        for i, d in enumerate(den):
            num[k + i] -= q * d
    assert all(c == 0 for c in num)
    return out


@cache
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending, monic."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        poly = _int_polydiv(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@cache
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Coordinates of z^k on the power basis of Q(zeta_n), for 0 <= k < n."""
    phi = euler_phi(n)
    top = [-c for c in cyclotomic_polynomial(n)[:-1]]  # x^phi mod Phi_n
    cur = [0] * phi
    cur[0] = 1
    rows = [tuple(cur)]
    for _ in range(1, n):
        carry = cur[phi - 1]
        nxt = [0] * phi
        for i in range(phi - 1):
            nxt[i + 1] = cur[i]
        if carry:
            for i in range(phi):
                nxt[i] += carry * top[i]
        cur = nxt
        rows.append(tuple(cur))
    return tuple(rows)


@cache
def _subfield_solver(n: int, d: int):
    """Row-reduction data for rewriting conductor-n coordinates in Q(zeta_d).

    Returns (phi_d, phi_n, T) where T is the transform of the Gauss-Jordan
    elimination of the embedding matrix: for a coordinate vector v at
    conductor n, w = T v gives the Q(zeta_d) coordinates in w[:phi_d], and
    v lies in Q(zeta_d) iff w[phi_d:] vanishes.
    """
    pn, pd = euler_phi(n), euler_phi(d)
    table = _power_table(n)
    step = n // d
    cols = [table[(j * step) % n] for j in range(pd)]
    aug = [
        [Fraction(cols[j][i]) for j in range(pd)]
        + [_ONE if k == i else _ZERO for k in range(pn)]
        for i in range(pn)
    ]
    r = 0
    for c in range(pd):
        pr = next((i for i in range(r, pn) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(pn):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    assert r == pd  # the embedding has full column rank
    return pd, pn, tuple(tuple(row[pd:]) for row in aug)


def _canonical(n: int, vec: list[Fraction]) -> tuple[int, tuple[Fraction, ...]]:
    """Reduce a conductor-n coordinate vector to its minimal conductor."""
    if n == 1:
        return 1, (vec[0],)
    if all(c == 0 for c in vec[1:]):
        return 1, (vec[0],)
    for d in divisors(n)[1:-1]:
        if euler_phi(d) == 1:
            continue  # Q(zeta_1) = Q(zeta_2) = Q, handled above
        pd, pn, tr = _subfield_solver(n, d)
        w = [
            sum((tr[i][k] * vec[k] for k in range(pn) if vec[k]), _ZERO)
            for i in range(pn)
        ]
        if all(w[i] == 0 for i in range(pd, pn)):
            return d, tuple(w[:pd])
    return n, tuple(vec)


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [_ZERO] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1] * inv
        if c:
            q[k] = c
            for i, d in enumerate(b):
                a[k + i] -= c * d
    return q, _poly_trim(a)


def _half_extended_gcd(a: list[Fraction], b: list[Fraction]):
    """(g, u) with u*a = g modulo b, over Q[x]."""
    r0, r1 = _poly_trim(list(a)), _poly_trim(list(b))
    s0, s1 = [_ONE], [_ZERO]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        # s0 - q*s1
        prod = [_ZERO] * (len(q) + len(s1) - 1) if q and s1 else []
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s1):
                    if sj:
                        prod[i + j] += qi * sj
        ns = [_ZERO] * max(len(s0), len(prod))
        for i, c in enumerate(s0):
            ns[i] += c
        for i, c in enumerate(prod):
            ns[i] -= c
        s0, s1 = s1, _poly_trim(ns)
    return r0, s0


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class CycNum:
    """An exact element of a cyclotomic field, always at minimal conductor."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs):
        vec = [_as_fraction(c) for c in coeffs]
        phi = euler_phi(conductor)
        if len(vec) < phi:
            vec += [_ZERO] * (phi - len(vec))
        elif len(vec) > phi:
            raise ValueError(
                f"expected at most {phi} coordinates for conductor {conductor}"
            )
        n, v = _canonical(conductor, vec)
        self.conductor = n
        self.coeffs = v
        self._hash = None

    @classmethod
    def _make(cls, conductor: int, coeffs: tuple[Fraction, ...]) -> "CycNum":
        self = object.__new__(cls)
        self.conductor = conductor
        self.coeffs = coeffs
        self._hash = None
        return self

    @classmethod
    def from_rational(cls, q) -> "CycNum":
        return cls._make(1, (_as_fraction(q),))

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.conductor == 1 and self.coeffs[0] == 0

    def is_one(self) -> bool:
        return self.conductor == 1 and self.coeffs[0] == 1

    def is_rational(self) -> bool:
        return self.conductor == 1

    def as_fraction(self) -> Fraction:
        if self.conductor != 1:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic -------------------------------------------------------

    def _promoted(self, n: int) -> list[Fraction]:
        if self.conductor == n:
            return list(self.coeffs)
        table = _power_table(n)
        step = n // self.conductor
        out = [_ZERO] * euler_phi(n)
        for j, c in enumerate(self.coeffs):
            if c:
                row = table[(j * step) % n]
                for i, t in enumerate(row):
                    if t:
                        out[i] += c * t
        return out

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.conductor == 1 and other.conductor == 1:
            return CycNum._make(1, (self.coeffs[0] + other.coeffs[0],))
        n = lcm(self.conductor, other.conductor)
        vec = [x + y for x, y in zip(self._promoted(n), other._promoted(n))]
        return CycNum._make(*_canonical(n, vec))

    __radd__ = __add__

    def __neg__(self):
        return CycNum._make(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.conductor == 1:
            c = self.coeffs[0]
            if c == 0:
                return CycNum._make(1, (_ZERO,))
            return CycNum._make(other.conductor, tuple(c * x for x in other.coeffs))
        if other.conductor == 1:
            c = other.coeffs[0]
            if c == 0:
                return CycNum._make(1, (_ZERO,))
            return CycNum._make(self.conductor, tuple(c * x for x in self.coeffs))
        n = lcm(self.conductor, other.conductor)
        pa, pb = self._promoted(n), other._promoted(n)
        phi = euler_phi(n)
        table = _power_table(n)
        out = [_ZERO] * phi
        for i, ci in enumerate(pa):
            if not ci:
                continue
            for j, cj in enumerate(pb):
                if not cj:
                    continue
                c = ci * cj
                e = i + j
                if e < phi:
                    out[e] += c
                else:
                    for k, t in enumerate(table[e % n]):
                        if t:
                            out[k] += c * t
        return CycNum._make(*_canonical(n, out))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        if self.conductor == 1:
            return CycNum._make(1, (1 / self.coeffs[0],))
        n = self.conductor
        phi = euler_phi(n)
        big_phi = [Fraction(c) for c in cyclotomic_polynomial(n)]
        g, u = _half_extended_gcd(list(self.coeffs), big_phi)
        assert len(g) == 1  # Phi_n is irreducible over Q
        u = [x / g[0] for x in u]
        if len(u) > phi:
            _, u = _poly_divmod(u, big_phi)
        vec = list(u) + [_ZERO] * (phi - len(u))
        return CycNum._make(*_canonical(n, vec[:phi]))

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum._make(1, (_ONE,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def conjugate(self) -> "CycNum":
        """Complex conjugation, z |-> z^(N-1) on the primitive root."""
        n = self.conductor
        if n == 1:
            return self
        table = _power_table(n)
        out = [_ZERO] * euler_phi(n)
        for j, c in enumerate(self.coeffs):
            if c:
                for i, t in enumerate(table[(n - j) % n]):
                    if t:
                        out[i] += c * t
        return CycNum._make(*_canonical(n, out))

    # -- structure --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.conductor == 1 and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.conductor, self.coeffs))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return str(self)

    def __str__(self):
        body = ", ".join(_frac_str(c) for c in self.coeffs)
        return f"cyc({self.conductor}; {body})"


def _coerce(x):
    if isinstance(x, CycNum):
        return x
    if isinstance(x, (int, Fraction)):
        return CycNum._make(1, (_as_fraction(x),))
    if isinstance(x, RootOfUnity):
        return x.embed()
    return NotImplemented


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_cyc(text: str) -> CycNum:
    """Parse the serialization "cyc(N; c0, c1, ...)"; round-trips exactly."""
    s = text.strip()
    if not (s.startswith("cyc(") and s.endswith(")")):
        raise ValueError(f"bad cyclotomic literal: {text!r}")
    head, _, tail = s[4:-1].partition(";")
    n = int(head.strip())
    coeffs = [Fraction(tok.strip()) for tok in tail.split(",")] if tail.strip() else []
    return CycNum(n, coeffs)


def zeta(order: int, exp: int = 1) -> CycNum:
    """The root of unity e^(2*pi*i*exp/order) as an exact value."""
    e = exp % order
    table = _power_table(order)
    return CycNum(order, [Fraction(c) for c in table[e]])


@dataclass(frozen=True)
class RootOfUnity:
    """A root of unity given by its order and exponent."""

    order: int
    exp: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        object.__setattr__(self, "exp", self.exp % self.order)

    def embed(self) -> CycNum:
        return zeta(self.order, self.exp)

    def is_primitive(self) -> bool:
        return gcd(self.exp, self.order) == 1

    def effective_order(self) -> int:
        """Multiplicative order of the embedded value."""
        if self.exp == 0:
            return 1
        return self.order // gcd(self.order, self.exp)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        n = lcm(self.order, other.order)
        return RootOfUnity(n, self.exp * (n // self.order) + other.exp * (n // other.order))

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exp)

    def __str__(self):
        return f"{self.order}:{self.exp}"


def parse_rootspec(spec: str) -> RootOfUnity:
    """Parse "m:k" (e.g. "3:1" for a primitive cube root); "m" means "m:1"."""
    parts = spec.split(":")
    if len(parts) == 1:
        return RootOfUnity(int(parts[0]), 1)
    if len(parts) != 2:
        raise ValueError(f"bad root-of-unity spec: {spec!r}")
    return RootOfUnity(int(parts[0]), int(parts[1]))


ZERO = CycNum._make(1, (_ZERO,))
ONE = CycNum._make(1, (_ONE,))
