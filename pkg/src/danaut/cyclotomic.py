"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) of
Q[z]/(Phi_N(z)), with Fraction coordinates.  An element of order N embeds
losslessly into any order N' with N | N'.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Union


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    result = n
    p, m = 2, n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _int_poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Long division of coefficient lists (low to high); den monic."""
    num = list(num)
    dn = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * max(len(num) - dn, 0)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        quot[i - dn] = c
        for j, d in enumerate(den):
            num[i - dn + j] -= c * d
    while num and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients of Phi_n, low to high, monic with integer entries."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return (-1, 1)
    # (z^n - 1) / prod of Phi_d over proper divisors d
    coeffs = [0] * (n + 1)
    coeffs[0] = -1
    coeffs[n] = 1
    for d in range(1, n):
        if n % d == 0:
            coeffs, rem = _int_poly_divmod(coeffs, list(cyclotomic_polynomial(d)))
            if rem:
                raise AssertionError("cyclotomic recursion left a remainder")
    return tuple(coeffs)


def _reduce_mod_phi(coeffs: list, n: int) -> list:
    """Remainder of a Fraction coefficient list modulo Phi_n, padded to phi(n)."""
    phi = euler_phi(n)
    phin = cyclotomic_polynomial(n)
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, phi - 1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        coeffs[i] = Fraction(0)
        for j in range(phi):
            coeffs[i - phi + j] -= c * phin[j]
    coeffs = coeffs[:phi]
    coeffs += [Fraction(0)] * (phi - len(coeffs))
    return coeffs


@lru_cache(maxsize=None)
def _zeta_power_coords(n: int, e: int) -> tuple:
    e %= n
    phi = euler_phi(n)
    if e < phi:
        vec = [Fraction(0)] * phi
        vec[e] = Fraction(1)
        return tuple(vec)
    return tuple(_reduce_mod_phi([Fraction(0)] * e + [Fraction(1)], n))


class CycElem:
    """An element of Q(zeta_N) in the power basis modulo Phi_N."""

    __slots__ = ("order", "coords")

    def __init__(self, order: int, coords) -> None:
        phi = euler_phi(order)
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != phi:
            raise ValueError(f"need {phi} coordinates for order {order}")
        self.order = order
        self.coords = coords

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(q) -> "CycElem":
        return CycElem(1, (Fraction(q),))

    # -- predicates and conversions -----------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def lift(self, new_order: int) -> "CycElem":
        """Embed into Q(zeta_M) for a multiple M of the current order."""
        if new_order % self.order != 0:
            raise ValueError("can only lift to a multiple of the order")
        if new_order == self.order:
            return self
        step = new_order // self.order
        phi = euler_phi(new_order)
        out = [Fraction(0)] * phi
        for j, c in enumerate(self.coords):
            if c == 0:
                continue
            vec = _zeta_power_coords(new_order, j * step)
            for k, v in enumerate(vec):
                if v:
                    out[k] += c * v
        return CycElem(new_order, out)

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _pair(a: "CycElem", b: "CycElem") -> tuple:
        if a.order == b.order:
            return a, b
        m = a.order * b.order // gcd(a.order, b.order)
        return a.lift(m), b.lift(m)

    def __add__(self, other):
        other = _as_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = CycElem._pair(self, other)
        return CycElem(a.order, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.order, tuple(-c for c in self.coords))

    def __sub__(self, other):
        other = _as_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = CycElem._pair(self, other)
        n = a.order
        prod = [Fraction(0)] * (2 * len(a.coords) - 1)
        for i, x in enumerate(a.coords):
            if x == 0:
                continue
            for j, y in enumerate(b.coords):
                if y:
                    prod[i + j] += x * y
        return CycElem(n, _reduce_mod_phi(prod, n))

    __rmul__ = __mul__

    def inverse(self) -> "CycElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        if self.is_rational():
            return CycElem(self.order, (1 / self.coords[0],) + self.coords[1:])
        phin = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        g, s, _ = _poly_ext_gcd(list(self.coords), phin)
        if len(g) != 1:
            raise AssertionError("representative not coprime to Phi_N")
        inv = [c / g[0] for c in s]
        return CycElem(self.order, _reduce_mod_phi(inv, self.order))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycElem.from_rational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, CycElem):
            return NotImplemented
        a, b = CycElem._pair(self, other)
        return a.coords == b.coords

    __hash__ = None

    # -- presentation ---------------------------------------------------

    def as_root_power(self) -> Optional[tuple]:
        """Return (r, a) with self = r * zeta_order^a, if of that shape."""
        n = self.order
        for a in range(n):
            w = zeta(n, a)
            if w.order != n:
                w = w.lift(n)
            nz = [(i, c) for i, c in enumerate(w.coords) if c != 0]
            if not nz:
                continue
            i0, c0 = nz[0]
            if self.coords[i0] == 0:
                continue
            r = self.coords[i0] / c0
            cand = tuple(r * c for c in w.coords)
            if cand == self.coords:
                return r, a
        return None

    def __repr__(self):
        if self.is_rational():
            return f"CycElem({self.coords[0]})"
        rp = self.as_root_power()
        if rp is not None:
            r, a = rp
            mult = "" if r == 1 else f"{r}*"
            return f"CycElem({mult}zeta{self.order}^{a})"
        return f"CycElem(order={self.order}, coords={self.coords})"


def _as_cyc(x) -> Union["CycElem", type(NotImplemented)]:
    if isinstance(x, CycElem):
        return x
    if isinstance(x, (int, Fraction)):
        return CycElem.from_rational(x)
    return NotImplemented


def _poly_ext_gcd(a: list, b: list) -> tuple:
    """Extended Euclid over Q[x] on coefficient lists; returns (g, s, t)."""

    def norm(p):
        p = list(p)
        while p and p[-1] == 0:
            p.pop()
        return p

    def divmod_q(num, den):
        num, den = list(num), norm(den)
        lead = den[-1]
        dn = len(den) - 1
        quot = [Fraction(0)] * max(len(num) - dn, 0)
        for i in range(len(num) - 1, dn - 1, -1):
            c = num[i] / lead
            if c == 0:
                continue
            quot[i - dn] = c
            for j, d in enumerate(den):
                num[i - dn + j] -= c * d
        return quot, norm(num)

    def sub(p, q):
        out = [Fraction(0)] * max(len(p), len(q))
        for i, c in enumerate(p):
            out[i] += c
        for i, c in enumerate(q):
            out[i] -= c
        return norm(out)

    def mul(p, q):
        if not p or not q:
            return []
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            if x == 0:
                continue
            for j, y in enumerate(q):
                out[i + j] += x * y
        return norm(out)

    r0, r1 = norm(a), norm(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = divmod_q(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    return r0, s0, t0


def zeta(n: int, a: int = 1) -> CycElem:
    """The root of unity zeta_n^a."""
    if n < 1:
        raise ValueError("order must be positive")
    return CycElem(n, _zeta_power_coords(n, a))


def _integer_nth_root(x: int, n: int) -> Optional[int]:
    if x == 0:
        return 0
    neg = x < 0
    if neg and n % 2 == 0:
        return None
    ax = abs(x)
    r = round(ax ** (1.0 / n))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**n == ax:
            return -cand if neg else cand
    return None


def rational_nth_root(c: Fraction, n: int) -> Optional[Fraction]:
    """Exact n-th root of a rational, or None."""
    c = Fraction(c)
    num = _integer_nth_root(c.numerator, n)
    den = _integer_nth_root(c.denominator, n)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def cyc_root_of_unity(c, n: int):
    """A w with w^n = c, for c in {1, -1} or c an exact rational n-th power.

    Returns a Fraction or CycElem, or None when the restricted repertoire
    (roots of +-1 and rational radicals) does not contain a root.
    """
    if n < 1:
        raise ValueError("root index must be positive")
    c = Fraction(c)
    if c == 1:
        return Fraction(1) if n == 1 else zeta(n)
    if c == -1:
        return Fraction(-1) if n == 1 else zeta(2 * n, 1)
    return rational_nth_root(c, n)


def all_nth_roots(c, n: int) -> Optional[list]:
    """The full set of n-th roots of c reachable from cyc_root_of_unity."""
    w = cyc_root_of_unity(c, n)
    if w is None:
        return None
    roots = []
    for j in range(n):
        roots.append(canonical_scalar(_as_cyc(w) * zeta(n, j)))
    return roots


# -- scalar protocol: Fraction | CycElem ------------------------------


def canonical_scalar(x):
    """Demote rational-valued cyclotomic elements to Fraction."""
    if isinstance(x, CycElem):
        if x.is_rational():
            return x.coords[0]
        return x
    return Fraction(x)


def s_add(a, b):
    if isinstance(a, CycElem) or isinstance(b, CycElem):
        return canonical_scalar(_as_cyc(a) + _as_cyc(b))
    return a + b


def s_mul(a, b):
    if isinstance(a, CycElem) or isinstance(b, CycElem):
        return canonical_scalar(_as_cyc(a) * _as_cyc(b))
    return a * b


def s_neg(a):
    return -a


def s_inv(a):
    if isinstance(a, CycElem):
        return canonical_scalar(a.inverse())
    return 1 / Fraction(a)


def s_pow(a, e: int):
    if isinstance(a, CycElem):
        return canonical_scalar(a**e)
    return Fraction(a) ** e


def s_eq(a, b) -> bool:
    if isinstance(a, CycElem) or isinstance(b, CycElem):
        return _as_cyc(a) == _as_cyc(b)
    return Fraction(a) == Fraction(b)


def s_is_zero(a) -> bool:
    if isinstance(a, CycElem):
        return a.is_zero()
    return a == 0
