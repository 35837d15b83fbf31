"""Coefficient rings for exact homological algebra.

All linear algebra downstream (Smith forms, kernels, homology) is generic
over a small ring interface: exact arithmetic plus the Bezout data needed
for elimination over a principal ideal ring.  Three rings are provided:
the integers Z, the rationals Q, and Z/m for any modulus m >= 2.  Z/m is
a quotient of a PID, so diagonalization still works; its elements are
kept as canonical lifts in range(m) and Bezout steps are computed on the
lifts, which keeps every 2x2 transform invertible mod m.
"""

from fractions import Fraction
from math import gcd


def xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class Ring:
    """Interface shared by the concrete coefficient rings."""

    name = "?"
    is_field = False

    def el(self, x):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def is_zero(self, a):
        raise NotImplementedError

    def is_unit(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def divides(self, a, b):
        """Whether a | b in the ring."""
        raise NotImplementedError

    def div(self, b, a):
        """Some q with q*a = b; only valid when divides(a, b)."""
        raise NotImplementedError

    def bezout(self, a, b):
        """(g, s, t, u, v) with s*a + t*b = g, u*a + v*b = 0, s*v - t*u a unit.

        g generates the ideal (a, b); the 2x2 matrix [[s, t], [u, v]] is
        invertible over the ring.
        """
        raise NotImplementedError

    def canonical_unit(self, a):
        """A unit u such that u*a is the canonical associate of a."""
        raise NotImplementedError

    def size(self, a):
        """Pivot-quality measure for nonzero a; smaller is better, units give 1."""
        raise NotImplementedError

    def __repr__(self):
        return self.name


class IntegerRing(Ring):
    name = "Z"
    zero = 0
    one = 1

    def el(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a == 1 or a == -1

    def inv(self, a):
        if a == 1 or a == -1:
            return a
        raise ZeroDivisionError(f"{a} is not a unit in Z")

    def divides(self, a, b):
        if a == 0:
            return b == 0
        return b % a == 0

    def div(self, b, a):
        return b // a

    def bezout(self, a, b):
        g, s, t = xgcd(a, b)
        if g == 0:
            return 0, 1, 0, 0, 1
        return g, s, t, -(b // g), a // g

    def canonical_unit(self, a):
        return -1 if a < 0 else 1

    def size(self, a):
        return abs(a)


class RationalField(Ring):
    name = "Q"
    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def el(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        return 1 / a

    def divides(self, a, b):
        return a != 0 or b == 0

    def div(self, b, a):
        return b / a

    def bezout(self, a, b):
        if a != 0:
            return a, self.one, self.zero, -b / a, self.one
        if b != 0:
            return b, self.zero, self.one, self.one, self.zero
        return self.zero, self.one, self.zero, self.zero, self.one

    def canonical_unit(self, a):
        return 1 / a if a else self.one

    def size(self, a):
        return 1


def _is_prime(m):
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


class ZmodRing(Ring):
    """Z/m with elements stored as ints in range(m)."""

    def __init__(self, m):
        if m < 2:
            raise ValueError("modulus must be >= 2")
        self.m = m
        self.name = f"Z/{m}"
        self.is_field = _is_prime(m)
        self.zero = 0
        self.one = 1 % m

    def el(self, x):
        if isinstance(x, Fraction):
            num, den = x.numerator, x.denominator
            if gcd(den, self.m) != 1:
                raise ZeroDivisionError(f"denominator {den} not invertible mod {self.m}")
            return num * pow(den, -1, self.m) % self.m
        return int(x) % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def neg(self, a):
        return -a % self.m

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return gcd(a, self.m) == 1

    def inv(self, a):
        return pow(a, -1, self.m)

    def divides(self, a, b):
        return b % gcd(a, self.m) == 0

    def div(self, b, a):
        g = gcd(a, self.m)
        if b % g:
            raise ZeroDivisionError(f"{a} does not divide {b} mod {self.m}")
        mg = self.m // g
        if mg == 1:
            return 0
        return (b // g) * pow(a // g, -1, mg) % mg

    def bezout(self, a, b):
        g, s, t = xgcd(a, b)
        if g == 0:
            return 0, 1, 0, 0, 1
        m = self.m
        return g % m, s % m, t % m, -(b // g) % m, (a // g) % m

    def canonical_unit(self, a):
        # unit u with u*a == gcd(a, m) mod m
        if a == 0:
            return 1 % self.m
        m = self.m
        g = gcd(a, m)
        mg = m // g
        if mg == 1:
            return 1 % m
        u0 = pow(a // g, -1, mg)
        u = u0
        while gcd(u, m) != 1:
            u += mg
        return u % m

    def size(self, a):
        return gcd(a, self.m)


ZZ = IntegerRing()
QQ = RationalField()

_zmod_cache = {}


def Zmod(m):
    ring = _zmod_cache.get(m)
    if ring is None:
        ring = _zmod_cache[m] = ZmodRing(m)
    return ring


def ring_by_name(name):
    """Parse a coefficient-ring name: 'Z', 'Q', or 'Zmod:<m>'."""
    if name == "Z":
        return ZZ
    if name == "Q":
        return QQ
    if name.startswith("Zmod:"):
        try:
            m = int(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad modulus in {name!r}") from None
        return Zmod(m)
    raise ValueError(f"unknown coefficient ring {name!r} (expected Z, Q, or Zmod:<m>)")
