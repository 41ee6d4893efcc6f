"""Exact arithmetic in Z/p^k with valuation tracking.

Everything else in the package is built on :class:`PadicApprox`.  Precision is
carried per value; a binary operation between values of different precision
reduces to the smaller one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering

from .errors import NonOrdinaryError, PadicError
from .validation import check_precision, check_prime


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def capped_valuation(n: int, p: int, k: int) -> int:
    """Valuation of ``n`` seen as a residue mod p^k (k for zero)."""
    n %= p**k
    if n == 0:
        return k
    return vp(n, p)


@total_ordering
@dataclass(frozen=True)
class PadicApprox:
    """An element of Z/p^k.

    ``residue`` is always kept in ``[0, p^k)``.
    """

    p: int
    k: int
    residue: int

    def __post_init__(self):
        object.__setattr__(self, "residue", int(self.residue) % (self.p**self.k))

    @classmethod
    def of(cls, x, p, k):
        check_prime(p)
        check_precision(k)
        if isinstance(x, PadicApprox):
            if x.p != p:
                raise PadicError(f"prime mismatch: {x.p} != {p}")
            return cls(p, min(k, x.k), x.residue)
        return cls(p, k, x)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    @property
    def valuation(self) -> int:
        return capped_valuation(self.residue, self.p, self.k)

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def is_zero(self) -> bool:
        return self.residue == 0

    def reduce(self, k: int) -> "PadicApprox":
        """Drop to a lower precision."""
        if k > self.k:
            raise PadicError(f"cannot raise precision from {self.k} to {k}")
        return PadicApprox(self.p, k, self.residue)

    def _coerce(self, other):
        if isinstance(other, PadicApprox):
            if other.p != self.p:
                raise PadicError(f"prime mismatch: {self.p} != {other.p}")
            return min(self.k, other.k), other.residue
        if isinstance(other, int):
            return self.k, other
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return PadicApprox(self.p, c[0], self.residue + c[1])

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return PadicApprox(self.p, c[0], self.residue - c[1])

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return PadicApprox(self.p, c[0], c[1] - self.residue)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return PadicApprox(self.p, c[0], self.residue * c[1])

    __rmul__ = __mul__

    def __neg__(self):
        return PadicApprox(self.p, self.k, -self.residue)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicApprox(self.p, self.k, pow(self.residue, e, self.modulus))

    def inverse(self) -> "PadicApprox":
        if not self.is_unit():
            raise PadicError(f"{self.residue} is not a unit mod {self.p}^{self.k}")
        return PadicApprox(self.p, self.k, pow(self.residue, -1, self.modulus))

    def __truediv__(self, other):
        if isinstance(other, int):
            other = PadicApprox(self.p, self.k, other)
        if not isinstance(other, PadicApprox):
            return NotImplemented
        return self * other.inverse()

    def divide_by_p_power(self, m: int) -> "PadicApprox":
        """Exact division by p^m; the result has precision k - m."""
        if m >= self.k:
            raise PadicError("division by p^m needs k > m")
        if self.residue % self.p**m:
            raise PadicError(f"{self.residue} is not divisible by {self.p}^{m}")
        return PadicApprox(self.p, self.k - m, self.residue // self.p**m)

    def __eq__(self, other):
        if isinstance(other, PadicApprox):
            return (self.p, self.k, self.residue) == (other.p, other.k, other.residue)
        if isinstance(other, int):
            return self.residue == other % self.modulus
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, PadicApprox):
            return NotImplemented
        return (self.p, self.k, self.residue) < (other.p, other.k, other.residue)

    def __hash__(self):
        return hash((self.p, self.k, self.residue))

    def __int__(self):
        return self.residue

    def __index__(self):
        return self.residue

    def centered(self) -> int:
        """Representative in ``(-p^k/2, p^k/2]``."""
        r = self.residue
        return r - self.modulus if r > self.modulus // 2 else r

    def __repr__(self):
        return f"PadicApprox({self.residue} mod {self.p}^{self.k})"


def valuation(x: PadicApprox) -> int:
    """Valuation of ``x``, equal to ``x.k`` exactly when ``x`` is zero."""
    return x.valuation


@dataclass(frozen=True)
class UnitDecomp:
    """A unit written as Teichmüller part times principal part."""

    teich: PadicApprox
    principal: PadicApprox

    def reconstruct(self) -> PadicApprox:
        return self.teich * self.principal


def hensel_unit_root(a: PadicApprox, c: PadicApprox) -> PadicApprox:
    """Unit root of ``x^2 - a x + c`` when ``a`` is a unit and ``c`` is not.

    Iterates ``x <- a - c/x`` from ``x = a``; the map is a p-adic contraction
    so at most ``k`` steps are needed.
    """
    if a.p != c.p:
        raise PadicError("prime mismatch")
    k = min(a.k, c.k)
    a, c = a.reduce(k), c.reduce(k)
    if not a.is_unit():
        raise NonOrdinaryError(
            f"non-ordinary input: valuation(a) = {a.valuation} > 0, no unit root"
        )
    if c.is_unit():
        raise PadicError("valuation(c) = 0: both roots are units, unit root is ambiguous")
    x = a
    for _ in range(k + 2):
        nxt = a - c / x
        if nxt == x:
            break
        x = nxt
    if x * x - a * x + c != 0:
        raise PadicError("Hensel iteration did not converge")  # pragma: no cover
    return x


def teichmuller(u: PadicApprox) -> UnitDecomp:
    """Split a unit into its root-of-unity part and its principal part.

    For odd p the Teichmüller part is the fixed point of ``x -> x^p``.  For
    p = 2 the root-of-unity part is ``±1`` and the principal part lies in
    ``1 + 4Z_2``.
    """
    if not u.is_unit():
        raise PadicError(f"teichmuller needs a unit, got {u}")
    p, k = u.p, u.k
    if p == 2:
        sign = 1 if u.residue % 4 == 1 else -1
        t = PadicApprox(2, k, sign)
    else:
        t = u
        while True:
            nxt = t**p
            if nxt == t:
                break
            t = nxt
    return UnitDecomp(t, u * t.inverse())


def _is_principal(u: PadicApprox) -> bool:
    if u.p == 2:
        return (u.residue - 1) % min(4, u.modulus) == 0
    return (u.residue - 1) % u.p == 0


def plog_terms(u: PadicApprox) -> int:
    """Number of series terms :func:`plog` sums for ``u``.

    Every dropped term ``x^n/n`` with ``n`` past this count has valuation at
    least ``k``.
    """
    x = u.residue - 1
    vx = capped_valuation(x, u.p, u.k)
    if vx >= u.k:
        return 0
    last = 0
    for n in range(1, 4 * u.k + 64):
        if n * vx - vp(n, u.p) < u.k:
            last = n
    return last


def plog_slack(u: PadicApprox) -> int:
    """Digits of slack allowed when comparing truncated logarithms."""
    n = max(plog_terms(u), 1)
    d = 0
    while u.p ** (d + 1) <= n:
        d += 1
    return d


def plog(u: PadicApprox) -> PadicApprox:
    """p-adic logarithm of a principal unit, mod p^k.

    Sums ``sum (-1)^(n+1) x^n / n`` with ``x = u - 1``.  Each term is
    p-integral; the p-part of ``n`` is divided out of ``x^n`` exactly.
    """
    if not _is_principal(u):
        raise PadicError(f"plog needs a principal unit, got {u}")
    p, k = u.p, u.k
    q = p**k
    x = u.residue - 1
    total = 0
    for n in range(1, plog_terms(u) + 1):
        e = vp(n, p)
        num = x**n
        if num % p**e:
            raise PadicError("series term is not p-integral")  # pragma: no cover
        term = (num // p**e) * pow(n // p**e, -1, q)
        total += term if n % 2 else -term
    return PadicApprox(p, k, total)
