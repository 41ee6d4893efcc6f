"""Locally constant functions on Z_p, Z_p^x and Q_p^x at finite precision.

A :class:`KirillovFn` is a function on Q_p^x stored as explicit valuation
shells (each a locally constant function of the unit part) together with a
finite list of :class:`CharTail` terms that describe it near 0.  The tail
list is the germ at 0, which is what :func:`fiber_at_zero` returns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, gcd
from typing import Callable

import numpy as np
from sympy.ntheory import primitive_root

from .errors import PadicError, PrecisionError, TailError
from .padic import PadicApprox, capped_valuation, plog, teichmuller

ZP = "Zp"
UNITS = "ZpUnits"


@lru_cache(maxsize=None)
def unit_residues(p: int, m: int) -> tuple:
    """Representatives of (Z/p^m)^x in increasing order (``(1,)`` for m = 0)."""
    if m == 0:
        return (1,)
    return tuple(u for u in range(p**m) if u % p)


@lru_cache(maxsize=None)
def _unit_index(p: int, m: int) -> dict:
    return {u: i for i, u in enumerate(unit_residues(p, m))}


@lru_cache(maxsize=None)
def unit_generators(p: int, m: int) -> tuple:
    """Generators ``g_i`` with orders ``n_i`` such that (Z/p^m)^x = prod <g_i>."""
    if m == 0 or (p == 2 and m == 1):
        return ()
    if p == 2:
        if m == 2:
            return ((3, 2),)
        return ((2**m - 1, 2), (5, 2 ** (m - 2)))
    return ((int(primitive_root(p**m)), (p - 1) * p ** (m - 1)),)


def split_unit(x: int, p: int) -> tuple[int, int]:
    """Write a nonzero integer as ``p^v * u``; returns ``(v, u)``."""
    if x == 0:
        raise ValueError("0 has no valuation/unit decomposition")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


@dataclass(frozen=True)
class LocConstFn:
    """Function on Z_p (or Z_p^x) constant on cosets of p^m Z_p.

    For the ``Zp`` domain the table has ``p^m`` entries indexed by residue.
    For ``ZpUnits`` it has one entry per unit residue, in the order of
    :func:`unit_residues`.  ``outside`` is the value taken on Q_p minus Z_p
    when the function is used on Q_p^x (``Zp`` domain only).
    """

    p: int
    k: int
    m: int
    table: tuple
    domain: str = ZP
    outside: int = 0

    def __post_init__(self):
        q = self.p**self.k
        object.__setattr__(self, "table", tuple(int(x) % q for x in self.table))
        object.__setattr__(self, "outside", int(self.outside) % q)
        if self.domain not in (ZP, UNITS):
            raise ValueError(f"unknown domain {self.domain!r}")
        expected = self.p**self.m if self.domain == ZP else len(unit_residues(self.p, self.m))
        if len(self.table) != expected:
            raise ValueError(
                f"table length {len(self.table)} does not match domain size {expected}"
            )

    @classmethod
    def from_callable(cls, p, k, m, func: Callable[[int], int], domain=ZP, outside=0):
        pts = range(p**m) if domain == ZP else unit_residues(p, m)
        return cls(p, k, m, tuple(func(x) for x in pts), domain, outside)

    @classmethod
    def constant(cls, p, k, c, domain=ZP):
        return cls(p, k, 0, (c,), domain, outside=c if domain == ZP else 0)

    @classmethod
    def coordinate(cls, p, k):
        """The function ``z -> z mod p^k`` (level k)."""
        return cls.from_callable(p, k, k, lambda x: x)

    @property
    def modulus(self):
        return self.p**self.k

    def __call__(self, x: int) -> int:
        if self.m == 0:
            if self.domain == UNITS and x % self.p == 0:
                raise ValueError(f"{x} is not a unit")
            return self.table[0]
        r = x % self.p**self.m
        if self.domain == ZP:
            return self.table[r]
        try:
            return self.table[_unit_index(self.p, self.m)[r]]
        except KeyError:
            raise ValueError(f"{x} is not a unit") from None

    def points(self):
        return range(self.p**self.m) if self.domain == ZP else unit_residues(self.p, self.m)

    def items(self):
        return zip(self.points(), self.table)

    def refine(self, m: int) -> "LocConstFn":
        if m < self.m:
            raise ValueError("cannot coarsen a function's level")
        if m == self.m:
            return self
        return LocConstFn.from_callable(self.p, self.k, m, self, self.domain, self.outside)

    def _common(self, other):
        if (self.p, self.domain) != (other.p, other.domain):
            raise PadicError("functions live on different spaces")
        m = max(self.m, other.m)
        k = min(self.k, other.k)
        a, b = self.refine(m), other.refine(m)
        return a, b, m, k

    def __add__(self, other):
        a, b, m, k = self._common(other)
        return LocConstFn(self.p, k, m, [x + y for x, y in zip(a.table, b.table)], self.domain,
                          a.outside + b.outside)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        a, b, m, k = self._common(other)
        return LocConstFn(self.p, k, m, [x * y for x, y in zip(a.table, b.table)], self.domain,
                          a.outside * b.outside)

    __rmul__ = __mul__

    def scale(self, c: int) -> "LocConstFn":
        return LocConstFn(self.p, self.k, self.m, [c * x for x in self.table], self.domain,
                          c * self.outside)

    def extend_by_zero(self) -> "LocConstFn":
        """A ``ZpUnits`` function viewed on Z_p, zero on pZ_p."""
        if self.domain == ZP:
            return self
        m = max(self.m, 1)
        f = self.refine(m)
        return LocConstFn.from_callable(self.p, self.k, m, lambda x: f(x) if x % self.p else 0)

    def restrict_to_units(self) -> "LocConstFn":
        if self.domain == UNITS:
            return self
        return LocConstFn.from_callable(self.p, self.k, self.m, self, UNITS)

    def is_zero(self) -> bool:
        return not any(self.table)

    def __eq__(self, other):
        if not isinstance(other, LocConstFn):
            return NotImplemented
        if (self.p, self.k, self.domain, self.outside) != (other.p, other.k, other.domain, other.outside):
            return False
        m = max(self.m, other.m)
        return self.refine(m).table == other.refine(m).table

    def __hash__(self):
        return hash((self.p, self.k, self.domain, self.outside))


def indicator(a: int, m: int, p: int, k: int) -> LocConstFn:
    """The indicator function of ``a + p^m Z_p``."""
    r = a % p**m
    return LocConstFn.from_callable(p, k, m, lambda x: 1 if x == r else 0)


def mahler_coeffs(f: LocConstFn, count: int | None = None) -> list[int]:
    """Mahler coefficients ``c_n = sum_j (-1)^(n-j) C(n, j) f(j)`` mod p^k.

    For a function of level m the coefficients with ``n >= p^m k`` vanish
    mod p^k (the p^m-fold difference of a level-m function is divisible by
    p), which is the default ``count``.  ``c_n`` is the n-th forward
    difference at 0, computed by repeated differencing.
    """
    f = f.extend_by_zero()
    if count is None:
        count = f.p**f.m * f.k
    q = f.modulus
    dtype = np.int64 if q < 2**62 else object
    vals = np.array([f(j) for j in range(count)], dtype=dtype)
    out = []
    for _ in range(count):
        out.append(int(vals[0]) % q)
        vals = np.diff(vals) % q
    return out


def mahler_eval(coeffs, x: int, p: int, k: int) -> int:
    """``sum c_n C(x, n)`` mod p^k for the non-negative lift ``x``."""
    if x < 0:
        raise ValueError("use a non-negative lift")
    q = p**k
    return sum(int(c) * comb(x, n) for n, c in enumerate(coeffs) if n <= x) % q


def mahler_values(coeffs, p: int, k: int, m: int) -> list[int]:
    """``mahler_eval`` at every ``x`` in ``[0, p^m)``, via Pascal's rule mod p^k."""
    q = p**k
    size = p**m
    c = np.zeros(size, dtype=object)
    c[: min(size, len(coeffs))] = [int(x) % q for x in coeffs[:size]]
    row = np.zeros(size, dtype=object)
    row[0] = 1
    out = []
    for _ in range(size):
        out.append(int(np.dot(row, c)) % q)
        nxt = row.copy()
        nxt[1:] = (row[1:] + row[:-1]) % q
        row = nxt
    return out


def min_valuation(values, p: int, k: int) -> int:
    return min((capped_valuation(int(v), p, k) for v in values), default=k)


# --- characters --------------------------------------------------------------


@dataclass(frozen=True)
class SmoothChar:
    """Character of Q_p^x trivial on 1 + p^m Z_p.

    ``table`` holds the values on (Z/p^m)^x in :func:`unit_residues` order;
    ``value_at_p`` is the value on the uniformizer p, i.e. the geometric
    Frobenius eigenvalue, and may be a non-unit.
    """

    p: int
    k: int
    m: int
    table: tuple
    value_at_p: int

    def __post_init__(self):
        q = self.p**self.k
        object.__setattr__(self, "table", tuple(int(x) % q for x in self.table))
        object.__setattr__(self, "value_at_p", int(self.value_at_p) % q)
        if len(self.table) != len(unit_residues(self.p, self.m)):
            raise ValueError("character table has the wrong length")
        if self.unit_value(1) != 1 % q:
            raise ValueError("a character must send 1 to 1")
        if not self._respects_generators():
            raise ValueError("table is not multiplicative on (Z/p^m)^x")

    def _respects_generators(self) -> bool:
        p, m, q = self.p, self.m, self.p**self.k
        gens = unit_generators(p, m)
        if not gens:
            return True
        vals = [self.unit_value(g) for g, _ in gens]
        for (g, n), val in zip(gens, vals):
            if pow(val, n, q) != 1 % q:
                return False
        # walk the product of cyclic groups
        mod = p**m
        expected = {1 % mod: 1 % q}
        for (g, n), val in zip(gens, vals):
            nxt = {}
            for u, w in expected.items():
                gu, gw = u, w
                for _ in range(n):
                    nxt[gu] = gw
                    gu, gw = gu * g % mod, gw * val % q
            expected = nxt
        return all(self.unit_value(u) == w for u, w in expected.items())

    @classmethod
    def trivial(cls, p, k):
        return cls(p, k, 0, (1,), 1)

    @classmethod
    def unramified(cls, p, k, value_at_p):
        return cls(p, k, 0, (1,), value_at_p)

    @classmethod
    def from_generator_values(cls, p, k, m, values, value_at_p):
        """Character determined by its values on :func:`unit_generators`."""
        q = p**k
        gens = unit_generators(p, m)
        if len(values) != len(gens):
            raise ValueError(f"need {len(gens)} generator values")
        if m == 0:
            return cls(p, k, 0, (1,), value_at_p)
        mod = p**m
        table = {1: 1}
        for (g, n), val in zip(gens, values):
            nxt = {}
            for u, w in table.items():
                gu, gw = u, w
                for _ in range(n):
                    nxt[gu] = gw
                    gu, gw = gu * g % mod, gw * val % q
            table = nxt
        return cls(p, k, m, tuple(table[u] for u in unit_residues(p, m)), value_at_p)

    @classmethod
    def teichmuller_character(cls, p, k, power=1, value_at_p=1):
        """``omega^power``, with omega the Teichmüller character."""
        m = 2 if p == 2 else 1
        tab = []
        for u in unit_residues(p, m):
            t = teichmuller(PadicApprox(p, k, u)).teich
            tab.append(pow(t.residue, power % max(p - 1, 2), p**k) if p != 2 else pow(t.residue, power, p**k))
        return cls(p, k, m, tuple(tab), value_at_p)

    @classmethod
    def random(cls, p, k, m, rng, unit_at_p=True):
        """A random character of conductor dividing p^m with values mod p^k."""
        q = p**k
        values = [_random_root_of_unity(p, k, n, rng) for _, n in unit_generators(p, m)]
        a = rng.randrange(q)
        while unit_at_p and a % p == 0:
            a = rng.randrange(q)
        return cls.from_generator_values(p, k, m, values, a)

    @property
    def modulus(self):
        return self.p**self.k

    @property
    def valuation_at_p(self) -> int:
        return capped_valuation(self.value_at_p, self.p, self.k)

    def is_unramified(self) -> bool:
        return all(v == 1 for v in self.table)

    def unit_value(self, u: int) -> int:
        if u % self.p == 0:
            raise ValueError(f"{u} is not a unit")
        if self.m == 0:
            return self.table[0]
        return self.table[_unit_index(self.p, self.m)[u % self.p**self.m]]

    def unit_fn(self) -> LocConstFn:
        return LocConstFn(self.p, self.k, self.m, self.table, UNITS)

    def __mul__(self, other: "SmoothChar") -> "SmoothChar":
        m = max(self.m, other.m)
        k = min(self.k, other.k)
        tab = [self.unit_value(u) * other.unit_value(u) for u in unit_residues(self.p, m)]
        return SmoothChar(self.p, k, m, tab, self.value_at_p * other.value_at_p)

    def minimal(self) -> "SmoothChar":
        """Same character stored at its exact conductor exponent."""
        if self.m == 0:
            return self
        for m in range(self.m + 1):
            mod = self.p**m
            if all(
                self.unit_value(u) == 1
                for u in unit_residues(self.p, self.m)
                if m == 0 or u % mod == 1 % mod
            ):
                tab = [self.unit_value(u) for u in unit_residues(self.p, m)] if m else [1]
                return SmoothChar(self.p, self.k, m, tab, self.value_at_p)
        return self  # pragma: no cover

    def key(self):
        c = self.minimal()
        return (c.m, c.table, c.value_at_p, c.k)

    def __eq__(self, other):
        if not isinstance(other, SmoothChar):
            return NotImplemented
        return self.p == other.p and self.key() == other.key()

    def __hash__(self):
        return hash((self.p,) + self.key())


def _random_root_of_unity(p, k, n, rng) -> int:
    """Uniform element x of (Z/p^k)^x with x^n = 1."""
    q = p**k
    if p == 2 and k >= 3:
        # (Z/2^k)^x = {+-1} x <5>, with 5 of order 2^(k-2); n is even here
        d = gcd(2 ** (k - 2), n)
        x = pow(5, (2 ** (k - 2) // d) * rng.randrange(d), q)
        return x if rng.random() < 0.5 else q - x
    order = (p - 1) * p ** (k - 1)
    d = gcd(order, n)
    return pow(int(primitive_root(q)), (order // d) * rng.randrange(d), q)


def char_eval(chi: SmoothChar, x: tuple[int, int]) -> int:
    """``chi(p^v u) = chi(p)^v * chi(u)`` mod p^k."""
    v, u = x
    q = chi.modulus
    if v < 0:
        if chi.value_at_p % chi.p == 0:
            raise PrecisionError("insufficient precision for negative valuation")
        base = pow(chi.value_at_p, -1, q)
        return pow(base, -v, q) * chi.unit_value(u) % q
    return pow(chi.value_at_p, v, q) * chi.unit_value(u) % q


@dataclass(frozen=True)
class CharTail:
    """The function ``coefficient * chi(p)^v v^a chi(zeta) chi(t) log(t)^b``."""

    chi: SmoothChar
    a: int = 0
    b: int = 0
    coefficient: int = 1

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("a and b must be non-negative")
        object.__setattr__(self, "coefficient", int(self.coefficient) % self.chi.modulus)

    @property
    def p(self):
        return self.chi.p

    @property
    def k(self):
        return self.chi.k

    def family(self):
        return (self.chi.key(), self.a, self.b)

    def with_coefficient(self, c):
        return CharTail(self.chi, self.a, self.b, c)

    def level(self) -> int:
        """Level on the unit part at which this tail is locally constant mod p^k."""
        if self.b == 0:
            return self.chi.m
        return max(self.chi.m, self.k, 1)

    def __call__(self, x):
        return chi_ab_eval(self, x)


def chi_ab_eval(tail: CharTail, x: tuple[int, int]) -> int:
    """Evaluate a character tail at ``p^v u``."""
    p = tail.p
    if p == 2:
        raise NotImplementedError("chi_{a,b} is unsupported for p = 2")
    v, u = x
    q = tail.chi.modulus
    val = tail.coefficient * char_eval(tail.chi, (v, u)) % q
    if tail.a:
        val = val * pow(v, tail.a) % q
    if tail.b:
        t = teichmuller(PadicApprox(p, tail.k, u)).principal
        val = val * pow(plog(t).residue, tail.b, q) % q
    return val


def normalize_tails(tails) -> tuple:
    """Merge equal families, drop zero coefficients, sort canonically."""
    acc: dict = {}
    reps: dict = {}
    for t in tails:
        key = t.family()
        acc[key] = (acc.get(key, 0) + t.coefficient) % t.chi.modulus
        reps.setdefault(key, t)
    out = [reps[key].with_coefficient(c) for key, c in acc.items() if c]
    return tuple(sorted(out, key=lambda t: t.family()))


# --- Kirillov functions ------------------------------------------------------


@dataclass(frozen=True)
class KirillovFn:
    """Function on Q_p^x given by explicit shells plus a character tail.

    The function vanishes for valuation below ``-M``; for ``-M <= v <=
    v_cut`` it is ``shells[v]`` (a ``ZpUnits`` function, missing means
    zero); for ``v > v_cut`` it is the sum of the tail terms.
    """

    p: int
    k: int
    M: int
    v_cut: int
    shells: tuple = field(default=())
    tail: tuple = field(default=())

    def __post_init__(self):
        shells = []
        for v, fn in sorted(dict(self.shells).items()):
            if fn.domain != UNITS:
                fn = fn.restrict_to_units()
            if (fn.p, fn.k) != (self.p, self.k):
                raise PadicError("shell (p, k) mismatch")
            if v < -self.M or v > self.v_cut:
                raise TailError(f"shell at v={v} outside [-M, v_cut] = [{-self.M}, {self.v_cut}]")
            if not fn.is_zero():
                shells.append((v, fn))
        object.__setattr__(self, "shells", tuple(shells))
        for t in self.tail:
            if (t.p, t.k) != (self.p, self.k):
                raise PadicError("tail (p, k) mismatch")
        object.__setattr__(self, "tail", normalize_tails(self.tail))

    @classmethod
    def build(cls, p, k, shells=None, tail=(), v_cut=None, M=0):
        """Construct, reconciling any shells given past ``v_cut`` with the tail.

        Shells supplied at ``v > v_cut`` must agree with the tail there (a
        three-shell overlap window at least is checked); disagreement is a
        :class:`TailError`.
        """
        shells = dict(shells or {})
        if v_cut is None:
            v_cut = max(shells, default=-1)
        tail = normalize_tails(tail)
        probe = cls(p, k, M, v_cut, {v: f for v, f in shells.items() if v <= v_cut}, tail)
        extra = {v: f for v, f in shells.items() if v > v_cut}
        window = set(range(v_cut + 1, v_cut + 4)) | set(extra)
        for v in sorted(window):
            if v in extra:
                given = extra[v].restrict_to_units()
                want = probe.shell(v)
                m = max(given.m, want.m)
                if given.refine(m).table != want.refine(m).table:
                    raise TailError(f"shell at v={v} disagrees with the tail")
        return probe

    @classmethod
    def from_tail(cls, chi: SmoothChar, a=0, b=0, coefficient=1):
        """``1_{Z_p} * coefficient * chi_{a,b}``."""
        return cls(chi.p, chi.k, 0, -1, (), (CharTail(chi, a, b, coefficient),))

    @classmethod
    def compact(cls, p, k, shells: dict):
        """An element of the compactly supported (smooth) part."""
        if not shells:
            return cls(p, k, 0, -1)
        return cls(p, k, max(0, -min(shells)), max(shells), tuple(shells.items()), ())

    @property
    def modulus(self):
        return self.p**self.k

    def shell(self, v: int) -> LocConstFn:
        """Restriction to ``p^v Z_p^x`` as a function of the unit part."""
        if v < -self.M:
            return LocConstFn.constant(self.p, self.k, 0, UNITS)
        if v <= self.v_cut:
            return dict(self.shells).get(v, LocConstFn.constant(self.p, self.k, 0, UNITS))
        if not self.tail:
            return LocConstFn.constant(self.p, self.k, 0, UNITS)
        m = max(t.level() for t in self.tail)
        return LocConstFn.from_callable(
            self.p, self.k, m, lambda u: sum(chi_ab_eval(t, (v, u)) for t in self.tail), UNITS
        )

    def __call__(self, x):
        v, u = x
        if v < -self.M:
            return 0
        if v <= self.v_cut:
            s = dict(self.shells).get(v)
            return 0 if s is None else s(u)
        return sum(chi_ab_eval(t, (v, u)) for t in self.tail) % self.modulus

    def expand_to(self, v_cut: int) -> "KirillovFn":
        """Same function with the explicit window pushed out to ``v_cut``."""
        if v_cut <= self.v_cut:
            return self
        shells = dict(self.shells)
        for v in range(self.v_cut + 1, v_cut + 1):
            shells[v] = self.shell(v)
        return KirillovFn(self.p, self.k, self.M, v_cut, tuple(shells.items()), self.tail)

    def _aligned(self, other):
        if (self.p, self.k) != (other.p, other.k):
            raise PadicError("KirillovFn (p, k) mismatch")
        vc = max(self.v_cut, other.v_cut)
        return self.expand_to(vc), other.expand_to(vc), vc

    def __add__(self, other):
        a, b, vc = self._aligned(other)
        M = max(a.M, b.M)
        sa, sb = dict(a.shells), dict(b.shells)
        shells = {}
        for v in set(sa) | set(sb):
            if v in sa and v in sb:
                shells[v] = sa[v] + sb[v]
            else:
                shells[v] = sa.get(v) or sb.get(v)
        return KirillovFn(self.p, self.k, M, vc, tuple(shells.items()), a.tail + b.tail)

    def scale(self, c: int) -> "KirillovFn":
        return KirillovFn(
            self.p, self.k, self.M, self.v_cut,
            tuple((v, f.scale(c)) for v, f in self.shells),
            tuple(t.with_coefficient(t.coefficient * c) for t in self.tail),
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self) -> bool:
        return not self.shells and not self.tail

    def __eq__(self, other):
        if not isinstance(other, KirillovFn):
            return NotImplemented
        try:
            return (self - other).is_zero()
        except PadicError:
            return False

    def __hash__(self):
        return hash((self.p, self.k, tuple(t.family() for t in self.tail)))


def fn_mul_action(f: LocConstFn, g):
    """Multiply ``g`` pointwise by the function ``f`` on Z_p.

    ``f`` acts on Q_p^x through its Z_p values and takes the value
    ``f.outside`` off Z_p.  Because ``f`` has finite level m, it is constant
    (equal to ``f(0)``) on ``p^m Z_p``; the explicit window is pushed out to
    ``m - 1`` and tails are scaled by ``f(0)``.  Objects other than
    :class:`KirillovFn` (e.g. total q-expansion coefficient maps) are handed
    their own ``mul_function`` method.
    """
    if not isinstance(g, KirillovFn):
        return g.mul_function(f)
    f = f.extend_by_zero()
    if (f.p, f.k) != (g.p, g.k):
        if f.p != g.p or f.k < g.k:
            raise PadicError("fn_mul_action needs matching (p, k)")
        f = LocConstFn(f.p, g.k, f.m, f.table, f.domain, f.outside)
    h = g.expand_to(max(g.v_cut, f.m - 1))
    p, k = g.p, g.k
    shells = {}
    for v, s in h.shells:
        if v < 0:
            shells[v] = s.scale(f.outside)
            continue
        level = max(f.m - v, 0)
        fv = LocConstFn.from_callable(p, k, level, lambda u, v=v: f(p**v * u), UNITS)
        shells[v] = s * fv
    c0 = f(0)
    tail = tuple(t.with_coefficient(t.coefficient * c0) for t in h.tail)
    if any(t.coefficient for t in h.tail) and any(
        f(p**v) != c0 for v in range(h.v_cut + 1, h.v_cut + 2)
    ):
        raise TailError("tail not representable")  # pragma: no cover
    return KirillovFn(p, k, h.M, h.v_cut, tuple(shells.items()), tail)


def fiber_at_zero(g: KirillovFn) -> tuple:
    """The germ of ``g`` at 0, i.e. its normalized tail list."""
    return normalize_tails(g.tail)


def _shift_tail(t: CharTail, shift: int) -> list:
    """Tails of ``v -> t(v + shift)``; needs chi(p) invertible when shift < 0."""
    q = t.chi.modulus
    if shift >= 0:
        factor = pow(t.chi.value_at_p, shift, q)
    else:
        if t.chi.value_at_p % t.p == 0:
            raise PrecisionError("insufficient precision for negative valuation")
        factor = pow(pow(t.chi.value_at_p, -1, q), -shift, q)
    return [
        CharTail(t.chi, i, t.b, t.coefficient * factor * comb(t.a, i) * pow(shift, t.a - i))
        for i in range(t.a + 1)
    ]


def kir_up(g: KirillovFn) -> KirillovFn:
    """U_p in Kirillov coordinates: pull back by p, then multiply by 1_{Z_p}."""
    shells = {v - 1: s for v, s in g.shells if v >= 1}
    tail = [nt for t in g.tail for nt in _shift_tail(t, 1)]
    v_cut = max(g.v_cut - 1, -1)
    return KirillovFn(g.p, g.k, 0, v_cut, tuple(shells.items()), tuple(tail))


def kir_scale(a: tuple[int, int], g: KirillovFn) -> KirillovFn:
    """Pull back by multiplication by ``a = p^v0 u0``."""
    v0, u0 = a
    p, k = g.p, g.k
    if u0 % p == 0:
        raise ValueError("unit part of the scaling must be a unit")
    shells = {}
    for v, s in g.shells:
        shells[v - v0] = LocConstFn.from_callable(p, k, s.m, lambda u, s=s: s(u0 * u), UNITS)
    tail = []
    for t in g.tail:
        for st in _shift_tail(t, v0):
            c = st.coefficient * t.chi.unit_value(u0)
            if st.b == 0:
                tail.append(st.with_coefficient(c))
                continue
            if p == 2:
                raise NotImplementedError("log tails are unsupported for p = 2")
            l0 = plog(teichmuller(PadicApprox(p, k, u0)).principal).residue
            for j in range(st.b + 1):
                tail.append(CharTail(st.chi, st.a, j, c * comb(st.b, j) * pow(l0, st.b - j)))
    return KirillovFn(p, k, g.M + v0, g.v_cut - v0, tuple(shells.items()), tuple(tail))
