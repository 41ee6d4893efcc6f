"""Truncated cuspidal q-expansions and the operators acting on them.

Coefficients ``a_1..a_N`` are stored in a numpy array; ``a_0`` is never stored
(every expansion is cuspidal).  Plain expansions have shape ``(N,)`` with
values mod p^k.  Expansions over Z[zeta_{p^m}]/p^k have shape ``(N, phi)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from operator import mul

import numpy as np

from .cyclo import CyclotomicRing, average_arrays, cyclotomic_ring, int_dtype
from .errors import DivisibilityError, PadicError
from .profinite import LocConstFn, SmoothChar, split_unit
from .validation import check_precision, check_prime


class QExpansion:
    """Truncated q-expansion ``sum_{n=1}^N a_n q^n`` mod p^k."""

    def __init__(self, p: int, k: int, coeffs, ring: CyclotomicRing | None = None):
        check_precision(k)
        self.p, self.k = p, k
        self.modulus = p**k
        self.ring = ring
        if ring is not None and (ring.p, ring.k) != (p, k):
            raise PadicError("cyclotomic ring does not match (p, k)")
        dtype = ring.dtype if ring is not None else int_dtype(self.modulus)
        arr = np.array(coeffs, dtype=object)
        if ring is None and arr.ndim != 1:
            raise ValueError("plain q-expansion coefficients must be 1-d")
        if ring is not None:
            if arr.ndim != 2 or (arr.size and arr.shape[1] != ring.phi):
                if arr.size == 0:
                    arr = arr.reshape(0, ring.phi)
                else:
                    raise ValueError(f"cyclotomic coefficients need shape (N, {ring.phi})")
        arr = (arr % self.modulus).astype(dtype) if arr.size else arr.astype(dtype)
        arr.setflags(write=False)
        self.coeffs = arr

    @classmethod
    def from_series(cls, p, k, series):
        """Build from ``[a_0, a_1, ..., a_N]``; ``a_0`` must vanish."""
        series = list(series)
        if series and series[0] % p**k:
            raise PadicError("constant term must be zero (cuspidal expansions only)")
        return cls(p, k, series[1:])

    @classmethod
    def zero(cls, p, k, N):
        return cls(p, k, [0] * N)

    @classmethod
    def monomial(cls, p, k, N, n, c=1):
        a = [0] * N
        if 1 <= n <= N:
            a[n - 1] = c
        return cls(p, k, a)

    @property
    def N(self) -> int:
        return len(self.coeffs)

    @property
    def is_cyclotomic(self) -> bool:
        return self.ring is not None

    def _new(self, coeffs, k=None, ring=None):
        if k is None:
            k, ring = self.k, self.ring
        return QExpansion(self.p, k, coeffs, ring)

    def __getitem__(self, n: int):
        """``a_n``; zero for ``n = 0``."""
        if n == 0:
            return 0 if self.ring is None else np.zeros(self.ring.phi, dtype=int)
        if not 1 <= n <= self.N:
            raise IndexError(f"index {n} outside the truncation window 1..{self.N}")
        c = self.coeffs[n - 1]
        return int(c) if self.ring is None else c

    def tolist(self):
        if self.ring is None:
            return [int(x) for x in self.coeffs]
        return [[int(x) for x in row] for row in self.coeffs]

    def truncate(self, N: int) -> "QExpansion":
        if N > self.N:
            raise ValueError(f"cannot extend truncation {self.N} to {N}")
        return self._new(self.coeffs[:N])

    def reduce(self, k: int) -> "QExpansion":
        """Drop to precision ``k``."""
        if k > self.k:
            raise PadicError(f"cannot raise precision from {self.k} to {k}")
        ring = None if self.ring is None else cyclotomic_ring(self.p, self.ring.m, k)
        return QExpansion(self.p, k, self.coeffs.astype(object) % self.p**k, ring)

    def substitute_power(self, d: int) -> "QExpansion":
        """``f(q^d)`` at the same truncation."""
        out = np.zeros_like(self.coeffs)
        if d >= 1:
            idx = np.arange(1, self.N // d + 1)
            out[idx * d - 1] = self.coeffs[idx - 1]
        return self._new(out)

    def _check(self, other):
        if not isinstance(other, QExpansion):
            raise TypeError("expected a QExpansion")
        if (self.p, self.k, self.N) != (other.p, other.k, other.N):
            raise PadicError("q-expansions differ in (p, k, N)")
        if self.ring is not other.ring:
            raise PadicError("q-expansions live over different scalar rings")

    def __add__(self, other):
        self._check(other)
        return self._new(self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return self._new(self.coeffs - other.coeffs)

    def __neg__(self):
        return self._new(-self.coeffs)

    def scale(self, c: int) -> "QExpansion":
        return self._new(self.coeffs * (int(c) % self.modulus))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (
            (self.p, self.k, self.N) == (other.p, other.k, other.N)
            and self.ring is other.ring
            and bool(np.all(self.coeffs == other.coeffs))
        )

    def __hash__(self):
        return hash((self.p, self.k, self.N, self.coeffs.tobytes()))

    def __repr__(self):
        head = ", ".join(str(x) for x in self.tolist()[:6])
        tag = "" if self.ring is None else f", zeta_{self.p}^{self.ring.m}"
        return f"QExpansion(p={self.p}, k={self.k}, N={self.N}{tag}: [{head}, ...])"


@dataclass(frozen=True)
class NewformData:
    """Exact Hecke data of a newform.

    ``nebentypus`` maps residues mod ``nebentypus_modulus`` to exact
    character values; an empty map means the trivial character.
    """

    level: int
    weight: int
    coeffs: tuple
    nebentypus_modulus: int = 1
    nebentypus: dict = field(default_factory=dict)
    eigenform: bool = True
    metadata: dict = field(default_factory=dict)
    warnings: tuple = ()

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def a(self, n: int) -> int:
        return self.coeffs[n - 1]

    def chi(self, ell: int) -> int:
        """Nebentypus value at ``ell``; 0 when ``ell`` divides the level."""
        if gcd(ell, self.level) != 1:
            return 0
        if not self.nebentypus:
            return 1
        return int(self.nebentypus.get(ell % self.nebentypus_modulus, 0))

    def qexp(self, p: int, k: int, N: int | None = None) -> QExpansion:
        coeffs = self.coeffs if N is None else self.coeffs[:N]
        if N is not None and N > self.N:
            raise ValueError(f"only {self.N} coefficients available")
        return QExpansion(p, k, coeffs)


# --- Delta -------------------------------------------------------------------


@lru_cache(maxsize=8)
def _tau_table(N: int) -> tuple:
    # coefficients of prod (1 - q^n)^24 via n c_n = -24 sum_j sigma(j) c_{n-j}
    sigma = [0] * (N + 1)
    for d in range(1, N + 1):
        for m in range(d, N + 1, d):
            sigma[m] += d
    c = [1] + [0] * (N - 1)
    for n in range(1, N):
        c[n] = -24 * sum(map(mul, sigma[1 : n + 1], reversed(c[:n]))) // n
    return tuple(c)


def tau(n: int) -> int:
    """Ramanujan's tau(n), exact."""
    if n < 1:
        raise ValueError("tau is defined for n >= 1")
    return _tau_table(_bucket(n))[n - 1]


def _bucket(n: int) -> int:
    size = 64
    while size < n:
        size *= 2
    return size


def tau_list(N: int) -> list[int]:
    return list(_tau_table(_bucket(N))[:N])


def eta_delta(N: int, p: int, k: int) -> QExpansion:
    """Delta = q prod (1 - q^n)^24 truncated at ``q^N``, mod p^k."""
    if N < 1:
        raise ValueError("N must be >= 1")
    check_prime(p)
    return QExpansion(p, k, tau_list(N))


def delta_newform(N: int) -> NewformData:
    return NewformData(level=1, weight=12, coeffs=tuple(tau_list(N)), metadata={"name": "Delta"})


# --- Hecke operators and friends ----------------------------------------------


def hecke_U(ell: int, f: QExpansion) -> QExpansion:
    """``a_n -> a_{ell n}``; truncation becomes ``N // ell``."""
    check_prime(ell, "ell")
    M = f.N // ell
    return f._new(f.coeffs[ell - 1 : ell * M : ell])


def hecke_T(ell: int, f: QExpansion, weight: int, chi_ell: int) -> QExpansion:
    """``a_n -> a_{ell n} + chi(ell) ell^(w-1) a_{n/ell}``; truncation ``N // ell``."""
    check_prime(ell, "ell")
    M = f.N // ell
    out = f.coeffs[ell - 1 : ell * M : ell].astype(object).copy()
    c = int(chi_ell) * pow(ell, weight - 1, f.modulus) % f.modulus
    if c and M >= ell:
        out[ell - 1 :: ell] = out[ell - 1 :: ell] + c * f.coeffs[: M // ell].astype(object)
    return f._new(out)


def hecke_S(ell: int, f: QExpansion, weight: int, chi_ell: int) -> QExpansion:
    """Scalar multiplication by ``chi(ell) ell^(w-1)``."""
    check_prime(ell, "ell")
    return f.scale(int(chi_ell) * pow(ell, weight - 1, f.modulus))


def theta(f: QExpansion) -> QExpansion:
    """``a_n -> n a_n``."""
    n = np.arange(1, f.N + 1, dtype=object) % f.modulus
    if f.ring is not None:
        n = n[:, None]
    return f._new(f.coeffs.astype(object) * n)


def _as_function(kappa, p, k) -> LocConstFn:
    if isinstance(kappa, SmoothChar):
        return kappa.unit_fn().extend_by_zero()
    if isinstance(kappa, LocConstFn):
        return kappa.extend_by_zero()
    raise TypeError("twist needs a LocConstFn or SmoothChar")


def twist(f: QExpansion, kappa) -> QExpansion:
    """``a_n -> kappa(n mod p^m) a_n`` with kappa extended by 0 off the units
    when it is given on Z_p^x."""
    kf = _as_function(kappa, f.p, f.k)
    if kf.p != f.p:
        raise PadicError("twist needs a function on Z_p for the same p")
    table = np.array(kf.table, dtype=object)
    vals = table[np.arange(1, f.N + 1) % (f.p**kf.m)]
    if f.ring is not None:
        vals = vals[:, None]
    return f._new(f.coeffs.astype(object) * vals)


def circle_act(j: int, f: QExpansion, m: int) -> QExpansion:
    """``a_n -> zeta_{p^m}^(j n) a_n``; the result is over Z[zeta_{p^m}]/p^k."""
    if f.ring is not None:
        ring = f.ring
        if ring.m != m:
            raise PadicError("circle action level differs from the coefficient ring")
        exps = (j * np.arange(1, f.N + 1)) % ring.order
        rows = [ring.shift_matrix(int(e)) @ f.coeffs[i] for i, e in enumerate(exps)]
        return QExpansion(f.p, f.k, np.array(rows).reshape(f.N, ring.phi), ring)
    ring = cyclotomic_ring(f.p, m, f.k)
    exps = (j * np.arange(1, f.N + 1)) % ring.order
    coeffs = ring.power_table[exps].astype(object) * f.coeffs.astype(object)[:, None]
    return QExpansion(f.p, f.k, coeffs, ring)


def circle_orbit(fs, m: int) -> tuple[np.ndarray, CyclotomicRing]:
    """``circle_act(j, f)`` for every j and every plain f, stacked.

    Returns an array of shape ``(p^m, len(fs), N, phi)`` and the ring.
    """
    fs = list(fs)
    p, k, N = fs[0].p, fs[0].k, fs[0].N
    ring = cyclotomic_ring(p, m, k)
    if any(f.ring is not None or (f.p, f.k, f.N) != (p, k, N) for f in fs):
        raise PadicError("circle_orbit needs plain expansions sharing (p, k, N)")
    dtype = int_dtype(ring.modulus)
    F = np.array([f.coeffs for f in fs], dtype=dtype)
    n = np.arange(1, N + 1)
    exps = np.outer(np.arange(ring.order), n) % ring.order
    table = ring.power_table.astype(dtype)[exps]
    out = (F[None, :, :, None] * table[:, None, :, :]) % ring.modulus
    return out.astype(ring.dtype), ring


def average_circle(f: QExpansion, m: int, weight: int) -> QExpansion:
    """``(1/p^m) sum_j zeta^(-weight j) circle_act(j, f)``, at precision k - m."""
    acted, ring = circle_orbit([f], m)
    out, target = average_arrays(acted[:, 0], ring, weight)
    return QExpansion(f.p, target.k, out, target)


def scalar_part(f: QExpansion) -> QExpansion:
    """A cyclotomic expansion whose coefficients all lie in Z/p^k, as a plain one."""
    if f.ring is None:
        return f
    if np.any(f.coeffs[:, 1:]):
        n = int(np.argwhere(np.any(f.coeffs[:, 1:] != 0, axis=1))[0][0]) + 1
        raise PadicError(f"coefficient {n} is not a scalar")
    return QExpansion(f.p, f.k, f.coeffs[:, 0])


# --- Kirillov coefficients ---------------------------------------------------


class KirTotal:
    """The coefficient map ``n -> a_n`` on the window ``1 <= n <= N``.

    Read along p-adic shells, ``at(v, u)`` is the value at ``p^v u``.
    """

    def __init__(self, p: int, k: int, values, ring=None):
        self.p, self.k = p, k
        self.modulus = p**k
        self.ring = ring
        self.values = QExpansion(p, k, values, ring).coeffs

    @property
    def N(self) -> int:
        return len(self.values)

    def __call__(self, n: int):
        if not 1 <= n <= self.N:
            raise IndexError(f"{n} is outside the window 1..{self.N}")
        v = self.values[n - 1]
        return int(v) if self.ring is None else v

    def at(self, v: int, u: int):
        return self(self.p**v * u)

    def shells(self):
        """``{v: {u: value}}`` for every integer point of the window."""
        out: dict = {}
        for n in range(1, self.N + 1):
            v, u = split_unit(n, self.p)
            out.setdefault(v, {})[u] = self(n)
        return out

    def mul_function(self, g: LocConstFn) -> "KirTotal":
        """Pointwise product with a function on Z_p."""
        g = g.extend_by_zero()
        table = np.array(g.table, dtype=object)
        vals = table[np.arange(1, self.N + 1) % g.p**g.m]
        if self.ring is not None:
            vals = vals[:, None]
        return KirTotal(self.p, self.k, self.values.astype(object) * vals, self.ring)

    def pullback_p(self) -> "KirTotal":
        """``x -> g(p x)`` on the shrunken window."""
        M = self.N // self.p
        return KirTotal(self.p, self.k, self.values[self.p - 1 : self.p * M : self.p], self.ring)

    def tolist(self):
        return QExpansion(self.p, self.k, self.values, self.ring).tolist()

    def __eq__(self, other):
        if not isinstance(other, KirTotal):
            return NotImplemented
        return (self.p, self.k, self.N) == (other.p, other.k, other.N) and bool(
            np.all(self.values == other.values)
        )

    def __hash__(self):
        return hash((self.p, self.k, self.values.tobytes()))


def kir_total(f: QExpansion) -> KirTotal:
    return KirTotal(f.p, f.k, f.coeffs, f.ring)


# --- double coset ----------------------------------------------------------------


@dataclass(frozen=True)
class DoubleCosetResult:
    ok: bool
    checked: int
    index: object = None
    message: str = ""

    def __bool__(self):
        return self.ok


def double_coset_check(p: int, f: QExpansion) -> DoubleCosetResult:
    """Compare ``(1/p) sum_i f(zeta_p^i q^(1/p))`` with ``U_p f``.

    The left side lives on exponents ``n/p``; internally it is indexed by
    the numerator ``n`` (a denominator exponent of 1).  Averaging happens in
    Z[zeta_p]/p^k, so the comparison is at precision k - 1.
    """
    if f.ring is not None:
        raise PadicError("double coset check needs a plain expansion")
    if f.k < 2:
        raise PadicError("double coset check needs k >= 2")
    if f.p != p:
        raise PadicError("expansion prime differs from p")
    ring = cyclotomic_ring(p, 1, f.k)
    # q -> zeta^i q^(1/p) sends a_n q^n to a_n zeta^(i n) q^(n/p)
    acted = np.array([circle_act(i, f, 1).coeffs for i in range(p)], dtype=ring.dtype)
    try:
        avg, target = average_arrays(acted, ring, 0)
    except DivisibilityError as exc:
        n = exc.index[0] + 1 if exc.index else None
        return DoubleCosetResult(False, 0, f"{n}/{p}", str(exc))
    avg = QExpansion(p, target.k, avg, target)
    lhs = {}
    for n in range(1, f.N + 1):
        c = avg[n]
        if n % p:
            if np.any(c):
                return DoubleCosetResult(False, 0, f"{n}/{p}", "fractional exponent survives")
        else:
            if np.any(c[1:]):
                return DoubleCosetResult(False, 0, n // p, "non-scalar coefficient")
            lhs[n // p] = int(c[0])
    rhs = hecke_U(p, f).reduce(f.k - 1)
    for n in range(1, rhs.N + 1):
        if lhs.get(n, 0) != rhs[n]:
            return DoubleCosetResult(False, n - 1, n, "coefficient mismatch")
    return DoubleCosetResult(True, rhs.N)


def verify_double_coset(p: int, f: QExpansion) -> bool:
    return double_coset_check(p, f).ok
