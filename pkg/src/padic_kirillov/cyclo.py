"""Arithmetic in Z[zeta_{p^m}] / p^k.

Elements are coefficient vectors in the basis ``1, zeta, ..., zeta^(phi-1)``
with ``phi = (p-1) p^(m-1)``, reduced modulo the p^m-th cyclotomic polynomial
``1 + x^(p^(m-1)) + ... + x^((p-1) p^(m-1))``.  Level ``m = 0`` is the ring
Z/p^k itself (``zeta = 1``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DivisibilityError, PadicError

_INT64_BOUND = 2**62


def int_dtype(modulus: int, terms: int = 1):
    """int64 when products of residues summed ``terms`` times cannot overflow."""
    return np.int64 if modulus * modulus * max(terms, 1) < _INT64_BOUND else object


class CyclotomicRing:
    """The ring Z[zeta_{p^m}]/p^k.  Use :func:`cyclotomic_ring` to get one."""

    def __init__(self, p: int, m: int, k: int):
        if m < 0 or k < 1:
            raise ValueError(f"need m >= 0 and k >= 1, got m={m}, k={k}")
        self.p, self.m, self.k = p, m, k
        self.modulus = p**k
        self.order = p**m
        self.phi = 1 if m == 0 else (p - 1) * p ** (m - 1)
        self.dtype = int_dtype(self.modulus, self.phi * self.order)
        table = np.zeros((self.order, self.phi), dtype=object)
        for e in range(self.order):
            table[e] = self._reduce_poly({e: 1})
        self.power_table = table.astype(self.dtype)
        self.power_table.setflags(write=False)
        self._shift = {}

    def _reduce_poly(self, poly):
        """Reduce a sparse polynomial {exponent: coeff} to a basis vector."""
        n, phi = self.order, self.phi
        dense = [0] * n
        for e, c in poly.items():
            dense[e % n] += c
        if self.m > 0:
            step = self.p ** (self.m - 1)
            for d in range(n - 1, phi - 1, -1):
                c = dense[d]
                if c:
                    dense[d] = 0
                    for i in range(self.p - 1):
                        dense[d - phi + i * step] -= c
        return np.array([c % self.modulus for c in dense[:phi]], dtype=object)

    def shift_matrix(self, s: int) -> np.ndarray:
        """Matrix of multiplication by zeta^s acting on column vectors."""
        s %= self.order
        mat = self._shift.get(s)
        if mat is None:
            mat = np.zeros((self.phi, self.phi), dtype=self.dtype)
            for i in range(self.phi):
                mat[:, i] = self.power_table[(i + s) % self.order]
            mat.setflags(write=False)
            self._shift[s] = mat
        return mat

    def mul_vectors(self, a, b) -> np.ndarray:
        prod = {}
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] = prod.get(i + j, 0) + int(x) * int(y)
        return self._reduce_poly(prod).astype(self.dtype)

    def zeta_power(self, e: int) -> "CycloElem":
        return CycloElem(self, self.power_table[e % self.order])

    def scalar(self, c: int) -> "CycloElem":
        v = np.zeros(self.phi, dtype=self.dtype)
        v[0] = c % self.modulus
        return CycloElem(self, v)

    def zero(self) -> "CycloElem":
        return self.scalar(0)

    def one(self) -> "CycloElem":
        return self.scalar(1)

    def __repr__(self):
        return f"CyclotomicRing(p={self.p}, m={self.m}, k={self.k})"


@lru_cache(maxsize=None)
def cyclotomic_ring(p: int, m: int, k: int) -> CyclotomicRing:
    return CyclotomicRing(p, m, k)


@dataclass(frozen=True, eq=False)
class CycloElem:
    """Immutable element of Z[zeta_{p^m}]/p^k."""

    ring: CyclotomicRing
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=object) % self.ring.modulus
        c = c.astype(self.ring.dtype)
        if c.shape != (self.ring.phi,):
            raise ValueError(f"expected {self.ring.phi} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def p(self):
        return self.ring.p

    @property
    def m(self):
        return self.ring.m

    @property
    def k(self):
        return self.ring.k

    def _check(self, other):
        if isinstance(other, CycloElem):
            if other.ring is not self.ring:
                raise PadicError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.scalar(int(other))
        return None

    def __add__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return CycloElem(self.ring, self.coeffs + o.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return CycloElem(self.ring, self.coeffs - o.coeffs)

    def __rsub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return CycloElem(self.ring, o.coeffs - self.coeffs)

    def __neg__(self):
        return CycloElem(self.ring, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CycloElem(self.ring, self.coeffs * (int(other) % self.ring.modulus))
        o = self._check(other)
        if o is None:
            return NotImplemented
        return CycloElem(self.ring, self.ring.mul_vectors(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise PadicError("negative powers are not supported")
        result, base = self.ring.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def times_zeta(self, s: int) -> "CycloElem":
        return CycloElem(self.ring, self.ring.shift_matrix(s) @ self.coeffs)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def is_scalar(self) -> bool:
        return not np.any(self.coeffs[1:])

    def scalar_value(self) -> int:
        if not self.is_scalar():
            raise PadicError(f"{self} is not in Z/p^k")
        return int(self.coeffs[0])

    def __eq__(self, other):
        o = self._check(other) if not isinstance(other, CycloElem) else other
        if o is None:
            return NotImplemented
        return (
            (self.p, self.m, self.k) == (o.p, o.m, o.k)
            and bool(np.all(self.coeffs == o.coeffs))
        )

    def __hash__(self):
        return hash((self.p, self.m, self.k, tuple(int(c) for c in self.coeffs)))

    def __repr__(self):
        terms = [f"{int(c)}*z^{i}" if i else str(int(c)) for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) or "0"
        return f"CycloElem({body}; p={self.p}, m={self.m}, k={self.k})"


def divide_by_p_power(arr, ring: CyclotomicRing, index_hint=None):
    """Exactly divide residue array(s) by p^m, landing in the precision k-m ring.

    ``arr`` has trailing axis ``phi``.  Raises :class:`DivisibilityError`
    naming the first offending leading index.
    """
    m, k = ring.m, ring.k
    if k <= m:
        raise PadicError(f"averaging over mu_{{p^{m}}} needs k > m (k={k})")
    d = ring.p**m
    arr = np.asarray(arr)
    bad = (arr % d) != 0
    if np.any(bad):
        pos = np.argwhere(bad)[0]
        idx = tuple(int(i) for i in pos[:-1])
        if index_hint is not None and idx:
            idx = index_hint(idx)
        raise DivisibilityError(
            f"sum is not divisible by {ring.p}^{m} at index {idx}", index=idx
        )
    target = cyclotomic_ring(ring.p, m, k - m)
    out = (arr // d) % target.modulus
    return out.astype(target.dtype), target


def average_arrays(values, ring: CyclotomicRing, weight: int):
    """Vectorised ``(1/p^m) sum_j zeta^(-weight j) values[j]``.

    ``values`` has shape ``(p^m, ..., phi)``.  Returns ``(array, ring')`` with
    ``ring'`` at precision ``k - m``.  The sum is formed in the group ring
    Z[x]/(x^(p^m) - 1), where multiplying by a power of x is a cyclic roll,
    and reduced to the cyclotomic basis once at the end.
    """
    values = np.asarray(values)
    n = ring.order
    if values.shape[0] != n:
        raise ValueError(f"need {n} values, got {values.shape[0]}")
    padded = np.zeros(values.shape[1:-1] + (n,), dtype=ring.dtype)
    total = padded.copy()
    for j in range(n):
        padded[..., : ring.phi] = values[j]
        total += np.roll(padded, (-weight * j) % n, axis=-1)
        total %= ring.modulus
    return divide_by_p_power((total @ ring.power_table) % ring.modulus, ring)


def cyclo_average(values, weight: int) -> CycloElem:
    """Compute ``(1/p^m) sum_j zeta^(-weight*j) values[j]`` over ``j in [0, p^m)``.

    The result lives at precision ``k - m``; the loss is visible on the
    returned element's ring.  Raises :class:`DivisibilityError` when the sum
    is not divisible by ``p^m``.
    """
    values = list(values)
    if not values:
        raise ValueError("no values to average")
    ring = values[0].ring
    for v in values:
        if v.ring is not ring:
            raise PadicError("all values must share (p, m, k)")
    arr = np.stack([v.coeffs for v in values])
    out, target = average_arrays(arr, ring, weight)
    return CycloElem(target, out)
