"""Linear algebra over Z/p^k.

Z/p^k is a chain ring: every element is ``p^v * unit``.  Row reduction picks
the pivot of smallest valuation in each column, and the Howell property is
restored by feeding ``p^(k-v) * pivot_row`` (which vanishes in the pivot
column) back into the remaining rows.  The resulting reduced Howell form is
canonical, so two row modules are equal exactly when their forms are equal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclo import int_dtype
from .padic import capped_valuation


@dataclass(frozen=True)
class HowellForm:
    """Reduced Howell form of a row module in (Z/p^k)^ncols.

    ``pivots[i]`` is ``(column, valuation)`` for ``rows[i]``; the pivot
    entry equals ``p**valuation``.
    """

    p: int
    k: int
    ncols: int
    rows: tuple
    pivots: tuple

    @property
    def n_generators(self) -> int:
        return len(self.rows)

    @property
    def length(self) -> int:
        """log_p of the module's cardinality."""
        return sum(self.k - v for _, v in self.pivots)

    @property
    def free_rank(self) -> int:
        """Number of Z/p^k summands, read off as dim_Fp of p^(k-1) M.

        Not the count of unit pivots: the span of (p, 1) is free of rank 1
        but its pivot in the first column is p.
        """
        s = self.p ** (self.k - 1)
        return howell_form([[x * s for x in r] for r in self.rows], self.p, self.k, self.ncols).length

    def is_free(self) -> bool:
        return self.length == self.k * self.free_rank

    def free_basis(self) -> list:
        """A basis of the module when it is free (lifts of a basis of M/pM)."""
        if not self.is_free():
            raise ValueError("module is not free")
        chosen, reduced = [], []
        for row in self.rows:
            if _independent_mod_p(reduced, row, self.p):
                chosen.append(list(row))
                reduced.append([x % self.p for x in row])
        return chosen

    def contains(self, vector) -> bool:
        _, residual = reduce_vector(self, vector)
        return not any(residual)

    def __eq__(self, other):
        if not isinstance(other, HowellForm):
            return NotImplemented
        return (self.p, self.k, self.ncols, self.rows) == (other.p, other.k, other.ncols, other.rows)

    def __hash__(self):
        return hash((self.p, self.k, self.ncols, self.rows))


def _independent_mod_p(rows, vec, p) -> bool:
    """Whether ``vec`` mod p lies outside the F_p-span of ``rows``."""
    work = [list(r) for r in rows] + [[x % p for x in vec]]
    rank = 0
    for c in range(len(work[0])):
        piv = next((i for i in range(rank, len(work)) if work[i][c] % p), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][c], -1, p)
        for i in range(len(work)):
            if i != rank and work[i][c] % p:
                t = work[i][c] * inv
                work[i] = [(x - t * y) % p for x, y in zip(work[i], work[rank])]
        rank += 1
    return rank == len(work)


def howell_form(rows, p: int, k: int, ncols: int | None = None) -> HowellForm:
    q = p**k
    work = [[int(x) % q for x in r] for r in rows]
    if ncols is None:
        if not work:
            raise ValueError("ncols is required for an empty row list")
        ncols = len(work[0])
    work = [r for r in work if any(r)]
    out, pivots = [], []
    for c in range(ncols):
        live = [r for r in work if r[c]]
        if not live:
            continue
        src = min(live, key=lambda r: capped_valuation(r[c], p, k))
        v = capped_valuation(src[c], p, k)
        pv = p**v
        unit_inv = pow(src[c] // pv, -1, q)
        piv = [x * unit_inv % q for x in src]
        rest = []
        for r in work:
            if r is src:
                continue
            if r[c]:
                t = r[c] // pv
                r = [(x - t * y) % q for x, y in zip(r, piv)]
            if any(r):
                rest.append(r)
        if v > 0:
            ann = [x * p ** (k - v) % q for x in piv]
            if any(ann):
                rest.append(ann)
        out.append(piv)
        pivots.append((c, v))
        work = rest
    # clear above each pivot down to the range [0, p^v)
    for i, (c, v) in enumerate(pivots):
        pv = p**v
        for j in range(i):
            t = out[j][c] // pv
            if t:
                out[j] = [(x - t * y) % q for x, y in zip(out[j], out[i])]
    return HowellForm(p, k, ncols, tuple(tuple(r) for r in out), tuple(pivots))


def reduce_vector(form: HowellForm, vector, upto: int | None = None):
    """Reduce ``vector`` against ``form``.

    Returns ``(multipliers, residual)`` with ``vector = sum multipliers[i] *
    rows[i] + residual``.  Only pivots in columns ``< upto`` are used when
    ``upto`` is given.  A residual that is zero on the used columns means
    membership.
    """
    p, k = form.p, form.k
    q = p**k
    y = [int(x) % q for x in vector]
    mult = [0] * len(form.rows)
    for i, ((c, v), row) in enumerate(zip(form.pivots, form.rows)):
        if upto is not None and c >= upto:
            break
        if y[c] == 0:
            continue
        pv = p**v
        if y[c] % pv:
            break
        t = y[c] // pv
        mult[i] = t
        y = [(a - t * b) % q for a, b in zip(y, row)]
    return mult, y


def left_kernel(rows, p: int, k: int, nrows: int | None = None, ncols: int | None = None) -> HowellForm:
    """Howell form of ``{x : x A = 0}`` for the matrix with the given rows."""
    rows = [list(r) for r in rows]
    n = len(rows) if nrows is None else nrows
    m = len(rows[0]) if ncols is None else ncols
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    hf = howell_form(aug, p, k, m + n)
    kern = [row[m:] for row, (c, _) in zip(hf.rows, hf.pivots) if c >= m]
    return howell_form(kern, p, k, n)


def solve_left(rows, target, p: int, k: int):
    """Solve ``x A = target`` over Z/p^k; ``None`` when there is no solution."""
    rows = [list(r) for r in rows]
    n, m = len(rows), len(rows[0])
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    hf = howell_form(aug, p, k, m + n)
    q = p**k
    _, res = reduce_vector(hf, list(target) + [0] * n, upto=m)
    if any(res[:m]):
        return None
    return [(-x) % q for x in res[m:]]


class PkMatrix:
    """Square (or rectangular) matrix over Z/p^k with exact arithmetic."""

    def __init__(self, entries, p: int, k: int):
        self.p, self.k = p, k
        self.modulus = p**k
        arr = np.array(entries, dtype=object)
        if arr.ndim != 2:
            raise ValueError("PkMatrix needs a 2-d array")
        self.shape = arr.shape
        self.dtype = int_dtype(self.modulus, max(arr.shape[1], 1))
        arr = (arr % self.modulus).astype(self.dtype)
        arr.setflags(write=False)
        self.a = arr

    @classmethod
    def identity(cls, n: int, p: int, k: int):
        return cls(np.eye(n, dtype=np.int64), p, k)

    @classmethod
    def zeros(cls, n: int, p: int, k: int):
        return cls(np.zeros((n, n), dtype=np.int64), p, k)

    @property
    def n(self):
        return self.shape[0]

    def _wrap(self, arr):
        if self.dtype is not object and arr.dtype == np.int64:
            out = PkMatrix.__new__(PkMatrix)
            out.p, out.k, out.modulus, out.dtype = self.p, self.k, self.modulus, self.dtype
            arr = arr % self.modulus
            arr.setflags(write=False)
            out.a, out.shape = arr, arr.shape
            return out
        return PkMatrix(arr, self.p, self.k)

    def __matmul__(self, other):
        if not isinstance(other, PkMatrix):
            return NotImplemented
        if (self.p, self.k) != (other.p, other.k):
            raise ValueError("matrices over different rings")
        return self._wrap((self.a @ other.a) % self.modulus)

    def apply(self, vector):
        """``M @ v`` for a column vector given as a sequence."""
        v = np.array([int(x) % self.modulus for x in vector], dtype=self.dtype)
        return [int(x) for x in (self.a @ v) % self.modulus]

    def __add__(self, other):
        return self._wrap(self.a + other.a)

    def __sub__(self, other):
        return self._wrap(self.a - other.a)

    def __neg__(self):
        return self._wrap(-self.a)

    def scale(self, c: int):
        return self._wrap(self.a * (int(c) % self.modulus))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative matrix powers are not supported")
        result = PkMatrix.identity(self.n, self.p, self.k)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def T(self):
        return self._wrap(self.a.T)

    def tolist(self):
        return [[int(x) for x in row] for row in self.a]

    def __eq__(self, other):
        if not isinstance(other, PkMatrix):
            return NotImplemented
        return (self.p, self.k, self.shape) == (other.p, other.k, other.shape) and bool(
            np.all(self.a == other.a)
        )

    def __hash__(self):
        return hash((self.p, self.k, tuple(map(tuple, self.tolist()))))

    def is_idempotent(self) -> bool:
        return self @ self == self

    def commutes_with(self, other) -> bool:
        return self @ other == other @ self

    def column_space(self) -> HowellForm:
        return howell_form(self.a.T.tolist(), self.p, self.k, self.n)

    def kernel(self) -> HowellForm:
        """Howell form of ``{x : M x = 0}`` (column vectors)."""
        return left_kernel(self.a.T.tolist(), self.p, self.k, self.shape[1], self.shape[0])

    def rank(self) -> int:
        """Free rank of the column module."""
        return self.column_space().free_rank

    def __repr__(self):
        return f"PkMatrix({self.tolist()} mod {self.p}^{self.k})"
