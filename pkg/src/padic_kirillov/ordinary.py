"""U_p on finite lattices of q-expansions and the ordinary projector.

A :class:`HeckeLattice` is a list of q-expansions that is free of full rank
over Z/p^k and stable under U_p on the usable window.  Its U_p matrix uses
the column convention: column j holds the coordinates of ``U_p b_j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted
from sympy import Matrix, Poly, symbols

from .errors import NonOrdinaryError, PadicError, PrecisionError, RankError, StabilityError
from .linalg import HowellForm, PkMatrix, howell_form, reduce_vector, solve_left
from .padic import PadicApprox, hensel_unit_root
from .profinite import CharTail, SmoothChar
from .qexp import NewformData, QExpansion, hecke_U
from .validation import check_coefficient_matrix, check_precision, check_prime


def _free_of_rank(form: HowellForm, d: int) -> bool:
    return form.is_free() and form.free_rank == d


class HeckeLattice:
    """Finite U_p-stable lattice of q-expansions over Z/p^k."""

    def __init__(self, basis, p: int | None = None, k: int | None = None):
        basis = list(basis)
        if not basis:
            raise RankError("a lattice needs at least one basis vector")
        p = basis[0].p if p is None else p
        k = basis[0].k if k is None else k
        for b in basis:
            if not isinstance(b, QExpansion) or b.ring is not None:
                raise TypeError("basis entries must be plain QExpansions")
            if (b.p, b.N) != (p, basis[0].N) or b.k < k:
                raise PadicError("basis expansions must share p, N and have precision >= k")
        self.p, self.k = p, k
        self.basis = tuple(b if b.k == k else b.reduce(k) for b in basis)
        self.N = basis[0].N
        self.rows = [b.tolist() for b in self.basis]
        form = howell_form(self.rows, p, k, self.N)
        if not _free_of_rank(form, len(self.basis)):
            raise RankError(
                f"basis is not free of rank {len(self.basis)} mod {p}^{k} "
                f"(Howell pivots {list(form.pivots)})"
            )
        self._up = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def window(self) -> int:
        return self.N // self.p

    def restricted_rows(self, W: int):
        return [r[:W] for r in self.rows]

    def coordinates(self, vector, W: int | None = None):
        """Coordinates of ``vector`` in the basis on the first ``W`` indices, or None."""
        W = self.N if W is None else W
        return solve_left(self.restricted_rows(W), list(vector)[:W], self.p, self.k)

    def up_matrix(self) -> PkMatrix:
        if self._up is None:
            self._up = up_matrix(self)
        return self._up


def up_matrix(L: HeckeLattice) -> PkMatrix:
    """Matrix of U_p in the basis of ``L``, certified on the window ``N // p``."""
    p, k, W = L.p, L.k, L.window
    rows = L.restricted_rows(W)
    if W < L.dim or not _free_of_rank(howell_form(rows, p, k, W), L.dim):
        raise StabilityError(
            f"window N//p = {W} does not separate the basis; increase truncation",
            basis_index=None, residual=None,
        )
    cols = []
    for j, b in enumerate(L.basis):
        target = hecke_U(p, b).tolist()
        x = solve_left(rows, target, p, k)
        if x is None:
            _, res = reduce_vector(howell_form(rows, p, k, W), target)
            raise StabilityError(
                f"not U_p-stable at this truncation/precision: basis vector {j}, residual "
                f"{[(i + 1, r) for i, r in enumerate(res) if r][:5]}",
                basis_index=j, residual=res,
            )
        cols.append(x)
    return PkMatrix(np.array(cols, dtype=object).T, p, k)


def ordinary_projector(M: PkMatrix, cap: int | None = None) -> PkMatrix:
    """``e = lim M^(t!)``.

    The loop stops at the first ``E_t = M^(t!)`` that is idempotent; from
    then on ``E_{t+1} = E_t^(t+1) = E_t``.  Two consecutive equal iterates
    alone do not certify the limit (the unit part can have order divisible
    by a prime larger than t), so idempotency is the exit test.
    """
    n = M.n
    if cap is None:
        cap = max(n, 1) * M.k * M.p ** max(n, 1)
    E = M
    for t in range(1, cap + 1):
        if E.is_idempotent():
            break
        E = E ** (t + 1)
    else:
        raise PadicError(f"ordinary projector did not stabilise within {cap} steps")
    if not E.commutes_with(M):
        raise PadicError("projector does not commute with M")  # pragma: no cover
    return E


@dataclass
class KernelReport:
    """Comparison of ker(e) with the kernel of ``U_p^n0`` (coordinate modules)."""

    n0: int
    kernel_e: HowellForm
    kernel_up: HowellForm
    image_e: HowellForm
    verdict: str
    literal_steps: int
    direct_sum: bool
    rank_e: int

    @property
    def kernel_dim(self) -> int:
        return self.kernel_e.free_rank

    def as_dict(self):
        return {
            "n0": self.n0,
            "kernel_e": [list(r) for r in self.kernel_e.rows],
            "kernel_up": [list(r) for r in self.kernel_up.rows],
            "verdict": self.verdict,
            "literal_steps": self.literal_steps,
            "direct_sum": self.direct_sum,
            "rank_e": self.rank_e,
            "kernel_dim": self.kernel_dim,
        }


def kernel_check(L: HeckeLattice, e: PkMatrix) -> KernelReport:
    """Check ``ker(e) = ker(U_p^n0)`` with ``n0 = dim * k``.

    ``U_p^n0`` is applied through the certified matrix; the literal operator
    ``hecke_U`` is cross-checked against ``M^t`` for every t whose window
    ``N // p^t`` still separates the basis.
    """
    p, k, d = L.p, L.k, L.dim
    if L.window < d:
        raise StabilityError("window too small: increase truncation", None, None)
    M = L.up_matrix()
    n0 = d * k
    ker_e = e.kernel()
    ker_u = (M**n0).kernel()
    steps = 0
    W = L.N
    iterates = list(L.basis)
    Mt = PkMatrix.identity(d, p, k)
    while True:
        W //= p
        if W < d or not _free_of_rank(howell_form(L.restricted_rows(W), p, k, W), d):
            break
        iterates = [hecke_U(p, f) for f in iterates]
        Mt = M @ Mt
        for j, f in enumerate(iterates):
            coords = [int(Mt.a[i, j]) for i in range(d)]
            expect = [
                sum(c * r[n] for c, r in zip(coords, L.rows)) % p**k for n in range(W)
            ]
            if f.tolist() != expect:
                raise StabilityError(
                    f"literal U_p^{steps + 1} disagrees with the matrix power", j, None
                )
        steps += 1
    im_e = e.column_space()
    both = howell_form(list(ker_e.rows) + list(im_e.rows), p, k, d)
    direct = ker_e.length + im_e.length == d * k and both.length == d * k
    return KernelReport(
        n0=n0,
        kernel_e=ker_e,
        kernel_up=ker_u,
        image_e=im_e,
        verdict="equal" if ker_e == ker_u else "differ",
        literal_steps=steps,
        direct_sum=direct,
        rank_e=e.rank(),
    )


# --- stabilisation ------------------------------------------------------------


@dataclass(frozen=True)
class Stabilization:
    qexp: QExpansion
    eigenvalue: PadicApprox
    other_root: PadicApprox
    ordinary: bool


def _brute_root(a: int, c: int, p: int, k: int):
    q = p**k
    if q > 10**6:
        raise PrecisionError("non-ordinary root search is limited to p^k <= 10^6")
    for x in range(q):
        if (x * x - a * x + c) % q == 0:
            return x
    return None


def p_stabilization(f: NewformData, p: int, k: int, root: str = "unit", N: int | None = None):
    """``f(q) - r' f(q^p)`` where ``r'`` is the root not chosen.

    ``root`` is ``"unit"`` (the alpha branch), ``"nonunit"`` (beta) or
    ``"either"`` (unit root when ordinary, otherwise any root mod p^k).
    The U_p eigen-equation is verified on the window before returning.
    """
    check_prime(p)
    check_precision(k)
    if f.level % p == 0:
        raise PadicError("p divides the level; a_p is already a U_p eigenvalue")
    q = p**k
    a = PadicApprox(p, k, f.a(p))
    c = PadicApprox(p, k, f.chi(p) * pow(p, f.weight - 1, q))
    if a.is_unit():
        alpha = hensel_unit_root(a, c)
        beta = a - alpha
        ordinary = True
        if root in ("unit", "either"):
            chosen, other = alpha, beta
        elif root == "nonunit":
            chosen, other = beta, alpha
        else:
            raise ValueError(f"unknown root choice {root!r}")
    else:
        if root in ("unit", "nonunit"):
            raise NonOrdinaryError(
                f"non-ordinary input: a_p has valuation {a.valuation}, no unit root"
            )
        if root != "either":
            raise ValueError(f"unknown root choice {root!r}")
        x = _brute_root(a.residue, c.residue, p, k)
        if x is None:
            raise PrecisionError(f"x^2 - a_p x + c has no root mod {p}^{k}")
        chosen = PadicApprox(p, k, x)
        other = a - chosen
        ordinary = False
    g = f.qexp(p, k, N)
    stab = g - g.substitute_power(p).scale(other.residue)
    if hecke_U(p, stab) != stab.truncate(stab.N // p).scale(chosen.residue):
        raise StabilityError("stabilisation is not a U_p eigenvector on the window", 0, None)
    return Stabilization(stab, chosen, other, ordinary)


def stabilize(f: NewformData, p: int, k: int, root: str = "unit", N: int | None = None) -> QExpansion:
    return p_stabilization(f, p, k, root, N).qexp


# --- coinvariants ------------------------------------------------------------


def _charpoly_mod(A: PkMatrix):
    x = symbols("x")
    poly = Matrix(A.tolist()).charpoly(x)
    return [int(c) % A.p for c in Poly(poly.as_expr(), x).all_coeffs()]


def _solve_block(basis_rows, A: PkMatrix):
    """Matrix of ``A`` on the free submodule spanned by ``basis_rows`` (column vectors)."""
    p, k = A.p, A.k
    r = len(basis_rows)
    cols = []
    for v in basis_rows:
        x = solve_left(basis_rows, A.apply(v), p, k)
        if x is None:
            raise PrecisionError("generalised eigenspace is not A-stable; raise precision")
        cols.append(x)
    return PkMatrix(np.array(cols, dtype=object).T.reshape(r, r), p, k)


def coinvariant_tails(L: HeckeLattice, e: PkMatrix):
    """Unit generalised eigenvalues of ``e M`` with their Jordan tails.

    Returns a list of ``(alpha, [CharTail, ...])`` where the tails are the
    unramified characters with ``chi(p) = alpha`` and valuation degree
    ``a < m`` for a Jordan block of size m.
    """
    M = L.up_matrix()
    A = e @ M
    p, k, d = A.p, A.k, A.n
    coeffs = _charpoly_mod(A)
    roots = [
        rho for rho in range(1, p)
        if sum(c * pow(rho, d - i, p) for i, c in enumerate(coeffs)) % p == 0
    ]
    out = []
    n = d * k
    for rho in roots:
        I = PkMatrix.identity(d, p, k)
        K = ((A - I.scale(rho)) ** n).kernel()
        if not K.is_free():
            raise PrecisionError("generalised eigenspace is not free; raise precision")
        basis = K.free_basis()
        r = len(basis)
        if r % p == 0:
            raise PrecisionError("eigenspace rank divisible by p; raise precision")
        B = _solve_block(basis, A)
        trace = sum(int(B.a[i, i]) for i in range(r))
        alpha = trace * pow(r, -1, p**k) % p**k
        N_ = B - PkMatrix.identity(r, p, k).scale(alpha)
        if not (N_**r == PkMatrix.zeros(r, p, k)):
            raise PrecisionError(
                f"inseparable unit part near {rho} mod {p}; raise precision"
            )
        j = 0
        P = PkMatrix.identity(r, p, k)
        while not (P == PkMatrix.zeros(r, p, k)):
            P = P @ N_
            j += 1
        chi = SmoothChar.unramified(p, k, alpha)
        out.append((alpha, [CharTail(chi, a, 0, 1) for a in range(j)]))
    return sorted(out, key=lambda t: t[0])


# --- estimator ---------------------------------------------------------------


class OrdinaryProjector(TransformerMixin, BaseEstimator):
    """Hida's ordinary projector as a fitted transformer.

    ``fit`` takes the basis of a U_p-stable lattice (rows of q-expansion
    coefficients ``a_1..a_N``, or QExpansion objects) and learns the U_p
    matrix and ``e``.  ``transform`` maps expansions in the span of the
    basis to their ordinary parts.
    """

    def __init__(self, p=11, k=5):
        self.p = p
        self.k = k

    def fit(self, X, y=None):
        check_prime(self.p)
        check_precision(self.k)
        rows = check_coefficient_matrix(X, self.p**self.k)
        basis = [QExpansion(self.p, self.k, r) for r in rows]
        self.lattice_ = HeckeLattice(basis, self.p, self.k)
        self.up_matrix_ = self.lattice_.up_matrix()
        self.projector_ = ordinary_projector(self.up_matrix_)
        self.rank_ = self.projector_.rank()
        self.n_features_in_ = self.lattice_.N
        return self

    def coordinates(self, X):
        check_is_fitted(self, "projector_")
        rows = check_coefficient_matrix(X, self.p**self.k)
        out = []
        for i, r in enumerate(rows):
            if len(r) != self.n_features_in_:
                raise ValueError(f"row {i} has {len(r)} coefficients, expected {self.n_features_in_}")
            x = self.lattice_.coordinates(r)
            if x is None:
                raise ValueError(f"row {i} is not in the span of the fitted lattice")
            out.append(x)
        return out

    def transform(self, X):
        q = self.p**self.k
        basis = np.array(self.lattice_.rows, dtype=object)
        out = []
        for x in self.coordinates(X):
            y = self.projector_.apply(x)
            out.append(np.dot(np.array(y, dtype=object), basis) % q)
        return np.array(out, dtype=object).reshape(len(out), self.n_features_in_)
