import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.base import clone

from padic_kirillov import (
    HeckeLattice,
    OrdinaryProjector,
    PadicApprox,
    PkMatrix,
    hecke_U,
    hensel_unit_root,
    kernel_check,
    ordinary_projector,
    stabilize,
    tau,
)
from padic_kirillov.errors import NonOrdinaryError, RankError
from padic_kirillov.ordinary import coinvariant_tails, p_stabilization
from padic_kirillov.qexp import delta_newform

DELTA = delta_newform(1200)


def _rank_mod_p(rows, p):
    rows = [[x % p for x in r] for r in rows]
    rank, ncols = 0, len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _matpow_mod(A, e, q):
    n = len(A)
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(e):
        R = [[sum(R[i][t] * A[t][j] for t in range(n)) % q for j in range(n)] for i in range(n)]
    return R


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(1, 4), st.integers(1, 5), st.integers(0, 2**32))
def test_projector_rank_is_unit_root_count(p, k, n, seed):
    rng = random.Random(seed)
    M = PkMatrix([[rng.randrange(p**k) for _ in range(n)] for _ in range(n)], p, k)
    e = ordinary_projector(M)
    assert e.is_idempotent() and e.commutes_with(M)
    # M is invertible on im e and nilpotent mod p on ker e, so rank e = rank (M mod p)^n
    assert e.rank() == _rank_mod_p(_matpow_mod(M.tolist(), n, p), p)


def test_trivial_projectors():
    assert ordinary_projector(PkMatrix.identity(3, 5, 2)) == PkMatrix.identity(3, 5, 2)
    assert ordinary_projector(PkMatrix([[0, 1], [0, 0]], 3, 2)) == PkMatrix.zeros(2, 3, 2)


def _delta_lattice(p, k, N):
    f = DELTA.qexp(p, k, N)
    return HeckeLattice([f, f.substitute_power(p)], p, k)


def test_delta_up_matrix_at_11():
    L = _delta_lattice(11, 5, 1000)
    q = 11**5
    assert L.up_matrix().tolist() == [[tau(11) % q, 1], [(-(11**11)) % q, 0]]


def test_kernel_check_and_tails():
    L = _delta_lattice(11, 5, 1000)
    e = ordinary_projector(L.up_matrix())
    rep = kernel_check(L, e)
    assert rep.verdict == "equal" and rep.direct_sum
    tails = coinvariant_tails(L, e)
    alpha = hensel_unit_root(PadicApprox(11, 5, tau(11)), PadicApprox(11, 5, 11**11))
    assert [int(a) for a, _ in tails] == [alpha.residue]


def test_non_free_basis_rejected():
    f = DELTA.qexp(5, 3, 100)
    with pytest.raises(RankError):
        HeckeLattice([f, f.scale(5)], 5, 3)


@pytest.mark.parametrize("p", [11, 13, 17])
def test_stabilization_is_up_eigenform(p):
    k, N = 4, 600
    s = p_stabilization(DELTA, p, k, "unit", N)
    assert hecke_U(p, s.qexp) == s.qexp.truncate(N // p).scale(s.eigenvalue.residue)
    assert s.ordinary
    q = p**k
    assert (s.eigenvalue.residue * s.other_root.residue - pow(p, 11, q)) % q == 0


def test_stabilization_at_non_ordinary_prime():
    for p in (2, 3, 5, 7):
        with pytest.raises(NonOrdinaryError):
            stabilize(DELTA, p, 4, "unit", 200)
    s = p_stabilization(DELTA, 2, 4, "either", 200)
    assert hecke_U(2, s.qexp) == s.qexp.truncate(100).scale(s.eigenvalue.residue)


def test_estimator_api():
    f = DELTA.qexp(11, 5, 800)
    X = np.array([f.tolist(), f.substitute_power(11).tolist()], dtype=object)
    est = OrdinaryProjector(p=11, k=5).fit(X)
    assert est.rank_ == 1 and est.n_features_in_ == 800
    Y = est.transform(X)
    assert np.array_equal(est.transform(Y), Y)
    c = clone(est)
    assert c.get_params() == {"p": 11, "k": 5} and not hasattr(c, "projector_")
    with pytest.raises(ValueError):
        est.transform(np.zeros((1, 10), dtype=object))
