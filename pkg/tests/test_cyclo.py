import itertools

import numpy as np
from hypothesis import given, settings, strategies as st
from sympy import Poly, cyclotomic_poly, symbols

from padic_kirillov import CycloElem, cyclo_average, cyclotomic_ring

x = symbols("x")
RINGS = st.sampled_from([(2, 2), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)])


def _oracle_mul(p, m, k, a, b):
    phi = Poly(cyclotomic_poly(p**m, x), x)
    prod = Poly(list(reversed(a)), x) * Poly(list(reversed(b)), x)
    r = prod.rem(phi).all_coeffs()[::-1]
    r = [int(c) % p**k for c in r] + [0] * (len(a) - len(r))
    return r[: len(a)]


@settings(max_examples=50, deadline=None)
@given(RINGS, st.integers(1, 5), st.data())
def test_multiplication_matches_sympy(pm, k, data):
    p, m = pm
    R = cyclotomic_ring(p, m, k)
    coeff = st.lists(st.integers(0, p**k - 1), min_size=R.phi, max_size=R.phi)
    a, b = data.draw(coeff), data.draw(coeff)
    got = CycloElem(R, a) * CycloElem(R, b)
    assert [int(c) for c in got.coeffs] == _oracle_mul(p, m, k, a, b)


@given(RINGS, st.integers(1, 4), st.integers(-50, 50))
def test_zeta_order(pm, k, s):
    p, m = pm
    R = cyclotomic_ring(p, m, k)
    z = R.zeta_power(1)
    assert z ** (p**m) == R.one()
    assert R.one().times_zeta(s) == R.zeta_power(s % p**m)


def test_sum_of_roots_of_unity_vanishes():
    R = cyclotomic_ring(5, 2, 3)
    total = R.zero()
    for j in range(25):
        total = total + R.zeta_power(j)
    assert total.is_zero()


def test_average_picks_out_weight():
    # (1/p^m) sum_j zeta^(-a j) zeta^(b j) = [a == b]
    p, m, k = 3, 2, 4
    R = cyclotomic_ring(p, m, k)
    for a, b in itertools.product(range(p**m), repeat=2):
        vals = [R.zeta_power(b * j) for j in range(p**m)]
        avg = cyclo_average(vals, a)
        assert avg.is_scalar()
        assert avg.scalar_value() == (1 if a == b else 0)
        assert avg.k == k - m


def test_int_dtype_promotes():
    from padic_kirillov.cyclo import int_dtype

    assert int_dtype(5**4, 10) == np.int64
    assert int_dtype(5**30, 10) == object
