import random

import pytest
from hypothesis import given, settings, strategies as st

from padic_kirillov import LocalParams, SmoothChar, central_char, classify, completion_basis, jacquet, predict_W
from padic_kirillov.errors import NonOrdinaryError, PadicError, PrecisionError
from padic_kirillov.smoothrep import (
    ONE_DIMENSIONAL,
    PRINCIPAL_SERIES,
    SPECIAL,
    SUPERCUSPIDAL,
    kirillov_lines,
    local_params_from_hecke,
    report,
)
from padic_kirillov.suites import random_params


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([PRINCIPAL_SERIES, SPECIAL, SUPERCUSPIDAL]), st.sampled_from([3, 5, 7]),
       st.integers(0, 2**32))
def test_jacquet_dimension_by_kind(kind, p, seed):
    P = random_params(kind, p, 10, random.Random(seed))
    assert jacquet(P).dim == {PRINCIPAL_SERIES: 2, SPECIAL: 1, SUPERCUSPIDAL: 0}[kind]
    assert len(completion_basis(P)) <= 1


def test_reducible_principal_series_detected():
    p, k = 5, 6
    P = LocalParams.unramified_ps(p, k, 2, 2 * p)
    cl = classify(P)
    assert not cl.irreducible and cl.witness
    with pytest.raises(PadicError):
        jacquet(P)


def test_one_dimensional_has_no_kirillov_model():
    P = LocalParams(5, ONE_DIMENSIONAL, (SmoothChar.trivial(5, 3),))
    with pytest.raises(PadicError, match="no Kirillov model"):
        jacquet(P)


def test_equal_characters_give_log_line():
    chi = SmoothChar.unramified(5, 4, 3)
    lines = kirillov_lines(LocalParams.principal_series(chi, chi))
    assert [(t.a, t.b) for t in lines] == [(0, 0), (1, 0)]


def test_weight_one_rejected():
    with pytest.raises(ValueError):
        LocalParams.unramified_ps(5, 4, 1, 5, weight=1)


def test_valuation_sum_checked():
    with pytest.raises(PadicError):
        LocalParams.unramified_ps(5, 8, 1, 5, weight=4)
    LocalParams.unramified_ps(5, 8, 1, 125, weight=4)


@pytest.mark.parametrize("w", range(2, 13))
def test_unit_filter(w):
    p, k = 5, 12
    for va in range(w):
        vb = w - 1 - va
        P = LocalParams.unramified_ps(p, k, p**va, -(p**vb) % p**k, w)
        survivors = [t.chi.valuation_at_p for t in completion_basis(P)]
        assert survivors == [v for v in (va, vb) if v == 0]


def test_delta_local_data_at_11():
    P = local_params_from_hecke(11, 5, 534612, 12, 1)
    alpha, beta = (c.value_at_p for c in P.chars)
    q = 11**5
    assert (alpha + beta - 534612) % q == 0 and (alpha * beta - 11**11) % q == 0
    omega = central_char(P, 12)
    assert omega((1, 1)) == 1
    for u in (2, 3, 7):
        assert omega((0, u)) == pow(u, -12, q)


def test_central_char_without_nebentypus_loses_precision():
    P = LocalParams.unramified_ps(5, 8, 2, 5 * pow(2, -1, 5**8), weight=2)
    w = central_char(P, 2)
    assert w.smooth.k == 6
    with pytest.raises(PrecisionError):
        central_char(LocalParams.unramified_ps(5, 2, 2, 5, weight=2), 2)


def test_vieta_inconsistency_caught():
    P = LocalParams.unramified_ps(5, 6, 2, 5 * 3, weight=2, nebentypus_at_p=1)
    with pytest.raises(PadicError, match="Vieta"):
        central_char(P, 2)


def test_non_ordinary_hecke_data():
    with pytest.raises(NonOrdinaryError):
        local_params_from_hecke(2, 5, -24, 12)


def test_predict_split_adds_second_tail():
    P = local_params_from_hecke(5, 6, -2, 2)
    lower = predict_W(P, 2, "split").lower
    assert len(lower) == 2
    assert len(predict_W(P, 2, "unknown").lower) == 1
    upper = predict_W(P, 2, "unknown", M_window=1).upper
    assert len(upper) == 4


def test_report_is_json_ready():
    import json

    rep = report(local_params_from_hecke(11, 5, 534612, 12, 1), 12)
    assert json.loads(json.dumps(rep))["jacquet_dim"] == 2
