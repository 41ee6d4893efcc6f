"""Acceptance criteria, one recorded PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py``; the verdict table is printed
in the terminal summary.
"""

import random
import time

import pytest

from padic_kirillov.cli import cmd_predict
from padic_kirillov.linalg import PkMatrix
from padic_kirillov.ordinary import ordinary_projector
from padic_kirillov.padic import PadicApprox, capped_valuation, hensel_unit_root
from padic_kirillov.qexp import delta_newform
from padic_kirillov.suites import (
    doublecoset_suite,
    fourier_suite,
    jordan_cases,
    kirillov_suite,
    local_suite,
    mahler_suite,
    ordinary_suite,
)

DELTA = delta_newform(3000)
ALPHA_11 = hensel_unit_root(PadicApprox(11, 5, 534612), PadicApprox(11, 5, 11**11)).residue


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


def failing(res):
    return [c.name for c in res.checks if not c.passed]


def test_criterion_1_fourier_duality(criterion):
    res, dt = timed(fourier_suite, ps=(3, 5), ks=(1, 2, 3, 4, 5), ms=(0, 1, 2), N=200, n_random=50)
    ok = res.passed and dt < 10
    criterion(1, "Fourier duality: circle average = indicator twist mod p^(k-m)", ok,
              f"{len(res.checks)} (p,m,k) cells, {dt:.2f}s")
    assert res.passed, failing(res)
    assert dt < 10


def test_criterion_2_kirillov_intertwining(criterion):
    res, dt = timed(kirillov_suite, p=5, k=4, N=200, count=100)
    core = [c for c in res.checks if c.name in ("kir_up", "kir_theta", "kir_function_action")]
    ok = len(core) == 3 and all(c.passed for c in core) and dt < 5
    criterion(2, "Kirillov intertwining: U_p, theta, function action", ok, f"100 inputs each, {dt:.2f}s")
    assert ok, [c.as_dict() for c in core]


def test_criterion_3_double_coset(criterion):
    res, dt = timed(doublecoset_suite, DELTA, ps=(3, 5, 7), k=4, N=500)
    ok = res.passed and dt < 30
    criterion(3, "Double coset average = U_p for Delta, p in {3,5,7}, k=4, N=500", ok, f"{dt:.2f}s")
    assert ok, failing(res)


def test_criterion_4_delta_at_11(criterion):
    res, dt = timed(ordinary_suite, DELTA, p=11, k=5, N=1500)
    d = res.data
    checks = {
        "rank": d["rank_e"] == 1,
        "eigenvalue": d["unit_eigenvalues"] == [str(ALPHA_11)],
        "verdict": d["kernel_verdict"] == "equal",
        "stable": res.passed,
        "time": dt < 60,
    }
    ok = all(checks.values())
    criterion(4, "Delta lattice at p=11, k=5: rank 1, Hensel root, kernels equal, stable", ok,
              f"alpha={d['unit_eigenvalues']}, {dt:.2f}s")
    assert ok, (checks, failing(res))


def _random_matrix(rng, n, p, k):
    q = p**k
    return PkMatrix([[rng.randrange(q) for _ in range(n)] for _ in range(n)], p, k)


def test_criterion_5_projector_properties(criterion):
    rng = random.Random(5)
    t = time.perf_counter()
    bad = 0
    for _ in range(200):
        p, k, n = rng.choice((3, 5)), rng.randint(1, 4), rng.randint(1, 6)
        M = _random_matrix(rng, n, p, k)
        e = ordinary_projector(M)
        if not (e.is_idempotent() and e.commutes_with(M)):
            bad += 1
    # trivial cases: diag(unit, p) projects to the first coordinate, nilpotent gives 0
    D = PkMatrix([[2, 0], [0, 3]], 3, 3)
    trivial_diag = ordinary_projector(D) == PkMatrix([[1, 0], [0, 0]], 3, 3)
    Nil = PkMatrix([[0, 1], [0, 0]], 5, 2)
    trivial_nil = ordinary_projector(Nil) == PkMatrix.zeros(2, 5, 2)
    dt = time.perf_counter() - t
    ok = bad == 0 and trivial_diag and trivial_nil and dt < 10
    criterion(5, "Ordinary projector: e^2 = e, eM = Me on 200 random matrices + trivial cases", ok,
              f"{bad} failures, {dt:.2f}s")
    assert ok


def test_criterion_6_classification(criterion):
    res, dt = timed(local_suite, p=5, k=12, count=200, weights=range(2, 13))
    wanted = [c for c in res.checks if c.name.startswith(("jacquet_dim", "completion_"))]
    ok = all(c.passed for c in wanted) and len(wanted) == 7 and dt < 5
    criterion(6, "Classification: Jacquet dims, completion <= 1, unit filter grid", ok, f"{dt:.2f}s")
    assert ok, failing(res)


def test_criterion_7_jordan_relation(criterion):
    """The literal claim, recorded faithfully.

    At (p, k, a) = (3, 1, 3) the factor a! chi(p)^a vanishes mod p^k, so the
    a-th power already kills the tail and minimality cannot hold there.
    """
    t = time.perf_counter()
    cases = jordan_cases(ps=(3, 5), ks=(1, 2, 3, 4), n_chars=50, a_max=3)
    dt = time.perf_counter() - t
    kills = [c for c in cases if c.index > c.a + 1]
    not_min = [c for c in cases if c.index <= c.a]
    combos = sorted({(c.p, c.k, c.a) for c in not_min})
    ok = not kills and not not_min and dt < 5
    detail = f"{len(cases)} cases, {dt:.2f}s"
    if not_min:
        detail += f"; minimality fails at (p,k,a) {combos}, all degenerate: {all(c.degenerate for c in not_min)}"
    criterion(7, "chi_{a,b} Jordan relation under kir_up", ok, detail)
    # annihilation holds everywhere; minimality on every non-degenerate case
    assert not kills
    assert all(c.degenerate for c in not_min)
    assert dt < 5


@pytest.mark.xfail(strict=True, reason="(U - chi(p))^a kills the tail when p^k | a! chi(p)^a, e.g. p=3, k=1, a=3")
def test_criterion_7_literal_minimality():
    cases = jordan_cases(ps=(3, 5), ks=(1, 2, 3, 4), n_chars=50, a_max=3)
    assert all(c.index == c.a + 1 for c in cases)


def test_criterion_8_mahler(criterion):
    res, dt = timed(mahler_suite, count=500)
    ok = res.passed and dt < 5
    criterion(8, "Mahler round trip and isometry on 500 random functions", ok, f"{dt:.2f}s")
    assert ok, failing(res)


def test_criterion_9_predictor(criterion):
    t = time.perf_counter()
    _, r11 = cmd_predict("delta", 11, 5)
    d11 = r11["data"]
    ok11 = d11["ordinary"] and d11["alpha"] == str(ALPHA_11)
    _, r2 = cmd_predict("delta", 2, 5)
    d2 = r2["data"]
    ok2 = (not d2["ordinary"]) and d2["predicted_lower"] == [] and d2["compact_part"] == "S(Q_p^x)"
    _, rcm = cmd_predict("cm_32a", 5, 6, splitness="split")
    dcm = rcm["data"]
    tails = dcm["predicted_lower"]
    okcm = False
    if len(tails) == 2:
        prod = int(tails[0]["value_at_p"]) * int(tails[1]["value_at_p"])
        okcm = capped_valuation(prod, 5, 6) == 1
    dt = time.perf_counter() - t
    ok = ok11 and ok2 and okcm and dt < 5
    criterion(9, "Predictor: Delta@11 ordinary, Delta@2 compact only, CM@5 split two tails", ok,
              f"delta11={ok11} delta2={ok2} cm={okcm}, {dt:.2f}s")
    assert ok


def test_criterion_10_companion_probe(criterion):
    t = time.perf_counter()
    _, rcm = cmd_predict("cm_32a", 5, 6, splitness="split")
    probe = rcm["data"]["companion_probe"]
    dt = time.perf_counter() - t
    ok = probe["passed"] and dt < 10
    criterion(10, "Companion divisibility probe (informative) on CM dataset", ok,
              f"cm_verified={probe['cm_verified']}, checked {probe['checked']}, {dt:.2f}s")
    if probe["cm_verified"]:
        assert probe["passed"], probe["failures"]
