"""Verification suites: batches of exact identity checks with verdicts.

Each suite returns a :class:`SuiteResult` holding :class:`Check` records.
Every check carries an anchor string naming the identity it tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .cyclo import average_arrays
from .ordinary import HeckeLattice, coinvariant_tails, kernel_check, ordinary_projector, p_stabilization
from .padic import PadicApprox, capped_valuation, hensel_unit_root
from .profinite import (
    CharTail,
    KirillovFn,
    LocConstFn,
    SmoothChar,
    char_eval,
    chi_ab_eval,
    fiber_at_zero,
    fn_mul_action,
    indicator,
    kir_up,
    mahler_coeffs,
    mahler_eval,
    mahler_values,
    min_valuation,
    unit_residues,
)
from .qexp import (
    NewformData,
    QExpansion,
    circle_orbit,
    delta_newform,
    double_coset_check,
    eta_delta,
    hecke_U,
    kir_total,
    theta,
    twist,
)
from .smoothrep import (
    PRINCIPAL_SERIES,
    SPECIAL,
    SUPERCUSPIDAL,
    LocalParams,
    classify,
    completion_basis,
    jacquet,
    kirillov_lines,
)


@dataclass
class Check:
    name: str
    anchor: str
    params: dict
    passed: bool
    detail: str = ""

    def as_dict(self):
        out = {"name": self.name, "anchor": self.anchor, "params": self.params, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, *args, **kw):
        self.checks.append(Check(*args, **kw))

    def as_dict(self):
        return {
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
            "data": self.data,
        }


def random_expansion(p, k, N, rng) -> QExpansion:
    return QExpansion(p, k, [rng.randrange(p**k) for _ in range(N)])


def random_function(p, k, m, rng) -> LocConstFn:
    return LocConstFn(p, k, m, [rng.randrange(p**k) for _ in range(p**m)])


# --- Fourier duality and Mahler ------------------------------------------------


def fourier_suite(ps=(3, 5), ks=(1, 2, 3, 4, 5), ms=(0, 1, 2), N=200, n_random=50, seed=0, batch=8):
    """Averaged circle action against twists by coset indicators.

    For each ``(p, m, k)`` with ``k > m`` and each ``a`` mod p^m,
    ``(1/p^m) sum_j zeta^(-a j) circle_act(j, f)`` must equal
    ``twist(f, 1_{a + p^m Z_p})`` at precision ``k - m``.
    """
    res = SuiteResult("fourier")
    rng = random.Random(seed)
    for p in ps:
        for m in ms:
            for k in ks:
                if k <= m:
                    continue
                fs = [eta_delta(N, p, k)] + [random_expansion(p, k, N, rng) for _ in range(n_random)]
                bad = []
                for start in range(0, len(fs), batch):
                    chunk = fs[start : start + batch]
                    orbit, ring = circle_orbit(chunk, m)
                    F = np.array([f.coeffs for f in chunk], dtype=object)
                    idx = np.arange(1, N + 1) % p**m
                    for a in range(p**m):
                        avg, target = average_arrays(orbit, ring, a)
                        q2 = target.modulus
                        want = (F * (idx == a)) % q2
                        got_scalar = avg[..., 0].astype(object)
                        ok = not np.any(avg[..., 1:]) and np.array_equal(got_scalar, want)
                        if not ok:
                            bad.append((start, a))
                res.add(
                    "circle_average_equals_indicator_twist",
                    "avg_j zeta^(-a j) (circle_j f) = f * 1_{a + p^m Z_p}  mod p^(k-m)",
                    {"p": p, "m": m, "k": k, "N": N, "expansions": len(fs)},
                    not bad,
                    f"mismatch at (batch, a) {bad[:3]}" if bad else "",
                )
    return res


def mahler_suite(count=500, ps=(3, 5, 7), m_max=3, k_max=4, seed=0):
    res = SuiteResult("mahler")
    rng = random.Random(seed)
    round_trip = isometry = lift = 0
    first_bad = ""
    for i in range(count):
        p = rng.choice(ps)
        m, k = rng.randint(0, m_max), rng.randint(1, k_max)
        f = random_function(p, k, m, rng)
        c = mahler_coeffs(f)
        ok_rt = mahler_values(c, p, k, m) == list(f.table)
        ok_iso = min_valuation(f.table, p, k) == min_valuation(c, p, k)
        x = rng.randrange(p**m)
        r = rng.randrange(1, 4)
        ok_lift = mahler_eval(c, x + r * p**m, p, k) == f(x)
        round_trip += ok_rt
        isometry += ok_iso
        lift += ok_lift
        if not (ok_rt and ok_iso and ok_lift) and not first_bad:
            first_bad = f"function {i}: p={p} m={m} k={k}"
    params = {"count": count, "primes": list(ps), "m_max": m_max, "k_max": k_max, "seed": seed}
    res.add("mahler_round_trip", "sum_n c_n binom(x, n) = f(x)", params, round_trip == count, first_bad)
    res.add("mahler_isometry", "min v(f(x)) = min v(c_n)", params, isometry == count, first_bad)
    res.add("mahler_lift_independence", "value depends on x mod p^m only", params, lift == count, first_bad)
    return res


# --- Kirillov intertwining -------------------------------------------------------


def kirillov_suite(p=5, k=4, N=200, count=100, seed=0):
    res = SuiteResult("kirillov")
    rng = random.Random(seed)
    q = p**k
    params = {"p": p, "k": k, "N": N, "count": count, "seed": seed}
    bad_up = bad_theta = bad_mul = 0
    for i in range(count):
        f = eta_delta(N, p, k) if i == 0 else random_expansion(p, k, N, rng)
        kf = kir_total(f)
        ku = kir_total(hecke_U(p, f))
        if any(ku(n) != kf(p * n) for n in range(1, N // p + 1)):
            bad_up += 1
        kt = kir_total(theta(f))
        if any(kt(n) != n * kf(n) % q for n in range(1, N + 1)):
            bad_theta += 1
        g = random_function(p, k, rng.randint(0, 3), rng)
        lhs = kir_total(twist(f, g))
        rhs = fn_mul_action(g, kf)
        if lhs != rhs or any(lhs(n) != g(n) * kf(n) % q for n in range(1, N + 1)):
            bad_mul += 1
    res.add("kir_up", "Kir(U_p f)(n) = Kir(f)(p n)", params, bad_up == 0, f"{bad_up} failures" if bad_up else "")
    res.add("kir_theta", "Kir(theta f)(n) = n Kir(f)(n)", params, bad_theta == 0,
            f"{bad_theta} failures" if bad_theta else "")
    res.add("kir_function_action", "Kir(f * g)(n) = g(n) Kir(f)(n)", params, bad_mul == 0,
            f"{bad_mul} failures" if bad_mul else "")
    if p != 2:
        res.checks.extend(jordan_suite(ps=(p,), ks=(k,), n_chars=max(count // 10, 5), seed=seed).checks)
        res.checks.extend(germ_suite(p, k, count=max(count // 10, 5), seed=seed).checks)
    return res


def _jordan_index(g: KirillovFn, alpha: int, cap: int) -> int:
    """Smallest j with ``(kir_up - alpha)^j g = 0`` (``cap + 1`` if none up to cap)."""
    h = g
    for j in range(cap + 1):
        if h.is_zero():
            return j
        h = kir_up(h) - h.scale(alpha)
    return cap + 1


@dataclass
class JordanCase:
    p: int
    k: int
    a: int
    chi: SmoothChar
    index: int

    @property
    def degenerate(self) -> bool:
        """``a! chi(p)^a`` vanishes mod p^k, so ``(U - chi(p))^a`` kills the tail."""
        return (factorial(self.a) * pow(self.chi.value_at_p, self.a, self.p**self.k)) % self.p**self.k == 0


def jordan_cases(ps=(3, 5), ks=(1, 2, 3, 4), n_chars=50, a_max=3, seed=0, m_max=2):
    rng = random.Random(seed)
    cases = []
    for p in ps:
        for k in ks:
            for _ in range(n_chars):
                chi = SmoothChar.random(p, k, rng.randint(0, m_max), rng)
                for a in range(a_max + 1):
                    g = KirillovFn.from_tail(chi, a=a, b=0, coefficient=1)
                    cases.append(JordanCase(p, k, a, chi, _jordan_index(g, chi.value_at_p, a + 2)))
    return cases


def jordan_suite(ps=(3, 5), ks=(1, 2, 3, 4), n_chars=50, a_max=3, seed=0):
    """``(kir_up - chi(p))^(a+1)`` kills the ``(chi, a, 0)`` tail and the a-th power does not."""
    res = SuiteResult("jordan")
    cases = jordan_cases(ps, ks, n_chars, a_max, seed)
    params = {"primes": list(ps), "precisions": list(ks), "chars": n_chars, "a_max": a_max, "seed": seed}
    kills = [c for c in cases if c.index > c.a + 1]
    not_min = [c for c in cases if c.index <= c.a]
    res.add("jordan_annihilation", "(kir_up - chi(p))^(a+1) chi_{a,0} = 0", params, not kills,
            f"{len(kills)} failures" if kills else "")
    detail = ""
    if not_min:
        combos = sorted({(c.p, c.k, c.a) for c in not_min})
        detail = f"{len(not_min)} cases, (p, k, a) in {combos}; degenerate (a! chi(p)^a = 0 mod p^k): " + str(
            all(c.degenerate for c in not_min)
        )
    res.add("jordan_minimality", "(kir_up - chi(p))^a chi_{a,0} != 0", params, not not_min, detail)
    res.data["cases"] = len(cases)
    return res


def germ_suite(p=5, k=3, count=20, seed=0):
    """Fiber at 0 ignores shells and the action of 1_{Z_p}; eigen-relation of 1_{Z_p} chi."""
    res = SuiteResult("germ")
    rng = random.Random(seed)
    params = {"p": p, "k": k, "count": count, "seed": seed}
    one = LocConstFn.constant(p, k, 1)
    ind = indicator(0, 0, p, k)
    bad_fiber = bad_eigen = bad_shell = 0
    for _ in range(count):
        chi = SmoothChar.random(p, k, rng.randint(0, 2), rng)
        g = KirillovFn.from_tail(chi, a=rng.randint(0, 2), b=rng.randint(0, 1))
        shells = {v: random_function(p, k, 1, rng).restrict_to_units() for v in range(-2, 3)}
        h = g + KirillovFn.compact(p, k, shells)
        if fiber_at_zero(fn_mul_action(ind, h)) != fiber_at_zero(h) or fn_mul_action(one, h) != h:
            bad_fiber += 1
        if fiber_at_zero(h) != fiber_at_zero(g):
            bad_shell += 1
        e = KirillovFn.from_tail(chi)
        if kir_up(e) != e.scale(chi.value_at_p):
            bad_eigen += 1
    res.add("fiber_ignores_indicator", "fiber_0(1_{Z_p} g) = fiber_0(g)", params, bad_fiber == 0)
    res.add("fiber_ignores_shells", "fiber_0(g + s) = fiber_0(g), s compactly supported", params, bad_shell == 0)
    res.add("tail_eigenline", "kir_up(1_{Z_p} chi) = chi(p) 1_{Z_p} chi", params, bad_eigen == 0)
    return res


# --- ordinary part ------------------------------------------------------------


def ordinary_lattice(f: NewformData, p: int, k: int, N: int) -> HeckeLattice:
    g = f.qexp(p, k, N)
    return HeckeLattice([g, g.substitute_power(p)], p, k)


def ordinary_summary(f: NewformData, p: int, k: int, N: int) -> dict:
    L = ordinary_lattice(f, p, k, N)
    M = L.up_matrix()
    e = ordinary_projector(M)
    rep = kernel_check(L, e)
    tails = coinvariant_tails(L, e)
    return {
        "lattice": L,
        "M": M,
        "e": e,
        "report": rep,
        "tails": tails,
    }


def ordinary_suite(f: NewformData | None = None, p=11, k=5, N=1500):
    """Projector, kernel comparison and rank stability on ``{f(q), f(q^p)}``."""
    if f is None:
        f = delta_newform(2 * N)
    res = SuiteResult("ordinary")
    params = {"p": p, "k": k, "N": N, "level": f.level, "weight": f.weight}
    s = ordinary_summary(f, p, k, N)
    M, e, rep, L = s["M"], s["e"], s["report"], s["lattice"]
    res.add("projector_idempotent", "e^2 = e", params, e.is_idempotent())
    res.add("projector_commutes", "e M = M e", params, e.commutes_with(M))
    res.add("kernel_equals_up_kernel", "ker e = ker U_p^(dim k)", params, rep.verdict == "equal", rep.verdict)
    res.add("kernel_image_direct_sum", "ker e + im e = lattice, lengths add", params, rep.direct_sum)
    a_p = PadicApprox(p, k, f.a(p))
    c = PadicApprox(p, k, f.chi(p) * pow(p, f.weight - 1, p**k))
    units = [int(a) for a, _ in s["tails"]]
    if a_p.is_unit():
        alpha = hensel_unit_root(a_p, c)
        res.add("unit_eigenvalue_is_hensel_root", "alpha^2 - a_p alpha + chi(p) p^(w-1) = 0, alpha unit",
                params, units == [alpha.residue], f"eigenvalues {units}, root {alpha.residue}")
        stab = p_stabilization(f, p, k, "unit", N)
        res.add("stabilization_eigen", "U_p f_alpha = alpha f_alpha", params,
                hecke_U(p, stab.qexp) == stab.qexp.truncate(N // p).scale(stab.eigenvalue.residue))
    else:
        res.add("non_ordinary_projector_zero", "e = 0 when a_p is not a unit", params, e.rank() == 0 and not units)
    rank = e.rank()
    if f.N >= 2 * N:
        r2 = ordinary_projector(ordinary_lattice(f, p, k, 2 * N).up_matrix()).rank()
        res.add("rank_stable_double_N", "rank e at N equals rank e at 2N", {**params, "N2": 2 * N}, r2 == rank,
                f"{rank} vs {r2}")
    r3 = ordinary_projector(ordinary_lattice(f, p, k + 1, N).up_matrix()).rank()
    res.add("rank_stable_k_plus_1", "rank e at k equals rank e at k+1", {**params, "k2": k + 1}, r3 == rank,
            f"{rank} vs {r3}")
    res.data = {
        "dim": L.dim,
        "rank_e": rank,
        "unit_eigenvalues": [str(u) for u in units],
        "kernel_dim": rep.kernel_dim,
        "kernel_verdict": rep.verdict,
        "tails": [
            {"value_at_p": str(t.chi.value_at_p), "a": t.a, "b": t.b}
            for _, ts in s["tails"] for t in ts
        ],
        "up_matrix": [[str(x) for x in row] for row in M.tolist()],
    }
    return res


def doublecoset_suite(f: NewformData | None = None, ps=(3, 5, 7), k=4, N=500):
    if f is None:
        f = delta_newform(N)
    res = SuiteResult("doublecoset")
    for p in ps:
        r = double_coset_check(p, f.qexp(p, k, N))
        res.add("double_coset_equals_up", "(1/p) sum_i f(zeta_p^i q^(1/p)) = U_p f  mod p^(k-1)",
                {"p": p, "k": k, "N": N}, r.ok, "" if r.ok else f"{r.message} at index {r.index}")
    return res


# --- local representations ------------------------------------------------------


def _random_unit(p, k, rng):
    u = rng.randrange(1, p**k)
    while u % p == 0:
        u = rng.randrange(1, p**k)
    return u


def random_params(kind: str, p: int, k: int, rng, weight=None):
    """Random well-formed local parameters of the given kind."""
    if kind == SUPERCUSPIDAL:
        return LocalParams.supercuspidal(p, SmoothChar.random(p, k, rng.randint(0, 2), rng), weight)
    if kind == SPECIAL:
        return LocalParams.special(SmoothChar.random(p, k, rng.randint(0, 2), rng), weight)
    w = weight if weight is not None else rng.randint(2, 12)
    while True:
        va = rng.randint(0, w - 1)
        vb = w - 1 - va
        m = rng.randint(0, 2)
        c1 = SmoothChar.random(p, k, m, rng)
        if va == vb and rng.random() < 0.2:
            chi = SmoothChar(p, k, c1.m, c1.table, p**va * _random_unit(p, k, rng))
            P = LocalParams.principal_series(chi, chi, w)
        else:
            c2 = SmoothChar.random(p, k, rng.randint(0, 2), rng)
            c1 = SmoothChar(p, k, c1.m, c1.table, p**va * _random_unit(p, k, rng))
            c2 = SmoothChar(p, k, c2.m, c2.table, p**vb * _random_unit(p, k, rng))
            P = LocalParams.principal_series(c1, c2, w)
        if classify(P).irreducible:
            return P


def local_suite(p=5, k=12, count=200, seed=0, weights=range(2, 13)):
    res = SuiteResult("local")
    rng = random.Random(seed)
    expected = {PRINCIPAL_SERIES: 2, SPECIAL: 1, SUPERCUSPIDAL: 0}
    params = {"p": p, "k": k, "count": count, "seed": seed}
    for kind, dim in expected.items():
        bad = card = 0
        for _ in range(count):
            P = random_params(kind, p, k, rng)
            if jacquet(P).dim != dim:
                bad += 1
            if len(completion_basis(P)) > 1:
                card += 1
        res.add(f"jacquet_dim_{kind}", f"dim J = {dim}", {**params, "kind": kind}, bad == 0,
                f"{bad} mismatches" if bad else "")
        res.add(f"completion_at_most_one_{kind}", "#completion <= 1", {**params, "kind": kind}, card == 0)
    bad = []
    grid = 0
    for w in weights:
        for va in range(w):
            vb = w - 1 - va
            P = LocalParams.unramified_ps(p, k, p**va, -(p**vb) % p**k, w)
            got = [capped_valuation(t.chi.value_at_p, p, k) for t in completion_basis(P)]
            want = [v for v in (va, vb) if v == 0]
            grid += 1
            if got != want:
                bad.append((w, va, vb))
    res.add("completion_unit_filter", "tail survives completion iff v(chi(p)) = 0",
            {"p": p, "k": k, "weights": [min(weights), max(weights)], "pairs": grid}, not bad,
            f"mismatch at {bad[:3]}" if bad else "")
    if p != 2:
        chis = [SmoothChar.random(p, 3, m, rng) for m in (0, 1, 2) for _ in range(3)]
        bad_ab = 0
        for chi in chis:
            for u in unit_residues(p, chi.m):
                for v in range(-3, 4):
                    if chi_ab_eval(CharTail(chi, 0, 0), (v, u)) != char_eval(chi, (v, u)):
                        bad_ab += 1
        res.add("chi_00_is_char", "chi_{0,0} = chi", {"p": p, "k": 3, "chars": len(chis)}, bad_ab == 0)
        bad_lines = 0
        for kind in (PRINCIPAL_SERIES, SPECIAL):
            for _ in range(20):
                P = random_params(kind, p, 4, rng)
                for t in kirillov_lines(P):
                    g = KirillovFn.from_tail(t.chi, t.a, t.b)
                    if _jordan_index(g, t.chi.value_at_p, t.a + 2) > t.a + 1:
                        bad_lines += 1
        res.add("kirillov_lines_jordan", "(kir_up - chi(p))^(a+1) kills each Kirillov line",
                {"p": p, "k": 4}, bad_lines == 0)
    return res
