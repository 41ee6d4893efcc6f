"""Kirillov models of smooth GL2(Q_p) representations from local parameters.

Characters are stored in combined form: the half-integral twist is already
folded in, so ``value_at_p`` of each stored character is a Frobenius
eigenvalue (alpha or beta) and no square root of p is ever chosen.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import PadicError, PrecisionError
from .padic import PadicApprox, capped_valuation, hensel_unit_root
from .profinite import CharTail, SmoothChar, char_eval
from .validation import check_precision, check_prime

PRINCIPAL_SERIES = "PrincipalSeries"
SPECIAL = "Special"
SUPERCUSPIDAL = "Supercuspidal"
ONE_DIMENSIONAL = "OneDimensional"
KINDS = (PRINCIPAL_SERIES, SPECIAL, SUPERCUSPIDAL, ONE_DIMENSIONAL)
_N_CHARS = {PRINCIPAL_SERIES: 2, SPECIAL: 1, SUPERCUSPIDAL: 0, ONE_DIMENSIONAL: 1}


@dataclass(frozen=True)
class LocalParams:
    """Local data at p in combined form.

    ``chars`` holds two characters for principal series, one for special
    and one-dimensional representations, none for supercuspidals.
    ``nebentypus_at_p`` is chi(p) for the global nebentypus when known, used
    to pin down the central character exactly.  ``central`` supplies the
    central character for supercuspidals.
    """

    p: int
    kind: str
    chars: tuple = ()
    weight: int | None = None
    nebentypus_at_p: int | None = None
    central: SmoothChar | None = None

    def __post_init__(self):
        check_prime(self.p)
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        chars = tuple(self.chars)
        object.__setattr__(self, "chars", chars)
        if len(chars) != _N_CHARS[self.kind]:
            raise ValueError(f"{self.kind} needs {_N_CHARS[self.kind]} characters, got {len(chars)}")
        for c in chars:
            if c.p != self.p:
                raise PadicError("character prime differs from p")
        if self.weight is not None:
            if self.weight <= 1:
                raise ValueError("weight <= 1 parameters are not supported")
            if self.kind == PRINCIPAL_SERIES:
                self._check_valuations()

    def _check_valuations(self):
        target = self.weight - 1
        known, capped, k = 0, 0, self.k
        for c in self.chars:
            v = c.valuation_at_p
            if v >= c.k:
                capped += 1
            else:
                known += v
        ok = known == target if capped == 0 else known + capped * k <= target
        if not ok:
            vals = [c.valuation_at_p for c in self.chars]
            raise PadicError(
                f"valuations {vals} of alpha, beta do not sum to weight - 1 = {target}"
            )

    @property
    def k(self) -> int:
        if self.chars:
            return min(c.k for c in self.chars)
        return self.central.k if self.central is not None else 1

    @classmethod
    def principal_series(cls, chi1, chi2, weight=None, nebentypus_at_p=None):
        return cls(chi1.p, PRINCIPAL_SERIES, (chi1, chi2), weight, nebentypus_at_p)

    @classmethod
    def unramified_ps(cls, p, k, alpha, beta, weight=None, nebentypus_at_p=None):
        return cls.principal_series(
            SmoothChar.unramified(p, k, alpha), SmoothChar.unramified(p, k, beta), weight,
            nebentypus_at_p,
        )

    @classmethod
    def special(cls, chi, weight=None, nebentypus_at_p=None):
        return cls(chi.p, SPECIAL, (chi,), weight, nebentypus_at_p)

    @classmethod
    def supercuspidal(cls, p, central=None, weight=None):
        return cls(p, SUPERCUSPIDAL, (), weight, None, central)


@dataclass(frozen=True)
class Classification:
    kind: str
    irreducible: bool
    witness: str = ""


def classify(params: LocalParams) -> Classification:
    """Kind plus irreducibility; principal series are reducible exactly when
    the two characters differ by the norm character (combined values at p
    differ by a factor p and the unit parts agree)."""
    if params.kind != PRINCIPAL_SERIES:
        return Classification(params.kind, True)
    c1, c2 = params.chars
    q = min(c1.k, c2.k)
    mod = params.p**q
    a, b = c1.value_at_p % mod, c2.value_at_p % mod
    if c1.minimal().table == c2.minimal().table and c1.minimal().m == c2.minimal().m:
        if (a * params.p - b) % mod == 0:
            return Classification(PRINCIPAL_SERIES, False, "chi2 = chi1 |.|^-1 (beta = p alpha)")
        if (b * params.p - a) % mod == 0:
            return Classification(PRINCIPAL_SERIES, False, "chi1 = chi2 |.|^-1 (alpha = p beta)")
    return Classification(PRINCIPAL_SERIES, True)


@dataclass(frozen=True)
class JacquetModule:
    """Characters of the torus on the Jacquet module, with extension flags."""

    chars: tuple = ()

    def __post_init__(self):
        if len(self.chars) > 2:
            raise ValueError("a Jacquet module here has length at most 2")
        flags = [f for _, f in self.chars]
        if any(flags) and not (len(self.chars) == 2 and self.chars[0][0] == self.chars[1][0]):
            raise ValueError("extension flag needs two equal characters")

    @property
    def dim(self) -> int:
        return len(self.chars)


def _infinite_dimensional(params: LocalParams) -> Classification:
    cl = classify(params)
    if params.kind == ONE_DIMENSIONAL:
        raise PadicError("one-dimensional representation: no Kirillov model")
    if not cl.irreducible:
        raise PadicError(f"reducible principal series ({cl.witness}); pass its constituents")
    return cl


def jacquet(params: LocalParams) -> JacquetModule:
    _infinite_dimensional(params)
    if params.kind == PRINCIPAL_SERIES:
        c1, c2 = params.chars
        same = c1 == c2
        return JacquetModule(((c1, same), (c2, same)))
    if params.kind == SPECIAL:
        return JacquetModule(((params.chars[0], False),))
    return JacquetModule(())


def kirillov_lines(params: LocalParams) -> list:
    """Tails of the Kirillov model beyond the compactly supported part."""
    J = jacquet(params)
    if J.dim == 2 and J.chars[0][1]:
        chi = J.chars[0][0]
        return [CharTail(chi, 0), CharTail(chi, 1)]
    return [CharTail(chi, 0) for chi, _ in J.chars]


def completion_basis(params: LocalParams) -> list:
    """Tails that survive p-adic completion: those with a unit value at p."""
    out = [t for t in kirillov_lines(params) if t.chi.valuation_at_p == 0]
    if len(out) > 1:
        raise PadicError(
            "invariant violation: more than one unit-valuation tail survives completion"
        )
    return out


@dataclass(frozen=True)
class CentralCharacter:
    """``z -> omega_p(z) z^(-weight)``.

    ``smooth`` carries ``omega_p`` with its value at p already divided by
    ``p^weight``; the algebraic factor ``u^(-weight)`` is applied on units
    at evaluation time.
    """

    smooth: SmoothChar
    weight: int

    def __call__(self, x) -> int:
        v, u = x
        q = self.smooth.modulus
        return char_eval(self.smooth, (v, u)) * pow(u, -self.weight, q) % q

    def as_dict(self):
        return {
            "conductor": self.smooth.m,
            "unit_values": [str(x) for x in self.smooth.table],
            "value_at_p": str(self.smooth.value_at_p),
            "weight": self.weight,
        }


def central_char(params: LocalParams, weight: int) -> CentralCharacter:
    """Central character times ``z^(-weight)``.

    Principal series: ``omega_p(p) = alpha beta p``.  A special
    representation is the constituent of the principal series with combined
    values ``(alpha, p alpha)``, so ``omega_p(p) = alpha^2 p^2``.  The value
    at p after dividing by ``p^weight`` is the nebentypus value when given,
    otherwise an exact division that must be determined at precision k.
    """
    if weight <= 1:
        raise ValueError("weight <= 1 parameters are not supported")
    p = params.p
    if params.kind == SUPERCUSPIDAL:
        if params.central is None:
            raise PadicError("supercuspidal parameters need an explicit central character")
        omega = params.central
        k = omega.k
        top = omega.value_at_p
        unit = omega
    elif params.kind == ONE_DIMENSIONAL:
        raise PadicError("one-dimensional representation: not handled")
    else:
        chars = params.chars if params.kind == PRINCIPAL_SERIES else params.chars * 2
        unit = chars[0] * chars[1]
        k = unit.k
        extra = 1 if params.kind == PRINCIPAL_SERIES else 2
        top = unit.value_at_p * p**extra
    q = p**k
    if params.nebentypus_at_p is not None:
        at_p = params.nebentypus_at_p % q
        if params.kind != SUPERCUSPIDAL and (top - at_p * p**weight) % q:
            raise PadicError("root product is inconsistent with the nebentypus value (Vieta)")
        smooth = SmoothChar(p, k, unit.m, unit.table, at_p)
    else:
        # top / p^weight is only known modulo p^(k - weight)
        if weight >= k or top % p**weight:
            raise PrecisionError(
                "central character at p is not determined at this precision; "
                "supply the nebentypus value"
            )
        k2 = k - weight
        smooth = SmoothChar(p, k2, unit.m, unit.table, top // p**weight)
    return CentralCharacter(smooth, weight)


SPLITNESS = ("split", "nonsplit", "unknown")


@dataclass(frozen=True)
class PredictedSpace:
    """Bounds for W_pi: the compactly supported part plus the listed tails."""

    lower: tuple
    upper: tuple
    warnings: tuple = ()

    def contains(self) -> bool:
        """Whether ``lower`` is a subset of ``upper`` as tail families."""
        fam = {t.family() for t in self.upper}
        return all(t.family() in fam for t in self.lower)


def predict_W(params: LocalParams, weight: int, splitness: str = "unknown", M_window: int = 0):
    if splitness not in SPLITNESS:
        raise ValueError(f"splitness must be one of {SPLITNESS}")
    if M_window < 0:
        raise ValueError("M_window must be >= 0")
    notes = []
    if params.kind == SUPERCUSPIDAL:
        if splitness == "split":
            notes.append("split requested for supercuspidal parameters; ignored")
        return PredictedSpace((), (), tuple(notes))
    lower = list(completion_basis(params))
    if not lower and splitness == "split":
        notes.append("split requested but no unit-valuation character (non-ordinary)")
    if splitness == "split" and params.kind == PRINCIPAL_SERIES and lower:
        survivor = lower[0].chi
        for t in kirillov_lines(params):
            if t.chi != survivor and t.a == 0:
                lower.append(t)
    chars = []
    for t in lower:
        if t.chi not in chars:
            chars.append(t.chi)
    upper = [CharTail(chi, a, b) for chi in chars for a in range(M_window + 1) for b in range(M_window + 1)]
    for t in lower:
        if all(u.family() != t.family() for u in upper):
            upper.append(t)
    for msg in notes:
        warnings.warn(msg, stacklevel=2)
    return PredictedSpace(tuple(lower), tuple(upper), tuple(notes))


def local_params_from_hecke(p: int, k: int, a_p: int, weight: int, chi_p: int = 1):
    """Unramified principal-series parameters from ``x^2 - a_p x + chi(p) p^(w-1)``.

    Requires ordinarity (a unit ``a_p``) so that the roots split by Hensel's
    lemma; otherwise :class:`NonOrdinaryError` is raised.
    """
    check_prime(p)
    check_precision(k)
    q = p**k
    a = PadicApprox(p, k, a_p)
    c = PadicApprox(p, k, chi_p * pow(p, weight - 1, q))
    alpha = hensel_unit_root(a, c)
    beta = a - alpha
    return LocalParams.unramified_ps(p, k, alpha.residue, beta.residue, weight, chi_p)


def tail_dict(t: CharTail) -> dict:
    return {
        "conductor": t.chi.m,
        "unit_values": [str(x) for x in t.chi.table],
        "value_at_p": str(t.chi.value_at_p),
        "valuation": capped_valuation(t.chi.value_at_p, t.p, t.k),
        "a": t.a,
        "b": t.b,
    }


def report(params: LocalParams, weight: int, splitness="unknown", M_window=0) -> dict:
    """The JSON-ready report for one set of local parameters."""
    cl = classify(params)
    out = {"kind": cl.kind, "irreducible": cl.irreducible}
    if cl.witness:
        out["witness"] = cl.witness
    J = jacquet(params)
    pred = predict_W(params, weight, splitness, M_window)
    out["jacquet_dim"] = J.dim
    out["tails"] = [tail_dict(t) for t in kirillov_lines(params)]
    out["completion"] = [tail_dict(t) for t in completion_basis(params)]
    out["predicted_lower"] = [tail_dict(t) for t in pred.lower]
    out["predicted_upper"] = [tail_dict(t) for t in pred.upper]
    try:
        out["central_char"] = central_char(params, weight).as_dict()
    except PadicError as exc:
        out["central_char"] = {"error": str(exc)}
    if pred.warnings:
        out["warnings"] = list(pred.warnings)
    return out
