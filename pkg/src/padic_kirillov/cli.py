"""Command line front end.

Exit codes: 0 when every check passes, 1 when an identity fails, 2 on
configuration errors (bad flags, unreadable or invalid input).
"""

from __future__ import annotations

import argparse
import sys
import warnings

from . import __version__
from .errors import NonOrdinaryError, PadicError, SchemaError
from .io import dump_kirillov_csv, dump_qexp_csv, load_newform, newform_to_doc, write_json
from .ordinary import p_stabilization
from .padic import capped_valuation, vp
from .profinite import KirillovFn, SmoothChar
from .qexp import NewformData, delta_newform
from .smoothrep import (
    SPLITNESS,
    LocalParams,
    local_params_from_hecke,
    report as local_report,
)
from .suites import (
    doublecoset_suite,
    fourier_suite,
    kirillov_suite,
    local_suite,
    mahler_suite,
    ordinary_suite,
)
from .validation import check_precision, check_prime, check_truncation

SUITES = ("fourier", "kirillov", "ordinary", "doublecoset", "local", "all")


class ConfigError(Exception):
    pass


def _metadata(command: str, config: dict) -> dict:
    return {"tool": "padic-kirillov", "version": __version__, "command": command, "config": config}


def _check_config(p, k, N=None):
    try:
        check_prime(p)
        check_precision(k)
        if N is not None:
            check_truncation(N, p)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def _load(form: str, strict=False, need: int = 0) -> NewformData:
    """Load a newform; the bundled Delta is recomputed exactly when ``need``
    exceeds the stored table."""
    try:
        f = load_newform(form, strict=strict)
    except (OSError, SchemaError) as exc:
        raise ConfigError(f"cannot ingest {form}: {exc}") from None
    if form == "delta" and f.N < need:
        f = delta_newform(need)
    return f


def cmd_ingest(path, strict=False) -> tuple[int, dict]:
    f = _load(path, strict)
    data = {
        "level": f.level,
        "weight": f.weight,
        "N": f.N,
        "eigenform": f.eigenform,
        "nebentypus_modulus": f.nebentypus_modulus,
        "metadata": f.metadata,
        "warnings": list(f.warnings),
    }
    return 0, {"metadata": _metadata("ingest", {"path": str(path), "strict": strict}), "data": data}


def cmd_verify(suite: str, p: int, k: int, N: int, seed: int = 0, form: str = "delta") -> tuple[int, dict]:
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}")
    _check_config(p, k, N)
    names = SUITES[:-1] if suite == "all" else (suite,)
    f = None
    if "ordinary" in names or "doublecoset" in names:
        f = _load(form, need=2 * N)
        if f.N < N:
            raise ConfigError(f"form has {f.N} coefficients, N={N} requested")
    results = {}
    for name in names:
        try:
            if name == "fourier":
                ms = tuple(m for m in (0, 1, 2) if m < k)
                r = fourier_suite(ps=(p,), ks=(k,), ms=ms, N=min(N, 200), seed=seed)
                r.checks.extend(mahler_suite(seed=seed).checks)
            elif name == "kirillov":
                r = kirillov_suite(p, k, min(N, 500), seed=seed)
            elif name == "ordinary":
                if f.level % p == 0:
                    raise ConfigError("ordinary suite needs p prime to the level")
                r = ordinary_suite(f, p, k, N)
            elif name == "doublecoset":
                if k < 2:
                    raise ConfigError("double coset suite needs k >= 2")
                r = doublecoset_suite(f, (p,), k, N)
            else:
                r = local_suite(p if p != 2 else 3, max(k, 12), seed=seed)
        except PadicError as exc:
            raise ConfigError(f"{name}: {exc}") from None
        results[name] = r.as_dict()
    passed = all(r["passed"] for r in results.values())
    config = {"suite": suite, "p": p, "k": k, "N": N, "seed": seed, "form": form}
    return (0 if passed else 1), {"metadata": _metadata("verify", config), "passed": passed, "suites": results}


def companion_probe(f: NewformData, p: int, k: int, N: int | None = None) -> dict:
    """Divisibility of the beta-stabilisation: ``a_n = 0 mod p^(v_p(n) (w-1))``."""
    stab = p_stabilization(f, p, k, "nonunit", N)
    q = p**k
    bad = []
    for n, a in enumerate(stab.qexp.tolist(), start=1):
        e = min(k, vp(n, p) * (f.weight - 1))
        if a % p**e:
            bad.append(n)
    return {
        "informative": True,
        "cm_verified": bool(f.metadata.get("cm", False)),
        "checked": stab.qexp.N,
        "passed": not bad,
        "failures": bad[:10],
        "beta": str(stab.eigenvalue.residue % q),
    }


def cmd_predict(form: str, p: int, k: int, splitness="unknown", M_window=0, strict=False):
    _check_config(p, k)
    if splitness not in SPLITNESS:
        raise ConfigError(f"splitness must be one of {SPLITNESS}")
    if M_window < 0:
        raise ConfigError("--m-window must be >= 0")
    f = _load(form, strict)
    if f.weight <= 1:
        raise ConfigError("weight <= 1 forms are not supported")
    if p > f.N:
        raise ConfigError(f"a_{p} is not in the coefficient table")
    a_p = f.a(p)
    q = p**k
    out = {
        "form": {"level": f.level, "weight": f.weight, "name": f.metadata.get("name", "")},
        "p": p,
        "k": k,
        "splitness": splitness,
        "m_window": M_window,
        "a_p": str(a_p),
        "a_p_valuation": capped_valuation(a_p, p, k),
    }
    notes = list(f.warnings)
    params = None
    if f.level % p == 0:
        if f.level % (p * p) == 0 or a_p % q == 0:
            raise ConfigError("p^2 divides the level or a_p = 0: local type at p is not handled")
        params = LocalParams.special(SmoothChar.unramified(p, k, a_p), f.weight)
        out["ordinary"] = a_p % p != 0
        out["alpha"] = str(a_p % q)
    else:
        chi_p = f.chi(p)
        try:
            params = local_params_from_hecke(p, k, a_p, f.weight, chi_p)
            out["ordinary"] = True
            out["alpha"] = str(params.chars[0].value_at_p)
            out["beta"] = str(params.chars[1].value_at_p)
        except NonOrdinaryError:
            out["ordinary"] = False
            if splitness == "split":
                notes.append("split requested for non-ordinary data; a reducible local Galois representation forces ordinarity")
    if params is not None:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            out["local"] = local_report(params, f.weight, splitness, M_window)
        notes.extend(str(w.message) for w in caught)
        out["predicted_lower"] = out["local"]["predicted_lower"]
        out["predicted_upper"] = out["local"]["predicted_upper"]
        if f.level % p and out["ordinary"]:
            out["companion_probe"] = companion_probe(f, p, k)
    else:
        out["predicted_lower"] = []
        out["predicted_upper"] = []
    out["compact_part"] = "S(Q_p^x)"
    out["warnings"] = notes
    config = {"form": form, "p": p, "k": k, "splitness": splitness, "m_window": M_window}
    return 0, {"metadata": _metadata("predict", config), "data": out}


def cmd_dump(what: str, form: str, p: int, k: int, N: int, path) -> tuple[int, dict]:
    _check_config(p, k, N)
    f = _load(form, need=N)
    if what == "qexp":
        if f.N < N:
            raise ConfigError(f"form has {f.N} coefficients, N={N} requested")
        dump_qexp_csv(f.qexp(p, k, N), path)
        rows = N
    elif what == "kirillov":
        g = None
        if f.level % p:
            try:
                params = local_params_from_hecke(p, k, f.a(p), f.weight, f.chi(p))
                g = KirillovFn.from_tail(params.chars[0])
            except NonOrdinaryError:
                g = None
        dump_kirillov_csv(g, path)
        rows = 0 if g is None else len(g.tail) + sum(len(s.table) for _, s in g.shells)
    elif what == "newform":
        write_json(newform_to_doc(f), path)
        rows = f.N
    else:
        raise ConfigError(f"unknown dump target {what!r}")
    config = {"what": what, "form": form, "p": p, "k": k, "N": N, "path": str(path)}
    return 0, {"metadata": _metadata("dump", config), "data": {"rows": rows}}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, default=11, help="prime (default 11)")
    common.add_argument("-k", type=int, default=5, help="precision exponent (default 5)")
    common.add_argument("-N", type=int, default=1000, help="truncation (default 1000)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised suites")
    common.add_argument("--strict", action="store_true", help="treat ingestion warnings as errors")
    common.add_argument("-o", "--output", help="write the JSON report (or CSV dump) here")

    parser = argparse.ArgumentParser(prog="padic-kirillov", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    ing = sub.add_parser("ingest", parents=[common], help="validate a newform file")
    ing.add_argument("path")

    ver = sub.add_parser("verify", parents=[common], help="run verification suites")
    ver.add_argument("--suite", choices=SUITES, default="all")
    ver.add_argument("--form", default="delta", help="newform file or bundled name (delta, cm_32a)")

    pre = sub.add_parser("predict", parents=[common], help="predict W_pi for a newform at p")
    pre.add_argument("--form", default="delta")
    pre.add_argument("--splitness", choices=SPLITNESS, default="unknown")
    pre.add_argument("--m-window", type=int, default=0)

    dmp = sub.add_parser("dump", parents=[common], help="write CSV/JSON dumps")
    dmp.add_argument("what", choices=("qexp", "kirillov", "newform"))
    dmp.add_argument("--form", default="delta")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "ingest":
            code, rep = cmd_ingest(args.path, args.strict)
        elif args.command == "verify":
            code, rep = cmd_verify(args.suite, args.p, args.k, args.N, args.seed, args.form)
        elif args.command == "predict":
            code, rep = cmd_predict(args.form, args.p, args.k, args.splitness, args.m_window, args.strict)
        else:
            if not args.output:
                raise ConfigError("dump needs -o <path>")
            code, rep = cmd_dump(args.what, args.form, args.p, args.k, args.N, args.output)
            print(write_json(rep), end="")
            return code
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = write_json(rep, args.output)
    if not args.output:
        print(text, end="")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
