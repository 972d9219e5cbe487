"""Command line interface: every check and construction, with JSON reports.

Machine-readable reports go to standard output (deterministic bytes for
identical inputs and seed), a one-line human summary with timing goes to
standard error.  Exit codes: 0 all checks passed, 1 a check failed
(non-zero residual or no certificate), 2 usage or input error.

Anywhere a file path is accepted, ``catalog:<name>?<param>=<value>``
resolves a built-in entry instead: an R slot takes the entry's R-matrix,
an F slot takes its twist's F, a pair slot takes the whole pair.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import catalog
from .errors import CatalogError, FormatError, YbtError
from .factorized import (
    check_split_A,
    check_split_B,
    omega_split_A,
    omega_split_B,
)
from .formats import (
    canonical_dumps,
    components_from_obj,
    load_json,
    load_operator,
    operator_to_obj,
    pretty_dumps,
    subspace_to_obj,
)
from .fusion import f_components_from_omega, fuse_r, te1_residual
from .subspace_solver import (
    intertwiner_space,
    invertible_certificate,
    r_symmetric_space,
)
from .tensor_core import Operator, RATIONAL
from .twist_engine import (
    TwistPair,
    apply_twist,
    aux_identity_residual,
    check_pair,
    magnitude_ok,
)
from .ybe_check import ybe_residual


def _residual_json(value):
    return str(value) if isinstance(value, Fraction) else float(value)


def _parse_catalog_ref(ref: str):
    body = ref[len("catalog:"):]
    name, _, query = body.partition("?")
    params = {}
    if query:
        for piece in query.split("&"):
            key, sep, value = piece.partition("=")
            if not key or not sep or not value:
                raise FormatError(f"bad catalog parameter {piece!r}", ref)
            params[key] = value
    return name, params


def _resolve_entry(ref: str) -> catalog.CatalogEntry:
    name, params = _parse_catalog_ref(ref)
    return catalog.get(name, params)


def resolve_r(ref: str) -> Operator:
    if ref.startswith("catalog:"):
        return _resolve_entry(ref).r
    return load_operator(ref)


def resolve_f(ref: str) -> Operator:
    if ref.startswith("catalog:"):
        entry = _resolve_entry(ref)
        if entry.twist is None:
            raise CatalogError(f"catalog entry {entry.name!r} carries no twist")
        return entry.twist.f
    return load_operator(ref)


def resolve_pair(ref: str) -> TwistPair:
    if ref.startswith("catalog:"):
        entry = _resolve_entry(ref)
        if entry.twist is None:
            raise CatalogError(f"catalog entry {entry.name!r} carries no twist")
        return entry.twist
    f_path, sep, g_path = ref.partition(",")
    if not sep:
        raise FormatError(
            'a pair is "<f-file>,<g-file>" or "catalog:<name>"', ref
        )
    return TwistPair(load_operator(f_path), load_operator(g_path))


def _resolve_components(ref: str, needed_legs: int) -> dict:
    if ref.startswith("catalog:"):
        entry = _resolve_entry(ref)
        if entry.regime == "split_A":
            build = omega_split_A
        elif entry.regime == "split_B":
            build = omega_split_B
        else:
            raise CatalogError(
                f"catalog entry {entry.name!r} has no split regime to build "
                "components from"
            )
        f = entry.twist.f
        omegas = {j: build(f, j) for j in range(2, needed_legs + 1)}
        components = {}
        for m in range(needed_legs + 1):
            for n in range(needed_legs + 1 - m):
                if m and n:
                    components[(m, n)] = f_components_from_omega(omegas, m, n)
        return components
    return components_from_obj(load_json(ref), str(ref))


def _write_or_embed(args, outputs: dict, key: str, obj: dict):
    if getattr(args, "out", None):
        Path(args.out).write_text(pretty_dumps(obj))
        outputs["path"] = str(args.out)
    else:
        outputs[key] = obj


def _check_backend_verdict(residuals: dict, backend: str, tol):
    return all(magnitude_ok(v, backend, tol) for v in residuals.values())


# ---------------------------------------------------------------------------
# handlers: each returns (report dict, verdict)
# ---------------------------------------------------------------------------


def _cmd_verify_ybe(args):
    r = resolve_r(args.r)
    res = ybe_residual(r)
    verdict = magnitude_ok(res, r.backend, args.tol)
    report = {
        "command": "verify-ybe",
        "inputs": {"r": args.r},
        "residuals": {"ybe": _residual_json(res)},
        "verdict": verdict,
    }
    return report, verdict


def _cmd_twist(args):
    r = resolve_r(args.r)
    f = resolve_f(args.f)
    twisted = apply_twist(r, f)
    res = ybe_residual(twisted)
    outputs: dict = {}
    _write_or_embed(args, outputs, "operator", operator_to_obj(twisted))
    report = {
        "command": "twist",
        "inputs": {"r": args.r, "f": args.f},
        "residuals": {"ybe_r_twisted": _residual_json(res)},
        "verdict": True,
        "outputs": outputs,
        "notes": ["the twisted-matrix YBE residual is informational here"],
    }
    return report, True


def _cmd_check_pair(args):
    r = resolve_r(args.r)
    pair = resolve_pair(args.pair)
    module_report = check_pair(r, pair, args.tol)
    aux = aux_identity_residual(r, pair)
    residuals = dict(module_report.residuals)
    residuals["aux"] = aux
    gating = {k: residuals[k] for k in ("cond1", "cond2", "cond3", "aux")}
    verdict = _check_backend_verdict(gating, r.backend, args.tol)
    report = {
        "command": "check-pair",
        "inputs": {"r": args.r, "pair": args.pair},
        "residuals": {k: _residual_json(v) for k, v in residuals.items()},
        "verdict": verdict,
        "notes": [*module_report.notes, "verdict gates on cond1, cond2, cond3, aux"],
    }
    return report, verdict


def _cmd_check_split(args):
    r = resolve_r(args.r)
    f = resolve_f(args.f)
    check = check_split_A if args.variant == "A" else check_split_B
    module_report = check(r, f, args.tol)
    report = {
        "command": "check-split",
        "inputs": {"r": args.r, "f": args.f, "variant": args.variant},
        "residuals": {
            k: _residual_json(v) for k, v in module_report.residuals.items()
        },
        "verdict": module_report.verdict,
    }
    return report, module_report.verdict


def _cmd_fuse(args):
    r = resolve_r(args.r)
    fused = fuse_r(r, args.m, args.n, max_legs=args.max_legs)
    outputs: dict = {}
    _write_or_embed(args, outputs, "operator", operator_to_obj(fused))
    report = {
        "command": "fuse",
        "inputs": {"r": args.r, "m": args.m, "n": args.n},
        "residuals": {},
        "verdict": True,
        "outputs": outputs,
    }
    return report, True


def _cmd_rsym(args):
    r = resolve_r(args.r)
    cap = r.site_dim**args.max_legs
    basis = r_symmetric_space(r, args.n, size_cap=cap)
    outputs: dict = {"dimension": basis.dimension}
    _write_or_embed(args, outputs, "subspace", subspace_to_obj(basis))
    report = {
        "command": "rsym",
        "inputs": {"r": args.r, "n": args.n},
        "residuals": {},
        "verdict": True,
        "outputs": outputs,
    }
    return report, True


def _cmd_intertwine(args):
    r = resolve_r(args.r)
    s = resolve_r(args.s)
    cap = r.site_dim**args.max_legs
    basis = intertwiner_space(r, s, args.n, size_cap=cap)
    found = invertible_certificate(basis, budget=args.budget, seed=args.seed)
    outputs: dict = {"dimension": basis.dimension}
    notes = []
    if found is None:
        verdict = False
        notes.append(
            f"no invertible certificate found within budget {args.budget}; "
            "this is not a proof that none exists"
        )
    else:
        verdict = True
        coefficients, _ = found
        outputs["certificate"] = {"coefficients": [str(c) for c in coefficients]}
    if getattr(args, "out", None):
        Path(args.out).write_text(pretty_dumps(subspace_to_obj(basis)))
        outputs["path"] = str(args.out)
    report = {
        "command": "intertwine",
        "inputs": {
            "r": args.r,
            "s": args.s,
            "n": args.n,
            "budget": args.budget,
            "seed": args.seed,
        },
        "residuals": {},
        "verdict": verdict,
        "outputs": outputs,
    }
    if notes:
        report["notes"] = notes
    return report, verdict


def _cmd_omega(args):
    f = resolve_f(args.f)
    if args.n > args.max_legs:
        from .errors import SizeCapError

        raise SizeCapError(
            f"omega on {args.n} legs is above the cap {args.max_legs}"
        )
    build = omega_split_A if args.variant == "A" else omega_split_B
    omega = build(f, args.n)
    outputs: dict = {}
    _write_or_embed(args, outputs, "operator", operator_to_obj(omega))
    report = {
        "command": "omega",
        "inputs": {"f": args.f, "n": args.n, "variant": args.variant},
        "residuals": {},
        "verdict": True,
        "outputs": outputs,
    }
    return report, True


def _cmd_te1(args):
    needed = args.m + args.n + args.k
    components = _resolve_components(args.components, needed)
    res = te1_residual(components, args.m, args.n, args.k)
    backend = next(iter(components.values())).backend if components else RATIONAL
    verdict = magnitude_ok(res, backend, args.tol)
    report = {
        "command": "te1",
        "inputs": {
            "components": args.components,
            "m": args.m,
            "n": args.n,
            "k": args.k,
        },
        "residuals": {"te1": _residual_json(res)},
        "verdict": verdict,
    }
    return report, verdict


def _cmd_catalog_list(args):
    report = {
        "command": "catalog-list",
        "inputs": {},
        "residuals": {},
        "verdict": True,
        "outputs": {"names": catalog.names()},
    }
    return report, True


def _cmd_catalog_get(args):
    name, params = _parse_catalog_ref("catalog:" + args.name)
    entry = catalog.get(name, params)
    outputs: dict = {}
    _write_or_embed(args, outputs, "entry", catalog.entry_to_obj(entry))
    report = {
        "command": "catalog-get",
        "inputs": {"name": args.name},
        "residuals": {},
        "verdict": True,
        "outputs": outputs,
    }
    return report, True


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--tol", type=float, default=None,
                   help="verdict tolerance, complex backend only (default 1e-9)")
    p.add_argument("--max-legs", type=int, default=6, dest="max_legs",
                   help="refuse computations beyond this many legs (default 6)")
    p.add_argument("--json", action="store_true",
                   help="machine-readable output (the default; kept for scripts)")
    p.add_argument("--quiet", action="store_true",
                   help="suppress the human summary on standard error")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ybt",
        description="Exact checks and constructions for constant Yang-Baxter "
        "R-matrices, their twists and fusions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-ybe", help="Yang-Baxter residual of a two-leg operator")
    p.add_argument("r", help="R-matrix file or catalog:<name>")
    _add_common(p)
    p.set_defaults(func=_cmd_verify_ybe)

    p = sub.add_parser("twist", help="apply F21^-1 R F")
    p.add_argument("r")
    p.add_argument("f")
    p.add_argument("-o", "--out", default=None, help="write the result here")
    _add_common(p)
    p.set_defaults(func=_cmd_twist)

    p = sub.add_parser("check-pair", help="twist-pair conditions and aux identity")
    p.add_argument("r")
    p.add_argument("--pair", required=True,
                   help='"<f-file>,<g-file>" or catalog:<name>')
    _add_common(p)
    p.set_defaults(func=_cmd_check_pair)

    p = sub.add_parser("check-split", help="factorization conditions, variant A or B")
    p.add_argument("r")
    p.add_argument("f")
    p.add_argument("--variant", choices=("A", "B"), required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_check_split)

    p = sub.add_parser("fuse", help="fused block matrix R^{m,n}")
    p.add_argument("r")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-o", "--out", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("rsym", help="basis of the R-symmetric space on n legs")
    p.add_argument("r")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-o", "--out", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_rsym)

    p = sub.add_parser("intertwine",
                       help="braid intertwiner space of two R-matrices plus "
                            "an invertibility certificate search")
    p.add_argument("r")
    p.add_argument("s")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--budget", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_intertwine)

    p = sub.add_parser("omega", help="n-leg intertwiner product of a split twist")
    p.add_argument("f")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--variant", choices=("A", "B"), required=True)
    p.add_argument("-o", "--out", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_omega)

    p = sub.add_parser("te1", help="component twist equation residual")
    p.add_argument("components",
                   help="component-map file or catalog:<name> with a split regime")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_te1)

    p = sub.add_parser("catalog", help="built-in example data")
    csub = p.add_subparsers(dest="catalog_command", required=True)
    pl = csub.add_parser("list", help="names of the built-in entries")
    _add_common(pl)
    pl.set_defaults(func=_cmd_catalog_list)
    pg = csub.add_parser("get", help="fetch and validate one entry")
    pg.add_argument("name", help='entry name, optionally with "?param=value"')
    pg.add_argument("-o", "--out", default=None)
    _add_common(pg)
    pg.set_defaults(func=_cmd_catalog_get)

    return parser


def dispatch(argv=None) -> int:
    """Run one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    started = time.perf_counter()
    try:
        report, verdict = args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except YbtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - started
    sys.stdout.write(canonical_dumps(report))
    if not args.quiet:
        state = "ok" if verdict else "FAILED"
        shown = ", ".join(
            f"{k}={v}" for k, v in report.get("residuals", {}).items()
        )
        tail = f" [{shown}]" if shown else ""
        print(
            f"{report['command']}: {state} in {elapsed:.3f}s{tail}",
            file=sys.stderr,
        )
    return 0 if verdict else 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
