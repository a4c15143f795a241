"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .beta import StabilizationError, check_pullback_levels, classify, engine
from .certfile import load_certificate
from .closure import CertificateError
from .grammar import FormSyntaxError, format_form
from .maps import MapError, resolve_map
from .templates import TemplateError
from .varieties import VarietyError, resolve_variety

SCHEMA = "betasheaf.report/1"
OK, FAILED, INPUT_ERROR = 0, 1, 2

log = logging.getLogger("betasheaf")


class InputError(Exception):
    pass


def envelope(command: str, result) -> dict:
    return {"schema": SCHEMA, "version": __version__, "command": command, "result": result}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _emit(args, command: str, result, text: str) -> None:
    payload = dumps(envelope(command, result)) if args.json else text.rstrip("\n") + "\n"
    if args.out:
        try:
            Path(args.out).write_text(payload, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        sys.stdout.write(payload)


def _variety(args):
    if not args.variety:
        raise InputError("--variety is required")
    return resolve_variety(args.variety)


def _form(spec, text: Optional[str], degree: Optional[int] = None):
    if not text:
        raise InputError("--form is required")
    return spec.form(text, degree)


# --------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> int:
    spec = _variety(args)
    u = _form(spec, args.form)
    cert = load_certificate(args.cert, spec) if args.cert else None
    rep = classify(spec, u, cert, args.level_cap)
    _emit(args, "classify", rep.to_json(), rep.table())
    return OK


def cmd_beta(args) -> int:
    spec = _variety(args)
    eng = engine(spec)
    degrees = [args.degree] if args.degree is not None else list(range(spec.dimension + 1))
    result, lines = {}, []
    for q in degrees:
        gs, p_star = eng.beta(q, args.level_cap)
        result[str(q)] = {"p_star": p_star, "set": gs.to_json()}
        lines.append(f"beta^{q} of {spec.id}: p* = {p_star}")
        lines += [f"  {format_form(g)}    [{p}]" for g, p in zip(gs.ambient_generators(), gs.provenance)]
    _emit(args, "beta", result, "\n".join(lines))
    return OK


def cmd_levels(args) -> int:
    spec = _variety(args)
    eng = engine(spec)
    q = args.degree if args.degree is not None else spec.dimension
    cap = q + 2 if args.level_cap is None else args.level_cap
    result, lines = [], []
    for p in range(cap + 1):
        gs = eng.level(q, p)
        result.append(gs.to_json())
        lines.append(f"alpha^{q}[{p}]: {len(gs)} generators")
        lines += [f"  {format_form(g)}" for g in gs.ambient_generators()]
    _emit(args, "levels", result, "\n".join(lines))
    return OK


def cmd_pullback_check(args) -> int:
    if not args.map:
        raise InputError("--map is required")
    f = resolve_map(args.map)
    levels = tuple(int(x) for x in args.levels.split(","))
    rep = check_pullback_levels(f, levels)
    text = f"{f.name}: {rep.checked} checks, {len(rep.violations)} violations"
    text += "".join(f"\n  {v}" for v in rep.violations)
    _emit(args, "pullback-check", rep.to_json(), text)
    return OK if rep.ok else FAILED


def _eps(args):
    from .integration import eps_sequence

    return eps_sequence(1e-1, args.eps_min, 10)


def _numeric_case(args, kind):
    from .integration import CutoffSpec, CycleSpec
    from .numcases import NumericCase, case

    if args.case:
        try:
            return case(args.case, kind)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    spec = _variety(args)
    if not args.patch:
        raise InputError("give --case or --variety with --patch")
    cyc = CycleSpec.from_text(spec, [c.strip() for c in args.patch.split(",")], radius=args.patch_radius)
    center = tuple(complex(c) for c in args.center.split(",")) if args.center else (0,) * len(spec.vars)
    rho = CutoffSpec(center, args.radius, args.smoothness)
    u = _form(spec, args.form)
    v = spec.form(args.form2) if args.form2 else u
    return NumericCase("custom", cyc, rho, u, v)


def _integral_text(name, rep) -> str:
    lines = [f"{name}: limit = {rep.limit.real:.12g} {rep.limit.imag:+.3g}i  "
             f"converged = {rep.converged}  mass = {rep.mass:.6g}  quad error = {rep.quad_error:.2g}"]
    lines += [f"  eps = {e:.3e}  value = {v.real:.12g} {v.imag:+.3g}i" for e, v in zip(rep.eps, rep.values)]
    return "\n".join(lines)


def cmd_integrate(args) -> int:
    from .integration import integrate

    c = _numeric_case(args, "integral")
    rep = integrate(c.cycle, c.rho, c.u, c.v, eps=_eps(args), tol=args.tol)
    _emit(args, "integrate", rep.to_json(), _integral_text(c.name, rep))
    return OK if rep.converged else FAILED


def cmd_stokes(args) -> int:
    from .integration import stokes_residual

    c = _numeric_case(args, "stokes")
    rep = stokes_residual(c.cycle, c.rho, c.u, c.v, eps=_eps(args), tol=args.tol)
    ok = abs(rep.limit) < args.tol
    result = rep.to_json()
    result["residual"] = abs(rep.limit)
    result["passed"] = ok
    _emit(args, "stokes", result, _integral_text(c.name, rep) + f"\nresidual {abs(rep.limit):.3e}")
    return OK if ok else FAILED


def cmd_family(args) -> int:
    from .integration import family_scan
    from .numcases import FAMILY_GRID, s4_family

    c = s4_family()
    grid = [float(t) for t in args.grid.split(",")] if args.grid else list(FAMILY_GRID)
    rep = family_scan(c.cycle, c.rho, c.u, c.v, grid, eps=_eps(args), tol=args.tol)
    if args.csv:
        try:
            Path(args.csv).write_text(rep.to_csv(), encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {args.csv}: {exc.strerror}") from None
    text = rep.to_csv() + f"sup |phi| = {rep.sup:.6g}\nC = {rep.constant:.6g}\nbounded = {rep.bounded}"
    _emit(args, "family", rep.to_json(), text)
    return OK if rep.bounded and not rep.failures else FAILED


def cmd_verify_paper(args) -> int:
    from .verify import format_table, run_cases

    rows = run_cases(scope=args.scope)
    if not rows:
        raise InputError(f"no cases match scope {args.scope!r}")
    result = {"scope": args.scope, "rows": [r.to_json() for r in rows],
              "passed": sum(r.ok for r in rows), "failed": sum(not r.ok for r in rows)}
    if args.json:
        for r in result["rows"]:
            r.pop("seconds")  # keep reports byte-identical across runs
    _emit(args, "verify-paper", result, format_table(rows))
    return OK if all(r.ok for r in rows) else FAILED


def cmd_export(args) -> int:
    from .varfile import dumps as dump_variety

    spec = _variety(args)
    if not args.out:
        raise InputError("--out is required for export")
    if args.json:
        payload = dumps(envelope("export", _spec_json(spec)))
    else:
        payload = dump_variety(spec)
    try:
        Path(args.out).write_text(payload, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc.strerror}") from None
    return OK


def _spec_json(spec) -> dict:
    return {
        "id": spec.id, "variables": list(spec.vars), "equations": [str(f) for f in spec.equations],
        "dimension": spec.dimension, "singular": [str(f) for f in spec.singular_generators()],
        "parameters": list(spec.params) if spec.params else None,
        "parametrization": [str(f) for f in spec.parametrization] if spec.parametrization else None,
        "deck": [spec.deck.order, list(spec.deck.weights)] if spec.deck else None,
        "normal": spec.normal, "constants": dict(spec.constants),
        "named_forms": dict(spec.named_forms),
        "alpha_seeds": {str(q): g for q, g in spec.alpha_seeds.items()},
        "l_presentation": {str(q): g for q, g in spec.l_presentation.items()} if spec.l_presentation else None,
        "golden": spec.golden,
    }


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--variety", help="S:4, curve35, M:3, Fermat:5, product(S:2,w) or a .variety file")
    common.add_argument("--form", help="form text, e.g. 'x*dy/z^2'")
    common.add_argument("--json", action="store_true", help="emit schema-versioned JSON")
    common.add_argument("--out", help="write the report to this path")
    common.add_argument("--level-cap", type=int, default=None)
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--eps-min", type=float, default=1e-6)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="betasheaf", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="place a form on the Omega/alpha/beta/L ladder")
    s.add_argument("--cert", help="dependence certificate file")
    s.set_defaults(func=cmd_classify)

    for name, func, helptext in (("beta", cmd_beta, "beta^q generators and p*"),
                                 ("levels", cmd_levels, "alpha^q[p] for p up to the cap")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--degree", type=int, default=None)
        s.set_defaults(func=func)

    s = sub.add_parser("pullback-check", parents=[common], help="level preservation along a map")
    s.add_argument("--map", help="q:k, fermat:p, slice_v1:k, pi:k, jq:k or id:<variety>")
    s.add_argument("--levels", default="0,1")
    s.set_defaults(func=cmd_pullback_check)

    for name, func, helptext in (("integrate", cmd_integrate, "eps-regularized pairing on a 1-cycle"),
                                 ("stokes", cmd_stokes, "Stokes residual on a 1-cycle")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--case", help="registered case (disc, curve35, S2-diagonal, ...)")
        s.add_argument("--patch", help="comma-separated patch components in s")
        s.add_argument("--patch-radius", type=float, default=1.0)
        s.add_argument("--form2", help="second form (defaults to --form)")
        s.add_argument("--center", help="cut-off center, comma-separated")
        s.add_argument("--radius", type=float, default=0.8)
        s.add_argument("--smoothness", choices=("C0", "C1"), default="C1")
        s.set_defaults(func=func)

    s = sub.add_parser("family", parents=[common], help="S_4 family scan")
    s.add_argument("--grid", help="comma-separated t values")
    s.add_argument("--csv", help="write the t,re,im,mass,converged table here")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("verify-paper", parents=[common], help="run the reproduction table")
    s.add_argument("--scope", default="all", help="case id prefix, e.g. Sk or curve35")
    s.set_defaults(func=cmd_verify_paper)

    s = sub.add_parser("export", parents=[common], help="write a variety as .variety (or JSON)")
    s.set_defaults(func=cmd_export)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code not in (0, None) else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, VarietyError, MapError, FormSyntaxError, CertificateError, TemplateError,
            FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return INPUT_ERROR
    except StabilizationError as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
