"""Reproduction suite: expected values live in ``data/reference_cases.json``.

Each case has an ``id`` (``"Sk/beta2"``), a ``kind`` and, optionally, a
``for`` table of template parameters; every combination becomes one row.
Strings are expanded with those parameters plus the variety constants.
"""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .beta import check_pullback_levels, engine
from .certfile import fixture
from .closure import classify_alpha, pullback_certificate, scale_certificate, verify_certificate
from .maps import pullback, resolve_map
from .resources import data_path
from .templates import TemplateError, _PLACEHOLDER, evaluate, expand
from .varieties import resolve_variety

__all__ = ["CaseResult", "load_cases", "run_cases", "format_table"]


@dataclass
class CaseResult:
    anchor: str
    expected: str
    computed: str
    ok: bool
    seconds: float

    def to_json(self):
        return {"anchor": self.anchor, "expected": self.expected, "computed": self.computed,
                "ok": self.ok, "seconds": round(self.seconds, 3)}


def load_cases(path=None) -> List[dict]:
    path = path or data_path("reference_cases.json")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)["cases"]


def _partial(text: str, params) -> str:
    """Expand placeholders over ``params``; leave the rest for the variety constants."""
    def sub(m):
        try:
            return str(evaluate(m.group(1), params))
        except TemplateError:
            return m.group(0)
    return _PLACEHOLDER.sub(sub, text)


def _expand_all(obj, params):
    if isinstance(obj, str):
        return _partial(obj, params)
    if isinstance(obj, list):
        return [_expand_all(o, params) for o in obj]
    if isinstance(obj, dict):
        return {k: _expand_all(v, params) for k, v in obj.items()}
    return obj


def _yn(v) -> str:
    return {True: "yes", False: "no", None: "unknown"}[v]


def _label(against: str) -> str:
    return "L" if against == "L" else f"alpha[{against}]"


def _module(case) -> tuple:
    spec = resolve_variety(case["variety"])
    eng = engine(spec)
    q = case["degree"]
    which = case["set"]
    if "against" in case:
        expected = eng.L(q) if case["against"] == "L" else eng.level(q, int(case["against"]))
        if expected is None:
            return f"equal to {_label(case['against'])}", "L not available", False
    else:
        texts = [expand(f, spec.constants) for f in case["expected"]]
        expected = eng.span(q, texts)
    computed_p = None
    if which == "alpha":
        got = eng.level(q, 0)
    elif which == "beta":
        got, computed_p = eng.beta(q)
    elif which == "L":
        got = eng.L(q)
        if got is None:
            return "L available", "L not available", False
    else:
        raise ValueError(f"unknown set {which!r}")
    ok = got.equals(expected)
    comp = f"{len(got)} generators, {'equal' if ok else 'different'}"
    if "against" in case:
        exp = f"equal to {_label(case['against'])}"
    else:
        exp = "Omega + " + ", ".join(texts) if texts else "Omega"
    if "p_star" in case:
        exp += f"; p* = {case['p_star']}"
        comp += f"; p* = {computed_p}"
        ok = ok and computed_p == case["p_star"]
    return exp, comp, ok


def _member(case) -> tuple:
    spec = resolve_variety(case["variety"])
    u = spec.form(case["form"])
    if "along" in case:
        f = resolve_map(case["along"])
        u = pullback(f, u)
        spec = f.source
    which = case["set"]
    cert = None
    if "cert" in case:
        cert = fixture(case["cert"]["fixture"], spec, **case["cert"].get("params", {}))
    if which == "omega":
        got = engine(spec).omega(u.degree).contains(u)
        comp = _yn(got)
    elif which == "alpha":
        verdict = classify_alpha(spec, u, cert)
        got = verdict.in_alpha
        comp = f"{_yn(got)} ({verdict.tag.value})"
        if "tag" in case and verdict.tag.value != case["tag"]:
            return f"{_yn(case['expected'])} ({case['tag']})", comp, False
    elif which == "L":
        got = engine(spec).in_L(u)
        comp = _yn(got)
    else:
        raise ValueError(f"unknown set {which!r}")
    exp = _yn(case["expected"]) + (f" ({case['tag']})" if "tag" in case else "")
    return exp, comp, got == case["expected"]


def _certificate(case) -> tuple:
    cert = fixture(case["fixture"], None, **case.get("params", {}))
    spec = resolve_variety(cert.variety)
    ok = verify_certificate(spec, cert.form, cert)
    return _yn(case["expected"]), _yn(ok), ok == case["expected"]


def _pullback_certificate(case) -> tuple:
    f = resolve_map(case["map"])
    cert = fixture(case["fixture"], f.target, **case.get("params", {}))
    cert = pullback_certificate(f, cert)
    cert = scale_certificate(cert, Fraction(case["scale"]))
    u = f.source.form(case["form"])
    ok = verify_certificate(f.source, u, cert)
    return _yn(case["expected"]), _yn(ok), ok == case["expected"]


def _chain(case) -> tuple:
    spec = resolve_variety(case["variety"])
    eng = engine(spec)
    q = case["degree"]
    om, al = eng.omega(q), eng.level(q, 0)
    be, _ = eng.beta(q)
    L = eng.L(q)
    steps = [(om, al), (al, be), (be, L)]
    strict = [b.contains_set(a) and not a.contains_set(b) for a, b in steps]
    return "strict, strict, strict", ", ".join("strict" if s else "not strict" for s in strict), all(strict)


def _stabilization(case) -> tuple:
    spec = resolve_variety(case["variety"])
    eng = engine(spec)
    stars = [eng.beta(q)[1] for q in range(spec.dimension + 1)]
    bounds = [q - 1 if spec.normal and q >= 1 else q for q in range(spec.dimension + 1)]
    ok = all(p <= b for p, b in zip(stars, bounds))
    return f"p* <= {bounds}", f"p* = {stars}", ok


def _pullback(case) -> tuple:
    rep = check_pullback_levels(resolve_map(case["map"]), tuple(case.get("levels", (0, 1))))
    comp = f"{rep.checked} checks, {len(rep.violations)} violations"
    return "no violations", comp, rep.ok


KINDS: Dict[str, Callable] = {
    "module": _module,
    "member": _member,
    "certificate": _certificate,
    "pullback_certificate": _pullback_certificate,
    "chain": _chain,
    "stabilization": _stabilization,
    "pullback": _pullback,
}


def _instances(case):
    table = case.get("for", {})
    keys = sorted(table)
    for values in itertools.product(*(table[k] for k in keys)):
        params = dict(zip(keys, values))
        inst = _expand_all({k: v for k, v in case.items() if k != "for"}, params)
        label = inst["id"] + ("[" + ",".join(f"{k}={v}" for k, v in params.items()) + "]" if params else "")
        yield label, inst


def run_cases(cases: Optional[List[dict]] = None, scope: str = "all") -> List[CaseResult]:
    """Run every case whose id starts with ``scope`` (``"all"`` runs everything)."""
    cases = load_cases() if cases is None else cases
    out = []
    for case in cases:
        if scope != "all" and not case["id"].startswith(scope):
            continue
        for label, inst in _instances(case):
            t0 = time.perf_counter()
            try:
                exp, comp, ok = KINDS[inst["kind"]](inst)
            except Exception as exc:  # a crash is a failed row, not a crashed suite
                exp, comp, ok = "(case runs)", f"error: {type(exc).__name__}: {exc}", False
            out.append(CaseResult(label, exp, comp, bool(ok), time.perf_counter() - t0))
    return out


def format_table(rows: List[CaseResult]) -> str:
    heads = ("anchor", "expected", "computed", "status")
    data = [(r.anchor, r.expected, r.computed, "PASS" if r.ok else "FAIL") for r in rows]
    widths = [max(len(h), *(len(d[i]) for d in data)) if data else len(h) for i, h in enumerate(heads)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(heads, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(d, widths)) for d in data]
    return "\n".join(lines)
