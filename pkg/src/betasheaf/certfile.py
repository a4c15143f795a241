"""Text format for dependence certificates.

::

    # comment
    name: Sk/alpha1
    variety: S:{k}
    form: x*dy/z^{m}
    degree: 2
    bind DZ = dz
    S1: -{k}*z^{k-1-m} : DZ
    S2: z^{k-2*m} : dx dy ; 0 : dx dx

Each ``S<h>`` line holds ``;``-separated terms ``coefficient : factor ...``
with exactly ``h`` factors.  A factor is a bound name, a named form of the
variety, or form text (``dz^da`` or ``[dz ^ da]``).  ``{expr}`` placeholders
are expanded with the variety constants plus any caller parameters.
"""
from __future__ import annotations

import re
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

from .closure import CertificateError, CertTerm, DependenceCertificate
from .grammar import FormSyntaxError
from .resources import data_path
from .templates import TemplateError, expand
from .varieties import VarietyError, VarietySpec, resolve_variety

__all__ = ["CertificateFormatError", "load_certificate", "parse_certificate", "dump_certificate",
           "fixture"]

_FACTOR = re.compile(r"\[[^\]]*\]|\S+")
_HEADER = re.compile(r"^(name|variety|form|degree)\s*:\s*(.*)$")
_BIND = re.compile(r"^bind\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$")
_TERM = re.compile(r"^S(\d+)\s*:\s*(.*)$")


class CertificateFormatError(CertificateError):
    def __init__(self, message: str, line_no: int, line: str):
        self.line_no = line_no
        self.line = line
        super().__init__(f"line {line_no}: {message}\n  {line}")


def parse_certificate(text: str, spec: Optional[VarietySpec] = None,
                      params: Optional[Mapping[str, int]] = None) -> DependenceCertificate:
    params = dict(params or {})
    lines = [(i + 1, raw.split("#", 1)[0].strip(), raw.rstrip("\n")) for i, raw in enumerate(text.splitlines())]
    header: Dict[str, str] = {}
    for no, line, raw in lines:
        m = _HEADER.match(line)
        if m:
            header[m.group(1)] = (m.group(2), no, raw)
    if spec is None:
        if "variety" not in header:
            raise CertificateError("no variety given and no 'variety:' line in the certificate")
        text_v, no, raw = header["variety"]
        try:
            spec = resolve_variety(expand(text_v, params))
        except (TemplateError, VarietyError, ValueError) as exc:
            raise CertificateFormatError(str(exc), no, raw) from None
    env = {**spec.constants, **params}

    def sub(s, no, raw):
        try:
            return expand(s, env)
        except TemplateError as exc:
            raise CertificateFormatError(str(exc), no, raw) from None

    def form(s, no, raw, degree=None):
        try:
            return spec.form(sub(s, no, raw), degree)
        except FormSyntaxError as exc:
            raise CertificateFormatError(exc.message + f" in {s!r}", no, raw) from None

    if "degree" not in header:
        raise CertificateError("missing 'degree:' line")
    deg_text, no, raw = header["degree"]
    try:
        degree = int(sub(deg_text, no, raw))
    except ValueError:
        raise CertificateFormatError(f"degree must be an integer, got {deg_text!r}", no, raw) from None
    omega = form(*header["form"]) if "form" in header else None
    bindings = {}
    terms: Dict[int, list] = {}
    for no, line, raw in lines:
        if not line or _HEADER.match(line):
            continue
        m = _BIND.match(line)
        if m:
            bindings[m.group(1)] = form(m.group(2), no, raw)
            continue
        m = _TERM.match(line)
        if not m:
            raise CertificateFormatError("expected 'name:', 'variety:', 'form:', 'degree:', "
                                         "'bind NAME = form' or 'S<h>: coefficient : factors'", no, raw)
        h = int(m.group(1))
        if not 1 <= h <= degree:
            raise CertificateFormatError(f"S{h} is outside 1..{degree}", no, raw)
        for piece in m.group(2).split(";"):
            if not piece.strip():
                continue
            coeff_text, sep, fac_text = piece.partition(":")
            if not sep:
                raise CertificateFormatError("term needs 'coefficient : factors'", no, raw)
            coeff = form(coeff_text.strip(), no, raw, 0).coefficient(())
            factors = []
            for tok in _FACTOR.findall(fac_text):
                name = tok[1:-1].strip() if tok.startswith("[") else tok
                name = sub(name, no, raw)
                if name not in bindings and name not in spec.named_forms:
                    form(name, no, raw)  # report syntax errors with the line
                factors.append(name)
            if len(factors) != h:
                raise CertificateFormatError(f"S{h} terms need {h} factors, found {len(factors)}", no, raw)
            terms.setdefault(h, []).append(CertTerm(coeff, tuple(factors)))
    name = sub(header["name"][0], *header["name"][1:]) if "name" in header else "certificate"
    return DependenceCertificate(degree, terms, bindings, spec.id, omega, name)


def load_certificate(source: Union[str, Path], spec: Optional[VarietySpec] = None,
                     params: Optional[Mapping[str, int]] = None) -> DependenceCertificate:
    return parse_certificate(Path(source).read_text(), spec, params)


def fixture(name: str, spec: Optional[VarietySpec] = None, **params) -> DependenceCertificate:
    """Load a shipped certificate such as ``fixture("sk_alpha1", surface_S(4))``."""
    return load_certificate(data_path("certificates", f"{name}.cert"), spec, params)


def dump_certificate(cert: DependenceCertificate) -> str:
    from .grammar import format_form, format_function

    out = [f"name: {cert.name}"]
    if cert.variety:
        out.append(f"variety: {cert.variety}")
    if cert.form is not None:
        out.append(f"form: {format_form(cert.form)}")
    out.append(f"degree: {cert.degree}")
    safe = {}
    for i, (n, f) in enumerate(cert.bindings.items()):
        safe[n] = f"G{i}"
        out.append(f"bind G{i} = {format_form(f)}")
    for h in sorted(cert.terms):
        pieces = [f"{format_function(t.coefficient)} : " + " ".join(safe.get(n, f"[{n}]") for n in t.factors)
                  for t in cert.terms[h]]
        out.append(f"S{h}: " + " ; ".join(pieces))
    return "\n".join(out) + "\n"
