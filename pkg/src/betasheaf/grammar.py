"""Plain-ASCII grammar for meromorphic differential forms.

::

    form    := ['+'|'-'] term (('+'|'-') term)*
    term    := unary (('*'|'/') unary)*
    unary   := ('+'|'-') unary | wedge
    wedge   := power ('^' power)*
    power   := atom ('^' ['-'] INT)*        -- only after a 0-form
    atom    := INT | VAR | 'd' VAR | '(' form ')'

``^`` is a power when it follows a function and the next token is an integer,
and a wedge otherwise.  ``*`` between two forms is also a wedge.  Division is
allowed by non-zero numbers and by monomials in the declared pole variables.

Example: ``x*dy/z^2``, ``(x + y)*dz^dx``, ``-3*dx^dy/z``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .forms import DiffForm
from .poly import MeroFunction, Polynomial, _monomial_str

__all__ = ["FormSyntaxError", "parse_form", "format_form", "format_function"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(.))")


class FormSyntaxError(ValueError):
    """Parse failure carrying the offending position."""

    def __init__(self, message: str, text: str, pos: int):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(f"{message}\n  {text}\n  {' ' * pos}^")


@dataclass
class _Tok:
    kind: str  # num | name | op | end
    value: str
    pos: int


def _tokenize(text: str) -> List[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(_Tok("num", m.group(1), start))
        elif m.group(2):
            out.append(_Tok("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise FormSyntaxError(f"unexpected character {ch!r}", text, start)
            out.append(_Tok("op", ch, start))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, vars, pole_vars, coords):
        self.text = text
        self.vars = tuple(vars)
        self.pole = set(self.vars if pole_vars is None else pole_vars)
        self.coords = coords
        self.toks = _tokenize(text)
        self.i = 0

    # helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, pos=None):
        raise FormSyntaxError(msg, self.text, self.tok.pos if pos is None else pos)

    def is_op(self, ch, tok=None):
        tok = tok or self.tok
        return tok.kind == "op" and tok.value == ch

    # grammar
    def parse(self) -> DiffForm:
        if self.tok.kind == "end":
            self.error("empty form")
        out = self.form()
        if self.tok.kind != "end":
            self.error("unexpected token")
        return out

    def form(self) -> DiffForm:
        out = self.term()
        while self.is_op("+") or self.is_op("-"):
            op = self.take()
            rhs = self.term()
            if rhs.degree != out.degree:
                if rhs.is_zero() and rhs.degree == 0:
                    continue
                if out.is_zero() and out.degree == 0:
                    out = DiffForm.zero(self.vars, rhs.degree, self.coords)
                else:
                    self.error(
                        f"cannot add a {out.degree}-form and a {rhs.degree}-form", op.pos)
            out = out + rhs if op.value == "+" else out - rhs
        return out

    def term(self) -> DiffForm:
        out = self.unary()
        while self.is_op("*") or self.is_op("/"):
            op = self.take()
            pos = self.tok.pos
            rhs = self.unary()
            if op.value == "*":
                out = self._wedge(out, rhs, op.pos)
            else:
                out = self._divide(out, rhs, pos)
        return out

    def unary(self) -> DiffForm:
        if self.is_op("-"):
            self.take()
            return -self.unary()
        if self.is_op("+"):
            self.take()
            return self.unary()
        return self.wedge()

    def wedge(self) -> DiffForm:
        out = self.power()
        while self.is_op("^"):
            op = self.take()
            rhs = self.power()
            out = self._wedge(out, rhs, op.pos)
        return out

    def power(self) -> DiffForm:
        base = self.atom()
        while self.is_op("^") and base.degree == 0:
            # exponent: n, -n, (n) or (-n); anything else after ^ is a wedge
            k = 1
            paren = self.is_op("(", self.peek(k))
            k += paren
            neg = self.is_op("-", self.peek(k))
            k += neg
            num_tok = self.peek(k)
            if num_tok.kind != "num" or (paren and not self.is_op(")", self.peek(k + 1))):
                break
            for _ in range(k + 1 + paren):
                self.take()
            n = int(num_tok.value)
            base = self._power(base, -n if neg else n, num_tok.pos)
        return base

    def atom(self) -> DiffForm:
        t = self.tok
        if t.kind == "num":
            self.take()
            return DiffForm.function(int(t.value), self.vars, self.coords)
        if t.kind == "name":
            self.take()
            if t.value in self.vars:
                return DiffForm.function(Polynomial.variable(t.value, self.vars), self.vars, self.coords)
            if t.value.startswith("d") and t.value[1:] in self.vars:
                return DiffForm.differential(t.value[1:], self.vars, self.coords)
            self.error(f"unknown variable {t.value!r} (known: {', '.join(self.vars)})", t.pos)
        if self.is_op("("):
            self.take()
            inner = self.form()
            if not self.is_op(")"):
                self.error("expected ')'")
            self.take()
            return inner
        if t.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {t.value!r}")

    # semantic actions
    def _wedge(self, a: DiffForm, b: DiffForm, pos) -> DiffForm:
        if a.degree + b.degree > len(self.vars):
            self.error("wedge degree exceeds the number of coordinates", pos)
        return a ^ b

    def _function(self, f: DiffForm, pos) -> MeroFunction:
        if f.degree != 0:
            self.error("expected a function here, found a differential form", pos)
        return f.coefficient(())

    def _check_poles(self, exps, pos):
        bad = [v for v, k in zip(self.vars, exps) if k < 0 and v not in self.pole]
        if bad:
            self.error(
                f"negative exponent in {', '.join(bad)}; pole variables are "
                f"{', '.join(sorted(self.pole)) or 'none'}", pos)

    def _divide(self, a: DiffForm, b: DiffForm, pos) -> DiffForm:
        g = self._function(b, pos)
        if g.is_zero():
            self.error("division by zero", pos)
        if not g.num.is_monomial():
            self.error("can only divide by numbers and monomials", pos)
        (e, _), = g.num.terms.items()
        self._check_poles([-k for k in e], pos)
        return a.map_coefficients(lambda c: c / g)

    def _power(self, base: DiffForm, n: int, pos) -> DiffForm:
        g = self._function(base, pos)
        if n < 0:
            if g.is_zero() or not g.num.is_monomial():
                self.error("negative powers need a monomial base", pos)
            (e, _), = g.num.terms.items()
            self._check_poles([-k for k in e], pos)
        return DiffForm.function(g ** n, self.vars, self.coords)


def parse_form(text: str, vars: Sequence[str], pole_vars: Optional[Sequence[str]] = None,
               coords: str = "ambient", degree: Optional[int] = None) -> DiffForm:
    """Parse ``text`` into a :class:`DiffForm` over ``vars``.

    ``degree`` only matters for the literal ``0``, which otherwise parses as a
    function.
    """
    out = _Parser(text, vars, pole_vars, coords).parse()
    if degree is not None and out.degree != degree:
        if out.is_zero():
            return DiffForm.zero(tuple(vars), degree, coords)
        raise FormSyntaxError(f"expected a {degree}-form, found a {out.degree}-form", text, 0)
    return out


def format_function(f: MeroFunction) -> str:
    """Grammar-compatible text for a meromorphic function."""
    if f.is_zero():
        return "0"
    num = str(f.num)
    den = _monomial_str(f.den, f.vars)
    if den == "1":
        return num
    if "*" in den:
        den = f"({den})"
    if len(f.num.terms) > 1:
        num = f"({num})"
    return f"{num}/{den}"


def _component(c: MeroFunction, basis: str) -> str:
    if not basis:
        return format_function(c)
    if c.num.is_monomial() and not any(c.den):
        (e, k), = c.num.terms.items()
        if not any(e) and abs(k) == 1:
            return ("-" if k < 0 else "") + basis
    text = format_function(c)
    if len(c.num.terms) > 1 and not any(c.den):
        text = f"({text})"
    return f"{text}*{basis}"


def format_form(u: DiffForm) -> str:
    """Deterministic printer; ``parse_form(format_form(u))`` reproduces ``u``."""
    if u.is_zero():
        return "0"
    out = ""
    for idx in sorted(u.components):
        basis = "^".join("d" + u.vars[i] for i in idx)
        piece = _component(u.components[idx], basis)
        if not out:
            out = piece
        elif piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out

