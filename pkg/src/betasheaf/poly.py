"""Exact sparse multivariate polynomials and meromorphic functions over Q.

A :class:`Polynomial` is a map from exponent tuples to non-zero
:class:`~fractions.Fraction` coefficients, tied to an ordered tuple of
variable names.  A :class:`MeroFunction` is a polynomial divided by a monomial;
it is the coefficient type of every differential form in the package.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]

__all__ = [
    "Polynomial",
    "MeroFunction",
    "ORDERS",
    "order_key",
    "monomial_lcm",
    "monomial_divides",
]


def _lex(e: Exponent):
    return e


def _grlex(e: Exponent):
    return (sum(e), e)


def _degrevlex(e: Exponent):
    return (sum(e), tuple(-x for x in reversed(e)))


ORDERS = {"lex": _lex, "grlex": _grlex, "degrevlex": _degrevlex}


def order_key(order: str):
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}") from None


def monomial_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_divides(a: Exponent, b: Exponent) -> bool:
    """True when the monomial ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"coefficients must be rational, got {type(c).__name__}")


class Polynomial:
    """Immutable polynomial with rational coefficients.

    >>> x, y = Polynomial.variables(("x", "y"))
    >>> str((x + y) ** 2)
    'x^2 + 2*x*y + y^2'
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, object], vars: Sequence[str]):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean: Dict[Exponent, Fraction] = {}
        for e, c in terms.items():
            c = _as_fraction(c)
            if c == 0:
                continue
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match variables {self.vars}")
            clean[e] = c
        self.terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def _raw(cls, terms: Dict[Exponent, Fraction], vars: Tuple[str, ...]) -> "Polynomial":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Polynomial":
        return cls._raw({}, tuple(vars))

    @classmethod
    def constant(cls, c, vars: Sequence[str]) -> "Polynomial":
        vars = tuple(vars)
        c = _as_fraction(c)
        return cls._raw({(0,) * len(vars): c} if c else {}, vars)

    @classmethod
    def monomial(cls, exp: Sequence[int], vars: Sequence[str], coeff=1) -> "Polynomial":
        return cls({tuple(exp): coeff}, vars)

    @classmethod
    def variable(cls, name: str, vars: Sequence[str]) -> "Polynomial":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls._raw({tuple(e): Fraction(1)}, vars)

    @classmethod
    def variables(cls, vars: Sequence[str]):
        return tuple(cls.variable(v, vars) for v in vars)

    # basic predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def leading(self, order: str = "degrevlex") -> Tuple[Exponent, Fraction]:
        key = order_key(order)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.vars != other.vars:
            raise ValueError(f"variable contexts differ: {self.vars} vs {other.vars}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self.vars)

    def __add__(self, other):
        if isinstance(other, MeroFunction):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        if isinstance(other, MeroFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, MeroFunction):
            return NotImplemented
        if not isinstance(other, Polynomial):
            c = _as_fraction(other)
            if not c:
                return Polynomial.zero(self.vars)
            return Polynomial._raw({e: v * c for e, v in self.terms.items()}, self.vars)
        self._check(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial._raw(out, self.vars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_term(self, exp: Exponent, coeff: Fraction) -> "Polynomial":
        return Polynomial._raw(
            {tuple(a + b for a, b in zip(e, exp)): c * coeff for e, c in self.terms.items()},
            self.vars,
        )

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self.vars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # calculus and substitution -------------------------------------------
    def diff(self, var) -> "Polynomial":
        i = self.vars.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Polynomial._raw(out, self.vars)

    def substitute(self, images: Sequence, target_vars: Sequence[str]):
        """Compose with ``images`` (one Polynomial or MeroFunction per variable).

        Returns a :class:`Polynomial` when every image is a polynomial and a
        :class:`MeroFunction` otherwise.
        """
        if len(images) != len(self.vars):
            raise ValueError("need one image per variable")
        target_vars = tuple(target_vars)
        mero = any(isinstance(g, MeroFunction) for g in images)
        if mero:
            images = [g if isinstance(g, MeroFunction) else MeroFunction(g) for g in images]
            one = MeroFunction.constant(1, target_vars)
            zero = MeroFunction.constant(0, target_vars)
        else:
            one = Polynomial.constant(1, target_vars)
            zero = Polynomial.zero(target_vars)
        cache = [dict() for _ in images]

        def power(i, k):
            if k == 0:
                return one
            got = cache[i].get(k)
            if got is None:
                got = images[i] ** k
                cache[i][k] = got
            return got

        total = zero
        for e, c in self.terms.items():
            term = one * c
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def evaluate(self, point: Sequence):
        """Numeric evaluation (floats or complex numbers welcome)."""
        exact = all(isinstance(x, (int, Fraction)) for x in point)
        total = 0
        for e, c in self.terms.items():
            t = c if exact else float(c)
            for x, k in zip(point, e):
                if k:
                    t = t * x ** k
            total = total + t
        return total

    def with_vars(self, vars: Sequence[str]) -> "Polynomial":
        """Re-embed into a context containing all of this polynomial's variables."""
        vars = tuple(vars)
        idx = []
        for v in self.vars:
            if v not in vars:
                raise ValueError(f"variable {v!r} missing from {vars}")
            idx.append(vars.index(v))
        out = {}
        for e, c in self.terms.items():
            f = [0] * len(vars)
            for i, k in zip(idx, e):
                f[i] = k
            out[tuple(f)] = c
        # variables dropped from the old context must not be used
        return Polynomial._raw(out, vars)

    def restrict_vars(self, vars: Sequence[str]) -> "Polynomial":
        """Inverse of :meth:`with_vars`; fails if a dropped variable occurs."""
        vars = tuple(vars)
        keep = [self.vars.index(v) for v in vars]
        drop = [i for i in range(len(self.vars)) if i not in keep]
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in drop):
                raise ValueError("polynomial depends on a dropped variable")
            out[tuple(e[i] for i in keep)] = c
        return Polynomial._raw(out, vars)

    def monomial_content(self) -> Exponent:
        """Largest monomial dividing every term (gcd of exponents)."""
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(col) for col in zip(*self.terms))

    def divide_monomial(self, exp: Exponent) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            f = tuple(a - b for a, b in zip(e, exp))
            if min(f, default=0) < 0:
                raise ValueError("monomial does not divide polynomial")
            out[f] = c
        return Polynomial._raw(out, self.vars)

    def coefficient_gcd_normalized(self) -> "Polynomial":
        """Scale so the leading (degrevlex) coefficient is 1."""
        if not self.terms:
            return self
        _, c = self.leading()
        return self * (1 / c)

    # display --------------------------------------------------------------
    def sorted_terms(self, order: str = "degrevlex"):
        key = order_key(order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = _monomial_str(e, self.vars)
            if mono == "1":
                body = _frac_str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{_frac_str(abs(c))}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({str(self)!r}, vars={self.vars})"


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"({c.numerator}/{c.denominator})"


def _monomial_str(e: Exponent, vars: Sequence[str]) -> str:
    parts = []
    for v, k in zip(vars, e):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts) if parts else "1"


class MeroFunction:
    """Polynomial numerator over a monomial denominator.

    The pair is kept normalized: no variable divides both numerator and
    denominator, and the zero function has the trivial denominator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Sequence[int] | None = None):
        if den is None:
            den = (0,) * len(num.vars)
        den = tuple(den)
        if len(den) != len(num.vars):
            raise ValueError("denominator length does not match variables")
        if min(den, default=0) < 0:
            raise ValueError("denominator exponents must be non-negative")
        if num.is_zero():
            den = (0,) * len(num.vars)
        elif any(den):
            common = tuple(min(a, b) for a, b in zip(num.monomial_content(), den))
            if any(common):
                num = num.divide_monomial(common)
                den = tuple(a - b for a, b in zip(den, common))
        self.num = num
        self.den = den

    @property
    def vars(self):
        return self.num.vars

    @classmethod
    def constant(cls, c, vars) -> "MeroFunction":
        return cls(Polynomial.constant(c, vars))

    @classmethod
    def laurent_monomial(cls, exp: Sequence[int], vars, coeff=1) -> "MeroFunction":
        pos = tuple(max(k, 0) for k in exp)
        neg = tuple(max(-k, 0) for k in exp)
        return cls(Polynomial.monomial(pos, vars, coeff), neg)

    @classmethod
    def from_laurent(cls, terms: Mapping[Exponent, Fraction], vars) -> "MeroFunction":
        vars = tuple(vars)
        if not terms:
            return cls.constant(0, vars)
        shift = tuple(min(0, min(col)) for col in zip(*terms))
        num = {tuple(a - s for a, s in zip(e, shift)): c for e, c in terms.items()}
        return cls(Polynomial(num, vars), tuple(-s for s in shift))

    def laurent_terms(self) -> Dict[Exponent, Fraction]:
        return {tuple(a - b for a, b in zip(e, self.den)): c for e, c in self.num.terms.items()}

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not any(self.den)

    def as_polynomial(self) -> Polynomial:
        if any(self.den):
            raise ValueError("meromorphic function has a non-trivial denominator")
        return self.num

    def _coerce(self, other) -> "MeroFunction":
        if isinstance(other, MeroFunction):
            if other.vars != self.vars:
                raise ValueError(f"variable contexts differ: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, Polynomial):
            return MeroFunction(other)
        return MeroFunction.constant(other, self.vars)

    def __add__(self, other):
        other = self._coerce(other)
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        n1 = self.num.mul_term(tuple(d - a for d, a in zip(den, self.den)), Fraction(1))
        n2 = other.num.mul_term(tuple(d - b for d, b in zip(den, other.den)), Fraction(1))
        return MeroFunction(n1 + n2, den)

    __radd__ = __add__

    def __neg__(self):
        return MeroFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (MeroFunction, Polynomial)):
            return MeroFunction(self.num * other, self.den)
        other = self._coerce(other)
        return MeroFunction(self.num * other.num, tuple(a + b for a, b in zip(self.den, other.den)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a scalar or by a monomial (times a scalar)."""
        if isinstance(other, (int, Fraction)):
            return MeroFunction(self.num * (Fraction(1) / _as_fraction(other)), self.den)
        other = self._coerce(other)
        if not other.num.is_monomial():
            raise ValueError("can only divide by monomials")
        (e, c), = other.num.terms.items()
        num = self.num.mul_term(other.den, 1 / c)
        return MeroFunction(num, tuple(a + b for a, b in zip(self.den, e)))

    def __pow__(self, n: int):
        if n < 0:
            return MeroFunction.constant(1, self.vars) / (self ** (-n))
        return MeroFunction(self.num ** n, tuple(a * n for a in self.den))

    def __eq__(self, other):
        if isinstance(other, (MeroFunction, Polynomial, int, Fraction)):
            other = self._coerce(other)
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def diff(self, var) -> "MeroFunction":
        i = self.vars.index(var) if isinstance(var, str) else var
        k = self.den[i]
        dn = self.num.diff(i)
        if not k:
            return MeroFunction(dn, self.den)
        # d(n / x^k m) = (x dn - k n) / (x^{k+1} m)
        e = [0] * len(self.vars)
        e[i] = 1
        top = dn.mul_term(tuple(e), Fraction(1)) - self.num * k
        den = list(self.den)
        den[i] += 1
        return MeroFunction(top, den)

    def substitute(self, images: Sequence, target_vars: Sequence[str]) -> "MeroFunction":
        num = self.num.substitute(images, target_vars)
        num = num if isinstance(num, MeroFunction) else MeroFunction(num)
        if not any(self.den):
            return num
        den = Polynomial.monomial(self.den, self.vars).substitute(images, target_vars)
        den = den if isinstance(den, MeroFunction) else MeroFunction(den)
        if den.is_zero():
            raise ZeroDivisionError("denominator pulls back to zero")
        if not den.num.is_monomial():
            raise ValueError(
                f"denominator {Polynomial.monomial(self.den, self.vars)} pulls back to the "
                f"non-monomial {den.num}; only monomial pole loci are supported"
            )
        return num / den

    def evaluate(self, point):
        value = self.num.evaluate(point)
        for x, k in zip(point, self.den):
            if k:
                value = value / x ** k
        return value

    def with_vars(self, vars) -> "MeroFunction":
        vars = tuple(vars)
        den = [0] * len(vars)
        for v, k in zip(self.vars, self.den):
            den[vars.index(v)] = k
        return MeroFunction(self.num.with_vars(vars), den)

    def __str__(self):
        if self.num.is_zero():
            return "0"
        den = _monomial_str(self.den, self.vars)
        num = str(self.num)
        if den == "1":
            return num
        if "*" in den:
            den = f"({den})"
        if not self.num.is_monomial():
            num = f"({num})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"MeroFunction({str(self)!r})"


def poly_sum(items: Iterable[Polynomial], vars) -> Polynomial:
    return reduce(lambda a, b: a + b, items, Polynomial.zero(vars))
