"""Meromorphic differential forms: wedge, exterior derivative, pull-back."""
from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .poly import MeroFunction, Polynomial

__all__ = ["DiffForm", "wedge", "d", "pullback_form", "merge_sign", "CoordinateMismatch"]

Index = Tuple[int, ...]


class CoordinateMismatch(ValueError):
    """Raised when forms from different coordinate systems are combined."""


def merge_sign(i: Index, j: Index):
    """Sign of the shuffle sorting ``i + j``, or 0 when they overlap."""
    if set(i) & set(j):
        return 0
    # count inversions between the two increasing blocks
    inv = 0
    for a in i:
        for b in j:
            if a > b:
                inv += 1
    return -1 if inv % 2 else 1


def _coerce_coeff(c, vars) -> MeroFunction:
    if isinstance(c, MeroFunction):
        return c
    if isinstance(c, Polynomial):
        return MeroFunction(c)
    return MeroFunction.constant(c, vars)


class DiffForm:
    """A homogeneous q-form ``sum_I c_I dx_I`` with meromorphic coefficients.

    ``coords`` is a free tag ("ambient" or "parameter"); forms with different
    tags or variable lists never combine.
    """

    __slots__ = ("vars", "degree", "components", "coords")

    def __init__(self, vars: Sequence[str], degree: int,
                 components: Mapping[Index, object] | None = None, coords: str = "ambient"):
        self.vars = tuple(vars)
        self.degree = int(degree)
        self.coords = coords
        n = len(self.vars)
        if self.degree < 0 or self.degree > n:
            raise ValueError(f"degree {degree} impossible with {n} coordinates")
        comps: Dict[Index, MeroFunction] = {}
        for idx, c in (components or {}).items():
            idx = tuple(idx)
            if len(idx) != self.degree or list(idx) != sorted(set(idx)) or (idx and idx[-1] >= n):
                raise ValueError(f"bad index tuple {idx} for a {self.degree}-form")
            c = _coerce_coeff(c, self.vars)
            if c.vars != self.vars:
                raise ValueError("coefficient uses a different variable context")
            if not c.is_zero():
                comps[idx] = c
        self.components = comps

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, vars, degree: int, coords: str = "ambient") -> "DiffForm":
        return cls(vars, degree, {}, coords)

    @classmethod
    def function(cls, f, vars, coords: str = "ambient") -> "DiffForm":
        return cls(vars, 0, {(): _coerce_coeff(f, tuple(vars))}, coords)

    @classmethod
    def differential(cls, name: str, vars, coords: str = "ambient") -> "DiffForm":
        vars = tuple(vars)
        return cls(vars, 1, {(vars.index(name),): 1}, coords)

    @classmethod
    def basis(cls, names: Sequence[str], vars, coords: str = "ambient") -> "DiffForm":
        """``d(names[0]) ^ d(names[1]) ^ ...``"""
        vars = tuple(vars)
        out = cls.function(1, vars, coords)
        for n in names:
            out = out ^ cls.differential(n, vars, coords)
        return out

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self):
        return bool(self.components)

    def is_holomorphic(self) -> bool:
        return all(c.is_polynomial() for c in self.components.values())

    def _check(self, other: "DiffForm"):
        if not isinstance(other, DiffForm):
            raise TypeError("expected a DiffForm")
        if self.vars != other.vars or self.coords != other.coords:
            raise CoordinateMismatch(
                f"cannot combine forms on {self.coords}{self.vars} and {other.coords}{other.vars}"
            )

    # linear structure -----------------------------------------------------
    def __add__(self, other: "DiffForm") -> "DiffForm":
        self._check(other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        comps = dict(self.components)
        for k, c in other.components.items():
            comps[k] = comps[k] + c if k in comps else c
        return DiffForm(self.vars, self.degree, comps, self.coords)

    def __neg__(self):
        return DiffForm(self.vars, self.degree, {k: -c for k, c in self.components.items()}, self.coords)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "DiffForm":
        f = _coerce_coeff(f, self.vars)
        return DiffForm(self.vars, self.degree, {k: c * f for k, c in self.components.items()}, self.coords)

    def __mul__(self, other):
        if isinstance(other, DiffForm):
            return wedge(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __xor__(self, other):
        return wedge(self, other)

    def __truediv__(self, other):
        return DiffForm(self.vars, self.degree, {k: c / other for k, c in self.components.items()}, self.coords)

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return (self.vars == other.vars and self.degree == other.degree
                and self.coords == other.coords and self.components == other.components)

    def __hash__(self):
        return hash((self.vars, self.degree, self.coords, frozenset(self.components.items())))

    # utilities ------------------------------------------------------------
    def coefficient(self, idx: Index) -> MeroFunction:
        return self.components.get(tuple(idx), MeroFunction.constant(0, self.vars))

    def index_names(self, idx: Index) -> Tuple[str, ...]:
        return tuple(self.vars[i] for i in idx)

    def map_coefficients(self, fn) -> "DiffForm":
        return DiffForm(self.vars, self.degree, {k: fn(c) for k, c in self.components.items()}, self.coords)

    def with_vars(self, vars: Sequence[str], coords: str | None = None) -> "DiffForm":
        """Embed into a larger coordinate list (names are matched)."""
        vars = tuple(vars)
        pos = [vars.index(v) for v in self.vars]
        comps = {}
        for idx, c in self.components.items():
            new = tuple(pos[i] for i in idx)
            order = sorted(range(len(new)), key=lambda t: new[t])
            sign = _perm_sign(order)
            comps[tuple(sorted(new))] = c.with_vars(vars) * sign
        return DiffForm(vars, self.degree, comps, coords or self.coords)

    def evaluate(self, point) -> Dict[Index, complex]:
        return {k: c.evaluate(point) for k, c in self.components.items()}

    def __str__(self):
        from .grammar import format_form

        return format_form(self)

    def __repr__(self):
        return f"DiffForm({str(self)!r}, degree={self.degree}, vars={self.vars})"


def _perm_sign(order: Sequence[int]) -> int:
    order = list(order)
    sign = 1
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                sign = -sign
    return sign


def wedge(u: DiffForm, v: DiffForm) -> DiffForm:
    """Exterior product with exact shuffle signs."""
    u._check(v)
    deg = u.degree + v.degree
    if deg > len(u.vars):
        raise ValueError(
            f"wedge of a {u.degree}-form and a {v.degree}-form exceeds {len(u.vars)} coordinates"
        )
    comps: Dict[Index, MeroFunction] = {}
    for i, a in u.components.items():
        for j, b in v.components.items():
            s = merge_sign(i, j)
            if not s:
                continue
            k = tuple(sorted(i + j))
            term = a * b if s > 0 else -(a * b)
            comps[k] = comps[k] + term if k in comps else term
    return DiffForm(u.vars, deg, comps, u.coords)


def d(u: DiffForm) -> DiffForm:
    """Exterior derivative, coefficient by coefficient."""
    n = len(u.vars)
    if u.degree == n:
        # mathematically zero, but there is no (n+1)-form to hold it
        raise ValueError("exterior derivative of a top-degree form has no degree to live in")
    comps: Dict[Index, MeroFunction] = {}
    for idx, c in u.components.items():
        for i in range(n):
            if i in idx:
                continue
            dc = c.diff(i)
            if dc.is_zero():
                continue
            s = merge_sign((i,), idx)
            k = tuple(sorted((i,) + idx))
            term = dc if s > 0 else -dc
            comps[k] = comps[k] + term if k in comps else term
    return DiffForm(u.vars, u.degree + 1, comps, u.coords)


def pullback_form(u: DiffForm, images: Sequence, source_vars: Sequence[str],
                  coords: str = "ambient") -> DiffForm:
    """Pull ``u`` back along ``target_var_j = images[j](source_vars)``."""
    source_vars = tuple(source_vars)
    if len(images) != len(u.vars):
        raise ValueError("need one image per target coordinate")
    imgs = [_coerce_coeff(g, source_vars) for g in images]
    n = len(source_vars)
    # d(image_j) as 1-forms in the source
    dimg = []
    for g in imgs:
        dimg.append(DiffForm(source_vars, 1, {(i,): g.diff(i) for i in range(n)}, coords))
    one = DiffForm.function(1, source_vars, coords)
    if u.degree > n:
        raise ValueError("pull-back degree exceeds the source dimension")
    total = DiffForm.zero(source_vars, u.degree, coords)
    for idx, c in u.components.items():
        coeff = c.substitute(imgs, source_vars)
        if coeff.is_zero():
            continue
        piece = one
        for j in idx:
            piece = wedge(piece, dimg[j])
            if piece.is_zero():
                break
        if piece.is_zero():
            continue
        total = total + piece.scale(coeff)
    return total


def all_indices(n: int, q: int) -> Iterable[Index]:
    return combinations(range(n), q)
