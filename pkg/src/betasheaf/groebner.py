"""Buchberger's algorithm for ideals and for submodules of free modules.

Internally every element is a dict mapping ``(position, exponent)`` to a
rational coefficient; an ideal is the rank-one case.  Modules use a
position-over-term order in which position 0 is the largest.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .poly import Exponent, Polynomial, monomial_divides, monomial_lcm, order_key

__all__ = [
    "groebner_basis",
    "normal_form",
    "divide",
    "ModuleBasis",
    "Membership",
    "module_membership",
    "module_equal",
    "IdealPresentation",
]

Term = Tuple[int, Exponent]
Vec = Dict[Term, Fraction]


def _vec_from_polys(polys: Sequence[Polynomial], offset: int = 0) -> Vec:
    v: Vec = {}
    for i, p in enumerate(polys):
        for e, c in p.terms.items():
            v[(i + offset, e)] = c
    return v


def _polys_from_vec(v: Vec, rank: int, vars: Tuple[str, ...], offset: int = 0) -> List[Polynomial]:
    parts: List[Dict[Exponent, Fraction]] = [dict() for _ in range(rank)]
    for (i, e), c in v.items():
        if offset <= i < offset + rank:
            parts[i - offset][e] = c
    return [Polynomial._raw(p, vars) for p in parts]


class _Engine:
    """Shared reduction / S-pair machinery for one term order."""

    def __init__(self, order: str, nvars: int):
        self.order = order
        mono_key = order_key(order)
        self.key = lambda t: (-t[0], mono_key(t[1]))
        self.nvars = nvars

    def lead(self, v: Vec) -> Term:
        return max(v, key=self.key)

    @staticmethod
    def axpy(v: Vec, g: Vec, q: Fraction, shift: Exponent) -> None:
        """In place: v -= q * x^shift * g."""
        for (p, e), c in g.items():
            t = (p, tuple(a + b for a, b in zip(e, shift)))
            s = v.get(t, 0) - q * c
            if s:
                v[t] = s
            else:
                v.pop(t, None)

    def reduce(self, v: Vec, basis: List[Vec], leads: List[Term], full: bool = True,
               record: Optional[List[Dict[Exponent, Fraction]]] = None) -> Vec:
        """Multivariate division; returns the remainder.

        When ``record`` is a list (one dict per basis element) the quotients
        are accumulated there.
        """
        v = dict(v)
        rem: Vec = {}
        by_pos: Dict[int, List[int]] = {}
        for i, lt in enumerate(leads):
            by_pos.setdefault(lt[0], []).append(i)
        while v:
            t = self.lead(v)
            c = v[t]
            for i in by_pos.get(t[0], ()):
                lt = leads[i]
                if monomial_divides(lt[1], t[1]):
                    q = c / basis[i][lt]
                    shift = tuple(a - b for a, b in zip(t[1], lt[1]))
                    self.axpy(v, basis[i], q, shift)
                    if record is not None:
                        record[i][shift] = record[i].get(shift, 0) + q
                    break
            else:
                if not full:
                    rem.update(v)
                    return rem
                rem[t] = c
                del v[t]
        return rem

    def spoly(self, f: Vec, lf: Term, g: Vec, lg: Term) -> Vec:
        lcm = monomial_lcm(lf[1], lg[1])
        v: Vec = {}
        self.axpy(v, f, -1 / f[lf], tuple(a - b for a, b in zip(lcm, lf[1])))
        self.axpy(v, g, 1 / g[lg], tuple(a - b for a, b in zip(lcm, lg[1])))
        return v

    def monic(self, v: Vec) -> Vec:
        c = v[self.lead(v)]
        return {t: x / c for t, x in v.items()}


class ModuleBasis:
    """Incrementally maintained Gröbner basis of a submodule of ``R^rank``.

    ``R = Q[vars]``.  Elements are given as sequences of polynomials.  The
    ``relations`` passed at construction are added first; they typically
    encode a quotient ring (``f * e_i`` for every position ``i``).
    """

    def __init__(self, rank: int, vars: Sequence[str], order: str = "degrevlex", relations=()):
        self.rank = rank
        self.vars = tuple(vars)
        self.engine = _Engine(order, len(self.vars))
        self.basis: List[Vec] = []
        self.leads: List[Term] = []
        self._pairs: List[Tuple[int, int]] = []
        for r in relations:
            self.add(r)

    def _to_vec(self, elt) -> Vec:
        if isinstance(elt, dict):
            return elt
        if len(elt) != self.rank:
            raise ValueError(f"expected a vector of length {self.rank}")
        for p in elt:
            if p.vars != self.vars:
                raise ValueError("vector entries use a different variable context")
        return _vec_from_polys(elt)

    def add(self, elt) -> bool:
        """Add a generator; returns False when it was already in the module."""
        v = self.engine.reduce(self._to_vec(elt), self.basis, self.leads)
        if not v:
            return False
        self._insert(self.engine.monic(v))
        self._complete()
        return True

    def _insert(self, v: Vec) -> None:
        lt = self.engine.lead(v)
        n = len(self.basis)
        self.basis.append(v)
        self.leads.append(lt)
        for i, li in enumerate(self.leads[:-1]):
            if li[0] != lt[0]:
                continue
            if self.rank == 1 and all(a == 0 or b == 0 for a, b in zip(li[1], lt[1])):
                continue  # coprime leading monomials (ideal case only)
            self._pairs.append((i, n))

    def _complete(self) -> None:
        key = self.engine.key
        while self._pairs:
            # normal selection strategy: smallest lcm first
            self._pairs.sort(
                key=lambda ij: key((self.leads[ij[0]][0],
                                    monomial_lcm(self.leads[ij[0]][1], self.leads[ij[1]][1]))),
                reverse=True,
            )
            i, j = self._pairs.pop()
            if self._chain_redundant(i, j):
                continue
            s = self.engine.spoly(self.basis[i], self.leads[i], self.basis[j], self.leads[j])
            r = self.engine.reduce(s, self.basis, self.leads)
            if r:
                self._insert(self.engine.monic(r))

    def _chain_redundant(self, i: int, j: int) -> bool:
        lcm = monomial_lcm(self.leads[i][1], self.leads[j][1])
        pos = self.leads[i][0]
        pending = set(self._pairs)
        for k, lk in enumerate(self.leads):
            if k in (i, j) or lk[0] != pos or not monomial_divides(lk[1], lcm):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                if monomial_lcm(lk[1], self.leads[i][1]) != lcm and monomial_lcm(lk[1], self.leads[j][1]) != lcm:
                    return True
        return False

    def reduce(self, elt) -> List[Polynomial]:
        r = self.engine.reduce(self._to_vec(elt), self.basis, self.leads)
        return _polys_from_vec(r, self.rank, self.vars)

    def contains(self, elt) -> bool:
        return not self.engine.reduce(self._to_vec(elt), self.basis, self.leads)

    def reduced_basis(self) -> List[List[Polynomial]]:
        """Unique reduced Gröbner basis, sorted by decreasing leading term."""
        eng = self.engine
        elems = sorted(zip(self.leads, self.basis), key=lambda t: eng.key(t[0]))
        minimal: List[Tuple[Term, Vec]] = []
        for lt, v in elems:
            if not any(l2[0] == lt[0] and monomial_divides(l2[1], lt[1]) for l2, _ in minimal):
                minimal.append((lt, v))
        out = []
        for idx, (lt, v) in enumerate(minimal):
            others = [w for k, (_, w) in enumerate(minimal) if k != idx]
            others_lt = [l for k, (l, _) in enumerate(minimal) if k != idx]
            r = eng.reduce(v, others, others_lt)
            out.append((eng.lead(r), eng.monic(r)))
        out.sort(key=lambda t: eng.key(t[0]), reverse=True)
        return [_polys_from_vec(v, self.rank, self.vars) for _, v in out]


def _context(polys: Sequence[Polynomial]) -> Tuple[str, ...]:
    ctxs = {p.vars for p in polys}
    if len(ctxs) > 1:
        raise ValueError("generators do not share a variable context")
    return ctxs.pop()


def groebner_basis(gens: Sequence[Polynomial], order: str = "degrevlex") -> List[Polynomial]:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    The zero ideal yields an empty list.  The output is monic and sorted by
    decreasing leading monomial, so it is unique for a given ideal and order.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    mb = ModuleBasis(1, _context(gens), order)
    for g in gens:
        mb.add([g])
    return [v[0] for v in mb.reduced_basis()]


def divide(p: Polynomial, divisors: Sequence[Polynomial], order: str = "degrevlex"):
    """Multivariate division: ``p = sum(q_i * divisors[i]) + r``."""
    eng = _Engine(order, len(p.vars))
    live = [i for i, g in enumerate(divisors) if not g.is_zero()]  # zero divisors get quotient 0
    basis = [_vec_from_polys([divisors[i]]) for i in live]
    leads = [eng.lead(b) for b in basis]
    record = [dict() for _ in basis]
    r = eng.reduce(_vec_from_polys([p]), basis, leads, record=record) if basis else _vec_from_polys([p])
    quotients = [Polynomial.zero(p.vars) for _ in divisors]
    for i, q in zip(live, record):
        quotients[i] = Polynomial._raw({e: c for e, c in q.items() if c}, p.vars)
    return quotients, _polys_from_vec(r, 1, p.vars)[0]


def normal_form(p: Polynomial, basis: Sequence[Polynomial], order: str = "degrevlex") -> Polynomial:
    """Remainder of ``p`` on division by ``basis``; zero iff ``p`` lies in the
    ideal when ``basis`` is a Gröbner basis for ``order``."""
    if not basis:
        return p
    return divide(p, basis, order)[1]


@dataclass(frozen=True)
class Membership:
    member: bool
    coefficients: Optional[Tuple[Polynomial, ...]] = None

    def __bool__(self):
        return self.member


def module_membership(elt: Sequence[Polynomial], gens: Sequence[Sequence[Polynomial]],
                      relations: Sequence[Sequence[Polynomial]] = (), order: str = "degrevlex",
                      witness: bool = True) -> Membership:
    """Decide ``elt`` in the submodule spanned by ``gens`` (+ ``relations``).

    With ``witness`` the returned coefficients satisfy
    ``elt = sum(c_i * gens[i])`` modulo the span of ``relations``.
    """
    rank = len(elt)
    vars = elt[0].vars if rank else ()
    if all(p.is_zero() for p in elt):
        zero = Polynomial.zero(vars)
        return Membership(True, tuple(zero for _ in gens) if witness else None)
    if not witness:
        mb = ModuleBasis(rank, vars, order, relations=[_vec_from_polys(r) for r in relations])
        for g in gens:
            mb.add(g)
        return Membership(mb.contains(elt))
    # lift through the augmented module (g_i, e_i); POT keeps the original
    # positions dominant so the first block of a GB spans the module itself
    ngen = len(gens)
    mb = ModuleBasis(rank + ngen, vars, order)
    for r in relations:
        mb.add(_vec_from_polys(r))
    for i, g in enumerate(gens):
        v = _vec_from_polys(g)
        v[(rank + i, (0,) * len(vars))] = Fraction(1)
        mb.add(v)
    r = mb.engine.reduce(_vec_from_polys(elt), mb.basis, mb.leads)
    if any(pos < rank for pos, _ in r):
        return Membership(False)
    tail = _polys_from_vec(r, ngen, vars, offset=rank)
    return Membership(True, tuple(-t for t in tail))


def module_equal(gens1, gens2, relations=(), order: str = "degrevlex") -> bool:
    """Mutual containment of the two spans."""
    gens1 = [g for g in gens1]
    gens2 = [g for g in gens2]
    if not gens1 and not gens2:
        return True
    rank = len((gens1 or gens2)[0])
    vars = (gens1 or gens2)[0][0].vars
    rel = [_vec_from_polys(r) for r in relations]
    m1 = ModuleBasis(rank, vars, order, relations=rel)
    for g in gens1:
        m1.add(g)
    if not all(m1.contains(g) for g in gens2):
        return False
    m2 = ModuleBasis(rank, vars, order, relations=rel)
    for g in gens2:
        m2.add(g)
    return all(m2.contains(g) for g in gens1)


class IdealPresentation:
    """Generators of an ideal plus a per-order cache of its Gröbner basis."""

    def __init__(self, generators: Sequence[Polynomial]):
        self.generators = tuple(generators)
        self.vars = _context(self.generators) if self.generators else ()
        self._cache: Dict[str, Tuple[Polynomial, ...]] = {}

    def basis(self, order: str = "degrevlex") -> Tuple[Polynomial, ...]:
        got = self._cache.get(order)
        if got is None:
            got = tuple(groebner_basis(self.generators, order))
            self._cache[order] = got
        return got

    def normal_form(self, p: Polynomial, order: str = "degrevlex") -> Polynomial:
        return normal_form(p, self.basis(order), order)

    def contains(self, p: Polynomial) -> bool:
        return self.normal_form(p).is_zero()
