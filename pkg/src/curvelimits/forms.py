"""Ternary forms, substitutions by matrices of polynomials in t, and factoring.

Forms are homogeneous polynomials in ``x, y, z``.  A substitution by a 3x3
matrix ``M(t)`` means ``F(M(t) . (x, y, z))``: the variable ``x`` is replaced
by the first row of ``M`` applied to ``(x, y, z)`` and so on.  The result is a
:class:`GermExpansion`, whose lowest ``t``-order part is the limit form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import (AlgebraicNumber, Tower, UniPoly, adjoin_root, as_number, join,
                    rationals, _format_term, _join_terms)
from .config import LIMITS
from .errors import DegreeCapError, InvariantError

VARS = ("x", "y", "z")

Exponent = tuple[int, int, int]


def _mono_str(exps: Sequence[int], names: Sequence[str] = VARS) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e)


class HomogeneousForm:
    """A homogeneous polynomial in ``x, y, z`` over a tower."""

    __slots__ = ("tower", "rep", "degree")

    def __init__(self, tower: Tower, rep, degree: int | None = None):
        self.tower = tower
        self.rep = rep
        if rep:
            degs = {sum(m) for m in rep.keys()}
            if len(degs) != 1:
                raise ValueError("form is not homogeneous")
            d = degs.pop()
            if degree is not None and degree != d:
                raise ValueError(f"form has degree {d}, expected {degree}")
            degree = d
        elif degree is None:
            degree = 0
        self.degree = degree

    # -- construction -------------------------------------------------------
    @classmethod
    def from_dict(cls, coeffs: dict, tower: Tower | None = None,
                  degree: int | None = None) -> "HomogeneousForm":
        tower = join(tower, *(c.tower for c in coeffs.values() if isinstance(c, AlgebraicNumber)))
        R = tower.ring("x,y,z")
        terms = {}
        for exps, c in coeffs.items():
            v = as_number(c, tower).lift(tower).value
            if not tower.dom.is_zero(v):
                terms[tuple(exps)] = v
        return cls(tower, R.from_dict(terms) if terms else R.zero, degree)

    @classmethod
    def linear(cls, coeffs: Sequence, tower: Tower | None = None) -> "HomogeneousForm":
        a, b, c = coeffs
        return cls.from_dict({(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c}, tower, 1)

    @classmethod
    def constant(cls, c, tower: Tower | None = None) -> "HomogeneousForm":
        return cls.from_dict({(0, 0, 0): c}, tower, 0)

    # -- access -------------------------------------------------------------
    def coefficients(self) -> dict[Exponent, AlgebraicNumber]:
        return {m: AlgebraicNumber(self.tower, c) for m, c in self.rep.items()}

    def coefficient(self, exps: Exponent) -> AlgebraicNumber:
        return AlgebraicNumber(self.tower, self.rep.get(tuple(exps), self.tower.dom.zero))

    def terms(self) -> list[tuple[Exponent, AlgebraicNumber]]:
        """Terms in lexicographic order, ``x`` heaviest first."""
        return sorted(self.coefficients().items(), reverse=True)

    def support(self) -> list[Exponent]:
        return sorted(self.rep.keys(), reverse=True)

    def is_zero(self) -> bool:
        return not self.rep

    def leading_coefficient(self) -> AlgebraicNumber:
        return self.terms()[0][1]

    def lift(self, tower: Tower) -> "HomogeneousForm":
        if tower == self.tower:
            return self
        R = tower.ring("x,y,z")
        rep = R.from_dict({m: tower.embed(c, self.tower) for m, c in self.rep.items()}) \
            if self.rep else R.zero
        return HomogeneousForm(tower, rep, self.degree)

    # -- arithmetic ---------------------------------------------------------
    def _pair(self, other: "HomogeneousForm"):
        t = join(self.tower, other.tower)
        return t, self.lift(t).rep, other.lift(t).rep

    def __add__(self, other):
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        if other.degree != self.degree and self.rep and other.rep:
            raise ValueError("cannot add forms of different degrees")
        t, a, b = self._pair(other)
        return HomogeneousForm(t, a + b, self.degree if self.rep else other.degree)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return HomogeneousForm(self.tower, -self.rep, self.degree)

    def __mul__(self, other):
        if isinstance(other, HomogeneousForm):
            t, a, b = self._pair(other)
            return HomogeneousForm(t, a * b, self.degree + other.degree)
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            n = as_number(other)
            t = join(self.tower, n.tower)
            return HomogeneousForm(t, self.lift(t).rep * n.lift(t).value, self.degree)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        n = as_number(other)
        return self * n.inverse()

    def __pow__(self, n: int):
        return HomogeneousForm(self.tower, self.rep ** n, self.degree * n)

    def __eq__(self, other):
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        _, a, b = self._pair(other)
        return a == b and (bool(a) or self.degree == other.degree)

    __hash__ = None

    def exact_divide(self, other: "HomogeneousForm") -> "HomogeneousForm":
        t, a, b = self._pair(other)
        q, r = a.div(b)
        if r:
            raise ValueError("form is not divisible")
        return HomogeneousForm(t, q, self.degree - other.degree)

    def divides(self, other: "HomogeneousForm") -> bool:
        t, a, b = self._pair(other)
        return not b.rem(a)

    # -- normalisation ------------------------------------------------------
    def normalized(self) -> "HomogeneousForm":
        """Scale so that the lexicographically first coefficient is 1."""
        if not self.rep:
            return self
        return self / self.leading_coefficient()

    def proportional(self, other: "HomogeneousForm") -> bool:
        if self.degree != other.degree or self.is_zero() or other.is_zero():
            return False
        return self.normalized() == other.normalized()

    # -- calculus -----------------------------------------------------------
    def diff(self, var: int) -> "HomogeneousForm":
        return HomogeneousForm(self.tower, self.rep.diff(self.rep.ring.gens[var]),
                               max(self.degree - 1, 0))

    def gradient(self) -> list["HomogeneousForm"]:
        return [self.diff(i) for i in range(3)]

    def hessian(self) -> "HomogeneousForm":
        h = [[self.diff(i).diff(j).rep for j in range(3)] for i in range(3)]
        det = (h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
               - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
               + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]))
        return HomogeneousForm(self.tower, det, 3 * max(self.degree - 2, 0))

    def evaluate(self, point: Sequence) -> AlgebraicNumber:
        pts = [as_number(c) for c in point]
        t = join(self.tower, *(p.tower for p in pts))
        vals = [p.lift(t).value for p in pts]
        rep = self.lift(t).rep
        return AlgebraicNumber(t, rep(*vals) if rep else t.dom.zero)

    def compose(self, matrix: Sequence[Sequence]) -> "HomogeneousForm":
        """``F(M . (x, y, z))`` for a constant matrix ``M``."""
        M = [[as_number(c) for c in row] for row in matrix]
        t = join(self.tower, *(c.tower for row in M for c in row))
        R = t.ring("x,y,z")
        gens = R.gens
        images = [sum((M[i][j].lift(t).value * gens[j] for j in range(3)), R.zero)
                  for i in range(3)]
        return HomogeneousForm(t, _evaluate_rep(self.lift(t).rep, images, R), self.degree)

    def restrict_to_line(self, base: Sequence, direction: Sequence) -> UniPoly:
        """The univariate polynomial ``s -> F(base + s * direction)``."""
        b = [as_number(c) for c in base]
        d = [as_number(c) for c in direction]
        t = join(self.tower, *(c.tower for c in b + d))
        R = t.ring("t")
        s = R.gens[0]
        images = [b[i].lift(t).value + d[i].lift(t).value * s for i in range(3)]
        return UniPoly(t, _evaluate_rep(self.lift(t).rep, images, R))

    def squarefree_part(self) -> "HomogeneousForm":
        rep = self.rep.sqf_part()
        return HomogeneousForm(self.tower, rep).normalized()

    def is_linear(self) -> bool:
        return self.degree == 1

    def variables_used(self) -> set[int]:
        return {i for m in self.rep.keys() for i in range(3) if m[i]}

    # -- presentation -------------------------------------------------------
    def format(self, names: Sequence[str] = VARS) -> str:
        if not self.rep:
            return "0"
        return _join_terms([_format_term(c, _mono_str(m, names)) for m, c in self.terms()])

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"HomogeneousForm({self})"


def _evaluate_rep(rep, images, R):
    """Substitute ring elements ``images`` for the variables of ``rep``."""
    out = R.zero
    cache: dict[tuple[int, int], object] = {}
    for m, c in rep.items():
        term = R(c)
        for i, e in enumerate(m):
            if e:
                if (i, e) not in cache:
                    cache[(i, e)] = images[i] ** e
                term *= cache[(i, e)]
        out += term
    return out


class GermExpansion:
    """A form whose coefficients are polynomials in ``t``."""

    __slots__ = ("tower", "rep", "degree")

    def __init__(self, tower: Tower, rep, degree: int):
        self.tower = tower
        self.rep = rep
        self.degree = degree

    def is_zero(self) -> bool:
        return not self.rep

    def t_orders(self) -> list[int]:
        return sorted({m[3] for m in self.rep.keys()})

    def coefficient(self, exps: Exponent) -> UniPoly:
        R = self.tower.ring("t")
        terms = {(m[3],): c for m, c in self.rep.items() if m[:3] == tuple(exps)}
        return UniPoly(self.tower, R.from_dict(terms) if terms else R.zero)

    def part(self, order: int) -> HomogeneousForm:
        R = self.tower.ring("x,y,z")
        terms = {m[:3]: c for m, c in self.rep.items() if m[3] == order}
        return HomogeneousForm(self.tower, R.from_dict(terms) if terms else R.zero, self.degree)

    def __str__(self):
        parts = []
        for e in self.t_orders():
            parts.append(f"t^{e}*({self.part(e)})")
        return " + ".join(parts) or "0"


def _entry(value, tower: Tower) -> UniPoly:
    if isinstance(value, UniPoly):
        return value.lift(join(value.tower, tower))
    return UniPoly.constant(as_number(value), tower)


def germ_entries(M) -> list[list[UniPoly]]:
    """The 3x3 entries of a germ or nested sequence as polynomials in t."""
    rows = M.entries if hasattr(M, "entries") else M
    cells = [[c for c in row] for row in rows]
    if len(cells) != 3 or any(len(r) != 3 for r in cells):
        raise ValueError("expected a 3x3 matrix")
    t = join(*(c.tower for row in cells for c in row if hasattr(c, "tower")))
    return [[_entry(c, t).lift(t) if isinstance(c, UniPoly) else _entry(c, t) for c in row]
            for row in cells]


def substitute(F: HomogeneousForm, M) -> GermExpansion:
    """Expand ``F(M(t) . (x, y, z))`` exactly."""
    entries = germ_entries(M)
    t = join(F.tower, *(e.tower for row in entries for e in row))
    tdeg = max((e.degree for row in entries for e in row if not e.is_zero()), default=0)
    if tdeg * F.degree > LIMITS.t_degree_cap:
        raise DegreeCapError(
            f"t-degree {tdeg * F.degree} of the substitution exceeds cap {LIMITS.t_degree_cap}")
    R4 = t.ring("x,y,z,t")
    gx = R4.gens

    def lift_entry(u: UniPoly):
        u = u.lift(t)
        return R4.from_dict({(0, 0, 0, m[0]): c for m, c in u.rep.items()}) if u.rep else R4.zero

    images = [sum((lift_entry(entries[i][j]) * gx[j] for j in range(3)), R4.zero)
              for i in range(3)]
    powers = [{0: R4.one} for _ in range(3)]

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            best = max(k for k in cache if k <= e)
            val = cache[best]
            for k in range(best + 1, e + 1):
                val = val * images[i]
                cache[k] = val
        return cache[e]

    out = R4.zero
    for m, c in F.lift(t).rep.items():
        out += power(0, m[0]) * power(1, m[1]) * power(2, m[2]) * c
    return GermExpansion(t, out, F.degree)


def dominant_part(E: GermExpansion) -> tuple[int, HomogeneousForm]:
    """Lowest ``t``-order and the form multiplying it."""
    if E.is_zero():
        raise InvariantError("expansion vanishes identically (singular germ?)")
    order = min(m[3] for m in E.rep.keys())
    return order, E.part(order)


@dataclass
class Factorization:
    """``unit * prod(factor^multiplicity)`` with normalised factors."""

    unit: AlgebraicNumber
    factors: list[tuple[HomogeneousForm, int]]

    @property
    def tower(self) -> Tower:
        return join(self.unit.tower, *(f.tower for f, _ in self.factors))

    def expand(self) -> HomogeneousForm:
        t = self.tower
        out = HomogeneousForm.constant(self.unit, t)
        for f, e in self.factors:
            out = out * f.lift(t) ** e
        return out

    @property
    def linear_factors(self) -> list[tuple[HomogeneousForm, int]]:
        return [(f, e) for f, e in self.factors if f.degree == 1]

    @property
    def nonlinear_factors(self) -> list[tuple[HomogeneousForm, int]]:
        return [(f, e) for f, e in self.factors if f.degree > 1]

    def lift(self, tower: Tower) -> "Factorization":
        return Factorization(self.unit.lift(tower), [(f.lift(tower), e) for f, e in self.factors])

    def __str__(self):
        parts = []
        for f, e in self.factors:
            s = str(f)
            if len(f.rep) > 1 and (len(self.factors) > 1 or e > 1 or self.unit != 1):
                s = f"({s})"
            parts.append(s if e == 1 else f"{s}^{e}")
        body = "*".join(parts) or "1"
        if self.unit == 1:
            return body
        u = str(self.unit)
        if not self.unit.is_simple_term():
            u = f"({u})"
        return f"{u}*{body}" if parts else u


def _sort_factors(factors):
    return sorted(factors, key=lambda fe: (fe[0].degree, fe[0].format(), fe[1]))


def factor_over_tower(F: HomogeneousForm) -> list[tuple[HomogeneousForm, int]]:
    """Irreducible factors over the form's own tower (normalised)."""
    if F.degree > LIMITS.form_degree_cap:
        raise DegreeCapError(f"form degree {F.degree} exceeds cap {LIMITS.form_degree_cap}")
    _, facs = F.rep.factor_list()
    out = []
    for f, e in facs:
        g = HomogeneousForm(F.tower, f)
        if g.degree > 0:
            out.append((g.normalized(), e))
    return out


# Lines used to look for points on a curve: base point and direction.
def _probe_lines():
    values = [0, 1, -1, 2, -2, 3, -3]
    for c in values:
        yield (0, 1, c), (1, 0, 0)
        yield (1, 0, c), (0, 1, 0)
        yield (1, c, 0), (0, 0, 1)


def smooth_point_search(G: HomogeneousForm, avoid=None):
    """A smooth point of ``G`` with coordinates in ``G``'s tower, or None.

    ``avoid`` is an optional predicate rejecting unwanted points.
    """
    grad = G.gradient()
    for base, direction in _probe_lines():
        u = G.restrict_to_line(base, direction)
        if u.is_zero() or u.degree < 1:
            continue
        _, facs = u.factor()
        for f, _ in facs:
            if f.degree != 1:
                continue
            s = -f.coefficient(0)
            pt = [as_number(b) + s * d for b, d in zip(base, direction)]
            if all(g.evaluate(pt).is_zero() for g in grad):
                continue
            if avoid is not None and avoid(pt):
                continue
            return pt
    return None


def _transversal_section(G: HomogeneousForm) -> UniPoly:
    for base, direction in _probe_lines():
        u = G.restrict_to_line(base, direction)
        if u.degree == G.degree and u.gcd(u.derivative()).degree == 0:
            return u
    raise InvariantError("no transversal line found")  # pragma: no cover


def _absolute_split(G: HomogeneousForm, tower: Tower) -> tuple[Tower, list[HomogeneousForm]]:
    """Split an irreducible form into absolutely irreducible components."""
    G = G.lift(join(G.tower, tower))
    tower = G.tower
    if G.degree == 1 or smooth_point_search(G) is not None:
        return tower, [G]
    u = _transversal_section(G)
    _, facs = u.factor()
    h = facs[0][0]
    if h.degree == 1:
        return tower, [G]
    bigger, _ = adjoin_root(tower, h)
    pieces = factor_over_tower(G.lift(bigger))
    if len(pieces) == 1:
        return tower, [G]
    out = []
    current = bigger
    for piece, _ in pieces:
        current, parts = _absolute_split(piece, current)
        out.extend(parts)
    return current, out


def factor(F: HomogeneousForm, tower: Tower | None = None) -> Factorization:
    """Absolute factorisation, extending the tower only when needed."""
    current = join(F.tower, tower)
    F = F.lift(current)
    if F.is_zero():
        raise ValueError("cannot factor the zero form")
    collected = []
    for g, e in factor_over_tower(F):
        current, parts = _absolute_split(g, current)
        collected.extend((p, e) for p in parts)
    factors = _sort_factors([(p.lift(current).normalized(), e) for p, e in collected])
    unit = F.leading_coefficient().lift(current)
    return Factorization(unit, factors)


def lex_key(form: HomogeneousForm) -> tuple:
    return tuple((m, c.sort_key()) for m, c in form.terms())
