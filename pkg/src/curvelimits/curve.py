"""Plane curves: points, lines, flags, tangent cones, singular and flex points.

Points and lines are stored as normalised coordinate triples (first nonzero
entry equal to 1).  Local questions at a point ``p`` are answered in
flag-adapted coordinates: a matrix ``N`` with first column ``p`` so that
``F(N . (x, y, z))`` has the point at ``(1:0:0)``; when a line through ``p``
is given, the second column lies on it so that the line becomes ``z = 0``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

from .arith import AlgebraicNumber, Tower, UniPoly, as_number, join, roots_in_closure
from .errors import GeometryError, InvariantError
from .forms import Factorization, HomogeneousForm, factor
from .linalg import cross, det3, inverse3, is_zero_vector, vecmat


def _normalize(coords: Sequence) -> tuple[AlgebraicNumber, ...]:
    vals = [as_number(c) for c in coords]
    t = join(*(v.tower for v in vals))
    vals = [v.lift(t) for v in vals]
    lead = next((v for v in vals if not v.is_zero()), None)
    if lead is None:
        raise GeometryError("the zero vector is not a projective point")
    return tuple(v / lead for v in vals)


class _Triple:
    """Common behaviour of points and lines: normalised projective triples."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        self.coords = _normalize(coords)

    @property
    def tower(self) -> Tower:
        return self.coords[0].tower

    def lift(self, tower: Tower):
        return type(self)([c.lift(tower) for c in self.coords])

    def __eq__(self, other):
        return type(other) is type(self) and all(a == b for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        return hash(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def sort_key(self) -> tuple:
        return tuple(c.sort_key() for c in self.coords)

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coords)


class Point(_Triple):
    def __str__(self):
        return "(" + " : ".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"Point{self}"


class Line(_Triple):
    """The line ``a*x + b*y + c*z = 0``."""

    def form(self) -> HomogeneousForm:
        return HomogeneousForm.linear(self.coords)

    def contains(self, p: Point) -> bool:
        return sum((a * b for a, b in zip(self.coords, p.coords)), self.coords[0] * 0).is_zero()

    def value(self, v: Sequence) -> AlgebraicNumber:
        return sum((a * as_number(b) for a, b in zip(self.coords, v)), self.coords[0] * 0)

    def __str__(self):
        return str(self.form())

    def __repr__(self):
        return f"Line({self})"

    @classmethod
    def from_form(cls, form: HomogeneousForm) -> "Line":
        if form.degree != 1:
            raise GeometryError("a line needs a linear form")
        return cls([form.coefficient(e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))])


@dataclass(frozen=True)
class Flag:
    point: Point
    line: Line

    def __post_init__(self):
        if not self.line.contains(self.point):
            raise GeometryError(f"point {self.point} is not on line {self.line}")

    def __str__(self):
        return f"({self.point}, {self.line} = 0)"


def flag_transform(point: Point, line: Line | None = None) -> list[list[AlgebraicNumber]]:
    """A matrix with columns ``point``, a second point (on ``line``), a third point.

    The completion uses standard basis vectors and is deterministic.
    """
    p = list(point.coords)
    t = point.tower if line is None else join(point.tower, line.tower)
    p = [c.lift(t) for c in p]
    e = [[t.number(1 if i == j else 0) for i in range(3)] for j in range(3)]
    if line is None:
        for i in range(3):
            for j in range(i + 1, 3):
                cols = [p, e[i], e[j]]
                if not det3([[c[r] for c in cols] for r in range(3)]).is_zero():
                    return [[c[r] for c in cols] for r in range(3)]
        raise InvariantError("cannot complete point to a basis")  # pragma: no cover
    l = [c.lift(t) for c in line.coords]
    second = None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        cand = [l[j] * e[i][k] - l[i] * e[j][k] for k in range(3)]
        if is_zero_vector(cand):
            continue
        cand = list(_normalize(cand))
        if is_zero_vector(cross(p, cand)):
            continue
        second = cand
        break
    third = next(e[k] for k in range(3) if not l[k].is_zero())
    cols = [p, second, third]
    return [[c[r] for c in cols] for r in range(3)]


def local_form(F: HomogeneousForm, frame) -> HomogeneousForm:
    """``F`` in the coordinates of ``frame`` (a matrix from :func:`flag_transform`)."""
    return F.compose(frame)


def local_line_to_global(coeffs: Sequence, frame) -> Line:
    """Convert a line given in frame coordinates back to the original ones."""
    return Line(vecmat(coeffs, inverse3(frame)))


class PlaneCurve:
    """A (possibly reducible, non-reduced) plane curve ``F = 0``."""

    def __init__(self, form: HomogeneousForm):
        if form.is_zero() or form.degree < 1:
            raise GeometryError("a curve needs a nonzero form of positive degree")
        self.form = form

    @classmethod
    def parse(cls, text: str) -> "PlaneCurve":
        from .parsing import parse_curve
        return cls(parse_curve(text))

    @property
    def degree(self) -> int:
        return self.form.degree

    @property
    def tower(self) -> Tower:
        return self.form.tower

    def lift(self, tower: Tower) -> "PlaneCurve":
        return PlaneCurve(self.form.lift(tower))

    @functools.cached_property
    def support(self) -> HomogeneousForm:
        """Reduced equation: the product of the distinct components."""
        return self.form.squarefree_part()

    @functools.cached_property
    def factorization(self) -> Factorization:
        return factor(self.form)

    @property
    def components(self) -> list[tuple[HomogeneousForm, int]]:
        return self.factorization.factors

    @property
    def linear_components(self) -> list[tuple[HomogeneousForm, int]]:
        return self.factorization.linear_factors

    @property
    def nonlinear_components(self) -> list[tuple[HomogeneousForm, int]]:
        return self.factorization.nonlinear_factors

    def contains(self, p: Point) -> bool:
        return self.form.evaluate(p.coords).is_zero()

    def is_singular_point_of_support(self, p: Point) -> bool:
        S = self.support
        return all(g.evaluate(p.coords).is_zero() for g in S.gradient()) and \
            S.evaluate(p.coords).is_zero()

    def __str__(self):
        return str(self.form)

    def __repr__(self):
        return f"PlaneCurve({self.form})"


def _as_curve(C) -> PlaneCurve:
    if isinstance(C, PlaneCurve):
        return C
    if isinstance(C, str):
        return PlaneCurve.parse(C)
    return PlaneCurve(C)


def multiplicity(C, p: Point) -> int:
    """Order of vanishing of the curve's equation at ``p`` (0 when off the curve)."""
    C = _as_curve(C)
    G = local_form(C.form, flag_transform(p))
    return min(m[1] + m[2] for m in G.rep.keys())


@dataclass
class TangentCone:
    """Lowest order part at a point, in frame coordinates, with its lines."""

    point: Point
    multiplicity: int
    form: HomogeneousForm  # binary form in y, z
    lines: list[tuple[Line, int]]
    frame: list = field(repr=False)

    @property
    def distinct_lines(self) -> list[Line]:
        return [l for l, _ in self.lines]

    @property
    def tower(self) -> Tower:
        return join(self.form.tower, *(l.tower for l, _ in self.lines))


def tangent_cone(C, p: Point) -> TangentCone:
    C = _as_curve(C)
    frame = flag_transform(p)
    G = local_form(C.form, frame)
    m = min(mo[1] + mo[2] for mo in G.rep.keys())
    if m == 0:
        raise GeometryError(f"point {p} is not on the curve")
    terms = {(0, mo[1], mo[2]): c for mo, c in G.coefficients().items() if mo[1] + mo[2] == m}
    cone = HomogeneousForm.from_dict(terms, G.tower, m)
    lines = _split_binary(cone)
    glines = [(local_line_to_global(coeffs, frame), mult) for coeffs, mult in lines]
    t = join(*(l.tower for l, _ in glines))
    glines = [(l.lift(t), mult) for l, mult in glines]
    return TangentCone(p, m, cone, glines, frame)


def _split_binary(B: HomogeneousForm) -> list[tuple[list[AlgebraicNumber], int]]:
    """Linear factors of a binary form in ``y, z`` as coefficient triples."""
    kz = min(mo[2] for mo in B.rep.keys())
    out = []
    rest = {mo[1]: c for mo, c in B.coefficients().items()}
    if kz:
        out.append(([0, 0, 1], kz))
    top = max(rest)
    if top:
        poly = UniPoly.from_coeffs([rest.get(j, 0) for j in range(top + 1)], B.tower)
        # rest(y, z) = sum c_j y^j z^(m-j); roots s of rest(s, 1) give y - s z
        for root, mult in roots_in_closure(poly):
            out.append(([0, 1, -root], mult))
    return out


def _dehomogenize_z(F: HomogeneousForm, R):
    return R.from_dict({(m[1], m[0]): c for m, c in F.rep.items()}) if F.rep else R.zero


def solve_projective(forms: Sequence[HomogeneousForm]) -> list[Point]:
    """Common zeros of finitely many forms, assuming there are finitely many."""
    forms = [f for f in forms if not f.is_zero()]
    tower = join(*(f.tower for f in forms))
    forms = [f.lift(tower) for f in forms]
    if any(f.degree == 0 for f in forms):
        return []
    if len(forms) < 2:
        raise InvariantError("need at least two equations for a finite solution set")
    found: list[Point] = []

    # affine chart z = 1: eliminate y
    R = tower.ring("y,x")
    polys = [_dehomogenize_z(f, R) for f in forms]
    xpoly = _eliminate(polys, tower)
    current = tower
    if xpoly is not None and xpoly.degree >= 1:
        for x0, _ in roots_in_closure(xpoly):
            current = join(current, x0.tower)
            g = None
            for f in forms:
                u = f.lift(current).restrict_to_line([x0.lift(current), 0, 1], [0, 1, 0])
                g = u if g is None else g.gcd(u)
            if g.is_zero():
                raise InvariantError("positive dimensional solution set")
            if g.degree >= 1:
                for y0, _ in roots_in_closure(g):
                    current = join(current, y0.tower)
                    found.append(Point([x0, y0, 1]))

    # the line z = 0: points (x : 1 : 0) and (1 : 0 : 0)
    g = None
    for f in forms:
        u = f.lift(current).restrict_to_line([0, 1, 0], [1, 0, 0])
        g = u if g is None else g.gcd(u)
    if g.is_zero():
        raise InvariantError("positive dimensional solution set")
    if g.degree >= 1:
        for x0, _ in roots_in_closure(g):
            current = join(current, x0.tower)
            found.append(Point([x0, 1, 0]))
    if all(f.evaluate([1, 0, 0]).is_zero() for f in forms):
        found.append(Point([1, 0, 0]))

    final = join(current, *(p.tower for p in found))
    unique: list[Point] = []
    for p in found:
        p = p.lift(final)
        if p not in unique:
            unique.append(p)
    return sorted(unique, key=lambda q: q.sort_key())


def _combos(n: int):
    base = [[1, 2, 3, 5], [1, -1, 2, -3], [2, 1, -1, 4], [1, 3, -2, 1], [3, -2, 1, 2]]
    for row in base:
        yield row[:n]


def _eliminate(polys, tower: Tower) -> UniPoly | None:
    """A nonzero polynomial in x vanishing at the x-coordinates of all solutions."""
    results = []
    combos = list(_combos(len(polys)))
    pairs = [(a, b) for a in range(len(combos)) for b in range(a + 1, len(combos))]
    if len(polys) == 2:
        pairs = [(None, None)] + pairs
    for a, b in pairs:
        if a is None:
            q1, q2 = polys
        else:
            q1 = sum((c * p for c, p in zip(combos[a], polys)), polys[0].ring.zero)
            q2 = sum((c * p for c, p in zip(combos[b], polys)), polys[0].ring.zero)
        if not q1 or not q2:
            continue
        if q1.degree(0) == 0 and q2.degree(0) == 0:
            res = q1.gcd(q2)
            if res.degree(0) > 0 or not res:  # pragma: no cover - defensive
                continue
            r = _x_only(res, tower)
            if r.degree >= 1:
                raise InvariantError("positive dimensional solution set")
            results.append(r)
        else:
            res = q1.resultant(q2)
            if not res:
                continue
            results.append(_x_only(res, tower))
        if len(results) >= 2:
            break
    if not results:
        raise InvariantError("positive dimensional solution set")
    out = results[0]
    for r in results[1:]:
        out = out.gcd(r)
    return out


def _x_only(res, tower: Tower) -> UniPoly:
    R = tower.ring("t")
    if not res:
        return UniPoly(tower, R.zero)
    if hasattr(res, "items"):
        return UniPoly(tower, R.from_dict({(m[-1],): c for m, c in res.items()}))
    return UniPoly(tower, R(res))


def singular_points(C) -> list[Point]:
    """Singular points of the reduced support."""
    C = _as_curve(C)
    S = C.support
    if S.degree == 1:
        return []
    return solve_projective(S.gradient())


def is_flex_or_singular(C, p: Point) -> bool:
    C = _as_curve(C)
    S = C.support
    if C.is_singular_point_of_support(p):
        return True
    return S.hessian().evaluate(p.coords).is_zero()


def inflection_points(C) -> list[Point]:
    """Smooth points of the support (off its linear components) where the tangent has contact at least 3."""
    C = _as_curve(C)
    fact = C.factorization
    lines = [f for f, _ in fact.linear_factors]
    found: list[Point] = []
    for G, _ in fact.nonlinear_factors:
        if G.degree == 2:
            continue
        for p in solve_projective([G, G.hessian()]):
            if any(l.evaluate(p.coords).is_zero() for l in lines):
                continue
            if C.is_singular_point_of_support(p):
                continue
            found.append(p)
    if not found:
        return []
    t = join(*(p.tower for p in found))
    out = []
    for p in found:
        p = p.lift(t)
        if p not in out:
            out.append(p)
    return sorted(out, key=lambda q: q.sort_key())


def tangent_line(C, p: Point) -> Line:
    """Tangent line at a smooth point of the support."""
    C = _as_curve(C)
    grad = [g.evaluate(p.coords) for g in C.support.gradient()]
    if all(g.is_zero() for g in grad):
        raise GeometryError(f"{p} is a singular point of the support")
    return Line(grad)
