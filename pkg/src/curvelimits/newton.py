"""Newton polygons of a curve at a flag.

In flag coordinates the point is ``(1:0:0)`` and the line is ``z = 0``; a
monomial ``x^i y^j z^k`` contributes the lattice point ``(j, k)``.  The
polygon is the lower-left boundary of the convex hull of the quadrants
spanned by these points.  A side of slope ``-b/c`` (``b, c`` coprime) is the
one selected by the one-parameter family ``diag(1, t^b, t^c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .curve import Flag, PlaneCurve, _as_curve, flag_transform, local_form
from .errors import GeometryError
from .forms import HomogeneousForm


@dataclass(frozen=True)
class Side:
    start: tuple[int, int]  # (j, k) with the larger k
    end: tuple[int, int]
    b: int
    c: int

    @property
    def slope(self) -> Fraction:
        return Fraction(-self.b, self.c)

    @property
    def segments(self) -> int:
        """Number of lattice segments, written ``S``."""
        return gcd(self.end[0] - self.start[0], self.start[1] - self.end[1])

    @property
    def weight(self) -> int:
        """Common value of ``b*j + c*k`` along the side."""
        return self.b * self.start[0] + self.c * self.start[1]

    def __str__(self):
        return f"{self.start}-{self.end} slope {self.slope}"


@dataclass
class NewtonPolygon:
    flag: Flag
    local: HomogeneousForm  # the curve in flag coordinates
    vertices: list[tuple[int, int]]
    sides: list[Side]
    usable: bool  # flag line lies in the tangent cone

    def relevant_sides(self) -> list[Side]:
        return relevant_sides(self)


def lower_hull(points) -> list[tuple[int, int]]:
    """Vertices of the lower-left convex boundary, ordered by increasing ``j``."""
    best: dict[int, int] = {}
    for j, k in points:
        if j not in best or k < best[j]:
            best[j] = k
    pts = sorted(best.items())
    kmin = min(k for _, k in pts)
    jstop = min(j for j, k in pts if k == kmin)
    pts = [p for p in pts if p[0] <= jstop]
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (j1, k1), (j2, k2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> p
            if (k2 - k1) * (p[0] - j1) >= (p[1] - k1) * (j2 - j1):
                hull.pop()
            else:
                break
        hull.append(p)
    # keep only the strictly decreasing part
    out = [hull[0]]
    for p in hull[1:]:
        if p[1] < out[-1][1]:
            out.append(p)
    return out


def newton_polygon(C, flag: Flag) -> NewtonPolygon:
    C = _as_curve(C)
    if not C.contains(flag.point):
        raise GeometryError(f"flag point {flag.point} is not on the curve")
    G = local_form(C.form, flag_transform(flag.point, flag.line))
    pts = [(m[1], m[2]) for m in G.rep.keys()]
    verts = lower_hull(pts)
    sides = []
    for (j0, k0), (j1, k1) in zip(verts, verts[1:]):
        g = gcd(j1 - j0, k0 - k1)
        sides.append(Side((j0, k0), (j1, k1), (k0 - k1) // g, (j1 - j0) // g))
    m = min(j + k for j, k in pts)
    usable = all(k > 0 for j, k in pts if j + k == m)
    return NewtonPolygon(flag, G, verts, sides, usable)


def relevant_sides(polygon: NewtonPolygon) -> list[Side]:
    """Sides with slope strictly between -1 and 0."""
    return [s for s in polygon.sides if -1 < s.slope < 0]


def side_limit_form(C, flag: Flag, side: Side) -> HomogeneousForm:
    """The terms of the flag-coordinate equation lying on ``side``."""
    poly = newton_polygon(C, flag)
    G = poly.local
    terms = {m: c for m, c in G.coefficients().items()
             if side.b * m[1] + side.c * m[2] == side.weight}
    return HomogeneousForm.from_dict(terms, G.tower, G.degree)
