"""Curves with small linear orbit: recognition, specialization order, boundaries.

The twelve kinds of curves with infinite stabilizer are recognised from the
reduced support of a form (multiplicities do not matter):

====  ===============================================  ===
item  configuration                                    dim
====  ===============================================  ===
1     a single line                                    2
2     two distinct lines                               4
3     three or more concurrent lines (star)            5
4     triangle                                         6
5     star plus one non-concurrent line (fan)          7
6     a single conic                                   5
7     conic and a tangent line                         6
8     conic and two tangent lines                      7
9     conic, transversal line, tangents at the two     7
      intersection points optional
10    two or more conics of a pencil ``y^2 + l*x*z``,  7
      lines ``x``, ``y``, ``z`` optional
11    curves of a pencil ``y^b + l*z^a*x^(b-a)``,      7
      ``b >= 3``, lines ``x``, ``y``, ``z`` optional
12    two or more conics of a pencil through a conic   7
      and a double tangent line, that line optional
====  ===============================================  ===
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

from .arith import AlgebraicNumber, UniPoly, join
from .curve import PlaneCurve, inflection_points, singular_points, tangent_cone
from .forms import HomogeneousForm, factor
from .linalg import cross, det3, inverse3, nullspace, rank

LARGE_ORBIT = "large-orbit"

ITEMS: dict[int, tuple[str, int]] = {
    1: ("single line", 2),
    2: ("two lines", 4),
    3: ("star", 5),
    4: ("triangle", 6),
    5: ("fan", 7),
    6: ("conic", 5),
    7: ("conic and tangent line", 6),
    8: ("conic and two tangent lines", 7),
    9: ("conic and transversal line", 7),
    10: ("bitangent conics", 7),
    11: ("cuspidal pencil", 7),
    12: ("quadritangent conics", 7),
}

# Direct specializations: the orbit closure of the source contains the target.
EDGES: frozenset[tuple[int, int]] = frozenset({
    (2, 1), (3, 2), (4, 3), (5, 4), (5, 3), (6, 2),
    (7, 3), (8, 7), (8, 4), (9, 7), (9, 4), (10, 7), (10, 4),
    (11, 7), (11, 4), (12, 7), (12, 6),
})


@dataclass
class SmallOrbitClass:
    item: int
    params: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return ITEMS[self.item][0]

    @property
    def dimension(self) -> int:
        return ITEMS[self.item][1]

    @property
    def identifier(self) -> str:
        return f"item_{self.item}"

    def __str__(self):
        return f"{self.identifier} ({self.label}, orbit dimension {self.dimension})"


# ---------------------------------------------------------------------------
# poset


@functools.lru_cache(maxsize=None)
def _reachable(a: int) -> frozenset[int]:
    seen = {a}
    stack = [a]
    while stack:
        u = stack.pop()
        for s, t in EDGES:
            if s == u and t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def _item(x) -> int:
    return x.item if isinstance(x, SmallOrbitClass) else int(x)


def specializes_to(a, b) -> bool:
    """Whether curves of kind ``a`` degenerate to curves of kind ``b`` (reflexive)."""
    return _item(b) in _reachable(_item(a))


def poset_is_acyclic() -> bool:
    return all(a not in _reachable(b) for a, b in EDGES)


# ---------------------------------------------------------------------------
# geometry helpers

_E = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _line_vector(f: HomogeneousForm) -> list[AlgebraicNumber]:
    return [f.coefficient(e) for e in _E]


def _dot(u: Sequence, v: Sequence) -> AlgebraicNumber:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _same_line(u: Sequence, v: Sequence) -> bool:
    return all(c.is_zero() for c in cross(u, v))


def _on_line(point: Sequence, line: Sequence) -> bool:
    return _dot(point, line).is_zero()


def _restrict_binary(Q: HomogeneousForm, line: Sequence) -> list[AlgebraicNumber]:
    """Coefficients ``[A, B, C]`` of ``Q(u P1 + v P2) = A u^2 + B u v + C v^2``."""
    p1, p2 = nullspace([list(line)])
    zero = p1[0].tower.zero
    frame = [[p1[i], p2[i], zero] for i in range(3)]
    R = Q.compose(frame)
    return [R.coefficient((2, 0, 0)), R.coefficient((1, 1, 0)), R.coefficient((0, 2, 0))]


def _tangent_point(Q: HomogeneousForm, line: Sequence):
    """The contact point when ``line`` is tangent to the conic ``Q``, else None."""
    A, B, C = _restrict_binary(Q, line)
    if not (B * B - 4 * A * C).is_zero():
        return None
    p1, p2 = nullspace([list(line)])
    if A.is_zero() and B.is_zero() and C.is_zero():
        return None  # line is a component
    if A.is_zero():
        u, v = p1[0].tower.one, p1[0].tower.zero
    else:
        u, v = -B, 2 * A
    return [u * a + v * b for a, b in zip(p1, p2)]


def _conic_vector(Q: HomogeneousForm) -> list[AlgebraicNumber]:
    monos = [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    return [Q.coefficient(m) for m in monos]


def _conic_matrix(vec: Sequence) -> list[list[AlgebraicNumber]]:
    a, b, c, d, e, f = vec
    return [[a, d / 2, e / 2], [d / 2, b, f / 2], [e / 2, f / 2, c]]


def _double_line_in_pencil(Q1: HomogeneousForm, Q2: HomogeneousForm):
    """A line ``l`` with ``l^2`` in the pencil spanned by two conics, or None."""
    v1, v2 = _conic_vector(Q1), _conic_vector(Q2)
    tower = join(*(c.tower for c in v1 + v2))
    # minors of A2 - mu*A1 as polynomials in mu
    A1 = _conic_matrix(v1)
    A2 = _conic_matrix(v2)
    mu = UniPoly.monomial(1, 1, tower)
    M = [[UniPoly.constant(A2[i][j], tower) - mu * A1[i][j] for j in range(3)] for i in range(3)]
    g = None
    for r in ((0, 1), (0, 2), (1, 2)):
        for c in ((0, 1), (0, 2), (1, 2)):
            minor = M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]
            g = minor if g is None else g.gcd(minor)
    if g is None or g.is_zero() or g.degree != 1:
        return None
    root = -g.monic().coefficient(0)
    rows = [[A2[i][j] - root * A1[i][j] for j in range(3)] for i in range(3)]
    row = next((r for r in rows if any(not x.is_zero() for x in r)), None)
    return row


def _in_span(vectors: list[list[AlgebraicNumber]]) -> int:
    return rank(vectors)


# ---------------------------------------------------------------------------
# recognition


def _components(form: HomogeneousForm):
    fac = factor(form)
    lines = [(_line_vector(f), e) for f, e in fac.factors if f.degree == 1]
    curves = [(f, e) for f, e in fac.factors if f.degree > 1]
    return lines, curves


def _lines_only(lines) -> SmallOrbitClass | str:
    vecs = [v for v, _ in lines]
    mults = [e for _, e in lines]
    n = len(vecs)
    if n == 1:
        return SmallOrbitClass(1, {"multiplicities": mults})
    if n == 2:
        return SmallOrbitClass(2, {"multiplicities": mults})
    center = cross(vecs[0], vecs[1])
    if all(_on_line(center, v) for v in vecs[2:]):
        return SmallOrbitClass(3, {"lines": n, "multiplicities": mults})
    if n == 3:
        return SmallOrbitClass(4, {"multiplicities": mults})
    for k in range(n):
        rest = vecs[:k] + vecs[k + 1:]
        c = cross(rest[0], rest[1])
        if all(_on_line(c, v) for v in rest[2:]) and not _on_line(c, vecs[k]):
            return SmallOrbitClass(5, {"star_lines": n - 1, "multiplicities": mults})
    return LARGE_ORBIT


def _one_conic(Q: HomogeneousForm, lines, mults) -> SmallOrbitClass | str:
    vecs = [v for v, _ in lines]
    tangent = [v for v in vecs if _tangent_point(Q, v) is not None]
    transversal = [v for v in vecs if _tangent_point(Q, v) is None]
    if not vecs:
        return SmallOrbitClass(6, {"multiplicities": mults})
    if not transversal:
        if len(tangent) == 1:
            return SmallOrbitClass(7, {"multiplicities": mults})
        if len(tangent) == 2:
            return SmallOrbitClass(8, {"multiplicities": mults})
        return LARGE_ORBIT
    if len(transversal) == 1 and len(tangent) <= 2:
        T = transversal[0]
        if all(_on_line(_tangent_point(Q, v), T) for v in tangent):
            return SmallOrbitClass(9, {"tangent_lines": len(tangent), "multiplicities": mults})
    return LARGE_ORBIT


def _several_conics(conics: list[HomogeneousForm], lines, mults) -> SmallOrbitClass | str:
    Q1 = conics[0]
    ell = _double_line_in_pencil(Q1, conics[1])
    if ell is None:
        return LARGE_ORBIT
    sq = HomogeneousForm.linear(ell, Q1.tower) ** 2
    base = [_conic_vector(Q1), _conic_vector(sq)]
    if any(_in_span(base + [_conic_vector(Q)]) > 2 for Q in conics[2:]):
        return LARGE_ORBIT
    vecs = [v for v, _ in lines]
    contact = _tangent_point(Q1, ell)
    if contact is not None:
        if all(_same_line(v, ell) for v in vecs):
            return SmallOrbitClass(12, {"conics": len(conics), "tangent_line": bool(vecs),
                                        "multiplicities": mults})
        return LARGE_ORBIT
    for v in vecs:
        if _same_line(v, ell):
            continue
        p = _tangent_point(Q1, v)
        if p is None or not _on_line(p, ell):
            return LARGE_ORBIT
    return SmallOrbitClass(10, {"conics": len(conics), "lines": len(vecs),
                                "multiplicities": mults})


def _pencil_coordinates(Q: HomogeneousForm):
    """Lines ``X, Y, Z`` putting ``Q`` in the shape ``Y^b + l Z^a X^(b-a)``, with ``a``."""
    C = PlaneCurve(Q)
    special = singular_points(C) + inflection_points(C)
    if len(special) != 2:
        return None
    for P, R in (special, special[::-1]):
        try:
            cone_p, cone_r = tangent_cone(C, P), tangent_cone(C, R)
        except Exception:  # pragma: no cover - points come from the curve itself
            return None
        if len(cone_p.lines) != 1 or len(cone_r.lines) != 1:
            continue
        t = join(P.tower, R.tower, cone_p.tower, cone_r.tower)
        Lz = [c.lift(t) for c in cone_p.lines[0][0].coords]
        Lx = [c.lift(t) for c in cone_r.lines[0][0].coords]
        Ly = cross([c.lift(t) for c in P.coords], [c.lift(t) for c in R.coords])
        M = [Lx, Ly, Lz]
        if det3(M).is_zero():
            continue
        G = Q.lift(t).compose(inverse3(M))
        shape = _pencil_shape(G)
        if shape is not None:
            return M, shape
    return None


def _pencil_shape(G: HomogeneousForm):
    b = G.degree
    supp = set(G.support())
    if len(supp) != 2 or (0, b, 0) not in supp:
        return None
    (other,) = supp - {(0, b, 0)}
    i, j, k = other
    if j != 0 or k == 0 or i == 0:
        return None
    return k, b  # (a, b)


def _pencil(curves: list[HomogeneousForm], lines, mults) -> SmallOrbitClass | str:
    b = curves[0].degree
    if b < 3 or any(Q.degree != b for Q in curves):
        return LARGE_ORBIT
    found = _pencil_coordinates(curves[0])
    if found is None:
        return LARGE_ORBIT
    M, (a, _) = found
    Minv = inverse3(M)
    for Q in curves[1:]:
        t = join(Q.tower, M[0][0].tower)
        if _pencil_shape(Q.lift(t).compose(Minv)) != (a, b):
            return LARGE_ORBIT
    for v, _ in lines:
        if not any(_same_line(v, row) for row in M):
            return LARGE_ORBIT
    return SmallOrbitClass(11, {"a": a, "b": b, "members": len(curves), "lines": len(lines),
                                "multiplicities": mults})


def classify_limit(L) -> SmallOrbitClass | str:
    """Small-orbit kind of a curve (form, LimitCurve or PlaneCurve), else ``"large-orbit"``."""
    form = getattr(L, "form", L)
    lines, curves = _components(form)
    mults = [e for _, e in lines] + [e for _, e in curves]
    if not curves:
        return _lines_only(lines)
    degrees = {Q.degree for Q, _ in curves}
    forms = [Q for Q, _ in curves]
    if degrees == {2}:
        if len(forms) == 1:
            return _one_conic(forms[0], lines, mults)
        return _several_conics(forms, lines, mults)
    return _pencil(forms, lines, mults)


# ---------------------------------------------------------------------------
# boundaries


@dataclass
class BoundaryEntry:
    limit: object  # LimitCurve, or None for the star family
    kind: SmallOrbitClass | str
    note: str = ""


STAR_FAMILY_NOTE = "star family: stars of lines through kernel lines (rank-2 limits)"


def boundary_from_report(report) -> list[BoundaryEntry]:
    """One entry per marker germ of each component, then the star family.

    Merged germs share a component but their limits can differ by a
    projective change, so each is listed.
    """
    from .limits import apply_germ
    out = []
    for comp in report.components:
        for i, g in enumerate(comp.germs):
            L = comp.limit if i == 0 else apply_germ(report.curve, g)
            out.append(BoundaryEntry(L, comp.classification if i == 0 else classify_limit(L),
                                     comp.type))
    out.append(BoundaryEntry(None, SmallOrbitClass(3), STAR_FAMILY_NOTE))
    return out


def boundary(C) -> list[BoundaryEntry]:
    """Classified limits of all marker germs of ``C`` plus the star family."""
    from .pnc import analyze
    return boundary_from_report(analyze(C))
