"""Limits of curves along germs, and limits of single formal branches."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import AlgebraicNumber, Tower, UniPoly, join
from .curve import Flag, PlaneCurve, Point, _as_curve, flag_transform, local_form
from .errors import GeometryError, PrecisionCapError
from .forms import Factorization, HomogeneousForm, dominant_part, factor, substitute
from .germs import Germ
from .linalg import cross, is_zero_vector, matvec
from .parsing import parse_matrix_entries


@dataclass
class LimitCurve:
    """``lim F(alpha(t) v)``, normalised so the lex-first coefficient is 1."""

    form: HomogeneousForm
    order: int  # power of t cleared before setting t = 0
    germ: Germ | None = None
    source: PlaneCurve | None = None

    @property
    def degree(self) -> int:
        return self.form.degree

    @property
    def tower(self) -> Tower:
        return self.form.tower

    def factorization(self) -> Factorization:
        return factor(self.form)

    def __str__(self):
        return str(self.form)


def apply_germ(C, alpha) -> LimitCurve:
    """The flat limit of ``C`` along ``alpha`` (a Germ, matrix or germ text)."""
    C = _as_curve(C)
    if isinstance(alpha, Germ):
        g = alpha
    elif isinstance(alpha, str):
        tower, entries = parse_matrix_entries(alpha, C.tower)
        g = Germ(entries, tower)
    else:
        g = Germ(alpha)
    order, form = dominant_part(substitute(C.form, g))
    return LimitCurve(form.normalized(), order, g, C)


# ---------------------------------------------------------------------------
# branch limits


@dataclass(frozen=True)
class SpecialShape:
    """Data of a germ ``[[1,0,0],[t^a,t^b,0],[r,s t^b,t^c]]`` with ``a < b <= c``."""

    a: int
    b: int
    c: int
    r: UniPoly
    s: UniPoly


def special_shape(beta) -> SpecialShape:
    """Read off ``a, b, c, r, s``; raises GeometryError for other shapes."""
    g = beta if isinstance(beta, Germ) else Germ(beta)
    m = g.entries
    bad = GeometryError("germ is not of the special lower triangular shape")

    def mono(u: UniPoly):
        if u.is_zero() or u.degree != u.valuation or u.leading_coefficient != 1:
            raise bad
        return int(u.degree)

    if m[0][0] != UniPoly.constant(1, g.tower) or not (m[0][1].is_zero() and m[0][2].is_zero()):
        raise bad
    if not m[1][2].is_zero():
        raise bad
    a, b, c = mono(m[1][0]), mono(m[1][1]), mono(m[2][2])
    if not (0 < a < b <= c):
        raise bad
    if m[2][1].is_zero():
        s = m[2][1]
    elif m[2][1].valuation >= b:
        s = m[2][1].shift(-b)
    else:
        raise bad
    return SpecialShape(a, b, c, m[2][0], s)


def _binom(lam: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out = out * (lam - i) / (i + 1)
    return out


def branch_limit(branch, beta) -> HomogeneousForm:
    """Limit of one formal branch along a special-shape germ (flag coordinates).

    For ``z = f(y)`` this is the lowest ``t``-order coefficient of
    ``r + s t^b y + t^c z - f(t^a + t^b y)``, homogenised with ``x``.  A branch
    ``y = g(z)`` (tangent to ``y = 0``) gives the kernel line ``x`` provided
    ``v(r) > a``; other cases are refused.
    """
    sh = special_shape(beta)
    tower = join(branch.tower, sh.r.tower, sh.s.tower)
    if branch.swapped:
        if branch.terms and not sh.r.valuation > sh.a:
            raise GeometryError("limit of a branch tangent to y = 0 needs v(r) > a")
        return HomogeneousForm.linear([1, 0, 0], tower)
    bound = Fraction(sh.c, sh.a)
    if not branch.known_beyond(bound):
        branch.extend(bound)
        if not branch.known_beyond(bound):
            raise PrecisionCapError("branch not known far enough for this germ")
    buckets: dict[Fraction, dict[tuple[int, int], AlgebraicNumber]] = {}

    def put(order, mono, value):
        if order > sh.c:
            return
        slot = buckets.setdefault(Fraction(order), {})
        slot[mono] = slot.get(mono, tower.zero) + value

    for i, v in enumerate(sh.r.coeffs()):
        if not v.is_zero():
            put(i, (0, 0), v)
    for i, v in enumerate(sh.s.coeffs()):
        if not v.is_zero():
            put(i + sh.b, (1, 0), v)
    put(sh.c, (0, 1), tower.one)
    for lam, gamma in branch.terms:
        k = 0
        while sh.a * lam + k * (sh.b - sh.a) <= sh.c:
            coef = _binom(lam, k)
            if coef:
                put(sh.a * lam + k * (sh.b - sh.a), (k, 0), -(gamma * coef))
            k += 1
    for order in sorted(buckets):
        poly = {m: v for m, v in buckets[order].items() if not v.is_zero()}
        if poly:
            deg = max(1, max(j + k for j, k in poly))
            return HomogeneousForm.from_dict(
                {(deg - j - k, j, k): v for (j, k), v in poly.items()}, tower, deg)
    raise GeometryError("branch limit vanished")  # pragma: no cover


def branch_product(C, flag: Flag, beta, order=None) -> HomogeneousForm:
    """Product of the branch limits at ``flag`` along ``beta``, padded by ``x``.

    ``beta`` is written in the flag coordinates; the result is comparable with
    the limit of the flag-coordinate equation along ``beta``.
    """
    from .puiseux import puiseux_branches
    C = _as_curve(C)
    sh = special_shape(beta)
    branches = puiseux_branches(C, flag, order if order is not None else
                                Fraction(sh.c, sh.a) + 1)
    tower = join(C.tower, *(b.tower for b in branches))
    out = HomogeneousForm.constant(1, tower)
    for br in branches:
        out = out * branch_limit(br, beta) ** br.multiplicity
    if out.degree > C.degree:
        raise GeometryError("branch limits exceed the curve degree")
    return out * HomogeneousForm.linear([1, 0, 0], out.tower) ** (C.degree - out.degree)


def flag_limit(C, flag: Flag, beta) -> LimitCurve:
    """Limit of ``C`` along ``N . beta`` computed in the flag coordinates."""
    C = _as_curve(C)
    frame = flag_transform(flag.point, flag.line)
    return apply_germ(PlaneCurve(local_form(C.form, frame)), beta)


# ---------------------------------------------------------------------------
# kernel stars


def kernel_line_points(alpha: Germ) -> list[list[AlgebraicNumber]]:
    return alpha.kernel()


def star_center(form: HomogeneousForm):
    """Common point of the lines of a star, or None when ``form`` is not a star.

    A single line (possibly multiple) counts as a star with any center on it;
    the line's coefficient vector is returned tagged ``"line"``.
    """
    fac = factor(form)
    if any(f.degree != 1 for f, _ in fac.factors):
        return None
    lines = [[f.coefficient(e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
             for f, _ in fac.factors]
    if len(lines) == 1:
        return ("line", lines[0])
    p = cross(lines[0], lines[1])
    for l in lines[2:]:
        if not sum((a * b for a, b in zip(l, p)), l[0].tower.zero).is_zero():
            return None
    return ("point", p)


def is_kernel_star(L, alpha: Germ) -> bool:
    """True when the limit is a star whose center lies on the kernel line of ``alpha(0)``."""
    form = L.form if isinstance(L, LimitCurve) else L
    if alpha.center_rank != 1:
        raise GeometryError("kernel stars are defined for rank-1 centers")
    center = star_center(form)
    if center is None:
        return False
    kind, v = center
    if kind == "line":
        return True  # the line meets the kernel line somewhere
    return is_zero_vector(matvec(alpha.center(), v))
