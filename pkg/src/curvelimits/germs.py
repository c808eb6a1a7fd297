"""Matrix germs, the five marker constructions, and germ normalisation.

A germ is a 3x3 matrix ``alpha(t)`` of polynomials in ``t`` with
``det alpha(t)`` not identically zero and ``alpha(0) != 0``.  The limit of a
curve ``F`` along the germ is the lowest ``t``-order part of
``F(alpha(t) . (x, y, z))``.

Marker germs are built as ``N . beta(t)`` where ``N`` moves a flag (or a
point) to the standard flag ``((1:0:0), z = 0)`` and ``beta`` is written in
those flag coordinates; both factors are kept on the germ for reporting.

:func:`normalize_germ` brings any germ to the form ``H . U . D . M`` with
``D = diag(1, t^b, t^c)`` and ``U`` lower unitriangular with entries
``q, r, s`` of bounded degree.  Two germs with the same normal form give the
same limit for every curve.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .arith import AlgebraicNumber, Tower, UniPoly, join
from .curve import Flag, Line, Point, _as_curve, flag_transform, tangent_cone, tangent_line
from .errors import GeometryError, InvariantError
from .forms import HomogeneousForm, dominant_part, germ_entries, substitute
from .linalg import inverse3, matmul, nullspace, rank, row_echelon, to_matrix, transpose

Matrix = list[list[AlgebraicNumber]]


class Germ:
    """A 3x3 matrix of polynomials in ``t`` defining a germ of curve in PGL(3)."""

    def __init__(self, entries, tower: Tower | None = None, *, frame=None, local=None,
                 validate: bool = True):
        cells = germ_entries(entries)
        t = join(tower, *(e.tower for row in cells for e in row))
        self.entries: list[list[UniPoly]] = [[e.lift(t) for e in row] for row in cells]
        self.tower = t
        self.frame = frame  # constant matrix N, when built from flag coordinates
        self.local = local  # germ beta in flag coordinates
        if validate:
            if all(a.is_zero() for row in self.center() for a in row):
                raise GeometryError("germ has zero center alpha(0)")
            if self.det().is_zero():
                raise GeometryError("germ is singular for all t")

    # -- constructors -------------------------------------------------------
    @classmethod
    def diagonal(cls, *entries) -> "Germ":
        z = 0
        return cls([[entries[i] if i == j else z for j in range(3)] for i in range(3)])

    @classmethod
    def one_ps(cls, b: int, c: int, tower: Tower | None = None) -> "Germ":
        """``diag(1, t^b, t^c)``."""
        t = UniPoly.monomial(1, 1, tower)
        return cls.diagonal(UniPoly.constant(1, tower), t ** b, t ** c)

    @classmethod
    def constant(cls, matrix) -> "Germ":
        return cls(to_matrix(matrix))

    # -- structure ----------------------------------------------------------
    def center(self) -> Matrix:
        return [[e.coefficient(0) for e in row] for row in self.entries]

    @functools.cached_property
    def center_rank(self) -> int:
        return rank(self.center())

    def kernel(self) -> list[list[AlgebraicNumber]]:
        """Basis of the kernel of ``alpha(0)``."""
        return nullspace(self.center())

    def image(self) -> list[list[AlgebraicNumber]]:
        """Basis of the image of ``alpha(0)`` (column space)."""
        cols = transpose(self.center())
        m, piv = row_echelon(cols)
        return [m[i] for i in range(len(piv))]

    def det(self) -> UniPoly:
        m = self.entries
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    @property
    def t_degree(self) -> int:
        return max((e.degree for row in self.entries for e in row if not e.is_zero()), default=0)

    def lift(self, tower: Tower) -> "Germ":
        g = Germ([[e.lift(tower) for e in row] for row in self.entries], tower, validate=False)
        g.frame = self.frame
        g.local = self.local
        return g

    def __matmul__(self, other) -> "Germ":
        return Germ(_poly_matmul(self.entries, germ_entries(other)))

    def __rmatmul__(self, other) -> "Germ":
        return Germ(germ_entries(other)) @ self

    def __eq__(self, other):
        if not isinstance(other, Germ):
            return NotImplemented
        return all(a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))

    __hash__ = None

    def reparametrize(self, nu: UniPoly, precision: int | None = None) -> "Germ":
        """``alpha(t * nu(t))``, optionally truncated modulo ``t^precision``."""
        tn = UniPoly.monomial(1, 1, nu.tower) * nu
        rows = []
        for row in self.entries:
            out = []
            for e in row:
                v = e(tn)
                out.append(v.truncate(precision) if precision else v)
            rows.append(out)
        return Germ(rows)

    def format(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(e) for e in row) + "]"
                               for row in self.entries) + "]"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Germ({self.format()})"


def _poly_matmul(a, b):
    t = join(*(e.tower for row in a + b for e in row))
    return [[sum((a[i][k] * b[k][j] for k in range(3)), UniPoly.constant(0, t))
             for j in range(3)] for i in range(3)]


def _flagged(frame: Matrix, local: Germ) -> Germ:
    g = Germ(frame) @ local
    g.frame = frame
    g.local = local
    return g


# ---------------------------------------------------------------------------
# marker germs


def marker_type_I(C, L) -> Germ:
    """Germ whose center has rank 2 with image the line component ``L``."""
    C = _as_curve(C)
    line = L if isinstance(L, Line) else Line.from_form(L)
    lf = line.form()
    if not any(f.proportional(lf.lift(f.tower)) for f, _ in C.linear_components):
        raise GeometryError(f"{line} is not a component of the curve")
    a, b, c = line.coords
    t = line.tower
    one, zero = t.one, t.zero
    if not c.is_zero():
        u1, u2, u3 = [one, zero, -a / c], [zero, one, -b / c], [zero, zero, one]
    elif not b.is_zero():
        u1, u2, u3 = [one, -a / b, zero], [zero, zero, one], [zero, one, zero]
    else:
        u1, u2, u3 = [zero, one, zero], [zero, zero, one], [one, zero, zero]
    T = UniPoly.monomial(1, 1, t)
    rows = [[UniPoly.constant(u1[i], t), UniPoly.constant(u2[i], t), T * u3[i]]
            for i in range(3)]
    return Germ(rows)


def marker_type_II(C, p: Point) -> Germ:
    """``N . diag(1, t, t^2)`` at a general point ``p`` of a nonlinear component."""
    C = _as_curve(C)
    S = C.support
    if not S.evaluate(p.coords).is_zero():
        raise GeometryError(f"{p} is not on the curve")
    if C.is_singular_point_of_support(p):
        raise GeometryError(f"{p} is a singular point")
    if any(l.evaluate(p.coords).is_zero() for l, _ in C.linear_components):
        raise GeometryError(f"{p} lies on a line component")
    if S.hessian().evaluate(p.coords).is_zero():
        raise GeometryError(f"{p} is an inflection point")
    line = tangent_line(C, p)
    frame = flag_transform(p, line)
    return _flagged(frame, Germ.one_ps(1, 2, frame[0][0].tower))


def marker_type_III(C, p: Point) -> Germ:
    """``N . diag(1, t, t)`` at a point whose tangent cone has at least three lines."""
    C = _as_curve(C)
    cone = tangent_cone(C, p)
    if len(cone.lines) < 3:
        raise GeometryError(f"tangent cone at {p} has fewer than three lines")
    frame = flag_transform(p)
    return _flagged(frame, Germ.one_ps(1, 1, frame[0][0].tower))


def marker_type_IV(C, flag: Flag, side) -> Germ:
    """``N . diag(1, t^b, t^c)`` for a Newton polygon side of slope ``-b/c`` in (-1, 0)."""
    from .newton import newton_polygon
    C = _as_curve(C)
    if not (-1 < side.slope < 0):
        raise GeometryError(f"side slope {side.slope} is not strictly between -1 and 0")
    poly = newton_polygon(C, flag)
    if not poly.usable:
        raise GeometryError(f"{flag.line} is not in the tangent cone at {flag.point}")
    if side not in poly.sides:
        raise GeometryError("side does not belong to the Newton polygon at this flag")
    frame = flag_transform(flag.point, flag.line)
    return _flagged(frame, Germ.one_ps(side.b, side.c, frame[0][0].tower))


def type_v_exponents(truncation, C: Fraction) -> tuple[int, int, int]:
    """The integers ``a, b, c`` of a type V germ for a truncation and exponent ``C``."""
    lam0 = truncation[0][0]
    B = (C - lam0) / 2 + 1
    dens = [C.denominator, B.denominator]
    for e, _ in truncation:
        dens.append(e.denominator)
        dens.append((e - 1 + B).denominator)
    a = lcm(*dens)
    return a, int(B * a), int(C * a)


def type_v_local_germ(truncation, C: Fraction, tower: Tower) -> Germ:
    """``beta(t)`` in flag coordinates for a truncation ``f_(C)`` and exponent ``C``.

    Rows ``(1, 0, 0)``, ``(t^a, t^b, 0)`` and
    ``(f(t^a), f'(t^a) t^b mod t^c, t^c)``.
    """
    a, b, c = type_v_exponents(truncation, C)
    zero = UniPoly.constant(0, tower)
    f_coeffs: dict[int, AlgebraicNumber] = {}
    fp_coeffs: dict[int, AlgebraicNumber] = {}
    for e, coef in truncation:
        n = e * a
        f_coeffs[int(n)] = f_coeffs.get(int(n), tower.zero) + coef
        m = (e - 1) * a + b
        if m < c:
            fp_coeffs[int(m)] = fp_coeffs.get(int(m), tower.zero) + coef * e
    f = UniPoly.from_coeffs([f_coeffs.get(i, 0) for i in range(max(f_coeffs) + 1)], tower)
    fp = (UniPoly.from_coeffs([fp_coeffs.get(i, 0) for i in range(max(fp_coeffs) + 1)], tower)
          if fp_coeffs else zero)
    T = lambda n: UniPoly.monomial(n, 1, tower)  # noqa: E731
    one = UniPoly.constant(1, tower)
    return Germ([[one, zero, zero], [T(a), T(b), zero], [f, fp, T(c)]])


def marker_type_V(C, flag: Flag, datum) -> Germ:
    """Germ for a characteristic datum; refuses data predicting a single conic."""
    C = _as_curve(C)
    if datum.C <= datum.lambda0:
        raise GeometryError("characteristic exponent must exceed the first exponent")
    if datum.S < 2 or len(datum.distinct_gammas) < 2:
        raise GeometryError("degenerate datum: the limit would contain a single conic")
    frame = flag_transform(flag.point, flag.line)
    t = join(frame[0][0].tower, datum.tower)
    return _flagged(frame, type_v_local_germ(datum.truncation, datum.C, t))


# ---------------------------------------------------------------------------
# normalisation


@dataclass
class StandardForm:
    """``H . U . D . M`` with ``U = [[1,0,0],[q,1,0],[r,s,1]]`` and ``D = diag(1, t^b, t^c)``."""

    H: Matrix
    b: int
    c: int
    q: UniPoly
    r: UniPoly
    s: UniPoly
    M: Matrix
    reparametrization: UniPoly | None = None  # nu with alpha(t nu(t)) used, if any

    @property
    def tower(self) -> Tower:
        return join(self.q.tower, self.r.tower, self.s.tower,
                    *(x.tower for row in self.H + self.M for x in row))

    def U(self) -> Germ:
        one, zero = UniPoly.constant(1, self.tower), UniPoly.constant(0, self.tower)
        return Germ([[one, zero, zero], [self.q, one, zero], [self.r, self.s, one]])

    def reconstruct(self) -> Germ:
        """The normal-form germ ``H . U . D . M``."""
        D = Germ.one_ps(self.b, self.c, self.tower)
        return Germ(self.H) @ self.U() @ D @ Germ(self.M)

    def certify(self, alpha: Germ) -> bool:
        """Check ``alpha(t nu(t)) = H U D M m(t)`` with ``m`` holomorphic and ``m(0) = I``.

        Equivalently ``t^c (H U D M)^-1 alpha(t nu)`` is ``t^c (I + O(t))``.
        """
        tower = join(self.tower, alpha.tower)
        T = lambda n: UniPoly.monomial(n, 1, tower)  # noqa: E731
        zero = UniPoly.constant(0, tower)
        Dinv = [[T(self.c), zero, zero], [zero, T(self.c - self.b), zero], [zero, zero, T(0)]]
        one = UniPoly.constant(1, tower)
        Uinv = [[one, zero, zero], [-self.q, one, zero], [self.q * self.s - self.r, -self.s, one]]
        beta = alpha if self.reparametrization is None else \
            alpha.reparametrize(self.reparametrization, self.c + 1)
        prod = germ_entries(inverse3(self.M))
        for factor in (Dinv, Uinv, germ_entries(inverse3(self.H)), beta.entries):
            prod = _poly_matmul(prod, factor)
        for i, row in enumerate(prod):
            for j, e in enumerate(row):
                e = e.truncate(self.c + 1)
                if e != (T(self.c) if i == j else zero):
                    return False
        return True

    def check_bounds(self) -> list[str]:
        """Violations of the normal form conditions (empty when satisfied)."""
        bad = []
        b, c, q, r, s = self.b, self.c, self.q, self.r, self.s
        if not (0 <= b <= c):
            bad.append("need 0 <= b <= c")
        if not q.is_zero() and q.degree >= b:
            bad.append("deg q >= b")
        if not r.is_zero() and r.degree >= c:
            bad.append("deg r >= c")
        if not s.is_zero() and s.degree >= c - b:
            bad.append("deg s >= c - b")
        for name, u in (("q", q), ("r", r), ("s", s)):
            if not u.coefficient(0).is_zero():
                bad.append(f"{name}(0) != 0")
        if b == c:
            if not s.is_zero():
                bad.append("s must vanish when b = c")
            if not (q.is_zero() and r.is_zero()) and not q.valuation < r.valuation:
                bad.append("need v(q) < v(r) when b = c")
        if not q.is_zero():
            if len([1 for i in range(q.degree + 1) if not q.coefficient(i).is_zero()]) != 1 \
                    or q.leading_coefficient != 1:
                bad.append("nonzero q must be a monomial t^a")
        return bad

    def __str__(self):
        fmt = lambda m: "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]"  # noqa: E731
                                        for row in m) + "]"
        return (f"H = {fmt(self.H)}\nb = {self.b}, c = {self.c}\n"
                f"q = {self.q}\nr = {self.r}\ns = {self.s}\nM = {fmt(self.M)}")


class _Series:
    """Truncated power series arithmetic on coefficient lists of fixed length."""

    def __init__(self, dom, n):
        self.dom, self.n = dom, n
        self.zero = dom.zero

    def of(self, u: UniPoly):
        return u.raw_coeffs(self.n)

    def const(self, v):
        out = [self.zero] * self.n
        out[0] = v
        return out

    def add(self, a, b):
        return [x + y for x, y in zip(a, b)]

    def sub(self, a, b):
        return [x - y for x, y in zip(a, b)]

    def mul(self, a, b):
        n, out = self.n, [self.zero] * self.n
        for i, x in enumerate(a):
            if not x:
                continue
            for j in range(n - i):
                y = b[j]
                if y:
                    out[i + j] += x * y
        return out

    def scale(self, a, v):
        return [x * v for x in a]

    def val(self, a):
        return next((i for i, x in enumerate(a) if x), None)

    def inv(self, a):
        dom = self.dom
        a0 = dom.quo(dom.one, a[0])
        out = [self.zero] * self.n
        out[0] = a0
        for i in range(1, self.n):
            s = self.zero
            for j in range(1, i + 1):
                if a[j] and out[i - j]:
                    s += a[j] * out[i - j]
            out[i] = -s * a0
        return out

    def down(self, a, v):
        return a[v:] + [self.zero] * v

    def trunc(self, a, k):
        return [x if i < k else self.zero for i, x in enumerate(a)]

    def to_poly(self, a, tower, k=None) -> UniPoly:
        k = self.n if k is None else k
        R = tower.ring("t")
        return UniPoly(tower, R.from_dict({(i,): x for i, x in enumerate(a[:k]) if x}))


def _smith(alpha: Germ, S: _Series):
    """Local Smith reduction ``alpha = Hm . diag(t^v) . Km`` over truncated series."""
    A = [[S.of(e) for e in row] for row in alpha.entries]
    one, zero = S.dom.one, S.zero
    Hm = [[S.const(one if i == j else zero) for j in range(3)] for i in range(3)]
    Km = [[S.const(one if i == j else zero) for j in range(3)] for i in range(3)]
    vals = []
    for s in range(3):
        best = None
        for i in range(s, 3):
            for j in range(s, 3):
                v = S.val(A[i][j])
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            raise InvariantError("precision exhausted during normalisation")
        v, i, j = best
        if i != s:
            A[s], A[i] = A[i], A[s]
            for row in Hm:
                row[s], row[i] = row[i], row[s]
        if j != s:
            for row in A:
                row[s], row[j] = row[j], row[s]
            Km[s], Km[j] = Km[j], Km[s]
        unit = S.down(A[s][s], v)
        uinv = S.inv(unit)
        for i in range(s + 1, 3):
            if S.val(A[i][s]) is None:
                continue
            m = S.mul(S.down(A[i][s], v), uinv)
            A[i] = [S.sub(A[i][k], S.mul(m, A[s][k])) for k in range(3)]
            for row in Hm:
                row[s] = S.add(row[s], S.mul(m, row[i]))
        for j in range(s + 1, 3):
            if S.val(A[s][j]) is None:
                continue
            n = S.mul(S.down(A[s][j], v), uinv)
            for row in A:
                row[j] = S.sub(row[j], S.mul(n, row[s]))
            Km[s] = [S.add(Km[s][k], S.mul(n, Km[j][k])) for k in range(3)]
        for row in A:
            row[s] = S.mul(row[s], uinv)
        Km[s] = [S.mul(unit, x) for x in Km[s]]
        vals.append(v)
    return Hm, vals, Km


def _mpi(h1, b: int, c: int, S: _Series):
    """Split ``h1 . D = U . D . l(t)`` (``h1(0) = I``); returns ``q, r, s, l(0)``."""
    u1, b1 = h1[0][0], h1[0][1]
    a2, u2 = h1[1][0], h1[1][1]
    a3, b3 = h1[2][0], h1[2][1]
    v1, e1 = u1, b1
    x = S.mul(S.inv(v1), a2)
    q = S.trunc(x, b)
    d2 = S.mul(v1, S.sub(x, q))
    v2 = S.sub(u2, S.mul(q, e1))
    den = S.sub(S.mul(v1, v2), S.mul(e1, d2))
    dinv = S.inv(den)
    r_full = S.mul(dinv, S.sub(S.mul(v2, a3), S.mul(d2, b3)))
    s_full = S.mul(dinv, S.sub(S.mul(v1, b3), S.mul(e1, a3)))
    r = S.trunc(r_full, c)
    s = S.trunc(s_full, c - b)
    d3 = S.sub(S.sub(a3, S.mul(v1, r)), S.mul(d2, s))
    e3 = S.sub(S.sub(b3, S.mul(e1, r)), S.mul(v2, s))
    one, zero = S.dom.one, S.zero
    L = [[one, zero, zero], [d2[b], one, zero], [d3[c], e3[c - b], one]]
    return q, r, s, L


def _const_matrix(m, tower) -> Matrix:
    return [[AlgebraicNumber(tower, x) for x in row] for row in m]


def normalize_germ(alpha: Germ) -> StandardForm:
    """Normal form ``H . U . D . M`` of a germ (see :class:`StandardForm`)."""
    tower = alpha.tower
    dom = tower.dom
    vdet = alpha.det().valuation
    n = 2 * int(vdet) + 4
    S = _Series(dom, n)
    Hm, vals, Km = _smith(alpha, S)
    if vals[0] != 0:
        raise InvariantError("germ center vanishes")
    b, c = vals[1], vals[2]
    H0 = _const_matrix([[Hm[i][j][0] for j in range(3)] for i in range(3)], tower)
    K0 = _const_matrix([[Km[i][j][0] for j in range(3)] for i in range(3)], tower)
    Hinv = inverse3(H0)
    hinv = [[x.value for x in row] for row in Hinv]
    h1 = [[[sum((hinv[i][k] * Hm[k][j][m] for k in range(3)), dom.zero) for m in range(n)]
           for j in range(3)] for i in range(3)]
    q, r, s, L = _mpi(h1, b, c, S)
    H = H0
    M = matmul(_const_matrix(L, tower), K0)
    qp, rp, sp = S.to_poly(q, tower), S.to_poly(r, tower), S.to_poly(s, tower)

    if b == c and not (qp.is_zero() and rp.is_zero()):
        m = min(qp.valuation, rp.valuation)
        qm, rm = qp.coefficient(m), rp.coefficient(m)
        one, zero = tower.one, tower.zero
        if qm.is_zero():
            Ginv = [[zero, one], [one, zero]]
            qm, rm = rm, qm
        else:
            Ginv = [[one, zero], [zero, one]]
        Ginv = matmul([[one, zero], [-rm / qm, one]], Ginv)
        qp, rp = (qp * Ginv[0][0] + rp * Ginv[0][1], qp * Ginv[1][0] + rp * Ginv[1][1])
        G = inverse3([[one, zero, zero], [zero, Ginv[0][0], Ginv[0][1]],
                      [zero, Ginv[1][0], Ginv[1][1]]])
        P = G
        H = matmul(H, P)
        M = matmul(inverse3(P), M)

    nu = None
    if not qp.is_zero():
        a = int(qp.valuation)
        lam = qp.coefficient(a)
        one, zero = tower.one, tower.zero
        P = [[one, zero, zero], [zero, lam, zero], [zero, zero, one]]
        H = matmul(H, P)
        M = matmul(inverse3(P), M)
        qp, sp = qp * lam.inverse(), sp * lam
        if qp != UniPoly.monomial(a, 1, tower):
            nu, rp, sp, Lp = _reparametrize(qp, rp, sp, a, b, c, tower)
            M = matmul(_const_matrix(Lp, tower), M)
            qp = UniPoly.monomial(a, 1, tower)
    sf = StandardForm(H, b, c, qp, rp, sp, M, nu)
    if sf.check_bounds() or not sf.certify(alpha):
        raise InvariantError(f"normal form failed verification for {alpha}")
    return sf


def _reparametrize(q: UniPoly, r: UniPoly, s: UniPoly, a: int, b: int, c: int, tower: Tower):
    """Find ``nu`` with ``(t nu)^a u(t nu) = t^a`` and re-split the transformed ``U``."""
    dom = tower.dom
    n = c + 2
    S = _Series(dom, n)
    u = q.shift(-a).raw_coeffs(n)

    def apply(poly_coeffs, tn):
        out = [S.zero] * n
        power = S.const(dom.one)
        for coef in poly_coeffs:
            if coef:
                out = S.add(out, S.scale(power, coef))
            power = S.mul(power, tn)
        return out

    nu = S.const(dom.one)
    tshift = lambda ser: [S.zero] + ser[:-1]  # noqa: E731
    for k in range(1, n):
        nu[k] = S.zero
        tn = tshift(nu)
        val = S.mul(_spow(S, nu, a), apply(u, tn))
        nu[k] = -dom.quo(val[k], dom.convert(a))
    tn = tshift(nu)
    one, zero = S.const(dom.one), [S.zero] * n
    r_new = apply(r.raw_coeffs(n), tn)
    s_new = apply(s.raw_coeffs(n), tn)
    q_new = S.mul(_spow(S, tn, a), apply(u, tn))
    h1 = [[one, zero, zero], [q_new, one, zero], [r_new, s_new, one]]
    _, r2, s2, L = _mpi(h1, b, c, S)
    nu_poly = S.to_poly(nu, tower, c + 1)
    return nu_poly, S.to_poly(r2, tower), S.to_poly(s2, tower), L


def _spow(S: _Series, a, e: int):
    out = S.const(S.dom.one)
    for _ in range(e):
        out = S.mul(out, a)
    return out


def germ_limit(C, alpha) -> HomogeneousForm:
    C = _as_curve(C)
    return dominant_part(substitute(C.form, alpha))[1]


def germ_equivalent_limits(alpha, beta, C) -> bool:
    """True when both germs give proportional limit forms for ``C``."""
    return germ_limit(C, alpha).proportional(germ_limit(C, beta))
