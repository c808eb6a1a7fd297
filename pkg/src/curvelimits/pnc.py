"""Enumeration of the components of the projective normal cone of a curve.

Each component is found through a marker germ built from a feature of the
curve: a line (type I), a nonlinear component (II), a point with at least
three tangent lines (III), a Newton polygon side at a flag (IV) or a
characteristic exponent of tangent branches at a flag (V).  Candidates whose
limit cannot contribute a component are dropped with a reason code, and
candidates that mark the same component are merged.

Reason codes: ``kernel-star`` (the limit is a star centred on the kernel
line), ``double-conic`` / ``conic-support`` (a slope ``-1/2`` side whose
limit is a conic, possibly with the kernel line), ``single-conic`` (a
characteristic cluster predicting only one conic) and ``star-limit`` (a type
I limit that is only a star of lines).
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import AlgebraicNumber, Tower, adjoin_root, join
from .classify import SmallOrbitClass, classify_limit
from .curve import (Flag, Line, PlaneCurve, Point, _as_curve, inflection_points, local_form,
                    singular_points, tangent_cone, tangent_line)
from .errors import CapError, GeometryError
from .forms import HomogeneousForm, _probe_lines, factor, lex_key, smooth_point_search
from .germs import Germ, marker_type_I, marker_type_II, marker_type_III, marker_type_IV, \
    marker_type_V
from .limits import LimitCurve, apply_germ, is_kernel_star, star_center
from .newton import newton_polygon, relevant_sides
from .puiseux import characteristics

TYPES = ("I", "II", "III", "IV", "V")


@dataclass
class Candidate:
    type: str
    feature: str
    germ: Germ
    limit: LimitCurve
    point: Point | None = None
    flag: Flag | None = None
    local_limit: HomogeneousForm | None = None  # limit in flag coordinates
    data: dict = field(default_factory=dict)


@dataclass
class Dropped:
    candidate: Candidate | None
    feature: str
    type: str
    reason: str


@dataclass
class PNCComponent:
    type: str
    features: list[str]
    germs: list[Germ]
    limit: LimitCurve
    classification: SmallOrbitClass | str
    point: Point | None = None
    data: dict = field(default_factory=dict)

    @property
    def feature(self) -> str:
        return self.features[0]

    @property
    def germ(self) -> Germ:
        return self.germs[0]


@dataclass
class PNCReport:
    curve: PlaneCurve
    components: list[PNCComponent]
    dropped: list[Dropped]

    @property
    def tower(self) -> Tower:
        return self.curve.tower

    def counts(self) -> dict[str, int]:
        out = {t: 0 for t in TYPES}
        for c in self.components:
            out[c.type] += 1
        return out


# ---------------------------------------------------------------------------
# exclusion rules


def _is_star(form: HomogeneousForm) -> bool:
    return star_center(form) is not None


def _conic_support_reason(local: HomogeneousForm) -> str | None:
    """``double-conic`` or ``conic-support`` when ``local`` is a conic plus the kernel line ``x``."""
    fac = factor(local)
    conics = [(f, e) for f, e in fac.factors if f.degree == 2]
    others = [f for f, _ in fac.factors if f.degree != 2]
    kernel = HomogeneousForm.linear([1, 0, 0], local.tower)
    if len(conics) != 1 or any(not f.proportional(kernel.lift(f.tower)) for f in others):
        return None
    return "double-conic" if conics[0][1] >= 2 else "conic-support"


def exclusion_check(candidate: Candidate) -> str | None:
    """None to keep the candidate, else a reason code."""
    if candidate.type == "I":
        return "star-limit" if _is_star(candidate.limit.form) else None
    if is_kernel_star(candidate.limit, candidate.germ):
        return "kernel-star"
    if candidate.type == "IV":
        b, c = candidate.data["b"], candidate.data["c"]
        if 2 * b == c:
            return _conic_support_reason(candidate.local_limit)
    if candidate.type == "V":
        fac = factor(candidate.limit.form)
        if len([f for f, _ in fac.factors if f.degree == 2]) < 2:
            return "single-conic"
    return None


# ---------------------------------------------------------------------------
# merging


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _power(z: AlgebraicNumber, n: int) -> AlgebraicNumber:
    return z ** n if n >= 0 else z.inverse() ** (-n)


def torus_equivalent(F: HomogeneousForm, G: HomogeneousForm, b: int, c: int) -> bool:
    """Whether ``G = k F(x, u y, v z)`` for nonzero constants, both supported on a side of slope ``-b/c``."""
    fc, gc = F.coefficients(), G.coefficients()
    if set(fc) != set(gc):
        return False
    monos = sorted(fc)
    m0 = monos[0]
    base = gc[m0] / fc[m0]
    steps = []
    for m in monos[1:]:
        ratio = (gc[m] / fc[m]) / base
        n = Fraction(m[1] - m0[1], c)
        if n.denominator != 1:
            return False
        steps.append((int(n), ratio))
    g, Q = 0, None
    for n, ratio in steps:
        if n == 0:
            if ratio != 1:
                return False
            continue
        if Q is None:
            g, Q = abs(n), ratio if n > 0 else ratio.inverse()
            continue
        h, u, v = _ext_gcd(g, n)
        Q = _power(Q, u) * _power(ratio, v)
        g = h
    if Q is None:
        return True
    return all(_power(Q, n // g) == ratio for n, ratio in steps if n != 0)


def affine_equivalent(A: list[tuple[AlgebraicNumber, int]], B: list[tuple[AlgebraicNumber, int]]) -> bool:
    """Whether multisets ``B = k A + v`` for some ``k != 0`` and ``v``."""
    if sorted(m for _, m in A) != sorted(m for _, m in B):
        return False
    if len(A) < 2:
        return True
    (a1, _), (a2, _) = A[0], A[1]
    target = {}
    for v, m in B:
        target[v] = target.get(v, 0) + m
    for h1, _ in B:
        for h2, _ in B:
            if h1 == h2:
                continue
            k = (h2 - h1) / (a2 - a1)
            shift = h1 - k * a1
            image: dict = {}
            for v, m in A:
                w = k * v + shift
                image[w] = image.get(w, 0) + m
            if image == target:
                return True
    return False


def _mergeable(a: Candidate, b: Candidate) -> bool:
    if a.type != b.type or a.point is None or a.point != b.point:
        return False
    if a.type == "IV":
        if (a.data["b"], a.data["c"]) != (b.data["b"], b.data["c"]):
            return False
        return torus_equivalent(a.local_limit, b.local_limit, a.data["b"], a.data["c"])
    if a.type == "V":
        da, db = a.data["datum"], b.data["datum"]
        return (da.C == db.C and da.lambda0 == db.lambda0 and da.S == db.S
                and affine_equivalent(da.gammas, db.gammas))
    return False


def merge_components(candidates: list[Candidate]) -> list[PNCComponent]:
    groups: list[list[Candidate]] = []
    for cand in candidates:
        for grp in groups:
            if _mergeable(grp[0], cand):
                grp.append(cand)
                break
        else:
            groups.append([cand])
    out = []
    for grp in groups:
        head = grp[0]
        data = {k: v for k, v in head.data.items() if k != "datum"}
        out.append(PNCComponent(head.type, [c.feature for c in grp], [c.germ for c in grp],
                                head.limit, classify_limit(head.limit), head.point, data))
    return out


# ---------------------------------------------------------------------------
# enumeration


def _general_point(C: PlaneCurve, G: HomogeneousForm) -> Point:
    """A smooth, non-inflectional point of the component ``G`` off all other components."""
    S = C.support
    H = S.hessian()
    others = [f for f, _ in C.components if not f.proportional(G)]

    def bad(pt) -> bool:
        if any(f.evaluate(pt).is_zero() for f in others):
            return True
        if all(g.evaluate(pt).is_zero() for g in S.gradient()):
            return True
        return H.evaluate(pt).is_zero()

    pt = smooth_point_search(G, avoid=bad)
    if pt is not None:
        return Point(pt)
    for base, direction in _probe_lines():
        u = G.restrict_to_line(base, direction)
        if u.degree < 1:
            continue
        tower, s = adjoin_root(G.tower, u)
        cand = [AlgebraicNumber.rational(b, tower) + s * d for b, d in zip(base, direction)]
        if not bad(cand):
            return Point(cand)
    raise GeometryError(f"no general point found on {G}")  # pragma: no cover


@contextlib.contextmanager
def _feature(description: str):
    """Name the feature being analysed in resource cap errors."""
    try:
        yield
    except CapError as exc:
        if getattr(exc, "feature", None):
            raise
        err = type(exc)(f"{exc} (while analysing {description})")
        err.feature = description
        raise err from exc


def _lift_curve(C: PlaneCurve, *towers) -> PlaneCurve:
    t = join(C.tower, *towers)
    return C if t == C.tower else C.lift(t)


def _flags_at(C: PlaneCurve, p: Point, singular: bool) -> list[Flag]:
    if singular:
        cone = tangent_cone(C, p)
        return [Flag(p.lift(cone.tower), l) for l in cone.distinct_lines]
    return [Flag(p, tangent_line(C, p))]


def _candidate(C: PlaneCurve, type_: str, feature: str, germ: Germ, **kw) -> Candidate:
    limit = apply_germ(C, germ)
    local = None
    if germ.local is not None:
        frame = germ.frame
        local = apply_germ(PlaneCurve(local_form(C.form, frame)), germ.local).form
    return Candidate(type_, feature, germ, limit, local_limit=local, **kw)


def analyze(C) -> PNCReport:
    """Enumerate, filter and merge marker germ candidates for ``C``."""
    C = _as_curve(C)
    fact = C.factorization
    C = _lift_curve(C, fact.tower)
    candidates: list[Candidate] = []
    dropped: list[Dropped] = []

    def consider(cand: Candidate):
        reason = exclusion_check(cand)
        if reason is None:
            candidates.append(cand)
        else:
            dropped.append(Dropped(cand, cand.feature, cand.type, reason))

    for L, _ in fact.linear_factors:
        with _feature(f"line {L} = 0"):
            consider(_candidate(C, "I", f"line {L} = 0", marker_type_I(C, Line.from_form(L))))

    for G, mult in fact.nonlinear_factors:
        with _feature(f"component {G} = 0"):
            p = _general_point(C, G)
            C = _lift_curve(C, p.tower)
            cand = _candidate(C, "II", f"component {G} = 0 at {p}", marker_type_II(C, p),
                              point=p)
        cand.data["multiplicity"] = mult
        cand.data["family"] = "one-parameter family of 6-dimensional orbits"
        consider(cand)

    with _feature("singular points"):
        sing = singular_points(C)
    if sing:
        C = _lift_curve(C, sing[0].tower)
    with _feature("inflection points"):
        flexes = inflection_points(C)
    if flexes:
        C = _lift_curve(C, flexes[0].tower)

    for p in sing:
        with _feature(f"tangent cone at {p}"):
            cone = tangent_cone(C, p)
            C = _lift_curve(C, cone.tower)
            if len(cone.lines) >= 3:
                consider(_candidate(C, "III", f"point {p} ({len(cone.lines)} tangent lines)",
                                    marker_type_III(C, p), point=p))

    points = [(p, True) for p in sing] + [(p, False) for p in flexes]
    for p, is_sing in points:
        for flag in _flags_at(C, p, is_sing):
            C = _lift_curve(C, flag.line.tower)
            poly = newton_polygon(C, flag)
            if not poly.usable:
                continue
            for side in relevant_sides(poly):
                feature = f"flag {flag} side slope {side.slope}"
                with _feature(feature):
                    cand = _candidate(C, "IV", feature, marker_type_IV(C, flag, side), point=p,
                                      flag=flag)
                cand.data.update(b=side.b, c=side.c, S=side.segments)
                consider(cand)

    for p in sing:
        for flag in _flags_at(C, p, True):
            with _feature(f"branches at flag {flag}"):
                data = characteristics(C, flag)
            for datum in data:
                C = _lift_curve(C, datum.tower)
                feature = f"flag {flag} characteristic C = {datum.C}"
                if datum.S < 2 or len(datum.distinct_gammas) < 2:
                    dropped.append(Dropped(None, feature, "V", "single-conic"))
                    continue
                cand = _candidate(C, "V", feature, marker_type_V(C, flag, datum), point=p,
                                  flag=flag)
                cand.data.update(datum=datum, C=datum.C, lambda0=datum.lambda0, S=datum.S)
                consider(cand)

    components = merge_components(candidates)
    components.sort(key=_component_key)
    return PNCReport(C, components, dropped)


def _component_key(comp: PNCComponent):
    pk = comp.point.sort_key() if comp.point is not None else ()
    return (TYPES.index(comp.type), pk, lex_key(comp.limit.form))


def enumerate_components(C) -> list[PNCComponent]:
    return analyze(C).components
