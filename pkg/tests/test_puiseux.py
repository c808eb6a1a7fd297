import random
from fractions import Fraction
from math import lcm

import pytest
import sympy as sp

import oracle
from curvelimits.config import override_limits
from curvelimits.curve import Flag, Line, PlaneCurve, Point, flag_transform, multiplicity, \
    tangent_cone
from curvelimits.errors import GeometryError
from curvelimits.parsing import parse_curve
from curvelimits.puiseux import characteristics, default_order, puiseux_branches

ORIGIN_FLAG = Flag(Point([1, 0, 0]), Line([0, 0, 1]))


def residual_valuation(local: sp.Expr, branch) -> Fraction | None:
    """Valuation (in the branch variable) of the equation along a truncated branch."""
    s = sp.Symbol("s")
    exps = [e for e, _ in branch.terms]
    n = lcm(*(Fraction(e).denominator for e in exps)) if exps else 1
    series = sum(sp.Rational(str(c)) * s ** int(e * n) for e, c in branch.terms)
    if branch.swapped:
        sub = {oracle.x: 1, oracle.z: s ** n, oracle.y: series}
    else:
        sub = {oracle.x: 1, oracle.y: s ** n, oracle.z: series}
    value = sp.expand(local.subs(sub, simultaneous=True))
    if value == 0:
        return None
    return Fraction(min(m[0] for m in sp.Poly(value, s).monoms()), n)


def test_ramphoid_branches():
    C = PlaneCurve.parse("(y^2-x*z)^2-y^3*z")
    branches = puiseux_branches(C, ORIGIN_FLAG, 3)
    assert sorted(str(b) for b in branches) == [
        "z = y^2 + y^(5/2) + 1/2*y^3 + O(y^(7/2))",
        "z = y^2 - y^(5/2) + 1/2*y^3 + O(y^(7/2))",
    ]
    assert all(b.ramification == 2 for b in branches)


def test_ramphoid_characteristic():
    (d,) = characteristics(PlaneCurve.parse("(y^2-x*z)^2-y^3*z"), ORIGIN_FLAG)
    assert (d.lambda0, d.C, d.S) == (2, Fraction(5, 2), 2)
    assert sorted(g.to_fraction() for g in d.distinct_gammas) == [-1, 1]
    assert d.gamma_lambda0 == 1 and d.gamma_mid == 0
    assert [(e, c.to_fraction()) for e, c in d.truncation] == [(2, 1)]


def test_node_branches_and_no_characteristic():
    C = PlaneCurve.parse("x*y*z+y^3+z^3")
    out = sorted(str(b) for b in puiseux_branches(C, ORIGIN_FLAG, 4))
    assert out == ["y = -z^2 + O(z^5)", "z = -y^2 + O(y^5)"]
    assert characteristics(C, ORIGIN_FLAG) == []


def test_exact_polynomial_branches():
    C = PlaneCurve.parse("(x*z-y^2)*(x*z-y^2-y*z)")
    branches = puiseux_branches(C, ORIGIN_FLAG, 6)
    assert len(branches) == 2
    local = oracle.sym(str(C.form))
    for b in branches:
        v = residual_valuation(local, b)
        assert v is None or v > 6


def test_cluster_splitting_over_extension():
    # z = y^2 +- sqrt(2) y^3: the split coefficients need a quadratic field
    C = PlaneCurve.parse("(x^2*z-x*y^2)^2-2*y^6")
    (d,) = characteristics(C, ORIGIN_FLAG)
    assert (d.C, d.S) == (3, 2)
    g = d.distinct_gammas
    assert g[0] == -g[1] and g[0] * g[0] == 2


def test_multiplicities_add_up():
    C = PlaneCurve.parse("x^3*(z-y)^2 + x*y^2*z^2 + y^5 + z^5")
    m = multiplicity(C, Point([1, 0, 0]))
    branches = puiseux_branches(C, ORIGIN_FLAG, 6)
    assert sum(b.ramification * b.multiplicity for b in branches) == m


def test_default_order_and_override():
    assert default_order(3) == 36
    with override_limits(puiseux_order=7):
        assert default_order(3) == 7


def test_point_off_curve():
    with pytest.raises(GeometryError):
        puiseux_branches(PlaneCurve.parse("x*z-y^2-x^2"), ORIGIN_FLAG)


@pytest.mark.parametrize("seed", range(12))
def test_random_branches_solve_the_equation(seed):
    rng = random.Random(1000 + seed)
    d = rng.randint(3, 5)
    F, A = oracle.random_singular_curve(rng, d, rng.randint(2, d))
    C = PlaneCurve(parse_curve(oracle.to_text(F)))
    p = Point([int(v) for v in A[:, 0]])
    lines = [l for l, _ in tangent_cone(C, p).lines if l.is_rational()]
    flag = Flag(p, lines[0])
    order = Fraction(6)
    branches = puiseux_branches(C, flag, order)
    assert sum(b.ramification * b.multiplicity for b in branches) == multiplicity(C, p)
    local = oracle.local(F, sp.Matrix([[sp.Rational(str(c)) for c in row]
                                       for row in flag_transform(p, flag.line)]))
    checked = 0
    for b in branches:
        if not all(c.is_rational() for _, c in b.terms):
            continue
        v = residual_valuation(local, b)
        # the truncation is exact below known_to, so the residual vanishes to that order
        assert v is None or b.known_to is None or v >= b.known_to
        checked += 1
    assert checked or any(not c.is_rational() for b in branches for _, c in b.terms)
