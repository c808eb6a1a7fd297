from fractions import Fraction

import oracle
import pytest
from hypothesis import given, strategies as st

from curvelimits.arith import UniPoly
from curvelimits.curve import Flag, Line, PlaneCurve, Point
from curvelimits.errors import GeometryError
from curvelimits.forms import factor
from curvelimits.germs import (Germ, germ_equivalent_limits, marker_type_I, marker_type_II,
                               marker_type_III, marker_type_IV, marker_type_V, normalize_germ,
                               type_v_exponents, type_v_local_germ)
from curvelimits.limits import apply_germ
from curvelimits.newton import newton_polygon, relevant_sides
from curvelimits.parsing import parse_curve, parse_matrix_entries
from curvelimits.puiseux import characteristics



def _sym(g):
    return oracle.sym_matrix([[str(e) for e in row] for row in g.entries])


EXONE = PlaneCurve.parse("x*y*z+y^3+z^3")
C1 = PlaneCurve.parse("(y+z)*(x*y^2+x*y*z+x*z^2+y^2*z+y*z^2)")
C2 = PlaneCurve.parse("(y^2-x*z)^2-y^3*z")
TEST_CURVES = [EXONE, C2, PlaneCurve.parse("x^4+y^3*z+2*x*y*z^2-z^4")]


def germ(text):
    tower, entries = parse_matrix_entries(text)
    return Germ(entries, tower)


class TestGermBasics:
    def test_rejects_degenerate(self):
        with pytest.raises(GeometryError):
            germ("[[t,0,0],[0,t,0],[0,0,t]]")
        with pytest.raises(GeometryError):
            germ("[[1,1,0],[1,1,0],[0,0,t]] * [[1,0,0],[0,0,0],[0,0,1]]")

    def test_center_kernel_image(self):
        g = germ("[[1,0,0],[0,t,0],[0,0,t^2]]")
        assert g.center_rank == 1
        assert [[str(v) for v in k] for k in g.kernel()] == [["0", "1", "0"], ["0", "0", "1"]]
        assert len(g.image()) == 1
        assert g.det() == UniPoly.monomial(3)

    def test_product_and_reparametrization(self):
        a = germ("[[1,0,0],[t,1,0],[0,0,1]]")
        b = Germ.one_ps(1, 2)
        assert (a @ b) == germ("[[1,0,0],[t,t,0],[0,0,t^2]]")
        nu = UniPoly.from_coeffs([1, 1])
        assert b.reparametrize(nu) == germ("diag(1, t+t^2, t^2+2*t^3+t^4)")


class TestMarkers:
    def test_type_I_needs_a_line_component(self):
        g = marker_type_I(C1, parse_curve("y+z"))
        assert g.center_rank == 2
        assert apply_germ(C1, g).form.proportional(parse_curve("x*y^2*z"))
        with pytest.raises(GeometryError):
            marker_type_I(C1, parse_curve("y"))

    def test_type_II_checks_the_point(self):
        g = marker_type_II(EXONE, Point([-2, 1, 1]))
        assert g.local == Germ.one_ps(1, 2)
        lim = apply_germ(EXONE, g)
        order, expected = oracle.limit(oracle.sym(str(EXONE.form)), _sym(g))
        assert lim.order == order
        assert oracle.proportional(oracle.sym(str(lim.form)), expected)
        # a conic together with its tangent line at the image point
        assert sorted(f.degree for f, _ in factor(lim.form).factors) == [1, 2]
        for bad in ([1, 0, 0], [0, 1, -1], [0, 1, 0]):  # node, flex, off the curve
            with pytest.raises(GeometryError):
                marker_type_II(EXONE, Point(bad))

    def test_type_III_needs_three_lines(self):
        g = marker_type_III(C1, Point([1, 0, 0]))
        assert apply_germ(C1, g).form.proportional(parse_curve("x*(y+z)*(y^2+y*z+z^2)"))
        with pytest.raises(GeometryError):
            marker_type_III(EXONE, Point([1, 0, 0]))

    def test_type_IV_sides(self):
        flag = Flag(Point([1, 0, 0]), Line([0, 0, 1]))
        (side,) = relevant_sides(newton_polygon(EXONE, flag))
        g = marker_type_IV(EXONE, flag, side)
        assert g == Germ.one_ps(1, 2)
        steep = newton_polygon(EXONE, flag).sides[0]
        with pytest.raises(GeometryError):
            marker_type_IV(EXONE, flag, steep)

    def test_type_V_germ_of_the_ramphoid_cusp(self):
        flag = Flag(Point([1, 0, 0]), Line([0, 0, 1]))
        (datum,) = characteristics(C2, flag)
        assert type_v_exponents(datum.truncation, datum.C) == (4, 5, 10)
        g = marker_type_V(C2, flag, datum)
        assert g.local == germ("[[1,0,0],[t^4,t^5,0],[t^8,2*t^9,t^10]]")
        assert apply_germ(C2, g).form.proportional(parse_curve("(y^2-x*z+x^2)*(y^2-x*z-x^2)"))

    def test_type_V_exponents_fractional_truncation(self):
        one = PlaneCurve.parse("x").tower.one
        trunc = [(Fraction(3, 2), one), (Fraction(2), one)]
        a, b, c = type_v_exponents(trunc, Fraction(9, 4))
        assert (Fraction(b, a), Fraction(c, a)) == (Fraction(11, 8), Fraction(9, 4))
        g = type_v_local_germ(trunc, Fraction(9, 4), one.tower)
        assert g.entries[2][0].valuation == 3 * a // 2


class TestNormalForm:
    def test_composite_example(self):
        sf = normalize_germ(germ("[[1,0,0],[t,1,0],[0,0,1]]*diag(1,t,t^2)"))
        assert (sf.b, sf.c) == (1, 2)
        assert sf.q.is_zero() and sf.check_bounds() == []

    def test_diagonal_is_fixed(self):
        for b, c in [(0, 0), (1, 1), (1, 3), (2, 5)]:
            alpha = Germ.one_ps(b, c)
            sf = normalize_germ(alpha)
            assert (sf.b, sf.c) == (b, c)
            assert sf.reconstruct() == alpha

    @pytest.mark.parametrize("text", [
        "[[1,0,0],[t+t^2,t^3,0],[0,0,t^4]]",
        "[[1,0,0],[2*t+t^2,t^3,0],[t^2,0,t^4]]",
        "[[1,0,0],[t^2+t^3,t^3,0],[t^3,t^4,t^5]]",
        "[[1,1,0],[t,0,t],[0,t^2,t^3]]",
    ])
    def test_certified_with_reparametrization(self, text):
        alpha = germ(text)
        sf = normalize_germ(alpha)
        assert sf.check_bounds() == []
        assert sf.certify(alpha)
        for C in TEST_CURVES:
            assert germ_equivalent_limits(alpha, sf.reconstruct(), C)

    def test_reparametrization_found(self):
        sf = normalize_germ(germ("[[1,0,0],[t+t^2,t^3,0],[0,0,t^4]]"))
        assert sf.q == UniPoly.monomial(1)
        # t * nu(t) inverts t + t^2: nu = 1 - t + 2t^2 - 5t^3 + 14t^4 (Catalan numbers)
        assert [c.to_fraction() for c in sf.reparametrization.coeffs()][:5] == [1, -1, 2, -5, 14]

    @given(st.lists(st.integers(-2, 2), min_size=9, max_size=9),
           st.integers(0, 3), st.integers(0, 3))
    def test_random_lower_triangular(self, cs, b, extra):
        c = b + extra
        T = lambda k: f"t^{k}"  # noqa: E731
        rows = [[1, 0, 0], [f"{cs[0]}*t+{cs[1]}*t^2", T(b), 0],
                [f"{cs[2]}*t+{cs[3]}*t^2+{cs[4]}*t^3", f"{cs[5]}*t^{b + 1}", T(c)]]
        text = "[" + ",".join("[" + ",".join(str(e) for e in r) + "]" for r in rows) + "]"
        text += "*[[1,%d,%d],[0,1,%d],[0,0,1]]" % (cs[6], cs[7], cs[8])
        alpha = germ(text)
        sf = normalize_germ(alpha)
        assert sf.check_bounds() == []
        assert sf.certify(alpha)
        assert germ_equivalent_limits(alpha, sf.reconstruct(), TEST_CURVES[2])
