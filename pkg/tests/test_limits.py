import random

import oracle
import pytest
from hypothesis import given, strategies as st

from curvelimits.curve import Flag, Line, PlaneCurve, Point
from curvelimits.errors import GeometryError
from curvelimits.germs import Germ
from curvelimits.limits import (apply_germ, branch_limit, branch_product, flag_limit,
                                is_kernel_star, special_shape, star_center)
from curvelimits.parsing import parse_curve, parse_matrix_entries
from curvelimits.puiseux import puiseux_branches

C2 = PlaneCurve.parse("(y^2-x*z)^2-y^3*z")
ORIGIN_FLAG = Flag(Point([1, 0, 0]), Line([0, 0, 1]))


def germ(text):
    tower, entries = parse_matrix_entries(text)
    return Germ(entries, tower)


def test_identity_germ_gives_the_curve():
    L = apply_germ(C2, Germ.one_ps(0, 0))
    assert L.order == 0
    assert L.form.proportional(C2.form)


def test_limit_accepts_strings_and_matrices():
    L = apply_germ("x*y*z+y^3+z^3", "diag(1, t, t^2)")
    assert L.form.proportional(parse_curve("y*(y^2+x*z)"))
    assert L.degree == 3


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 5))
def test_diagonal_limits_match_oracle(b, extra, seed):
    rng = random.Random(seed)
    F, _ = oracle.random_singular_curve(rng, 4, 2)
    c = b + extra
    g = Germ.one_ps(b, c)
    L = apply_germ(oracle.to_text(F), g)
    order, expected = oracle.limit(F, oracle.sym_matrix([[1, 0, 0], [0, f"t^{b}", 0],
                                                         [0, 0, f"t^{c}"]]))
    assert L.order == order
    assert oracle.proportional(oracle.sym(str(L.form)), expected)


class TestSpecialShape:
    def test_reads_exponents(self):
        sh = special_shape(germ("[[1,0,0],[t^2,t^3,0],[t^4+t^5,2*t^4,t^6]]"))
        assert (sh.a, sh.b, sh.c) == (2, 3, 6)
        assert str(sh.s) == "2*t"

    @pytest.mark.parametrize("text", [
        "[[1,0,0],[2*t,t^2,0],[0,0,t^3]]",      # non-monic a-entry
        "[[1,0,0],[t^2,t,0],[0,0,t^3]]",        # a > b
        "[[1,0,0],[t,t^2,0],[0,t,t^3]]",        # s below t^b
        "[[1,0,0],[t,t^2,t],[0,0,t^3]]",
    ])
    def test_rejects_other_shapes(self, text):
        with pytest.raises(GeometryError):
            special_shape(germ(text))


class TestBranchLimits:
    def test_product_of_branches_equals_limit(self):
        beta = germ("[[1,0,0],[t^4,t^5,0],[t^8,2*t^9,t^10]]")
        via_branches = branch_product(C2, ORIGIN_FLAG, beta)
        direct = flag_limit(C2, ORIGIN_FLAG, beta)
        assert via_branches.proportional(direct.form)
        assert via_branches.proportional(parse_curve("(y^2-x*z+x^2)*(y^2-x*z-x^2)"))

    def test_swapped_branch_gives_kernel_line(self):
        C = PlaneCurve.parse("(x*z-y^2)*(x*y-z^2)")  # second branch is tangent to y = 0
        branches = puiseux_branches(C, ORIGIN_FLAG, 4)
        swapped = [b for b in branches if b.swapped]
        assert swapped
        beta = germ("[[1,0,0],[t,t^2,0],[t^2,0,t^3]]")
        assert branch_limit(swapped[0], beta).proportional(parse_curve("x"))
        with pytest.raises(GeometryError):
            branch_limit(swapped[0], germ("[[1,0,0],[t,t^2,0],[t,0,t^3]]"))


class TestKernelStars:
    def test_star_center(self):
        kind, p = star_center(parse_curve("y*(y-z)*(y+2*z)"))
        assert kind == "point" and [str(v) for v in p][1:] == ["0", "0"]
        assert star_center(parse_curve("y^3"))[0] == "line"
        assert star_center(parse_curve("x*y*z")) is None
        assert star_center(parse_curve("x*(y^2-x*z)")) is None

    def test_kernel_star_detection(self):
        alpha = Germ.one_ps(1, 1)  # center has rank 1, kernel is x = 0
        assert is_kernel_star(parse_curve("x*y*(x+y)"), alpha)      # center (0:0:1)
        assert is_kernel_star(parse_curve("x^3"), alpha)
        assert not is_kernel_star(parse_curve("y*z*(y+z)"), alpha)  # center (1:0:0)
        with pytest.raises(GeometryError):
            is_kernel_star(parse_curve("y*z*(y+z)"), Germ.one_ps(0, 1))
