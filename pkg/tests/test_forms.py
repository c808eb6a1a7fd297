import pytest
import sympy as sp
from hypothesis import given, strategies as st

import oracle
from curvelimits.config import override_limits
from curvelimits.errors import DegreeCapError
from curvelimits.forms import HomogeneousForm, dominant_part, factor, substitute
from curvelimits.germs import Germ
from curvelimits.parsing import parse_curve, parse_matrix_entries
from strategies import forms, invertible_matrices


def sym(F):
    return oracle.sym(str(F))


@given(forms(), forms())
def test_ring_operations_match_sympy(F, G):
    assert sp.expand(sym(F * G) - sym(F) * sym(G)) == 0
    if F.degree == G.degree:
        assert sp.expand(sym(F - G) - (sym(F) - sym(G))) == 0


@given(forms(max_degree=3), invertible_matrices())
def test_compose_matches_sympy(F, M):
    got = F.compose(M)
    want = oracle.local(sym(F), sp.Matrix(M))
    assert sp.expand(sym(got) - want) == 0


@given(forms(max_degree=3))
def test_normalized_is_proportional(F):
    N = F.normalized()
    assert N.proportional(F)
    assert N.terms()[0][1] == 1
    assert (F * 3).proportional(F)


@given(forms(max_degree=4))
def test_factorization_expands_back(F):
    fac = factor(F)
    assert fac.expand() == F.lift(fac.tower)
    for f, e in fac.factors:
        assert e >= 1 and f.degree >= 1


def test_absolute_factorization_extends_field():
    fac = factor(parse_curve("x^2 + y^2"))
    assert [f.degree for f, _ in fac.factors] == [1, 1]
    assert fac.tower.height == 1
    fac = factor(parse_curve("y^2 - x*z"))
    assert [f.degree for f, _ in fac.factors] == [2]
    assert fac.tower.height == 0


def test_factored_display():
    assert str(factor(parse_curve("x*(y^2-x*z)^2"))) == "x*(x*z - y^2)^2"
    assert str(factor(parse_curve("x^2*z-y^3"))) == "x^2*z - y^3"
    assert str(factor(parse_curve("3*x*y"))) == "3*x*y"


@given(forms(max_degree=3), st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_dominant_part_matches_oracle(F, exps):
    e = sorted(exps)
    M = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    text = "[[1,1,0],[0,1,1],[1,0,1]]*diag(1,t^%d,t^%d)" % (e[1], e[2])
    tower, entries = parse_matrix_entries(text)
    order, form = dominant_part(substitute(F, Germ(entries, tower)))
    ref_order, ref = oracle.limit(sym(F), sp.Matrix(M) * sp.diag(1, oracle.t ** e[1],
                                                                 oracle.t ** e[2]))
    assert order == ref_order
    assert sp.expand(sym(form) - ref) == 0


def test_substitution_cap():
    F = parse_curve("x^3 + y^3 + z^3")
    g = Germ(parse_matrix_entries("diag(1,t^5,t^9)")[1])
    with override_limits(t_degree_cap=20):
        with pytest.raises(DegreeCapError):
            substitute(F, g)
    assert dominant_part(substitute(F, g))[0] == 0


def test_not_homogeneous():
    from curvelimits.arith import rationals
    R = rationals().ring("x,y,z")
    x, y, _ = R.gens
    with pytest.raises(ValueError):
        HomogeneousForm(rationals(), x + y ** 2)


def test_gradient_and_hessian():
    F = parse_curve("x*y*z + y^3 + z^3")
    assert [str(g) for g in F.gradient()] == ["y*z", "x*z + 3*y^2", "x*y + 3*z^2"]
    H = F.hessian()
    assert H.degree == 3
    assert sp.expand(sym(H) - sp.Matrix(3, 3, lambda i, j: sp.diff(
        sym(F), oracle.XYZ[i], oracle.XYZ[j])).det()) == 0
