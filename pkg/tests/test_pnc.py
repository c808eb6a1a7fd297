import oracle
import pytest

from curvelimits.arith import AlgebraicNumber, rationals
from curvelimits.classify import LARGE_ORBIT
from curvelimits.config import override_limits
from curvelimits.errors import CapError
from curvelimits.pnc import TYPES, affine_equivalent, analyze, torus_equivalent
from curvelimits.parsing import parse_curve

Q = rationals()


def counts(report):
    return {k: v for k, v in report.counts().items() if v}


def items(report, type_):
    return sorted(c.classification.item for c in report.components if c.type == type_)


class TestEquivalences:
    def test_torus_uses_the_side_invariant(self):
        F = parse_curve("x^2*z^2+x*y^2*z+y^4")
        assert torus_equivalent(F, parse_curve("x^2*z^2+2*x*y^2*z+4*y^4"), 1, 2)
        assert torus_equivalent(F, parse_curve("3*x^2*z^2-3*x*y^2*z+3*y^4"), 1, 2)
        assert not torus_equivalent(F, parse_curve("x^2*z^2+x*y^2*z+2*y^4"), 1, 2)
        assert not torus_equivalent(F, parse_curve("x^2*z^2+y^4"), 1, 2)

    def test_two_term_sides_are_always_equivalent(self):
        assert torus_equivalent(parse_curve("x^2*z+y^3"), parse_curve("x^2*z-7*y^3"), 2, 3)

    @pytest.mark.parametrize("a,b,expected", [
        ([0, 1], [5, 7], True),
        ([0, 1, 3], [0, 2, 6], True),
        ([0, 1, 3], [3, 2, 0], True),
        ([0, 1, 3], [0, 1, 2], False),
    ])
    def test_affine(self, a, b, expected):
        A = [(AlgebraicNumber.rational(v, Q), 1) for v in a]
        B = [(AlgebraicNumber.rational(v, Q), 1) for v in b]
        assert affine_equivalent(A, B) is expected

    def test_affine_respects_multiplicities(self):
        A = [(AlgebraicNumber.rational(0, Q), 2), (AlgebraicNumber.rational(1, Q), 1)]
        B = [(AlgebraicNumber.rational(0, Q), 1), (AlgebraicNumber.rational(1, Q), 2)]
        assert affine_equivalent(A, B)  # k = -1 swaps the two values
        assert not affine_equivalent(A, [(v, 1) for v, _ in B] + [(B[0][0], 1)])


class TestAnalyze:
    def test_single_line_has_only_the_star_family(self):
        r = analyze("x")
        assert r.components == []
        assert [(d.type, d.reason) for d in r.dropped] == [("I", "star-limit")]

    def test_conic(self):
        r = analyze("y^2-x*z")
        assert counts(r) == {"II": 1}
        assert items(r, "II") == [6]

    def test_smooth_cubic_flexes(self):
        r = analyze("x^3+y^3+z^3")
        assert counts(r) == {"II": 1, "IV": 9}
        assert items(r, "II") == [7]
        assert set(items(r, "IV")) == {11}

    def test_fermat_quartic_hyperflexes(self):
        r = analyze("x^4+y^4+z^4")
        assert counts(r) == {"II": 1, "IV": 12}
        assert all(c.data["b"] == 1 and c.data["c"] == 4 for c in r.components if c.type == "IV")

    def test_cuspidal_cubic(self):
        r = analyze("y^2*z-x^3")
        assert counts(r) == {"II": 1, "IV": 2}
        assert {(c.data["b"], c.data["c"]) for c in r.components if c.type == "IV"} == {(2, 3), (1, 3)}

    def test_star_drops_its_lines(self):
        r = analyze("x*y*(x+y)")
        assert counts(r) == {"III": 1}
        assert sorted(d.reason for d in r.dropped) == ["star-limit"] * 3

    def test_bitangent_conics(self):
        r = analyze("(y^2-x*z)*(y^2-2*x*z)")
        assert counts(r) == {"II": 2, "IV": 2}
        assert items(r, "IV") == [10, 10]

    def test_type_v_regression(self):
        r = analyze("(x^2*z-x*y^2)^2-2*y^6")
        assert counts(r) == {"II": 2, "IV": 3, "V": 1}
        assert items(r, "V") == [12]
        assert ("IV", "double-conic") in {(d.type, d.reason) for d in r.dropped}

    @pytest.mark.parametrize("text", ["y^2*z-x^3", "x*(y^2-x*z)", "x*y*z+y^3+z^3"])
    def test_limits_match_oracle_for_rational_germs(self, text):
        F = oracle.sym(text)
        checked = 0
        for comp in analyze(text).components:
            for g in comp.germs:
                if g.tower.height:
                    continue
                M = oracle.sym_matrix([[str(e) for e in row] for row in g.entries])
                order, expected = oracle.limit(F, M)
                assert oracle.proportional(oracle.sym(str(comp.limit.form)), expected)
                checked += 1
        assert checked

    @pytest.mark.parametrize("text", ["x^3+y^3+z^3", "y^2*z-x^3", "x*(y^2-x*z)",
                                      "(y^2-x*z)*(y^2-2*x*z)", "(x^2*z-x*y^2)^2-2*y^6"])
    def test_components_have_small_orbits(self, text):
        for comp in analyze(text).components:
            assert comp.classification != LARGE_ORBIT

    def test_components_are_sorted_by_type(self):
        r = analyze("(x^2*z-x*y^2)^2-2*y^6")
        order = [TYPES.index(c.type) for c in r.components]
        assert order == sorted(order)

    def test_deterministic(self):
        a = analyze("x*y*z+y^3+z^3")
        b = analyze("x*y*z+y^3+z^3")
        assert [str(c.limit.form) for c in a.components] == [str(c.limit.form) for c in b.components]
        assert [c.features for c in a.components] == [c.features for c in b.components]


def test_cap_errors_name_the_feature():
    with override_limits(t_degree_cap=2):
        with pytest.raises(CapError) as info:
            analyze("(y^2-x*z)^2-y^3*z")
    assert info.value.feature
    assert "while analysing" in str(info.value)
