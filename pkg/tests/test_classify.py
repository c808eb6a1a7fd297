import pytest
from hypothesis import given, strategies as st
from strategies import invertible_matrices

from curvelimits.classify import (EDGES, ITEMS, LARGE_ORBIT, SmallOrbitClass, boundary,
                                  classify_limit, poset_is_acyclic, specializes_to)
from curvelimits.curve import PlaneCurve
from curvelimits.parsing import parse_curve

REPRESENTATIVES = {
    1: ["x", "x^3", "(x+y-2*z)^2"],
    2: ["x*y", "x^2*(y-z)"],
    3: ["x*y*(x-y)*(x+2*y)", "y*z*(y+z)^3"],
    4: ["x*y*z", "x^2*y*(x+y+z)"],
    5: ["x*y*(x-y)*z", "y*z*(y-z)*(y+z)*x"],
    6: ["y^2-x*z", "(x^2+y^2+z^2)^2"],
    7: ["z*(y^2-x*z)", "x^2*(y^2-x*z)"],
    8: ["x*z*(y^2-x*z)"],
    9: ["y*(y^2-x*z)", "x*y*z*(y^2-x*z)", "x*y*(y^2-x*z)"],
    10: ["(y^2+x*z)*(y^2-3*x*z)", "x*(y^2+x*z)*(y^2+2*x*z)*(y^2-x*z)", "y*z*(y^2-x*z)*(y^2+x*z)"],
    11: ["y^3+x*z^2", "x*y*z*(y^3-x^2*z)", "(y^4+x*z^3)*(y^4-x*z^3)", "z*(y^3-x^2*z)*(y^3+x^2*z)"],
    12: ["(y^2-x*z+x^2)*(y^2-x*z+3*x^2)", "x*(y^2-x*z)*(y^2-x*z+x^2)*(y^2-x*z-x^2)"],
}

LARGE = ["x*y*z+y^3+z^3", "x^3+y^3+z^3", "x*y*z*(x+y+z)", "(y^2-x*z)*(y^2-2*x*z+z^2)",
         "(y^2-x*z)^2-y^3*z", "x*(y^3+x*z^2)*(y-z)"]


@pytest.mark.parametrize("item,text", [(i, t) for i, ts in REPRESENTATIVES.items() for t in ts])
def test_recognises_small_orbits(item, text):
    kind = classify_limit(parse_curve(text))
    assert isinstance(kind, SmallOrbitClass)
    assert kind.item == item
    assert kind.dimension == ITEMS[item][1]


@pytest.mark.parametrize("text", LARGE)
def test_large_orbits(text):
    assert classify_limit(parse_curve(text)) == LARGE_ORBIT


@given(st.sampled_from([t for ts in REPRESENTATIVES.values() for t in ts] + LARGE),
       invertible_matrices(), st.integers(1, 2))
def test_invariant_under_coordinates_and_powers(text, A, e):
    F = parse_curve(text)
    before = classify_limit(F)
    after = classify_limit(F.compose(A) ** (e if F.degree <= 6 else 1))
    if before == LARGE_ORBIT:
        assert after == LARGE_ORBIT
    else:
        assert after.item == before.item


def test_accepts_plane_curves():
    assert classify_limit(PlaneCurve.parse("x*y*z")).identifier == "item_4"


class TestPoset:
    def test_acyclic_and_reflexive(self):
        assert poset_is_acyclic()
        assert all(specializes_to(i, i) for i in ITEMS)

    def test_dimensions_drop_along_edges(self):
        for a, b in EDGES:
            assert ITEMS[a][1] > ITEMS[b][1]

    def test_transitive_closure(self):
        assert specializes_to(12, 1)
        assert specializes_to(SmallOrbitClass(11), SmallOrbitClass(3))
        assert not specializes_to(1, 2)
        assert not specializes_to(6, 3)

    def test_no_edge_from_conic_and_tangent_to_conic(self):
        assert (7, 6) not in EDGES
        assert not specializes_to(7, 6)

    def test_every_item_reaches_a_single_line(self):
        assert all(specializes_to(i, 1) for i in ITEMS)


def test_boundary_lists_the_star_family_last():
    entries = boundary("x*y*z+y^3+z^3")
    assert entries[-1].limit is None and entries[-1].kind.item == 3
    assert {e.note for e in entries[:-1]} == {"II", "IV"}
    # the node contributes one component but both of its germs are listed
    assert [e.kind.item for e in entries[:-1]].count(9) == 2
    for e in entries[:-1]:
        assert specializes_to(e.kind, 1)
