"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from curvelimits.forms import HomogeneousForm

small = st.integers(min_value=-3, max_value=3)


def monomials(d):
    return [(d - j - k, j, k) for j in range(d + 1) for k in range(d + 1 - j)]


@st.composite
def forms(draw, min_degree=1, max_degree=4):
    d = draw(st.integers(min_value=min_degree, max_value=max_degree))
    coeffs = {m: draw(small) for m in monomials(d)}
    if not any(coeffs.values()):
        coeffs[(d, 0, 0)] = 1
    return HomogeneousForm.from_dict(coeffs, None, d)


@st.composite
def invertible_matrices(draw):
    """``P . L . U`` with unitriangular ``L``, ``U`` and a permutation ``P``."""
    a, b, c, d, e, f = (draw(small) for _ in range(6))
    L = [[1, 0, 0], [a, 1, 0], [b, c, 1]]
    U = [[1, d, e], [0, 1, f], [0, 0, 1]]
    perm = draw(st.permutations(range(3)))
    LU = [[sum(L[i][k] * U[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    return [LU[perm[i]] for i in range(3)]
