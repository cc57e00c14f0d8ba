import math
from itertools import combinations

from hypothesis import given, settings, strategies as st

from treeends.intmat import (
    det,
    dims,
    has_trivial_cokernel,
    hermite_column_basis,
    identity,
    kernel_basis,
    mat_mul,
    mat_vec,
    smith_normal_form,
    zeros,
)


# Oracle: the product of the first k diagonal entries equals the gcd of all
# k x k minors.  Computed straight from the definition with determinants.
def minor_gcd(a, k):
    m, n = dims(a)
    g = 0
    for rows in combinations(range(m), k):
        for cols in combinations(range(n), k):
            sub = [[a[r][c] for c in cols] for r in rows]
            g = math.gcd(g, det(sub))
    return g


SMALL = st.integers(min_value=-6, max_value=6)


def matrices(max_side=4):
    return st.integers(min_value=1, max_value=max_side).flatmap(
        lambda m: st.integers(min_value=1, max_value=max_side).flatmap(
            lambda n: st.lists(
                st.lists(SMALL, min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def test_det_examples():
    assert det([[2]]) == 2
    assert det([[1, 2], [3, 4]]) == -2
    assert det(identity(4)) == 1
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[2, 0, 0], [0, 3, 0], [0, 0, 5]]) == 30


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_smith_decomposition_properties(a):
    s = smith_normal_form(a)
    m, n = dims(a)
    left = mat_mul(mat_mul(s.u, a), s.v)
    want = zeros(m, n)
    for i, x in enumerate(s.d):
        want[i][i] = x
    assert left == want
    assert abs(det(s.u)) == 1
    assert abs(det(s.v)) == 1
    assert mat_mul(s.u, s.u_inv) == identity(m)
    assert mat_mul(s.v, s.v_inv) == identity(n)
    for x in s.d:
        assert x >= 0
    for x, y in zip(s.d, s.d[1:]):
        if y != 0:
            assert x != 0 and y % x == 0
        # trailing zeros allowed after the rank


@settings(max_examples=40, deadline=None)
@given(matrices(max_side=3))
def test_smith_diagonal_matches_minor_gcds(a):
    s = smith_normal_form(a)
    prod = 1
    for k, x in enumerate(s.d, start=1):
        prod *= x
        assert abs(prod) == minor_gcd(a, k)


def test_smith_pinned_examples():
    assert smith_normal_form([[2, 4], [6, 8]]).d == [2, 4]
    assert smith_normal_form([[1, 0], [0, 1]]).d == [1, 1]
    assert smith_normal_form([[0, 0], [0, 0]]).d == [0, 0]
    assert smith_normal_form([[6, 10], [10, 6]]).d == [2, 32]
    assert smith_normal_form([[2, 0], [0, 3]]).d == [1, 6]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_basis_spans_null_vectors(a):
    basis = kernel_basis(a)
    m, n = dims(a)
    for vec in basis:
        assert mat_vec(a, vec) == [0] * m
    s = smith_normal_form(a)
    assert len(basis) == n - s.rank


def test_hermite_examples():
    assert hermite_column_basis([[2, 4], [0, 0]]) == [[2], [0]]
    assert hermite_column_basis([[4, 6]]) == [[2]]
    assert hermite_column_basis(identity(3)) == identity(3)
    assert hermite_column_basis([[0], [0]]) == [[], []]


@settings(max_examples=60, deadline=None)
@given(matrices(max_side=3))
def test_hermite_invariant_under_column_operations(a):
    base = hermite_column_basis(a)
    m, n = dims(a)
    # column ops generate the same lattice: swap, negate, add
    b = [row[:] for row in a]
    if n >= 2:
        for row in b:
            row[0], row[1] = row[1], row[0]
            row[0] += 3 * row[1]
    for row in b:
        row[-1] = -row[-1]
    assert hermite_column_basis(b) == base


def test_cokernel_triviality():
    assert has_trivial_cokernel(identity(3))
    assert has_trivial_cokernel([[1, 0]])
    assert has_trivial_cokernel([])  # zero rows: nothing to hit
    assert not has_trivial_cokernel([[2]])
    assert not has_trivial_cokernel([[1], [0]])
    assert not has_trivial_cokernel([[], []])  # two rows, no columns
    assert has_trivial_cokernel([[1, 0], [3, 1]])
