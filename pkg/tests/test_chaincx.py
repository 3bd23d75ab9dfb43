import pytest
from conftest import complexes
from hypothesis import given

from parcalc.chaincx import (
    ChainComplex,
    ChainMap,
    GradedRanks,
    InvalidComplex,
    betti,
    complex_from_json,
    complex_to_json,
    direct_sum,
    graded_convolution,
    homology,
    induced_homology_map,
    is_quasi_iso,
    postnikov_inclusion,
    postnikov_kernel,
    postnikov_kernel_inclusion,
    postnikov_projection,
    postnikov_section,
    tensor,
)
from parcalc.exactla import RatMatrix, rank

POINT = ChainComplex((1,))
INTERVAL = ChainComplex((1, 1), (RatMatrix.identity(1),))
# boundary of a triangle: vertices 0,1,2; edges 01, 02, 12
TRIANGLE = ChainComplex((3, 3), (RatMatrix.from_rows([[-1, -1, 0], [1, 0, -1], [0, 1, 1]]),))


def test_betti_examples():
    assert betti(POINT) == (1,)
    assert betti(INTERVAL) == ()
    assert betti(TRIANGLE) == (1, 1)


def test_d_squared_is_checked():
    d = RatMatrix.identity(1)
    with pytest.raises(InvalidComplex):
        ChainComplex((1, 1, 1), (d, d))


def test_shape_is_checked():
    with pytest.raises(InvalidComplex):
        ChainComplex((2, 1), (RatMatrix.identity(1),))


def test_graded_ranks_strip_trailing_zeros():
    assert GradedRanks([1, 0, 2, 0, 0]) == (1, 0, 2)
    assert GradedRanks([0, 0]) == ()
    assert GradedRanks([3])[7] == 0


def test_homology_representatives_are_cycles():
    h = homology(TRIANGLE)
    (z,) = h.representatives[1]
    assert all(x == 0 for x in TRIANGLE.d(1).apply(z))


def test_postnikov_examples():
    po = postnikov_section(INTERVAL, 0)
    assert po.dims == (1, 1) and po.d(1) == INTERVAL.d(1)
    assert betti(postnikov_section(TRIANGLE, 4)) == betti(TRIANGLE)
    assert betti(postnikov_section(TRIANGLE, 1)) == (1, 1)
    pi = postnikov_projection(POINT, 1)
    assert pi[0] == RatMatrix.identity(1)
    assert all(pi[i].is_zero() for i in range(1, len(pi.blocks)))


def test_postnikov_kernel_examples():
    assert betti(postnikov_kernel(POINT, 1)) == ()
    assert betti(postnikov_kernel(TRIANGLE, 1)) == (0, 1)
    for n in range(3):
        assert betti(postnikov_kernel(INTERVAL, n)) == ()


def test_quasi_iso_examples():
    assert is_quasi_iso(ChainMap.identity(TRIANGLE))
    assert not is_quasi_iso(ChainMap.zero(TRIANGLE, TRIANGLE))


def test_tensor_unit():
    assert tensor(POINT, TRIANGLE) == TRIANGLE


def test_json_round_trip():
    assert complex_from_json(complex_to_json(TRIANGLE)) == TRIANGLE


@given(complexes())
def test_betti_matches_construction(cx):
    c, expected = cx
    assert betti(c) == GradedRanks(expected)
    assert sum((-1) ** n * b for n, b in enumerate(betti(c))) == c.euler_characteristic()


@given(complexes(4, 3), complexes(4, 3))
def test_direct_sum_and_tensor_betti(a, b):
    (a, _), (b, _) = a, b
    assert betti(direct_sum(a, b)) == betti(a) + betti(b)
    assert betti(tensor(a, b)) == graded_convolution(betti(a), betti(b))


@given(complexes())
def test_postnikov_homology(cx):
    c, expected = cx
    for n in range(c.top_degree + 1):
        b = betti(postnikov_section(c, n))
        assert b == GradedRanks(expected[: n + 1])


@given(complexes())
def test_postnikov_tower_relations(cx):
    c, _ = cx
    for n in range(1, c.top_degree + 1):
        pi = postnikov_projection(c, n)
        assert pi.is_degreewise_surjective()
        assert pi @ postnikov_inclusion(c, n) == postnikov_inclusion(c, n - 1)
        assert pi @ postnikov_kernel_inclusion(c, n) == ChainMap.zero(postnikov_kernel(c, n), pi.target)


@given(complexes())
def test_postnikov_kernel_concentrated(cx):
    c, expected = cx
    for n in range(c.top_degree + 1):
        b = betti(postnikov_kernel(c, n))
        assert b.support() in ([], [n])
        assert b[n] == expected[n]


@given(complexes())
def test_rho_is_iso_in_low_degrees(cx):
    c, _ = cx
    for n in range(c.top_degree + 1):
        rho = postnikov_inclusion(c, n)
        for i in range(n + 1):
            assert rank(induced_homology_map(rho, i)) == betti(c)[i]
