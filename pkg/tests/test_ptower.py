import json
import math

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from oracles import (
    fixed_point_free_by_cycles,
    poincare_coefficients,
    weighted_layer_count,
)

from parcalc.chaincx import GradedRanks
from parcalc.partitions import (
    SetPartition,
    enumerate_partitions,
    parse_partition,
    refinement_poset,
)
from parcalc.ptower import (
    LayerRow,
    LayerTable,
    block_homology,
    collapse_check,
    connectivity,
    kunneth_check,
    layer_table,
    mobius_partition_lattice,
    poincare_oracle,
    reduced_layer_table,
    t_homology,
    thread_count,
)

# unsigned Stirling numbers of the first kind c(k, k-i), from sympy
STIRLING = {k: [int(sympy.functions.combinatorial.numbers.stirling(k, k - i, kind=1)) for i in range(k)] for k in range(1, 11)}


def brute_mobius(n):
    p = refinement_poset(SetPartition.one_block(range(1, n + 1)))
    lo, hi = p.minimum(), p.maximum()
    mu = {lo: 1}
    order = sorted(range(len(p)), key=lambda i: p.elements[i].n_blocks)
    for z in order[1:]:
        mu[z] = -sum(mu[y] for y in list(mu) if p.lt(y, z))
    return mu[hi]


def test_t_homology_examples():
    assert t_homology(SetPartition.one_block([1, 2, 3, 4])) == (0, 0, 0, 6)
    assert t_homology(parse_partition("1,2|3,4")) == (0, 0, 1)
    assert t_homology(SetPartition.discrete([1, 2, 3])) == (1,)
    with pytest.raises(ValueError):
        t_homology(SetPartition(()))


def test_routes_agree():
    for text in ("1,2,3|4,5", "1,2|3,4|5,6", "1,2,3,4,5"):
        p = parse_partition(text)
        pair = t_homology(p, "pair")
        assert t_homology(p, "interval") == pair == t_homology(p, "product")


def test_kunneth_examples():
    assert kunneth_check(parse_partition("1,2|3,4"))
    p = parse_partition("1,2,3|4,5")
    assert kunneth_check(p) and t_homology(p) == (0, 0, 0, 2)
    assert kunneth_check(SetPartition.one_block(range(1, 6)))


@pytest.mark.parametrize("n", range(1, 6))
def test_mobius_against_brute_force(n):
    assert mobius_partition_lattice(n) == brute_mobius(n)


def test_mobius_values():
    assert [mobius_partition_lattice(n) for n in range(1, 11)] == [
        (-1) ** (n - 1) * math.factorial(n - 1) for n in range(1, 11)
    ]


def test_large_blocks_via_mobius():
    assert block_homology(9) == GradedRanks([0] * 8 + [40320])
    assert t_homology(SetPartition.one_block(range(1, 11))) == GradedRanks([0] * 9 + [362880])


def test_layer_table_examples():
    t = layer_table(3, 3)
    assert [(r.i, r.degree, r.rank) for r in t.rows] == [(0, 0, 1), (1, 2, 3), (2, 4, 2)]
    assert layer_table(4, 3).rows[2].rank == 11
    assert layer_table(1, 5).rows == (LayerRow(0, 0, 1),)


def test_reduced_examples():
    r4 = reduced_layer_table(4, 3).first_nonzero()
    assert (r4.i, r4.rank) == (2, 3)
    r3 = reduced_layer_table(3, 3).first_nonzero()
    assert (r3.i, r3.rank) == (2, 2)
    assert reduced_layer_table(2, 3).ranks() == [0, 1]


def test_connectivity_examples():
    assert connectivity(4, 3) == 3
    assert connectivity(5, 3) == 5
    assert connectivity(2, 2) == 0


def test_oracle_examples():
    assert poincare_oracle(3, 3).coefficients == (1, 0, 3, 0, 2)
    assert poincare_oracle(1, 7).coefficients == (1,)
    assert poincare_oracle(4, 4).as_graded() == GradedRanks([1, 0, 0, 6, 0, 0, 11, 0, 0, 6])


@pytest.mark.parametrize("k", range(1, 11))
def test_layer_ranks_are_stirling(k):
    assert layer_table(k, 3).ranks() == STIRLING[k]


@pytest.mark.parametrize("k", range(1, 8))
def test_layer_ranks_brute_force(k):
    assert layer_table(k, 2).ranks() == weighted_layer_count(k)


@pytest.mark.parametrize("k", range(2, 11))
def test_reduced_ranks(k):
    assert reduced_layer_table(k, 4).ranks() == fixed_point_free_by_cycles(k)


def test_reduced_table_k10_frozen():
    assert reduced_layer_table(10, 3).ranks() == [0, 0, 0, 0, 0, 945, 44100, 303660, 623376, 362880]


@pytest.mark.parametrize("k", range(2, 8))
@pytest.mark.parametrize("d", [2, 3, 4, 5, 8])
def test_collapse(k, d):
    v = collapse_check(k, d)
    assert v.passed and v.diff == ()
    assert list(v.oracle) == poincare_coefficients(k, d) + [0] * (len(v.oracle) - len(poincare_coefficients(k, d)))


def test_collapse_two_points():
    for d in (2, 6, 16):
        v = collapse_check(2, d)
        assert v.passed and v.layers[0] == 1 and v.layers[d - 1] == 1


def test_collapse_detects_corruption():
    t = layer_table(5, 3)
    rows = tuple(LayerRow(r.i, r.degree, r.rank + (r.i == 1)) for r in t.rows)
    v = collapse_check(5, 3, LayerTable(5, 3, rows))
    assert not v.passed and v.diff == ((2, 11, 10),)


def test_serialization():
    t = layer_table(3, 3)
    assert t.to_csv() == "k,d,i,degree,rank\n3,3,0,0,1\n3,3,1,2,3\n3,3,2,4,2\n"
    payload = t.to_json()
    assert payload["schema"] == "parcalc.layers/1"
    assert json.loads(json.dumps(payload)) == payload
    assert collapse_check(3, 3).to_json()["verdict"] == "pass"


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("PARCALC_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("PARCALC_THREADS", "lots")
    assert thread_count() == 1


@given(st.integers(2, 10), st.integers(2, 16))
def test_connectivity_formula(k, d):
    first = reduced_layer_table(k, d).first_nonzero()
    assert connectivity(k, d) == first.degree - 1


@given(st.sampled_from(enumerate_partitions(5)))
def test_t_concentrated_in_excess(p):
    h = t_homology(p)
    assert h.support() == [p.excess()]
    assert h[p.excess()] == math.prod(math.factorial(len(b) - 1) for b in p.blocks)
