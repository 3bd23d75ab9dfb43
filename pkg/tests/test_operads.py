import itertools
import math
import random

import pytest
from oracles import poincare_coefficients

from parcalc.chaincx import betti
from parcalc.diagrams import (
    AssociativeOperad,
    CommutativeOperad,
    ConfigurationModule,
    OperadAsModule,
    OperadError,
    TruncatedGerstenhaber,
    enriched_category_of,
    h0_splitting_check,
    module_as_functor,
)
from parcalc.diagrams.operads import arnold_basis, arnold_normal_form, config_pullback
from parcalc.exactla import RatMatrix


def rising(n, m):
    return math.prod(n + j for j in range(m))


def test_com_hom_dims():
    cat = enriched_category_of(CommutativeOperad(4))
    for m, n in itertools.product(range(5), repeat=2):
        assert len(cat.hom_basis(m, n)) == n**m
    assert len(cat.hom_basis(2, 2)) == 4


def test_ass_hom_dims():
    # functions m -> n with a linear order on each fibre
    cat = enriched_category_of(AssociativeOperad(4))
    for m, n in itertools.product(range(5), repeat=2):
        assert len(cat.hom_basis(m, n)) == rising(n, m)


@pytest.mark.parametrize("operad", [CommutativeOperad(4), AssociativeOperad(4), TruncatedGerstenhaber(3)])
def test_hom_into_one_is_the_operad(operad):
    cat = enriched_category_of(operad)
    for m in range(operad.n_max + 1):
        assert betti(cat.hom_complex(m, 1)) == betti(operad.term(m))
    for n in range(operad.n_max + 1):
        assert len(cat.hom_basis(0, n)) == 1


@pytest.mark.parametrize(
    "operad", [CommutativeOperad(4), AssociativeOperad(4), TruncatedGerstenhaber(2), TruncatedGerstenhaber(3)]
)
def test_operad_axioms(operad):
    assert operad.check_axioms() == []


def test_gerstenhaber_degrees():
    g = TruncatedGerstenhaber(4)
    assert g.degrees(2) == (0, 3)
    assert g.relabel(2, (2, 1), 1) == {1: 1}
    assert TruncatedGerstenhaber(3).relabel(2, (2, 1), 1) == {1: -1}


@pytest.mark.parametrize("operad", [CommutativeOperad(3), AssociativeOperad(3), TruncatedGerstenhaber(2)])
def test_category_units_and_associativity(operad):
    cat = enriched_category_of(operad)
    assert cat.check_units() == []
    count, problems = cat.check_associativity()
    assert count > 0 and problems == []


def test_associativity_counts():
    assert enriched_category_of(CommutativeOperad(3)).check_associativity()[0] == 50018


def test_objects_limited_by_truncation():
    with pytest.raises(OperadError):
        enriched_category_of(CommutativeOperad(2), 3)
    with pytest.raises(OperadError):
        CommutativeOperad(2).dim(3)


@pytest.mark.parametrize("operad", [CommutativeOperad(3), AssociativeOperad(3)])
def test_operad_acting_on_itself(operad):
    f = module_as_functor(OperadAsModule(operad))
    for n in range(4):
        assert f.value(n) == operad.term(n)
    assert f.check() == []


@pytest.mark.parametrize("d", [2, 3, 4])
def test_configuration_betti(d):
    mod = ConfigurationModule(d, 4)
    for n in range(5):
        expected = poincare_coefficients(max(n, 1), d)
        assert list(betti(mod.term(n))) == expected


@pytest.mark.parametrize("d", [2, 3])
def test_configuration_functor(d):
    assert module_as_functor(ConfigurationModule(d, 3)).check() == []


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_arnold_relation(d):
    s = (-1) ** d  # ω_ca = s ω_ac
    total = {}
    for mono, coef in (([(1, 2), (2, 3)], 1), ([(2, 3), (1, 3)], s), ([(1, 3), (1, 2)], s)):
        for m, e in arnold_normal_form(tuple(mono), d):
            total[m] = total.get(m, 0) + coef * e
    assert all(v == 0 for v in total.values())


def test_arnold_basis_size():
    for n in range(1, 6):
        assert len(arnold_basis(n, 3)) == math.factorial(n)


@pytest.mark.parametrize("d", [2, 3])
def test_pullback_is_functorial(d):
    for alpha in itertools.product(range(1, 4), repeat=3):
        for beta in itertools.product(range(1, 4), repeat=3):
            comp = tuple(beta[a - 1] for a in alpha)
            assert config_pullback(3, 3, beta, d) @ config_pullback(3, 3, alpha, d) == config_pullback(3, 3, comp, d)


def test_pullback_along_identity():
    assert config_pullback(4, 4, (1, 2, 3, 4), 3) == RatMatrix.identity(24)


def test_h0_splitting_of_configuration_module():
    v = h0_splitting_check(ConfigurationModule(3, 4))
    assert v.passed and v.precondition
    assert sorted(v.summands) == [0, 2, 4, 6]
    assert v.summands == {
        0: (1, 1, 1, 1, 1),
        2: (0, 0, 1, 3, 6),
        4: (0, 0, 0, 2, 11),
        6: (0, 0, 0, 0, 6),
    }
    assert v.to_json()["verdict"] == "pass"


def test_h0_summands_match_layer_ranks():
    v = h0_splitting_check(ConfigurationModule(4, 3))
    for n in range(4):
        ours = {g: dims[n] for g, dims in v.summands.items() if dims[n]}
        assert ours == {g: c for g, c in enumerate(poincare_coefficients(max(n, 1), 4)) if c}


def test_h0_splitting_rejects_mixed_degree_action():
    v = h0_splitting_check(OperadAsModule(TruncatedGerstenhaber(2)))
    assert not v.passed and not v.precondition and v.problems


@pytest.mark.parametrize("operad", [CommutativeOperad(4), AssociativeOperad(4)])
def test_associativity_sampled_up_to_four(operad):
    # exhaustive at 4 objects is tens of millions of triples; sample instead
    cat = enriched_category_of(operad, 4)
    rng = random.Random(4)
    checked = 0
    while checked < 400:
        l, m, n, p = (rng.randint(0, 4) for _ in range(4))
        sizes = [len(cat.hom_basis(*e)) for e in ((n, p), (m, n), (l, m))]
        if 0 in sizes:
            continue
        w, u, v = (rng.randrange(s) for s in sizes)
        lhs = cat.compose_vec(p, m, l, cat.compose(p, n, m, w, u), {v: 1})
        rhs = cat.compose_vec(p, n, l, {w: 1}, cat.compose(n, m, l, u, v))
        assert lhs == rhs, (l, m, n, p, w, u, v)
        checked += 1
