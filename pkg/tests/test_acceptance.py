"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.  All comparisons are exact.
"""

import io
import json
import math
import random
import sys
import time
from contextlib import redirect_stdout

import pytest
from conftest import random_complex
from oracles import (
    elementary_symmetric,
    partition_lattice_pair,
    relative_betti,
    weighted_layer_count,
)

from parcalc.chaincx import (
    GradedRanks,
    betti,
    postnikov_inclusion,
    postnikov_kernel,
    postnikov_projection,
    postnikov_section,
)
from parcalc.cli import run
from parcalc.diagrams import (
    AssociativeOperad,
    CommutativeOperad,
    ConfigurationModule,
    corrupt_split,
    enriched_category_of,
    formality_zigzag,
    h0_splitting_check,
    holim_splitting_check,
    random_split_diagram,
)
from parcalc.diagrams.generate import CORRUPTIONS
from parcalc.partitions import (
    SetPartition,
    build_ek,
    classify_map,
    enumerate_partitions,
    excess,
    parse_partition,
    relative_h1_rank,
)
from parcalc.ptower import (
    collapse_check,
    connectivity,
    kunneth_check,
    layer_table,
    reduced_layer_table,
    t_homology,
)

RESULTS = {}


def cli_json(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run([*argv, "--format", "json"])
    return code, json.loads(buf.getvalue())


@pytest.fixture
def report(capsys):
    def emit(n, detail, problems, started):
        ok = not problems
        RESULTS[n] = ok
        line = f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {detail} ({time.perf_counter() - started:.1f}s)"
        if problems:
            line += f" problems: {problems[:5]}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def test_criterion_01_partition_complex_ranks(report):
    t0 = time.perf_counter()
    failures = []
    for n in range(2, 7):
        h = t_homology(SetPartition.one_block(range(1, n + 1)), method="pair")
        expected = GradedRanks([0] * (n - 1) + [math.factorial(n - 1)])
        if h != expected:
            failures.append((n, h))
        code, out = cli_json("tn", "--n", str(n))
        if code or out["result"]["homology"] != [{"degree": n - 1, "rank": math.factorial(n - 1)}]:
            failures.append(("cli", n))
    for n in range(2, 5):
        chains, sub = partition_lattice_pair(n)
        if GradedRanks(relative_betti(chains, sub)) != t_homology(SetPartition.one_block(range(1, n + 1)), "pair"):
            failures.append(("oracle", n))
    report(1, "T_n has rank (n-1)! in degree n-1 for n=2..6", failures, t0)


def test_criterion_02_kunneth(report):
    t0 = time.perf_counter()
    parts = [p for n in range(1, 7) for p in enumerate_partitions(n)]
    bad = [p.to_text() for p in parts if not kunneth_check(p)]
    report(2, f"smash factorization on {len(parts)} partitions of support <= 6", bad, t0)


def test_criterion_03_layer_identity(report):
    t0 = time.perf_counter()
    bad = []
    for k in range(1, 9):
        counts = weighted_layer_count(k)
        sym = [elementary_symmetric(range(1, k), i) for i in range(k)]
        if not (counts == sym == layer_table(k, 3).ranks()):
            bad.append(k)
    report(3, "weighted partition counts equal e_i(1..k-1) for k <= 8", bad, t0)


def test_criterion_04_collapse(report):
    t0 = time.perf_counter()
    bad = [(k, d) for k in range(1, 8) for d in (3, 4, 5) if not collapse_check(k, d).passed]
    for k in range(1, 8):
        for d in (3, 4, 5):
            code, out = cli_json("collapse", "--k", str(k), "--dim", str(d))
            if code or out["verdict"] != "pass":
                bad.append(("cli", k, d))
    report(4, "layer tables match the Poincare polynomial for k <= 7, d in 3,4,5", bad, t0)


def test_criterion_05_reduced_layers(report):
    t0 = time.perf_counter()
    bad = []
    for k in range(2, 11):
        ranks = reduced_layer_table(k, 3).ranks()
        low = -(-k // 2)
        if any(ranks[:low]) or not ranks[low]:
            bad.append(("vanishing", k))
        for d in range(2, 17):
            if connectivity(k, d) != reduced_layer_table(k, d).first_nonzero().degree - 1:
                bad.append(("connectivity", k, d))
    report(5, "reduced layers vanish below ceil(k/2) and connectivity matches, k <= 10", bad, t0)


def test_criterion_06_excess_is_h1_rank(report):
    t0 = time.perf_counter()
    parts = [p for n in range(1, 9) for p in enumerate_partitions(n)]
    bad = [p.to_text() for p in parts if relative_h1_rank(p) != excess(p)]
    report(6, f"excess equals rank of relative H_1 on {len(parts)} partitions", bad, t0)


def test_criterion_07_morphisms(report):
    t0 = time.perf_counter()
    p = parse_partition("1,2|3,4")
    cases = [
        ({1: "a", 2: "b", 3: "c", 4: "d"}, "good"),
        ({1: "a", 2: "b", 3: "b", 4: "c"}, "good"),
        ({1: "a", 2: "a", 3: "b", 4: "c"}, "bad"),
        ({1: "a", 2: "b", 3: "a", 4: "b"}, "bad"),
    ]
    bad = [f for f, want in cases if classify_map(p, f) != want]
    e2 = build_ek(2)
    if len(e2.objects) != 4:
        bad.append(("objects", len(e2.objects)))
    counts = []
    for k in (1, 2, 3):
        cat = build_ek(k)
        counts.append(len(cat.morphisms))
        bad.extend((k, a) for a in cat.morphisms if not excess(a.source) == excess(a.target) == k)
    report(7, f"worked example, 4 objects in E_2, morphism counts {counts} preserve excess", bad, t0)


def test_criterion_08_postnikov(report):
    t0 = time.perf_counter()
    bad = []
    n_cx = 120
    for seed in range(n_cx):
        c, expected = random_complex(random.Random(seed), max_dim=6, max_top=5)
        h = GradedRanks(expected)
        for n in range(c.top_degree + 1):
            if betti(postnikov_section(c, n)) != GradedRanks(h[: n + 1]):
                bad.append((seed, n, "section"))
            k = betti(postnikov_kernel(c, n))
            if k.support() not in ([], [n]) or k[n] != h[n]:
                bad.append((seed, n, "kernel"))
            if n >= 1:
                pi = postnikov_projection(c, n)
                if not pi.is_degreewise_surjective():
                    bad.append((seed, n, "surjective"))
                if pi @ postnikov_inclusion(c, n) != postnikov_inclusion(c, n - 1):
                    bad.append((seed, n, "tower"))
    report(8, f"Postnikov sections, kernels and pi_n rho_n = rho_(n-1) on {n_cx} complexes", bad, t0)


def test_criterion_09_formality(report):
    t0 = time.perf_counter()
    bad = []
    n_diag = 60
    detected = {k: 0 for k in CORRUPTIONS}
    for seed in range(n_diag):
        rng = random.Random(10_000 + seed)
        g = random_split_diagram(rng)
        for n, piece in g.split.summands:
            if not formality_zigzag(piece, n).verify():
                bad.append((seed, "zigzag", n))
        if not holim_splitting_check(g.diagram, g.split).passed:
            bad.append((seed, "split"))
        for kind in CORRUPTIONS:
            broken = corrupt_split(rng, g, kind)
            if broken is None:
                continue
            if holim_splitting_check(broken.diagram, broken.split).passed:
                bad.append((seed, kind))
            else:
                detected[kind] += 1
    if not all(detected.values()):
        bad.append(("undetected kinds", detected))
    report(9, f"{n_diag} split diagrams verified, corruptions caught {detected}", bad, t0)


def test_criterion_10_operads(report):
    t0 = time.perf_counter()
    bad = []
    com = enriched_category_of(CommutativeOperad(4))
    bad.extend((m, n) for m in range(5) for n in range(5) if len(com.hom_basis(m, n)) != n**m)
    triples = 0
    for operad in (CommutativeOperad(3), AssociativeOperad(3)):
        count, problems = enriched_category_of(operad).check_associativity()
        triples += count
        bad.extend(problems[:3])
    split = h0_splitting_check(ConfigurationModule(3, 4))
    if not split.passed or sorted(split.summands) != [0, 2, 4, 6]:
        bad.append(("h0", split.problems[:3], sorted(split.summands)))
    report(10, f"dim O(m,n) = n^m, {triples} associativity triples, degree summands {sorted(split.summands)}", bad, t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
