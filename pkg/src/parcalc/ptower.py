"""Partition complexes T_Λ and the layer tables they assemble into.

Three routes compute the homology of T_Λ:

``pair``
    relative chains of (order complex, chains missing min or max); used for
    whole partitions on at most ``DIRECT_SUPPORT`` points.
``product``
    graded tensor of the block homologies, each block cached by size.
    Blocks up to ``DIRECT_BLOCK`` points are computed from min-to-max chains.
``mobius``
    blocks above ``DIRECT_BLOCK`` points: the relative Euler characteristic is
    the Möbius number of the partition lattice, placed in degree n-1.  This
    route assumes concentration, which every directly computed size confirms.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from sympy.utilities.iterables import partitions as integer_partitions

from .chaincx import GradedRanks, betti, graded_convolution
from .partitions import SetPartition, enumerate_partitions, refinement_poset
from .simpposet import (
    boundary_subcomplex,
    interval_relative_complex,
    order_complex,
    relative_homology,
)

__all__ = [
    "DIRECT_SUPPORT",
    "DIRECT_BLOCK",
    "LayerRow",
    "LayerTable",
    "PoincareOracle",
    "CollapseVerdict",
    "t_homology",
    "block_homology",
    "mobius_partition_lattice",
    "kunneth_check",
    "layer_table",
    "reduced_layer_table",
    "connectivity",
    "poincare_oracle",
    "collapse_check",
    "thread_count",
]

DIRECT_SUPPORT = 6
DIRECT_BLOCK = 7
LAYER_SCHEMA = "parcalc.layers/1"


def thread_count() -> int:
    """Worker cap from PARCALC_THREADS; 1 when unset or malformed."""
    try:
        return max(1, int(os.environ.get("PARCALC_THREADS", "1")))
    except ValueError:
        return 1


def _pair_homology(p: SetPartition) -> GradedRanks:
    poset = refinement_poset(p)
    return relative_homology((order_complex(poset), boundary_subcomplex(poset)))


@lru_cache(maxsize=None)
def mobius_partition_lattice(n: int) -> int:
    """μ(one block, discrete) in the refinement order of an n-set.

    Uses μ(0,1) = -Σ_{0<z≤1} μ(z,1) with μ(z, discrete) = Π_blocks μ(|b|),
    grouping intermediate partitions by block shape.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    total = 0
    for shape in integer_partitions(n):
        if shape == {n: 1}:
            continue
        count = math.factorial(n)
        weight = 1
        for size, mult in shape.items():
            count //= math.factorial(size) ** mult * math.factorial(mult)
            weight *= mobius_partition_lattice(size) ** mult
        total += count * weight
    return -total


def _interval_homology(n: int) -> GradedRanks:
    return betti(interval_relative_complex(refinement_poset(SetPartition.one_block(range(1, n + 1)))))


@lru_cache(maxsize=None)
def block_homology(n: int) -> GradedRanks:
    """Homology of T for a single block on n points."""
    if n < 1:
        raise ValueError("block size must be positive")
    if n <= DIRECT_BLOCK:
        return _interval_homology(n)
    ranks = [0] * n
    ranks[n - 1] = abs(mobius_partition_lattice(n))
    return GradedRanks(ranks)


def _warm_blocks(sizes) -> None:
    missing = sorted(s for s in set(sizes) if s <= DIRECT_BLOCK and s not in _warm)
    if len(missing) > 1 and thread_count() > 1:
        with ProcessPoolExecutor(max_workers=min(thread_count(), len(missing))) as pool:
            for s, h in zip(missing, pool.map(_interval_homology, missing)):
                _warm[s] = h
    for s in missing:
        _warm.setdefault(s, block_homology(s))


_warm: dict[int, GradedRanks] = {}


def _block(n: int) -> GradedRanks:
    return _warm[n] if n in _warm else block_homology(n)


@lru_cache(maxsize=None)
def _product_by_shape(shape: tuple[int, ...]) -> GradedRanks:
    _warm_blocks(shape)
    out = GradedRanks((1,))
    for size in shape:
        out = graded_convolution(out, _block(size))
    return out


def t_homology(p: SetPartition, method: str = "auto") -> GradedRanks:
    """Betti numbers of T_Λ.  ``auto`` takes the pair route up to
    ``DIRECT_SUPPORT`` points and the product route beyond."""
    if len(p) == 0:
        raise ValueError("partition of the empty set has no T")
    if method == "auto":
        method = "pair" if len(p) <= DIRECT_SUPPORT else "product"
    if method == "pair":
        return _pair_homology(p)
    if method == "interval":
        return betti(interval_relative_complex(refinement_poset(p)))
    if method == "product":
        return _product_by_shape(p.shape())
    raise ValueError(f"unknown method {method!r}")


def kunneth_check(p: SetPartition) -> bool:
    """T_Λ against the graded tensor of its blocks, both computed independently."""
    whole = t_homology(p)
    smash = GradedRanks((1,))
    for b in p.blocks:
        smash = graded_convolution(smash, t_homology(SetPartition((b,))))
    return whole == smash


# ---------------------------------------------------------------------------
# layer tables


@dataclass(frozen=True)
class LayerRow:
    i: int
    degree: int
    rank: int


@dataclass(frozen=True)
class LayerTable:
    k: int
    d: int
    rows: tuple[LayerRow, ...]
    reduced: bool = False

    def ranks(self) -> list[int]:
        return [r.rank for r in self.rows]

    def by_degree(self) -> GradedRanks:
        out = [0] * ((self.k - 1) * (self.d - 1) + 1)
        for r in self.rows:
            out[r.degree] += r.rank
        return GradedRanks(out)

    def first_nonzero(self) -> LayerRow | None:
        return next((r for r in self.rows if r.rank), None)

    def to_json(self) -> dict:
        return {
            "schema": LAYER_SCHEMA,
            "k": self.k,
            "d": self.d,
            "reduced": self.reduced,
            "rows": [{"k": self.k, "d": self.d, "i": r.i, "degree": r.degree, "rank": r.rank} for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "d", "i", "degree", "rank"])
        for r in self.rows:
            w.writerow([self.k, self.d, r.i, r.degree, r.rank])
        return buf.getvalue()


@lru_cache(maxsize=None)
def _layer_ranks(k: int, irreducible_only: bool) -> tuple[int, ...]:
    ranks = [0] * k
    shapes: dict[tuple[int, ...], int] = {}
    for p in enumerate_partitions(k):
        if irreducible_only and not p.is_irreducible():
            continue
        s = p.shape()
        shapes[s] = shapes.get(s, 0) + 1
    _warm_blocks({b for s in shapes for b in s})
    for s, count in shapes.items():
        i = k - len(s)
        h = _product_by_shape(s)
        if sum(h) != h[i]:
            raise ArithmeticError(f"T for shape {s} is not concentrated in degree {i}: {h}")
        ranks[i] += count * h[i]
    return tuple(ranks)


def _check_kd(k: int, d: int, k_min: int) -> None:
    if k < k_min:
        raise ValueError(f"k must be at least {k_min}")
    if d < 2:
        raise ValueError("d must be at least 2")


def layer_table(k: int, d: int) -> LayerTable:
    _check_kd(k, d, 1)
    rows = tuple(LayerRow(i, i * (d - 1), r) for i, r in enumerate(_layer_ranks(k, False)))
    return LayerTable(k, d, rows)


def reduced_layer_table(k: int, d: int) -> LayerTable:
    _check_kd(k, d, 2)
    rows = tuple(LayerRow(i, i * (d - 1), r) for i, r in enumerate(_layer_ranks(k, True)))
    return LayerTable(k, d, rows, reduced=True)


def connectivity(k: int, d: int) -> int:
    _check_kd(k, d, 2)
    return -(-k // 2) * (d - 1) - 1


# ---------------------------------------------------------------------------
# oracle and collapse


@dataclass(frozen=True)
class PoincareOracle:
    k: int
    d: int
    coefficients: tuple[int, ...]  # indexed by degree

    def as_graded(self) -> GradedRanks:
        return GradedRanks(self.coefficients)


def poincare_oracle(k: int, d: int) -> PoincareOracle:
    """Coefficients of Π_{j=1}^{k-1} (1 + j t^{d-1})."""
    _check_kd(k, d, 1)
    step = d - 1
    coeffs = [1]
    for j in range(1, k):
        nxt = coeffs + [0] * step
        for deg, c in enumerate(coeffs):
            nxt[deg + step] += j * c
        coeffs = nxt
    return PoincareOracle(k, d, tuple(coeffs))


@dataclass(frozen=True)
class CollapseVerdict:
    k: int
    d: int
    passed: bool
    layers: tuple[int, ...]
    oracle: tuple[int, ...]
    diff: tuple[tuple[int, int, int], ...] = field(default=())  # (degree, layer rank, oracle rank)

    def to_json(self) -> dict:
        return {
            "schema": "parcalc.collapse/1",
            "k": self.k,
            "d": self.d,
            "computation": {"layers": list(self.layers), "oracle": list(self.oracle)},
            "verdict": "pass" if self.passed else "fail",
            "diff": [{"degree": g, "layers": a, "oracle": b} for g, a, b in self.diff],
        }


def collapse_check(k: int, d: int, table: LayerTable | None = None) -> CollapseVerdict:
    """Layer ranks, read by degree, against the oracle polynomial."""
    if table is None:
        table = layer_table(k, d)
    lhs = table.by_degree()
    rhs = poincare_oracle(k, d).as_graded()
    top = max(len(lhs), len(rhs))
    diff = tuple((g, lhs[g], rhs[g]) for g in range(top) if lhs[g] != rhs[g])
    return CollapseVerdict(k, d, not diff, tuple(lhs[g] for g in range(top)), tuple(rhs[g] for g in range(top)), diff)
