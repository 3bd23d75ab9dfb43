"""Set partitions, excess, refinement posets and the category E_k.

A partition is stored canonically: each block sorted, blocks ordered by
their minimum.  Supports may hold ints or strings; mixed supports sort ints
before strings.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .exactla import RatMatrix, kernel_basis, rank, solve_consistent
from .simpposet import FinitePoset

__all__ = [
    "SetPartition",
    "Premorphism",
    "CylinderGraph",
    "EkCategory",
    "PartitionSyntaxError",
    "parse_partition",
    "parse_map",
    "excess",
    "is_irreducible",
    "enumerate_partitions",
    "enumerate_partitions_of",
    "enumerate_by_excess",
    "refinements",
    "refinement_poset",
    "image_partition",
    "relative_h1",
    "relative_h1_rank",
    "induced_h1_map",
    "is_morphism",
    "classify_map",
    "build_ek",
]


class PartitionSyntaxError(ValueError):
    pass


def _key(x):
    return (isinstance(x, str), x)


@dataclass(frozen=True)
class SetPartition:
    blocks: tuple[tuple[Hashable, ...], ...]

    def __post_init__(self):
        blocks = [tuple(sorted(b, key=_key)) for b in self.blocks]
        if any(not b for b in blocks):
            raise ValueError("blocks must be nonempty")
        seen = set()
        for b in blocks:
            for x in b:
                if x in seen:
                    raise ValueError(f"element {x!r} occurs in two blocks")
                seen.add(x)
        blocks.sort(key=lambda b: _key(b[0]))
        object.__setattr__(self, "blocks", tuple(blocks))

    @classmethod
    def discrete(cls, support: Iterable) -> "SetPartition":
        return cls(tuple((x,) for x in support))

    @classmethod
    def one_block(cls, support: Iterable) -> "SetPartition":
        s = tuple(support)
        return cls((s,) if s else ())

    @classmethod
    def from_rgs(cls, rgs: Sequence[int], support: Sequence | None = None) -> "SetPartition":
        if support is None:
            support = range(1, len(rgs) + 1)
        groups: dict[int, list] = {}
        for x, g in zip(support, rgs):
            groups.setdefault(g, []).append(x)
        return cls(tuple(tuple(v) for v in groups.values()))

    @property
    def support(self) -> tuple:
        return tuple(sorted((x for b in self.blocks for x in b), key=_key))

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def __len__(self):
        return sum(len(b) for b in self.blocks)

    def block_index(self) -> dict:
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def excess(self) -> int:
        return len(self) - len(self.blocks)

    def is_irreducible(self) -> bool:
        return all(len(b) >= 2 for b in self.blocks)

    def refines(self, other: "SetPartition") -> bool:
        """True when every block of ``self`` lies inside a block of ``other``."""
        if set(self.support) != set(other.support):
            return False
        where = other.block_index()
        return all(len({where[x] for x in b}) == 1 for b in self.blocks)

    def restrict(self, subset: Iterable) -> "SetPartition":
        sub = set(subset)
        return SetPartition(tuple(tuple(x for x in b if x in sub) for b in self.blocks if any(x in sub for x in b)))

    def shape(self) -> tuple[int, ...]:
        return tuple(sorted((len(b) for b in self.blocks), reverse=True))

    def rgs(self) -> tuple[int, ...]:
        where = self.block_index()
        return tuple(where[x] for x in self.support)

    def to_text(self) -> str:
        return "|".join(",".join(str(x) for x in b) for b in self.blocks)

    def __str__(self):
        return "".join("(" + "".join(str(x) for x in b) + ")" for b in self.blocks)


def _atom(text: str):
    text = text.strip()
    if not text:
        raise PartitionSyntaxError("empty element")
    try:
        return int(text)
    except ValueError:
        return text


def parse_partition(text: str) -> SetPartition:
    """Parse ``"1,2|3,4"``."""
    text = text.strip()
    if not text:
        return SetPartition(())
    try:
        return SetPartition(tuple(tuple(_atom(x) for x in b.split(",")) for b in text.split("|")))
    except ValueError as e:
        raise PartitionSyntaxError(f"bad partition {text!r}: {e}") from None


def parse_map(text: str) -> dict:
    """Parse ``"1:a,2:a,3:b"``."""
    out = {}
    for item in text.split(","):
        if ":" not in item:
            raise PartitionSyntaxError(f"bad map entry {item!r}; expected key:value")
        k, v = item.split(":", 1)
        k = _atom(k)
        if k in out:
            raise PartitionSyntaxError(f"element {k!r} mapped twice")
        out[k] = _atom(v)
    return out


def excess(p: SetPartition) -> int:
    return p.excess()


def is_irreducible(p: SetPartition) -> bool:
    return p.is_irreducible()


# ---------------------------------------------------------------------------
# enumeration


def _rgs(n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    s = [0] * n

    def rec(i, m):
        if i == n:
            yield tuple(s)
            return
        for v in range(m + 2):
            s[i] = v
            yield from rec(i + 1, max(m, v))

    s[0] = 0
    yield from rec(1, 0)


def enumerate_partitions_of(support: Sequence) -> list[SetPartition]:
    support = tuple(support)
    return [SetPartition.from_rgs(r, support) for r in _rgs(len(support))]


def enumerate_partitions(n: int) -> list[SetPartition]:
    """All partitions of {1..n} in restricted-growth-string order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return enumerate_partitions_of(range(1, n + 1))


def enumerate_by_excess(n: int, i: int) -> list[SetPartition]:
    return [p for p in enumerate_partitions(n) if p.n_blocks == n - i]


def refinements(p: SetPartition) -> list[SetPartition]:
    per_block = [enumerate_partitions_of(b) for b in p.blocks]
    out = []
    for combo in itertools.product(*per_block):
        out.append(SetPartition(tuple(b for q in combo for b in q.blocks)))
    return out


def refinement_poset(p: SetPartition) -> FinitePoset:
    """Refinements of ``p``; finer is bigger.  Elements are listed by number
    of blocks, so ``p`` comes first and the discrete partition last."""
    elems = sorted(refinements(p), key=lambda q: q.n_blocks)
    where = [q.block_index() for q in elems]
    less = set()
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            # b strictly finer than a
            if b.n_blocks > a.n_blocks and all(len({where[i][x] for x in blk}) == 1 for blk in b.blocks):
                less.add((i, j))
    return FinitePoset(tuple(elems), frozenset(less))


# ---------------------------------------------------------------------------
# maps and premorphisms


def image_partition(f: Mapping, p: SetPartition) -> SetPartition:
    """Partition of f(S(p)) generated by f(a) ~ f(b) for a ~ b in p."""
    missing = [x for x in p.support if x not in f]
    if missing:
        raise ValueError(f"map is not defined on {missing}")
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in p.support:
        parent.setdefault(f[x], f[x])
    for b in p.blocks:
        r = find(f[b[0]])
        for x in b[1:]:
            s = find(f[x])
            if s != r:
                parent[s] = r
    groups: dict = {}
    for y in parent:
        groups.setdefault(find(y), []).append(y)
    return SetPartition(tuple(tuple(g) for g in groups.values()))


@dataclass(frozen=True)
class Premorphism:
    source: SetPartition
    target: SetPartition
    mapping: tuple  # sorted (x, f(x)) pairs

    def __post_init__(self):
        m = dict(self.mapping)
        object.__setattr__(self, "mapping", tuple(sorted(m.items(), key=lambda kv: _key(kv[0]))))
        if set(m) != set(self.source.support):
            raise ValueError("map must be defined exactly on the source support")
        if set(m.values()) != set(self.target.support):
            raise ValueError("map must be a surjection onto the target support")
        if image_partition(m, self.source) != self.target:
            raise ValueError("target is not the partition generated by the image of the source")

    @classmethod
    def from_map(cls, source: SetPartition, f: Mapping) -> "Premorphism":
        return cls(source, image_partition(f, source), tuple(f.items()))

    def as_dict(self) -> dict:
        return dict(self.mapping)

    def compose(self, inner: "Premorphism") -> "Premorphism":
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise ValueError("premorphisms are not composable")
        f, g = inner.as_dict(), self.as_dict()
        return Premorphism(inner.source, self.target, tuple((x, g[f[x]]) for x in inner.source.support))


@dataclass(frozen=True)
class CylinderGraph:
    """Bipartite graph joining each support element to its block."""

    partition: SetPartition

    @property
    def vertices(self) -> list:
        return [("s", x) for x in self.partition.support] + [("c", i) for i in range(self.partition.n_blocks)]

    @property
    def edges(self) -> list:
        where = self.partition.block_index()
        return [(("s", x), ("c", where[x])) for x in self.partition.support]

    def component_count(self) -> int:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        return len({find(v) for v in self.vertices})

    def relative_boundary(self) -> RatMatrix:
        """Edge chains -> block-vertex chains, with support vertices killed.

        The edge from s to its block has boundary [s] - s; modulo the support
        only the block vertex survives.
        """
        p = self.partition
        where = p.block_index()
        return RatMatrix.from_entries(p.n_blocks, len(p), {(where[x], j): 1 for j, x in enumerate(p.support)})


@lru_cache(maxsize=None)
def relative_h1(p: SetPartition) -> tuple[tuple, ...]:
    """Basis of H_1(C_p, S(p)), as vectors indexed by the sorted support."""
    return tuple(kernel_basis(CylinderGraph(p).relative_boundary()))


def relative_h1_rank(p: SetPartition) -> int:
    return len(relative_h1(p))


def induced_h1_map(a: Premorphism) -> RatMatrix:
    """alpha_* on relative H_1, in the bases returned by :func:`relative_h1`."""
    src, tgt = a.source, a.target
    f = a.as_dict()
    tpos = {x: i for i, x in enumerate(tgt.support)}
    src_basis = relative_h1(src)
    tgt_basis = relative_h1(tgt)
    tmat = RatMatrix.from_columns(list(tgt_basis), len(tgt))
    cols = []
    for z in src_basis:
        img = [0] * len(tgt)
        for x, v in zip(src.support, z):
            if v:
                img[tpos[f[x]]] += v
        x = solve_consistent(tmat, img)
        if x is None:
            raise ValueError("image of a relative cycle is not a relative cycle")
        cols.append(x)
    return RatMatrix.from_columns(cols, len(tgt_basis))


def is_morphism(a: Premorphism) -> bool:
    m = induced_h1_map(a)
    return m.nrows == m.ncols and rank(m) == m.nrows


def classify_map(p: SetPartition, f: Mapping) -> str:
    """'good' when p -> f(p) is a morphism, else 'bad'."""
    return "good" if is_morphism(Premorphism.from_map(p, f)) else "bad"


# ---------------------------------------------------------------------------
# E_k


@dataclass(frozen=True)
class EkCategory:
    excess: int
    objects: tuple[SetPartition, ...]
    morphisms: tuple[Premorphism, ...]
    composition_checked: int = 0

    def hom(self, a: SetPartition, b: SetPartition) -> list[Premorphism]:
        return [m for m in self.morphisms if m.source == a and m.target == b]


def _surjections(m: int, n: int) -> Iterator[tuple[int, ...]]:
    for f in itertools.product(range(1, n + 1), repeat=m):
        if len(set(f)) == n:
            yield f


def build_ek(k: int, check_composition: bool = True, budget: int = 200_000, seed: int = 0) -> EkCategory:
    """Irreducible excess-k partitions of {1..m}, k+1 <= m <= 2k, with all
    surjections that induce an isomorphism on relative H_1.

    Composition closure is checked on every composable pair when there are at
    most ``budget`` of them, otherwise on ``budget`` pairs drawn with ``seed``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    objects = []
    for m in range(k + 1, 2 * k + 1):
        objects.extend(p for p in enumerate_by_excess(m, k) if p.is_irreducible())
    by_size: dict[int, list[SetPartition]] = {}
    for p in objects:
        by_size.setdefault(len(p), []).append(p)
    known = set(objects)
    morphisms = []
    for m1 in sorted(by_size):
        for m2 in sorted(by_size):
            if m2 > m1:
                continue
            for f in _surjections(m1, m2):
                fmap = {i + 1: y for i, y in enumerate(f)}
                for src in by_size[m1]:
                    tgt = image_partition(fmap, src)
                    if tgt not in known:
                        continue
                    a = Premorphism(src, tgt, tuple(fmap.items()))
                    if is_morphism(a):
                        morphisms.append(a)
    checked = 0
    if check_composition:
        morph_set = set(morphisms)
        outgoing: dict[SetPartition, list[Premorphism]] = {}
        for a in morphisms:
            outgoing.setdefault(a.source, []).append(a)
        total = sum(len(outgoing.get(a.target, ())) for a in morphisms)
        if total <= budget:
            pairs = ((a, b) for a in morphisms for b in outgoing.get(a.target, ()))
        else:
            rng = random.Random(seed)
            pairs = []
            for _ in range(budget):
                a = rng.choice(morphisms)
                pairs.append((a, rng.choice(outgoing[a.target])))
        for a, b in pairs:
            c = b.compose(a)
            if c not in morph_set:
                raise AssertionError(f"composite of morphisms is not a morphism: {c}")
            checked += 1
    return EkCategory(k, tuple(objects), tuple(morphisms), checked)
