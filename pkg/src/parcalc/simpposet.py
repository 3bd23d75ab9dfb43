"""Finite posets, order complexes and relative simplicial homology."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .chaincx import ChainComplex, GradedRanks, betti
from .exactla import RatMatrix

__all__ = [
    "FinitePoset",
    "SimplicialComplex",
    "SimplicialPair",
    "order_complex",
    "boundary_subcomplex",
    "chain_complex",
    "relative_chain_complex",
    "relative_homology",
    "interval_relative_complex",
    "poset_product",
    "complex_to_json",
]


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class FinitePoset:
    """Elements plus the strict order as a set of index pairs ``(i, j)``
    meaning ``elements[i] < elements[j]``."""

    elements: tuple
    less: frozenset

    def __post_init__(self):
        n = len(self.elements)
        for i, j in self.less:
            if not (0 <= i < n and 0 <= j < n):
                raise PosetError(f"relation ({i}, {j}) out of range")
            if i == j:
                raise PosetError("strict order must be irreflexive")
            if (j, i) in self.less:
                raise PosetError("strict order must be antisymmetric")
        ups = self._up_sets()
        for i in range(n):
            for j in ups[i]:
                if not ups[j] <= ups[i]:
                    raise PosetError("strict order must be transitive")

    @classmethod
    def from_relation(cls, elements: Iterable, lt: Callable[[object, object], bool]) -> "FinitePoset":
        elems = tuple(elements)
        less = frozenset((i, j) for i, a in enumerate(elems) for j, b in enumerate(elems) if i != j and lt(a, b))
        return cls(elems, less)

    @classmethod
    def from_covers(cls, elements: Iterable, covers: Iterable[tuple[int, int]]) -> "FinitePoset":
        """Transitive closure of the given index pairs."""
        elems = tuple(elements)
        up = {i: set() for i in range(len(elems))}
        for i, j in covers:
            up[i].add(j)
        changed = True
        while changed:
            changed = False
            for i in up:
                extra = set()
                for j in up[i]:
                    extra |= up[j]
                if not extra <= up[i]:
                    up[i] |= extra
                    changed = True
        return cls(elems, frozenset((i, j) for i in up for j in up[i]))

    def __len__(self):
        return len(self.elements)

    def _up_sets(self) -> list[set[int]]:
        ups = [set() for _ in self.elements]
        for i, j in self.less:
            ups[i].add(j)
        return ups

    def up_sets(self) -> list[tuple[int, ...]]:
        return [tuple(sorted(u)) for u in self._up_sets()]

    def lt(self, i: int, j: int) -> bool:
        return (i, j) in self.less

    def leq(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.less

    def minimum(self) -> int | None:
        n = len(self.elements)
        for i in range(n):
            if all(self.leq(i, j) for j in range(n)):
                return i
        return None

    def maximum(self) -> int | None:
        n = len(self.elements)
        for i in range(n):
            if all(self.leq(j, i) for j in range(n)):
                return i
        return None

    def index(self, element) -> int:
        return self.elements.index(element)

    def is_isomorphic_via(self, other: "FinitePoset", phi: Callable[[object], object]) -> bool:
        """True when ``phi`` is a bijection of elements preserving and
        reflecting the order."""
        if len(self) != len(other):
            return False
        pos = {e: k for k, e in enumerate(other.elements)}
        try:
            image = [pos[phi(e)] for e in self.elements]
        except KeyError:
            return False
        if len(set(image)) != len(image):
            return False
        mapped = frozenset((image[i], image[j]) for i, j in self.less)
        return mapped == other.less


def poset_product(posets: Sequence[FinitePoset]) -> FinitePoset:
    """Cartesian product with the componentwise order."""
    elems = [()]
    for p in posets:
        elems = [e + (x,) for e in elems for x in range(len(p))]
    index = {e: k for k, e in enumerate(elems)}

    def lt(a, b):
        return a != b and all(p.leq(x, y) for p, x, y in zip(posets, a, b))

    less = frozenset((index[a], index[b]) for a in elems for b in elems if lt(a, b))
    labels = tuple(tuple(p.elements[x] for p, x in zip(posets, e)) for e in elems)
    return FinitePoset(labels, less)


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward closed family of simplices; each simplex is a sorted tuple of
    vertex indices.  ``simplices[k]`` lists the k-simplices in the global
    order (dimension, then lexicographic)."""

    vertices: tuple
    simplices: tuple

    @classmethod
    def from_simplices(cls, vertices: Sequence, simplices: Iterable[Iterable[int]], close: bool = True) -> "SimplicialComplex":
        faces = {tuple(sorted(s)) for s in simplices}
        faces.discard(())
        if close:
            stack = list(faces)
            while stack:
                s = stack.pop()
                if len(s) > 1:
                    for k in range(len(s)):
                        f = s[:k] + s[k + 1:]
                        if f not in faces:
                            faces.add(f)
                            stack.append(f)
        top = max((len(s) for s in faces), default=0)
        by_dim = tuple(tuple(sorted(s for s in faces if len(s) == k + 1)) for k in range(top))
        return cls(tuple(vertices), by_dim)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def count(self, k: int) -> int:
        return len(self.simplices[k]) if 0 <= k < len(self.simplices) else 0

    def all_simplices(self) -> set:
        return {s for level in self.simplices for s in level}

    def is_closed(self) -> bool:
        faces = self.all_simplices()
        for s in faces:
            if len(s) > 1 and any(s[:k] + s[k + 1:] not in faces for k in range(len(s))):
                return False
        return True

    def facets(self) -> list[tuple]:
        faces = self.all_simplices()
        cofaces = set()
        for s in faces:
            for k in range(len(s)):
                cofaces.add(s[:k] + s[k + 1:])
        return sorted((s for s in faces if s not in cofaces), key=lambda s: (len(s), s))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(level) for k, level in enumerate(self.simplices))


@dataclass(frozen=True)
class SimplicialPair:
    total: SimplicialComplex
    sub: SimplicialComplex

    def __post_init__(self):
        if self.sub.vertices != self.total.vertices:
            raise ValueError("subcomplex must share the vertex indexing of the total complex")
        if not self.sub.all_simplices() <= self.total.all_simplices():
            raise ValueError("sub is not a subcomplex of total")


def _chains(poset: FinitePoset):
    ups = poset.up_sets()
    out = []

    def extend(chain):
        out.append(tuple(chain))
        for j in ups[chain[-1]]:
            chain.append(j)
            extend(chain)
            chain.pop()

    for i in range(len(poset)):
        extend([i])
    return out


def order_complex(p: FinitePoset) -> SimplicialComplex:
    """Nerve of ``p``: one simplex per strictly increasing chain."""
    chains = _chains(p)
    return SimplicialComplex.from_simplices(p.elements, (sorted(c) for c in chains), close=False)


def boundary_subcomplex(p: FinitePoset) -> SimplicialComplex:
    """Chains that do not contain both the minimum and the maximum."""
    lo, hi = p.minimum(), p.maximum()
    if lo is None or hi is None:
        raise PosetError("poset needs a unique minimum and a unique maximum")
    chains = _chains(p)
    keep = [sorted(c) for c in chains if not (lo in c and hi in c)]
    return SimplicialComplex.from_simplices(p.elements, keep, close=False)


def _boundary_matrix(cells_hi, cells_lo_index, nlo):
    rows = [{} for _ in range(nlo)]
    for col, s in enumerate(cells_hi):
        for k in range(len(s)):
            r = cells_lo_index.get(s[:k] + s[k + 1:])
            if r is not None:
                rows[r][col] = 1 if k % 2 == 0 else -1
    return RatMatrix(nlo, len(cells_hi), rows)


def relative_chain_complex(total: SimplicialComplex, sub: SimplicialComplex | None = None) -> ChainComplex:
    """Quotient chains C_*(total) / C_*(sub) on the simplices of total not in sub."""
    excluded = sub.all_simplices() if sub is not None else set()
    levels = [[s for s in level if s not in excluded] for level in total.simplices]
    if not levels:
        return ChainComplex.zero()
    index = [{s: i for i, s in enumerate(level)} for level in levels]
    dims = tuple(len(level) for level in levels)
    diffs = tuple(_boundary_matrix(levels[k], index[k - 1], dims[k - 1]) for k in range(1, len(levels)))
    return ChainComplex(dims, diffs)


def chain_complex(x: SimplicialComplex) -> ChainComplex:
    return relative_chain_complex(x, None)


def interval_relative_complex(p: FinitePoset) -> ChainComplex:
    """Relative chains of (order_complex(p), boundary_subcomplex(p)) built
    directly from the chains running from the minimum to the maximum.

    Same complex as ``relative_chain_complex`` on the pair, without
    materializing the (much larger) boundary subcomplex.
    """
    lo, hi = p.minimum(), p.maximum()
    if lo is None or hi is None:
        raise PosetError("poset needs a unique minimum and a unique maximum")
    if lo == hi:
        return ChainComplex((1,))
    ups = p.up_sets()
    levels: dict[int, list] = {}

    def extend(chain):
        last = chain[-1]
        if last == hi:
            s = tuple(sorted(chain))
            levels.setdefault(len(s) - 1, []).append(s)
            return
        for j in ups[last]:
            chain.append(j)
            extend(chain)
            chain.pop()

    extend([lo])
    top = max(levels)
    cells = [sorted(levels.get(k, [])) for k in range(top + 1)]
    index = [{s: i for i, s in enumerate(level)} for level in cells]
    dims = tuple(len(level) for level in cells)
    diffs = tuple(_boundary_matrix(cells[k], index[k - 1], dims[k - 1]) for k in range(1, top + 1))
    return ChainComplex(dims, diffs)


def relative_homology(pair: SimplicialPair | tuple) -> GradedRanks:
    if isinstance(pair, tuple):
        total, sub = pair
    else:
        total, sub = pair.total, pair.sub
    return betti(relative_chain_complex(total, sub))


def _vertex_label(v) -> str:
    if hasattr(v, "to_text"):
        return v.to_text()
    if isinstance(v, tuple):
        return "(" + ";".join(_vertex_label(x) for x in v) + ")"
    return str(v)


def complex_to_json(x: SimplicialComplex) -> dict:
    return {
        "vertices": [_vertex_label(v) for v in x.vertices],
        "facets": [list(f) for f in x.facets()],
        "f_vector": [len(level) for level in x.simplices],
    }
