"""Finite categories given by an explicit composition table, and functors
between them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..simpposet import FinitePoset

__all__ = ["FiniteCategory", "Functor", "CategoryError"]


class CategoryError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteCategory:
    """Objects ``0..n-1`` (with display labels) and arrows by index.

    ``arrows[a] = (src, dst)``; ``identities[x]`` is the identity arrow of x;
    ``table[(g, f)]`` is g∘f for every composable pair (dst f == src g).
    """

    labels: tuple
    arrows: tuple[tuple[int, int], ...]
    identities: tuple[int, ...]
    table: Mapping[tuple[int, int], int]

    def __post_init__(self):
        n = len(self.labels)
        if len(self.identities) != n:
            raise CategoryError("one identity arrow per object required")
        for a, (s, t) in enumerate(self.arrows):
            if not (0 <= s < n and 0 <= t < n):
                raise CategoryError(f"arrow {a} has endpoints out of range")
        for x, i in enumerate(self.identities):
            if self.arrows[i] != (x, x):
                raise CategoryError(f"identity of object {x} is not an endomorphism of it")
        for f, (s, t) in enumerate(self.arrows):
            for g in self.out_arrows(t):
                h = self.table.get((g, f))
                if h is None:
                    raise CategoryError(f"composite of {g} after {f} missing")
                if self.arrows[h] != (s, self.arrows[g][1]):
                    raise CategoryError(f"composite of {g} after {f} has wrong endpoints")
            if self.table[(self.identities[t], f)] != f or self.table[(f, self.identities[s])] != f:
                raise CategoryError(f"identity law fails for arrow {f}")
        for f, (_, t) in enumerate(self.arrows):
            for g in self.out_arrows(t):
                for h in self.out_arrows(self.arrows[g][1]):
                    if self.table[(h, self.table[(g, f)])] != self.table[(self.table[(h, g)], f)]:
                        raise CategoryError("composition is not associative")

    @classmethod
    def from_poset(cls, p: FinitePoset) -> "FiniteCategory":
        """One arrow x -> y for each x <= y; identities first, in object order."""
        n = len(p)
        arrows = [(x, x) for x in range(n)] + sorted(p.less)
        index = {a: k for k, a in enumerate(arrows)}
        table = {}
        for f, (s, t) in enumerate(arrows):
            for g, (s2, u) in enumerate(arrows):
                if s2 == t:
                    table[(g, f)] = index[(s, u)]
        return cls(tuple(p.elements), tuple(arrows), tuple(range(n)), table)

    @classmethod
    def from_generators(cls, labels: Sequence, generators: Sequence[tuple[int, int]]) -> "FiniteCategory":
        """Poset category generated by the given arrows (must be acyclic)."""
        return cls.from_poset(FinitePoset.from_covers(labels, generators))

    @property
    def n_objects(self) -> int:
        return len(self.labels)

    def out_arrows(self, x: int) -> list[int]:
        return [a for a, (s, _) in enumerate(self.arrows) if s == x]

    def hom(self, x: int, y: int) -> list[int]:
        return [a for a, st in enumerate(self.arrows) if st == (x, y)]

    def compose(self, g: int, f: int) -> int:
        return self.table[(g, f)]

    def is_identity(self, a: int) -> bool:
        return a in self.identities

    def non_identity_arrows(self) -> list[int]:
        ids = set(self.identities)
        return [a for a in range(len(self.arrows)) if a not in ids]

    def opposite(self) -> "FiniteCategory":
        arrows = tuple((t, s) for s, t in self.arrows)
        table = {(f, g): h for (g, f), h in self.table.items()}
        return FiniteCategory(self.labels, arrows, self.identities, table)

    def chains(self, p: int) -> list[tuple[int, ...]]:
        """Composable strings (f_1, ..., f_p) of non-identity arrows, f_1 first.
        For p = 0 the strings are the objects, as 1-tuples."""
        if p == 0:
            return [(x,) for x in range(self.n_objects)]
        nonid = self.non_identity_arrows()
        out = [(f,) for f in nonid]
        for _ in range(p - 1):
            out = [c + (g,) for c in out for g in nonid if self.arrows[g][0] == self.arrows[c[-1]][1]]
        return out

    def initial_objects(self) -> list[int]:
        return [x for x in range(self.n_objects) if all(len(self.hom(x, y)) == 1 for y in range(self.n_objects))]

    def terminal_objects(self) -> list[int]:
        return [y for y in range(self.n_objects) if all(len(self.hom(x, y)) == 1 for x in range(self.n_objects))]


@dataclass(frozen=True)
class Functor:
    source: FiniteCategory
    target: FiniteCategory
    on_objects: tuple[int, ...]
    on_arrows: tuple[int, ...]

    def __post_init__(self):
        s, t = self.source, self.target
        if len(self.on_objects) != s.n_objects or len(self.on_arrows) != len(s.arrows):
            raise CategoryError("functor must be defined on every object and arrow")
        for a, (x, y) in enumerate(s.arrows):
            if t.arrows[self.on_arrows[a]] != (self.on_objects[x], self.on_objects[y]):
                raise CategoryError(f"arrow {a} is sent to an arrow with the wrong endpoints")
        for x, i in enumerate(s.identities):
            if self.on_arrows[i] != t.identities[self.on_objects[x]]:
                raise CategoryError("identities must go to identities")
        for (g, f), h in s.table.items():
            if t.table[(self.on_arrows[g], self.on_arrows[f])] != self.on_arrows[h]:
                raise CategoryError("functor does not respect composition")

    @classmethod
    def identity(cls, c: FiniteCategory) -> "Functor":
        return cls(c, c, tuple(range(c.n_objects)), tuple(range(len(c.arrows))))

    @classmethod
    def between_posets(cls, source: FiniteCategory, target: FiniteCategory, objects: Sequence[int]) -> "Functor":
        """Functor of poset categories determined by a monotone object map."""
        arrows = []
        for x, y in source.arrows:
            hom = target.hom(objects[x], objects[y])
            if len(hom) != 1:
                raise CategoryError("object map is not monotone into a poset category")
            arrows.append(hom[0])
        return cls(source, target, tuple(objects), tuple(arrows))
