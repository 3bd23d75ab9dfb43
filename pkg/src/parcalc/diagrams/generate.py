"""Random diagrams that split as sums of degree-concentrated pieces.

Each piece is a representation of the shape by coordinate inclusions or
projections (dimensions monotone along the arrows, so composites agree),
disguised by random changes of basis and padded with contractible pairs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..chaincx import ChainComplex, ChainMap, betti
from ..exactla import RatMatrix, inverse, rank
from ..simpposet import FinitePoset
from .category import FiniteCategory
from .diagram import ChainDiagram, DiagramMap, SplitData, _ends, diagram_sum

__all__ = ["random_poset_shape", "random_split_diagram", "corrupt_split", "GeneratedSplit"]

CORRUPTIONS = ("wrong_degree", "not_natural", "not_quasi_iso")


def random_poset_shape(rng: random.Random, max_objects: int = 5, density: float = 0.4) -> FiniteCategory:
    n = rng.randint(1, max_objects)
    covers = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return FiniteCategory.from_poset(FinitePoset.from_covers(tuple(f"x{i}" for i in range(n)), covers))


def _invertible(rng: random.Random, n: int) -> RatMatrix:
    while True:
        m = RatMatrix.from_rows([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)], n)
        if rank(m) == n:
            return m


def _coordinate_map(rows: int, cols: int) -> RatMatrix:
    """Inclusion of the first coordinates or projection onto them."""
    return RatMatrix.from_entries(rows, cols, {(i, i): 1 for i in range(min(rows, cols))})


def _monotone_dims(rng: random.Random, shape: FiniteCategory, variance: str, grow: bool, high: int) -> list[int]:
    """Dimensions weakly monotone along every map of the diagram."""
    n = shape.n_objects
    before = {x: [] for x in range(n)}  # objects whose dimension must not exceed x's
    for a in shape.non_identity_arrows():
        s, t = _ends(shape, a, variance)
        if grow:
            before[t].append(s)
        else:
            before[s].append(t)
    dims: dict[int, int] = {}
    pending = list(range(n))
    while pending:
        for x in list(pending):
            if all(y in dims for y in before[x]):
                floor = max((dims[y] for y in before[x]), default=1)
                dims[x] = min(high, floor + rng.randint(0, 1))
                pending.remove(x)
    return [dims[x] for x in range(n)]


def _conjugate(rng, values, maps, shape, variance):
    """Random degreewise change of basis, applied consistently."""
    q = [[_invertible(rng, v.dim(i)) for i in range(v.top_degree + 1)] for v in values]
    qi = [[inverse(m) for m in row] for row in q]
    new_values = []
    for x, v in enumerate(values):
        diffs = tuple(q[x][i - 1] @ v.d(i) @ qi[x][i] for i in range(1, v.top_degree + 1))
        new_values.append(ChainComplex(v.dims, diffs))
    new_maps = []
    for a, m in enumerate(maps):
        s, t = _ends(shape, a, variance)
        top = max(values[s].top_degree, values[t].top_degree)
        blocks = []
        for i in range(top + 1):
            left = q[t][i] if i <= values[t].top_degree else RatMatrix.identity(0)
            right = qi[s][i] if i <= values[s].top_degree else RatMatrix.identity(0)
            blocks.append(left @ m[i] @ right)
        new_maps.append(ChainMap(new_values[s], new_values[t], tuple(blocks)))
    return new_values, new_maps, q


def _pair_complex(top: int, pairs: list[tuple[int, int]], hom_degree: int | None, hom_dim: int):
    """Direct sum of H (dim hom_dim in hom_degree) and contractible pairs
    Q^k in degree j -> Q^k in degree j-1, for (j, k) in pairs.

    Returns the complex and, per degree, the slices (kind, start, size)."""
    dims = [0] * (top + 1)
    slices: list[list] = [[] for _ in range(top + 1)]
    if hom_degree is not None:
        slices[hom_degree].append(("h", 0, hom_dim))
        dims[hom_degree] += hom_dim
    for idx, (j, k) in enumerate(pairs):
        slices[j].append((("up", idx), dims[j], k))
        dims[j] += k
        slices[j - 1].append((("down", idx), dims[j - 1], k))
        dims[j - 1] += k
    diffs = []
    for i in range(1, top + 1):
        entries = {}
        for kind, start, size in slices[i]:
            if kind != "h" and kind[0] == "up":
                lo = next(st for kd, st, _ in slices[i - 1] if kd == ("down", kind[1]))
                for r in range(size):
                    entries[(lo + r, start + r)] = 1
        diffs.append(RatMatrix.from_entries(dims[i - 1], dims[i], entries))
    return ChainComplex(tuple(dims), tuple(diffs)), slices


def _build_piece(rng, shape, variance, n, hom_dims, pairs, pair_identity):
    top = max([n] + [j for j, _ in pairs])
    cx = []
    sl = []
    for x in range(shape.n_objects):
        c, s = _pair_complex(top, pairs, n, hom_dims[x])
        cx.append(c)
        sl.append(s)
    maps = []
    for a in range(len(shape.arrows)):
        s, t = _ends(shape, a, variance)
        if shape.is_identity(a):
            maps.append(ChainMap.identity(cx[s]))
            continue
        blocks = []
        for i in range(top + 1):
            entries = {}
            for (kind, ss, size), (_, ts, tsize) in zip(sl[s][i], sl[t][i]):
                if kind == "h":
                    for r in range(min(size, tsize)):
                        entries[(ts + r, ss + r)] = 1
                elif pair_identity:
                    for r in range(size):
                        entries[(ts + r, ss + r)] = 1
            blocks.append(RatMatrix.from_entries(cx[t].dim(i), cx[s].dim(i), entries))
        maps.append(ChainMap(cx[s], cx[t], tuple(blocks)))
    values, maps, _ = _conjugate(rng, cx, maps, shape, variance)
    return ChainDiagram(shape, tuple(values), tuple(maps), variance)


def _random_pairs(rng, n_lo: int, n_hi: int) -> list[tuple[int, int]]:
    out = []
    for _ in range(rng.randint(0, 2)):
        j = rng.randint(max(1, n_lo), n_hi)
        out.append((j, rng.randint(1, 2)))
    return out


@dataclass(frozen=True, eq=False)
class GeneratedSplit:
    diagram: ChainDiagram
    split: SplitData
    corruption: str | None = None


def random_split_diagram(
    rng: random.Random,
    shape: FiniteCategory | None = None,
    variance: str | None = None,
    max_degree: int = 3,
) -> GeneratedSplit:
    if shape is None:
        shape = random_poset_shape(rng)
    if variance is None:
        variance = rng.choice(("co", "contra"))
    degrees = sorted(rng.sample(range(max_degree + 1), rng.randint(1, min(3, max_degree + 1))))
    pieces = []
    for n in degrees:
        dims = _monotone_dims(rng, shape, variance, rng.random() < 0.5, high=3)
        pairs = _random_pairs(rng, n, n + 1)
        pieces.append((n, _build_piece(rng, shape, variance, n, dims, pairs, rng.random() < 0.5)))
    summed = diagram_sum([g for _, g in pieces])
    top = max(v.top_degree for v in summed.values)
    extra_pairs = _random_pairs(rng, 1, top + 1)
    extra = _build_piece(rng, shape, variance, 0, [0] * shape.n_objects, extra_pairs, rng.random() < 0.5)
    whole = diagram_sum([g for _, g in pieces] + [extra])
    values, maps, q = _conjugate(rng, list(whole.values), list(whole.maps), shape, variance)
    f = ChainDiagram(shape, tuple(values), tuple(maps), variance)
    comps = []
    for x in range(shape.n_objects):
        src, tgt = summed.values[x], f.values[x]
        blocks = []
        for i in range(tgt.top_degree + 1):
            incl = _coordinate_map(tgt.dim(i), src.dim(i))
            blocks.append(q[x][i] @ incl)
        comps.append(ChainMap(src, tgt, tuple(blocks)))
    return GeneratedSplit(f, SplitData(tuple(pieces), DiagramMap(summed, f, tuple(comps))))


def corrupt_split(rng: random.Random, g: GeneratedSplit, kind: str | None = None) -> GeneratedSplit | None:
    """Break the splitting data in one of three ways; None when the chosen
    corruption cannot be expressed on this instance."""
    kind = kind or rng.choice(CORRUPTIONS)
    split, f = g.split, g.diagram
    inc = split.inclusion
    if kind == "wrong_degree":
        live = [k for k, (n, piece) in enumerate(split.summands) if any(betti(v)[n] for v in piece.values)]
        if not live:
            return None
        k = rng.choice(live)
        pieces = list(split.summands)
        n, piece = pieces[k]
        pieces[k] = (n + 1, piece)
        return GeneratedSplit(f, SplitData(tuple(pieces), inc), kind)
    if kind == "not_natural":
        objs = list(range(f.shape.n_objects))
        rng.shuffle(objs)
        for x in objs:
            comps = list(inc.components)
            c = comps[x]
            comps[x] = ChainMap(c.source, c.target, tuple(b.scale(2) for b in c.blocks))
            bad = DiagramMap(inc.source, inc.target, tuple(comps))
            if not bad.is_natural():
                return GeneratedSplit(f, SplitData(split.summands, bad), kind)
        return None
    if kind == "not_quasi_iso":
        live = [k for k, (n, piece) in enumerate(split.summands) if any(betti(v)[n] for v in piece.values)]
        if not live:
            return None
        k = rng.choice(live)
        comps = []
        for x, c in enumerate(inc.components):
            blocks = []
            for i in range(c.source.top_degree + 1):
                sizes = [piece.values[x].dim(i) for _, piece in split.summands]
                start = sum(sizes[:k])
                keep = [j for j in range(c.source.dim(i)) if not start <= j < start + sizes[k]]
                proj = RatMatrix.from_entries(c.source.dim(i), c.source.dim(i), {(j, j): 1 for j in keep})
                blocks.append(c[i] @ proj)
            comps.append(ChainMap(c.source, c.target, tuple(blocks)))
        return GeneratedSplit(f, SplitData(split.summands, DiagramMap(inc.source, inc.target, tuple(comps))), kind)
    raise ValueError(f"unknown corruption {kind!r}")
