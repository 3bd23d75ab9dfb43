"""Diagrams of chain complexes over finite categories.

Homotopy limits are computed from the normalized cosimplicial replacement:
level p is the product, over strings x_0 -> ... -> x_p of non-identity
arrows, of the value at x_p.  The total complex puts F(x_p)_q in degree
q - p with differential d + (-1)^q δ.  Negative total degrees are dropped
(degree 0 becomes the cycles there) and reported separately.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..chaincx import (
    ChainComplex,
    ChainMap,
    GradedRanks,
    betti,
    complex_from_json,
    complex_to_json,
    direct_sum_many,
    homology_projection,
    induced_homology_map,
    is_quasi_iso,
    postnikov_inclusion,
    postnikov_kernel,
    postnikov_kernel_inclusion,
    postnikov_kernel_map,
    postnikov_map,
    postnikov_section,
)
from ..exactla import (
    RatMatrix,
    format_rational,
    kernel_basis,
    parse_rational,
    solve_consistent,
)
from ..simpposet import PosetError
from .category import CategoryError, FiniteCategory, Functor

__all__ = [
    "dumps",
    "ChainDiagram",
    "DiagramMap",
    "DiagramError",
    "TotalComplex",
    "ZigZag",
    "SplitData",
    "SplitVerdict",
    "holim",
    "holim_total",
    "holim_negative_betti",
    "homology_diagram",
    "diagram_sum",
    "restrict",
    "restrict_split",
    "formality_zigzag",
    "holim_splitting_check",
    "diagram_from_spec",
    "diagram_to_spec",
    "split_from_spec",
    "split_to_spec",
]


class DiagramError(ValueError):
    pass


def _ends(shape: FiniteCategory, a: int, variance: str) -> tuple[int, int]:
    """(domain object, codomain object) of the chain map attached to arrow a."""
    s, t = shape.arrows[a]
    return (s, t) if variance == "co" else (t, s)


@dataclass(frozen=True, eq=False)
class ChainDiagram:
    shape: FiniteCategory
    values: tuple[ChainComplex, ...]
    maps: tuple[ChainMap, ...]
    variance: str = "co"

    def __post_init__(self):
        if self.variance not in ("co", "contra"):
            raise DiagramError("variance must be 'co' or 'contra'")
        sh = self.shape
        if len(self.values) != sh.n_objects or len(self.maps) != len(sh.arrows):
            raise DiagramError("one value per object and one map per arrow required")
        for a, m in enumerate(self.maps):
            s, t = _ends(sh, a, self.variance)
            if not (m.source == self.values[s] and m.target == self.values[t]):
                raise DiagramError(f"map on arrow {a} has the wrong source or target")
        for x, i in enumerate(sh.identities):
            if self.maps[i] != ChainMap.identity(self.values[x]):
                raise DiagramError(f"identity arrow of object {x} is not sent to the identity")
        for (g, f), h in sh.table.items():
            lhs = self.maps[g] @ self.maps[f] if self.variance == "co" else self.maps[f] @ self.maps[g]
            if lhs != self.maps[h]:
                raise DiagramError(f"composition fails for arrows {g} after {f}")

    @classmethod
    def generated(
        cls,
        shape: FiniteCategory,
        values: Sequence[ChainComplex],
        given: Mapping[int, ChainMap],
        variance: str = "co",
    ) -> "ChainDiagram":
        """Fill in identities and composites from maps on some arrows."""
        maps: dict[int, ChainMap] = dict(given)
        for x, i in enumerate(shape.identities):
            maps.setdefault(i, ChainMap.identity(values[x]))
        progress = True
        while progress and len(maps) < len(shape.arrows):
            progress = False
            for (g, f), h in sorted(shape.table.items()):
                if h in maps or g not in maps or f not in maps:
                    continue
                maps[h] = maps[g] @ maps[f] if variance == "co" else maps[f] @ maps[g]
                progress = True
        missing = [a for a in range(len(shape.arrows)) if a not in maps]
        if missing:
            raise DiagramError(f"arrows {missing} are neither given nor composites of given arrows")
        return cls(shape, tuple(values), tuple(maps[a] for a in range(len(shape.arrows))), variance)

    @classmethod
    def constant(cls, shape: FiniteCategory, value: ChainComplex, variance: str = "co") -> "ChainDiagram":
        ident = ChainMap.identity(value)
        return cls(shape, (value,) * shape.n_objects, (ident,) * len(shape.arrows), variance)

    def covariant(self) -> tuple[FiniteCategory, "ChainDiagram"]:
        """The same data as a covariant diagram (on the opposite shape if needed)."""
        if self.variance == "co":
            return self.shape, self
        op = self.shape.opposite()
        return op, ChainDiagram(op, self.values, self.maps, "co")

    def betti(self) -> list[GradedRanks]:
        return [betti(v) for v in self.values]


@dataclass(frozen=True, eq=False)
class DiagramMap:
    source: ChainDiagram
    target: ChainDiagram
    components: tuple[ChainMap, ...]

    def __post_init__(self):
        if self.source.shape is not self.target.shape and self.source.shape != self.target.shape:
            raise DiagramError("diagrams live on different shapes")
        if self.source.variance != self.target.variance:
            raise DiagramError("diagrams have different variance")
        if len(self.components) != self.source.shape.n_objects:
            raise DiagramError("one component per object required")

    def naturality_failures(self) -> list[int]:
        out = []
        for a in range(len(self.source.shape.arrows)):
            s, t = _ends(self.source.shape, a, self.source.variance)
            if self.components[t] @ self.source.maps[a] != self.target.maps[a] @ self.components[s]:
                out.append(a)
        return out

    def is_natural(self) -> bool:
        return not self.naturality_failures()

    def non_quasi_iso_objects(self) -> list[int]:
        return [x for x, c in enumerate(self.components) if not is_quasi_iso(c)]

    def is_objectwise_quasi_iso(self) -> bool:
        return not self.non_quasi_iso_objects()


# ---------------------------------------------------------------------------
# homotopy limits


@dataclass(frozen=True)
class TotalComplex:
    """Full total complex; index k holds total degree k - offset."""

    complex: ChainComplex
    offset: int

    def betti_by_degree(self) -> dict[int, int]:
        b = betti(self.complex)
        return {k - self.offset: b[k] for k in range(self.complex.top_degree + 1) if b[k]}


def holim_total(f: ChainDiagram) -> TotalComplex:
    shape, f = f.covariant()
    arrows = shape.arrows
    levels = []
    p = 0
    while True:
        chains = shape.chains(p)
        if not chains:
            break
        levels.append(chains)
        p += 1
        if p > len(arrows):
            raise CategoryError("shape has arbitrarily long strings of non-identity arrows")
    if not levels:
        return TotalComplex(ChainComplex.zero(), 0)
    depth = len(levels) - 1
    top = max((v.top_degree for v in f.values), default=0)

    def end(c, p):
        return c[0] if p == 0 else arrows[c[-1]][1]

    # layout[(p, q)] = {chain: offset inside Tot_{q-p}}
    layout: dict[tuple[int, int], dict] = {}
    tot_dims = [0] * (top + depth + 1)  # index k = total degree + depth
    for n in range(-depth, top + 1):
        pos = 0
        for p, chains in enumerate(levels):
            q = n + p
            if not 0 <= q <= top:
                continue
            blk = {}
            for c in chains:
                blk[c] = pos
                pos += f.values[end(c, p)].dim(q)
            layout[(p, q)] = blk
        tot_dims[n + depth] = pos

    def faces(c, p):
        """(sign, source chain, arrow to apply or None) for the coface
        expansion of δ at a length-p chain c (p >= 1)."""
        out = []
        src0 = arrows[c[0]][0]
        out.append((1, (arrows[c[0]][1],) if p == 1 else c[1:], None))
        for i in range(1, p):
            h = shape.compose(c[i], c[i - 1])
            if shape.is_identity(h):
                continue
            out.append(((-1) ** i, c[: i - 1] + (h,) + c[i + 1:], None))
        out.append(((-1) ** p, (src0,) if p == 1 else c[:-1], c[-1]))
        return out

    diffs = []
    for n in range(-depth + 1, top + 1):
        entries: dict[tuple[int, int], object] = {}
        for p, chains in enumerate(levels):
            q = n + p
            # d_C : X^p_q -> X^p_{q-1}
            if 1 <= q <= top:
                src_blk, tgt_blk = layout[(p, q)], layout[(p, q - 1)]
                for c in chains:
                    d = f.values[end(c, p)].d(q)
                    r0, c0 = tgt_blk[c], src_blk[c]
                    for i, row in enumerate(d.sparse_rows()):
                        for j, v in row.items():
                            entries[(r0 + i, c0 + j)] = entries.get((r0 + i, c0 + j), 0) + v
        # (-1)^q δ : X^{p-1}_q (in Tot_n) -> X^p_q (in Tot_{n-1})
        for p in range(1, len(levels)):
            q = n - 1 + p
            if not 0 <= q <= top:
                continue
            sgn = -1 if q % 2 else 1
            src_blk, tgt_blk = layout[(p - 1, q)], layout[(p, q)]
            for c in levels[p]:
                x = end(c, p)
                dim = f.values[x].dim(q)
                if not dim:
                    continue
                r0 = tgt_blk[c]
                for s, src_chain, arrow in faces(c, p):
                    c0 = src_blk[src_chain]
                    if arrow is None:
                        for i in range(dim):
                            key = (r0 + i, c0 + i)
                            entries[key] = entries.get(key, 0) + sgn * s
                    else:
                        for i, row in enumerate(f.maps[arrow][q].sparse_rows()):
                            for j, v in row.items():
                                key = (r0 + i, c0 + j)
                                entries[key] = entries.get(key, 0) + sgn * s * v
        k = n + depth
        diffs.append(RatMatrix.from_entries(tot_dims[k - 1], tot_dims[k], entries))
    return TotalComplex(ChainComplex(tuple(tot_dims), tuple(diffs)), depth)


def _connective_cover(t: TotalComplex) -> ChainComplex:
    c, off = t.complex, t.offset
    if c.top_degree < off:
        return ChainComplex.zero()
    d0 = c.d(off)
    ker = kernel_basis(d0) if c.dim(off) else []
    kmat = RatMatrix.from_columns(ker, c.dim(off))
    dims = (len(ker),) + tuple(c.dim(k) for k in range(off + 1, c.top_degree + 1))
    diffs = []
    if len(dims) > 1:
        d1 = c.d(off + 1)
        cols = [solve_consistent(kmat, d1.column(j)) for j in range(d1.ncols)]
        diffs.append(RatMatrix.from_columns(cols, len(ker)))
        diffs.extend(c.d(k) for k in range(off + 2, c.top_degree + 1))
    return ChainComplex(dims, tuple(diffs))


def holim(f: ChainDiagram) -> ChainComplex:
    """Non-negatively graded model of holim f (the connective cover of the
    totalization)."""
    return _connective_cover(holim_total(f))


def holim_negative_betti(f: ChainDiagram) -> dict[int, int]:
    """Homology of the totalization in negative degrees (dropped by holim)."""
    return {n: b for n, b in holim_total(f).betti_by_degree().items() if n < 0}


# ---------------------------------------------------------------------------
# constructions


def _sum_map(maps: Sequence[ChainMap], source: ChainComplex, target: ChainComplex) -> ChainMap:
    top = max(source.top_degree, target.top_degree)
    blocks = []
    for n in range(top + 1):
        parts = [m[n] for m in maps]
        blk = RatMatrix.block_diag(parts) if parts else RatMatrix.zeros(0, 0)
        blocks.append(blk)
    return ChainMap(source, target, tuple(blocks))


def diagram_sum(diagrams: Sequence[ChainDiagram]) -> ChainDiagram:
    if not diagrams:
        raise DiagramError("empty sum has no shape")
    shape, var = diagrams[0].shape, diagrams[0].variance
    for g in diagrams:
        if g.shape != shape or g.variance != var:
            raise DiagramError("summands must share shape and variance")
    padded = []
    top = max(v.top_degree for g in diagrams for v in g.values)
    for g in diagrams:
        padded.append([v.padded(top) for v in g.values])
    values = tuple(direct_sum_many([pv[x] for pv in padded]) for x in range(shape.n_objects))
    maps = []
    for a in range(len(shape.arrows)):
        s, t = _ends(shape, a, var)
        maps.append(_sum_map([g.maps[a] for g in diagrams], values[s], values[t]))
    return ChainDiagram(shape, values, tuple(maps), var)


def homology_diagram(f: ChainDiagram, n: int) -> ChainDiagram:
    """H_n ∘ f, as complexes concentrated in degree n."""
    values = tuple(ChainComplex.concentrated(n, betti(v)[n]) for v in f.values)
    maps = []
    for a, m in enumerate(f.maps):
        s, t = _ends(f.shape, a, f.variance)
        blocks = [RatMatrix.zeros(values[t].dim(i), values[s].dim(i)) for i in range(n)]
        blocks.append(induced_homology_map(m, n))
        maps.append(ChainMap(values[s], values[t], tuple(blocks)))
    return ChainDiagram(f.shape, values, tuple(maps), f.variance)


def restrict(f: ChainDiagram, functor: Functor) -> ChainDiagram:
    """Precompose f with a functor into its shape."""
    if functor.target != f.shape:
        raise CategoryError("functor does not land in the diagram's shape")
    values = tuple(f.values[x] for x in functor.on_objects)
    maps = tuple(f.maps[a] for a in functor.on_arrows)
    return ChainDiagram(functor.source, values, maps, f.variance)


# ---------------------------------------------------------------------------
# formality zig-zag


@dataclass(frozen=True, eq=False)
class ZigZag:
    """f -> Po_n f <- ker(π_n) -> H_n f."""

    degree: int
    to_section: DiagramMap
    kernel_inclusion: DiagramMap
    to_homology: DiagramMap

    def maps(self) -> tuple[DiagramMap, DiagramMap, DiagramMap]:
        return (self.to_section, self.kernel_inclusion, self.to_homology)

    def failures(self) -> list[str]:
        out = []
        for name, m in zip(("section", "kernel", "homology"), self.maps()):
            for a in m.naturality_failures():
                out.append(f"{name} map not natural on arrow {a}")
            for x in m.non_quasi_iso_objects():
                out.append(f"{name} map not a quasi-isomorphism at object {x}")
        return out

    def verify(self) -> bool:
        return not self.failures()


def _concentration_problems(f: ChainDiagram, n: int) -> list[str]:
    out = []
    for x, v in enumerate(f.values):
        b = betti(v)
        stray = [i for i in b.support() if i != n]
        if stray:
            out.append(f"object {x} has homology in degrees {stray}, expected only {n}")
    return out


def _diagram_of(f: ChainDiagram, values, maps) -> ChainDiagram:
    return ChainDiagram(f.shape, tuple(values), tuple(maps), f.variance)


def formality_zigzag(f: ChainDiagram, n: int) -> ZigZag:
    problems = _concentration_problems(f, n)
    if problems:
        raise DiagramError("; ".join(problems))
    po = _diagram_of(f, [postnikov_section(v, n) for v in f.values], [postnikov_map(m, n) for m in f.maps])
    ker = _diagram_of(f, [postnikov_kernel(v, n) for v in f.values], [postnikov_kernel_map(m, n) for m in f.maps])
    hom = homology_diagram(f, n)
    to_po = DiagramMap(f, po, tuple(postnikov_inclusion(v, n) for v in f.values))
    incl = DiagramMap(ker, po, tuple(postnikov_kernel_inclusion(v, n) for v in f.values))
    comps = []
    for x, v in enumerate(f.values):
        k, h = ker.values[x], hom.values[x]
        blocks = [RatMatrix.zeros(h.dim(i), k.dim(i)) for i in range(n)]
        blocks.append(homology_projection(v, n))
        blocks.append(RatMatrix.zeros(h.dim(n + 1), k.dim(n + 1)))
        comps.append(ChainMap(k, h, tuple(blocks)))
    to_h = DiagramMap(ker, hom, tuple(comps))
    return ZigZag(n, to_po, incl, to_h)


# ---------------------------------------------------------------------------
# splitting verification


@dataclass(frozen=True, eq=False)
class SplitData:
    """Summands (degree, diagram) and a diagram map from their sum to f."""

    summands: tuple[tuple[int, ChainDiagram], ...]
    inclusion: DiagramMap


@dataclass(frozen=True)
class SplitVerdict:
    passed: bool
    holim_betti: GradedRanks
    summand_betti: GradedRanks
    diff: tuple[tuple[int, int, int], ...] = ()
    problems: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "schema": "parcalc.split-check/1",
            "computation": {"holim_betti": list(self.holim_betti), "summand_betti": list(self.summand_betti)},
            "verdict": "pass" if self.passed else "fail",
            "diff": [{"degree": g, "holim": a, "summands": b} for g, a, b in self.diff],
            "problems": list(self.problems),
        }


def _split_problems(f: ChainDiagram, split: SplitData) -> list[str]:
    problems = []
    for n, g in split.summands:
        if g.shape != f.shape or g.variance != f.variance:
            problems.append(f"summand of degree {n} lives on a different shape")
            continue
        problems.extend(f"summand {n}: {p}" for p in _concentration_problems(g, n))
    inc = split.inclusion
    if inc.target is not f and not all(a == b for a, b in zip(inc.target.values, f.values)):
        problems.append("splitting map does not land in the diagram")
    if split.summands:
        total = diagram_sum([g for _, g in split.summands])
        if not all(a == b for a, b in zip(total.values, inc.source.values)):
            problems.append("splitting map does not start at the sum of the summands")
    problems.extend(f"splitting map not natural on arrow {a}" for a in inc.naturality_failures())
    problems.extend(f"splitting map not a quasi-isomorphism at object {x}" for x in inc.non_quasi_iso_objects())
    return problems


def holim_splitting_check(f: ChainDiagram, split: SplitData) -> SplitVerdict:
    """Betti numbers of holim f against Σ_n holim H_n f_n, after verifying
    the splitting data."""
    problems = _split_problems(f, split)
    lhs = betti(holim(f))
    rhs = GradedRanks(())
    for n, g in split.summands:
        rhs = rhs + betti(holim(homology_diagram(g, n)))
    top = max(len(lhs), len(rhs))
    diff = tuple((k, lhs[k], rhs[k]) for k in range(top) if lhs[k] != rhs[k])
    return SplitVerdict(not problems and not diff, lhs, rhs, diff, tuple(problems))


def restrict_split(split: SplitData, functor: Functor) -> SplitData:
    inc = split.inclusion
    comps = tuple(inc.components[x] for x in functor.on_objects)
    new_inc = DiagramMap(restrict(inc.source, functor), restrict(inc.target, functor), comps)
    return SplitData(tuple((n, restrict(g, functor)) for n, g in split.summands), new_inc)


# ---------------------------------------------------------------------------
# JSON specs


def _matrix_json(m: RatMatrix) -> list:
    return [[format_rational(v) for v in row] for row in m.to_lists()]


def _matrix_from(rows, nrows: int, ncols: int) -> RatMatrix:
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise DiagramError(f"expected a {nrows}x{ncols} matrix")
    return RatMatrix.from_rows([[parse_rational(str(v)) for v in r] for r in rows], ncols)


def _map_from(blocks, source: ChainComplex, target: ChainComplex) -> ChainMap:
    top = max(source.top_degree, target.top_degree)
    blocks = list(blocks) + [None] * (top + 1 - len(blocks))
    mats = []
    for n, b in enumerate(blocks[: top + 1]):
        if b is None:
            mats.append(RatMatrix.zeros(target.dim(n), source.dim(n)))
        else:
            mats.append(_matrix_from(b, target.dim(n), source.dim(n)))
    return ChainMap(source, target, tuple(mats))


def _map_json(m: ChainMap) -> list:
    top = max(m.source.top_degree, m.target.top_degree)
    return [_matrix_json(m[n]) for n in range(top + 1)]


def diagram_from_spec(spec: Mapping) -> ChainDiagram:
    """Poset-shaped diagram from its JSON spec; ``arrows`` are generators and
    ``maps`` is keyed by generator position."""
    try:
        labels = [str(o) for o in spec["objects"]]
        where = {o: i for i, o in enumerate(labels)}
        gens = [(where[str(a["src"])], where[str(a["dst"])]) for a in spec.get("arrows", [])]
        variance = spec.get("variance", "co")
        values = [complex_from_json(spec["complexes"][o]) for o in labels]
    except KeyError as e:
        raise DiagramError(f"diagram spec is missing {e}") from None
    try:
        shape = FiniteCategory.from_generators(labels, gens)
    except PosetError as e:
        raise DiagramError(f"arrows do not generate a partial order: {e}") from None
    given = {}
    for key, blocks in spec.get("maps", {}).items():
        s, t = gens[int(key)]
        a = shape.hom(s, t)[0]
        src, tgt = (s, t) if variance == "co" else (t, s)
        given[a] = _map_from(blocks, values[src], values[tgt])
    return ChainDiagram.generated(shape, values, given, variance)


def _cover_pairs(shape: FiniteCategory) -> list[int]:
    """Non-identity arrows that are not composites of two non-identity arrows."""
    composite = {h for (g, f), h in shape.table.items() if not shape.is_identity(g) and not shape.is_identity(f)}
    return [a for a in shape.non_identity_arrows() if a not in composite]


def diagram_to_spec(f: ChainDiagram) -> dict:
    labels = [str(o) for o in f.shape.labels]
    gens = _cover_pairs(f.shape)
    return {
        "objects": labels,
        "arrows": [{"src": labels[f.shape.arrows[a][0]], "dst": labels[f.shape.arrows[a][1]]} for a in gens],
        "variance": f.variance,
        "complexes": {labels[x]: complex_to_json(v) for x, v in enumerate(f.values)},
        "maps": {str(k): _map_json(f.maps[a]) for k, a in enumerate(gens)},
    }


def split_from_spec(spec: Mapping) -> tuple[ChainDiagram, SplitData]:
    f = diagram_from_spec(spec["diagram"])
    summands = tuple((int(s["degree"]), diagram_from_spec(s["diagram"])) for s in spec.get("summands", []))
    total = diagram_sum([g for _, g in summands]) if summands else None
    labels = [str(o) for o in f.shape.labels]
    comps = []
    for x, o in enumerate(labels):
        src = total.values[x] if total is not None else ChainComplex.zero()
        comps.append(_map_from(spec["quasi_iso"][o], src, f.values[x]))
    if total is None:
        total = ChainDiagram.constant(f.shape, ChainComplex.zero(), f.variance)
    return f, SplitData(summands, DiagramMap(total, f, tuple(comps)))


def split_to_spec(f: ChainDiagram, split: SplitData) -> dict:
    labels = [str(o) for o in f.shape.labels]
    return {
        "diagram": diagram_to_spec(f),
        "summands": [{"degree": n, "diagram": diagram_to_spec(g)} for n, g in split.summands],
        "quasi_iso": {labels[x]: _map_json(c) for x, c in enumerate(split.inclusion.components)},
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
