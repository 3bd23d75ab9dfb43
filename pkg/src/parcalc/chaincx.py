"""Non-negatively graded chain complexes over Q.

A complex stores its per-degree dimensions and the differentials
``d_n : C_n -> C_{n-1}`` for ``1 <= n <= top_degree``.  Everything outside
``0..top_degree`` is zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactla import (
    RatMatrix,
    coordinates,
    format_rational,
    inverse,
    kernel_basis,
    parse_rational,
    rank,
    solve_consistent,
)

__all__ = [
    "ChainComplex",
    "ChainMap",
    "GradedRanks",
    "Homology",
    "InvalidComplex",
    "homology",
    "betti",
    "postnikov_section",
    "postnikov_inclusion",
    "postnikov_projection",
    "postnikov_kernel",
    "postnikov_kernel_inclusion",
    "postnikov_map",
    "direct_sum",
    "direct_sum_many",
    "postnikov_kernel_map",
    "tensor",
    "induced_homology_map",
    "is_quasi_iso",
    "homology_complex",
    "homology_projection",
    "graded_convolution",
    "complex_to_json",
    "complex_from_json",
]


class InvalidComplex(ValueError):
    pass


class GradedRanks(tuple):
    """Finitely supported Betti vector; trailing zeros are stripped so that
    equality ignores degree bookkeeping."""

    def __new__(cls, values=()):
        vals = [int(v) for v in values]
        if any(v < 0 for v in vals):
            raise ValueError("graded ranks must be non-negative")
        while vals and vals[-1] == 0:
            vals.pop()
        return super().__new__(cls, vals)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return tuple.__getitem__(self, i)
        if i < 0:
            raise IndexError("degrees are non-negative")
        return tuple.__getitem__(self, i) if i < len(self) else 0

    def __add__(self, other):
        n = max(len(self), len(other))
        return GradedRanks(self[i] + other[i] for i in range(n))

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self) if v]

    def as_dict(self) -> dict[int, int]:
        return {i: v for i, v in enumerate(self) if v}

    def __repr__(self):
        return f"GradedRanks({list(self)})"


def graded_convolution(a: Sequence[int], b: Sequence[int]) -> GradedRanks:
    out = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return GradedRanks(out)


@dataclass(frozen=True, eq=False)
class ChainComplex:
    dims: tuple[int, ...]
    diffs: tuple[RatMatrix, ...] = ()

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims) or (0,)
        object.__setattr__(self, "dims", dims)
        diffs = tuple(self.diffs)
        if not diffs:
            diffs = tuple(RatMatrix.zeros(dims[n - 1], dims[n]) for n in range(1, len(dims)))
        object.__setattr__(self, "diffs", diffs)
        if any(x < 0 for x in dims):
            raise InvalidComplex("dimensions must be non-negative")
        if len(diffs) != len(dims) - 1:
            raise InvalidComplex(f"{len(dims)} degrees need {len(dims) - 1} differentials, got {len(diffs)}")
        for n, d in enumerate(diffs, start=1):
            if d.shape != (dims[n - 1], dims[n]):
                raise InvalidComplex(f"d_{n} has shape {d.shape}, expected {(dims[n - 1], dims[n])}")
        for n in range(1, len(diffs)):
            if not (diffs[n - 1] @ diffs[n]).is_zero():
                raise InvalidComplex(f"d_{n} d_{n + 1} != 0")

    @classmethod
    def zero(cls) -> "ChainComplex":
        return cls((0,))

    @classmethod
    def concentrated(cls, degree: int, dim: int) -> "ChainComplex":
        return cls(tuple([0] * degree + [dim]))

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n < len(self.dims) else 0

    def d(self, n: int) -> RatMatrix:
        """``d_n : C_n -> C_{n-1}``, zero-shaped outside the stored range."""
        if 1 <= n <= self.top_degree:
            return self.diffs[n - 1]
        return RatMatrix.zeros(self.dim(n - 1), self.dim(n))

    def trimmed(self) -> "ChainComplex":
        k = len(self.dims)
        while k > 1 and self.dims[k - 1] == 0:
            k -= 1
        if k == len(self.dims):
            return self
        return ChainComplex(self.dims[:k], self.diffs[: k - 1])

    def padded(self, top: int) -> "ChainComplex":
        if top <= self.top_degree:
            return self
        return ChainComplex(tuple(self.dim(n) for n in range(top + 1)),
                            tuple(self.d(n) for n in range(1, top + 1)))

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * x for n, x in enumerate(self.dims))

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        a, b = self.trimmed(), other.trimmed()
        return a.dims == b.dims and a.diffs == b.diffs

    def __hash__(self):
        t = self.trimmed()
        return hash((t.dims, t.diffs))

    def __repr__(self):
        return f"ChainComplex(dims={list(self.dims)})"


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    blocks: tuple[RatMatrix, ...] = ()
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        top = max(self.source.top_degree, self.target.top_degree)
        blocks = list(self.blocks)
        for n in range(len(blocks), top + 1):
            blocks.append(RatMatrix.zeros(self.target.dim(n), self.source.dim(n)))
        blocks = blocks[: top + 1]
        object.__setattr__(self, "blocks", tuple(blocks))
        for n, f in enumerate(blocks):
            if f.shape != (self.target.dim(n), self.source.dim(n)):
                raise ValueError(f"f_{n} has shape {f.shape}, expected {(self.target.dim(n), self.source.dim(n))}")
        if self.check and not self.commutes():
            raise ValueError("blocks do not commute with the differentials")

    def __getitem__(self, n: int) -> RatMatrix:
        if 0 <= n < len(self.blocks):
            return self.blocks[n]
        return RatMatrix.zeros(self.target.dim(n), self.source.dim(n))

    def commutes(self) -> bool:
        top = max(self.source.top_degree, self.target.top_degree)
        for n in range(1, top + 1):
            if self.target.d(n) @ self[n] != self[n - 1] @ self.source.d(n):
                return False
        return True

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, tuple(RatMatrix.identity(x) for x in c.dims), check=False)

    @classmethod
    def zero(cls, a: ChainComplex, b: ChainComplex) -> "ChainMap":
        return cls(a, b, (), check=False)

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise ValueError("maps are not composable")
        top = max(inner.source.top_degree, self.target.top_degree)
        return ChainMap(inner.source, self.target,
                        tuple(self[n] @ inner[n] for n in range(top + 1)), check=False)

    def __matmul__(self, inner: "ChainMap") -> "ChainMap":
        return self.compose(inner)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        top = max(self.source.top_degree, self.target.top_degree)
        return ChainMap(self.source, self.target, tuple(self[n] + other[n] for n in range(top + 1)), check=False)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        top = max(self.source.top_degree, self.target.top_degree, other.source.top_degree, other.target.top_degree)
        return all(self[n] == other[n] for n in range(top + 1))

    def __hash__(self):
        return hash((self.source, self.target))

    def is_degreewise_surjective(self) -> bool:
        return all(rank(self[n]) == self.target.dim(n) for n in range(self.target.top_degree + 1))


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class Homology:
    betti: GradedRanks
    representatives: tuple[tuple[tuple[Fraction, ...], ...], ...]
    """Per degree, cycles whose classes form a basis of H_n."""


def betti(c: ChainComplex) -> GradedRanks:
    ranks = [rank(c.d(n)) for n in range(c.top_degree + 2)]
    return GradedRanks(c.dim(n) - ranks[n] - ranks[n + 1] for n in range(c.top_degree + 1))


def _cycle_data(c: ChainComplex, n: int):
    """Kernel basis of d_n, boundary basis of d_{n+1} and the homology
    representatives chosen among the kernel vectors."""
    dn = c.d(n)
    ker = kernel_basis(dn) if c.dim(n) else []
    dn1 = c.d(n + 1)
    piv, _ = coordinates(dn1)
    bnd = [dn1.column(j) for j in piv]
    reps = []
    current = list(bnd)
    r = len(bnd)
    for z in ker:
        trial = current + [z]
        if rank(RatMatrix.from_columns(trial, c.dim(n))) > r:
            current = trial
            reps.append(z)
            r += 1
    return ker, bnd, reps


def homology(c: ChainComplex, representatives: bool = True) -> Homology:
    if not representatives:
        return Homology(betti(c), ())
    reps = []
    for n in range(c.top_degree + 1):
        reps.append(tuple(_cycle_data(c, n)[2]))
    return Homology(GradedRanks(len(r) for r in reps), tuple(reps))


def induced_homology_map(f: ChainMap, n: int) -> RatMatrix:
    """Matrix of H_n(f) in the representative bases of source and target."""
    _, _, src_reps = _cycle_data(f.source, n)
    _, tgt_bnd, tgt_reps = _cycle_data(f.target, n)
    frame = RatMatrix.from_columns(list(tgt_reps) + list(tgt_bnd), f.target.dim(n))
    cols = []
    for z in src_reps:
        x = solve_consistent(frame, f[n].apply(z))
        if x is None:
            raise ValueError("image of a cycle is not a cycle; not a chain map")
        cols.append(x[: len(tgt_reps)])
    return RatMatrix.from_columns(cols, len(tgt_reps))


def is_quasi_iso(f: ChainMap) -> bool:
    top = max(f.source.top_degree, f.target.top_degree)
    bs, bt = betti(f.source), betti(f.target)
    if bs != bt:
        return False
    for n in range(top + 1):
        if bs[n] and rank(induced_homology_map(f, n)) != bs[n]:
            return False
    return True


def homology_complex(c: ChainComplex, n: int | None = None) -> ChainComplex:
    """H_*(C) (or H_n(C) alone) as a complex with zero differential."""
    b = betti(c)
    if n is None:
        return ChainComplex(tuple(b[i] for i in range(c.top_degree + 1)))
    return ChainComplex.concentrated(n, b[n])


def homology_projection(c: ChainComplex, n: int) -> RatMatrix:
    """Linear map ker(d_n) -> H_n(C) in kernel-basis coordinates.

    Rows are homology coordinates w.r.t. the representatives; columns index
    the kernel basis returned by :func:`exactla.kernel_basis`.
    """
    ker, bnd, reps = _cycle_data(c, n)
    dim = c.dim(n)
    kmat = RatMatrix.from_columns(ker, dim)
    frame_cols = []
    for v in list(reps) + list(bnd):
        x = solve_consistent(kmat, v)
        frame_cols.append(x)
    frame = RatMatrix.from_columns(frame_cols, len(ker))
    inv = inverse(frame)
    return inv.submatrix(range(len(reps)), range(len(ker)))


# ---------------------------------------------------------------------------
# Postnikov sections


def _image_data(c: ChainComplex, n: int):
    """Pivot columns of d_n, the basis matrix B of d(C_n) (columns of d_n),
    and R with d_n = B @ R."""
    dn = c.d(n)
    piv, coords = coordinates(dn)
    basis = dn.submatrix(range(dn.nrows), piv)
    return piv, basis, coords


def postnikov_section(c: ChainComplex, n: int) -> ChainComplex:
    """Po_n(C): C_i for i <= n, d(C_{n+1}) in degree n+1, zero above."""
    if n < 0:
        raise ValueError("n must be non-negative")
    _, basis, _ = _image_data(c, n + 1)
    dims = tuple(c.dim(i) for i in range(n + 1)) + (basis.ncols,)
    diffs = tuple(c.d(i) for i in range(1, n + 1)) + (basis,)
    return ChainComplex(dims, diffs)


def postnikov_inclusion(c: ChainComplex, n: int) -> ChainMap:
    """rho_n : C -> Po_n(C)."""
    po = postnikov_section(c, n)
    _, _, coords = _image_data(c, n + 1)
    blocks = [RatMatrix.identity(c.dim(i)) for i in range(n + 1)] + [coords]
    return ChainMap(c, po, tuple(blocks))


def postnikov_projection(c: ChainComplex, n: int) -> ChainMap:
    """pi_n : Po_n(C) -> Po_{n-1}(C)."""
    if n < 1:
        raise ValueError("pi_n is defined for n >= 1")
    src = postnikov_section(c, n)
    tgt = postnikov_section(c, n - 1)
    _, _, coords = _image_data(c, n)
    blocks = [RatMatrix.identity(c.dim(i)) for i in range(n)] + [coords]
    blocks.append(RatMatrix.zeros(tgt.dim(n + 1), src.dim(n + 1)))
    return ChainMap(src, tgt, tuple(blocks))


def _kernel_data(c: ChainComplex, n: int):
    ker = kernel_basis(c.d(n)) if c.dim(n) else []
    kmat = RatMatrix.from_columns(ker, c.dim(n))
    return kmat


def postnikov_kernel(c: ChainComplex, n: int) -> ChainComplex:
    """ker(pi_n): ker(d_n) in degree n, d(C_{n+1}) in degree n+1.

    For n = 0 this is Po_0(C) itself, the kernel of the map to zero."""
    if n < 0:
        raise ValueError("n must be non-negative")
    kmat = _kernel_data(c, n)
    _, basis, _ = _image_data(c, n + 1)
    cols = []
    for j in range(basis.ncols):
        x = solve_consistent(kmat, basis.column(j))
        cols.append(x)
    inc = RatMatrix.from_columns(cols, kmat.ncols)
    dims = (0,) * n + (kmat.ncols, basis.ncols)
    diffs = tuple(RatMatrix.zeros(dims[i - 1], dims[i]) for i in range(1, n + 1)) + (inc,)
    return ChainComplex(dims, diffs)


def postnikov_kernel_inclusion(c: ChainComplex, n: int) -> ChainMap:
    """ker(pi_n) -> Po_n(C)."""
    k = postnikov_kernel(c, n)
    po = postnikov_section(c, n)
    kmat = _kernel_data(c, n)
    blocks = [RatMatrix.zeros(po.dim(i), 0) for i in range(n)]
    blocks.append(kmat)
    blocks.append(RatMatrix.identity(po.dim(n + 1)))
    return ChainMap(k, po, tuple(blocks))


def postnikov_map(f: ChainMap, n: int) -> ChainMap:
    """Po_n(f) : Po_n(C) -> Po_n(D)."""
    src = postnikov_section(f.source, n)
    tgt = postnikov_section(f.target, n)
    _, sb, _ = _image_data(f.source, n + 1)
    _, tb, _ = _image_data(f.target, n + 1)
    cols = []
    fn = f[n]
    for j in range(sb.ncols):
        x = solve_consistent(tb, fn.apply(sb.column(j)))
        if x is None:
            raise ValueError("f does not carry boundaries to boundaries")
        cols.append(x)
    top_block = RatMatrix.from_columns(cols, tb.ncols)
    blocks = [f[i] for i in range(n + 1)] + [top_block]
    return ChainMap(src, tgt, tuple(blocks))


def postnikov_kernel_map(f: ChainMap, n: int) -> ChainMap:
    """ker(pi_n)(f), the restriction of Po_n(f) to the kernels."""
    src = postnikov_kernel(f.source, n)
    tgt = postnikov_kernel(f.target, n)
    ks = _kernel_data(f.source, n)
    kt = _kernel_data(f.target, n)
    cols = []
    for j in range(ks.ncols):
        x = solve_consistent(kt, f[n].apply(ks.column(j)))
        if x is None:
            raise ValueError("f does not carry cycles to cycles")
        cols.append(x)
    deg_n = RatMatrix.from_columns(cols, kt.ncols)
    po = postnikov_map(f, n)
    blocks = [RatMatrix.zeros(0, 0) for _ in range(n)] + [deg_n, po[n + 1]]
    return ChainMap(src, tgt, tuple(blocks))


# ---------------------------------------------------------------------------
# sums and tensors


def direct_sum(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    top = max(a.top_degree, b.top_degree)
    dims = tuple(a.dim(n) + b.dim(n) for n in range(top + 1))
    diffs = tuple(RatMatrix.block_diag([a.d(n), b.d(n)]) for n in range(1, top + 1))
    return ChainComplex(dims, diffs)


def direct_sum_many(parts: Sequence[ChainComplex]) -> ChainComplex:
    if not parts:
        return ChainComplex.zero()
    top = max(p.top_degree for p in parts)
    dims = tuple(sum(p.dim(n) for p in parts) for n in range(top + 1))
    diffs = tuple(RatMatrix.block_diag([p.d(n) for p in parts]) for n in range(1, top + 1))
    return ChainComplex(dims, diffs)


def tensor_basis(a: ChainComplex, b: ChainComplex, n: int) -> list[tuple[int, int, int]]:
    """Basis of (A ⊗ B)_n as triples (p, i, j): e_i in A_p tensor e_j in B_{n-p}."""
    out = []
    for p in range(n + 1):
        for i in range(a.dim(p)):
            for j in range(b.dim(n - p)):
                out.append((p, i, j))
    return out


def tensor(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """A ⊗ B with d(x ⊗ y) = dx ⊗ y + (-1)^|x| x ⊗ dy."""
    top = a.top_degree + b.top_degree
    bases = [tensor_basis(a, b, n) for n in range(top + 1)]
    index = [{t: k for k, t in enumerate(bs)} for bs in bases]
    diffs = []
    for n in range(1, top + 1):
        entries = {}
        for col, (p, i, j) in enumerate(bases[n]):
            q = n - p
            if p >= 1:
                for r, v in _column_items(a.d(p), i):
                    row = index[n - 1][(p - 1, r, j)]
                    entries[(row, col)] = entries.get((row, col), 0) + v
            if q >= 1:
                sign = -1 if p % 2 else 1
                for r, v in _column_items(b.d(q), j):
                    row = index[n - 1][(p, i, r)]
                    entries[(row, col)] = entries.get((row, col), 0) + sign * v
        diffs.append(RatMatrix.from_entries(len(bases[n - 1]), len(bases[n]), entries))
    return ChainComplex(tuple(len(bs) for bs in bases), tuple(diffs))


def _column_items(m: RatMatrix, j: int):
    for i, r in enumerate(m.sparse_rows()):
        v = r.get(j)
        if v:
            yield i, v


# ---------------------------------------------------------------------------
# JSON


def complex_to_json(c: ChainComplex) -> dict:
    return {
        "dims": list(c.dims),
        "diffs": [[[format_rational(x) for x in d.row(i)] for i in range(d.nrows)] for d in c.diffs],
    }


def _matrix_from_json(rows, nrows: int, ncols: int) -> RatMatrix:
    if nrows == 0:
        return RatMatrix.zeros(0, ncols)
    m = RatMatrix.from_rows([[parse_rational(str(x)) for x in r] for r in rows], ncols)
    if m.shape != (nrows, ncols):
        raise InvalidComplex(f"matrix has shape {m.shape}, expected {(nrows, ncols)}")
    return m


def complex_from_json(obj) -> ChainComplex:
    if isinstance(obj, str):
        obj = json.loads(obj)
    dims = tuple(int(x) for x in obj["dims"])
    raw = obj.get("diffs", [])
    if len(raw) != max(len(dims) - 1, 0):
        raise InvalidComplex("wrong number of differentials")
    diffs = tuple(_matrix_from_json(raw[n - 1], dims[n - 1], dims[n]) for n in range(1, len(dims)))
    return ChainComplex(dims, diffs)
