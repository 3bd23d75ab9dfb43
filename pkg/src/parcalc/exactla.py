"""Exact linear algebra over the rationals.

Matrices are immutable and stored sparsely as one ``{column: Fraction}``
mapping per row.  Rank uses fraction-free integer row elimination (rows are
scaled to integers, combined by cross-multiplication and divided by their
content), which keeps coefficient growth in check on large boundary
matrices.  Kernels, images and solutions go through a sparse reduced row
echelon form over :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]

__all__ = [
    "Rational",
    "RatMatrix",
    "as_rational",
    "format_rational",
    "parse_rational",
    "rank",
    "kernel_basis",
    "image_basis",
    "pivot_columns",
    "solve_consistent",
    "coordinates",
    "inverse",
]


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        p, q = text.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class RatMatrix:
    """Immutable sparse rational matrix."""

    __slots__ = ("_nrows", "_ncols", "_rows", "_hash")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[Mapping[int, Fraction]] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self._nrows = nrows
        self._ncols = ncols
        if rows is None:
            self._rows = tuple({} for _ in range(nrows))
        else:
            if len(rows) != nrows:
                raise ValueError(f"expected {nrows} rows, got {len(rows)}")
            clean = []
            for r in rows:
                d = {}
                for c, v in r.items():
                    if not 0 <= c < ncols:
                        raise IndexError(f"column {c} out of range for {ncols} columns")
                    v = as_rational(v)
                    if v:
                        d[c] = v
                clean.append(d)
            self._rows = tuple(clean)
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def _trusted(cls, nrows, ncols, rows):
        m = cls.__new__(cls)
        m._nrows, m._ncols, m._rows, m._hash = nrows, ncols, tuple(rows), None
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls._trusted(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged row list")
        return cls(len(rows), ncols, [{j: v for j, v in enumerate(r)} for r in rows])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "RatMatrix":
        data = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise ValueError("column length does not match nrows")
            for i, v in enumerate(col):
                v = as_rational(v)
                if v:
                    data[i][j] = v
        return cls._trusted(nrows, len(columns), data)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Mapping[tuple[int, int], object]) -> "RatMatrix":
        data = [{} for _ in range(nrows)]
        for (i, j), v in entries.items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError((i, j))
            v = as_rational(v)
            if v:
                data[i][j] = v
        return cls._trusted(nrows, ncols, data)

    # -- basic access ---------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self._nrows, self._ncols)

    @property
    def nrows(self) -> int:
        return self._nrows

    @property
    def ncols(self) -> int:
        return self._ncols

    def __getitem__(self, key) -> Fraction:
        i, j = key
        if not (0 <= i < self._nrows and 0 <= j < self._ncols):
            raise IndexError(key)
        return self._rows[i].get(j, Fraction(0))

    def row(self, i: int) -> Vector:
        r = self._rows[i]
        return tuple(r.get(j, Fraction(0)) for j in range(self._ncols))

    def column(self, j: int) -> Vector:
        if not 0 <= j < self._ncols:
            raise IndexError(j)
        return tuple(r.get(j, Fraction(0)) for r in self._rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self._ncols)]

    def sparse_rows(self):
        """Read-only view of the row dictionaries."""
        return self._rows

    def to_lists(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self._nrows)]

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def is_zero(self) -> bool:
        return all(not r for r in self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, tuple(tuple(sorted(r.items())) for r in self._rows)))
        return self._hash

    def __repr__(self) -> str:
        if self._nrows * self._ncols <= 64:
            body = [[format_rational(x) for x in self.row(i)] for i in range(self._nrows)]
            return f"RatMatrix({self._nrows}x{self._ncols}, {body})"
        return f"RatMatrix({self._nrows}x{self._ncols}, nnz={self.nnz()})"

    # -- arithmetic -----------------------------------------------------
    @property
    def T(self) -> "RatMatrix":
        data = [{} for _ in range(self._ncols)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                data[j][i] = v
        return RatMatrix._trusted(self._ncols, self._nrows, data)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self._ncols != other._nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other._rows
        out = []
        if self._integral() and other._integral():
            # Python int arithmetic is several times faster than Fraction.
            for r in self._rows:
                acc: dict[int, int] = {}
                for k, a in r.items():
                    a = a.numerator
                    for j, b in orows[k].items():
                        acc[j] = acc.get(j, 0) + a * b.numerator
                out.append({j: Fraction(v) for j, v in acc.items() if v})
            return RatMatrix._trusted(self._nrows, other._ncols, out)
        for r in self._rows:
            acc: dict[int, Fraction] = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append({j: v for j, v in acc.items() if v})
        return RatMatrix._trusted(self._nrows, other._ncols, out)

    def _integral(self) -> bool:
        return all(v.denominator == 1 for r in self._rows for v in r.values())

    def apply(self, vec: Sequence) -> Vector:
        if len(vec) != self._ncols:
            raise ValueError("vector length does not match column count")
        vec = [as_rational(v) for v in vec]
        return tuple(sum((v * vec[j] for j, v in r.items()), Fraction(0)) for r in self._rows)

    def _combine(self, other: "RatMatrix", sign: int) -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = []
        for a, b in zip(self._rows, other._rows):
            d = dict(a)
            for j, v in b.items():
                x = d.get(j, 0) + sign * v
                if x:
                    d[j] = x
                else:
                    d.pop(j, None)
            out.append(d)
        return RatMatrix._trusted(self._nrows, self._ncols, out)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "RatMatrix":
        return self.scale(-1)

    def scale(self, c) -> "RatMatrix":
        c = as_rational(c)
        if not c:
            return RatMatrix.zeros(*self.shape)
        return RatMatrix._trusted(self._nrows, self._ncols, [{j: v * c for j, v in r.items()} for r in self._rows])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        cmap = {c: k for k, c in enumerate(cols)}
        out = []
        for i in rows:
            out.append({cmap[j]: v for j, v in self._rows[i].items() if j in cmap})
        return RatMatrix._trusted(len(rows), len(cols), out)

    # -- assembly -------------------------------------------------------
    @staticmethod
    def hstack(blocks: Sequence["RatMatrix"], nrows: int | None = None) -> "RatMatrix":
        if not blocks:
            return RatMatrix.zeros(nrows or 0, 0)
        n = blocks[0].nrows
        if any(b.nrows != n for b in blocks):
            raise ValueError("hstack row mismatch")
        out = [{} for _ in range(n)]
        off = 0
        for b in blocks:
            for i, r in enumerate(b._rows):
                for j, v in r.items():
                    out[i][off + j] = v
            off += b.ncols
        return RatMatrix._trusted(n, off, out)

    @staticmethod
    def vstack(blocks: Sequence["RatMatrix"], ncols: int | None = None) -> "RatMatrix":
        if not blocks:
            return RatMatrix.zeros(0, ncols or 0)
        n = blocks[0].ncols
        if any(b.ncols != n for b in blocks):
            raise ValueError("vstack column mismatch")
        out = []
        for b in blocks:
            out.extend(dict(r) for r in b._rows)
        return RatMatrix._trusted(len(out), n, out)

    @staticmethod
    def block_diag(blocks: Sequence["RatMatrix"]) -> "RatMatrix":
        nr = sum(b.nrows for b in blocks)
        nc = sum(b.ncols for b in blocks)
        out = []
        coff = 0
        for b in blocks:
            for r in b._rows:
                out.append({coff + j: v for j, v in r.items()})
            coff += b.ncols
        return RatMatrix._trusted(nr, nc, out)

    def kron(self, other: "RatMatrix") -> "RatMatrix":
        """Kronecker product; row (i, k) maps to i * other.nrows + k."""
        out = []
        for r in self._rows:
            for s in other._rows:
                out.append({j * other.ncols + l: a * b for j, a in r.items() for l, b in s.items()})
        return RatMatrix._trusted(self._nrows * other._nrows, self._ncols * other._ncols, out)


# ---------------------------------------------------------------------------
# fraction-free rank


def _integer_rows(m: RatMatrix) -> list[dict[int, int]]:
    rows = []
    for r in m.sparse_rows():
        if not r:
            continue
        if all(v.denominator == 1 for v in r.values()):
            rows.append({j: v.numerator for j, v in r.items()})
            continue
        den = 1
        for v in r.values():
            den = lcm(den, v.denominator)
        rows.append({j: int(v * den) for j, v in r.items()})
    return rows


def _ff_eliminate(rows: Iterable[dict[int, int]]) -> dict[int, dict[int, int]]:
    # Leading entry = largest column index; for boundary-type matrices this
    # keeps fill-in far lower than the usual leftmost-pivot order.
    pivots: dict[int, dict[int, int]] = {}
    for row in sorted(rows, key=len):
        while row:
            c = max(row)
            p = pivots.get(c)
            if p is None:
                pivots[c] = row
                break
            a, b = row[c], p[c]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {k: v * fa for k, v in row.items()} if fa != 1 else dict(row)
            for k, v in p.items():
                x = new.get(k, 0) - v * fb
                if x:
                    new[k] = x
                else:
                    del new[k]
            if new and fa != 1:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    new = {k: v // g for k, v in new.items()}
            row = new
    return pivots


def rank(m: RatMatrix) -> int:
    """Dimension of the column space of ``m``.

    Columns are eliminated as rows: a boundary matrix has short columns of
    fixed length, and this orientation keeps fill-in low.
    """
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return len(_ff_eliminate(_integer_rows(m.T)))


# ---------------------------------------------------------------------------
# reduced row echelon form (Fraction arithmetic)


def _rref(m: RatMatrix) -> tuple[list[int], list[dict[int, Fraction]]]:
    """Sparse Gauss-Jordan: returns pivot columns (ascending) and the matching
    normalized rows, each with a 1 in its pivot column and zeros in the
    other pivot columns."""
    rows = [dict(r) for r in m.sparse_rows() if r]
    pivot_rows: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        # reduce against existing pivots
        for c, p in pivot_rows.items():
            a = row.get(c)
            if a:
                for k, v in p.items():
                    x = row.get(k, 0) - a * v
                    if x:
                        row[k] = x
                    else:
                        row.pop(k, None)
        if not row:
            continue
        c = min(row)
        inv = 1 / row[c]
        row = {k: v * inv for k, v in row.items()}
        # eliminate c from the other pivot rows
        for pc, p in pivot_rows.items():
            a = p.get(c)
            if a:
                for k, v in row.items():
                    x = p.get(k, 0) - a * v
                    if x:
                        p[k] = x
                    else:
                        p.pop(k, None)
        pivot_rows[c] = row
    order = sorted(pivot_rows)
    return order, [pivot_rows[c] for c in order]


def pivot_columns(m: RatMatrix) -> list[int]:
    """Indices of the greedily chosen independent columns of ``m``."""
    return _rref(m)[0]


def kernel_basis(m: RatMatrix) -> list[Vector]:
    """Basis of the null space, one vector per free column (ascending)."""
    piv, rows = _rref(m)
    pivset = set(piv)
    basis = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for c, r in zip(piv, rows):
            a = r.get(f)
            if a:
                v[c] = -a
        basis.append(tuple(v))
    return basis


def image_basis(m: RatMatrix) -> list[Vector]:
    """The columns of ``m`` at its pivot positions; they span the column space."""
    return [m.column(j) for j in pivot_columns(m)]


def coordinates(m: RatMatrix) -> tuple[list[int], RatMatrix]:
    """Pivot columns of ``m`` and the matrix ``R`` with ``m == m[:, piv] @ R``.

    ``R`` is the nonzero part of the reduced row echelon form, so it expresses
    every column of ``m`` in the basis given by :func:`image_basis`.
    """
    piv, rows = _rref(m)
    return piv, RatMatrix._trusted(len(piv), m.ncols, rows)


def solve_consistent(m: RatMatrix, b: Sequence) -> Vector | None:
    """A solution ``x`` of ``m @ x == b`` (free variables set to zero), or
    ``None`` when ``b`` is not in the column space."""
    if len(b) != m.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.nrows}")
    aug_rows = []
    for r, bi in zip(m.sparse_rows(), b):
        d = dict(r)
        bi = as_rational(bi)
        if bi:
            d[m.ncols] = bi
        aug_rows.append(d)
    aug = RatMatrix._trusted(m.nrows, m.ncols + 1, aug_rows)
    piv, rows = _rref(aug)
    if piv and piv[-1] == m.ncols:
        return None
    x = [Fraction(0)] * m.ncols
    for c, r in zip(piv, rows):
        x[c] = r.get(m.ncols, Fraction(0))
    return tuple(x)


def inverse(m: RatMatrix) -> RatMatrix:
    n, k = m.shape
    if n != k:
        raise ValueError("only square matrices can be inverted")
    aug = RatMatrix.hstack([m, RatMatrix.identity(n)])
    piv, rows = _rref(aug)
    if piv != list(range(n)):
        raise ValueError("matrix is singular")
    return RatMatrix._trusted(n, n, [{j - n: v for j, v in r.items() if j >= n} for r in rows])
