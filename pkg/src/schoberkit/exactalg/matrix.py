"""Dense exact-rational matrices and the linear algebra built on row reduction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import backend

ZERO = Fraction(0)
ONE = Fraction(1)

Vector = tuple[Fraction, ...]


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entry count does not match shape {self.rows}x{self.cols}")

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        data = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        row = (ZERO,) * cols
        return cls(rows, cols, (row,) * rows)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def scalar(cls, n: int, c) -> "RatMatrix":
        c = to_fraction(c)
        return cls(n, n, tuple(tuple(c if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RatMatrix":
        cols = [tuple(to_fraction(x) for x in c) for c in columns]
        return cls(rows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(rows)))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["RatMatrix | None"]], row_sizes: Sequence[int],
              col_sizes: Sequence[int]) -> "RatMatrix":
        """Assemble a block matrix; None stands for a zero block."""
        out: list[list[Fraction]] = []
        for bi, rs in enumerate(row_sizes):
            rows = [[ZERO] * sum(col_sizes) for _ in range(rs)]
            off = 0
            for bj, cs in enumerate(col_sizes):
                b = blocks[bi][bj]
                if b is not None:
                    if (b.rows, b.cols) != (rs, cs):
                        raise ValueError(f"block ({bi},{bj}) has shape {b.shape}, expected {(rs, cs)}")
                    for i in range(rs):
                        src = b.entries[i]
                        dst = rows[i]
                        for j in range(cs):
                            if src[j]:
                                dst[off + j] = src[j]
                off += cs
            out.extend(rows)
        return cls(sum(row_sizes), sum(col_sizes), tuple(tuple(r) for r in out))

    # basic queries

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)))

    # arithmetic

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(self.rows, self.cols,
                         tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.entries))

    def scale(self, c) -> "RatMatrix":
        c = to_fraction(c)
        return RatMatrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.cols
        brows = other.entries
        out = []
        for r in self.entries:
            acc = [ZERO] * ocols
            for k, a in enumerate(r):
                if a:
                    b = brows[k]
                    for j in range(ocols):
                        if b[j]:
                            acc[j] += a * b[j]
            out.append(tuple(acc))
        return RatMatrix(self.rows, ocols, tuple(out))

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * x for a, x in zip(r, v) if a and x), ZERO) for r in self.entries)

    def _same_shape(self, other: "RatMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    # serialization

    def to_json(self) -> list[list[str]]:
        return [[frac_str(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data: list[list[str]], rows: int, cols: int) -> "RatMatrix":
        if len(data) != rows:
            raise ValueError(f"expected {rows} rows, got {len(data)}")
        m = cls.from_rows(data, cols) if rows else cls.zeros(0, cols)
        if m.cols != cols:
            raise ValueError(f"expected {cols} columns")
        return m


@dataclass(frozen=True)
class KernelImage:
    rank: int
    kernel: list[Vector]
    image: list[Vector]


def rref(m: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    return backend.rref([list(r) for r in m.entries], m.cols)


def rank(m: RatMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(rref(m)[1])


def rank_kernel_image(m: RatMatrix) -> KernelImage:
    """Rank, a kernel basis and an image basis (columns of m at pivot positions).

    Kernel vectors are checked by substitution before returning.
    """
    red, pivots = rref(m)
    pivset = set(pivots)
    kernel: list[Vector] = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [ZERO] * m.cols
        v[free] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[free]
        kernel.append(tuple(v))
    for v in kernel:
        if any(m.apply(v)):
            raise AssertionError("kernel vector failed substitution check")
    image = [m.column(p) for p in pivots]
    return KernelImage(len(pivots), kernel, image)


def kernel_basis(m: RatMatrix) -> list[Vector]:
    return rank_kernel_image(m).kernel


def solve(a: RatMatrix, b: Sequence[Fraction]) -> Vector | None:
    """One solution x of a x = b, or None when the system is inconsistent."""
    if len(b) != a.rows:
        raise ValueError("right-hand side length mismatch")
    aug = [list(r) + [to_fraction(x)] for r, x in zip(a.entries, b)]
    red, pivots = backend.rref(aug, a.cols + 1)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [ZERO] * a.cols
    for row, p in zip(red, pivots):
        x[p] = row[a.cols]
    x = tuple(x)
    if a.apply(x) != tuple(to_fraction(v) for v in b):
        raise AssertionError("solution failed substitution check")
    return x


def solve_matrix(a: RatMatrix, b: RatMatrix) -> RatMatrix | None:
    """Solve a X = b column by column; None if some column is inconsistent."""
    if a.rows != b.rows:
        raise ValueError("row count mismatch")
    aug = [list(r) + list(s) for r, s in zip(a.entries, b.entries)]
    red, pivots = backend.rref(aug, a.cols + b.cols)
    if any(p >= a.cols for p in pivots):
        return None
    x = [[ZERO] * b.cols for _ in range(a.cols)]
    for row, p in zip(red, pivots):
        x[p] = row[a.cols:]
    out = RatMatrix(a.cols, b.cols, tuple(tuple(r) for r in x))
    if a @ out != b:
        raise AssertionError("matrix solution failed substitution check")
    return out


def inverse(m: RatMatrix) -> RatMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    x = solve_matrix(m, RatMatrix.identity(m.rows)) if m.rows else m
    if x is None:
        raise ZeroDivisionError("matrix is singular")
    return x


def det(m: RatMatrix) -> Fraction:
    """Determinant by exact elimination, independent of the row-reduction kernel."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    a = [list(r) for r in m.entries]
    n = m.rows
    result = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            result = -result
        p = a[c][c]
        result *= p
        for i in range(c + 1, n):
            f = a[i][c] / p
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return result


def complement_basis(sub: Iterable[Vector], space: Iterable[Vector], dim: int) -> list[int]:
    """Indices into `space` whose vectors extend a basis of span(sub) to span(sub + space)."""
    sub = list(sub)
    space = list(space)
    cols = sub + space
    if not cols:
        return []
    m = RatMatrix.from_columns(cols, dim)
    _, pivots = rref(m)
    return [p - len(sub) for p in pivots if p >= len(sub)]
