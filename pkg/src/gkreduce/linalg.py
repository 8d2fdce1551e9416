"""Exact dense linear algebra over a coefficient field.

Every routine works over a :class:`~gkreduce.symcalc.CoeffField`, so the same
code handles constant Gaussian-rational matrices and matrices of rational
functions on a chart (linear algebra at the generic point). Row reduction picks
the leftmost nonzero column and the first row carrying it.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .common import GKReduceError
from .symcalc import Coeff, CoeffField, SymcalcError, as_rational

logger = logging.getLogger(__name__)

Vector = tuple[Coeff, ...]


class LinearAlgebraError(GKReduceError):
    """Raised for singular systems and malformed matrices."""


class DimensionMismatchError(LinearAlgebraError):
    """Raised when operand shapes are incompatible."""


def vec_add(u: Sequence[Coeff], v: Sequence[Coeff]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatchError(f"Vectors of length {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Sequence[Coeff], v: Sequence[Coeff]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatchError(f"Vectors of length {len(u)} and {len(v)}")
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c: Coeff | int, v: Sequence[Coeff]) -> Vector:
    return tuple(c * a for a in v)


def dot(u: Sequence[Coeff], v: Sequence[Coeff]) -> Coeff:
    if len(u) != len(v):
        raise DimensionMismatchError(f"Vectors of length {len(u)} and {len(v)}")
    total = u[0].field.zero if u else None
    for a, b in zip(u, v, strict=True):
        if a and b:
            total = total + a * b
    return total  # type: ignore[return-value]


def is_zero_vector(v: Sequence[Coeff]) -> bool:
    return not any(v)


def unit_vector(field: CoeffField, n: int, k: int) -> Vector:
    return tuple(field.one if j == k else field.zero for j in range(n))


class Matrix:
    """Immutable dense matrix of :class:`Coeff` entries."""

    __slots__ = ("field", "ncols", "rows")

    def __init__(self, field: CoeffField, rows: Iterable[Sequence[Coeff]], ncols: int | None = None):
        self.field = field
        self.rows: tuple[Vector, ...] = tuple(tuple(r) for r in rows)
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise DimensionMismatchError(f"Ragged matrix rows with lengths {sorted(widths)}")
        self.ncols = widths.pop() if widths else (ncols or 0)
        if ncols is not None and self.rows and self.ncols != ncols:
            raise DimensionMismatchError(f"Expected {ncols} columns, got {self.ncols}")

    @classmethod
    def zeros(cls, field: CoeffField, nrows: int, ncols: int) -> Matrix:
        return cls(field, [[field.zero] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: CoeffField, n: int) -> Matrix:
        return cls(field, [unit_vector(field, n, k) for k in range(n)], n)

    @classmethod
    def from_ints(cls, field: CoeffField, rows: Sequence[Sequence[Any]]) -> Matrix:
        return cls(field, [[field.from_rational(x) for x in row] for row in rows])

    @classmethod
    def from_columns(cls, field: CoeffField, columns: Sequence[Sequence[Coeff]], nrows: int | None = None) -> Matrix:
        if not columns:
            return cls(field, [[] for _ in range(nrows or 0)], 0)
        return cls(field, zip(*columns, strict=True))

    @classmethod
    def block(cls, field: CoeffField, blocks: Sequence[Sequence[Matrix]]) -> Matrix:
        rows: list[Vector] = []
        for block_row in blocks:
            height = block_row[0].nrows
            for i in range(height):
                row: list[Coeff] = []
                for b in block_row:
                    if b.nrows != height:
                        raise DimensionMismatchError("Blocks in one row must share their height")
                    row.extend(b.rows[i])
                rows.append(tuple(row))
        return cls(field, rows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, index: tuple[int, int]) -> Coeff:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> Matrix:
        return Matrix(self.field, self.columns(), self.nrows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix(self.field, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def _check_shape(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise DimensionMismatchError(f"Shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_shape(other)
        return Matrix(self.field, [vec_add(a, b) for a, b in zip(self.rows, other.rows, strict=True)], self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_shape(other)
        return Matrix(self.field, [vec_sub(a, b) for a, b in zip(self.rows, other.rows, strict=True)], self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix(self.field, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c: Coeff | int) -> Matrix:
        return Matrix(self.field, [vec_scale(c, r) for r in self.rows], self.ncols)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise DimensionMismatchError(f"Cannot multiply {self.shape} by {other.shape}")
        zero = self.field.zero
        result = []
        for row in self.rows:
            out = [zero] * other.ncols
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in enumerate(other.rows[k]):
                    if b:
                        out[j] = out[j] + a * b
            result.append(out)
        return Matrix(self.field, result, other.ncols)

    def apply(self, v: Sequence[Coeff]) -> Vector:
        if len(v) != self.ncols:
            raise DimensionMismatchError(f"Cannot apply {self.shape} matrix to a vector of length {len(v)}")
        return tuple(dot(row, v) if row else self.field.zero for row in self.rows)

    def conjugate(self) -> Matrix:
        return Matrix(self.field, [[a.conjugate() for a in r] for r in self.rows], self.ncols)

    @property
    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"Matrix({self.to_strings()})"

    def to_strings(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.rows]

    def evaluate(self, point: Mapping[str, Any]) -> Matrix:
        return Matrix(self.field, [[self.field.from_gaussian(a.evaluate(point)) for a in r] for r in self.rows], self.ncols)

    def nonzero_entries(self) -> list[tuple[int, int, Coeff]]:
        return [(i, j, a) for i, r in enumerate(self.rows) for j, a in enumerate(r) if a]


def residual_text(m: Matrix) -> str:
    """Lists the nonzero entries of a residual matrix, or ``0``."""
    entries = m.nonzero_entries()
    if not entries:
        return "0"
    return "; ".join(f"[{i},{j}] = {a}" for i, j, a in entries)


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    f = m.field
    rows = [list(r) for r in m.rows]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        if r == len(rows):
            break
        pivot = next((k for k in range(r, len(rows)) if rows[k][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inverse = f.one / rows[r][c]
        rows[r] = [inverse * x if x else x for x in rows[r]]
        for k in range(len(rows)):
            factor = rows[k][c]
            if k == r or not factor:
                continue
            rows[k] = [a - factor * b if b else a for a, b in zip(rows[k], rows[r], strict=True)]
        pivots.append(c)
        r += 1
    return Matrix(f, rows, m.ncols), tuple(pivots)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix) -> list[Vector]:
    """Basis of {v : m v = 0}, one vector per free column."""
    f = m.field
    reduced, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for c in free:
        v = [f.zero] * m.ncols
        v[c] = f.one
        for row, p in zip(reduced.rows, pivots, strict=False):
            if row[c]:
                v[p] = -row[c]
        basis.append(tuple(v))
    return basis


def solve(m: Matrix, b: Sequence[Coeff]) -> Vector | None:
    """One solution of m x = b with free variables set to zero, or None if inconsistent."""
    if len(b) != m.nrows:
        raise DimensionMismatchError(f"Right-hand side of length {len(b)} for a {m.shape} system")
    f = m.field
    augmented = Matrix(f, [(*row, rhs) for row, rhs in zip(m.rows, b, strict=True)], m.ncols + 1)
    reduced, pivots = rref(augmented)
    if m.ncols in pivots:
        return None
    x = [f.zero] * m.ncols
    for row, p in zip(reduced.rows, pivots, strict=False):
        x[p] = row[m.ncols]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise DimensionMismatchError(f"Cannot invert a {m.shape} matrix")
    n = m.nrows
    f = m.field
    identity = Matrix.identity(f, n)
    augmented = Matrix(f, [(*a, *b) for a, b in zip(m.rows, identity.rows, strict=True)], 2 * n)
    reduced, pivots = rref(augmented)
    if pivots[:n] != tuple(range(n)):
        raise LinearAlgebraError(f"Matrix of shape {m.shape} is singular at the generic point")
    return Matrix(f, [r[n:] for r in reduced.rows], n)


def is_symmetric(m: Matrix) -> bool:
    return m.is_square and m == m.T


def is_skew(m: Matrix) -> bool:
    return m.is_square and m == -m.T


class Subspace:
    """Span of vectors in a field's n-space, stored as a canonical reduced echelon basis."""

    __slots__ = ("ambient", "basis", "field", "pivots")

    def __init__(self, field: CoeffField, ambient: int, basis: Sequence[Vector], pivots: Sequence[int]):
        self.field = field
        self.ambient = ambient
        self.basis = tuple(basis)
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, field: CoeffField, ambient: int, vectors: Iterable[Sequence[Coeff]]) -> Subspace:
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise DimensionMismatchError(f"Vector of length {len(v)} in a space of dimension {ambient}")
        if not vectors:
            return cls(field, ambient, (), ())
        reduced, pivots = rref(Matrix(field, vectors, ambient))
        return cls(field, ambient, reduced.rows[: len(pivots)], pivots)

    @classmethod
    def zero(cls, field: CoeffField, ambient: int) -> Subspace:
        return cls(field, ambient, (), ())

    @classmethod
    def full(cls, field: CoeffField, ambient: int) -> Subspace:
        return cls.span(field, ambient, [unit_vector(field, ambient, k) for k in range(ambient)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[Coeff]) -> Vector:
        """Remainder of v after clearing the pivot columns; zero iff v lies in the span."""
        out = list(v)
        for row, p in zip(self.basis, self.pivots, strict=True):
            c = out[p]
            if c:
                out = [a - c * b if b else a for a, b in zip(out, row, strict=True)]
        return tuple(out)

    def __contains__(self, v: object) -> bool:
        if not isinstance(v, tuple | list):
            return False
        return is_zero_vector(self.reduce(v))

    def _check(self, other: Subspace) -> None:
        if self.ambient != other.ambient:
            raise DimensionMismatchError(f"Subspaces of {self.ambient}- and {other.ambient}-space")

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace.span(self.field, self.ambient, [*self.basis, *other.basis])

    def __le__(self, other: Subspace) -> bool:
        self._check(other)
        return all(v in other for v in self.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def complement(self) -> Subspace:
        """Orthogonal complement for the plain bilinear dot product."""
        if not self.basis:
            return Subspace.full(self.field, self.ambient)
        return Subspace.span(self.field, self.ambient, nullspace(self.matrix()))

    def intersection(self, other: Subspace) -> Subspace:
        self._check(other)
        if not self.basis or not other.basis:
            return Subspace.zero(self.field, self.ambient)
        return (self.complement() + other.complement()).complement()

    def image(self, m: Matrix) -> Subspace:
        if m.ncols != self.ambient:
            raise DimensionMismatchError(f"Cannot map {self.ambient}-space by a {m.shape} matrix")
        return Subspace.span(self.field, m.nrows, [m.apply(v) for v in self.basis])

    def matrix(self) -> Matrix:
        """Basis vectors as rows."""
        return Matrix(self.field, self.basis, self.ambient)

    def column_matrix(self) -> Matrix:
        return Matrix.from_columns(self.field, self.basis, self.ambient)

    def extend_from(self, vectors: Iterable[Sequence[Coeff]]) -> list[Vector]:
        """Greedily picks vectors that enlarge this span; returns the picks in order."""
        current = self
        picked = []
        for v in vectors:
            if v in current:
                continue
            picked.append(tuple(v))
            current = Subspace.span(self.field, self.ambient, [*current.basis, v])
        return picked


def signature(m: Matrix, point: Mapping[str, Any] | None = None) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a real symmetric matrix at a point.

    The characteristic polynomial is exact and all its roots are real, so
    Descartes' rule of signs counts positive and negative roots exactly.
    """
    if not is_symmetric(m):
        raise LinearAlgebraError("Signature is only defined for symmetric matrices")
    values = m.evaluate(point or {})
    try:
        rows = [[as_rational(a.constant_value()) for a in r] for r in values.rows]
    except SymcalcError as e:
        raise LinearAlgebraError(f"Signature needs a real matrix: {e}") from e
    n = m.nrows
    if n == 0:
        return 0, 0, 0
    coefficients = list(DomainMatrix(rows, (n, n), QQ).charpoly())
    zeros = 0
    while coefficients and not coefficients[-1]:
        coefficients.pop()
        zeros += 1
    degree = len(coefficients) - 1
    positive = _sign_changes(coefficients)
    negative = _sign_changes([c if (degree - k) % 2 == 0 else -c for k, c in enumerate(coefficients)])
    return positive, negative, zeros


def _sign_changes(coefficients: Sequence[Any]) -> int:
    signs = [c > 0 for c in coefficients if c]
    return sum(1 for a, b in zip(signs, signs[1:], strict=False) if a != b)


def is_positive_definite(m: Matrix, point: Mapping[str, Any] | None = None) -> bool:
    positive, _, _ = signature(m, point)
    return positive == m.nrows
