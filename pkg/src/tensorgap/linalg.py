"""Exact matrix algebra over Q, F_p and K(eps).

Matrices are immutable row-major arrays of Scalars (over Q or F_p) or
RatFuncs (over K(eps)), tagged with their ring.  Rank and determinant use
fraction-free Bareiss elimination over Q to keep intermediate values small,
a plain modular elimination over F_p (rows packed into bitmasks when p = 2),
and ordinary Gaussian elimination with normalized rational-function
arithmetic over K(eps).  All results are exact.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatchError, FieldMismatchError
from .fields import FieldSpec, Scalar
from .ratfunc import EpsField, RatFunc


class Matrix:
    """Immutable rows x cols matrix over a FieldSpec or EpsField."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, rows: int, cols: int, entries):
        entries = tuple(ring.coerce(e) for e in entries)
        if len(entries) != rows * cols:
            raise DimensionMismatchError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_rows(cls, ring, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise DimensionMismatchError("ragged rows")
        return cls(ring, n, m, [e for r in rows for e in r])

    @classmethod
    def identity(cls, ring, n: int):
        one, zero = ring.one(), ring.zero()
        return cls(ring, n, n, [one if i == j else zero for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, ring, rows: int, cols: int):
        zero = ring.zero()
        return cls(ring, rows, cols, [zero] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.ring,
            self.cols,
            self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.entries))

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ring != other.ring:
            raise FieldMismatchError("matrix product over different rings")
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = self.ring.zero()
                for t in range(self.cols):
                    a = ri[t]
                    if a:
                        acc = acc + a * other.entries[t * other.cols + j]
                out.append(acc)
        return Matrix(self.ring, self.rows, other.cols, out)

    def scale(self, c) -> "Matrix":
        c = self.ring.coerce(c)
        return Matrix(self.ring, self.rows, self.cols, [c * e for e in self.entries])

    def apply(self, vector):
        """Matrix-vector product; vector is a sequence of ring elements."""
        vector = [self.ring.coerce(v) for v in vector]
        if len(vector) != self.cols:
            raise DimensionMismatchError("vector length does not match column count")
        out = []
        for i in range(self.rows):
            acc = self.ring.zero()
            for a, v in zip(self.row(i), vector):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def __repr__(self):
        body = "; ".join(
            ", ".join(str(e) for e in self.row(i)) for i in range(self.rows)
        )
        return f"Matrix({self.ring.name}, [{body}])"


# -- fast integer kernels over F_p --------------------------------------------


def _gf2_rank(rows: list[int]) -> int:
    rank = 0
    for row in rows:
        cur = row
        for pivot in rows[:rank]:
            low = pivot & -pivot
            if cur & low:
                cur ^= pivot
        if cur:
            rows[rank] = cur
            rank += 1
    return rank


def _fp_rank(rows: list[list[int]], p: int) -> int:
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if rows[r][col] % p:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        prow = rows[rank]
        for r in range(rank + 1, nrows):
            f = rows[r][col]
            if f:
                f = f * inv % p
                rr = rows[r]
                for c in range(col, ncols):
                    rr[c] = (rr[c] - f * prow[c]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def _bareiss_rank(rows: list[list[Fraction]]) -> int:
    """Fraction-free elimination; divisions by the previous pivot are exact."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank = 0
    prev = Fraction(1)
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        pv = prow[col]
        for r in range(rank + 1, nrows):
            rr = rows[r]
            f = rr[col]
            for c in range(col, ncols):
                rr[c] = (rr[c] * pv - f * prow[c]) / prev
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def _generic_rank(rows) -> int:
    """Gaussian elimination with field division; used over K(eps)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        inv = prow[col].inverse()
        for r in range(rank + 1, nrows):
            f = rows[r][col]
            if f:
                f = f * inv
                rr = rows[r]
                for c in range(col, ncols):
                    rr[c] = rr[c] - f * prow[c]
        rank += 1
        if rank == nrows:
            break
    return rank


def mat_rank(m: Matrix) -> int:
    """Exact rank over Q (Bareiss), F_p (modular), or K(eps) (Gaussian)."""
    if isinstance(m.ring, FieldSpec):
        p = m.ring.p
        if p is None:
            return _bareiss_rank([[e.value for e in m.row(i)] for i in range(m.rows)])
        if p == 2:
            rows = []
            for i in range(m.rows):
                bits = 0
                for j, e in enumerate(m.row(i)):
                    if e.value:
                        bits |= 1 << j
                rows.append(bits)
            return _gf2_rank(rows)
        return _fp_rank([[e.value for e in m.row(i)] for i in range(m.rows)], p)
    return _generic_rank(m.to_rows())


def mat_solve(a: Matrix, b):
    """One exact solution of a x = b, or None when the system is inconsistent.

    b is a sequence of ring elements of length a.rows; free variables are set
    to zero.  Works over Q, F_p and K(eps).
    """
    b = [a.ring.coerce(v) for v in b]
    if len(b) != a.rows:
        raise DimensionMismatchError(f"matrix has {a.rows} rows but b has {len(b)}")
    ring = a.ring
    rows = [list(a.row(i)) + [b[i]] for i in range(a.rows)]
    ncols = a.cols
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        inv = prow[col].inverse()
        for r in range(rank + 1, len(rows)):
            f = rows[r][col]
            if f:
                f = f * inv
                rr = rows[r]
                for c in range(col, ncols + 1):
                    rr[c] = rr[c] - f * prow[c]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(rows)):
        if rows[r][ncols]:
            return None
    x = [ring.zero()] * ncols
    for r in range(rank - 1, -1, -1):
        col = pivots[r]
        acc = rows[r][ncols]
        for c in range(col + 1, ncols):
            if rows[r][c] and x[c]:
                acc = acc - rows[r][c] * x[c]
        x[col] = acc / rows[r][col]
    return x


def mat_det(m: Matrix):
    """Exact determinant of a square matrix (any supported ring)."""
    if m.rows != m.cols:
        raise DimensionMismatchError("determinant of a non-square matrix")
    n = m.rows
    ring = m.ring
    if n == 0:
        return ring.one()
    rows = m.to_rows()
    det = ring.one()
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            return ring.zero()
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        prow = rows[col]
        det = det * prow[col]
        inv = prow[col].inverse()
        for r in range(col + 1, n):
            f = rows[r][col]
            if f:
                f = f * inv
                rr = rows[r]
                for c in range(col, n):
                    rr[c] = rr[c] - f * prow[c]
    return det


def mat_inverse(m: Matrix) -> Matrix:
    """Exact inverse of a square invertible matrix."""
    if m.rows != m.cols:
        raise DimensionMismatchError("inverse of a non-square matrix")
    n = m.rows
    cols = []
    for j in range(n):
        e = [m.ring.one() if i == j else m.ring.zero() for i in range(n)]
        x = mat_solve(m, e)
        if x is None:
            raise ZeroDivisionError("matrix is singular")
        cols.append(x)
    return Matrix(m.ring, n, n, [cols[j][i] for i in range(n) for j in range(n)])


def lift_matrix(m: Matrix, ring: EpsField) -> Matrix:
    """Reinterpret a base-field matrix over K(eps)."""
    if isinstance(m.ring, EpsField):
        if m.ring != ring:
            raise FieldMismatchError("matrix already over a different K(eps)")
        return m
    return Matrix(ring, m.rows, m.cols, [ring.lift(e) for e in m.entries])


def substitute_matrix(m: Matrix, n: int) -> Matrix:
    """Entrywise eps -> eps^n substitution for a K(eps) matrix."""
    if not isinstance(m.ring, EpsField):
        raise FieldMismatchError("power substitution needs a K(eps) matrix")
    return Matrix(m.ring, m.rows, m.cols, [e.substitute_power(n) for e in m.entries])
