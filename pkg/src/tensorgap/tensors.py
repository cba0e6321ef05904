"""Dense order-k tensors and the restriction calculus.

A :class:`Tensor` is an immutable dense array over Q, F_p or K(eps), with
row-major flat storage and 0-based indices throughout (the customary basis
vectors e_1, e_2 are indices 0, 1 here).  Alongside the standard tensors
(unit tensor, W-tensor) this module provides the Kronecker product, the
I-vs-complement flattenings, and restriction by a tuple of linear maps, one
per factor.

Kronecker index convention: the combined index on factor j is
``i_j * m_j + i'_j`` (left factor major); tests depend on it bit-exactly.
"""

from __future__ import annotations

import itertools

from .errors import DimensionMismatchError, FieldMismatchError
from .fields import FieldSpec
from .linalg import Matrix
from .ratfunc import EpsField


class Tensor:
    """Immutable dense tensor of order k >= 1 over a FieldSpec or EpsField."""

    __slots__ = ("ring", "dims", "entries", "_strides")

    def __init__(self, ring, dims, entries):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionMismatchError(f"bad tensor dimensions {dims}")
        entries = tuple(ring.coerce(e) for e in entries)
        size = 1
        for d in dims:
            size *= d
        if len(entries) != size:
            raise DimensionMismatchError(f"dims {dims} need {size} entries, got {len(entries)}")
        strides = [1] * len(dims)
        for a in range(len(dims) - 2, -1, -1):
            strides[a] = strides[a + 1] * dims[a + 1]
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_strides", tuple(strides))

    def __setattr__(self, name, value):
        raise AttributeError("Tensor is immutable")

    @classmethod
    def zeros(cls, ring, dims):
        size = 1
        for d in dims:
            size *= d
        return cls(ring, dims, [ring.zero()] * size)

    @classmethod
    def from_dict(cls, ring, dims, items):
        """Build from a {multi-index: value} mapping; omitted entries are zero."""
        t = cls.zeros(ring, dims)
        entries = list(t.entries)
        for idx, value in items.items():
            entries[t.flat_index(idx)] = ring.coerce(value)
        return cls(ring, dims, entries)

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return len(self.entries)

    def flat_index(self, idx) -> int:
        idx = tuple(idx)
        if len(idx) != len(self.dims):
            raise DimensionMismatchError(f"index {idx} has wrong length for dims {self.dims}")
        flat = 0
        for i, d, s in zip(idx, self.dims, self._strides):
            if not 0 <= i < d:
                raise DimensionMismatchError(f"index {idx} out of range for dims {self.dims}")
            flat += i * s
        return flat

    def multi_index(self, flat: int):
        idx = []
        for s in self._strides:
            idx.append(flat // s)
            flat %= s
        return tuple(idx)

    def __getitem__(self, idx):
        if isinstance(idx, int):
            idx = (idx,)
        return self.entries[self.flat_index(idx)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, Tensor)
            and self.ring == other.ring
            and self.dims == other.dims
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.dims, self.entries))

    def __add__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        if self.ring != other.ring or self.dims != other.dims:
            raise DimensionMismatchError("tensor sum needs equal rings and dims")
        return Tensor(self.ring, self.dims, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        if self.ring != other.ring or self.dims != other.dims:
            raise DimensionMismatchError("tensor difference needs equal rings and dims")
        return Tensor(self.ring, self.dims, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return Tensor(self.ring, self.dims, [-e for e in self.entries])

    def scale(self, c) -> "Tensor":
        c = self.ring.coerce(c)
        return Tensor(self.ring, self.dims, [c * e for e in self.entries])

    def slice_along(self, axis: int, index: int) -> "Tensor":
        """The order-(k-1) slice at a fixed index of one axis (k >= 2)."""
        if self.order < 2:
            raise DimensionMismatchError("cannot slice an order-1 tensor")
        new_dims = self.dims[:axis] + self.dims[axis + 1 :]
        out = []
        for rest in itertools.product(*(range(d) for d in new_dims)):
            idx = rest[:axis] + (index,) + rest[axis:]
            out.append(self.entries[self.flat_index(idx)])
        return Tensor(self.ring, new_dims, out)

    def permute_axes(self, perm) -> "Tensor":
        """Reorder factors; perm[a] is the source axis placed at position a."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.order)):
            raise DimensionMismatchError(f"bad axis permutation {perm}")
        new_dims = tuple(self.dims[a] for a in perm)
        out = [None] * self.size
        t = Tensor.zeros(self.ring, new_dims)
        for flat, e in enumerate(self.entries):
            idx = self.multi_index(flat)
            out[t.flat_index(tuple(idx[a] for a in perm))] = e
        return Tensor(self.ring, new_dims, out)

    def __repr__(self):
        shape = "x".join(str(d) for d in self.dims)
        nz = sum(1 for e in self.entries if e)
        return f"Tensor({self.ring.name}, {shape}, {nz} nonzero)"


def unit_tensor(k: int, r: int, field: FieldSpec) -> Tensor:
    """The diagonal tensor of order k and rank r: ones at (i, ..., i)."""
    if k < 2 or r < 1:
        raise ValueError("unit tensor needs k >= 2 and r >= 1")
    return Tensor.from_dict(field, (r,) * k, {(i,) * k: field.one() for i in range(r)})


def w_tensor(k: int, dims, field: FieldSpec) -> Tensor:
    """The order-k W-tensor: ones exactly on the permutations of (1, 0, ..., 0)."""
    dims = tuple(dims)
    if k < 2 or len(dims) != k:
        raise ValueError("W-tensor needs k >= 2 matching dims")
    if any(d < 2 for d in dims):
        raise DimensionMismatchError(f"W-tensor needs every dimension >= 2, got {dims}")
    items = {}
    for t in range(k):
        idx = [0] * k
        idx[t] = 1
        items[tuple(idx)] = field.one()
    return Tensor.from_dict(field, dims, items)


def kronecker(t: Tensor, s: Tensor) -> Tensor:
    """Factor-wise Kronecker product; combined index i_j * m_j + i'_j."""
    if t.order != s.order:
        raise DimensionMismatchError("Kronecker product needs equal orders")
    if t.ring != s.ring:
        raise FieldMismatchError("Kronecker product needs a common field")
    dims = tuple(n * m for n, m in zip(t.dims, s.dims))
    out = Tensor.zeros(t.ring, dims)
    entries = list(out.entries)
    for ft, et in enumerate(t.entries):
        if not et:
            continue
        it = t.multi_index(ft)
        for fs, es in enumerate(s.entries):
            if not es:
                continue
            js = s.multi_index(fs)
            combined = tuple(a * m + b for a, m, b in zip(it, s.dims, js))
            entries[out.flat_index(combined)] = et * es
    return Tensor(t.ring, dims, entries)


def _check_axes(t: Tensor, axes) -> tuple[int, ...]:
    axes = tuple(sorted(set(axes)))
    if not axes or len(axes) == t.order:
        raise DimensionMismatchError("flattening needs a nonempty proper subset of axes")
    if any(a < 0 or a >= t.order for a in axes):
        raise DimensionMismatchError(f"axes {axes} out of range for order {t.order}")
    return axes


def flatten(t: Tensor, axes) -> Matrix:
    """The I-flattening: rows indexed by the axes in I, columns by the rest.

    Both sides are enumerated row-major in ascending axis order.
    """
    axes = _check_axes(t, axes)
    co_axes = tuple(a for a in range(t.order) if a not in axes)
    nrows = 1
    for a in axes:
        nrows *= t.dims[a]
    ncols = t.size // nrows
    entries = [None] * (nrows * ncols)
    row_ranges = [range(t.dims[a]) for a in axes]
    col_ranges = [range(t.dims[a]) for a in co_axes]
    r = 0
    for ridx in itertools.product(*row_ranges):
        c = 0
        for cidx in itertools.product(*col_ranges):
            idx = [0] * t.order
            for a, i in zip(axes, ridx):
                idx[a] = i
            for a, i in zip(co_axes, cidx):
                idx[a] = i
            entries[r * ncols + c] = t.entries[t.flat_index(idx)]
            c += 1
        r += 1
    return Matrix(t.ring, nrows, ncols, entries)


def mode_apply(t: Tensor, m: Matrix, axis: int) -> Tensor:
    """Apply one linear map along a single axis."""
    if m.ring != t.ring:
        raise FieldMismatchError("map and tensor over different rings")
    if m.cols != t.dims[axis]:
        raise DimensionMismatchError(
            f"map is {m.rows}x{m.cols} but axis {axis} has dimension {t.dims[axis]}"
        )
    new_dims = t.dims[:axis] + (m.rows,) + t.dims[axis + 1 :]
    out = Tensor.zeros(t.ring, new_dims)
    entries = list(out.entries)
    for flat, e in enumerate(t.entries):
        if not e:
            continue
        idx = t.multi_index(flat)
        i = idx[axis]
        for j in range(m.rows):
            c = m[j, i]
            if not c:
                continue
            jdx = idx[:axis] + (j,) + idx[axis + 1 :]
            f = out.flat_index(jdx)
            entries[f] = entries[f] + c * e
    return Tensor(t.ring, new_dims, entries)


def restrict(t: Tensor, maps) -> Tensor:
    """Restriction by a tuple of linear maps, one map per factor."""
    maps = tuple(maps)
    if len(maps) != t.order:
        raise DimensionMismatchError(f"need {t.order} maps, got {len(maps)}")
    out = t
    for axis, m in enumerate(maps):
        out = mode_apply(out, m, axis)
    return out


def identity_maps(t: Tensor):
    """The identity map tuple for a tensor's shape."""
    return tuple(Matrix.identity(t.ring, d) for d in t.dims)


def compose_maps(outer, inner):
    """Componentwise matrix product: (outer o inner) as a map tuple."""
    if len(outer) != len(inner):
        raise DimensionMismatchError("map tuples of different lengths")
    return tuple(o * i for o, i in zip(outer, inner))


def pad(t: Tensor, dims) -> Tensor:
    """Embed a tensor into larger dimensions, zero-filling new coordinates."""
    dims = tuple(dims)
    if len(dims) != t.order or any(d < n for d, n in zip(dims, t.dims)):
        raise DimensionMismatchError(f"cannot pad {t.dims} into {dims}")
    out = Tensor.zeros(t.ring, dims)
    entries = list(out.entries)
    for flat, e in enumerate(t.entries):
        if e:
            entries[out.flat_index(t.multi_index(flat))] = e
    return Tensor(t.ring, dims, entries)


def lift_tensor(t: Tensor, ring: EpsField) -> Tensor:
    """Reinterpret a base-field tensor over K(eps)."""
    if isinstance(t.ring, EpsField):
        if t.ring != ring:
            raise FieldMismatchError("tensor already over a different K(eps)")
        return t
    return Tensor(ring, t.dims, [ring.lift(e) for e in t.entries])


def as_matrix(t: Tensor) -> Matrix:
    """View an order-2 tensor as a matrix."""
    if t.order != 2:
        raise DimensionMismatchError("only order-2 tensors are matrices")
    return Matrix(t.ring, t.dims[0], t.dims[1], t.entries)


def from_matrix(m: Matrix) -> Tensor:
    return Tensor(m.ring, (m.rows, m.cols), m.entries)
