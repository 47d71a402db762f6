"""Dense exact matrices and the row reduction behind every canonical form.

The heavy lifting happens on raw numpy arrays (``rref_array``, ``join``);
``Matrix`` is the immutable public wrapper around such an array.
"""

from __future__ import annotations

from typing import Hashable, Sequence

import numpy as np

from .errors import DimensionMismatch, MixedFields
from .field import Field


def rref_array(field: Field, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` with zero rows dropped."""
    a = field.reduce(np.array(a, dtype=field.dtype, copy=True))
    if a.ndim != 2:
        raise DimensionMismatch("expected a 2-d array")
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    prime = field.is_prime
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(field.nonzero(a[r:, c]))
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        lead = a[r, c]
        if prime:
            if lead != 1:
                a[r] = (a[r] * field.inv(lead)) % field.p
            others = np.flatnonzero(a[:, c])
            others = others[others != r]
            if others.size:
                a[others] = (a[others] - np.outer(a[others, c], a[r])) % field.p
        else:
            if lead != 1:
                a[r] = a[r] * field.inv(lead)
            others = np.flatnonzero(field.nonzero(a[:, c]))
            others = others[others != r]
            for k in others:
                a[k] = a[k] - a[k, c] * a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def kernel_array(field: Field, a: np.ndarray) -> np.ndarray:
    """Rows spanning ``{v : a v^T = 0}``, in rref."""
    n = a.shape[1]
    red, pivots = rref_array(field, a)
    free = [c for c in range(n) if c not in set(pivots)]
    out = field.zeros((len(free), n))
    for t, f in enumerate(free):
        out[t, f] = field.one()
        for i, pc in enumerate(pivots):
            out[t, pc] = field.neg(red[i, f])
    return rref_array(field, out)[0]


def join(field: Field, parts: Sequence[tuple[np.ndarray, Sequence[Hashable]]],
         keep: Sequence[Hashable]) -> np.ndarray:
    """Relational join of labelled spans, projected onto ``keep``.

    Each part is a spanning matrix whose columns carry labels. Columns with
    the same label (within or across parts) are forced equal; labels not in
    ``keep`` are quantified away. A kept label that occurs nowhere is free.
    The result spans exactly the set of kept values of the joint solutions,
    and comes back already in rref for the ``keep`` column order.
    """
    where: dict[Hashable, list[tuple[int, int]]] = {}
    for pi, (_, labels) in enumerate(parts):
        for ci, lab in enumerate(labels):
            where.setdefault(lab, []).append((pi, ci))
    offsets = []
    total = 0
    for a, labels in parts:
        if a.shape[1] != len(labels):
            raise DimensionMismatch("label count does not match matrix width")
        offsets.append(total)
        total += a.shape[0]
    free = [lab for lab in dict.fromkeys(keep) if lab not in where]
    total += len(free)

    mids = [(lab, occ) for lab, occ in where.items() if len(occ) > 1]
    n_mid = sum(len(occ) - 1 for _, occ in mids)
    out = field.zeros((total, n_mid + len(keep)))
    col = 0
    for lab, occ in mids:
        p0, c0 = occ[0]
        a0 = parts[p0][0]
        for pj, cj in occ[1:]:
            rows0 = slice(offsets[p0], offsets[p0] + a0.shape[0])
            out[rows0, col] = out[rows0, col] + a0[:, c0]
            aj = parts[pj][0]
            rowsj = slice(offsets[pj], offsets[pj] + aj.shape[0])
            out[rowsj, col] = out[rowsj, col] - aj[:, cj]
            col += 1
    for k, lab in enumerate(keep):
        if lab in where:
            p0, c0 = where[lab][0]
            a0 = parts[p0][0]
            out[offsets[p0]:offsets[p0] + a0.shape[0], n_mid + k] = a0[:, c0]
        else:
            out[total - len(free) + free.index(lab), n_mid + k] = field.one()
    red, pivots = rref_array(field, out)
    first = next((i for i, pc in enumerate(pivots) if pc >= n_mid), len(pivots))
    return red[first:, n_mid:]


class Matrix:
    """Immutable dense matrix over a field."""

    __slots__ = ("field", "data")

    def __init__(self, field: Field, data):
        data = np.array(data, dtype=field.dtype, copy=True)
        if data.ndim != 2:
            raise DimensionMismatch("matrix data must be 2-d")
        data = field.reduce(data)
        data.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", data)

    def __setattr__(self, key, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_rows(cls, field: Field, rows, cols: int | None = None) -> "Matrix":
        rows = list(rows)
        if not rows:
            return cls(field, field.zeros((0, cols or 0)))
        return cls(field, field.array(rows))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, field.eye(n))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, field.zeros((rows, cols)))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def entry(self, i: int, j: int):
        return self.field.element(self.data[i, j])

    def tolist(self) -> list[list]:
        return [[self.field.element(v) for v in row] for row in self.data]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T)

    T = property(transpose)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.all(self.data == other.data)))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.data.flat)))

    def __matmul__(self, other):
        return matmul(self, other)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.render(v) for v in row) for row in self.data)
        return f"Matrix[{self.field}]({self.rows}x{self.cols}: {body})"


def _same_field(a: Matrix, b: Matrix):
    if a.field != b.field:
        raise MixedFields(f"{a.field} vs {b.field}")


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    red, pivots = rref_array(m.field, m.data)
    return Matrix(m.field, red), pivots


def rank(m: Matrix) -> int:
    return len(rref_array(m.field, m.data)[1])


def kernel(m: Matrix) -> Matrix:
    return Matrix(m.field, kernel_array(m.field, m.data))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    _same_field(a, b)
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return Matrix(a.field, a.field.matmul(a.data, b.data))


def is_rref(m: Matrix) -> bool:
    return rref(m)[0] == m
