"""The category of linear relations: canonical subspaces of k^n (+) k^m."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ArityMismatch, DimensionMismatch, MixedFields, UnknownGenerator
from .field import Field
from .linalg import Matrix, join, kernel_array, rref_array


class LinearRelation:
    """A subspace of k^dom (+) k^cod, held as its rref spanning matrix.

    Columns are ordered domain first, then codomain.
    """

    __slots__ = ("dom", "cod", "space")

    def __init__(self, dom: int, cod: int, space: Matrix, canonical: bool = False):
        if space.cols != dom + cod:
            raise DimensionMismatch(f"{space.cols} columns for a {dom}->{cod} relation")
        if not canonical:
            space = Matrix(space.field, rref_array(space.field, space.data)[0])
        self.dom = dom
        self.cod = cod
        self.space = space

    @classmethod
    def from_rows(cls, field: Field, dom: int, cod: int, rows) -> "LinearRelation":
        return cls(dom, cod, Matrix.from_rows(field, rows, dom + cod))

    @classmethod
    def _from_array(cls, field: Field, dom: int, cod: int, a: np.ndarray,
                    canonical: bool = False) -> "LinearRelation":
        if a.shape[0] == 0:
            a = field.zeros((0, dom + cod))
        return cls(dom, cod, Matrix(field, a), canonical=canonical)

    @property
    def field(self) -> Field:
        return self.space.field

    @property
    def dim(self) -> int:
        return self.space.rows

    def __eq__(self, other):
        if not isinstance(other, LinearRelation):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.space == other.space

    def __hash__(self):
        return hash((self.dom, self.cod, self.space))

    def __repr__(self):
        return f"LinearRelation({self.dom}->{self.cod}, dim {self.dim}, {self.field})"

    def member(self, v: Sequence) -> bool:
        return member(self, v)

    def then(self, other: "LinearRelation") -> "LinearRelation":
        return compose(self, other)

    def __matmul__(self, other):
        return tensor(self, other)


def _check_field(r: LinearRelation, s: LinearRelation):
    if r.field != s.field:
        raise MixedFields(f"{r.field} vs {s.field}")


def _labels(tag: str, n: int) -> list:
    return [(tag, i) for i in range(n)]


def compose(r: LinearRelation, s: LinearRelation) -> LinearRelation:
    """Diagrammatic-order composite: first r, then s."""
    _check_field(r, s)
    if r.cod != s.dom:
        raise ArityMismatch(f"cannot compose {r.dom}->{r.cod} with {s.dom}->{s.cod}")
    a, m, b = _labels("a", r.dom), _labels("m", r.cod), _labels("b", s.cod)
    out = join(r.field, [(r.space.data, a + m), (s.space.data, m + b)], a + b)
    return LinearRelation._from_array(r.field, r.dom, s.cod, out, canonical=True)


def compose_all(first: LinearRelation, *rest: LinearRelation) -> LinearRelation:
    out = first
    for r in rest:
        out = compose(out, r)
    return out


def tensor(r: LinearRelation, s: LinearRelation) -> LinearRelation:
    _check_field(r, s)
    f = r.field
    a = f.zeros((r.dim + s.dim, r.dom + s.dom + r.cod + s.cod))
    n, m = r.dom, s.dom
    a[:r.dim, :n] = r.space.data[:, :n]
    a[:r.dim, n + m:n + m + r.cod] = r.space.data[:, n:]
    a[r.dim:, n:n + m] = s.space.data[:, :m]
    a[r.dim:, n + m + r.cod:] = s.space.data[:, m:]
    return LinearRelation._from_array(f, n + m, r.cod + s.cod, a)


def tensor_all(*rs: LinearRelation) -> LinearRelation:
    out = rs[0]
    for r in rs[1:]:
        out = tensor(out, r)
    return out


def converse(r: LinearRelation) -> LinearRelation:
    d = r.space.data
    return LinearRelation._from_array(r.field, r.cod, r.dom,
                                      np.concatenate([d[:, r.dom:], d[:, :r.dom]], axis=1))


def orthocomplement(r: LinearRelation) -> LinearRelation:
    """Complement under the pairing <x,x'>_dom - <y,y'>_cod.

    The sign on the codomain makes this a covariant functor that fixes
    identities (with the plain dot product the identity would go to the
    antipode). Over F_2 the two pairings coincide.
    """
    f = r.field
    d = r.space.data.copy()
    d[:, r.dom:] = f.neg(d[:, r.dom:])
    return LinearRelation._from_array(f, r.dom, r.cod, kernel_array(f, d), canonical=True)


def member(r: LinearRelation, v: Sequence) -> bool:
    f = r.field
    if len(v) != r.dom + r.cod:
        raise DimensionMismatch(f"vector of length {len(v)} for a {r.dom}->{r.cod} relation")
    row = f.array([list(v)])
    stacked = np.concatenate([r.space.data, row], axis=0)
    return len(rref_array(f, stacked)[1]) == r.dim


def points(r: LinearRelation):
    """Enumerate every vector of the relation (prime fields only, small sizes)."""
    import itertools

    f = r.field
    p = f.p
    basis = r.space.data
    for coeffs in itertools.product(range(p), repeat=r.dim):
        if r.dim:
            yield tuple(int(v) for v in (np.array(coeffs) @ basis) % p)
        else:
            yield tuple([0] * (r.dom + r.cod))


# ---------------------------------------------------------------------------
# generators


def identity(field: Field, n: int = 1) -> LinearRelation:
    return LinearRelation._from_array(field, n, n, np.concatenate([field.eye(n), field.eye(n)], axis=1),
                                      canonical=True)


def z_spider(field: Field, k: int, l: int) -> LinearRelation:
    """All legs equal (copy, delete, their converses and the free state)."""
    return LinearRelation._from_array(field, k, l, field.array([[1] * (k + l)]) if k + l else field.zeros((0, 0)))


def x_spider(field: Field, k: int, l: int) -> LinearRelation:
    """Sum of inputs equals sum of outputs."""
    if k + l == 0:
        return LinearRelation._from_array(field, 0, 0, field.zeros((0, 0)))
    eq = field.array([[1] * k + [-1] * l])
    return LinearRelation._from_array(field, k, l, kernel_array(field, eq), canonical=True)


def scalar(field: Field, a) -> LinearRelation:
    return LinearRelation._from_array(field, 1, 1, field.array([[1, field.raw(a)]]))


def co_scalar(field: Field, a) -> LinearRelation:
    return converse(scalar(field, a))


def antipode(field: Field) -> LinearRelation:
    return scalar(field, -1)


def swap(field: Field) -> LinearRelation:
    return LinearRelation.from_rows(field, 2, 2, [[1, 0, 0, 1], [0, 1, 1, 0]])


def cup(field: Field) -> LinearRelation:
    return LinearRelation.from_rows(field, 0, 2, [[1, 1]])


def cap(field: Field) -> LinearRelation:
    return LinearRelation.from_rows(field, 2, 0, [[1, 1]])


def full(field: Field, dom: int, cod: int) -> LinearRelation:
    return LinearRelation._from_array(field, dom, cod, field.eye(dom + cod), canonical=True)


def zero(field: Field, dom: int, cod: int) -> LinearRelation:
    return LinearRelation._from_array(field, dom, cod, field.zeros((0, dom + cod)))


_GENERATORS = {
    "identity": lambda f: identity(f, 1),
    "swap": swap,
    "cup": cup,
    "cap": cap,
    "antipode": antipode,
    "z_copy": lambda f: z_spider(f, 1, 2),
    "z_unit": lambda f: z_spider(f, 1, 0),
    "x_add": lambda f: x_spider(f, 2, 1),
    "x_unit": lambda f: x_spider(f, 0, 1),
    "co_z_copy": lambda f: z_spider(f, 2, 1),
    "co_z_unit": lambda f: z_spider(f, 0, 1),
    "co_x_add": lambda f: x_spider(f, 1, 2),
    "co_x_unit": lambda f: x_spider(f, 1, 0),
}


def generator(name: str, field: Field, a=None) -> LinearRelation:
    """Subspace semantics of a named generator.

    ``z_unit`` is the counit of copy (delete, 1->0, everything allowed) and
    ``x_unit`` the unit of add (the zero state, 0->1); ``co_`` prefixes give
    the converses. ``scalar``/``co_scalar`` take the parameter ``a``.
    """
    if name == "scalar":
        return scalar(field, a)
    if name == "co_scalar":
        return co_scalar(field, a)
    try:
        return _GENERATORS[name](field)
    except KeyError:
        raise UnknownGenerator(name) from None


GENERATOR_NAMES = tuple(sorted(_GENERATORS)) + ("scalar", "co_scalar")
