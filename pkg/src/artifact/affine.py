"""Affine relations and affine Lagrangian relations.

A nonempty affine relation is stored in homogeneous form: the rref of
``[[1 | offset], [0 | linear rows]]``. The first row's tail is then the
canonical coset representative (zero on the linear pivot columns). Empty is
its own value, one per arity.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from . import linrel as lr
from . import symplectic as sp
from .errors import ArityMismatch, DimensionMismatch, FieldNotPrime, IndexOutOfRange, MixedFields
from .field import Field
from .linalg import join, kernel_array, rref_array
from .linrel import LinearRelation
from .symplectic import GradedRelation

T = sp.T


class _Affine:
    """Shared machinery; subclasses fix the linear type and column labels."""

    __slots__ = ("dom", "cod", "field", "offset", "linear")
    _linear_cls: type = LinearRelation

    def __init__(self, field: Field, dom: int, cod: int, hom: np.ndarray | None):
        """``hom`` spans the homogenised space over [t | columns]; None means Empty."""
        self.field = field
        self.dom = dom
        self.cod = cod
        w = self.width()
        if hom is not None:
            if hom.shape[1] != w + 1:
                raise DimensionMismatch(f"{hom.shape[1] - 1} columns, expected {w}")
            hom, piv = rref_array(field, hom)
            if not piv or piv[0] != 0:
                hom = None
        if hom is None:
            self.offset = None
            self.linear = None
        else:
            off = hom[0, 1:].copy()
            off.flags.writeable = False
            self.offset = off
            self.linear = self._wrap(hom[1:, 1:])

    # subclass hooks
    def width(self) -> int:
        return self.dom + self.cod

    def _wrap(self, rows: np.ndarray):
        return LinearRelation._from_array(self.field, self.dom, self.cod, rows, canonical=True)

    def labels(self, dom_tag: str, cod_tag: str) -> list:
        return [(dom_tag, i) for i in range(self.dom)] + [(cod_tag, j) for j in range(self.cod)]

    # construction
    @classmethod
    def empty(cls, field: Field, dom: int, cod: int):
        return cls(field, dom, cod, None)

    @classmethod
    def coset(cls, offset: Sequence, linear):
        f = linear.field
        off = f.array([list(offset)]) if len(offset) else f.zeros((1, 0))
        return cls(f, linear.dom, linear.cod, _homogenise(f, off[0], linear.space.data))

    @classmethod
    def lift(cls, linear):
        return cls.coset([0] * linear.space.cols, linear)

    @property
    def is_empty(self) -> bool:
        return self.offset is None

    def hom(self) -> np.ndarray | None:
        if self.is_empty:
            return None
        return _homogenise(self.field, self.offset, self.linear.space.data)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if (self.field, self.dom, self.cod) != (other.field, other.dom, other.cod):
            return False
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        return self.linear == other.linear and bool(np.all(self.offset == other.offset))

    def __hash__(self):
        if self.is_empty:
            return hash((type(self).__name__, self.dom, self.cod, "empty"))
        return hash((self.dom, self.cod, self.linear, tuple(self.offset)))

    def __repr__(self):
        name = type(self).__name__
        if self.is_empty:
            return f"{name}({self.dom}->{self.cod}, empty)"
        off = " ".join(self.field.render(v) for v in self.offset)
        return f"{name}({self.dom}->{self.cod}, offset [{off}], dim {self.linear.dim})"

    def member(self, v: Sequence) -> bool:
        if len(v) != self.width():
            raise DimensionMismatch(f"vector of length {len(v)}, expected {self.width()}")
        if self.is_empty:
            return False
        f = self.field
        diff = f.array([list(v)])[0] - self.offset
        diff = f.reduce(diff) if f.is_prime else diff
        stacked = np.concatenate([self.linear.space.data, diff[None, :]], axis=0)
        return len(rref_array(f, stacked)[1]) == self.linear.dim

    def points(self):
        """Every vector of the coset (prime fields, small sizes only)."""
        if self.is_empty:
            return
        p = self.field.p
        basis = self.linear.space.data
        for coeffs in itertools.product(range(p), repeat=basis.shape[0]):
            vec = self.offset + (np.array(coeffs, dtype=np.int64) @ basis if basis.shape[0] else 0)
            yield tuple(int(x) for x in np.mod(vec, p))


def _homogenise(field: Field, offset: np.ndarray, rows: np.ndarray) -> np.ndarray:
    w = rows.shape[1] if rows.ndim == 2 and rows.shape[0] else len(offset)
    out = field.zeros((1 + rows.shape[0], w + 1))
    out[0, 0] = field.one()
    out[0, 1:] = offset
    if rows.shape[0]:
        out[1:, 1:] = rows
    return out


class AffineRelation(_Affine):
    """Empty, or a coset offset + linear inside k^dom (+) k^cod."""

    __slots__ = ()


class AffineGradedRelation(_Affine):
    """Empty, or a coset whose linear part is a graded relation."""

    __slots__ = ()
    _linear_cls = GradedRelation

    def width(self) -> int:
        return 2 * (self.dom + self.cod)

    def _wrap(self, rows: np.ndarray):
        return GradedRelation._from_array(self.field, self.dom, self.cod, rows, canonical=True)

    def labels(self, dom_tag: str, cod_tag: str) -> list:
        return sp._labels(self.dom, self.cod, dom_tag, cod_tag)

    @property
    def lagrangian(self) -> bool:
        return not self.is_empty and self.linear.lagrangian


# ---------------------------------------------------------------------------
# composition


def _same_kind(r: _Affine, s: _Affine):
    if type(r) is not type(s):
        raise TypeError("cannot mix graded and ungraded affine relations")
    if r.field != s.field:
        raise MixedFields(f"{r.field} vs {s.field}")


def affine_compose(r: _Affine, s: _Affine) -> _Affine:
    """First r, then s. Empty absorbs."""
    _same_kind(r, s)
    if r.cod != s.dom:
        raise ArityMismatch(f"cannot compose {r.dom}->{r.cod} with {s.dom}->{s.cod}")
    cls, f = type(r), r.field
    if r.is_empty or s.is_empty:
        return cls.empty(f, r.dom, s.cod)
    out_shape = cls.empty(f, r.dom, s.cod)
    out = join(f, [(r.hom(), [T] + r.labels("a", "m")), (s.hom(), [T] + s.labels("m", "b"))],
               [T] + out_shape.labels("a", "b"))
    return cls(f, r.dom, s.cod, out)


def affine_compose_all(first: _Affine, *rest: _Affine) -> _Affine:
    out = first
    for r in rest:
        out = affine_compose(out, r)
    return out


def affine_tensor(r: _Affine, s: _Affine) -> _Affine:
    _same_kind(r, s)
    cls, f = type(r), r.field
    dom, cod = r.dom + s.dom, r.cod + s.cod
    if r.is_empty or s.is_empty:
        return cls.empty(f, dom, cod)
    shifted = [(*lab[:-1], lab[-1] + (r.dom if lab[-2] == "a" else r.cod))
               for lab in s.labels("a", "b")]
    out = join(f, [(r.hom(), [T] + r.labels("a", "b")), (s.hom(), [T] + shifted)],
               [T] + cls.empty(f, dom, cod).labels("a", "b"))
    return cls(f, dom, cod, out)


def affine_tensor_all(*rs: _Affine) -> _Affine:
    out = rs[0]
    for r in rs[1:]:
        out = affine_tensor(out, r)
    return out


def _column_op(r: _Affine, dom: int, cod: int, perm: Sequence[int], negate: Sequence[int] = ()):
    """New relation whose column c is old column perm[c], negated where listed."""
    cls, f = type(r), r.field
    if r.is_empty:
        return cls.empty(f, dom, cod)
    h = r.hom()
    body = h[:, 1:][:, list(perm)]
    for c in negate:
        body[:, c] = f.neg(body[:, c])
    return cls(f, dom, cod, np.concatenate([h[:, :1], body], axis=1))


def affine_converse(r: _Affine) -> _Affine:
    n, m = r.dom, r.cod
    if isinstance(r, AffineGradedRelation):
        w = n + m
        perm = (list(range(n, w)) + list(range(n)) + list(range(w + n, 2 * w)) + list(range(w, w + n)))
    else:
        perm = list(range(n, n + m)) + list(range(n))
    return _column_op(r, m, n, perm)


def affine_colour_reverse(r: AffineGradedRelation) -> AffineGradedRelation:
    w = r.dom + r.cod
    return _column_op(r, r.dom, r.cod, list(range(w, 2 * w)) + list(range(w)))


def affine_curry(r: AffineGradedRelation) -> AffineGradedRelation:
    w = r.dom + r.cod
    return _column_op(r, 0, w, list(range(2 * w)), negate=range(r.dom))


def graded(r: GradedRelation) -> AffineGradedRelation:
    return AffineGradedRelation.lift(r)


def ungraded(r: LinearRelation) -> AffineRelation:
    return AffineRelation.lift(r)


# ---------------------------------------------------------------------------
# generators


def affine_shift(a, wire: int, grading: str, n: int, field: Field) -> AffineGradedRelation:
    """Identity on n doubled wires, plus ``a`` on one output coordinate."""
    if not 0 <= wire < n:
        raise IndexOutOfRange(f"wire {wire} outside 0..{n - 1}")
    if grading not in ("X", "Z"):
        raise ValueError("grading must be 'X' or 'Z'")
    ident = sp.identity(field, n)
    off = field.zeros(4 * n)
    off[(n if grading == "X" else 3 * n) + wire] = field.raw(a)
    return AffineGradedRelation.coset(list(off), ident)


def x_phase(field: Field, k: int, l: int, a=0) -> AffineRelation:
    """Ungraded X spider with phase: sum(in) + a = sum(out)."""
    eq = field.array([[field.raw(a)] + [1] * k + [-1] * l])
    return AffineRelation(field, k, l, kernel_array(field, eq))


def one_state(field: Field) -> AffineRelation:
    """The X spider 0->1 with phase 1: the point {1}."""
    return x_phase(field, 0, 1, 1)


def alr_generator(field: Field) -> AffineGradedRelation:
    """The extra generator: the 1-state on the X strand beside a free Z strand."""
    return AffineGradedRelation.coset([1, 0], GradedRelation.from_rows(field, 0, 1, [[0, 1]]))


def alr_shift_composite(a, grading: str, field: Field) -> AffineGradedRelation:
    """Evaluate the shift-building diagrams from the generator and pure pieces.

    X grading: the generator goes through double(co-scalar a), which scales
    its X strand by a and leaves the Z strand free, then merges into the
    wire via double(z-spider 2->1) (add on X, equal on Z). For Z, the generator
    is first turned round by F and the pieces are colour-reversed.
    """
    ident = graded(sp.identity(field, 1))
    gen = alr_generator(field)
    if grading == "X":
        scale = graded(sp.double(lr.co_scalar(field, a)))
        merge = graded(sp.double(lr.z_spider(field, 2, 1)))
    elif grading == "Z":
        gen = affine_compose(gen, graded(sp.gate(sp.F(0), 1, field)))
        scale = graded(sp.double(lr.scalar(field, a)))
        merge = graded(sp.double(lr.x_spider(field, 2, 1)))
    else:
        raise ValueError("grading must be 'X' or 'Z'")
    return affine_compose_all(affine_tensor(ident, gen), affine_tensor(ident, scale), merge)


def phased_spider(colour: str, phase, legs_in: int, legs_out: int,
                  field: Field) -> AffineGradedRelation:
    """Doubled spider with a phase (n, m) in k x k.

    Z colour: every Z coordinate equals a common z, and
    sum(x_in) + n + m*z = sum(x_out). X colour is the colour reverse.
    """
    if not field.is_prime:
        raise FieldNotPrime("phased spiders are defined over prime fields")
    if colour not in ("Z", "X"):
        raise ValueError("colour must be 'Z' or 'X'")
    n, m = (field.raw(v) for v in phase)
    k, l = legs_in, legs_out
    w = k + l
    rows = []
    # columns: t, X dom, X cod, Z dom, Z cod
    for j in range(1, w):
        row = [0] * (1 + 2 * w)
        row[1 + w] = 1
        row[1 + w + j] = -1
        rows.append(row)
    sum_row = [n] + [1] * k + [-1] * l + [0] * w
    if w:
        sum_row[1 + w] = m
    rows.append(sum_row)
    hom = kernel_array(field, field.array(rows))
    out = AffineGradedRelation(field, k, l, hom)
    return affine_colour_reverse(out) if colour == "X" else out


def fourier_remark(field: Field) -> AffineGradedRelation:
    """The Fourier transform as swap of strands with the antipode on the X strand.

    Sends (x, z) to (-z, x), i.e. the right action of [[0,1],[-1,0]].
    """
    rows = [[1, 0, 0, 1], [0, -1, 1, 0]]  # (x, x', z, z') with x' = -z, z' = x
    return graded(GradedRelation.from_rows(field, 1, 1, rows))


# ---------------------------------------------------------------------------
# the three aih equations


def aih_axiom_check(field: Field) -> dict[str, bool]:
    """Evaluate both sides of the three defining equations of the affine extension."""
    one = one_state(field)
    wire = ungraded(lr.identity(field, 1))
    zero_effect = x_phase(field, 1, 0)          # sum of inputs = 0
    delete = ungraded(lr.z_spider(field, 1, 0))
    free = ungraded(lr.z_spider(field, 0, 1))
    copy = ungraded(lr.z_spider(field, 1, 2))
    contradiction = affine_compose(one, zero_effect)
    report = {
        "one_then_zero_effect_kills_wire":
            affine_tensor(contradiction, wire)
            == affine_tensor(contradiction, affine_compose(delete, free)),
        "copy_of_one_is_two_ones":
            affine_compose(one, copy) == affine_tensor(one, one),
        "delete_of_one_is_empty_diagram":
            affine_compose(one, delete) == ungraded(lr.full(field, 0, 0)),
    }
    return report


# ---------------------------------------------------------------------------
# circuits


def evaluate(c: sp.Circuit) -> AffineGradedRelation:
    """Affine semantics of a circuit, Empty when the constraints clash."""
    run = sp.run_homogeneous(c)
    return AffineGradedRelation(c.field, len(run.inputs), len(run.outputs),
                                run.hom if run.hom.shape[0] else None)
