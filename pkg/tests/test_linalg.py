import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from artifact.errors import MixedFields
from artifact.field import QX, RatFun, prime_field
from artifact.linalg import Matrix, is_rref, join, kernel, kernel_array, rank, rref, rref_array

from conftest import span_points


def small_matrices(p):
    return st.integers(0, 4).flatmap(
        lambda r: st.integers(1, 4).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c),
                               min_size=r, max_size=r).map(lambda rows: (rows, c))))


@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), small_matrices(p))))
def test_rank_matches_span_size(data):
    p, (rows, cols) = data
    f = prime_field(p)
    m = Matrix.from_rows(f, rows, cols)
    pts = span_points(rows, p, cols)
    assert p ** rank(m) == len(pts)
    red, piv = rref(m)
    assert is_rref(red)
    assert span_points(red.data.tolist(), p, cols) == pts
    assert rref(red)[0] == red


@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), small_matrices(p))))
def test_kernel_is_annihilator(data):
    p, (rows, cols) = data
    f = prime_field(p)
    m = Matrix.from_rows(f, rows, cols)
    k = kernel(m)
    assert k.rows + rank(m) == cols
    if rows and k.rows:
        assert not np.any(f.matmul(m.data, k.data.T))
    brute = {v for v in span_points([[1 if i == j else 0 for j in range(cols)] for i in range(cols)], p, cols)
             if all(sum(a * b for a, b in zip(r, v)) % p == 0 for r in rows)}
    assert span_points(k.data.tolist(), p, cols) == brute


def test_rref_over_qx_matches_sympy():
    x = RatFun.x()
    rows = [[1, x, x * x], [x, x * x + 1, 2], [1 + x, 1 + x * x + x, 2 + x * x]]
    m = Matrix.from_rows(QX, rows)
    sx = sympy.Symbol("x")
    sm = sympy.Matrix([[1, sx, sx ** 2], [sx, sx ** 2 + 1, 2], [1 + sx, 1 + sx ** 2 + sx, 2 + sx ** 2]])
    assert rank(m) == sm.rank(simplify=True) == 2
    red, piv = rref(m)
    assert piv == [0, 1]
    assert red.entry(0, 0) == RatFun(1) and red.entry(1, 0) == RatFun(0)


def test_rref_example():
    f = prime_field(5)
    red, piv = rref_array(f, f.array([[0, 2, 4], [1, 1, 1], [1, 3, 0]]))
    assert piv == [0, 1]
    assert red.tolist()[:2] == [[1, 0, 4], [0, 1, 2]]


def test_mixed_fields_rejected():
    a = Matrix.identity(prime_field(3), 2)
    b = Matrix.identity(prime_field(5), 2)
    with pytest.raises(MixedFields):
        a @ b


def test_matrix_is_immutable_value():
    f = prime_field(3)
    m = Matrix.from_rows(f, [[1, 2]])
    with pytest.raises(AttributeError):
        m.data = None
    assert m == Matrix.from_rows(f, [[4, 5]])
    assert hash(m) == hash(Matrix.from_rows(f, [[1, 2]]))


def test_join_projects_onto_kept_labels():
    # {(a, b) : a = b} joined with {(b, c) : c = 2b} keeps {(a, c) : c = 2a}
    f = prime_field(7)
    out = join(f, [(f.array([[1, 1]]), ["a", "b"]), (f.array([[1, 2]]), ["b", "c"])], ["a", "c"])
    assert span_points(out.tolist(), 7, 2) == {(k, 2 * k % 7) for k in range(7)}


def test_kernel_array_empty_input():
    f = prime_field(3)
    assert kernel_array(f, f.zeros((0, 3))).shape == (3, 3)
