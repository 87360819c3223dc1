import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubify.errors import CapacityError, DimensionError, DomainError, ValidationError
from qubify.tensor import (
    QuadExpr,
    constraint_assemble,
    cumulative_matrix,
    cyclic_coupling_matrix,
    fortran_flatten,
    fortran_unflatten,
    kron,
    kron_chain,
    path_coupling_matrix,
    quad_form_assemble,
    squared_residual,
)

from oracles import quad


def test_flatten_two_by_three():
    # x[i, j] on a 2x3 grid: position 2*(j-1) + i
    assert [fortran_flatten([2, 3], [i, j]) for j in (1, 2, 3) for i in (1, 2)] == [1, 2, 3, 4, 5, 6]


def test_flatten_matches_numpy_fortran_order():
    shape = (3, 2, 4)
    ref = np.arange(1, 25).reshape(shape, order="F")
    for idx in itertools.product(*(range(1, s + 1) for s in shape)):
        assert fortran_flatten(shape, idx) == ref[tuple(i - 1 for i in idx)]


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.data())
def test_unflatten_inverts_flatten(shape, data):
    pos = data.draw(st.integers(1, int(np.prod(shape))))
    assert fortran_flatten(shape, fortran_unflatten(shape, pos)) == pos


def test_flatten_rejects_out_of_range():
    with pytest.raises(IndexError):
        fortran_flatten([2, 3], [3, 1])
    with pytest.raises(IndexError):
        fortran_unflatten([2, 3], 7)
    with pytest.raises(DimensionError):
        fortran_flatten([2, 3], [1])
    with pytest.raises(DomainError):
        fortran_flatten([0, 3], [1, 1])


def test_kron_block_layout():
    a = np.array([[1, 2], [3, 4]])
    b = np.array([[0, 1], [1, 0]])
    K = kron(a, b)
    assert K.shape == (4, 4)
    np.testing.assert_array_equal(K[2:, :2], 3 * b)


def test_kron_capacity():
    with pytest.raises(CapacityError):
        kron(np.ones((200, 200)), np.ones((200, 200)))
    with pytest.raises(CapacityError):
        kron_chain([np.ones((3, 3))] * 3, cap=20)


def test_quad_form_assemble_2d():
    rng = np.random.default_rng(0)
    n, m = 3, 4
    a = rng.normal(size=(n, n))
    a = a + a.T
    b = rng.normal(size=(m, m))
    b = b + b.T
    M = quad_form_assemble([a, b])
    for xs in itertools.islice(itertools.product((0, 1), repeat=n * m), 0, None, 97):
        X = np.array(xs).reshape((n, m), order="F")
        direct = sum(
            a[i1, i2] * b[j1, j2] * X[i1, j1] * X[i2, j2]
            for i1 in range(n) for i2 in range(n) for j1 in range(m) for j2 in range(m)
        )
        x = np.array(xs, dtype=float)
        assert x @ M @ x == pytest.approx(direct, abs=1e-12)


def test_quad_form_rejects_asymmetric_factor():
    with pytest.raises(ValidationError):
        quad_form_assemble([np.array([[0, 1], [0, 0]]), np.eye(2)])


def test_constraint_assemble_row_sums():
    # sum_j x[i, j] = 1 for each i: factors (identity over i, ones row over j)
    n, m = 3, 2
    M = constraint_assemble([np.eye(n), np.ones((1, m))])
    X = np.zeros((n, m))
    X[0, 1] = X[1, 0] = X[2, 1] = 1
    np.testing.assert_array_equal(M @ X.reshape(-1, order="F"), np.ones(n))


def test_coupling_matrices():
    np.testing.assert_array_equal(cumulative_matrix(3), [[1, 0, 0], [1, 1, 0], [1, 1, 1]])
    c = cyclic_coupling_matrix(4)
    assert c[0, 3] == c[3, 0] == 0.5 and c.sum() == 4
    p = path_coupling_matrix(4)
    assert p[0, 3] == 0 and p.sum() == 3
    with pytest.raises(DomainError):
        cyclic_coupling_matrix(2)
    with pytest.raises(DomainError):
        cumulative_matrix(0)


def test_quadexpr_symmetrizes_and_validates():
    e = QuadExpr.from_general([[0, 2], [0, 0]], [1, 0], 3)
    np.testing.assert_array_equal(e.Q, [[0, 1], [1, 0]])
    assert e([1, 1]) == 1 + 1 + 3
    with pytest.raises(ValidationError):
        QuadExpr([[0, 2], [0, 0]], [0, 0])
    with pytest.raises(DimensionError):
        QuadExpr(np.eye(2), [0, 0, 0])
    with pytest.raises(ValidationError):
        QuadExpr(np.eye(2), [np.nan, 0])
    with pytest.raises(DimensionError):
        e([1, 1, 1])


def test_quadexpr_is_immutable():
    e = QuadExpr(np.eye(2), np.zeros(2))
    with pytest.raises(ValueError):
        e.Q[0, 0] = 5


@settings(max_examples=50)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_values_matches_pointwise(n, seed):
    rng = np.random.default_rng(seed)
    Q = rng.integers(-3, 4, (n, n))
    Q = Q + Q.T
    v = rng.integers(-3, 4, n)
    e = QuadExpr(Q, v, 1.5)
    X = rng.integers(0, 2, (8, n))
    np.testing.assert_allclose(e.values(X), [quad(Q, v, 1.5, x) for x in X], atol=1e-12)


def test_arithmetic_and_pad():
    e = QuadExpr(np.eye(2), [1, 2], 1)
    f = 2 * e + e
    assert f([1, 1]) == pytest.approx(3 * e([1, 1]))
    g = e.pad(3)
    assert g.n == 3 and g([1, 1, 1]) == e([1, 1])
    with pytest.raises(DimensionError):
        e.pad(1)
    with pytest.raises(DimensionError):
        e + QuadExpr.zeros(3)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_squared_residual(seed):
    rng = np.random.default_rng(seed)
    M = rng.integers(-3, 4, (3, 4))
    d = rng.integers(-3, 4, 3)
    e = squared_residual(M, d)
    for x in itertools.product((0, 1), repeat=4):
        r = M @ np.array(x) - d
        assert e(x) == pytest.approx(0.5 * r @ r, abs=1e-12)
