"""Dense matrix helpers, Kronecker assembly and the quadratic-expression type.

Multi-indices follow Fortran order: the leftmost index varies fastest, so an
``n x m`` array ``x[i, j]`` is flattened to position ``n*(j-1) + i``.  Every
index argument of the public API is 1-based; the JSON file formats are the
only place where 0-based indices appear.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import CapacityError, DimensionError, DomainError, ValidationError

#: Largest admissible row/column count of a dense matrix.
MAX_DIM = 20_000

SYMMETRY_RTOL = 1e-12


def as_matrix(a, name="matrix") -> np.ndarray:
    """Coerce ``a`` to a finite 2-D float64 array (row vectors stay 2-D)."""
    m = np.array(a, dtype=np.float64)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got {m.ndim}-D")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains NaN or infinite entries")
    _check_capacity(m.shape, name)
    return m


def as_vector(a, name="vector") -> np.ndarray:
    v = np.array(a, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} contains NaN or infinite entries")
    return v


def _check_capacity(shape, name="matrix", cap=None):
    cap = MAX_DIM if cap is None else cap
    rows, cols = shape
    if rows > cap or cols > cap:
        raise CapacityError(f"{name} of shape {rows}x{cols} exceeds the dense cap of {cap}")


def identity(n: int) -> np.ndarray:
    """``E_n``."""
    return np.eye(n)


def ones(rows: int, cols: int) -> np.ndarray:
    """``I_{rows x cols}``, the all-ones matrix."""
    return np.ones((rows, cols))


def fortran_flatten(shape: Sequence[int], idx: Sequence[int]) -> int:
    """Position of the 1-based multi-index ``idx`` in the Fortran-ordered vector.

    >>> fortran_flatten([2, 3], [1, 2])
    3
    """
    shape = [int(s) for s in shape]
    idx = [int(i) for i in idx]
    if not shape or any(s < 1 for s in shape):
        raise DomainError(f"shape must be a nonempty list of positive extents, got {shape}")
    if len(idx) != len(shape):
        raise DimensionError(f"multi-index has {len(idx)} components, shape has {len(shape)}")
    pos, stride = 0, 1
    for k, (i, s) in enumerate(zip(idx, shape)):
        if not 1 <= i <= s:
            raise IndexError(f"index component {k} = {i} outside 1..{s}")
        pos += (i - 1) * stride
        stride *= s
    return pos + 1


def fortran_unflatten(shape: Sequence[int], pos: int) -> tuple[int, ...]:
    """Inverse of :func:`fortran_flatten`."""
    total = int(np.prod(shape))
    if not 1 <= pos <= total:
        raise IndexError(f"linear index {pos} outside 1..{total}")
    rem = pos - 1
    out = []
    for s in shape:
        out.append(rem % s + 1)
        rem //= s
    return tuple(out)


def kron(a, b, cap=None) -> np.ndarray:
    """Kronecker product ``a (x) b``.

    Element ``a[i, j] * b[k, l]`` lands in row ``p*(i-1)+k`` and column
    ``q*(j-1)+l`` where ``b`` is ``p x q``.
    """
    a = as_matrix(a, "left factor")
    b = as_matrix(b, "right factor")
    shape = (a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    _check_capacity(shape, "Kronecker product", cap)
    return np.kron(a, b)


def kron_chain(factors: Sequence, cap=None) -> np.ndarray:
    """Left-to-right Kronecker product of ``factors``."""
    if not factors:
        raise DimensionError("need at least one factor")
    mats = [as_matrix(f, f"factor {k}") for k, f in enumerate(factors)]
    rows = int(np.prod([m.shape[0] for m in mats]))
    cols = int(np.prod([m.shape[1] for m in mats]))
    _check_capacity((rows, cols), "Kronecker product", cap)
    return reduce(np.kron, mats)


def is_symmetric(m: np.ndarray, rtol: float = SYMMETRY_RTOL) -> bool:
    if m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return bool(np.max(np.abs(m - m.T), initial=0.0) <= rtol * scale)


def quad_form_assemble(factors: Sequence, cap=None) -> np.ndarray:
    """Matrix ``M`` with ``xbar' M xbar = sum a_{i1 i2} b_{j1 j2} ... x_{i1 j1 ..} x_{i2 j2 ..}``.

    ``factors`` are listed innermost index first (the order the indices are
    written in); the Kronecker product is taken in reverse.
    """
    mats = [as_matrix(f, f"factor {k}") for k, f in enumerate(factors)]
    for k, m in enumerate(mats):
        if not is_symmetric(m):
            raise ValidationError(f"factor {k} is not symmetric")
    return kron_chain(mats[::-1], cap)


def constraint_assemble(factors: Sequence, cap=None) -> np.ndarray:
    """Constraint matrix for ``sum a_{ri} b_{sj} .. x_{ij..} = d_{rs..}``.

    Factors are innermost index first; the rows of the result are themselves
    Fortran-ordered over ``(r, s, ..)``.
    """
    mats = [as_matrix(f, f"factor {k}") for k, f in enumerate(factors)]
    return kron_chain(mats[::-1], cap)


def cumulative_matrix(p: int) -> np.ndarray:
    """``p x p`` lower-triangular ones (row ``t`` sums positions ``1..t``)."""
    if p < 1:
        raise DomainError(f"p must be positive, got {p}")
    return np.tril(np.ones((p, p)))


def cyclic_coupling_matrix(m: int) -> np.ndarray:
    """Symmetric coupling of cyclic neighbours, 0.5 on each wrap-around pair."""
    if m < 3:
        raise DomainError(f"cyclic coupling needs m >= 3, got {m}")
    d = np.zeros((m, m))
    k = np.arange(m)
    d[k, (k + 1) % m] = 0.5
    d[(k + 1) % m, k] = 0.5
    return d


def path_coupling_matrix(m: int) -> np.ndarray:
    """Like :func:`cyclic_coupling_matrix` without the wrap-around pair."""
    d = np.zeros((m, m))
    k = np.arange(m - 1)
    d[k, k + 1] = 0.5
    d[k + 1, k] = 0.5
    return d


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuadExpr:
    """``1/2 x'Qx + v'x + c`` with ``Q`` symmetric.

    ``Q`` is validated against the symmetry tolerance and then replaced by
    ``(Q + Q')/2``. Use :meth:`from_general` for arbitrary square ``Q``.
    """

    Q: np.ndarray
    v: np.ndarray
    c: float = 0.0

    def __post_init__(self):
        Q = np.array(self.Q, dtype=np.float64)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise DimensionError(f"Q must be square, got shape {Q.shape}")
        v = as_vector(self.v, "v")
        if v.shape[0] != Q.shape[0]:
            raise DimensionError(f"Q is {Q.shape[0]}x{Q.shape[0]} but v has length {v.shape[0]}")
        if not np.all(np.isfinite(Q)):
            raise ValidationError("Q contains NaN or infinite entries")
        if not is_symmetric(Q):
            raise ValidationError("Q is not symmetric")
        c = float(self.c)
        if not np.isfinite(c):
            raise ValidationError("constant is not finite")
        object.__setattr__(self, "Q", _frozen((Q + Q.T) / 2))
        object.__setattr__(self, "v", _frozen(v))
        object.__setattr__(self, "c", c)

    @classmethod
    def from_general(cls, Q, v=None, c=0.0) -> "QuadExpr":
        """Build from a possibly non-symmetric ``Q`` (same values of ``x'Qx``)."""
        Q = np.array(Q, dtype=np.float64)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise DimensionError(f"Q must be square, got shape {Q.shape}")
        v = np.zeros(Q.shape[0]) if v is None else v
        return cls((Q + Q.T) / 2, v, c)

    @classmethod
    def zeros(cls, n: int, c: float = 0.0) -> "QuadExpr":
        return cls(np.zeros((n, n)), np.zeros(n), c)

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n,):
            raise DimensionError(f"expected a vector of length {self.n}, got shape {x.shape}")
        return float(0.5 * x @ self.Q @ x + self.v @ x + self.c)

    def values(self, X) -> np.ndarray:
        """Evaluate on each row of ``X``."""
        X = np.asarray(X, dtype=np.float64)
        return 0.5 * np.einsum("ij,ij->i", X @ self.Q, X) + X @ self.v + self.c

    def __add__(self, other: "QuadExpr") -> "QuadExpr":
        if not isinstance(other, QuadExpr):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"cannot add expressions over {self.n} and {other.n} variables")
        return QuadExpr(self.Q + other.Q, self.v + other.v, self.c + other.c)

    def __mul__(self, s: float) -> "QuadExpr":
        s = float(s)
        return QuadExpr(self.Q * s, self.v * s, self.c * s)

    __rmul__ = __mul__

    def pad(self, n_total: int) -> "QuadExpr":
        """Extend with ``n_total - n`` trailing variables that do not appear."""
        if n_total < self.n:
            raise DimensionError("cannot pad to a smaller size")
        Q = np.zeros((n_total, n_total))
        Q[: self.n, : self.n] = self.Q
        v = np.zeros(n_total)
        v[: self.n] = self.v
        return QuadExpr(Q, v, self.c)

    def allclose(self, other: "QuadExpr", atol: float = 1e-12) -> bool:
        return (
            self.n == other.n
            and np.allclose(self.Q, other.Q, rtol=0, atol=atol)
            and np.allclose(self.v, other.v, rtol=0, atol=atol)
            and abs(self.c - other.c) <= atol
        )

    def __repr__(self):
        return f"QuadExpr(n={self.n}, c={self.c!r})"


def squared_residual(M, d) -> QuadExpr:
    """``1/2 ||M x - d||^2`` as a :class:`QuadExpr`."""
    M = as_matrix(M, "M")
    d = as_vector(d, "d")
    if d.shape[0] != M.shape[0]:
        raise DimensionError(f"M has {M.shape[0]} rows but d has length {d.shape[0]}")
    return QuadExpr(M.T @ M, -(M.T @ d), 0.5 * float(d @ d))
