"""Problem representations and the QUBO <-> Ising conversions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DimensionError, DomainError, ValidationError
from .tensor import QuadExpr, _frozen, as_matrix, as_vector


# -- variable domains ---------------------------------------------------------


@dataclass(frozen=True)
class Binary:
    kind = "binary"


@dataclass(frozen=True)
class Spin:
    kind = "spin"


@dataclass(frozen=True)
class Integer:
    lo: int
    hi: int
    kind = "integer"

    def __post_init__(self):
        if int(self.lo) != self.lo or int(self.hi) != self.hi:
            raise DomainError(f"integer bounds must be integral, got [{self.lo}, {self.hi}]")
        if self.hi <= self.lo:
            raise DomainError(f"integer domain needs hi > lo, got [{self.lo}, {self.hi}]")
        object.__setattr__(self, "lo", int(self.lo))
        object.__setattr__(self, "hi", int(self.hi))


@dataclass(frozen=True)
class Discrete:
    values: tuple
    kind = "discrete"

    def __post_init__(self):
        vals = tuple(float(a) for a in self.values)
        if len(vals) < 2:
            raise DomainError("a discrete domain needs at least two values")
        if len(set(vals)) != len(vals):
            raise DomainError(f"discrete values must be pairwise distinct, got {vals}")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class Continuous:
    lo: float
    hi: float
    kind = "continuous"

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise DomainError("continuous domains must be bounded")
        if self.hi <= self.lo:
            raise DomainError(f"continuous domain needs hi > lo, got [{self.lo}, {self.hi}]")
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))


Domain = Union[Binary, Spin, Integer, Discrete, Continuous]


def _system(system, n, name):
    if system is None:
        return None
    A, b = system
    A = as_matrix(A, f"{name} matrix")
    b = as_vector(b, f"{name} rhs")
    if A.shape[1] != n:
        raise DimensionError(f"{name} matrix has {A.shape[1]} columns, problem has {n} variables")
    if A.shape[0] != b.shape[0]:
        raise DimensionError(f"{name} matrix has {A.shape[0]} rows but rhs has {b.shape[0]} entries")
    return _frozen(A), _frozen(b)


@dataclass(frozen=True, eq=False)
class MixedProblem:
    """Minimise ``objective(x)`` subject to ``A x = b``, ``C x <= d`` and per-variable domains."""

    domains: tuple
    objective: QuadExpr
    eq: Optional[tuple] = None
    ineq: Optional[tuple] = None
    epsilon: float = 1e-2
    names: Optional[tuple] = None

    def __post_init__(self):
        domains = tuple(self.domains)
        n = len(domains)
        if self.objective.n != n:
            raise DimensionError(f"objective is over {self.objective.n} variables, {n} domains given")
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")
        object.__setattr__(self, "domains", domains)
        object.__setattr__(self, "eq", _system(self.eq, n, "equality"))
        object.__setattr__(self, "ineq", _system(self.ineq, n, "inequality"))
        names = tuple(self.names) if self.names is not None else tuple(f"x{j + 1}" for j in range(n))
        if len(names) != n:
            raise DimensionError("one name per variable required")
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return len(self.domains)

    @classmethod
    def binary(cls, objective: QuadExpr, eq=None, ineq=None) -> "MixedProblem":
        return cls(tuple(Binary() for _ in range(objective.n)), objective, eq, ineq)


# -- standard forms -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Qubo:
    """Minimise ``1/2 x'Qx + v'x + c`` over ``x`` in ``{0,1}^n``."""

    expr: QuadExpr
    labels: tuple = ()

    def __post_init__(self):
        labels = tuple(self.labels) if self.labels else tuple(f"x{i + 1}" for i in range(self.expr.n))
        if len(labels) != self.expr.n:
            raise DimensionError(f"{len(labels)} labels for {self.expr.n} bits")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_arrays(cls, Q, v=None, c=0.0, labels=()) -> "Qubo":
        Q = np.asarray(Q, dtype=np.float64)
        v = np.zeros(Q.shape[0]) if v is None else v
        return cls(QuadExpr(Q, v, c), labels)

    @property
    def Q(self):
        return self.expr.Q

    @property
    def v(self):
        return self.expr.v

    @property
    def c(self):
        return self.expr.c

    @property
    def n(self) -> int:
        return self.expr.n

    def __call__(self, x) -> float:
        return self.expr(x)


@dataclass(frozen=True, eq=False)
class Ising:
    """Minimise ``-1/2 s'Js - h's + c`` over ``s`` in ``{-1,1}^n``; ``J`` has zero diagonal."""

    J: np.ndarray
    h: np.ndarray
    c: float = 0.0

    def __post_init__(self):
        J = np.array(self.J, dtype=np.float64)
        h = as_vector(self.h, "h")
        if J.ndim != 2 or J.shape != (h.shape[0], h.shape[0]):
            raise DimensionError(f"J must be {h.shape[0]}x{h.shape[0]}, got {J.shape}")
        if np.any(np.diag(J) != 0):
            raise ValidationError("Ising couplings must have a zero diagonal")
        if np.any(J != J.T):
            raise ValidationError("Ising couplings must be symmetric")
        object.__setattr__(self, "J", _frozen(J))
        object.__setattr__(self, "h", _frozen(h))
        object.__setattr__(self, "c", float(self.c))

    @property
    def n(self) -> int:
        return self.h.shape[0]

    def __call__(self, s) -> float:
        s = np.asarray(s, dtype=np.float64)
        if s.shape != (self.n,):
            raise DimensionError(f"expected {self.n} spins, got shape {s.shape}")
        return float(-0.5 * s @ self.J @ s - self.h @ s + self.c)


@dataclass(frozen=True)
class Violation:
    """A violated constraint row (1-based); residual is ``lhs - rhs``."""

    kind: str
    row: int
    residual: float


@dataclass(frozen=True, eq=False)
class Solution:
    bits: np.ndarray
    value: float
    violations: tuple = ()

    @property
    def feasible(self) -> bool:
        return not self.violations

    @property
    def violated_rows(self) -> list:
        return [(v.kind, v.row) for v in self.violations]

    def bitstring(self) -> str:
        return "".join(str(int(b)) for b in self.bits)


# -- operations ---------------------------------------------------------------


def evaluate(e: QuadExpr, x) -> float:
    """``1/2 x'Qx + v'x + c``."""
    return e(x)


def absorb_linear(q: Qubo) -> Qubo:
    """Move the linear part onto the diagonal using ``x_i^2 = x_i``."""
    Q = np.array(q.Q)
    Q[np.diag_indices_from(Q)] += 2 * q.v
    return Qubo(QuadExpr(Q, np.zeros(q.n), q.c), q.labels)


def qubo_to_ising(q: Qubo) -> Ising:
    """Substitute ``x = (s + 1)/2``."""
    Q, v = q.Q, q.v
    J = -0.25 * Q
    J[np.diag_indices_from(J)] = 0.0
    J = (J + J.T) / 2
    h = -0.5 * v - 0.25 * Q.sum(axis=1)
    diag = np.trace(Q)
    off = Q.sum() - diag
    c = q.c + off / 8 + diag / 4 + v.sum() / 2
    return Ising(J, h, c)


def ising_to_qubo(m: Ising, labels=()) -> Qubo:
    """Substitute ``s = 2x - 1``."""
    Q = -4.0 * m.J
    v = 2.0 * m.J.sum(axis=1) - 2.0 * m.h
    c = m.c - 0.5 * m.J.sum() + m.h.sum()
    return Qubo(QuadExpr(Q, v, c), labels)


@dataclass(frozen=True, eq=False)
class Embedding:
    """Re-inserts fixed bits into solutions of a reduced QUBO (indices 1-based)."""

    n: int
    free: tuple
    fixed: tuple
    values: tuple

    def expand(self, y) -> np.ndarray:
        y = np.asarray(y)
        if y.shape != (len(self.free),):
            raise DimensionError(f"expected {len(self.free)} free bits, got shape {y.shape}")
        x = np.zeros(self.n, dtype=np.int8)
        x[np.asarray(self.free, dtype=int) - 1] = y
        x[np.asarray(self.fixed, dtype=int) - 1] = self.values
        return x

    def restrict(self, x) -> np.ndarray:
        return np.asarray(x)[np.asarray(self.free, dtype=int) - 1]


def fix_variables(q: Qubo, ind: Sequence[int], b: Sequence[int]) -> tuple[Qubo, Embedding]:
    """Clamp ``x[ind] = b`` and return the QUBO over the remaining bits."""
    ind = [int(i) for i in ind]
    b = np.asarray(list(b), dtype=np.float64).reshape(-1)
    if len(ind) != b.shape[0]:
        raise DimensionError(f"{len(ind)} indices but {b.shape[0]} values")
    if len(set(ind)) != len(ind):
        raise ValidationError("duplicate fixed index")
    for i in ind:
        if not 1 <= i <= q.n:
            raise IndexError(f"fixed index {i} outside 1..{q.n}")
    if not np.all((b == 0) | (b == 1)):
        raise DomainError("fixed values must be 0 or 1")
    fix = np.asarray(ind, dtype=int) - 1
    mask = np.ones(q.n, dtype=bool)
    mask[fix] = False
    free = np.flatnonzero(mask)
    Q, v = q.Q, q.v
    Qy = Q[np.ix_(free, free)]
    vy = Q[np.ix_(free, fix)] @ b + v[free]
    c = q.c + 0.5 * b @ Q[np.ix_(fix, fix)] @ b + v[fix] @ b
    labels = tuple(q.labels[i] for i in free)
    emb = Embedding(q.n, tuple(int(i) + 1 for i in free), tuple(ind), tuple(int(x) for x in b))
    return Qubo(QuadExpr(Qy, vy, c), labels), emb
