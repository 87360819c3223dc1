"""Exact enumeration, seeded simulated annealing and constraint checks for small QUBOs."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from ._rng import restart_states
from .errors import CapacityError, DimensionError, DomainError
from .model import Qubo, Solution, Violation
from .tensor import as_matrix, as_vector

#: Largest QUBO :func:`brute_force` will enumerate.
BRUTE_FORCE_CAP = 25
FEASIBILITY_TOL = 1e-9
_CHUNK = 1 << 16


@dataclass(frozen=True)
class AnnealParams:
    sweeps: int = 2000
    restarts: int = 16
    t_start: float = 10.0
    t_end: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.sweeps < 1 or self.restarts < 1:
            raise DomainError("sweeps and restarts must be positive")
        if not self.t_start > self.t_end > 0:
            raise DomainError(f"need t_start > t_end > 0, got {self.t_start}, {self.t_end}")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must fit in 64 unsigned bits")

    def temperatures(self) -> np.ndarray:
        if self.sweeps == 1:
            return np.array([self.t_end])
        return self.t_start * (self.t_end / self.t_start) ** (np.arange(self.sweeps) / (self.sweeps - 1))


@dataclass(frozen=True, eq=False)
class SolveReport:
    best: Solution
    evaluations: int
    method: str
    restart_values: tuple = ()

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "evaluations": self.evaluations,
            "value": self.best.value,
            "bits": self.best.bitstring(),
            "restart_values": list(self.restart_values),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _bit_rows(start: int, stop: int, n: int) -> np.ndarray:
    # x_1 is the most significant bit, so increasing k is lexicographic order
    k = np.arange(start, stop, dtype=np.int64)[:, None]
    return ((k >> np.arange(n - 1, -1, -1, dtype=np.int64)) & 1).astype(np.float64)


def enumerate_bits(n: int, chunk: int = _CHUNK):
    """Yield all of ``{0,1}^n`` in lexicographic order, ``chunk`` rows at a time."""
    for start in range(0, 2**n, chunk):
        yield _bit_rows(start, min(start + chunk, 2**n), n)


def brute_force(q: Qubo, cap: int = BRUTE_FORCE_CAP) -> SolveReport:
    """Exact minimum; ties go to the lexicographically smallest bit vector."""
    n = q.n
    if n > cap:
        raise CapacityError(f"brute force over {n} bits exceeds the cap of {cap}")
    best_val, best_x = np.inf, None
    for X in enumerate_bits(n):
        vals = q.expr.values(X)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val, best_x = float(vals[k]), X[k]
    bits = best_x.astype(np.int8)
    return SolveReport(Solution(bits, q(bits)), 2**n, "brute", (q(bits),))


@numba.njit(cache=True)
def _next(s):
    s1 = s[1]
    r = s1 * np.uint64(5)
    r = (r << np.uint64(7)) | (r >> np.uint64(57))
    result = r * np.uint64(9)
    t = s1 << np.uint64(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = (s[3] << np.uint64(45)) | (s[3] >> np.uint64(19))
    return result


@numba.njit(cache=True)
def _uniform(s):
    return np.float64(_next(s) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@numba.njit(cache=True)
def _anneal_kernel(Q, v, states, temps, check):
    R = states.shape[0]
    n = v.shape[0]
    best_x = np.zeros((R, n), dtype=np.int8)
    best_f = np.zeros(R)
    max_err = 0.0
    diag = np.empty(n)
    for i in range(n):
        diag[i] = Q[i, i]
    for r in range(R):
        s = states[r].copy()
        x = np.zeros(n)
        for i in range(n):
            x[i] = np.float64(_next(s) >> np.uint64(63))
        h = Q @ x
        f = 0.5 * (x @ h) + v @ x
        best = f
        best_x[r] = x.astype(np.int8)
        for sweep in range(temps.shape[0]):
            T = temps[sweep]
            for i in range(n):
                sign = 1.0 - 2.0 * x[i]
                delta = sign * (v[i] + h[i] - diag[i] * x[i] + 0.5 * diag[i])
                if delta <= 0.0 or _uniform(s) < np.exp(-delta / T):
                    x[i] += sign
                    for j in range(n):
                        h[j] += sign * Q[j, i]
                    f += delta
                    if check:
                        full = 0.5 * (x @ (Q @ x)) + v @ x
                        err = abs(full - f)
                        if err > max_err:
                            max_err = err
                    if f < best:
                        best = f
                        for j in range(n):
                            best_x[r, j] = np.int8(x[j])
        best_f[r] = best
    return best_x, best_f, max_err


def anneal(q: Qubo, params: Optional[AnnealParams] = None, check: bool = False) -> SolveReport:
    """Single-bit-flip Metropolis annealing with a geometric temperature schedule.

    Each sweep visits bits ``1..n`` in order; the energy change of a flip is
    read off the running local field ``Q x`` in O(1) and the field is updated
    in O(n) after an accepted move.  With ``check=True`` the incremental
    energy is compared to a full re-evaluation after every accepted flip and
    the report's method tag carries the largest discrepancy.
    """
    params = params or AnnealParams()
    n = q.n
    states = np.array(restart_states(params.seed, params.restarts), dtype=np.uint64)
    if n == 0:
        sol = Solution(np.zeros(0, dtype=np.int8), q.c)
        return SolveReport(sol, 0, "anneal", tuple([q.c] * params.restarts))
    Q = np.ascontiguousarray(q.Q)
    v = np.ascontiguousarray(q.v)
    bx, _, err = _anneal_kernel(Q, v, states, params.temperatures(), check)
    values = [q(x) for x in bx]
    k = int(np.argmin(values))
    method = "anneal" if not check else f"anneal(max_delta_error={err:.3e})"
    report = SolveReport(Solution(bx[k].copy(), values[k]), params.restarts * params.sweeps * n, method, tuple(values))
    if check:
        object.__setattr__(report, "max_delta_error", float(err))
    return report


def check_feasibility(x, A=None, b=None, C=None, d=None, tol: float = FEASIBILITY_TOL) -> list:
    """Violated rows (1-based): equalities with ``Ax != b`` and inequalities with ``Cx > d``."""
    x = as_vector(x, "x")
    out = []
    if A is not None:
        A = as_matrix(A, "A")
        b = as_vector(b, "b")
        if A.shape[1] != x.shape[0] or A.shape[0] != b.shape[0]:
            raise DimensionError("equality system does not match x")
        r = A @ x - b
        out += [Violation("eq", i + 1, float(r[i])) for i in np.flatnonzero(np.abs(r) > tol)]
    if C is not None:
        C = as_matrix(C, "C")
        d = as_vector(d, "d")
        if C.shape[1] != x.shape[0] or C.shape[0] != d.shape[0]:
            raise DimensionError("inequality system does not match x")
        r = C @ x - d
        out += [Violation("ineq", i + 1, float(r[i])) for i in np.flatnonzero(r > tol)]
    return out
