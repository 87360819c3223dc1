"""Timing of Kronecker-product assembly against element-by-element assembly."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError
from .tensor import MAX_DIM, kron


def split_dimension(N: int) -> tuple[int, int]:
    """``(m, n)`` with ``m * n = N`` and ``m`` the largest divisor not above ``sqrt(N)``."""
    if N < 1:
        raise DomainError(f"dimension must be positive, got {N}")
    if N > MAX_DIM:
        raise CapacityError(f"dimension {N} exceeds the cap of {MAX_DIM}")
    m = math.isqrt(N)
    while N % m:
        m -= 1
    return m, N // m


def kron_assembly(m: int, n: int) -> np.ndarray:
    """Block-diagonal ``I_m (x) J_n`` (``J`` all ones): one-hot style penalty block."""
    return kron(np.eye(m), np.ones((n, n)))


def loop_assembly(m: int, n: int) -> np.ndarray:
    """The same matrix filled one entry at a time over ``(i1, i2, j1, j2)``."""
    out = np.empty((m * n, m * n))
    eye = np.eye(m)
    ones = np.ones((n, n))
    for i1 in range(m):
        for i2 in range(m):
            a = eye[i1, i2]
            for j1 in range(n):
                row = i1 * n + j1
                for j2 in range(n):
                    out[row, i2 * n + j2] = a * ones[j1, j2]
    return out


@dataclass(frozen=True)
class BenchResult:
    N: int
    m: int
    n: int
    kron_seconds: float
    loop_seconds: float
    identical: bool

    @property
    def ratio(self) -> float:
        return self.loop_seconds / self.kron_seconds

    def lines(self) -> list:
        return [
            f"dimension: {self.N} (m={self.m}, n={self.n})",
            f"kron: {self.kron_seconds:.6f} s",
            f"loop: {self.loop_seconds:.6f} s",
            f"ratio: {self.ratio:.2f}",
            f"identical: {'yes' if self.identical else 'no'}",
        ]


def _best_time(fn, reps):
    best, out = math.inf, None
    for _ in range(reps):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def run(N: int = 10_000, reps: int = 1) -> BenchResult:
    """Best-of-``reps`` wall time of both assemblies at total dimension ``N``."""
    if reps < 1:
        raise DomainError(f"reps must be positive, got {reps}")
    m, n = split_dimension(N)
    t_kron, a = _best_time(lambda: kron_assembly(m, n), reps)
    t_loop, b = _best_time(lambda: loop_assembly(m, n), reps)
    same = bool(np.array_equal(a, b))
    return BenchResult(N, m, n, t_kron, t_loop, same)
