"""Affine binarization ``x = L y + g`` of bounded spin, integer, discrete and continuous variables."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import CapacityError, DimensionError, DomainError
from .model import Binary, Continuous, Discrete, Integer, MixedProblem, Spin
from .tensor import QuadExpr, _frozen, as_vector, kron

#: Most bits a single continuous variable may use.
CONTINUOUS_BIT_CAP = 32


@dataclass(frozen=True)
class Encoding:
    """One variable's row of ``L`` (``coeffs``) and its shift ``g_j``."""

    kind: str
    coeffs: tuple
    shift: float = 0.0

    @property
    def bits(self) -> int:
        return len(self.coeffs)

    @property
    def onehot(self) -> bool:
        return self.kind == "discrete"

    def decode(self, y) -> float:
        return float(np.dot(self.coeffs, y) + self.shift)

    def image(self) -> np.ndarray:
        """Decoded value of every bit pattern, patterns in lexicographic order."""
        Y = _all_bits(self.bits)
        return Y @ np.asarray(self.coeffs) + self.shift


def _all_bits(p: int) -> np.ndarray:
    k = np.arange(2**p)[:, None]
    return ((k >> np.arange(p - 1, -1, -1)) & 1).astype(np.float64)


def integer_bit_count(r: int) -> int:
    """Smallest ``p`` with ``r <= 2^p - 1``."""
    return int(r).bit_length()


def integer_coeffs(r: int) -> tuple:
    """``(1, 2, .., 2^(p-2), r - 2^(p-1) + 1)``: every integer in ``[0, r]`` and nothing else."""
    r = int(r)
    if r < 1:
        raise DomainError(f"range must be at least 1, got {r}")
    p = integer_bit_count(r)
    return tuple(float(2**i) for i in range(p - 1)) + (float(r - 2 ** (p - 1) + 1),)


def encode_spin() -> Encoding:
    return Encoding("spin", (2.0,), -1.0)


def encode_binary() -> Encoding:
    return Encoding("passthrough", (1.0,), 0.0)


def encode_integer(lo: int, hi: int) -> Encoding:
    if int(lo) != lo or int(hi) != hi:
        raise DomainError(f"integer bounds must be integral, got [{lo}, {hi}]")
    if hi <= lo:
        raise DomainError(f"integer domain needs hi > lo, got [{lo}, {hi}]")
    return Encoding("integer", integer_coeffs(int(hi) - int(lo)), float(lo))


def encode_discrete(values: Sequence[float]) -> Encoding:
    vals = tuple(float(a) for a in values)
    if len(vals) < 2:
        raise DomainError("a discrete domain needs at least two values")
    if len(set(vals)) != len(vals):
        raise DomainError(f"discrete values must be pairwise distinct, got {vals}")
    return Encoding("discrete", vals, 0.0)


def continuous_bit_count(width: float, epsilon: float) -> int:
    """Smallest ``p`` with ``width / (2^p - 1) <= 2*epsilon``."""
    p = max(1, math.ceil(math.log2(width / (2 * epsilon) + 1)) - 1)
    while width / (2**p - 1) > 2 * epsilon:
        p += 1
    return p


def encode_continuous(lo: float, hi: float, epsilon: float, bit_cap: int = CONTINUOUS_BIT_CAP) -> Encoding:
    """Uniform grid of ``2^p`` points on ``[lo, hi]`` with spacing at most ``2*epsilon``."""
    if not hi > lo:
        raise DomainError(f"continuous domain needs hi > lo, got [{lo}, {hi}]")
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    d = float(hi) - float(lo)
    p = continuous_bit_count(d, epsilon)
    if p > bit_cap:
        raise CapacityError(
            f"[{lo}, {hi}] at epsilon={epsilon} needs {p} bits (cap {bit_cap}); use a looser epsilon"
        )
    scale = d / (2**p - 1)
    coeffs = tuple(scale * 2**i for i in range(p))
    return Encoding("continuous", coeffs, float(lo))


def encode_domain(dom, epsilon: float = 1e-2, bit_cap: int = CONTINUOUS_BIT_CAP) -> Encoding:
    if isinstance(dom, Binary):
        return encode_binary()
    if isinstance(dom, Spin):
        return encode_spin()
    if isinstance(dom, Integer):
        return encode_integer(dom.lo, dom.hi)
    if isinstance(dom, Discrete):
        return encode_discrete(dom.values)
    if isinstance(dom, Continuous):
        return encode_continuous(dom.lo, dom.hi, epsilon, bit_cap)
    raise DomainError(f"unsupported or unbounded domain {dom!r}")


def encode_value(enc: Encoding, value: float) -> np.ndarray:
    """A bit pattern decoding to ``value`` (nearest grid point for continuous).

    Integer values use greedy largest-coefficient-first selection; any
    preimage would decode identically.
    """
    if enc.kind == "discrete":
        try:
            k = enc.coeffs.index(float(value))
        except ValueError:
            raise DomainError(f"{value} is not one of {enc.coeffs}") from None
        y = np.zeros(enc.bits, dtype=np.int8)
        y[k] = 1
        return y
    if enc.kind == "continuous":
        k = int(round((value - enc.shift) / enc.coeffs[0]))
        k = min(max(k, 0), 2**enc.bits - 1)
        return np.array([(k >> i) & 1 for i in range(enc.bits)], dtype=np.int8)
    if enc.kind == "spin":
        if value not in (-1, 1):
            raise DomainError(f"{value} is not a spin value")
        return np.array([int(value > 0)], dtype=np.int8)
    rem = value - enc.shift
    if rem != int(rem) or rem < 0 or rem > sum(enc.coeffs):
        raise DomainError(f"{value} is outside the encoded range")
    y = np.zeros(enc.bits, dtype=np.int8)
    for k in sorted(range(enc.bits), key=lambda i: -enc.coeffs[i]):
        if enc.coeffs[k] <= rem:
            y[k] = 1
            rem -= enc.coeffs[k]
    return y


def onehot_system(encodings: Sequence[Encoding]) -> Optional[tuple]:
    """Rows ``sum_i y_ij = 1`` for every discrete encoding, or ``None``."""
    m = sum(e.bits for e in encodings)
    rows = []
    start = 0
    for e in encodings:
        if e.onehot:
            r = np.zeros(m)
            r[start : start + e.bits] = 1
            rows.append(r)
        start += e.bits
    if not rows:
        return None
    return np.vstack(rows), np.ones(len(rows))


@dataclass(frozen=True, eq=False)
class BinarizationMap:
    L: np.ndarray
    g: np.ndarray
    encodings: tuple
    onehot: Optional[tuple] = None

    @classmethod
    def from_encodings(cls, encodings: Sequence[Encoding]) -> "BinarizationMap":
        encodings = tuple(encodings)
        s = len(encodings)
        m = sum(e.bits for e in encodings)
        L = np.zeros((s, m))
        start = 0
        for j, e in enumerate(encodings):
            L[j, start : start + e.bits] = e.coeffs
            start += e.bits
        g = np.array([e.shift for e in encodings], dtype=np.float64)
        oh = onehot_system(encodings)
        if oh is not None:
            oh = (_frozen(oh[0]), _frozen(oh[1]))
        return cls(_frozen(L), _frozen(g), encodings, oh)

    @property
    def s(self) -> int:
        return self.L.shape[0]

    @property
    def m(self) -> int:
        return self.L.shape[1]

    def offsets(self) -> list:
        """Start position (0-based) of each variable's bit block."""
        out, start = [], 0
        for e in self.encodings:
            out.append(start)
            start += e.bits
        return out

    def uniform_factors(self) -> Optional[tuple]:
        """``(b, a)`` with ``L = diag(b) (x) a`` when every block is a multiple of one row."""
        encs = self.encodings
        if not encs:
            return None
        p = encs[0].bits
        if any(e.bits != p for e in encs):
            return None
        a = np.asarray(encs[0].coeffs)
        if all(e.coeffs == encs[0].coeffs for e in encs):
            return np.ones(len(encs)), a
        if all(e.kind == "continuous" for e in encs):
            return np.array([e.coeffs[0] for e in encs]), 2.0 ** np.arange(p)
        return None

    def labels(self, names: Sequence[str]) -> list:
        out = []
        for name, e in zip(names, self.encodings):
            if e.bits == 1 and e.kind in ("passthrough", "spin"):
                out.append(name)
            else:
                out.extend(f"{name}[{i}]" for i in range(e.bits))
        return out


def build_map(p, epsilon: Optional[float] = None, bit_cap: int = CONTINUOUS_BIT_CAP) -> BinarizationMap:
    """Block-diagonal map for a :class:`MixedProblem` (or a plain list of domains)."""
    if isinstance(p, MixedProblem):
        domains = p.domains
        epsilon = p.epsilon if epsilon is None else epsilon
    else:
        domains = tuple(p)
        epsilon = 1e-2 if epsilon is None else epsilon
    return BinarizationMap.from_encodings(encode_domain(d, epsilon, bit_cap) for d in domains)


def substitute(e: QuadExpr, bmap: BinarizationMap, use_kron: bool = True) -> QuadExpr:
    """The objective in terms of the bits: ``Q' = L'QL``, ``v' = L'(Qg + v)``, ``c' = e(g)``."""
    if e.n != bmap.s:
        raise DimensionError(f"expression has {e.n} variables, map has {bmap.s}")
    g = bmap.g
    lin = e.Q @ g + e.v
    c = e(g)
    uni = bmap.uniform_factors() if use_kron else None
    if uni is not None:
        b, a = uni
        Db = np.diag(b)
        a = a.reshape(1, -1)
        Q = kron(Db @ e.Q @ Db, a.T @ a)
        v = kron((b * lin).reshape(-1, 1), a.T).reshape(-1)
        return QuadExpr(Q, v, c)
    L = bmap.L
    return QuadExpr(L.T @ e.Q @ L, L.T @ lin, c)


def substitute_system(A, b, bmap: BinarizationMap) -> tuple:
    """Rewrite ``A x (=|<=) b`` over the bits: ``(A L) y (=|<=) b - A g``."""
    A = np.asarray(A, dtype=np.float64)
    b = as_vector(b)
    if A.shape[1] != bmap.s:
        raise DimensionError(f"system has {A.shape[1]} columns, map has {bmap.s} variables")
    return A @ bmap.L, b - A @ bmap.g


class Decoded(NamedTuple):
    values: np.ndarray
    onehot_violations: list


def decode(bmap: BinarizationMap, y) -> Decoded:
    """``x = L y + g``; lists (1-based) variables whose one-hot row is violated."""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.shape[0] != bmap.m:
        raise DimensionError(f"expected {bmap.m} bits, got {y.shape[0]}")
    x = bmap.L @ y + bmap.g
    bad = []
    for j, (start, enc) in enumerate(zip(bmap.offsets(), bmap.encodings)):
        if enc.onehot and y[start : start + enc.bits].sum() != 1:
            bad.append(j + 1)
    return Decoded(x, bad)
