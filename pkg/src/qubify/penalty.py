"""Quadratic penalties for linear constraints and the MixedProblem -> Qubo pipeline."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .binarize import (
    CONTINUOUS_BIT_CAP,
    BinarizationMap,
    Decoded,
    build_map,
    continuous_bit_count,
    decode,
    integer_coeffs,
    substitute,
    substitute_system,
)
from .errors import CapacityError, DimensionError, DomainError, InfeasibleError, ValidationError
from .model import MixedProblem, Qubo
from .tensor import QuadExpr, as_matrix, as_vector, squared_residual

INTEGRALITY_TOL = 1e-9


# -- pre-analysis -------------------------------------------------------------


@dataclass(frozen=True)
class PreanalysisReport:
    """Row indices (1-based) flagged by the sign-sum screen."""

    infeasible_eq_rows: tuple = ()
    infeasible_ineq_rows: tuple = ()
    redundant_ineq_rows: tuple = ()

    @property
    def feasible(self) -> bool:
        return not (self.infeasible_eq_rows or self.infeasible_ineq_rows)


def _split_sums(M):
    return np.where(M > 0, M, 0).sum(axis=1), np.where(M < 0, M, 0).sum(axis=1)


def preanalyze(A=None, b=None, C=None, d=None) -> PreanalysisReport:
    """Detect equality/inequality rows over binary variables that can never or always hold.

    Equality row ``i`` is infeasible when ``a+ < b_i`` or ``a- > b_i`` (sums of
    positive / negative coefficients).  Inequality row ``i`` is infeasible when
    ``c- > d_i`` and redundant when ``c+ <= d_i``.
    """
    bad_eq, bad_ineq, redundant = [], [], []
    if A is not None:
        A = as_matrix(A, "A")
        b = as_vector(b, "b")
        plus, minus = _split_sums(A)
        bad_eq = [i + 1 for i in range(A.shape[0]) if plus[i] < b[i] or minus[i] > b[i]]
    if C is not None:
        C = as_matrix(C, "C")
        d = as_vector(d, "d")
        plus, minus = _split_sums(C)
        for i in range(C.shape[0]):
            if minus[i] > d[i]:
                bad_ineq.append(i + 1)
            elif plus[i] <= d[i]:
                redundant.append(i + 1)
    return PreanalysisReport(tuple(bad_eq), tuple(bad_ineq), tuple(redundant))


# -- penalty terms ------------------------------------------------------------


def rho_bound(e: QuadExpr) -> float:
    """``sum |q_ij| + 2 sum |v_i| + 2``: sufficient penalty weight for integer constraint data."""
    return float(np.abs(e.Q).sum() + 2 * np.abs(e.v).sum() + 2)


def _check_rho(rho):
    if not rho > 0:
        raise DomainError(f"penalty coefficient must be positive, got {rho}")


def add_equality_penalty(e: QuadExpr, A, b, rho: float) -> QuadExpr:
    """``e + rho/2 ||A x - b||^2``."""
    _check_rho(rho)
    A = as_matrix(A, "A")
    if A.shape[1] != e.n:
        raise DimensionError(f"A has {A.shape[1]} columns, expression has {e.n} variables")
    return e + rho * squared_residual(A, b)


def block_penalty(A, B, d, rho: float = 1.0) -> QuadExpr:
    """``rho/2 ||A y + B z - d||^2`` over the stacked vector ``[y; z]``."""
    _check_rho(rho)
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    d = as_vector(d, "d")
    if A.ndim != 2:
        raise DimensionError("A must be 2-D")
    if B.size == 0:
        B = B.reshape(A.shape[0], 0)
    if A.shape[0] != B.shape[0] or A.shape[0] != d.shape[0]:
        raise DimensionError(f"row counts differ: A {A.shape[0]}, B {B.shape[0]}, d {d.shape[0]}")
    S = np.block([[A.T @ A, A.T @ B], [B.T @ A, B.T @ B]])
    R = np.concatenate([-(A.T @ d), -(B.T @ d)])
    return QuadExpr(rho * S, rho * R, rho * 0.5 * float(d @ d))


def _indices(indices, n, what):
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise ValidationError(f"duplicate {what} index")
    n = max(idx) if n is None else n
    for i in idx:
        if not 1 <= i <= n:
            raise IndexError(f"{what} index {i} outside 1..{n}")
    return np.asarray(idx, dtype=int) - 1, n


def at_most_one_penalty(indices: Sequence[int], rho: float, n: Optional[int] = None) -> QuadExpr:
    """``rho * sum_{i != j} x_i x_j`` over ``indices`` (ordered pairs); zero iff at most one bit is set."""
    _check_rho(rho)
    if len(indices) < 2:
        raise ValidationError("at-most-one needs at least two indices")
    idx, n = _indices(indices, n, "at-most-one")
    Q = np.zeros((n, n))
    Q[np.ix_(idx, idx)] = 2 * rho
    Q[idx, idx] = 0.0
    return QuadExpr(Q, np.zeros(n), 0.0)


def sum_le_indicator_penalty(xs: Sequence[int], y: int, rho1: float, rho2: float, n: Optional[int] = None) -> QuadExpr:
    """Slack-free penalty for ``sum x_i <= y``: ``rho1 sum_{i!=j} x_i x_j + rho2 (1 - y) sum x_i``."""
    _check_rho(rho1)
    _check_rho(rho2)
    if int(y) in [int(i) for i in xs]:
        raise ValidationError(f"indicator {y} also appears among the summed bits")
    idx, n = _indices(list(xs) + [y], n, "indicator")
    xi, yi = idx[:-1], idx[-1]
    Q = np.zeros((n, n))
    if len(xi) > 1:
        Q[np.ix_(xi, xi)] = 2 * rho1
        Q[xi, xi] = 0.0
    Q[xi, yi] = -rho2
    Q[yi, xi] = -rho2
    v = np.zeros(n)
    v[xi] = rho2
    return QuadExpr(Q, v, 0.0)


# -- slack variables ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SlackEncoding:
    """Binarized slack ``z = L y`` turning ``C x <= d`` into ``C x + z = d``."""

    bits: tuple
    ranges: tuple
    L: np.ndarray

    @property
    def m(self) -> int:
        return self.L.shape[1]

    def values(self, y) -> np.ndarray:
        return self.L @ np.asarray(y, dtype=np.float64)


def _is_integral(a) -> bool:
    a = np.asarray(a, dtype=np.float64)
    return bool(np.all(np.abs(a - np.round(a)) <= INTEGRALITY_TOL))


def slack_encode(C, d, epsilon: float = 1e-2, bit_cap: int = CONTINUOUS_BIT_CAP) -> SlackEncoding:
    """Per-row slack bits covering ``z_i`` in ``[0, d_i - c_i^-]``.

    Integral ranges get the exact integer encoding; fractional ranges (only
    reachable with real constraint data) get an epsilon grid.
    """
    C = as_matrix(C, "C")
    d = as_vector(d, "d")
    if C.shape[0] != d.shape[0]:
        raise DimensionError(f"C has {C.shape[0]} rows but d has {d.shape[0]} entries")
    report = preanalyze(C=C, d=d)
    if report.infeasible_ineq_rows:
        raise InfeasibleError(f"inequality rows {list(report.infeasible_ineq_rows)} can never hold", report)
    _, minus = _split_sums(C)
    rows, bits, ranges = [], [], []
    for i in range(C.shape[0]):
        r = float(d[i] - minus[i])
        if _is_integral(r):
            r = float(round(r))
            coeffs = integer_coeffs(int(r)) if r >= 1 else ()
        else:
            p = continuous_bit_count(r, epsilon)
            if p > bit_cap:
                raise CapacityError(f"slack of row {i + 1} needs {p} bits (cap {bit_cap})")
            scale = r / (2**p - 1)
            coeffs = tuple(scale * 2**k for k in range(p))
        rows.append(coeffs)
        bits.append(len(coeffs))
        ranges.append(r)
    L = np.zeros((C.shape[0], sum(bits)))
    start = 0
    for i, coeffs in enumerate(rows):
        L[i, start : start + len(coeffs)] = coeffs
        start += len(coeffs)
    return SlackEncoding(tuple(bits), tuple(ranges), L)


# -- feasibility probe ----------------------------------------------------------


def feasibility_probe(A, b, max_bits: int = 20, seed: int = 0) -> float:
    """Smallest ``1/2 ||A x - b||^2`` found over binary ``x`` (exact up to ``max_bits``)."""
    from .solve import AnnealParams, anneal, brute_force

    q = Qubo(squared_residual(A, b))
    if q.n <= max_bits:
        return brute_force(q).best.value
    return anneal(q, AnnealParams(seed=seed)).best.value


# -- pipeline -----------------------------------------------------------------


@dataclass(frozen=True)
class CompileOptions:
    """``rho`` is ``"auto"`` (the integer-data bound) or a positive number; per-group overrides win."""

    rho: Union[str, float] = "auto"
    rho_eq: Optional[float] = None
    rho_ineq: Optional[float] = None
    rho_onehot: Optional[float] = None
    epsilon: Optional[float] = None
    bit_cap: int = CONTINUOUS_BIT_CAP
    detect_at_most_one: bool = True
    feasibility_probe: bool = False


@dataclass(frozen=True, eq=False)
class CompilePlan:
    binarization: BinarizationMap
    names: tuple
    slack: Optional[SlackEncoding]
    rho_eq: float
    rho_ineq: float
    rho_onehot: float
    report: PreanalysisReport
    slack_rows: tuple = ()
    at_most_one_rows: tuple = ()
    labels: tuple = ()
    integral: bool = True

    @property
    def n_var_bits(self) -> int:
        return self.binarization.m

    @property
    def n_slack_bits(self) -> int:
        return 0 if self.slack is None else self.slack.m

    @property
    def n_bits(self) -> int:
        return self.n_var_bits + self.n_slack_bits

    def var_bits(self, bits) -> np.ndarray:
        return np.asarray(bits)[: self.n_var_bits]

    def decode(self, bits) -> Decoded:
        bits = np.asarray(bits)
        if bits.shape != (self.n_bits,):
            raise DimensionError(f"expected {self.n_bits} bits, got shape {bits.shape}")
        return decode(self.binarization, bits[: self.n_var_bits])

    def bits_per_variable(self) -> dict:
        return {name: enc.bits for name, enc in zip(self.names, self.binarization.encodings)}


def _pick_rho(options, which, default):
    val = getattr(options, which)
    if val is not None:
        _check_rho(val)
        return float(val)
    return default


def compile_problem(p: MixedProblem, options: Optional[CompileOptions] = None) -> tuple[Qubo, CompilePlan]:
    """Binarize, screen, slack-encode and penalize ``p`` into a single QUBO.

    Bits are laid out as the variables' encodings in order, followed by one
    slack block per kept inequality row.
    """
    options = options or CompileOptions()
    bmap = build_map(p, options.epsilon, options.bit_cap)
    obj = substitute(p.objective, bmap)
    m = bmap.m

    A = b = C = d = None
    if p.eq is not None:
        A, b = substitute_system(*p.eq, bmap)
    if p.ineq is not None:
        C, d = substitute_system(*p.ineq, bmap)

    report = preanalyze(A, b, C, d)
    if not report.feasible:
        parts = []
        if report.infeasible_eq_rows:
            parts.append(f"equality rows {list(report.infeasible_eq_rows)}")
        if report.infeasible_ineq_rows:
            parts.append(f"inequality rows {list(report.infeasible_ineq_rows)}")
        raise InfeasibleError(" and ".join(parts) + " can never be satisfied", report)

    amo_rows, slack_rows = [], []
    if C is not None:
        redundant = set(report.redundant_ineq_rows)
        for i in range(C.shape[0]):
            if i + 1 in redundant:
                continue
            row = C[i]
            nz = np.flatnonzero(row)
            if (
                options.detect_at_most_one
                and d[i] == 1
                and len(nz) >= 2
                and np.all((row == 0) | (row == 1))
            ):
                amo_rows.append(i + 1)
            else:
                slack_rows.append(i + 1)

    eq_data = [] if A is None else [A, b]
    ineq_data = [] if C is None or not slack_rows else [C[np.asarray(slack_rows) - 1], d[np.asarray(slack_rows) - 1]]
    integral = all(_is_integral(a) for a in eq_data + ineq_data)
    if options.rho == "auto":
        if not integral:
            raise ValidationError(
                "constraint data are not integral after binarization; pass an explicit rho"
            )
        base = rho_bound(obj)
    else:
        _check_rho(float(options.rho))
        base = float(options.rho)
    rho_eq = _pick_rho(options, "rho_eq", base)
    rho_ineq = _pick_rho(options, "rho_ineq", base)
    rho_onehot = _pick_rho(options, "rho_onehot", base)

    if options.feasibility_probe and A is not None:
        if feasibility_probe(A, b) > INTEGRALITY_TOL:
            raise InfeasibleError("equality system has no binary solution (feasibility probe)", report)

    slack = None
    if slack_rows:
        eps = p.epsilon if options.epsilon is None else options.epsilon
        slack = slack_encode(ineq_data[0], ineq_data[1], eps, options.bit_cap)
    n_total = m + (0 if slack is None else slack.m)

    total = obj.pad(n_total)
    if A is not None:
        total = total + block_penalty(A, np.zeros((A.shape[0], n_total - m)), b, rho_eq)
    if bmap.onehot is not None:
        Aoh, boh = bmap.onehot
        total = total + block_penalty(Aoh, np.zeros((Aoh.shape[0], n_total - m)), boh, rho_onehot)
    if slack is not None:
        total = total + block_penalty(ineq_data[0], slack.L, ineq_data[1], rho_ineq)
    for r in amo_rows:
        nz = np.flatnonzero(C[r - 1]) + 1
        total = total + at_most_one_penalty(nz, rho_ineq, n_total)

    labels = bmap.labels(p.names)
    if slack is not None:
        for r, nb in zip(slack_rows, slack.bits):
            labels.extend(f"slack{r}[{k}]" for k in range(nb))
    plan = CompilePlan(
        binarization=bmap,
        names=p.names,
        slack=slack,
        rho_eq=rho_eq,
        rho_ineq=rho_ineq,
        rho_onehot=rho_onehot,
        report=report,
        slack_rows=tuple(slack_rows),
        at_most_one_rows=tuple(amo_rows),
        labels=tuple(labels),
        integral=integral,
    )
    return Qubo(total, labels), plan


compile = compile_problem
