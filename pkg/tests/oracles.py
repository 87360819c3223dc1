"""Slow, obviously-correct reference computations used by the tests.

Nothing here calls into the package's matrix machinery: everything is plain
loops over ``itertools.product`` so the tests compare two independent routes.
"""
from __future__ import annotations

import itertools

import numpy as np


def all_bits(n):
    return itertools.product((0, 1), repeat=n)


def quad(Q, v, c, x):
    """``1/2 x'Qx + v'x + c`` by explicit double sum."""
    n = len(x)
    s = 0.0
    for i in range(n):
        s += v[i] * x[i]
        for j in range(n):
            s += 0.5 * Q[i][j] * x[i] * x[j]
    return s + c


def qubo_min(Q, v, c=0.0):
    """Exhaustive minimum; ties resolved towards the lexicographically smallest vector."""
    best, arg = None, None
    for x in all_bits(len(v)):
        f = quad(Q, v, c, x)
        if best is None or f < best - 1e-12:
            best, arg = f, x
    return best, arg


def constrained_min(Q, v, c, A=None, b=None, C=None, d=None):
    """Minimum over binary points with ``A x = b`` and ``C x <= d`` (``None`` if infeasible)."""
    best = None
    for x in all_bits(len(v)):
        if A is not None and any(sum(A[r][i] * x[i] for i in range(len(x))) != b[r] for r in range(len(b))):
            continue
        if C is not None and any(sum(C[r][i] * x[i] for i in range(len(x))) > d[r] for r in range(len(d))):
            continue
        f = quad(Q, v, c, x)
        if best is None or f < best:
            best = f
    return best


def ising_energy(J, h, c, s):
    n = len(s)
    return -0.5 * sum(J[i][j] * s[i] * s[j] for i in range(n) for j in range(n)) - sum(h[i] * s[i] for i in range(n)) + c


def integer_bits(lo, hi):
    """``ceil(log2(hi - lo + 1))`` by counting."""
    p = 0
    while 2**p < hi - lo + 1:
        p += 1
    return p


def cut(edges, side):
    return sum(w for i, j, w in edges if side[i - 1] != side[j - 1])


def max_cut(n, edges):
    return max(cut(edges, s) for s in all_bits(n))


def max_independent_sets(n, edges):
    best, sets = -1, []
    for s in all_bits(n):
        if any(s[i - 1] and s[j - 1] for i, j, *_ in edges):
            continue
        k = sum(s)
        if k > best:
            best, sets = k, [s]
        elif k == best:
            sets.append(s)
    return best, [tuple(i + 1 for i in range(n) if s[i]) for s in sets]


def qap_min(F, D):
    n = len(F)
    best = None
    for perm in itertools.permutations(range(n)):
        cost = sum(F[i1][i2] * D[perm[i1]][perm[i2]] for i1 in range(n) for i2 in range(n))
        best = cost if best is None else min(best, cost)
    return best


def min_k_union(A, k):
    m = len(A)
    best = None
    for chosen in itertools.combinations(range(m), k):
        covered = {v for p in chosen for v in range(len(A[p])) if A[p][v]}
        best = len(covered) if best is None else min(best, len(covered))
    return best


def knapsack_max(cap, f, w):
    """Best value over assignments item -> container or left out."""
    n, m = len(cap), len(f[0])
    best = 0
    for assign in itertools.product(range(n + 1), repeat=m):
        load = [0] * n
        val = 0
        for j, i in enumerate(assign):
            if i:
                load[i - 1] += w[i - 1][j]
                val += f[i - 1][j]
        if all(load[i] <= cap[i] for i in range(n)):
            best = max(best, val)
    return best


def summary_min(lengths, rel, S, K, alpha):
    n = len(lengths)
    best = None
    for x in all_bits(n):
        if sum(lengths[i] * x[i] for i in range(n)) > K:
            continue
        f = -sum(rel[i] * x[i] for i in range(n)) + 0.5 * alpha * sum(
            S[i][j] * x[i] * x[j] for i in range(n) for j in range(n)
        )
        best = f if best is None else min(best, f)
    return best


def chromatic_number(n, edges):
    for m in range(1, n + 1):
        for col in itertools.product(range(m), repeat=n):
            if all(col[i - 1] != col[j - 1] for i, j, *_ in edges):
                return m
    return n


def min_route_cost(n, costs, P):
    """Single rig: cheapest depot-to-depot walk of length ``P`` visiting every well once.

    ``costs`` maps unordered node pairs to cost (depot is ``n + 1``); after the
    route returns to the depot it may only stay there.
    """
    depot = n + 1
    best = None
    for order in itertools.permutations(range(1, n + 1)):
        seq = [depot, *order, depot]
        if len(seq) > P:
            continue
        seq += [depot] * (P - len(seq))
        total = 0.0
        ok = True
        for a, b in zip(seq, seq[1:]):
            key = (min(a, b), max(a, b))
            if key not in costs:
                ok = False
                break
            total += costs[key]
        if ok:
            best = total if best is None else min(best, total)
    return best


def bit_matrix(n):
    """All of ``{0,1}^n`` as rows, lexicographic."""
    return np.array(list(all_bits(n)), dtype=np.float64).reshape(-1, n)


def quad_rows(Q, v, c, X):
    """``1/2 x'Qx + v'x + c`` for every row of ``X`` via einsum."""
    Q, v, X = np.asarray(Q, float), np.asarray(v, float), np.asarray(X, float)
    return 0.5 * np.einsum("ki,ij,kj->k", X, Q, X) + X @ v + c


def constrained_min_rows(Q, v, c, A=None, b=None, C=None, d=None):
    """Vectorised twin of :func:`constrained_min` for larger ``n``."""
    X = bit_matrix(len(v))
    ok = np.ones(len(X), dtype=bool)
    if A is not None:
        ok &= np.all(X @ np.asarray(A, float).T == np.asarray(b, float), axis=1)
    if C is not None:
        ok &= np.all(X @ np.asarray(C, float).T <= np.asarray(d, float), axis=1)
    if not ok.any():
        return None
    return float(quad_rows(Q, v, c, X[ok]).min())
