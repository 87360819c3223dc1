"""QUBO builders for classic combinatorial problems, each paired with a decoder.

All node, item, subset and position numbers in the public API are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .binarize import integer_coeffs
from .errors import DimensionError, DomainError, ValidationError
from .model import Embedding, Qubo, fix_variables, qubo_to_ising
from .penalty import block_penalty, rho_bound
from .tensor import QuadExpr, as_matrix, as_vector, kron, kron_chain, path_coupling_matrix, squared_residual


def _positive(name, val):
    if not val > 0:
        raise DomainError(f"{name} must be positive, got {val}")
    return float(val)


# -- graphs -------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph on nodes ``1..n``."""

    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("node count must be non-negative")
        out, seen = [], set()
        for e in self.edges:
            i, j, w = (e[0], e[1], 1.0) if len(e) == 2 else e
            i, j = int(i), int(j)
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValidationError(f"edge ({i}, {j}) has an endpoint outside 1..{self.n}")
            if i == j:
                raise ValidationError(f"self-loop at node {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValidationError(f"duplicate edge {key}")
            seen.add(key)
            out.append((key[0], key[1], float(w)))
        object.__setattr__(self, "edges", tuple(sorted(out)))

    @classmethod
    def from_weights(cls, C) -> "Graph":
        C = as_matrix(C, "weight matrix")
        n = C.shape[0]
        return cls(n, tuple((i + 1, j + 1, C[i, j]) for i in range(n) for j in range(i + 1, n) if C[i, j] != 0))

    def weight_matrix(self) -> np.ndarray:
        C = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            C[i - 1, j - 1] = C[j - 1, i - 1] = w
        return C

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for i, j, _ in self.edges:
            A[i - 1, j - 1] = A[j - 1, i - 1] = 1.0
        return A

    def complement_adjacency(self) -> np.ndarray:
        A = 1.0 - self.adjacency()
        np.fill_diagonal(A, 0.0)
        return A

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)


def ones_of(x) -> tuple:
    """1-based positions of the set bits."""
    return tuple(int(i) + 1 for i in np.flatnonzero(np.asarray(x)))


# -- max-cut ------------------------------------------------------------------


def build_max_cut(g: Graph) -> Qubo:
    """Minimise minus the cut weight: ``Q = 2C``, ``v_i = -sum_j c_ij``."""
    C = g.weight_matrix()
    return Qubo(QuadExpr(2 * C, -C.sum(axis=1)))


def cut_value(g: Graph, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(sum(w for i, j, w in g.edges if x[i - 1] != x[j - 1]))


class Cut(NamedTuple):
    side: tuple
    value: float


def decode_max_cut(g: Graph, x) -> Cut:
    return Cut(ones_of(x), cut_value(g, x))


@dataclass(frozen=True, eq=False)
class MaxCutReduction:
    """A QUBO rewritten as Max-Cut on ``n + 1`` nodes; node 1 is the auxiliary spin fixed to -1.

    ``f(x) = offset - cut`` where ``x`` is read off the cut as described in :meth:`to_bits`.
    """

    graph: Graph
    offset: float

    def to_bits(self, side) -> np.ndarray:
        side = np.asarray(side)
        if side.shape != (self.graph.n,):
            raise DimensionError(f"expected {self.graph.n} node bits, got shape {side.shape}")
        return cut_to_bits(side)


def cut_to_bits(side) -> np.ndarray:
    """Map a cut (bit per node, 1 = ``s = +1``, node 1 auxiliary) to the original QUBO bits."""
    side = np.asarray(side, dtype=np.int8)
    if side[0] == 1:
        side = 1 - side
    return side[1:].copy()


def qubo_to_maxcut(q: Qubo) -> MaxCutReduction:
    m = qubo_to_ising(q)
    n = m.n
    Jp = np.zeros((n + 1, n + 1))
    Jp[0, 1:] = -m.h
    Jp[1:, 0] = -m.h
    Jp[1:, 1:] = m.J
    C = -2.0 * Jp
    return MaxCutReduction(Graph.from_weights(C), m.c + 0.25 * float(C.sum()))


# -- independent set / clique ------------------------------------------------


def build_mis(g: Graph, alpha: float = 2.0) -> Qubo:
    """``Q = alpha A``, ``v = -1``; any ``alpha > 1`` makes the optimum independent."""
    alpha = _positive("alpha", alpha)
    return Qubo(QuadExpr(alpha * g.adjacency(), -np.ones(g.n)))


def build_max_clique(g: Graph, alpha: float = 2.0) -> Qubo:
    """MIS on the complement graph."""
    alpha = _positive("alpha", alpha)
    return Qubo(QuadExpr(alpha * g.complement_adjacency(), -np.ones(g.n)))


def decode_set(x) -> tuple:
    return ones_of(x)


def is_independent(g: Graph, nodes) -> bool:
    s = set(nodes)
    return not any(i in s and j in s for i, j, _ in g.edges)


# -- min-k-union ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SetSystem:
    """``A[p, v] = 1`` when subset ``p`` contains element ``v``; pick exactly ``k`` subsets."""

    A: np.ndarray
    k: int

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        if not np.all((A == 0) | (A == 1)):
            raise ValidationError("set system matrix must be 0/1")
        if not 1 <= self.k <= A.shape[0]:
            raise DomainError(f"k must lie in 1..{A.shape[0]}, got {self.k}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "k", int(self.k))

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n_elements(self) -> int:
        return self.A.shape[1]

    def union_size(self, subsets) -> int:
        idx = np.asarray(list(subsets), dtype=int) - 1
        return int(np.any(self.A[idx] > 0, axis=0).sum()) if len(idx) else 0


def build_min_k_union(s: SetSystem, c1=None, c2=None, c3: float = 1.0) -> Qubo:
    """Bits ``[x (subsets); y (elements)]``; ``c1 = c2 = n_elements + 1`` by default."""
    m, n = s.A.shape
    c1 = float(n + 1) if c1 is None else _positive("c1", c1)
    c2 = float(n + 1) if c2 is None else _positive("c2", c2)
    c3 = _positive("c3", c3)
    A, k = s.A, s.k
    Q = np.block([[2 * c1 * np.ones((m, m)), -c2 * A], [-c2 * A.T, np.zeros((n, n))]])
    v = np.concatenate([-2 * c1 * k * np.ones(m) + c2 * A.sum(axis=1), c3 * np.ones(n)])
    labels = [f"x{p + 1}" for p in range(m)] + [f"y{j + 1}" for j in range(n)]
    return Qubo(QuadExpr(Q, v, c1 * k * k), labels)


class KUnion(NamedTuple):
    subsets: tuple
    covered: tuple
    union_size: int


def decode_min_k_union(s: SetSystem, bits) -> KUnion:
    bits = np.asarray(bits)
    subsets = ones_of(bits[: s.m])
    return KUnion(subsets, ones_of(bits[s.m :]), s.union_size(subsets))


# -- quadratic assignment -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QapInstance:
    """Flows ``F`` between objects and distances ``D`` between locations."""

    F: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        F = as_matrix(self.F, "F")
        D = as_matrix(self.D, "D")
        if F.shape[0] != F.shape[1] or D.shape != F.shape:
            raise DimensionError(f"F and D must be square and equal-sized, got {F.shape} and {D.shape}")
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "D", D)

    @property
    def n(self) -> int:
        return self.F.shape[0]

    def cost(self, perm) -> float:
        """``sum f[i1, i2] d[perm(i1), perm(i2)]``; ``perm[i]`` is object ``i``'s location."""
        p = np.asarray(perm, dtype=int) - 1
        return float((self.F * self.D[np.ix_(p, p)]).sum())


def qap_systems(n: int) -> tuple:
    """Location-filled-once and object-placed-once systems over ``x[i, j]`` (``i`` fastest)."""
    one = np.ones(n)
    return (kron(np.eye(n), np.ones((1, n))), one), (kron(np.ones((1, n)), np.eye(n)), one)


def build_qap(inst: QapInstance, rho: Optional[float] = None) -> Qubo:
    """``x' (D (x) F) x`` plus ``rho/2`` times each assignment system's squared residual."""
    n = inst.n
    M = kron(inst.D, inst.F)
    obj = QuadExpr(M + M.T, np.zeros(n * n))
    rho = rho_bound(obj) if rho is None else _positive("rho", rho)
    total = obj
    for M_, d in qap_systems(n):
        total = total + rho * squared_residual(M_, d)
    labels = [f"x[{i + 1},{j + 1}]" for j in range(n) for i in range(n)]
    return Qubo(total, labels)


def decode_qap(n: int, bits) -> Optional[tuple]:
    """Location of each object, or ``None`` when the bits are not a permutation matrix."""
    X = np.asarray(bits).reshape((n, n), order="F")
    if not (np.all(X.sum(axis=0) == 1) and np.all(X.sum(axis=1) == 1)):
        return None
    return tuple(int(j) + 1 for j in np.argmax(X, axis=1))


# -- graph coloring -------------------------------------------------------------


@dataclass(frozen=True)
class ColoringWeights:
    """Objective weight ``a0``, one-color ``a1``, edge ``a_edge`` and usage ``a2`` coefficients.

    The optimum is a proper coloring with the fewest colors whenever
    ``a1/2 > a2 * max_degree``, ``a2 > a0/2`` and ``a_edge > a0/2``.
    """

    a0: float
    a1: float
    a2: float
    a_edge: float

    @classmethod
    def default(cls, g: Graph, a0=2.0, a2=2.0, a1=None, a_edge=None) -> "ColoringWeights":
        max_deg = float(g.degrees().max()) if g.n else 0.0
        a1 = 2 * a2 * max_deg + 2 if a1 is None else a1
        return cls(a0, a1, a2, a1 if a_edge is None else a_edge)


def build_graph_coloring(g: Graph, m: int, weights: Optional[ColoringWeights] = None) -> Qubo:
    """Bits ``[w (colors used); x[i, j] (node i gets color j, i fastest)]``."""
    if m < 1:
        raise DomainError(f"need at least one color, got {m}")
    w = weights or ColoringWeights.default(g)
    for name in ("a0", "a1", "a2", "a_edge"):
        _positive(name, getattr(w, name))
    n = g.n
    d = g.degrees().reshape(1, -1)
    A = g.adjacency()
    Qww = w.a0 * np.eye(m)
    Qwx = -w.a2 * kron(np.eye(m), d)
    Qxx = w.a1 * kron(np.ones((m, m)) - 2 * np.eye(m), np.eye(n)) + w.a_edge * kron(np.eye(m), A)
    Q = np.block([[Qww, Qwx], [Qwx.T, Qxx]])
    const = w.a1 * n / 2 + w.a2 * float(d.sum())
    labels = [f"w{j + 1}" for j in range(m)] + [f"x[{i + 1},{j + 1}]" for j in range(m) for i in range(n)]
    return Qubo(QuadExpr(Q, np.zeros(m + n * m), const), labels)


class Coloring(NamedTuple):
    colors: Optional[tuple]
    n_colors: int
    proper: bool


def decode_coloring(g: Graph, m: int, bits) -> Coloring:
    """Color of each node (``None`` if some node has zero or several colors)."""
    X = np.asarray(bits)[m:].reshape((g.n, m), order="F")
    if g.n and not np.all(X.sum(axis=1) == 1):
        return Coloring(None, 0, False)
    colors = tuple(int(j) + 1 for j in np.argmax(X, axis=1)) if g.n else ()
    proper = all(colors[i - 1] != colors[j - 1] for i, j, _ in g.edges)
    return Coloring(colors, len(set(colors)), proper)


# -- multiple knapsack ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KnapsackInstance:
    """``capacities[i]``; ``values[i, j]`` / ``weights[i, j]`` of item ``j`` in container ``i``."""

    capacities: np.ndarray
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        c = as_vector(self.capacities, "capacities")
        f = np.asarray(self.values, dtype=np.float64).reshape(c.shape[0], -1)
        w = np.asarray(self.weights, dtype=np.float64).reshape(c.shape[0], -1)
        if f.shape != w.shape:
            raise DimensionError(f"values {f.shape} and weights {w.shape} differ")
        for name, a in (("capacities", c), ("values", f), ("weights", w)):
            if np.any(a != np.round(a)) or np.any(a <= 0):
                raise ValidationError(f"{name} must be positive integers")
        object.__setattr__(self, "capacities", c)
        object.__setattr__(self, "values", f)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def slack_bits(self) -> tuple:
        return tuple(len(integer_coeffs(int(c))) for c in self.capacities)


def knapsack_slack_map(capacities) -> np.ndarray:
    """Block-diagonal ``L`` with row ``i`` the integer encoding of ``[0, c_i]``."""
    rows = [integer_coeffs(int(c)) for c in capacities]
    L = np.zeros((len(rows), sum(len(r) for r in rows)))
    start = 0
    for i, r in enumerate(rows):
        L[i, start : start + len(r)] = r
        start += len(r)
    return L


def build_knapsack(k: KnapsackInstance, alpha=None, beta=None) -> Qubo:
    """Bits ``[x[i, j] (i fastest); capacity slack]``; ``alpha`` at-most-one, ``beta`` capacity."""
    n, m = k.n, k.m
    if m == 0:
        return Qubo(QuadExpr.zeros(0))
    fbar = k.values.reshape(-1, order="F")
    wbar = k.weights.reshape(-1, order="F")
    base = QuadExpr(np.zeros((n * m, n * m)), -fbar)
    alpha = rho_bound(base) if alpha is None else _positive("alpha", alpha)
    beta = rho_bound(base) if beta is None else _positive("beta", beta)
    L = knapsack_slack_map(k.capacities)
    amo = QuadExpr(alpha * kron(np.eye(m), np.ones((n, n)) - np.eye(n)), np.zeros(n * m))
    M = kron(np.ones((1, m)), np.eye(n)) * wbar
    total = (base + amo).pad(n * m + L.shape[1]) + block_penalty(M, L, k.capacities, beta)
    labels = [f"x[{i + 1},{j + 1}]" for j in range(m) for i in range(n)]
    for i, p in enumerate(k.slack_bits()):
        labels += [f"slack{i + 1}[{b}]" for b in range(p)]
    return Qubo(total, labels)


class Packing(NamedTuple):
    containers: tuple
    value: float
    feasible: bool


def decode_knapsack(k: KnapsackInstance, bits) -> Packing:
    """Container of each item (0 = left out); feasibility covers both constraint groups."""
    X = np.asarray(bits)[: k.n * k.m].reshape((k.n, k.m), order="F").astype(np.float64)
    once = bool(np.all(X.sum(axis=0) <= 1))
    fits = bool(np.all((k.weights * X).sum(axis=1) <= k.capacities))
    containers = tuple(int(np.argmax(X[:, j])) + 1 if X[:, j].any() else 0 for j in range(k.m))
    return Packing(containers, float((k.values * X).sum()), once and fits)


# -- vehicle routing ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class VrpInstance:
    """Wells ``1..n``, depot ``n + 1``; ``edges`` are ``(i, j, cost)`` and must include the depot self-pair."""

    n: int
    edges: tuple
    m: int
    P: int
    require_all_rigs: bool = False

    def __post_init__(self):
        N = self.n + 1
        if self.m < 1:
            raise DomainError("need at least one rig")
        if not 3 <= self.P <= self.n + 2:
            raise DomainError(f"sequence length must lie in 3..{self.n + 2}, got {self.P}")
        out, seen = [], set()
        for i, j, c in self.edges:
            i, j = int(i), int(j)
            if not (1 <= i <= N and 1 <= j <= N):
                raise ValidationError(f"edge ({i}, {j}) has an endpoint outside 1..{N}")
            if i == j and i != N:
                raise ValidationError(f"self-pair at well {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValidationError(f"duplicate edge {key}")
            if i != j and not c > 0:
                raise ValidationError(f"edge {key} needs a positive cost, got {c}")
            seen.add(key)
            out.append((key[0], key[1], float(c)))
        if (N, N) not in seen:
            raise ValidationError(f"depot self-pair ({N}, {N}) is required")
        object.__setattr__(self, "edges", tuple(sorted(out)))

    @property
    def N(self) -> int:
        return self.n + 1

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.N, self.N))
        for i, j, _ in self.edges:
            A[i - 1, j - 1] = A[j - 1, i - 1] = 1.0
        return A

    def costs(self) -> np.ndarray:
        C = np.zeros((self.N, self.N))
        for i, j, c in self.edges:
            C[i - 1, j - 1] = C[j - 1, i - 1] = c
        return C

    def index(self, v: int, p: int, i: int) -> int:
        """1-based bit of ``x[v, p, i]`` (rig fastest, then position, then node)."""
        return v + self.m * ((p - 1) + self.P * (i - 1))


def depot_to_well_matrix(n: int, P: int) -> np.ndarray:
    """Symmetric ``G`` over (position, node) pairs: 0.5 between the depot at ``p`` and each well at ``p + 1``.

    Rows and columns follow ``(i - 1) P + p`` for node ``i`` at position ``p``;
    only ``p = 2..P-1`` is coupled.
    """
    N = n + 1
    G = np.zeros((N * P, N * P))
    for p in range(2, P):
        k = (N - 1) * P + p - 1
        for j in range(1, n + 1):
            l = (j - 1) * P + p
            G[k, l] = G[l, k] = 0.5
    return G


def _unit(size: int, *positions) -> np.ndarray:
    e = np.zeros((1, size))
    for p in positions:
        e[0, p - 1] = 1.0
    return e


@dataclass(frozen=True)
class VrpWeights:
    """Coefficients of: each well once (a1), one node per slot (a2), non-edges (a3),
    leaving the depot after return (a4) and the depot-endpoint reward (a5)."""

    a1: float
    a2: float
    a3: float
    a4: float
    a5: float

    @classmethod
    def uniform(cls, a: float) -> "VrpWeights":
        return cls(a, a, a, a, a)


@dataclass(frozen=True, eq=False)
class VrpModel:
    instance: VrpInstance
    full: Qubo
    reduced: Qubo
    embedding: Embedding
    weights: VrpWeights

    def expand(self, y) -> np.ndarray:
        return self.embedding.expand(y)

    def decode(self, y) -> "Routes":
        return decode_vrp(self.instance, self.expand(y))


def forced_zero_mask(inst: VrpInstance) -> np.ndarray:
    N, P, m = inst.N, inst.P, inst.m
    wells = np.ones((1, N))
    wells[0, N - 1] = 0.0
    ones_m = np.ones((1, m))
    ind = kron_chain([wells, _unit(P, 1, P), ones_m])
    abar = 1.0 - inst.adjacency()[N - 1 : N]
    ind = ind + kron_chain([abar, _unit(P, 2, P - 1), ones_m])
    if inst.require_all_rigs:
        ind = ind + kron_chain([_unit(N, N), _unit(P, 2), ones_m])
    return ind.reshape(-1) > 0


def build_vrp(inst: VrpInstance, weights: Optional[VrpWeights] = None) -> VrpModel:
    """Sequence-based routing QUBO; the objective part equals half the total route cost."""
    N, P, m, n = inst.N, inst.P, inst.m, inst.n
    Im = np.eye(m)
    D = path_coupling_matrix(P)
    base = QuadExpr(kron_chain([inst.costs(), D, Im]), np.zeros(N * P * m))
    w = weights or VrpWeights.uniform(rho_bound(base))
    for name in ("a1", "a2", "a3", "a4", "a5"):
        _positive(name, getattr(w, name))
    E1 = np.eye(N)
    E1[N - 1, N - 1] = 0.0
    E2 = np.zeros((N, N))
    E2[N - 1, N - 1] = 1.0
    H = np.zeros((P, P))
    H[0, P - 1] = H[P - 1, 0] = 0.5
    Abar = 1.0 - inst.adjacency()
    ones_mp = np.ones((m * P, m * P))
    Q = (
        base.Q
        + w.a1 * kron(E1, ones_mp)
        + w.a2 * kron(np.ones((N, N)), np.eye(m * P))
        + w.a3 * kron_chain([Abar, D, Im])
        + w.a4 * kron(depot_to_well_matrix(n, P), Im)
        - w.a5 * kron_chain([E2, H, Im])
    )
    wells = np.ones(N)
    wells[N - 1] = 0.0
    v = -w.a1 * np.repeat(wells, m * P) - w.a2 * np.ones(N * m * P)
    const = w.a1 * n / 2 + w.a2 * m * P / 2 + w.a5 * m / 2
    labels = [f"x[{vv},{p},{i}]" for i in range(1, N + 1) for p in range(1, P + 1) for vv in range(1, m + 1)]
    full = Qubo(QuadExpr(Q, v, const), labels)
    fixed = np.flatnonzero(forced_zero_mask(inst)) + 1
    reduced, emb = fix_variables(full, fixed, np.zeros(len(fixed)))
    return VrpModel(inst, full, reduced, emb, w)


class Routes(NamedTuple):
    sequences: tuple
    cost: float
    feasible: bool
    problems: tuple


def decode_vrp(inst: VrpInstance, bits) -> Routes:
    """Per-rig node sequences (``0`` marks an empty or ambiguous slot) plus a full feasibility audit."""
    N, P, m = inst.N, inst.P, inst.m
    X = np.asarray(bits).reshape((m, P, N), order="F")
    A, C = inst.adjacency(), inst.costs()
    seqs, problems, cost = [], [], 0.0
    for v in range(m):
        seq = []
        for p in range(P):
            nodes = np.flatnonzero(X[v, p])
            if len(nodes) != 1:
                problems.append(f"rig {v + 1} position {p + 1} holds {len(nodes)} nodes")
                seq.append(0)
            else:
                seq.append(int(nodes[0]) + 1)
        for p in range(P - 1):
            a, b = seq[p], seq[p + 1]
            if a and b:
                if not A[a - 1, b - 1]:
                    problems.append(f"rig {v + 1} moves {a}->{b} without an edge")
                cost += C[a - 1, b - 1]
                if a == N and b != N and p >= 1:
                    problems.append(f"rig {v + 1} leaves the depot after returning")
        if seq[0] != N or seq[-1] != N:
            problems.append(f"rig {v + 1} does not start and end at the depot")
        if inst.require_all_rigs and P > 2 and seq[1] == N:
            problems.append(f"rig {v + 1} is unused")
        seqs.append(tuple(seq))
    visits = X[:, :, : inst.n].sum(axis=(0, 1))
    for i in np.flatnonzero(visits != 1):
        problems.append(f"well {i + 1} visited {int(visits[i])} times")
    return Routes(tuple(seqs), float(cost), not problems, tuple(problems))


# -- summarization --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SummarizationInstance:
    lengths: np.ndarray
    relevance: np.ndarray
    similarity: np.ndarray
    K: int
    alpha: float = 1.0

    def __post_init__(self):
        c = as_vector(self.lengths, "lengths")
        r = as_vector(self.relevance, "relevance")
        S = np.asarray(self.similarity, dtype=np.float64).reshape(c.shape[0], c.shape[0])
        if r.shape != c.shape:
            raise DimensionError("one relevance score per sentence required")
        if np.any(c != np.round(c)) or np.any(c <= 0):
            raise ValidationError("sentence lengths must be positive integers")
        if np.any(S != S.T) or np.any(np.diag(S) != 0):
            raise ValidationError("similarity must be symmetric with a zero diagonal")
        if int(self.K) != self.K or self.K < 1:
            raise DomainError(f"K must be a positive integer, got {self.K}")
        _positive("alpha", self.alpha)
        object.__setattr__(self, "lengths", c)
        object.__setattr__(self, "relevance", r)
        object.__setattr__(self, "similarity", S)
        object.__setattr__(self, "K", int(self.K))

    @property
    def n(self) -> int:
        return self.lengths.shape[0]

    def score(self, chosen) -> float:
        x = np.zeros(self.n)
        x[np.asarray(list(chosen), dtype=int) - 1] = 1
        return float(-self.relevance @ x + 0.5 * self.alpha * x @ self.similarity @ x)


def build_summarization(s: SummarizationInstance, rho=None) -> Qubo:
    """Bits ``[x (sentences); length slack]``."""
    n = s.n
    base = QuadExpr(s.alpha * s.similarity, -s.relevance)
    rho = rho_bound(base) if rho is None else _positive("rho", rho)
    L = np.asarray(integer_coeffs(s.K)).reshape(1, -1)
    total = base.pad(n + L.shape[1]) + block_penalty(s.lengths.reshape(1, -1), L, [s.K], rho)
    labels = [f"x{i + 1}" for i in range(n)] + [f"slack[{b}]" for b in range(L.shape[1])]
    return Qubo(total, labels)


class Summary(NamedTuple):
    sentences: tuple
    length: float
    feasible: bool


def decode_summarization(s: SummarizationInstance, bits) -> Summary:
    x = np.asarray(bits)[: s.n]
    length = float(s.lengths @ x)
    return Summary(ones_of(x), length, length <= s.K)
