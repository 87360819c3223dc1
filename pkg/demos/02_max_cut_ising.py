"""Max-Cut on a weighted 12-node ring with chords, three ways.

The cut QUBO is solved exactly, rewritten as an Ising model and annealed,
and finally the whole QUBO is folded back into a Max-Cut instance on one
extra node to show the reduction goes both ways.
"""
import numpy as np

from qubify import AnnealParams, anneal, brute_force, qubo_to_ising
from qubify.zoo import Graph, build_max_cut, decode_max_cut, qubo_to_maxcut

rng = np.random.default_rng(4)
n = 12
edges = [(i, i % n + 1, float(rng.integers(1, 6))) for i in range(1, n + 1)]
edges += [(i, i + n // 2, float(rng.integers(1, 6))) for i in range(1, n // 2 + 1)]
g = Graph(n, tuple(edges))

q = build_max_cut(g)
exact = brute_force(q)
print("exact cut:", decode_max_cut(g, exact.best.bits).value)

ising = qubo_to_ising(q)
print("Ising couplings equal -C/2:", np.allclose(ising.J, -0.5 * g.weight_matrix()), " field zero:", not ising.h.any())

annealed = anneal(q, AnnealParams(sweeps=500, restarts=8, seed=1))
cut = decode_max_cut(g, annealed.best.bits)
print("annealed cut:", cut.value, " side:", cut.side)
print("restart values:", annealed.restart_values)

red = qubo_to_maxcut(q)
print(f"\nfolded back: {red.graph.n} nodes, offset {red.offset:g}")
folded = brute_force(build_max_cut(red.graph))
x = red.to_bits(folded.best.bits)
print("recovered bits match:", q(x) == exact.best.value)
