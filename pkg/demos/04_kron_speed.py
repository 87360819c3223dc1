"""Assemble a block one-hot penalty matrix with Kronecker products and with loops.

The same I_m (x) J_n matrix is filled once by a single Kronecker product and
once entry by entry.  Sizes are kept small here; the CLI `qubify bench`
runs the full N = 10000 case.
"""
from qubify import bench

for N in (400, 1600, 3600):
    res = bench.run(N, reps=3)
    print(
        f"N={N:5d}  kron {res.kron_seconds * 1e3:8.2f} ms  loop {res.loop_seconds * 1e3:9.2f} ms  "
        f"ratio {res.ratio:6.1f}  identical {res.identical}"
    )
