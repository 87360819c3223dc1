"""Route one drilling rig from the depot through three wells.

Bits x[v, p, i] say rig v stands at node i in slot p.  Slots that can never
hold a node (wells in the first or last slot, wells unreachable from the
depot in the second or second-last slot) are fixed to zero before solving,
which shrinks the search space noticeably.
"""
from qubify import brute_force
from qubify.zoo import VrpInstance, build_vrp

# wells 1..3, depot 4; the depot cannot reach well 2 directly
edges = (
    (1, 2, 2.0),
    (2, 3, 1.0),
    (1, 3, 4.0),
    (1, 4, 1.0),
    (3, 4, 2.0),
    (4, 4, 0.0),
)
inst = VrpInstance(n=3, edges=edges, m=1, P=5)
model = build_vrp(inst)
print(f"full model {model.full.n} bits, after fixing forced zeros {model.reduced.n} bits")

report = brute_force(model.reduced)
routes = model.decode(report.best.bits)
for v, seq in enumerate(routes.sequences, start=1):
    print(f"rig {v}: {' -> '.join(map(str, seq))}")
print("route cost:", routes.cost, " feasible:", routes.feasible)
print("QUBO value (half the cost):", report.best.value)
