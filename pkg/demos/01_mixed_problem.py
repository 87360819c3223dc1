"""Compile a small production-planning problem with mixed variable domains.

Three products: a batch count (integer), a machine mode (discrete speeds) and
a spin-valued shift toggle.  One capacity inequality and one equality tie them
together.  We compile to a QUBO, solve it exactly and decode.
"""
import numpy as np

from qubify import Discrete, Integer, MixedProblem, QuadExpr, Spin, brute_force, compile_problem

# objective 1/2 x'Qx + v'x over x = (batches, speed, shift)
Q = np.array([[2.0, -1.0, 0.0], [-1.0, 2.0, 1.0], [0.0, 1.0, 0.0]])
v = np.array([-9.0, -2.0, 1.0])
domains = (Integer(0, 6), Discrete((1.0, 2.0, 4.0)), Spin())

# batches + speed + shift == 6 and batches + speed <= 7
problem = MixedProblem(
    domains,
    QuadExpr(Q, v),
    eq=(np.array([[1.0, 1.0, 1.0]]), np.array([6.0])),
    ineq=(np.array([[1.0, 1.0, 0.0]]), np.array([7.0])),
    names=("batches", "speed", "shift"),
)

qubo, plan = compile_problem(problem)
print(f"compiled to {plan.n_bits} bits ({plan.n_slack_bits} slack), rho = {plan.rho_eq:g}")
for name, bits in plan.bits_per_variable().items():
    print(f"  {name:8s} {bits} bits")

report = brute_force(qubo)
decoded = plan.decode(report.best.bits)
print("\nbest bits:", report.best.bitstring(), "after", report.evaluations, "evaluations")
for name, val in zip(problem.names, decoded.values):
    print(f"  {name} = {val:g}")
print("objective:", problem.objective(decoded.values), "  compiled value:", report.best.value)
