"""``qubify`` command line: compile, solve, verify, zoo and bench.

Exit codes: 0 ok, 2 invalid input, 3 infeasible constraints, 4 size cap
exceeded, 5 verification mismatch.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional

import numpy as np

from . import bench, zoo
from .binarize import build_map
from .errors import CapacityError, DimensionError, DomainError, InfeasibleError, ValidationError
from .io import QuboFile, decode_with_plan, parse_json, plan_to_doc, read_problem, read_qubo, triplets, write_qubo
from .penalty import CompileOptions, compile_problem
from .solve import AnnealParams, anneal, brute_force, check_feasibility, enumerate_bits

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_CAPACITY, EXIT_MISMATCH = 0, 2, 3, 4, 5
VERIFY_TOL = 1e-9


class Mismatch(Exception):
    pass


def fmt(x) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 2**53 else repr(x)


def _rho_arg(text):
    if text == "auto":
        return "auto"
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {text!r}") from None
    if not val > 0:
        raise argparse.ArgumentTypeError("rho must be positive")
    return val


def _options(file_opts: dict, rho=None, epsilon=None) -> CompileOptions:
    if rho is None:
        rho = file_opts.get("rho", "auto")
        if rho != "auto" and not (isinstance(rho, (int, float)) and rho > 0):
            raise ValidationError(f"options.rho: expected 'auto' or a positive number, got {rho!r}")
    return CompileOptions(rho=rho, epsilon=epsilon)


# -- compile ----------------------------------------------------------------------


def cmd_compile(args) -> int:
    p, file_opts = read_problem(args.input)
    q, plan = compile_problem(p, _options(file_opts, args.rho, args.epsilon))
    write_qubo(args.output, QuboFile(q, plan_to_doc(plan)))
    print(f"bits: {plan.n_bits}")
    print(f"rho: {fmt(plan.rho_eq)}")
    print(f"slack bits: {plan.n_slack_bits}")
    for name, k in plan.bits_per_variable().items():
        print(f"  {name}: {k} bits")
    return EXIT_OK


# -- solve ------------------------------------------------------------------------


def _zoo_lines(meta: dict, bits, value: float) -> list:
    name = meta["name"]
    inst = meta.get("instance")
    params = meta.get("params", {})
    if name == "maxcut":
        g = _graph(inst)
        cut = zoo.decode_max_cut(g, bits)
        return [f"side: {' '.join(map(str, cut.side))}", f"cut: {fmt(cut.value)}"]
    if name in ("mis", "clique"):
        return [f"set: {' '.join(map(str, zoo.decode_set(bits)))}"]
    if name == "minkunion":
        r = zoo.decode_min_k_union(_set_system(inst), bits)
        return [f"subsets: {' '.join(map(str, r.subsets))}", f"union size: {r.union_size}"]
    if name == "qap":
        perm = zoo.decode_qap(int(np.sqrt(len(bits))), bits)
        return ["permutation: infeasible" if perm is None else f"permutation: {' '.join(map(str, perm))}"]
    if name == "coloring":
        g = _graph(inst)
        r = zoo.decode_coloring(g, int(inst["colors"]), bits)
        if r.colors is None:
            return ["colors: infeasible"]
        return [f"colors: {' '.join(map(str, r.colors))}", f"colors used: {r.n_colors}", f"proper: {'yes' if r.proper else 'no'}"]
    if name == "knapsack":
        r = zoo.decode_knapsack(_knapsack(inst), bits)
        return [f"containers: {' '.join(map(str, r.containers))}", f"value: {fmt(r.value)}", f"feasible: {'yes' if r.feasible else 'no'}"]
    if name == "vrp":
        model = zoo.build_vrp(_vrp(inst), _vrp_weights(params))
        r = model.decode(bits)
        lines = [f"rig {v + 1}: {' '.join(map(str, s))}" for v, s in enumerate(r.sequences)]
        return lines + [f"cost: {fmt(r.cost)}", f"feasible: {'yes' if r.feasible else 'no'}"]
    if name == "summarize":
        r = zoo.decode_summarization(_summary(inst), bits)
        return [f"sentences: {' '.join(map(str, r.sentences))}", f"length: {fmt(r.length)}"]
    if name == "qubo2maxcut":
        x = zoo.cut_to_bits(bits)
        # the max-cut QUBO value is minus the cut
        orig = meta["offset"] + value
        return [f"original bits: {''.join(str(int(b)) for b in x)}", f"original value: {fmt(orig)}"]
    return []


def cmd_solve(args) -> int:
    qf = read_qubo(args.input)
    q = qf.qubo
    if args.method == "brute":
        report = brute_force(q, cap=args.max_bits)
    else:
        report = anneal(q, AnnealParams(sweeps=args.sweeps, restarts=args.restarts, seed=args.seed))
    best = report.best
    print(f"method: {report.method}")
    print(f"value: {fmt(best.value)}")
    print(f"bits: {best.bitstring()}")
    if qf.plan is not None:
        for name, val in decode_with_plan(qf.plan, best.bits).items():
            print(f"  {name} = {'invalid one-hot' if val is None else fmt(val)}")
    if qf.zoo is not None:
        for line in _zoo_lines(qf.zoo, best.bits, best.value):
            print(line)
    return EXIT_OK


# -- verify -----------------------------------------------------------------------


def constrained_minimum(p, bmap, tol=VERIFY_TOL):
    """Exhaustive minimum of the original problem over its encoded domain grid.

    Returns ``(value, x)`` or ``(None, None)`` if no point is feasible.
    """
    best_val, best_x = None, None
    for Y in enumerate_bits(bmap.m):
        X = Y @ bmap.L.T + bmap.g
        ok = np.ones(len(X), dtype=bool)
        for start, enc in zip(bmap.offsets(), bmap.encodings):
            if enc.onehot:
                ok &= Y[:, start : start + enc.bits].sum(axis=1) == 1
        if p.eq is not None:
            A, b = p.eq
            ok &= np.all(np.abs(X @ A.T - b) <= tol, axis=1)
        if p.ineq is not None:
            C, d = p.ineq
            ok &= np.all(X @ C.T - d <= tol, axis=1)
        if not ok.any():
            continue
        vals = p.objective.values(X[ok])
        k = int(np.argmin(vals))
        if best_val is None or vals[k] < best_val:
            best_val, best_x = float(vals[k]), X[ok][k]
    return best_val, best_x


def _close(a, b):
    return abs(a - b) <= VERIFY_TOL * max(1.0, abs(a), abs(b))


def cmd_verify(args) -> int:
    p, file_opts = read_problem(args.input)
    options = _options(file_opts, args.rho)
    try:
        q, plan = compile_problem(p, options)
    except InfeasibleError as e:
        print(f"compiled: infeasible ({e})")
        plan = None
    if plan is not None and plan.n_bits > args.max_bits:
        raise CapacityError(f"compiled QUBO has {plan.n_bits} bits, over --max-bits {args.max_bits}")

    if plan is None:
        # the screen is sound; confirm by enumerating the original directly
        bmap = build_map(p)
        if bmap.m > args.max_bits:
            raise CapacityError(f"original needs {bmap.m} bits, over --max-bits {args.max_bits}")
        ref, _ = constrained_minimum(p, bmap)
        if ref is None:
            print("constrained: infeasible")
            print("PASS (vacuous: infeasible on both sides)")
            return EXIT_OK
        print(f"constrained optimum: {fmt(ref)}")
        raise Mismatch("compiler reported infeasible but a feasible point exists")

    report = brute_force(q, cap=args.max_bits)
    x = plan.decode(report.best.bits)
    ref, _ = constrained_minimum(p, plan.binarization)
    print(f"bits: {plan.n_bits}")
    print(f"rho: {fmt(plan.rho_eq)}")
    print(f"compiled optimum: {fmt(report.best.value)}")
    if ref is None:
        print("constrained: infeasible")
        print("PASS (vacuous: infeasible on both sides)")
        return EXIT_OK
    print(f"constrained optimum: {fmt(ref)}")
    eq = (p.eq[0], p.eq[1]) if p.eq is not None else (None, None)
    ineq = (p.ineq[0], p.ineq[1]) if p.ineq is not None else (None, None)
    violations = check_feasibility(x.values, *eq, *ineq, tol=VERIFY_TOL)
    problems = []
    if x.onehot_violations:
        problems.append(f"one-hot violated for variables {x.onehot_violations}")
    for v in violations:
        problems.append(f"{v.kind} row {v.row} violated (residual {fmt(v.residual)})")
    decoded_val = p.objective(x.values)
    print(f"decoded objective: {fmt(decoded_val)}")
    if not _close(decoded_val, ref):
        problems.append(f"objective {fmt(decoded_val)} differs from constrained optimum {fmt(ref)}")
    elif not _close(report.best.value, ref):
        problems.append(f"compiled optimum {fmt(report.best.value)} differs from constrained optimum {fmt(ref)}")
    if problems:
        raise Mismatch("; ".join(problems))
    print("PASS")
    return EXIT_OK


# -- zoo --------------------------------------------------------------------------


def _need(doc, key, where="instance"):
    if not isinstance(doc, dict) or key not in doc:
        raise ValidationError(f"{where}: missing field '{key}'")
    return doc[key]


def _graph(doc) -> zoo.Graph:
    n = _need(doc, "n")
    edges = []
    for k, e in enumerate(_need(doc, "edges")):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise ValidationError(f"instance.edges[{k}]: expected [i, j] or [i, j, weight]")
        edges.append((e[0] + 1, e[1] + 1, e[2] if len(e) == 3 else 1.0))
    return zoo.Graph(int(n), tuple(edges))


def _set_system(doc) -> zoo.SetSystem:
    return zoo.SetSystem(np.asarray(_need(doc, "A"), dtype=np.float64), int(_need(doc, "k")))


def _knapsack(doc) -> zoo.KnapsackInstance:
    return zoo.KnapsackInstance(_need(doc, "capacities"), _need(doc, "values"), _need(doc, "weights"))


def _vrp(doc) -> zoo.VrpInstance:
    edges = tuple((i + 1, j + 1, c) for i, j, c in _need(doc, "edges"))
    return zoo.VrpInstance(
        int(_need(doc, "n")), edges, int(_need(doc, "rigs")), int(_need(doc, "P")), bool(doc.get("require_all_rigs", False))
    )


def _vrp_weights(params):
    if not params:
        return None
    if "alpha" in params:
        return zoo.VrpWeights.uniform(float(params["alpha"]))
    raise ValidationError("vrp accepts only --param alpha=VALUE")


def _summary(doc) -> zoo.SummarizationInstance:
    return zoo.SummarizationInstance(
        _need(doc, "lengths"), _need(doc, "relevance"), _need(doc, "similarity"), _need(doc, "K"), doc.get("alpha", 1.0)
    )


_PARAMS = {
    "maxcut": (),
    "mis": ("alpha",),
    "clique": ("alpha",),
    "minkunion": ("c1", "c2", "c3"),
    "qap": ("rho",),
    "coloring": ("a0", "a1", "a2", "a_edge"),
    "knapsack": ("alpha", "beta"),
    "vrp": ("alpha",),
    "summarize": ("rho",),
    "qubo2maxcut": (),
}


def build_zoo(name: str, inst: dict, params: dict) -> QuboFile:
    if name not in _PARAMS:
        raise ValidationError(f"unknown zoo problem {name!r}; choose from {', '.join(sorted(_PARAMS))}")
    unknown = set(params) - set(_PARAMS[name])
    if unknown:
        raise ValidationError(f"{name}: unknown parameter(s) {sorted(unknown)}")
    meta = {"name": name, "instance": inst, "params": params}
    if name == "maxcut":
        q = zoo.build_max_cut(_graph(inst))
    elif name == "mis":
        q = zoo.build_mis(_graph(inst), **params)
    elif name == "clique":
        q = zoo.build_max_clique(_graph(inst), **params)
    elif name == "minkunion":
        q = zoo.build_min_k_union(_set_system(inst), **params)
    elif name == "qap":
        qi = zoo.QapInstance(_need(inst, "F"), _need(inst, "D"))
        q = zoo.build_qap(qi, params.get("rho"))
        meta["systems"] = [{"matrix": triplets(M), "rhs": [1] * qi.n} for M, _ in zoo.qap_systems(qi.n)]
    elif name == "coloring":
        g = _graph(inst)
        w = zoo.ColoringWeights.default(g, **params)
        q = zoo.build_graph_coloring(g, int(_need(inst, "colors")), w)
    elif name == "knapsack":
        q = zoo.build_knapsack(_knapsack(inst), **params)
    elif name == "vrp":
        model = zoo.build_vrp(_vrp(inst), _vrp_weights(params))
        q = model.reduced
        meta["full_n"] = model.full.n
        meta["fixed"] = [i - 1 for i in model.embedding.fixed]
    elif name == "summarize":
        q = zoo.build_summarization(_summary(inst), params.get("rho"))
    else:
        red = zoo.qubo_to_maxcut(QuboFile.from_doc(inst).qubo)
        q = zoo.build_max_cut(red.graph)
        meta = {"name": name, "offset": red.offset, "params": params}
    return QuboFile(q, None, meta)


def _parse_params(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise ValidationError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            out[key] = float(val)
        except ValueError:
            raise ValidationError(f"--param {key}: {val!r} is not a number") from None
    return out


def cmd_zoo(args) -> int:
    with open(args.instance, encoding="utf-8") as fh:
        inst = parse_json(fh.read(), args.instance)
    try:
        qf = build_zoo(args.name, inst, _parse_params(args.param))
    except (TypeError, KeyError) as e:
        raise ValidationError(f"instance: {e}") from None
    write_qubo(args.output, qf)
    print(f"problem: {args.name}")
    print(f"bits: {qf.qubo.n}")
    if "full_n" in qf.zoo:
        print(f"bits before masking: {qf.zoo['full_n']}")
    if "systems" in qf.zoo:
        print(f"penalty systems: {len(qf.zoo['systems'])}")
    return EXIT_OK


# -- bench ------------------------------------------------------------------------


def cmd_bench(args) -> int:
    for line in bench.run(args.n, args.reps).lines():
        print(line)
    return EXIT_OK


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qubify", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile a problem file to a QUBO file")
    c.add_argument("input")
    c.add_argument("-o", "--output", required=True)
    c.add_argument("--rho", type=_rho_arg, default=None, help="'auto' (default) or a positive number")
    c.add_argument("--epsilon", type=float, default=None, help="override the file's continuous tolerance")
    c.set_defaults(func=cmd_compile)

    s = sub.add_parser("solve", help="minimise a QUBO file")
    s.add_argument("input")
    s.add_argument("--method", choices=("brute", "anneal"), default="brute")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sweeps", type=int, default=2000)
    s.add_argument("--restarts", type=int, default=16)
    s.add_argument("--max-bits", type=int, default=25)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check compiled and original optima agree")
    v.add_argument("input")
    v.add_argument("--max-bits", type=int, default=20)
    v.add_argument("--rho", type=_rho_arg, default=None)
    v.set_defaults(func=cmd_verify)

    z = sub.add_parser("zoo", help="build a QUBO for a named problem instance")
    z.add_argument("name")
    z.add_argument("instance")
    z.add_argument("-o", "--output", required=True)
    z.add_argument("--param", action="append", metavar="KEY=VALUE")
    z.set_defaults(func=cmd_zoo)

    b = sub.add_parser("bench", help="time Kronecker vs element-wise assembly")
    b.add_argument("--n", type=int, default=10_000)
    b.add_argument("--reps", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Mismatch as e:
        print(f"FAIL: {e}")
        return EXIT_MISMATCH
    except InfeasibleError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CapacityError as e:
        print(f"capacity: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValidationError, DimensionError, DomainError, IndexError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
