import json
from pathlib import Path

import numpy as np
import pytest

from qubify.cli import main

from oracles import qap_min

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(path, doc):
    path.write_text(json.dumps(doc))
    return path


def problem(variables, **kw):
    return {"version": 1, "variables": variables, **kw}


def test_compile_reports_rho_bound(tmp_path, capsys):
    doc = problem(
        [{"name": f"x{i}", "domain": "binary"} for i in range(3)],
        objective={"linear": [1, 2, 3]},
        eq={"matrix": [[0, 0, 1], [0, 1, 1], [0, 2, 1]], "rhs": [1]},
    )
    src = write(tmp_path / "p.json", doc)
    code, out, _ = run(capsys, "compile", src, "-o", tmp_path / "q.json")
    assert code == 0
    assert "rho: 14" in out  # 0 + 2 * 6 + 2
    assert "bits: 3" in out and (tmp_path / "q.json").exists()


def test_compile_integer_bit_count(tmp_path, capsys):
    src = write(tmp_path / "p.json", problem([{"name": "n", "domain": "integer", "lo": 0, "hi": 300}]))
    code, out, _ = run(capsys, "compile", src, "-o", tmp_path / "q.json")
    assert code == 0 and "n: 9 bits" in out


def test_compile_then_solve_decodes(tmp_path, capsys):
    q = tmp_path / "q.json"
    assert run(capsys, "compile", CORPUS / "02_integer_sum.json", "-o", q)[0] == 0
    code, out, _ = run(capsys, "solve", q)
    assert code == 0 and "value: -9" in out
    vals = dict(line.strip().split(" = ") for line in out.splitlines() if " = " in line)
    assert sum(float(v) for v in vals.values()) == 5


def test_solve_anneal_is_reproducible(tmp_path, capsys):
    q = tmp_path / "q.json"
    run(capsys, "compile", CORPUS / "06_all_domains.json", "-o", q)
    args = ("solve", q, "--method", "anneal", "--seed", 7, "--sweeps", 300, "--restarts", 4)
    first = run(capsys, *args)
    assert first[0] == 0 and first == run(capsys, *args)


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[")
    assert run(capsys, "compile", bad, "-o", tmp_path / "q.json")[0] == 2
    assert run(capsys, "compile", tmp_path / "missing.json", "-o", tmp_path / "q.json")[0] == 2
    infeasible = write(
        tmp_path / "inf.json",
        problem(
            [{"name": "a", "domain": "binary"}, {"name": "b", "domain": "binary"}],
            eq={"matrix": [[0, 0, 1], [0, 1, 1]], "rhs": [3]},
        ),
    )
    code, _, err = run(capsys, "compile", infeasible, "-o", tmp_path / "q.json")
    assert code == 3 and "infeasible" in err
    big = write(tmp_path / "big.json", problem([{"name": f"x{i}", "domain": "binary"} for i in range(26)]))
    run(capsys, "compile", big, "-o", tmp_path / "big_q.json")
    assert run(capsys, "solve", tmp_path / "big_q.json")[0] == 4
    assert run(capsys, "verify", CORPUS / "negative_tiny_rho.json")[0] == 5


def test_verify_vacuous_when_infeasible(tmp_path, capsys):
    src = write(
        tmp_path / "inf.json",
        problem([{"name": "a", "domain": "binary"}], ineq={"matrix": [[0, 0, 1]], "rhs": [-1]}),
    )
    code, out, _ = run(capsys, "verify", src)
    assert code == 0 and "vacuous" in out


def test_verify_corpus_file(capsys):
    code, out, _ = run(capsys, "verify", CORPUS / "01_spin_chain.json")
    assert code == 0 and out.rstrip().endswith("PASS")


def test_verify_rho_override(capsys):
    code, out, _ = run(capsys, "verify", CORPUS / "05_knapsack.json", "--rho", "0.01")
    assert code == 5 and out.startswith("bits:") and "FAIL" in out


def test_zoo_maxcut_triangle(tmp_path, capsys):
    inst = write(tmp_path / "g.json", {"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]})
    q = tmp_path / "q.json"
    code, out, _ = run(capsys, "zoo", "maxcut", inst, "-o", q)
    assert code == 0 and "bits: 3" in out
    code, out, _ = run(capsys, "solve", q)
    assert "value: -2" in out and "cut: 2" in out


def test_zoo_qap_matches_oracle(tmp_path, capsys):
    rng = np.random.default_rng(11)
    F = rng.integers(0, 5, (3, 3)).tolist()
    D = rng.integers(0, 5, (3, 3)).tolist()
    inst = write(tmp_path / "qap.json", {"F": F, "D": D})
    q = tmp_path / "q.json"
    code, out, _ = run(capsys, "zoo", "qap", inst, "-o", q)
    assert code == 0 and "penalty systems: 2" in out
    assert len(json.loads(q.read_text())["zoo"]["systems"]) == 2
    _, out, _ = run(capsys, "solve", q)
    assert f"value: {qap_min(F, D)}" in out and "permutation: infeasible" not in out


def test_zoo_vrp_masks_bits(tmp_path, capsys):
    inst = write(tmp_path / "vrp.json", {"n": 2, "rigs": 1, "P": 4, "edges": [[0, 1, 1], [0, 2, 1], [1, 2, 1], [2, 2, 0]]})
    q = tmp_path / "q.json"
    code, out, _ = run(capsys, "zoo", "vrp", inst, "-o", q)
    assert code == 0 and "bits: 8" in out and "bits before masking: 12" in out
    _, out, _ = run(capsys, "solve", q)
    assert "cost: 3" in out and "feasible: yes" in out and "rig 1: 3 " in out


def test_zoo_other_problems(tmp_path, capsys):
    cases = {
        "mis": ({"n": 3, "edges": [[0, 1], [1, 2]]}, "set: 1 3"),
        "coloring": ({"n": 3, "edges": [[0, 1], [1, 2]], "colors": 2}, "colors used: 2"),
        "minkunion": ({"A": [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]], "k": 2}, "union size: 3"),
        "knapsack": ({"capacities": [4], "values": [[3, 5, 2]], "weights": [[2, 3, 2]]}, "value: 5"),
        "summarize": (
            {"lengths": [2, 3, 1], "relevance": [3, 4, 1], "similarity": [[0, 1, 0], [1, 0, 0], [0, 0, 0]], "K": 5},
            "sentences: 1 2",
        ),
    }
    for name, (doc, expect) in cases.items():
        q = tmp_path / f"{name}.json"
        assert run(capsys, "zoo", name, write(tmp_path / f"{name}_in.json", doc), "-o", q)[0] == 0
        _, out, _ = run(capsys, "solve", q)
        assert expect in out, (name, out)


def test_zoo_qubo2maxcut(tmp_path, capsys):
    src = tmp_path / "q.json"
    run(capsys, "compile", CORPUS / "05_knapsack.json", "-o", src)
    _, direct, _ = run(capsys, "solve", src)
    mc = tmp_path / "mc.json"
    assert run(capsys, "zoo", "qubo2maxcut", src, "-o", mc)[0] == 0
    _, out, _ = run(capsys, "solve", mc)
    bits = next(line for line in direct.splitlines() if line.startswith("bits:")).split()[1]
    value = next(line for line in direct.splitlines() if line.startswith("value:")).split()[1]
    assert f"original bits: {bits}" in out and f"original value: {value}" in out


def test_zoo_bad_input(tmp_path, capsys):
    inst = write(tmp_path / "g.json", {"n": 3, "edges": [[0, 5]]})
    assert run(capsys, "zoo", "maxcut", inst, "-o", tmp_path / "q.json")[0] == 2
    inst = write(tmp_path / "g2.json", {"n": 3, "edges": []})
    assert run(capsys, "zoo", "nosuch", inst, "-o", tmp_path / "q.json")[0] == 2
    assert run(capsys, "zoo", "mis", inst, "-o", tmp_path / "q.json", "--param", "beta=2")[0] == 2


def test_bench_small(capsys):
    code, out, _ = run(capsys, "bench", "--n", 144)
    assert code == 0 and "identical: yes" in out and "m=12, n=12" in out
    assert run(capsys, "bench", "--n", 30000)[0] == 4


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["solve"])
    assert ei.value.code == 2
