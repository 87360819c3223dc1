"""JSON problem and QUBO files.

Both documents carry ``"version": 1``. Indices in files are 0-based; sparse
matrices are lists of ``[row, col, value]`` triplets sorted by ``(row, col)``
with no duplicates.  Objective triplets cover the upper triangle only and a
triplet ``[i, j, q]`` with ``i < j`` stands for both ``Q[i, j]`` and ``Q[j, i]``.
Output is canonical (sorted keys, fixed separators, shortest round-trip
floats) so identical inputs give byte-identical files.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, DomainError, ValidationError
from .model import Binary, Continuous, Discrete, Integer, MixedProblem, Qubo, Spin
from .tensor import QuadExpr

VERSION = 1


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def _num(x):
    """Integral values as ints so ``2.0`` and ``2`` serialize alike."""
    x = float(x)
    if x == 0:
        return 0
    if x.is_integer() and abs(x) < 2**53:
        return int(x)
    return x


def _real(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"{where}: expected a number, got {x!r}")
    if not math.isfinite(x):
        raise ValidationError(f"{where}: value must be finite")
    return float(x)


def _index(x, limit, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValidationError(f"{where}: index must be an integer, got {x!r}")
    if not 0 <= x < limit:
        raise ValidationError(f"{where}: index {x} outside 0..{limit - 1}")
    return x


def _vector(doc, n, where):
    if not isinstance(doc, list):
        raise ValidationError(f"{where}: expected a list")
    if len(doc) != n:
        raise ValidationError(f"{where}: expected {n} entries, got {len(doc)}")
    return np.array([_real(x, f"{where}[{k}]") for k, x in enumerate(doc)], dtype=np.float64)


def read_triplets(doc, shape, where, upper=False, strict_upper=False) -> np.ndarray:
    if not isinstance(doc, list):
        raise ValidationError(f"{where}: expected a list of triplets")
    M = np.zeros(shape)
    prev = None
    for k, t in enumerate(doc):
        at = f"{where}[{k}]"
        if not isinstance(t, list) or len(t) != 3:
            raise ValidationError(f"{at}: expected [row, col, value]")
        i = _index(t[0], shape[0], at)
        j = _index(t[1], shape[1], at)
        val = _real(t[2], at)
        if strict_upper and not i < j:
            raise ValidationError(f"{at}: need row < col, got ({i}, {j})")
        if upper and i > j:
            raise ValidationError(f"{at}: lower-triangle entry ({i}, {j})")
        if prev is not None and (i, j) <= prev:
            kind = "duplicate" if (i, j) == prev else "out-of-order"
            raise ValidationError(f"{at}: {kind} triplet ({i}, {j})")
        prev = (i, j)
        M[i, j] = val
        if upper:
            M[j, i] = val
    return M


def triplets(M, upper=False, strict_upper=False) -> list:
    M = np.asarray(M)
    out = []
    for i, j in zip(*np.nonzero(M)):
        if (strict_upper and i >= j) or (upper and i > j):
            continue
        out.append([int(i), int(j), _num(M[i, j])])
    return out


# -- problem files ----------------------------------------------------------------


def _domain_from_doc(d, where):
    if not isinstance(d, dict) or "domain" not in d:
        raise ValidationError(f"{where}: expected an object with a 'domain' field")
    kind = d["domain"]
    try:
        if kind == "binary":
            return Binary()
        if kind == "spin":
            return Spin()
        if kind == "integer":
            return Integer(d["lo"], d["hi"])
        if kind == "discrete":
            return Discrete(tuple(_real(a, f"{where}.values") for a in d["values"]))
        if kind == "continuous":
            return Continuous(_real(d["lo"], f"{where}.lo"), _real(d["hi"], f"{where}.hi"))
    except KeyError as e:
        raise ValidationError(f"{where}: missing field {e}") from None
    except (DomainError, TypeError) as e:
        raise ValidationError(f"{where}: {e}") from None
    raise ValidationError(f"{where}: unknown domain {kind!r}")


def _domain_to_doc(name, dom) -> dict:
    out = {"name": name, "domain": dom.kind}
    if isinstance(dom, (Integer, Continuous)):
        out.update(lo=_num(dom.lo), hi=_num(dom.hi))
    elif isinstance(dom, Discrete):
        out["values"] = [_num(a) for a in dom.values]
    return out


def _check_version(doc, what):
    if not isinstance(doc, dict):
        raise ValidationError(f"{what}: top level must be an object")
    if doc.get("version") != VERSION:
        raise ValidationError(f"{what}: unsupported version {doc.get('version')!r}")


def _system_from_doc(doc, n, where):
    if doc is None:
        return None
    if not isinstance(doc, dict) or "rhs" not in doc or "matrix" not in doc:
        raise ValidationError(f"{where}: expected an object with 'matrix' and 'rhs'")
    if not isinstance(doc["rhs"], list):
        raise ValidationError(f"{where}.rhs: expected a list")
    rows = len(doc["rhs"])
    rhs = _vector(doc["rhs"], rows, f"{where}.rhs")
    return read_triplets(doc["matrix"], (rows, n), f"{where}.matrix"), rhs


def problem_from_doc(doc) -> tuple[MixedProblem, dict]:
    """``(problem, options)`` from a parsed problem document."""
    _check_version(doc, "problem")
    variables = doc.get("variables")
    if not isinstance(variables, list) or not variables:
        raise ValidationError("variables: expected a non-empty list")
    doms, names = [], []
    for k, v in enumerate(variables):
        doms.append(_domain_from_doc(v, f"variables[{k}]"))
        names.append(str(v.get("name", f"x{k + 1}")))
    if len(set(names)) != len(names):
        raise ValidationError("variables: names must be unique")
    n = len(doms)
    obj = doc.get("objective", {})
    if not isinstance(obj, dict):
        raise ValidationError("objective: expected an object")
    Q = read_triplets(obj.get("quadratic", []), (n, n), "objective.quadratic", upper=True)
    v = _vector(obj.get("linear", [0] * n), n, "objective.linear")
    c = _real(obj.get("constant", 0), "objective.constant")
    eq = _system_from_doc(doc.get("eq"), n, "eq")
    ineq = _system_from_doc(doc.get("ineq"), n, "ineq")
    eps = _real(doc.get("epsilon", 1e-2), "epsilon")
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise ValidationError("options: expected an object")
    try:
        p = MixedProblem(tuple(doms), QuadExpr(Q, v, c), eq, ineq, eps, tuple(names))
    except (DomainError, DimensionError) as e:
        raise ValidationError(str(e)) from None
    return p, options


def problem_to_doc(p: MixedProblem, options: Optional[dict] = None) -> dict:
    doc = {
        "version": VERSION,
        "variables": [_domain_to_doc(nm, d) for nm, d in zip(p.names, p.domains)],
        "objective": {
            "quadratic": triplets(p.objective.Q, upper=True),
            "linear": [_num(a) for a in p.objective.v],
            "constant": _num(p.objective.c),
        },
        "epsilon": _num(p.epsilon),
    }
    for key, system in (("eq", p.eq), ("ineq", p.ineq)):
        if system is not None:
            doc[key] = {"matrix": triplets(system[0]), "rhs": [_num(a) for a in system[1]]}
    if options:
        doc["options"] = dict(options)
    return doc


def parse_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{what}: not valid JSON ({e.msg} at line {e.lineno})") from None


def read_problem(path) -> tuple[MixedProblem, dict]:
    with open(path, encoding="utf-8") as fh:
        return problem_from_doc(parse_json(fh.read(), str(path)))


def write_problem(path, p: MixedProblem, options: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(problem_to_doc(p, options)))


# -- qubo files -------------------------------------------------------------------


def plan_to_doc(plan) -> dict:
    """Everything needed to decode compiled bits back to variable values."""
    encs = []
    for name, e in zip(plan.names, plan.binarization.encodings):
        encs.append({"name": name, "kind": e.kind, "coeffs": [_num(a) for a in e.coeffs], "shift": _num(e.shift)})
    return {
        "encodings": encs,
        "slack_bits": 0 if plan.slack is None else plan.slack.m,
        "slack_rows": list(plan.slack_rows),
        "at_most_one_rows": list(plan.at_most_one_rows),
        "rho": {"eq": _num(plan.rho_eq), "ineq": _num(plan.rho_ineq), "onehot": _num(plan.rho_onehot)},
    }


def digest(doc) -> str:
    return hashlib.sha256(dumps(doc).encode("utf-8")).hexdigest()


@dataclass(frozen=True, eq=False)
class QuboFile:
    qubo: Qubo
    plan: Optional[dict] = None
    zoo: Optional[dict] = None

    def to_doc(self) -> dict:
        q = self.qubo
        doc = {
            "version": VERSION,
            "n": q.n,
            "constant": _num(q.c),
            "linear": [_num(a) for a in q.v],
            "diagonal": [_num(a) for a in np.diag(q.Q)],
            "quadratic": triplets(q.Q, strict_upper=True),
            "labels": list(q.labels),
        }
        if self.plan is not None:
            doc["plan"] = self.plan
            doc["plan_digest"] = digest(self.plan)
        if self.zoo is not None:
            doc["zoo"] = self.zoo
        return doc

    @classmethod
    def from_doc(cls, doc) -> "QuboFile":
        _check_version(doc, "qubo")
        n = doc.get("n")
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise ValidationError(f"n: expected a non-negative integer, got {n!r}")
        Q = read_triplets(doc.get("quadratic", []), (n, n), "quadratic", upper=True, strict_upper=True)
        Q[np.diag_indices(n)] = _vector(doc.get("diagonal", [0] * n), n, "diagonal")
        v = _vector(doc.get("linear", [0] * n), n, "linear")
        c = _real(doc.get("constant", 0), "constant")
        labels = doc.get("labels") or ()
        if labels and len(labels) != n:
            raise ValidationError(f"labels: expected {n} entries, got {len(labels)}")
        plan = doc.get("plan")
        if plan is not None and doc.get("plan_digest") != digest(plan):
            raise ValidationError("plan_digest: does not match the recorded plan")
        return cls(Qubo(QuadExpr(Q, v, c), tuple(labels)), plan, doc.get("zoo"))

    def dumps(self) -> str:
        return dumps(self.to_doc())


def read_qubo(path) -> QuboFile:
    with open(path, encoding="utf-8") as fh:
        return QuboFile.from_doc(parse_json(fh.read(), str(path)))


def write_qubo(path, qf: QuboFile) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(qf.dumps())


def decode_with_plan(plan: dict, bits) -> dict:
    """Variable values from compiled bits using a serialized plan."""
    bits = np.asarray(bits, dtype=np.float64)
    out, start = {}, 0
    for e in plan["encodings"]:
        k = len(e["coeffs"])
        y = bits[start : start + k]
        if e["kind"] == "discrete" and y.sum() != 1:
            out[e["name"]] = None
        else:
            out[e["name"]] = float(np.dot(e["coeffs"], y) + e["shift"])
        start += k
    return out
