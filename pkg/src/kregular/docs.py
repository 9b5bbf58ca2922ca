"""JSON documents: sequence definitions, automaton / representation witnesses, reports.

All integers in documents are written as decimal strings; readers also
accept plain JSON integers.  Rationals are ``[numerator, denominator]``
string pairs.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from importlib import resources

from . import __version__
from .errors import DefinitionError
from .kernel_lab import DFAO, KernelNode, LinearRepresentation
from .polygen import GeneratedRule, GeneratedSystem
from .seq_core import Sequence, SequencePolynomial, builtin, constant, periodic

_DECIMAL = re.compile(r"[+-]?\d+\Z")


def parse_int(value, location: str) -> int:
    if isinstance(value, bool):
        raise DefinitionError(f"expected an integer, got {value!r}", location)
    if isinstance(value, int):
        return value
    if isinstance(value, str) and _DECIMAL.match(value.strip()):
        return int(value)
    raise DefinitionError(f"expected a decimal integer, got {value!r}", location)


def _int_list(values, location):
    if not isinstance(values, list):
        raise DefinitionError("expected a list", location)
    return [parse_int(v, f"{location}[{i}]") for i, v in enumerate(values)]


def _expect_dict(doc, location):
    if not isinstance(doc, dict):
        raise DefinitionError(f"expected an object, got {type(doc).__name__}", location)
    return doc


# ------------------------------------------------------------- coefficients


def parse_coefficient(spec, location: str = "coefficient") -> Sequence:
    """Realize one coefficient spec as a Sequence.

    Kinds: ``{"const": c}``, ``{"periodic": {"values": [...], "preperiod": [...]}}``,
    ``{"builtin": name, "params": {...}}``, ``{"dfao": <dfao doc>}``,
    ``{"linrep": <linrep doc>}``.  A bare integer means ``const``.
    """
    if isinstance(spec, (int, str)) and not isinstance(spec, bool):
        return constant(parse_int(spec, location))
    spec = _expect_dict(spec, location)
    kinds = [k for k in ("const", "periodic", "builtin", "dfao", "linrep") if k in spec]
    if len(kinds) != 1:
        raise DefinitionError(f"coefficient needs exactly one kind, got {sorted(spec)}", location)
    kind = kinds[0]
    if kind == "const":
        return constant(parse_int(spec["const"], f"{location}.const"))
    if kind == "periodic":
        body = _expect_dict(spec["periodic"], f"{location}.periodic")
        values = _int_list(body.get("values"), f"{location}.periodic.values")
        pre = _int_list(body.get("preperiod", []), f"{location}.periodic.preperiod")
        return periodic(values, pre)
    if kind == "builtin":
        return _builtin(spec["builtin"], spec.get("params", {}), location)
    if kind == "dfao":
        dfao = dfao_from_doc(spec["dfao"], f"{location}.dfao")
        seq = dfao.as_sequence()
        seq.spec = {"dfao": dfao_to_doc(dfao)}
        return seq
    rep = linrep_from_doc(spec["linrep"], f"{location}.linrep")
    seq = rep.as_sequence()
    seq.spec = {"linrep": linrep_to_doc(rep)}
    return seq


def _builtin(name, params, location):
    params = _expect_dict(params, f"{location}.params")
    if name == "hankel_d":
        from .hankel import d_sequence

        if "m" not in params:
            raise DefinitionError("builtin 'hankel_d' is missing parameter 'm'", location)
        return d_sequence(parse_int(params["m"], f"{location}.params.m"))
    clean = {}
    for key, val in params.items():
        if key in ("values", "preperiod"):
            clean[key] = _int_list(val, f"{location}.params.{key}")
        else:
            clean[key] = parse_int(val, f"{location}.params.{key}")
    try:
        return builtin(name, **clean)
    except DefinitionError as exc:
        raise DefinitionError(str(exc), location) from None


def coefficient_spec(seq: Sequence):
    if seq.spec is None:
        raise DefinitionError(f"sequence {seq.descriptor} has no document form")
    return seq.spec


# ------------------------------------------------------------------ systems


def system_from_doc(doc) -> GeneratedSystem:
    doc = _expect_dict(doc, "document")
    if "k" not in doc:
        raise DefinitionError("missing field 'k'", "document")
    k = parse_int(doc["k"], "k")
    if k < 2:
        raise DefinitionError(f"k must be >= 2, got {k}", "k")
    cutoff = parse_int(doc.get("cutoff", 0), "cutoff")
    seeds_doc = _expect_dict(doc.get("seeds", {}), "seeds")
    seeds = {parse_int(i, f"seeds key {i!r}"): parse_int(v, f"seeds[{i}]") for i, v in seeds_doc.items()}
    rules_doc = doc.get("rules")
    if not isinstance(rules_doc, list):
        raise DefinitionError("'rules' must be a list", "rules")
    rules = {}
    for idx, rd in enumerate(rules_doc):
        loc = f"rules[{idx}]"
        rd = _expect_dict(rd, loc)
        if "residue" not in rd:
            raise DefinitionError("missing 'residue'", loc)
        residue = parse_int(rd["residue"], f"{loc}.residue")
        if not 0 <= residue < k:
            raise DefinitionError(f"residue {residue} outside 0..{k - 1}", f"{loc}.residue")
        if residue in rules:
            raise DefinitionError(f"duplicate residue {residue}", f"{loc}.residue")
        shift = parse_int(rd.get("shift", 0), f"{loc}.shift")
        if shift < 0:
            raise DefinitionError("shift must be nonnegative", f"{loc}.shift")
        poly_doc = rd.get("poly")
        if not isinstance(poly_doc, list) or not poly_doc:
            raise DefinitionError("'poly' must be a nonempty list of coefficients", f"{loc}.poly")
        coeffs = [parse_coefficient(c, f"{loc}.poly[{i}]") for i, c in enumerate(poly_doc)]
        rules[residue] = GeneratedRule(residue, SequencePolynomial(coeffs), shift)
    missing = [r for r in range(k) if r not in rules]
    if missing:
        raise DefinitionError(f"missing rule for residue {', '.join(map(str, missing))}", "rules")
    return GeneratedSystem(k, tuple(rules[r] for r in range(k)), cutoff, seeds)


def system_to_doc(system: GeneratedSystem) -> dict:
    return {
        "k": system.k,
        "cutoff": system.cutoff,
        "seeds": {str(i): str(v) for i, v in sorted(system.seeds.items())},
        "rules": [
            {
                "residue": r.residue,
                "shift": r.shift,
                "poly": [coefficient_spec(c) for c in r.poly.coefficients],
            }
            for r in system.rules
        ],
    }


def parse_definition(text: str):
    """Parse a definition document.

    Returns a :class:`GeneratedSystem` for ``{"k": ..., "rules": ...}``
    documents and a :class:`Sequence` for ``{"sequence": <coefficient spec>}``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DefinitionError(f"malformed JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    if isinstance(doc, dict) and "sequence" in doc:
        return parse_coefficient(doc["sequence"], "sequence")
    return system_from_doc(doc)


def serialize_system(system: GeneratedSystem) -> str:
    return json.dumps(system_to_doc(system), indent=2)


# ---------------------------------------------------------------- witnesses


def dfao_to_doc(dfao: DFAO) -> dict:
    return {
        "format": "dfao",
        "k": dfao.k,
        "horizon": dfao.horizon,
        "states": [
            {"id": s, "node": [node.i, node.j], "output": str(dfao.outputs[s])} for s, node in enumerate(dfao.nodes)
        ],
        "transitions": dfao.transitions,
    }


def dfao_from_doc(doc, location="dfao") -> DFAO:
    doc = _expect_dict(doc, location)
    k = parse_int(doc.get("k"), f"{location}.k")
    states = doc.get("states")
    trans = doc.get("transitions")
    if not isinstance(states, list) or not isinstance(trans, list) or len(states) != len(trans):
        raise DefinitionError("states and transitions must be lists of equal length", location)
    nodes, outputs = [], []
    for i, st in enumerate(states):
        st = _expect_dict(st, f"{location}.states[{i}]")
        node = st.get("node", [0, 0])
        nodes.append(KernelNode(parse_int(node[0], f"{location}.states[{i}].node"), parse_int(node[1], f"{location}.states[{i}].node")))
        outputs.append(parse_int(st.get("output"), f"{location}.states[{i}].output"))
    transitions = []
    for i, row in enumerate(trans):
        row = _int_list(row, f"{location}.transitions[{i}]")
        if len(row) != k or any(not 0 <= t < len(states) for t in row):
            raise DefinitionError("transition row must list one valid state per digit", f"{location}.transitions[{i}]")
        transitions.append(row)
    horizon = parse_int(doc.get("horizon", 0), f"{location}.horizon")
    return DFAO(k, nodes, [None] * len(nodes), transitions, outputs, horizon)


def _rat(x) -> list:
    x = Fraction(x)
    return [str(x.numerator), str(x.denominator)]


def _parse_rat(value, location) -> Fraction:
    if isinstance(value, list) and len(value) == 2:
        den = parse_int(value[1], location)
        if den == 0:
            raise DefinitionError("zero denominator", location)
        return Fraction(parse_int(value[0], location), den)
    return Fraction(parse_int(value, location))


def linrep_to_doc(rep: LinearRepresentation) -> dict:
    return {
        "format": "linrep",
        "k": rep.k,
        "rank": rep.rank,
        "horizon": rep.horizon,
        "basis_nodes": [[node.i, node.j] for node in rep.basis_nodes],
        "initial": [str(int(x)) if Fraction(x).denominator == 1 else _rat(x) for x in rep.initial],
        "matrices": [[[_rat(x) for x in row] for row in m] for m in rep.matrices],
    }


def linrep_from_doc(doc, location="linrep") -> LinearRepresentation:
    doc = _expect_dict(doc, location)
    k = parse_int(doc.get("k"), f"{location}.k")
    initial = [_parse_rat(x, f"{location}.initial[{i}]") for i, x in enumerate(doc.get("initial", []))]
    initial = [int(x) if x.denominator == 1 else x for x in initial]
    r = len(initial)
    if r < 1:
        raise DefinitionError("representation needs rank >= 1", f"{location}.initial")
    mats_doc = doc.get("matrices")
    if not isinstance(mats_doc, list) or len(mats_doc) != k:
        raise DefinitionError(f"need {k} digit matrices", f"{location}.matrices")
    matrices = []
    for d, m in enumerate(mats_doc):
        if not isinstance(m, list) or len(m) != r or any(not isinstance(row, list) or len(row) != r for row in m):
            raise DefinitionError(f"matrix {d} must be {r}x{r}", f"{location}.matrices[{d}]")
        matrices.append([[_parse_rat(x, f"{location}.matrices[{d}]") for x in row] for row in m])
    nodes = [KernelNode(int(a), int(b)) for a, b in doc.get("basis_nodes", [[0, 0]] * r)]
    horizon = doc.get("horizon")
    return LinearRepresentation(k, nodes, matrices, initial, horizon)


# ------------------------------------------------------------------ reports


def load_schema(name: str) -> dict:
    return json.loads(resources.files("kregular").joinpath("schemas", name).read_text())


def make_report(suite: str, parameters: dict, items: list, wall_time: float) -> dict:
    status = "pass" if items and all(it["status"] == "pass" for it in items) else "fail"
    return {
        "suite": suite,
        "status": status,
        "parameters": parameters,
        "items": items,
        "tool_version": __version__,
        "wall_time_s": round(wall_time, 3),
    }


def report_item(check: str, ok: bool, counterexample=None, detail=None) -> dict:
    item = {"check": check, "status": "pass" if ok else "fail", "counterexample": None if ok else counterexample}
    if detail is not None:
        item["detail"] = detail
    return item
