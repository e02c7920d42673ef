"""JSON interchange formats.

Complex matrices are nested arrays of [re, im] pairs (row major); states are
{"dim_a", "dim_b", "amplitudes"}; protocol trees mirror the node structure
with {"actor", "povm", "children"} objects and {"guess"} leaves.  Every
loader validates shape and rejects malformed payloads with DomainError.
"""

import numpy as np

from . import bounds as bounds_mod
from . import locc
from .ensembles import StateEnsemble, from_descriptor
from .errors import DomainError
from .qstate import BipartiteState


def _pair(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def vector_to_json(v) -> list:
    return [_pair(z) for z in np.asarray(v, dtype=complex).reshape(-1)]


def vector_from_json(data) -> np.ndarray:
    try:
        out = np.array([complex(re, im) for re, im in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"malformed complex vector: {exc}") from exc
    if out.size == 0:
        raise DomainError("empty complex vector")
    return out


def matrix_to_json(matrix) -> list:
    m = np.asarray(matrix, dtype=complex)
    return [[_pair(z) for z in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise DomainError("matrix payload must be a nonempty nested list")
    rows = []
    width = None
    for row in data:
        vec = vector_from_json(row)
        if width is None:
            width = vec.size
        elif vec.size != width:
            raise DomainError("matrix rows have inconsistent lengths")
        rows.append(vec)
    return np.vstack(rows)


def state_to_json(state: BipartiteState) -> dict:
    return {
        "dim_a": state.dim_a,
        "dim_b": state.dim_b,
        "amplitudes": vector_to_json(state.amplitudes),
    }


def state_from_json(data) -> BipartiteState:
    try:
        return BipartiteState(int(data["dim_a"]), int(data["dim_b"]), vector_from_json(data["amplitudes"]))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed state payload: {exc}") from exc


def ensemble_to_json(ensemble: StateEnsemble) -> dict:
    return {
        "dim_a": ensemble.dim_a,
        "dim_b": ensemble.dim_b,
        "priors": [float(p) for p in ensemble.priors],
        "states": [state_to_json(s) for s in ensemble.states],
    }


def ensemble_from_json(data) -> StateEnsemble:
    """Accepts either a constructor descriptor ({"kind": ...}) or an explicit payload."""
    if not isinstance(data, dict):
        raise DomainError("ensemble payload must be a JSON object")
    if "kind" in data:
        return from_descriptor(data)
    if "states" in data:
        states = tuple(state_from_json(s) for s in data["states"])
        priors = data.get("priors")
        return StateEnsemble(states, None if priors is None else np.asarray(priors, dtype=float))
    raise DomainError("ensemble payload needs a 'kind' or a 'states' field")


def povm_to_json(povm: locc.Povm) -> list:
    return [matrix_to_json(m) for m in povm.elements]


def _node_to_json(node) -> dict:
    if isinstance(node, locc.Leaf):
        return {"guess": node.guess}
    return {
        "actor": node.actor,
        "povm": povm_to_json(node.povm),
        "children": [_node_to_json(c) for c in node.children],
    }


def protocol_to_json(protocol: locc.LoccProtocol) -> dict:
    return {
        "dim_a": protocol.dim_a,
        "dim_b": protocol.dim_b,
        "root": _node_to_json(protocol.root),
    }


def _node_from_json(data):
    if not isinstance(data, dict):
        raise DomainError("protocol node must be a JSON object")
    if "guess" in data:
        try:
            return locc.Leaf(int(data["guess"]))
        except (TypeError, ValueError) as exc:
            raise DomainError(f"malformed leaf: {exc}") from exc
    try:
        povm = locc.Povm(tuple(matrix_from_json(m) for m in data["povm"]))
        children = tuple(_node_from_json(c) for c in data["children"])
        return locc.ProtocolNode(str(data["actor"]), povm, children)
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed protocol node: {exc}") from exc


def protocol_from_json(data) -> locc.LoccProtocol:
    """Accepts a protocol tree or a one-way spec (alice_basis + bob_discriminators)."""
    if not isinstance(data, dict):
        raise DomainError("protocol payload must be a JSON object")
    if "alice_basis" in data:
        return one_way_spec_from_json(data).as_protocol()
    try:
        return locc.LoccProtocol(int(data["dim_a"]), int(data["dim_b"]), _node_from_json(data["root"]))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed protocol payload: {exc}") from exc


def one_way_spec_to_json(spec) -> dict:
    return {
        "alice_basis": matrix_to_json(spec.alice_basis),
        "bob_discriminators": [
            [{"label": lab, "vector": vector_to_json(v)} for lab, v in group]
            for group in spec.bob_discriminators
        ],
    }


def one_way_spec_from_json(data):
    from .synth import OneWayProtocolSpec

    try:
        groups = tuple(
            tuple((int(entry["label"]), vector_from_json(entry["vector"])) for entry in group)
            for group in data["bob_discriminators"]
        )
        return OneWayProtocolSpec(matrix_from_json(data["alice_basis"]), groups)
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed one-way spec payload: {exc}") from exc


def evaluation_to_json(result: locc.ProtocolEvaluation) -> dict:
    return {
        "success_probability": result.success_probability,
        "mutual_information_bits": result.mutual_information_bits,
        "per_state_success": list(result.per_state_success),
        "joint_table": [
            {"v": v, "path": list(path), "guess": guess, "p": p}
            for v, path, guess, p in result.joint
        ],
    }


def bounds_report_to_json(report: bounds_mod.BoundsReport) -> dict:
    return {
        "k": report.k,
        "m": report.m,
        "n": report.n,
        "lambda_max": report.lambda_max,
        "f_lower": report.f_lower,
        "f_upper": report.f_upper,
        "fme_lower": report.fme_lower,
        "fme_upper": report.fme_upper,
        "schmidt_upper": report.schmidt_upper,
        "entropy_upper_bits": report.entropy_upper_bits,
        "g_lower_bits": report.g_lower_bits,
        "g_upper_bits": report.g_upper_bits,
        "verdict": report.verdict,
        "possible_via": report.possible_via,
        "witnesses": [
            {
                "name": w.name,
                "kind": w.kind,
                "value": w.value,
                "requirement": w.requirement,
                "violated": w.violated,
            }
            for w in report.witnesses
        ],
    }
