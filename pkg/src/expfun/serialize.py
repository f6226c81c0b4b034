"""JSON round-tripping for Hopf presentations and operator modules.

Two versioned layouts:

* ``hopf-v1``: p, grading {kind, modulus?}, degree_bound, basis as
  [{label, degree, weight}], mu as [{i, j, out: [{k, coeff}]}] and delta as
  [{i, out: [{j, k, coeff}]}].  Optional window keys (weight_bound,
  weight_modulus, provenance) are included only when set.
* ``dieu-v1``: p, degree_bound, dims per slot, F and V matrices per slot.

Entry order is fixed (sorted indices) and dumps use sorted keys, so a
load/dump cycle is byte-identical.
"""

from __future__ import annotations

import json

import numpy as np

from .dieudonne import DieudonneModule
from .hopf import BasisElement, HopfPresentation


def hopf_to_dict(h: HopfPresentation) -> dict:
    grading = {"kind": "cyclic", "modulus": h.modulus} if h.modulus \
        else {"kind": "natural"}
    out = {
        "schema": "hopf-v1",
        "p": h.p,
        "grading": grading,
        "degree_bound": h.degree_bound,
        "basis": [{"label": b.label, "degree": b.degree, "weight": b.weight}
                  for b in h.basis],
        "mu": [{"i": i, "j": j,
                "out": [{"k": k, "coeff": c}
                        for k, c in sorted(entry.items())]}
               for (i, j), entry in sorted(h.mu.items())],
        "delta": [{"i": i,
                   "out": [{"j": j, "k": k, "coeff": c}
                           for (j, k), c in sorted(entry.items())]}
                  for i, entry in sorted(h.delta.items())],
    }
    if h.weight_bound is not None:
        out["weight_bound"] = h.weight_bound
    if h.weight_modulus is not None:
        out["weight_modulus"] = h.weight_modulus
    if h.provenance is not None:
        out["provenance"] = _prov_to_json(h.provenance)
    return out


def _prov_to_json(prov):
    return [(_prov_to_json(x) if isinstance(x, tuple) else x) for x in prov]


def _prov_from_json(data):
    return tuple(_prov_from_json(x) if isinstance(x, list) else x
                 for x in data)


def hopf_from_dict(data: dict) -> HopfPresentation:
    if data.get("schema") != "hopf-v1":
        raise ValueError("expected schema hopf-v1, got %r" % (data.get("schema"),))
    basis = [BasisElement(b["label"], b["degree"], b["weight"])
             for b in data["basis"]]
    mu = {(e["i"], e["j"]): {o["k"]: o["coeff"] for o in e["out"]}
          for e in data["mu"]}
    delta = {e["i"]: {(o["j"], o["k"]): o["coeff"] for o in e["out"]}
             for e in data["delta"]}
    modulus = data["grading"].get("modulus") \
        if data["grading"]["kind"] == "cyclic" else None
    prov = data.get("provenance")
    return HopfPresentation(
        data["p"], basis, mu, delta, data["degree_bound"], modulus=modulus,
        weight_bound=data.get("weight_bound"),
        weight_modulus=data.get("weight_modulus"),
        provenance=_prov_from_json(prov) if prov is not None else None)


def module_to_dict(m: DieudonneModule) -> dict:
    return {
        "schema": "dieu-v1",
        "p": m.p,
        "degree_bound": m.degree_bound,
        "dims": list(m.dims),
        "F": [f.tolist() for f in m.F],
        "V": [v.tolist() for v in m.V],
    }


def module_from_dict(data: dict) -> DieudonneModule:
    if data.get("schema") != "dieu-v1":
        raise ValueError("expected schema dieu-v1, got %r" % (data.get("schema"),))
    dims = tuple(data["dims"])
    F = tuple(np.array(f, dtype=np.int64).reshape(dims[i + 1], dims[i])
              for i, f in enumerate(data["F"]))
    V = tuple(np.array(v, dtype=np.int64).reshape(dims[i], dims[i + 1])
              for i, v in enumerate(data["V"]))
    return DieudonneModule(data["p"], dims, F, V)


def dumps(obj) -> str:
    """Canonical text form: sorted keys, two-space indent, trailing newline."""
    if isinstance(obj, HopfPresentation):
        obj = hopf_to_dict(obj)
    elif isinstance(obj, DieudonneModule):
        obj = module_to_dict(obj)
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def loads(text: str):
    data = json.loads(text)
    schema = data.get("schema")
    if schema == "hopf-v1":
        return hopf_from_dict(data)
    if schema == "dieu-v1":
        return module_from_dict(data)
    raise ValueError("unknown schema %r" % (schema,))
