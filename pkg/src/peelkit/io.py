"""JSON encodings of polytopes, decompositions, certificates and traces.

Every encoder is deterministic and every decoder reproduces the value its
encoder saw, so ``dumps(encode(decode(text))) == text`` for our own output.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile

import numpy as np

from .geometry import AffineHull, Hyperplane, Polytope, from_halfspaces, from_vertices
from .peeling import PeelDecomposition, PeelParams, PeelPiece, StageRecord


class InputError(ValueError):
    """Malformed input; the message names the offending field."""


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False) + "\n"


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=folder)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from exc


def _matrix(data, field, cols=None):
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"field '{field}' must be a list of number lists") from exc
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, cols or 0)
    if arr.ndim != 2 or (cols is not None and arr.shape[1] != cols):
        raise InputError(f"field '{field}' has the wrong shape")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"field '{field}' holds a non-finite number")
    return arr


def _vector(data, field, size=None):
    try:
        arr = np.asarray(data, dtype=float).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise InputError(f"field '{field}' must be a list of numbers") from exc
    if size is not None and arr.size != size:
        raise InputError(f"field '{field}' must have {size} entries")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"field '{field}' holds a non-finite number")
    return arr


# -- polytopes ----------------------------------------------------------------


def polytope_to_json(P: Polytope) -> dict:
    A, b = P.ambient_halfspaces()
    return {
        "dim": P.ambient_dim,
        "vertices": P.ambient_vertices.tolist(),
        "halfspaces": [{"normal": a.tolist(), "offset": float(c)} for a, c in zip(A, b)],
        "tol": P.tol,
        "hull": {
            "base": P.hull.base.tolist(),
            "basis": P.hull.basis.tolist(),
            "vertices": P.vertices.tolist(),
            "A": P.A.tolist(),
            "b": P.b.tolist(),
        },
    }


def _infer_dim(data):
    try:
        if data.get("vertices"):
            return len(data["vertices"][0])
        if data.get("halfspaces"):
            return len(data["halfspaces"][0]["normal"])
    except (TypeError, KeyError, IndexError):
        pass
    raise InputError("missing field 'dim'")


def polytope_from_json(data) -> Polytope:
    """Decode a polytope.  One of ``vertices`` or ``halfspaces`` is required;
    ``dim`` is inferred when absent and a ``hull`` block is trusted verbatim."""
    if not isinstance(data, dict):
        raise InputError("polytope must be a JSON object")
    d = data.get("dim", _infer_dim(data))
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise InputError("field 'dim' must be a positive integer")
    tol = data.get("tol", 1e-9)
    if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol > 0:
        raise InputError("field 'tol' must be a positive number")
    tol = float(tol)
    if "hull" in data:
        h = data["hull"]
        if not isinstance(h, dict):
            raise InputError("field 'hull' must be an object")
        for key in ("base", "basis", "vertices", "A", "b"):
            if key not in h:
                raise InputError(f"missing field 'hull.{key}'")
        base = _vector(h["base"], "hull.base", d)
        basis = _matrix(h["basis"], "hull.basis", d) if len(h["basis"]) else np.zeros((0, d))
        k = basis.shape[0]
        V = _matrix(h["vertices"], "hull.vertices") if k else np.zeros((len(h["vertices"]), 0))
        if V.shape[1] != k or len(V) == 0:
            raise InputError("field 'hull.vertices' has the wrong shape")
        A = _matrix(h["A"], "hull.A", k) if len(h["A"]) else np.zeros((0, k))
        b = _vector(h["b"], "hull.b", len(A))
        return Polytope(AffineHull(base, basis), V, A, b, tol)
    if data.get("vertices"):
        V = _matrix(data["vertices"], "vertices", d)
        return from_vertices(V, tol)
    if data.get("halfspaces"):
        rows = []
        for i, h in enumerate(data["halfspaces"]):
            if not isinstance(h, dict) or "normal" not in h or "offset" not in h:
                raise InputError(f"field 'halfspaces[{i}]' needs 'normal' and 'offset'")
            n = _vector(h["normal"], f"halfspaces[{i}].normal", d)
            c = _vector([h["offset"]], f"halfspaces[{i}].offset", 1)[0]
            rows.append((n, c))
        return from_halfspaces(rows, None, tol)
    raise InputError("missing field 'vertices' (or 'halfspaces')")


# -- decompositions -------------------------------------------------------------


def _plane_json(h):
    return None if h is None else {"normal": h.normal.tolist(), "offset": h.offset}


def _stage_json(st: StageRecord) -> dict:
    return {"stage": st.stage, "r_bound": st.r_bound, "r_inner": st.r_inner,
            "r_outer": st.r_outer, "cap_height": st.cap_height, "planes": st.planes,
            "cuts": st.cuts, "remainder_radius": st.remainder_radius}


def decomposition_to_json(dec: PeelDecomposition) -> dict:
    return {
        "params": dec.params.to_json(),
        "source": polytope_to_json(dec.source),
        "center": dec.center.tolist(),
        "radius": dec.radius,
        "gamma": dec.gamma,
        "net_level": dec.net_level,
        "stages": [_stage_json(s) for s in dec.stages],
        "pieces": [{"stage": pc.stage, "order": pc.order_index, "cut_plane": _plane_json(pc.cut_plane),
                    "polytope": polytope_to_json(pc.body)} for pc in dec.pieces],
        "remainders": [polytope_to_json(R) for R in dec.remainders],
    }


def decomposition_from_json(data) -> PeelDecomposition:
    if not isinstance(data, dict):
        raise InputError("decomposition must be a JSON object")
    for key in ("params", "source", "center", "radius", "gamma", "pieces", "remainders"):
        if key not in data:
            raise InputError(f"missing field '{key}'")
    try:
        params = PeelParams.from_json(data["params"])
    except (TypeError, ValueError) as exc:
        raise InputError(f"field 'params': {exc}") from exc
    source = polytope_from_json(data["source"])
    pieces = []
    for i, pc in enumerate(data["pieces"]):
        for key in ("stage", "order", "cut_plane", "polytope"):
            if key not in pc:
                raise InputError(f"missing field 'pieces[{i}].{key}'")
        h = pc["cut_plane"]
        try:
            plane = None if h is None else Hyperplane.exact(
                _vector(h["normal"], f"pieces[{i}].cut_plane.normal"), float(h["offset"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"field 'pieces[{i}].cut_plane' is malformed") from exc
        pieces.append(PeelPiece(polytope_from_json(pc["polytope"]), int(pc["stage"]), plane,
                                int(pc["order"])))
    remainders = [polytope_from_json(r) for r in data["remainders"]]
    stages = tuple(StageRecord(s["stage"], s["r_bound"], s["r_inner"], s["r_outer"], s["planes"],
                               s["cuts"], s["remainder_radius"]) for s in data.get("stages", []))
    return PeelDecomposition(source, params, _vector(data["center"], "center"), float(data["radius"]),
                             float(data["gamma"]), tuple(pieces), tuple(remainders), stages,
                             int(data.get("net_level", 0)))


def decomposition_digest(dec: PeelDecomposition) -> str:
    return hashlib.sha256(dumps(decomposition_to_json(dec)).encode()).hexdigest()
