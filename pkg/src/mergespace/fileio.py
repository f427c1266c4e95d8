"""Text formats: tree JSON, matrix text, diagram text, pairing and map JSON.

All writers are deterministic (sorted ids, fixed key order, shortest
round-trip numbers) so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import Union

from .errors import FormatError
from .goodmaps import LabelPairing, VertexMap
from .matrices import SymMatrix, as_sym_matrix
from .persistence import PersistenceDiagram
from .trees import (
    LabeledMergeTree,
    MergeTree,
    PointOnTree,
    as_point,
    is_vertex_point,
)

MATRIX_SYM_TOL = 1e-12

__all__ = [
    "fmt_num",
    "parse_tree",
    "parse_tree_raw",
    "write_tree",
    "parse_matrix",
    "write_matrix",
    "parse_diagram",
    "write_diagram",
    "write_pairing",
    "parse_pairing",
    "write_map",
    "parse_map",
]


def fmt_num(x: float) -> str:
    """Shortest decimal that parses back to the same float."""
    x = float(x)
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _jsonable_num(x: float):
    x = float(x)
    if x == int(x) and abs(x) < 1e16:
        return int(x)
    return x


# -- tree JSON ------------------------------------------------------------


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc.msg}", line=exc.lineno) from None


def parse_tree_raw(text: str):
    """Decode tree JSON without validating; returns (MergeTree, labels dict)."""
    obj = _load_json(text)
    if not isinstance(obj, dict):
        raise FormatError("top level must be an object")
    for key in ("vertices", "edges"):
        if key not in obj or not isinstance(obj[key], list):
            raise FormatError(f"missing or non-list '{key}'")
    vertices = []
    labels = {}
    for k, entry in enumerate(obj["vertices"], start=1):
        if not isinstance(entry, dict):
            raise FormatError(f"vertex #{k} is not an object")
        vid = entry.get("id")
        try:
            height = float(entry["height"])
        except (KeyError, TypeError, ValueError):
            vid = None
        if not isinstance(vid, int):
            raise FormatError(f"vertex #{k} needs integer 'id' and numeric 'height'")
        vertices.append((vid, height))
        for lab in entry.get("labels", []):
            if not isinstance(lab, int):
                raise FormatError(f"vertex #{k}: label {lab!r} is not an integer")
            if lab in labels:
                raise FormatError(f"label {lab} appears on two vertices")
            labels[lab] = vid
    edges = []
    for k, entry in enumerate(obj["edges"], start=1):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(x, int) for x in entry)
        ):
            raise FormatError(f"edge #{k} must be a [childId, parentId] pair")
        edges.append((entry[0], entry[1]))
    return MergeTree(vertices, edges), labels


def parse_tree(text: str) -> Union[MergeTree, LabeledMergeTree]:
    """Validated tree from JSON; labeled when any labels are present."""
    tree, labels = parse_tree_raw(text)
    if labels:
        return LabeledMergeTree(tree, labels).ensure_valid()
    return tree.ensure_valid()


def write_tree(t: Union[MergeTree, LabeledMergeTree]) -> str:
    if isinstance(t, LabeledMergeTree):
        tree, labels_of = t.tree, t.labels_of
    else:
        tree, labels_of = t, {}
    vertices = [
        {
            "id": v,
            "height": _jsonable_num(h),
            "labels": list(labels_of.get(v, ())),
        }
        for v, h in tree.vertices
    ]
    payload = {"vertices": vertices, "edges": [list(e) for e in tree.edges]}
    return json.dumps(payload, indent=2) + "\n"


# -- matrix text ----------------------------------------------------------


def parse_matrix(text: str) -> SymMatrix:
    """First line is n, then n rows of n numbers; near-symmetry is averaged."""
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty matrix file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise FormatError(f"expected the size, got {lines[0]!r}", line=1)
    if n < 1:
        raise FormatError(f"size must be positive, got {n}", line=1)
    if len(lines) < n + 1:
        raise FormatError(f"expected {n} rows, file has {len(lines) - 1}")
    rows = []
    for k in range(1, n + 1):
        parts = lines[k].split()
        if len(parts) != n:
            raise FormatError(
                f"expected {n} entries, got {len(parts)}", line=k + 1
            )
        try:
            row = [float(p) for p in parts]
        except ValueError as exc:
            raise FormatError(str(exc), line=k + 1)
        if not all(math.isfinite(x) for x in row):
            raise FormatError("entries must be finite", line=k + 1)
        rows.append(row)
    return SymMatrix(rows, sym_tol=MATRIX_SYM_TOL)


def write_matrix(m) -> str:
    m = as_sym_matrix(m)
    lines = [str(m.n)]
    for row in m.array:
        lines.append(" ".join(fmt_num(x) for x in row))
    return "\n".join(lines) + "\n"


# -- diagram text ---------------------------------------------------------


def parse_diagram(text: str) -> PersistenceDiagram:
    points = []
    for k, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError("expected 'birth death'", line=k)
        try:
            birth = float(parts[0])
            death = math.inf if parts[1] == "inf" else float(parts[1])
        except ValueError as exc:
            raise FormatError(str(exc), line=k)
        points.append((birth, death))
    return PersistenceDiagram(points)


def write_diagram(d: PersistenceDiagram) -> str:
    lines = []
    for birth, death in d.points:
        tail = "inf" if math.isinf(death) else fmt_num(death)
        lines.append(f"{fmt_num(birth)} {tail}")
    return "\n".join(lines) + ("\n" if lines else "")


# -- points ---------------------------------------------------------------


def _point_to_json(t: MergeTree, p: PointOnTree, tree_tag=None) -> dict:
    out = {}
    if tree_tag is not None:
        out["tree"] = tree_tag
    if is_vertex_point(t, p):
        out["vertex"] = p.anchor
    else:
        out["edge"] = [p.anchor, t.parent[p.anchor]]
    out["height"] = _jsonable_num(p.height)
    return out


def _point_from_json(t: MergeTree, obj, what: str) -> PointOnTree:
    if not isinstance(obj, dict) or "height" not in obj:
        raise FormatError(f"{what}: point needs a 'height'")
    try:
        height = float(obj["height"])
    except (TypeError, ValueError):
        raise FormatError(f"{what}: non-numeric height")
    if "vertex" in obj:
        anchor = obj["vertex"]
    elif "edge" in obj:
        edge = obj["edge"]
        if not isinstance(edge, list) or len(edge) != 2:
            raise FormatError(f"{what}: 'edge' must be [childId, parentId]")
        anchor = edge[0]
    else:
        raise FormatError(f"{what}: point needs 'vertex' or 'edge'")
    if not isinstance(anchor, int):
        raise FormatError(f"{what}: vertex id must be an integer")
    try:
        return as_point(t, PointOnTree(anchor, height))
    except Exception as exc:
        raise FormatError(f"{what}: {exc}")


# -- pairing JSON ---------------------------------------------------------


def write_pairing(p: LabelPairing) -> str:
    pairs = [
        [
            _point_to_json(p.source, a, tree_tag=1),
            _point_to_json(p.target, b, tree_tag=2),
        ]
        for a, b in p.pairs
    ]
    return json.dumps({"pairs": pairs}, indent=2) + "\n"


def parse_pairing(text: str, source: MergeTree, target: MergeTree) -> LabelPairing:
    obj = _load_json(text)
    if not isinstance(obj, dict) or not isinstance(obj.get("pairs"), list):
        raise FormatError("expected an object with a 'pairs' list")
    pairs = []
    for k, entry in enumerate(obj["pairs"], start=1):
        if not isinstance(entry, list) or len(entry) != 2:
            raise FormatError(f"pair #{k} must be a two-point list")
        a = _point_from_json(source, entry[0], f"pair #{k} first point")
        b = _point_from_json(target, entry[1], f"pair #{k} second point")
        pairs.append((a, b))
    return LabelPairing(source, target, tuple(pairs))


# -- map JSON -------------------------------------------------------------


def write_map(vm: VertexMap) -> str:
    payload = {
        "source": json.loads(write_tree(vm.source)),
        "target": json.loads(write_tree(vm.target)),
        "delta": _jsonable_num(vm.delta),
        "images": [
            [v, _point_to_json(vm.target, p)] for v, p in vm.images
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_map(text: str) -> VertexMap:
    obj = _load_json(text)
    if not isinstance(obj, dict):
        raise FormatError("top level must be an object")
    for key in ("source", "target", "delta", "images"):
        if key not in obj:
            raise FormatError(f"missing '{key}'")
    source, _ = parse_tree_raw(json.dumps(obj["source"]))
    target, _ = parse_tree_raw(json.dumps(obj["target"]))
    source.ensure_valid()
    target.ensure_valid()
    try:
        delta = float(obj["delta"])
    except (TypeError, ValueError):
        raise FormatError("non-numeric delta")
    if not isinstance(obj["images"], list):
        raise FormatError("'images' must be a list")
    images = {}
    for k, entry in enumerate(obj["images"], start=1):
        if not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[0], int):
            raise FormatError(f"image #{k} must be [vertexId, point]")
        images[entry[0]] = _point_from_json(target, entry[1], f"image #{k}")
    return VertexMap(source, target, delta, images)
