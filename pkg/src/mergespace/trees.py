"""Merge trees with an implicit root at +infinity.

A merge tree is stored as its finite part only: vertices carrying real
heights, and child->parent edges where the parent is strictly higher.  The
single vertex without a parent (the top vertex) is joined to an implicit
root at +infinity by a ray, so the geometric realization of a tree always
extends upward without bound.  Leaves are the vertices without children.

Labeled trees attach label indices 1..n to vertices.  Several labels may sit
on one vertex, labels may sit on internal vertices, and every leaf must
carry at least one label.

Points of the realization are addressed by :class:`PointOnTree`: the anchor
is the highest vertex at or below the point on its branch, so a point is a
vertex exactly when its height equals the anchor's height, an interior edge
point when it lies strictly between the anchor and the anchor's parent, and
a ray point when the anchor is the top vertex and the height exceeds it.
That addressing is canonical, which makes point equality plain field
equality.

Vertex ids are opaque nonnegative integers and survive canonicalization, so
references held by callers stay meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from .errors import InvalidTreeError, MergespaceError


@dataclass(frozen=True)
class PointOnTree:
    """A location on the geometric realization of a merge tree."""

    anchor: int
    height: float

    def __iter__(self):
        return iter((self.anchor, self.height))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of structural validation; violations name vertices/edges."""

    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _normalize_vertices(vertices) -> tuple:
    if isinstance(vertices, Mapping):
        items = vertices.items()
    else:
        items = vertices
    return tuple(sorted((int(v), float(h)) for v, h in items))


def _normalize_edges(edges) -> tuple:
    return tuple(sorted((int(c), int(p)) for c, p in edges))


@dataclass(frozen=True)
class MergeTree:
    """Finite part of a merge tree: (id, height) vertices and child->parent edges.

    Construction never validates; :func:`validate_tree` reports violations as
    data and operations raise :class:`InvalidTreeError` lazily on first use.
    That split lets tools load a broken tree and describe what is wrong with
    it instead of refusing to look.
    """

    vertices: tuple
    edges: tuple

    def __init__(self, vertices: Union[Mapping, Iterable], edges: Iterable):
        object.__setattr__(self, "vertices", _normalize_vertices(vertices))
        object.__setattr__(self, "edges", _normalize_edges(edges))

    # -- validation ------------------------------------------------------

    @cached_property
    def validation(self) -> ValidationReport:
        return _validate(self)

    def ensure_valid(self) -> "MergeTree":
        if not self.validation.ok:
            raise InvalidTreeError(self.validation.violations)
        return self

    # -- derived structure (requires validity) ---------------------------

    @cached_property
    def height(self) -> dict:
        """Vertex id -> height."""
        self.ensure_valid()
        return dict(self.vertices)

    @cached_property
    def parent(self) -> dict:
        """Vertex id -> parent id, or None for the top vertex."""
        self.ensure_valid()
        par = {v: None for v, _ in self.vertices}
        for c, p in self.edges:
            par[c] = p
        return par

    @cached_property
    def children(self) -> dict:
        """Vertex id -> tuple of child ids, sorted."""
        self.ensure_valid()
        ch = {v: [] for v, _ in self.vertices}
        for c, p in self.edges:
            ch[p].append(c)
        return {v: tuple(sorted(c)) for v, c in ch.items()}

    @cached_property
    def top(self) -> int:
        """The unique vertex without a finite parent."""
        for v, p in self.parent.items():
            if p is None:
                return v
        raise MergespaceError("tree has no top vertex")

    @cached_property
    def leaves(self) -> tuple:
        return tuple(v for v in sorted(self.height) if not self.children[v])

    @cached_property
    def postorder(self) -> tuple:
        """Vertices with every child before its parent (deterministic)."""
        order = []
        stack = [(self.top, False)]
        while stack:
            v, done = stack.pop()
            if done:
                order.append(v)
            else:
                stack.append((v, True))
                for c in reversed(self.children[v]):
                    stack.append((c, False))
        return tuple(order)

    @cached_property
    def subtree_min(self) -> dict:
        """Vertex id -> lowest height in its subtree (itself included)."""
        low = {}
        for v in self.postorder:
            low[v] = min([self.height[v]] + [low[c] for c in self.children[v]])
        return low

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class LabeledMergeTree:
    """A merge tree plus a label map {1..n} -> vertices, onto the leaves."""

    tree: MergeTree
    labels: tuple

    def __init__(self, tree: MergeTree, labels: Union[Mapping, Iterable]):
        if isinstance(labels, Mapping):
            items = labels.items()
        else:
            items = labels
        object.__setattr__(self, "tree", tree)
        object.__setattr__(
            self, "labels", tuple(sorted((int(i), int(v)) for i, v in items))
        )

    @cached_property
    def label_to_vertex(self) -> dict:
        return dict(self.labels)

    @property
    def n_labels(self) -> int:
        return len(self.labels)

    @cached_property
    def labels_of(self) -> dict:
        """Vertex id -> tuple of label indices on it (possibly empty)."""
        out = {v: [] for v, _ in self.tree.vertices}
        for i, v in self.labels:
            if v in out:
                out[v].append(i)
        return {v: tuple(sorted(l)) for v, l in out.items()}

    @cached_property
    def validation(self) -> ValidationReport:
        problems = list(self.tree.validation.violations)
        seen = {}
        for i, v in self.labels:
            if i in seen:
                problems.append(f"label {i} assigned twice")
            seen[i] = v
            if not self.tree.validation.ok:
                continue
            if v not in self.tree.height:
                problems.append(f"label {i} names unknown vertex {v}")
        n = len(seen)
        expected = set(range(1, n + 1))
        if set(seen) != expected:
            problems.append(
                f"label indices must cover 1..{n} exactly, got {sorted(seen)}"
            )
        if self.tree.validation.ok:
            labeled = set(self.label_to_vertex.values())
            for leaf in self.tree.leaves:
                if leaf not in labeled:
                    problems.append(f"leaf {leaf} carries no label")
        return ValidationReport(tuple(problems))

    def ensure_valid(self) -> "LabeledMergeTree":
        if not self.validation.ok:
            raise InvalidTreeError(self.validation.violations)
        return self


def _validate(t: MergeTree) -> ValidationReport:
    problems = []
    if not t.vertices:
        return ValidationReport(("tree has no vertices",))

    heights = {}
    for v, h in t.vertices:
        if v in heights:
            problems.append(f"duplicate vertex id {v}")
        if not math.isfinite(h):
            problems.append(f"vertex {v} has non-finite height {h}")
        heights[v] = h
    if problems:
        return ValidationReport(tuple(problems))

    parents = {}
    seen_edges = set()
    for c, p in t.edges:
        if (c, p) in seen_edges:
            problems.append(f"duplicate edge ({c}, {p})")
            continue
        seen_edges.add((c, p))
        if c not in heights or p not in heights:
            problems.append(f"edge ({c}, {p}) references an unknown vertex")
            continue
        if c == p:
            problems.append(f"edge ({c}, {p}) is a self loop")
            continue
        if heights[c] == heights[p]:
            problems.append(f"edge ({c}, {p}) has equal function value on both ends")
        elif heights[c] > heights[p]:
            problems.append(f"edge ({c}, {p}) runs downward: child above parent")
        if c in parents:
            problems.append(f"vertex {c} has multiple ancestors ({parents[c]} and {p})")
        else:
            parents[c] = p
    if problems:
        return ValidationReport(tuple(problems))

    tops = [v for v in heights if v not in parents]
    if not tops:
        problems.append("no top vertex: the parent relation contains a cycle")
    elif len(tops) > 1:
        problems.append(
            "disconnected: multiple top vertices " + str(tuple(sorted(tops)))
        )

    # walk the parent chain from every vertex; a cycle revisits a vertex
    state = {}
    for v in heights:
        path = []
        u = v
        while u is not None and state.get(u) is None:
            state[u] = "open"
            path.append(u)
            u = parents.get(u)
        if u is not None and state[u] == "open":
            problems.append(f"cycle in ancestry through vertex {u}")
        for w in path:
            state[w] = "closed"
        if problems:
            break

    return ValidationReport(tuple(problems))


def validate_tree(t: Union[MergeTree, LabeledMergeTree]) -> ValidationReport:
    """Structural validation as data; never raises on a broken tree."""
    return t.validation


# -- points ---------------------------------------------------------------


def vertex_point(t: MergeTree, v: int) -> PointOnTree:
    return PointOnTree(v, t.height[v])


def point_at(t: MergeTree, anchor: int, height: float) -> PointOnTree:
    """Canonical point from a below-vertex anchor and a height.

    Walks upward so the stored anchor is the highest vertex at or below the
    point.  The height must be at or above the given anchor vertex.
    """
    h = float(height)
    if anchor not in t.height or h < t.height[anchor]:
        raise MergespaceError(
            f"no point at height {h} at or above vertex {anchor}"
        )
    v = anchor
    while True:
        p = t.parent[v]
        if p is None or t.height[p] > h:
            return PointOnTree(v, h)
        v = p


def as_point(t: MergeTree, p: Union[PointOnTree, int, tuple]) -> PointOnTree:
    """Coerce a vertex id, (anchor, height) pair, or point to canonical form."""
    if isinstance(p, tuple) and not isinstance(p, PointOnTree):
        anchor, height = p
        return point_at(t, int(anchor), float(height))
    if isinstance(p, PointOnTree):
        v = p.anchor
        if v not in t.height:
            raise MergespaceError(f"point anchored at unknown vertex {v}")
        par = t.parent[v]
        if p.height < t.height[v]:
            raise MergespaceError(f"point below its anchor vertex {v}")
        if p.height == t.height[v]:
            return p
        if par is None:
            return p
        if p.height >= t.height[par]:
            # non-canonical anchor; renormalize
            return point_at(t, v, p.height)
        return p
    return vertex_point(t, int(p))


def is_vertex_point(t: MergeTree, p: PointOnTree) -> bool:
    return p.height == t.height[p.anchor]


def on_root_ray(t: MergeTree, p: PointOnTree) -> bool:
    """True for points strictly above the top vertex."""
    return p.anchor == t.top and p.height > t.height[t.top]


def ancestor_at(t: MergeTree, p: Union[PointOnTree, int], height: float) -> PointOnTree:
    """The unique point at the given height on the upward path from p."""
    p = as_point(t, p)
    if height < p.height:
        raise MergespaceError(
            f"ancestor height {height} is below the point at {p.height}"
        )
    return point_at(t, p.anchor, height)


def is_ancestor_point(t: MergeTree, below: PointOnTree, above: PointOnTree) -> bool:
    """True when `above` lies on the upward path from `below` (or equals it)."""
    if above.height < below.height:
        return False
    return ancestor_at(t, below, above.height) == above


def _vertex_chain_above(t: MergeTree, p: PointOnTree):
    """Vertices strictly on the upward path from p, lowest first.

    Includes the anchor itself when p is that vertex.
    """
    v = p.anchor
    if not is_vertex_point(t, p):
        v = t.parent[v]
    while v is not None:
        yield v
        v = t.parent[v]


def lca(
    t: MergeTree, a: Union[PointOnTree, int], b: Union[PointOnTree, int]
) -> PointOnTree:
    """Lowest common ancestor of two points; always a finite point.

    When one point sits on the upward path of the other, the higher point is
    returned; otherwise the paths first meet at a merge vertex.
    """
    a = as_point(t, a)
    b = as_point(t, b)
    lo, hi = (a, b) if a.height <= b.height else (b, a)
    if ancestor_at(t, lo, hi.height) == hi:
        return hi
    seen = set(_vertex_chain_above(t, lo))
    for v in _vertex_chain_above(t, hi):
        if v in seen:
            return vertex_point(t, v)
    raise MergespaceError("points share no ancestor; tree is disconnected")


def depth(t: MergeTree, v: Union[PointOnTree, int]) -> float:
    """Largest height drop from a point down into its subtree."""
    p = as_point(t, v)
    # everything below an edge point is the subtree of its anchor; for a ray
    # point the anchor is the top vertex, whose subtree is the whole tree
    return p.height - t.subtree_min[p.anchor]


def path_metric(
    t: MergeTree, a: Union[PointOnTree, int], b: Union[PointOnTree, int]
) -> float:
    """Total height variation along the unique path between two finite points."""
    a = as_point(t, a)
    b = as_point(t, b)
    if on_root_ray(t, a) or on_root_ray(t, b):
        raise MergespaceError("path metric is not defined on the infinite ray")
    m = lca(t, a, b)
    return 2.0 * m.height - a.height - b.height


# -- canonical form and equality ------------------------------------------


def _contract(t: MergeTree, keep) -> MergeTree:
    """Drop removable vertices, reconnecting children to the nearest kept ancestor."""
    kept = set(keep)

    def kept_ancestor(v):
        u = t.parent[v]
        while u is not None and u not in kept:
            u = t.parent[u]
        return u

    vertices = [(v, t.height[v]) for v in kept]
    edges = []
    for v in kept:
        u = kept_ancestor(v)
        if u is not None:
            edges.append((v, u))
    return MergeTree(vertices, edges)


def canonicalize_tree(t: MergeTree) -> MergeTree:
    """Remove every vertex with exactly one child (no labels to protect)."""
    t.ensure_valid()
    keep = [v for v, _ in t.vertices if len(t.children[v]) != 1]
    return _contract(t, keep)


def canonicalize(lt: LabeledMergeTree) -> LabeledMergeTree:
    """Smallest tree of the subdivision class, labels kept in place.

    Removes every unlabeled vertex with exactly one child.  The top vertex
    counts as removable too: the ray above it plays the role of its parent
    edge, so an unlabeled single-child top is a subdivision point like any
    other.  Idempotent, and vertex ids of kept vertices are unchanged.
    """
    lt.ensure_valid()
    t = lt.tree
    keep = [
        v
        for v, _ in t.vertices
        if len(t.children[v]) != 1 or lt.labels_of[v]
    ]
    return LabeledMergeTree(_contract(t, keep), lt.labels)


def tree_signature(t: MergeTree, labels_of: Mapping = None):
    """Canonical nested-tuple invariant of the (optionally labeled) tree.

    Two trees get equal signatures exactly when an isomorphism matches
    heights, edges, and label placement, ignoring vertex ids.
    """
    t.ensure_valid()
    sig = {}
    for v in t.postorder:
        kids = tuple(sorted(sig[c] for c in t.children[v]))
        lab = tuple(sorted(labels_of[v])) if labels_of else ()
        sig[v] = (t.height[v], lab, kids)
    return sig[t.top]


def trees_equal(a: MergeTree, b: MergeTree) -> bool:
    """Structural equality after canonicalization, exact heights, ids ignored."""
    return tree_signature(canonicalize_tree(a)) == tree_signature(canonicalize_tree(b))


def labeled_trees_equal(a: LabeledMergeTree, b: LabeledMergeTree) -> bool:
    ca, cb = canonicalize(a), canonicalize(b)
    return tree_signature(ca.tree, ca.labels_of) == tree_signature(cb.tree, cb.labels_of)


# -- refinement -----------------------------------------------------------


def refine_at(t: MergeTree, points: Sequence[PointOnTree]):
    """Insert vertices so every given point is a vertex.

    Returns (refined tree, mapping from each requested point to its vertex
    id).  Points already at vertices map to the existing id; new ids are
    allocated past the current maximum, deterministically by position.
    """
    t.ensure_valid()
    points = [as_point(t, p) for p in points]
    next_id = max(t.height) + 1
    where = {}
    inserts = {}  # anchor vertex -> sorted list of new heights on its parent edge/ray
    for p in points:
        if is_vertex_point(t, p):
            where[p] = p.anchor
        else:
            inserts.setdefault(p.anchor, set()).add(p.height)

    vertices = list(t.vertices)
    edges = []
    new_at = {}
    for anchor in sorted(inserts):
        for h in sorted(inserts[anchor]):
            vertices.append((next_id, h))
            new_at[(anchor, h)] = next_id
            next_id += 1

    for v, _ in t.vertices:
        chain = [v] + [
            new_at[(v, h)] for h in sorted(inserts.get(v, ()))
        ]
        par = t.parent[v]
        for lower, upper in zip(chain, chain[1:]):
            edges.append((lower, upper))
        if par is not None:
            edges.append((chain[-1], par))

    out = MergeTree(vertices, edges)
    for p in points:
        if p not in where:
            where[p] = new_at[(p.anchor, p.height)]
    return out, where
