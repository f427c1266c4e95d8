"""Sublevel persistence of merge trees and bottleneck distance.

The diagram of a merge tree pairs each non-oldest branch with the merge
that absorbs it: at every merge vertex the component carrying the lowest
minimum survives (ties to the smaller leaf id) and the others die there.
The global minimum never dies and yields the single infinite point.

Bottleneck distance is computed exactly: the optimum is one of finitely
many candidate costs (pairwise gaps and half-persistences), found by
binary search with a bipartite matching feasibility test at each probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import MergespaceError
from .trees import LabeledMergeTree, MergeTree

INF = math.inf

__all__ = [
    "PersistenceDiagram",
    "persistence_diagram",
    "bottleneck_distance",
    "bottleneck_tree_distance",
]


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of (birth, death) points; death may be +inf."""

    points: tuple

    def __init__(self, points):
        norm = []
        for b, d in points:
            b, d = float(b), float(d)
            if not math.isfinite(b):
                raise MergespaceError(f"non-finite birth {b}")
            if d <= b:
                raise MergespaceError(f"point ({b}, {d}) has no persistence")
            norm.append((b, d))
        object.__setattr__(self, "points", tuple(sorted(norm)))

    @property
    def finite(self) -> tuple:
        return tuple(p for p in self.points if math.isfinite(p[1]))

    @property
    def infinite(self) -> tuple:
        return tuple(p for p in self.points if not math.isfinite(p[1]))

    def __len__(self) -> int:
        return len(self.points)


def _bare(t: Union[MergeTree, LabeledMergeTree]) -> MergeTree:
    return t.tree if isinstance(t, LabeledMergeTree) else t


def persistence_diagram(t: Union[MergeTree, LabeledMergeTree]) -> PersistenceDiagram:
    """Elder-rule pairing of branches; exactly one infinite point."""
    t = _bare(t).ensure_valid()
    points = []
    # carried minimum per subtree: (height, leaf id); lexicographic order
    # implements the elder rule with ties to the smaller vertex id
    carried = {}
    for v in t.postorder:
        kids = t.children[v]
        if not kids:
            carried[v] = (t.height[v], v)
            continue
        reps = sorted(carried.pop(c) for c in kids)
        for birth, _ in reps[1:]:
            points.append((birth, t.height[v]))
        carried[v] = reps[0]
    birth, _ = carried[t.top]
    points.append((birth, INF))
    return PersistenceDiagram(points)


def _diag_cost(p) -> float:
    return (p[1] - p[0]) / 2.0


def _pair_cost(p, q) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _finite_feasible(left, right, c: float) -> bool:
    """Perfect matching test on diagram points plus diagonal stand-ins.

    Row side: left points then one stand-in per right point; column side:
    right points then one stand-in per left point.  Stand-ins pair with
    their own point when its half-persistence is within c, and with each
    other freely, so a perfect matching exists exactly when every point is
    matched or retired within cost c.
    """
    nl, nr = len(left), len(right)
    rows = nl + nr
    cols = nr + nl
    adj = [[] for _ in range(rows)]
    for i, p in enumerate(left):
        for j, q in enumerate(right):
            if _pair_cost(p, q) <= c:
                adj[i].append(j)
        if _diag_cost(p) <= c:
            adj[i].append(nr + i)
    for i, q in enumerate(right):
        if _diag_cost(q) <= c:
            adj[nl + i].append(i)
        for j in range(nl):
            adj[nl + i].append(nr + j)

    match_col = [-1] * cols

    def augment(r, seen):
        for j in adj[r]:
            if j in seen:
                continue
            seen.add(j)
            if match_col[j] < 0 or augment(match_col[j], seen):
                match_col[j] = r
                return True
        return False

    size = 0
    for r in range(rows):
        if augment(r, set()):
            size += 1
    return size == rows


def bottleneck_distance(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """Exact bottleneck distance; +inf when infinite points cannot pair up."""
    inf1 = sorted(b for b, _ in d1.infinite)
    inf2 = sorted(b for b, _ in d2.infinite)
    if len(inf1) != len(inf2):
        return INF
    inf_cost = max((abs(a - b) for a, b in zip(inf1, inf2)), default=0.0)

    left, right = d1.finite, d2.finite
    cands = {0.0, inf_cost}
    for p in left:
        cands.add(_diag_cost(p))
        for q in right:
            cands.add(_pair_cost(p, q))
    for q in right:
        cands.add(_diag_cost(q))
    cands = sorted(c for c in cands if c >= inf_cost)

    lo, hi = 0, len(cands) - 1
    # the largest candidate retires everything, so feasibility holds at hi
    while lo < hi:
        mid = (lo + hi) // 2
        if _finite_feasible(left, right, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def bottleneck_tree_distance(
    t1: Union[MergeTree, LabeledMergeTree], t2: Union[MergeTree, LabeledMergeTree]
) -> float:
    """Bottleneck distance between the trees' persistence diagrams."""
    return bottleneck_distance(persistence_diagram(t1), persistence_diagram(t2))
