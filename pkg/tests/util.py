"""Shared generators and brute-force oracles for the test suite.

The oracles deliberately take different routes than the library code:
minimax values come from enumerating simple paths, bottleneck cost from
enumerating matchings, induced entries from walking ancestor chains.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from mergespace import (
    LabeledMergeTree,
    MergeTree,
    PersistenceDiagram,
    PointOnTree,
    SymMatrix,
    as_sym_matrix,
    ultrafy,
)
from mergespace.trees import as_point, vertex_point

INF = float("inf")


# -- random inputs --------------------------------------------------------


def rand_valid_matrix(rng, n: int, integral: bool = False) -> SymMatrix:
    """Symmetric matrix with every diagonal entry minimal in its row."""
    if integral:
        diag = rng.integers(0, 5, size=n).astype(float)
        bump = rng.integers(0, 5, size=(n, n)).astype(float)
    else:
        diag = rng.uniform(0.0, 4.0, size=n)
        bump = rng.uniform(0.0, 4.0, size=(n, n))
    m = np.empty((n, n))
    for i in range(n):
        m[i, i] = diag[i]
        for j in range(i + 1, n):
            m[i, j] = m[j, i] = max(diag[i], diag[j]) + bump[i, j]
    return as_sym_matrix(m)


def rand_ultra_matrix(rng, n: int, integral: bool = False) -> SymMatrix:
    return ultrafy(rand_valid_matrix(rng, n, integral=integral))


def _rand_tree_parts(rng, max_leaves: int, integral: bool):
    def pick(low, high):
        if integral:
            return float(rng.integers(int(low), int(high) + 1))
        return float(rng.uniform(low, high))

    k = int(rng.integers(1, max_leaves + 1))
    vertices = []
    next_id = 0
    active = []
    for _ in range(k):
        h = pick(0, 3)
        vertices.append((next_id, h))
        active.append((next_id, h))
        next_id += 1
    edges = []
    while len(active) > 1:
        size = 2
        if len(active) > 2 and rng.random() < 0.2:
            size = 3
        group = [active.pop(int(rng.integers(len(active)))) for _ in range(size)]
        top = max(h for _, h in group)
        h = top + pick(1, 3) if integral else top + pick(0.25, 2.0)
        vertices.append((next_id, h))
        for v, _ in group:
            edges.append((v, next_id))
        active.append((next_id, h))
        next_id += 1

    # sprinkle single-child subdivision vertices, sometimes above the top
    for _ in range(int(rng.integers(0, 3))):
        if edges and rng.random() < 0.7:
            c, p = edges[int(rng.integers(len(edges)))]
            hc = dict(vertices)[c]
            hp = dict(vertices)[p]
            if integral and hp - hc < 2:
                continue
            h = pick(hc + 1, hp - 1) if integral else pick(hc + 1e-3, hp - 1e-3)
            if not (hc < h < hp):
                continue
            edges.remove((c, p))
            edges.extend([(c, next_id), (next_id, p)])
        else:
            top_id, top_h = max(vertices, key=lambda vh: vh[1])
            h = top_h + pick(1, 2) if integral else top_h + pick(0.25, 1.5)
            edges.append((top_id, next_id))
        vertices.append((next_id, h))
        next_id += 1
    return vertices, edges


def rand_merge_tree(rng, max_leaves: int = 5, integral: bool = False) -> MergeTree:
    vertices, edges = _rand_tree_parts(rng, max_leaves, integral)
    return MergeTree(vertices, edges).ensure_valid()


def rand_labeled_tree(
    rng, n_labels: int, max_leaves: int = 5, integral: bool = False
) -> LabeledMergeTree:
    """Random tree with labels 1..n_labels covering every leaf.

    Extra labels land on arbitrary vertices, so repeats on a shared vertex
    and labels on internal vertices both occur.
    """
    t = rand_merge_tree(
        rng, max_leaves=min(max_leaves, n_labels), integral=integral
    )
    leaves = list(t.leaves)
    ids = [v for v, _ in t.vertices]
    targets = list(leaves)
    while len(targets) < n_labels:
        targets.append(ids[int(rng.integers(len(ids)))])
    perm = rng.permutation(n_labels)
    labels = {int(i + 1): targets[int(perm[i])] for i in range(n_labels)}
    return LabeledMergeTree(t, labels).ensure_valid()


def rand_labeled_pair(rng, max_leaves: int = 4, integral: bool = False):
    """Two labeled trees over a common label set."""
    a = rand_merge_tree(rng, max_leaves=max_leaves, integral=integral)
    b = rand_merge_tree(rng, max_leaves=max_leaves, integral=integral)
    n = max(len(a.leaves), len(b.leaves)) + int(rng.integers(0, 3))
    return (
        _label_tree(rng, a, n),
        _label_tree(rng, b, n),
    )


def rand_labeled_triple(rng, max_leaves: int = 4, integral: bool = False):
    """Three labeled trees over one common label set."""
    trees = [
        rand_merge_tree(rng, max_leaves=max_leaves, integral=integral)
        for _ in range(3)
    ]
    n = max(len(t.leaves) for t in trees) + int(rng.integers(0, 3))
    return tuple(_label_tree(rng, t, n) for t in trees)


def _label_tree(rng, t: MergeTree, n: int) -> LabeledMergeTree:
    ids = [v for v, _ in t.vertices]
    targets = list(t.leaves)
    while len(targets) < n:
        targets.append(ids[int(rng.integers(len(ids)))])
    perm = rng.permutation(n)
    return LabeledMergeTree(
        t, {int(i + 1): targets[int(perm[i])] for i in range(n)}
    ).ensure_valid()


def rand_point(rng, t: MergeTree) -> PointOnTree:
    """Uniformly messy point: a vertex, an edge interior, or the top ray."""
    ids = [v for v, _ in t.vertices]
    v = ids[int(rng.integers(len(ids)))]
    r = rng.random()
    if r < 0.5:
        return vertex_point(t, v)
    parent = t.parent[v]
    if parent is None or r < 0.6:
        top = t.top
        return as_point(t, (top, t.height[top] + float(rng.uniform(0.1, 2.0))))
    lo, hi = t.height[v], t.height[parent]
    return as_point(t, (v, float(rng.uniform(lo, hi))))


def rand_diagram(rng, max_pts: int = 5) -> PersistenceDiagram:
    pts = []
    for _ in range(int(rng.integers(0, max_pts + 1))):
        b = float(rng.uniform(-2, 2))
        pts.append((b, b + float(rng.uniform(0.05, 3.0))))
    for _ in range(int(rng.integers(1, 3))):
        pts.append((float(rng.uniform(-2, 2)), INF))
    return PersistenceDiagram(pts)


# -- oracles --------------------------------------------------------------


def minimax_value(m: SymMatrix, i: int, j: int) -> float:
    """Minimum over simple i-j paths of the largest step entry."""
    n = m.n
    best = m[i, j]
    others = [k for k in range(n) if k not in (i, j)]
    for r in range(1, len(others) + 1):
        for mid in itertools.permutations(others, r):
            path = [i, *mid, j]
            cost = max(m[a, b] for a, b in zip(path, path[1:]))
            best = min(best, cost)
    return best


def minimax_matrix(m: SymMatrix) -> np.ndarray:
    n = m.n
    out = np.array(m.array)
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = minimax_value(m, i, j)
    return out


def induced_oracle(lt: LabeledMergeTree) -> np.ndarray:
    """Pairwise meet heights by explicit ancestor-chain intersection."""
    t = lt.tree
    n = lt.n_labels
    chains = {}
    for v in t.height:
        chain = []
        u = v
        while u is not None:
            chain.append(u)
            u = t.parent[u]
        chains[v] = chain
    out = np.empty((n, n))
    for i in range(1, n + 1):
        vi = lt.label_to_vertex[i]
        out[i - 1, i - 1] = t.height[vi]
        for j in range(i + 1, n + 1):
            vj = lt.label_to_vertex[j]
            common = set(chains[vi]) & set(chains[vj])
            h = min(t.height[u] for u in common)
            out[i - 1, j - 1] = out[j - 1, i - 1] = h
    return out


def _pair_cost(p, q) -> float:
    if math.isinf(p[1]) != math.isinf(q[1]):
        return INF
    if math.isinf(p[1]):
        return abs(p[0] - q[0])
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _diag_cost(p) -> float:
    if math.isinf(p[1]):
        return INF
    return (p[1] - p[0]) / 2.0


def bottleneck_oracle(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """Best matching cost by enumerating assignments (small inputs only)."""
    inf1 = sorted(b for b, _ in d1.infinite)
    inf2 = sorted(b for b, _ in d2.infinite)
    if len(inf1) != len(inf2):
        return INF
    base = max((abs(a - b) for a, b in zip(inf1, inf2)), default=0.0)

    left = list(d1.finite)
    right = list(d2.finite)
    best = INF

    def go(i: int, used: set, cur: float):
        nonlocal best
        if cur >= best:
            return
        if i == len(left):
            rest = max(
                (_diag_cost(right[j]) for j in range(len(right)) if j not in used),
                default=0.0,
            )
            best = min(best, max(cur, rest))
            return
        go(i + 1, used, max(cur, _diag_cost(left[i])))
        for j in range(len(right)):
            if j not in used:
                go(i + 1, used | {j}, max(cur, _pair_cost(left[i], right[j])))

    go(0, set(), base)
    return best
