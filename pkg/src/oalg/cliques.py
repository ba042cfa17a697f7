"""Clique enumeration on small dense graphs given as boolean adjacency matrices."""
from __future__ import annotations

import numpy as np


def _neighbours(adj: np.ndarray) -> list[set[int]]:
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    return [set(int(j) for j in np.flatnonzero(adj[i]) if j != i) for i in range(n)]


def maximal_cliques(adj: np.ndarray, vertices=None) -> list[tuple[int, ...]]:
    """All maximal cliques (Bron–Kerbosch with Tomita pivoting).

    Self-loops are ignored.  Cliques come back as sorted tuples, in
    lexicographic order.
    """
    nbrs = _neighbours(adj)
    if vertices is None:
        vertices = range(len(nbrs))
    vertices = set(int(v) for v in vertices)
    nbrs = [nb & vertices for nb in nbrs]
    out: list[tuple[int, ...]] = []

    def expand(r: list[int], p: set[int], x: set[int]):
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda u: len(p & nbrs[u]))
        for v in sorted(p - nbrs[pivot]):
            expand(r + [v], p & nbrs[v], x & nbrs[v])
            p = p - {v}
            x = x | {v}

    if vertices:
        expand([], set(vertices), set())
    out.sort()
    return out


def maximum_clique(adj: np.ndarray, vertices=None) -> tuple[int, ...]:
    """One maximum clique, by branch and bound on the same recursion."""
    nbrs = _neighbours(adj)
    if vertices is None:
        vertices = range(len(nbrs))
    vertices = set(int(v) for v in vertices)
    nbrs = [nb & vertices for nb in nbrs]
    best: list[int] = []

    def expand(r: list[int], p: set[int]):
        nonlocal best
        if len(r) > len(best):
            best = list(r)
        if len(r) + len(p) <= len(best):
            return
        for v in sorted(p, key=lambda u: -len(p & nbrs[u])):
            if len(r) + len(p) <= len(best):
                return
            expand(r + [v], p & nbrs[v])
            p = p - {v}

    expand([], set(vertices))
    return tuple(sorted(best))
