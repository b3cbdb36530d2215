"""Pure-Python union-find kernel (fallback for the compiled ``_unionfind``)."""
from __future__ import annotations

from array import array
from typing import Sequence


def label_components(n: int, sources: Sequence[int], targets: Sequence[int]) -> array:
    """Label each of ``n`` nodes with the smallest node index of its component.

    ``sources[k]``–``targets[k]`` is an undirected edge between node indices.
    Union always attaches the larger root below the smaller one, so the
    label of a component is its minimum index regardless of edge order.
    """
    if len(sources) != len(targets):
        raise ValueError("sources and targets must have equal length")
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in zip(sources, targets):
        if not (0 <= a < n and 0 <= b < n):
            raise IndexError(f"edge ({a}, {b}) out of range for {n} nodes")
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    return array("q", (find(i) for i in range(n)))
