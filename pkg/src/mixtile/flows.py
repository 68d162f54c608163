"""Integer flows that realise vertex weights on a connected graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import PreconditionError
from .graph import Graph


@dataclass
class Flow:
    """Antisymmetric integer flow; ``values[(u, v)] == -values[(v, u)]``."""

    g: Graph
    values: dict[tuple[int, int], int] = field(default_factory=dict)

    def __call__(self, u: int, v: int) -> int:
        return self.values.get((u, v), 0)

    def add(self, u: int, v: int, amount: int) -> None:
        self.values[(u, v)] = self.values.get((u, v), 0) + amount
        self.values[(v, u)] = self.values.get((v, u), 0) - amount

    def inflow(self, v: int) -> int:
        return sum(self(u, v) for u in self.g.adj[v])

    def max_abs(self) -> int:
        return max((abs(x) for x in self.values.values()), default=0)

    def is_antisymmetric(self) -> bool:
        return all(self.values.get((v, u), 0) == -x for (u, v), x in self.values.items())

    def positive_edges(self) -> list[tuple[int, int, int]]:
        """``(u, v, amount)`` for every directed edge carrying positive flow."""
        return sorted((u, v, x) for (u, v), x in self.values.items() if x > 0)


def _bfs_parents(g: Graph, src: int) -> dict[int, int]:
    parent = {src: src}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for u in sorted(g.adj[v]):
            if u not in parent:
                parent[u] = v
                queue.append(u)
    return parent


def weights_to_flow(g: Graph, w: Sequence[int], s: int | None = None) -> Flow:
    """Flow with ``sum_u f(u, v) = w(v)`` at every vertex, by pairing units along paths.

    Each unit of positive weight at ``a`` is matched with a unit of negative
    weight at ``b`` and one unit is pushed along a shortest ``b``-``a`` path,
    so ``|f| <= ||w||_1 / 2`` on every edge.
    """
    if len(w) != g.n:
        raise PreconditionError("weight vector length differs from vertex count")
    if sum(w) != 0:
        raise PreconditionError("weights must sum to zero")
    if not g.is_connected():
        raise PreconditionError("graph must be connected")
    if s is not None and sum(abs(x) for x in w) > s:
        raise PreconditionError("weights exceed the declared norm bound")
    flow = Flow(g)
    pos = [v for v in range(g.n) for _ in range(max(w[v], 0))]
    neg = [v for v in range(g.n) for _ in range(max(-w[v], 0))]
    parents: dict[int, dict[int, int]] = {}
    for a, b in zip(pos, neg):
        par = parents.setdefault(a, _bfs_parents(g, a))
        # walk from b back towards a, pushing one unit b -> a
        v = b
        while v != a:
            nxt = par[v]
            flow.add(v, nxt, 1)
            v = nxt
    flow.values = {e: x for e, x in flow.values.items() if x}
    return flow
