"""Achievable colour-class-size vectors.

For a graph ``g`` and a colour count ``k`` the set of vectors ``ord(phi)``
over all proper (or topological) ``k``-colourings ``phi`` is the basic
object behind the critical chromatic number, the difference sets used for
divisibility, and flexi-chromatic certification.

Two layers live here:

* :class:`ComponentOptions` computes the achievable vectors of one
  connected graph with a frontier dynamic programme over a BFS vertex
  order.  Class-size vectors are tracked as boolean numpy grids, so the
  cost is exponential only in the frontier width.
* :class:`SumsetDP` combines many components: the achievable vectors of a
  disjoint union are the Minkowski sum of the per-component sets.  Every
  stage is kept so that a target vector can be decomposed back into one
  option per component.

Vectors have ``k`` entries summing to the graph order; grids store the
first ``k - 1`` coordinates and the last one is implied.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Sequence

import numpy as np

Vec = tuple[int, ...]


def bfs_order(n: int, adj: Sequence[Iterable[int]]) -> list[int]:
    seen = [False] * n
    order: list[int] = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for u in sorted(adj[v]):
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
    return order


def _shift(arr: np.ndarray, axis: int) -> np.ndarray:
    """Return ``arr`` moved one step up along ``axis`` (no wrap-around)."""
    out = np.zeros_like(arr)
    src = [slice(None)] * arr.ndim
    dst = [slice(None)] * arr.ndim
    src[axis] = slice(0, -1)
    dst[axis] = slice(1, None)
    out[tuple(dst)] = arr[tuple(src)]
    return out


class ComponentOptions:
    """Achievable ``ord`` vectors of a small graph, with lazy witnesses.

    ``kind`` is ``"proper"`` (no monochromatic edge) or ``"topological"``
    (every edge monochromatic).  Witness colourings use colours ``1..k``
    and are indexed by local vertex number.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], k: int, kind: str = "proper"):
        if kind not in ("proper", "topological"):
            raise ValueError(f"unknown colouring kind {kind!r}")
        self.n = n
        self.k = k
        self.kind = kind
        self.adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            self.adj[u].add(v)
            self.adj[v].add(u)
        self._witness: dict[Vec, tuple[int, ...]] = {}
        if kind == "topological":
            self._topological()
        else:
            self._proper()

    # -- topological: every connected piece takes a single colour
    def _topological(self) -> None:
        parts = _components(self.n, self.adj)
        dp: dict[Vec, tuple[int, ...]] = {tuple([0] * self.k): tuple([0] * self.n)}
        for part in parts:
            nxt: dict[Vec, tuple[int, ...]] = {}
            for vec, col in dp.items():
                for c in range(self.k):
                    nv = list(vec)
                    nv[c] += len(part)
                    key = tuple(nv)
                    if key not in nxt:
                        nc = list(col)
                        for v in part:
                            nc[v] = c + 1
                        nxt[key] = tuple(nc)
            dp = nxt
        self._witness = dp
        self.ords = sorted(dp)
        self._stages = None

    # -- proper: frontier DP with colours introduced in first-use order
    def _proper(self) -> None:
        n, k = self.n, self.k
        if n == 0:
            self.ords = [tuple([0] * k)]
            self._witness[self.ords[0]] = ()
            self._stages = None
            return
        order = bfs_order(n, self.adj)
        pos = {v: i for i, v in enumerate(order)}
        self.order = order
        dims = max(k - 1, 0)
        shape = (n + 1,) * dims
        last_nb = [max((pos[u] for u in self.adj[v]), default=-1) for v in range(n)]
        # frontier[i]: placed vertices (order[:i+1]) with a neighbour after i
        self.frontiers: list[tuple[int, ...]] = [
            tuple(x for x in order[: i + 1] if last_nb[x] > i) for i in range(n)
        ]
        start = np.zeros(shape if dims else (1,), dtype=bool)
        start[(0,) * dims if dims else 0] = True
        states: dict[tuple, np.ndarray] = {((), 0): start}
        prev_front: tuple[int, ...] = ()
        self._stages = []
        for i, v in enumerate(order):
            front = self.frontiers[i]
            nxt: dict[tuple, np.ndarray] = {}
            for (cols, used), arr in states.items():
                colour_of = dict(zip(prev_front, cols))
                banned = {colour_of[u] for u in self.adj[v] if u in colour_of}
                for c in range(1, min(used + 1, k) + 1):
                    if c in banned:
                        continue
                    colour_of[v] = c
                    key = (tuple(colour_of[x] for x in front), max(used, c))
                    del colour_of[v]
                    moved = _shift(arr, c - 1) if c <= dims else arr
                    if key in nxt:
                        nxt[key] = nxt[key] | moved
                    else:
                        nxt[key] = moved
            self._stages.append(nxt)
            states = nxt
            prev_front = front
        total = np.zeros(shape if dims else (1,), dtype=bool)
        for arr in states.values():
            total |= arr
        canon: set[Vec] = set()
        if dims:
            for idx in zip(*np.nonzero(total)):
                head = tuple(int(x) for x in idx)
                canon.add(head + (n - sum(head),))
        elif total[0]:
            canon.add((n,))
        canon = {c for c in canon if min(c) >= 0}
        self._canon = canon
        allv: set[Vec] = set()
        for vec in canon:
            for perm in itertools.permutations(range(k)):
                allv.add(tuple(vec[perm[j]] for j in range(k)))
        self.ords = sorted(allv)

    def __contains__(self, vec: Vec) -> bool:
        return tuple(vec) in self._ordset

    @property
    def _ordset(self) -> set[Vec]:
        s = getattr(self, "_ordset_cache", None)
        if s is None:
            s = set(self.ords)
            self._ordset_cache = s
        return s

    def witness(self, vec: Vec) -> tuple[int, ...]:
        """A colouring (tuple of colours per local vertex) realising ``vec``."""
        vec = tuple(vec)
        if vec in self._witness:
            return self._witness[vec]
        if vec not in self._ordset:
            raise KeyError(f"vector {vec} is not achievable")
        # find a canonical vector and the permutation taking it to vec
        for perm in itertools.permutations(range(self.k)):
            # base colour j+1 becomes colour perm[j]+1
            cand = tuple(vec[perm[j]] for j in range(self.k))
            if cand in self._canon:
                base = self._trace(cand)
                col = tuple(perm[c - 1] + 1 for c in base)
                self._witness[vec] = col
                return col
        raise AssertionError("canonical representative not found")

    def _trace(self, vec: Vec) -> tuple[int, ...]:
        n, k = self.n, self.k
        dims = max(k - 1, 0)
        head = list(vec[:dims])
        colours = [0] * n
        # walk backwards; at each step pick any surviving predecessor
        target_states = [key for key, arr in self._stages[-1].items()
                         if (arr[tuple(head)] if dims else arr[0])]
        state = target_states[0]
        for i in range(n - 1, -1, -1):
            v = self.order[i]
            front = self.frontiers[i]
            prev = self._stages[i - 1] if i > 0 else {((), 0): None}
            prev_front = self.frontiers[i - 1] if i > 0 else ()
            found = None
            for (cols, used), arr in prev.items():
                colour_of = dict(zip(prev_front, cols))
                banned = {colour_of[u] for u in self.adj[v] if u in colour_of}
                for c in range(1, min(used + 1, k) + 1):
                    if c in banned:
                        continue
                    colour_of[v] = c
                    key = (tuple(colour_of[x] for x in front), max(used, c))
                    del colour_of[v]
                    if key != state:
                        continue
                    ph = list(head)
                    if c <= dims:
                        ph[c - 1] -= 1
                        if ph[c - 1] < 0:
                            continue
                    if arr is None:
                        ok = all(x == 0 for x in ph)
                    else:
                        ok = bool(arr[tuple(ph)]) if dims else bool(arr[0])
                    if ok:
                        found = ((cols, used), c, ph)
                        break
                if found:
                    break
            assert found is not None, "broken DP trace"
            state, c, head = found
            colours[v] = c
        return tuple(colours)


def _components(n: int, adj: Sequence[Iterable[int]]) -> list[list[int]]:
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    stack.append(u)
        out.append(sorted(comp))
    return out


class SumsetDP:
    """Minkowski sum of per-item option sets, with decomposition.

    ``items`` is a list of option lists; each option is a length-``k``
    integer vector.  Item option lists must be nonempty.
    """

    def __init__(self, items: Sequence[Sequence[Vec]], k: int, max_cells: int = 400_000_000):
        self.k = k
        self.items = [list(dict.fromkeys(tuple(o) for o in opts)) for opts in items]
        if any(not opts for opts in self.items):
            raise ValueError("an item has no options")
        self.total = sum(sum(opts[0]) for opts in self.items)
        self.dims = k - 1 if k > 1 else 1
        lo = [0] * self.dims
        hi = [0] * self.dims
        for opts in self.items:
            for j in range(self.dims):
                lo[j] += min(o[j] for o in opts)
                hi[j] += max(o[j] for o in opts)
        self.lo = lo
        shape = tuple(h - l + 1 for l, h in zip(lo, hi))
        cells = int(np.prod(shape)) * (len(self.items) + 1)
        if cells > max_cells:
            raise MemoryError(f"sumset tables would need {cells} cells")
        arr = np.zeros(shape, dtype=bool)
        arr[(0,) * self.dims] = True
        self.stages = [arr]
        base = [0] * self.dims
        self._bases = [tuple(base)]
        for opts in self.items:
            mins = [min(o[j] for o in opts) for j in range(self.dims)]
            new = np.zeros(shape, dtype=bool)
            for o in opts:
                off = [o[j] - mins[j] for j in range(self.dims)]
                src = tuple(slice(0, shape[j] - off[j]) for j in range(self.dims))
                dst = tuple(slice(off[j], shape[j]) for j in range(self.dims))
                new[dst] |= arr[src]
            base = [base[j] + mins[j] for j in range(self.dims)]
            self._bases.append(tuple(base))
            arr = new
            self.stages.append(arr)
        self.final = arr

    def _index(self, vec: Vec, stage: int) -> tuple[int, ...] | None:
        base = self._bases[stage]
        idx = tuple(vec[j] - base[j] for j in range(self.dims))
        shape = self.final.shape
        if any(i < 0 or i >= shape[j] for j, i in enumerate(idx)):
            return None
        return idx

    def contains(self, vec: Vec) -> bool:
        vec = tuple(vec)
        if len(vec) != self.k or sum(vec) != self.total or min(vec, default=0) < 0:
            return False
        idx = self._index(vec, len(self.items))
        return idx is not None and bool(self.final[idx])

    def vectors(self) -> list[Vec]:
        out = []
        base = self._bases[-1]
        for idx in zip(*np.nonzero(self.final)):
            head = tuple(int(i) + b for i, b in zip(idx, base))
            if self.k > 1:
                vec = head + (self.total - sum(head),)
            else:
                vec = head
            if min(vec) >= 0:
                out.append(vec)
        return out

    def decompose(self, vec: Vec) -> list[int]:
        """Indices of one option per item whose sum is ``vec``."""
        if not self.contains(vec):
            raise KeyError(f"vector {tuple(vec)} not achievable")
        cur = list(vec)
        choice = [0] * len(self.items)
        for i in range(len(self.items) - 1, -1, -1):
            for oi, o in enumerate(self.items[i]):
                prev = [cur[j] - o[j] for j in range(self.k)]
                idx = self._index(prev, i)
                if idx is not None and self.stages[i][idx]:
                    choice[i] = oi
                    cur = prev
                    break
            else:
                raise AssertionError("broken sumset trace")
        return choice
