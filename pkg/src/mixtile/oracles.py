"""Brute-force ground truth: exhaustive embedding, perfect tilings and subset sums.

These searches share no code with the constructive modules, so they can be
used to check them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import PreconditionError
from .graph import Graph, TiledGuest

SOME, NONE, UNDECIDED = "SOME", "NONE", "UNDECIDED"
DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class EmbeddingWitness:
    """Injective map from guest vertices to host vertices."""

    map: tuple[int, ...]

    def problems(self, h: TiledGuest | Graph, g: Graph) -> list[str]:
        guest = h.graph if isinstance(h, TiledGuest) else h
        out = []
        if len(self.map) != guest.n:
            return [f"map covers {len(self.map)} of {guest.n} guest vertices"]
        if len(set(self.map)) != len(self.map):
            out.append("map is not injective")
        if any(not 0 <= x < g.n for x in self.map):
            out.append("image outside the host")
            return out
        for u, v in guest.sorted_edges():
            if not g.has_edge(self.map[u], self.map[v]):
                out.append(f"edge {u}-{v} maps to a non-edge")
        return out

    def is_valid(self, h: TiledGuest | Graph, g: Graph) -> bool:
        return not self.problems(h, g)


@dataclass(frozen=True)
class EmbedResult:
    status: str
    witness: EmbeddingWitness | None = None
    nodes: int = 0

    def to_dict(self) -> dict:
        out = {"status": self.status, "nodes": self.nodes}
        if self.witness is not None:
            out["map"] = list(self.witness.map)
        return out


class _Budget(Exception):
    pass


def _tile_order(tile: Graph) -> list[int]:
    """Vertices so that each one after the first in a component has an earlier neighbour when possible."""
    seen: set[int] = set()
    order = []
    for start in sorted(range(tile.n), key=lambda v: -tile.degree(v)):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop(0)
            order.append(v)
            for u in sorted(tile.adj[v], key=lambda x: -tile.degree(x)):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
    return order


def brute_embed(h: TiledGuest, g: Graph, budget: int = DEFAULT_BUDGET) -> EmbedResult:
    """Exhaustive search for a copy of ``h`` in ``g``.

    Tiles are placed largest first.  Consecutive identical tiles place their
    first vertex at increasing host vertices (any embedding can be reordered
    this way).  When ``h`` spans ``g`` the search instead always covers the
    smallest uncovered host vertex, which prunes far harder.
    """
    if h.n > g.n:
        return EmbedResult(NONE)
    if h.n == g.n and h.n > 0:
        return _perfect_embed(h, g, budget)
    order = sorted(range(len(h.tiles)), key=lambda i: (-h.tiles[i].n, -h.tiles[i].m, i))
    keys = [(h.tiles[i].n, tuple(h.tiles[i].sorted_edges())) for i in order]
    offsets = h.offsets
    image = [-1] * h.n
    used = [False] * g.n
    nodes = 0

    def place_tile(pos: int, floor: int) -> bool:
        if pos == len(order):
            return True
        ti = order[pos]
        tile = h.tiles[ti]
        seq = _tile_order(tile)
        base = offsets[ti]
        same_next = pos + 1 < len(order) and keys[pos + 1] == keys[pos]

        def rec(j: int) -> bool:
            nonlocal nodes
            if j == len(seq):
                nxt = image[base + seq[0]] + 1 if same_next and seq else 0
                return place_tile(pos + 1, nxt)
            x = seq[j]
            placed = [image[base + u] for u in tile.adj[x] if image[base + u] >= 0]
            if placed:
                cands = set(g.adj[placed[0]])
                for y in placed[1:]:
                    cands &= g.adj[y]
            else:
                cands = range(floor if j == 0 else 0, g.n)
            for y in sorted(cands):
                if used[y] or g.degree(y) < tile.degree(x):
                    continue
                nodes += 1
                if nodes > budget:
                    raise _Budget
                used[y] = True
                image[base + x] = y
                if rec(j + 1):
                    return True
                used[y] = False
                image[base + x] = -1
            return False

        return rec(0)

    try:
        found = place_tile(0, 0)
    except _Budget:
        return EmbedResult(UNDECIDED, nodes=nodes)
    if not found:
        return EmbedResult(NONE, nodes=nodes)
    return EmbedResult(SOME, EmbeddingWitness(tuple(image)), nodes)


def _perfect_embed(h: TiledGuest, g: Graph, budget: int) -> EmbedResult:
    # group identical tiles: remaining[type] = list of tile indices still unplaced
    types: dict[tuple, list[int]] = {}
    for i, tile in enumerate(h.tiles):
        types.setdefault((tile.n, tuple(tile.sorted_edges())), []).append(i)
    kinds = list(types.values())
    offsets = h.offsets
    image = [-1] * h.n
    owner = [-1] * g.n
    nodes = 0

    def embed_from(tile: Graph, base: int, anchor_local: int, anchor: int) -> list[list[int]]:
        """All injective edge-preserving maps of ``tile`` into free host vertices sending anchor_local to anchor."""
        out = []
        # neighbours-first order from the anchor
        seen = {anchor_local}
        seq = [anchor_local]
        frontier = [anchor_local]
        while frontier:
            v = frontier.pop(0)
            for u in sorted(tile.adj[v]):
                if u not in seen:
                    seen.add(u)
                    seq.append(u)
                    frontier.append(u)
        seq += [v for v in range(tile.n) if v not in seen]
        loc = [-1] * tile.n
        taken: set[int] = set()

        def rec(j: int):
            nonlocal nodes
            if j == len(seq):
                out.append(list(loc))
                return
            x = seq[j]
            if j == 0:
                cands = [anchor]
            else:
                placed = [loc[u] for u in tile.adj[x] if loc[u] >= 0]
                if placed:
                    cs = set(g.adj[placed[0]])
                    for y in placed[1:]:
                        cs &= g.adj[y]
                    cands = sorted(cs)
                else:
                    # unattached vertex: must be free and above the anchor (anchor is the least free vertex)
                    cands = range(anchor + 1, g.n)
            for y in cands:
                if owner[y] >= 0 or y in taken or g.degree(y) < tile.degree(x):
                    continue
                nodes += 1
                if nodes > budget:
                    raise _Budget
                loc[x] = y
                taken.add(y)
                rec(j + 1)
                taken.discard(y)
                loc[x] = -1

        rec(0)
        return out

    def rec() -> bool:
        try:
            anchor = owner.index(-1)
        except ValueError:
            return True
        for kind in kinds:
            if not kind:
                continue
            ti = kind[-1]
            tile = h.tiles[ti]
            base = offsets[ti]
            # only the covered set matters to the rest of the search
            tried = set()
            for x in range(tile.n):
                if tile.degree(x) > g.degree(anchor):
                    continue
                for loc in embed_from(tile, base, x, anchor):
                    key = frozenset(loc)
                    if key in tried:
                        continue
                    tried.add(key)
                    kind.pop()
                    for v, y in enumerate(loc):
                        owner[y] = ti
                        image[base + v] = y
                    if rec():
                        return True
                    for v, y in enumerate(loc):
                        owner[y] = -1
                        image[base + v] = -1
                    kind.append(ti)
        return False

    try:
        found = rec()
    except _Budget:
        return EmbedResult(UNDECIDED, nodes=nodes)
    if not found:
        return EmbedResult(NONE, nodes=nodes)
    return EmbedResult(SOME, EmbeddingWitness(tuple(image)), nodes)


def brute_perfect_tiling(g: Graph, f: Graph, budget: int = DEFAULT_BUDGET) -> EmbedResult:
    """Exhaustive decision of whether ``g`` has a perfect ``f``-tiling."""
    if f.n == 0 or g.n % f.n:
        raise PreconditionError(f"v(F)={f.n} does not divide v(G)={g.n}")
    return brute_embed(TiledGuest(tuple(f for _ in range(g.n // f.n))), g, budget)


def subset_sums(xs: Sequence[int]) -> int:
    """Bitset of all subset sums of ``xs``."""
    bits = 1
    for x in xs:
        if x < 0:
            raise PreconditionError("subset sums need nonnegative values")
        bits |= bits << x
    return bits


def subset_sum_dp(xs: Sequence[int], lo: int, hi: int) -> bool:
    """Whether every integer in ``[lo, hi]`` is a subset sum of ``xs``."""
    if lo > hi:
        return True
    if lo < 0:
        return False
    bits = subset_sums(xs)
    need = ((1 << (hi - lo + 1)) - 1) << lo
    return bits & need == need
