"""Clique hypergraphs and their tight, loose and reachability components."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import PreconditionError, UncoverableError
from .graph import Graph

KSet = tuple[int, ...]

EXACT_SEARCH_LIMIT = 20


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def groups(self, items: Iterable[int]) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x in items:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


@dataclass(frozen=True)
class CliqueHypergraph:
    """``k``-uniform hypergraph on ``n`` vertices; edges are sorted tuples."""

    n: int
    k: int
    edges: tuple[KSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted({tuple(sorted(e)) for e in self.edges})))
        for e in self.edges:
            if len(set(e)) != self.k:
                raise PreconditionError(f"edge {e} does not have {self.k} distinct vertices")

    def covered(self) -> set[int]:
        return {v for e in self.edges for v in e}

    def restrict(self, edges: Iterable[KSet]) -> "CliqueHypergraph":
        return CliqueHypergraph(self.n, self.k, tuple(edges))


def k_cliques(g: Graph, k: int) -> list[KSet]:
    """All ``k``-cliques, each once, by ordered extension.

    Cliques are grown in increasing vertex order inside the forward
    neighbourhood, so every clique is produced exactly once.
    """
    if k < 1:
        return []
    forward = [frozenset(u for u in g.adj[v] if u > v) for v in range(g.n)]
    out: list[KSet] = []

    def grow(clique: list[int], cand: frozenset[int]) -> None:
        if len(clique) == k:
            out.append(tuple(clique))
            return
        if len(clique) + len(cand) < k:
            return
        for v in sorted(cand):
            clique.append(v)
            grow(clique, cand & forward[v])
            clique.pop()

    grow([], frozenset(range(g.n)))
    return out


def clique_hypergraph(g: Graph, k: int) -> CliqueHypergraph:
    if k < 2:
        raise PreconditionError("uniformity must be at least 2")
    return CliqueHypergraph(g.n, k, tuple(k_cliques(g, k)))


def _buckets(j: CliqueHypergraph) -> dict[KSet, list[int]]:
    """Edge indices grouped by each (k-1)-subset they contain."""
    buckets: dict[KSet, list[int]] = defaultdict(list)
    for idx, e in enumerate(j.edges):
        for i in range(j.k):
            buckets[e[:i] + e[i + 1:]].append(idx)
    return buckets


@dataclass
class ComponentDecomposition:
    tight: list[list[KSet]]
    loose: list[list[int]]
    reach: list[list[list[int]]]
    # per tight component: reachability-graph edges (x, y) with a witness pair (e, f),
    # x in e \ f, y in f \ e, |e & f| = k-1
    reach_edges: list[dict[tuple[int, int], tuple[KSet, KSet]]] = field(default_factory=list)

    def tight_vertices(self, i: int) -> set[int]:
        return {v for e in self.tight[i] for v in e}

    def to_dict(self) -> dict:
        return {
            "tight": [[list(e) for e in comp] for comp in self.tight],
            "loose": self.loose,
            "reach": self.reach,
        }


def decompose(j: CliqueHypergraph) -> ComponentDecomposition:
    m = len(j.edges)
    uf = UnionFind(m)
    buckets = _buckets(j)
    for members in buckets.values():
        for a in members[1:]:
            uf.union(members[0], a)
    groups = sorted(uf.groups(range(m)), key=min)
    tight = [[j.edges[i] for i in sorted(g)] for g in groups]
    comp_of = {}
    for ci, g in enumerate(groups):
        for i in g:
            comp_of[i] = ci

    # loose: tight components sharing a vertex
    luf = UnionFind(len(tight))
    owner: dict[int, int] = {}
    for ci, comp in enumerate(tight):
        for e in comp:
            for v in e:
                if v in owner:
                    luf.union(owner[v], ci)
                else:
                    owner[v] = ci
    loose = sorted((sorted(g) for g in luf.groups(range(len(tight)))), key=min)

    # reachability: within each S-bucket every pair of edges is tight-adjacent
    reach: list[list[list[int]]] = []
    reach_edges: list[dict] = [dict() for _ in tight]
    vufs: dict[int, UnionFind] = {}
    for s, members in sorted(buckets.items()):
        if len(members) < 2:
            continue
        ci = comp_of[members[0]]
        extras = []
        for idx in members:
            (x,) = set(j.edges[idx]) - set(s)
            extras.append((x, j.edges[idx]))
        vuf = vufs.setdefault(ci, UnionFind(j.n))
        for (x, e), (y, f) in itertools.combinations(extras, 2):
            vuf.union(x, y)
            key = (min(x, y), max(x, y))
            if key not in reach_edges[ci]:
                reach_edges[ci][key] = (e, f) if x < y else (f, e)
    for ci, comp in enumerate(tight):
        verts = sorted({v for e in comp for v in e})
        vuf = vufs.get(ci, UnionFind(j.n))
        classes = sorted((sorted(g) for g in vuf.groups(verts)), key=min)
        reach.append(classes)
    return ComponentDecomposition(tight, loose, reach, reach_edges)


def is_linked(j: CliqueHypergraph, v: int) -> tuple[bool, tuple[KSet, KSet] | None]:
    """Whether some edge ``e`` through ``v`` meets an edge ``f`` missing ``v`` in ``k-1`` vertices."""
    if not 0 <= v < j.n:
        raise PreconditionError(f"vertex {v} out of range")
    buckets = _buckets(j)
    for e in j.edges:
        if v not in e:
            continue
        s = tuple(x for x in e if x != v)
        for idx in buckets.get(s, ()):
            f = j.edges[idx]
            if v not in f:
                return True, (e, f)
    return False, None


def linkage_table(j: CliqueHypergraph) -> dict[int, tuple[KSet, KSet] | None]:
    buckets = _buckets(j)
    table: dict[int, tuple[KSet, KSet] | None] = {v: None for v in range(j.n)}
    for s, members in sorted(buckets.items()):
        if len(members) < 2:
            continue
        for a in members:
            e = j.edges[a]
            (v,) = set(e) - set(s)
            if table[v] is None:
                f = next(j.edges[b] for b in members if b != a)
                table[v] = (e, f)
    return table


def shadow(j: CliqueHypergraph) -> CliqueHypergraph:
    if j.k < 2:
        raise PreconditionError("shadow needs k >= 2")
    subs = {e[:i] + e[i + 1:] for e in j.edges for i in range(j.k)}
    return CliqueHypergraph(j.n, j.k - 1, tuple(subs))


@dataclass
class Connectivity:
    ok: bool
    components: list[int]  # indices into decomposition.tight
    tight_count: int
    loose_count: int
    exact: bool

    def to_dict(self) -> dict:
        return {"ok": self.ok, "components": self.components, "tight": self.tight_count,
                "loose": self.loose_count, "exact": self.exact}


def loose_count(dec: ComponentDecomposition, chosen: Sequence[int]) -> int:
    if not chosen:
        return 0
    uf = UnionFind(len(chosen))
    owner: dict[int, int] = {}
    for pos, ci in enumerate(chosen):
        for v in dec.tight_vertices(ci):
            if v in owner:
                uf.union(owner[v], pos)
            else:
                owner[v] = pos
    return len(uf.groups(range(len(chosen))))


def _require_cover(j: CliqueHypergraph) -> None:
    missing = sorted(set(range(j.n)) - j.covered())
    if missing:
        raise UncoverableError(f"vertices {missing} lie in no edge", vertices=missing)


def tl_connectivity(j: CliqueHypergraph, t: int, l: int, dec: ComponentDecomposition | None = None) -> Connectivity:
    """Search for a vertex-spanning union of at most ``t`` tight components with at most ``l`` loose ones."""
    if t < 1 or l < 1:
        raise PreconditionError("budgets must be at least 1")
    _require_cover(j)
    dec = dec or decompose(j)
    count = len(dec.tight)
    if count > EXACT_SEARCH_LIMIT:
        chosen = backstop_components(j, dec)
        tc, lc = len(chosen), loose_count(dec, chosen)
        return Connectivity(tc <= t and lc <= l, chosen, tc, lc, exact=False)
    verts = [frozenset(dec.tight_vertices(i)) for i in range(count)]
    need = frozenset(range(j.n))
    # suffix unions for coverage pruning
    suffix = [frozenset()] * (count + 1)
    for i in range(count - 1, -1, -1):
        suffix[i] = suffix[i + 1] | verts[i]
    best: list[int] | None = None
    best_key = None
    chosen: list[int] = []

    def rec(i: int, covered: frozenset) -> bool:
        nonlocal best, best_key
        if covered == need:
            lc = loose_count(dec, chosen)
            key = (lc, len(chosen))
            if best_key is None or key < best_key:
                best, best_key = list(chosen), key
            if lc <= l:
                return True
        if i == count or len(chosen) >= t:
            return False
        if not need <= covered | suffix[i]:
            return False
        chosen.append(i)
        if rec(i + 1, covered | verts[i]):
            return True
        chosen.pop()
        return rec(i + 1, covered)

    found = rec(0, frozenset())
    if found:
        return Connectivity(True, list(chosen), len(chosen), loose_count(dec, chosen), exact=True)
    if best is None:
        return Connectivity(False, [], 0, 0, exact=True)
    return Connectivity(False, best, len(best), best_key[0], exact=True)


def backstop_components(j: CliqueHypergraph, dec: ComponentDecomposition | None = None) -> list[int]:
    """Greedy spanning choice of tight components, merging loose components where possible.

    Each vertex first contributes a tight component in which it is linked
    (any component containing it if it is not linked).  Then tight
    components that touch two current loose components are added while the
    loose count keeps dropping.
    """
    _require_cover(j)
    dec = dec or decompose(j)
    comp_of_edge = {e: ci for ci, comp in enumerate(dec.tight) for e in comp}
    table = linkage_table(j)
    chosen: set[int] = set()
    for v in range(j.n):
        if v in {x for ci in chosen for x in dec.tight_vertices(ci)}:
            continue
        wit = table[v]
        if wit is not None:
            chosen.add(comp_of_edge[wit[0]])
        else:
            chosen.add(min(ci for ci in range(len(dec.tight)) if v in dec.tight_vertices(ci)))
    current = sorted(chosen)
    lc = loose_count(dec, current)
    improved = True
    while improved and lc > 1:
        improved = False
        for ci in range(len(dec.tight)):
            if ci in chosen:
                continue
            trial = sorted(chosen | {ci})
            new_lc = loose_count(dec, trial)
            if new_lc < lc:
                chosen.add(ci)
                lc = new_lc
                improved = True
                break
    return sorted(chosen)
