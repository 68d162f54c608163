"""Homomorphisms, fractional tilings and covers, and bounded-degree homomorphism covers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .errors import CappedError, CoverFailed, PreconditionError
from .graph import Graph
from .lp import solve_packing_lp

DEFAULT_CAP = 200_000

Map = tuple[int, ...]


@dataclass(frozen=True)
class Homomorphism:
    source: Graph
    target: Graph
    map: Map

    def __post_init__(self):
        for u, v in self.source.edges:
            if not self.target.has_edge(self.map[u], self.map[v]):
                raise PreconditionError(f"edge {u}{v} is not preserved by {self.map}")

    def image(self) -> frozenset[int]:
        return frozenset(self.map)

    def loads(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for v in self.map:
            out[v] = out.get(v, 0) + 1
        return out


def enumerate_homs(f: Graph, g: Graph, injective: bool = False, cap: int | None = DEFAULT_CAP) -> Iterator[Map]:
    """All homomorphisms ``f -> g`` as image tuples, in lexicographic order.

    Raises ``CAPPED`` once more than ``cap`` maps would be produced.
    """
    n = f.n
    earlier = [sorted(u for u in f.adj[x] if u < x) for x in range(n)]
    img = [0] * n
    used: set[int] = set()
    count = 0

    def rec(x: int) -> Iterator[Map]:
        nonlocal count
        if x == n:
            count += 1
            if cap is not None and count > cap:
                raise CappedError(f"more than {cap} homomorphisms", cap=cap)
            yield tuple(img)
            return
        if earlier[x]:
            cand = set(g.adj[img[earlier[x][0]]])
            for u in earlier[x][1:]:
                cand &= g.adj[img[u]]
            cands = sorted(cand)
        else:
            cands = range(g.n)
        for v in cands:
            if injective and v in used:
                continue
            img[x] = v
            if injective:
                used.add(v)
            yield from rec(x + 1)
            if injective:
                used.discard(v)

    yield from rec(0)


def load_vector(m: Map, n: int) -> tuple[int, ...]:
    out = [0] * n
    for v in m:
        out[v] += 1
    return tuple(out)


@dataclass
class FractionalTiling:
    f: Graph
    g: Graph
    weights: dict[Map, Fraction] = field(default_factory=dict)

    @property
    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    @property
    def weight(self) -> Fraction:
        return self.f.n * self.total

    def loads(self) -> list[Fraction]:
        out = [Fraction(0)] * self.g.n
        for m, w in self.weights.items():
            for v in m:
                out[v] += w
        return out

    def is_valid(self) -> bool:
        for m, w in self.weights.items():
            if not 0 <= w <= 1:
                return False
            if any(not self.g.has_edge(m[u], m[v]) for u, v in self.f.edges):
                return False
        return all(x <= 1 for x in self.loads())

    def is_perfect(self) -> bool:
        return self.weight == self.g.n

    def support(self) -> list[Map]:
        return sorted(m for m, w in self.weights.items() if w > 0)

    def to_dict(self) -> dict:
        return {"weight": str(self.weight),
                "weights": [{"map": list(m), "value": str(w)} for m, w in sorted(self.weights.items()) if w]}


@dataclass
class FractionalCover:
    f: Graph
    g: Graph
    values: list[Fraction]

    @property
    def size(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def violated(self, cap: int | None = DEFAULT_CAP) -> Map | None:
        """First homomorphism whose weighted cover sum is below 1, if any."""
        for m in enumerate_homs(self.f, self.g, cap=cap):
            if sum((self.values[v] for v in m), Fraction(0)) < 1:
                return m
        return None

    def to_dict(self) -> dict:
        return {"size": str(self.size), "values": [str(v) for v in self.values]}


def _solve(g: Graph, f: Graph, cap: int | None):
    reps: dict[tuple[int, ...], Map] = {}
    for m in enumerate_homs(f, g, cap=cap):
        key = load_vector(m, g.n)
        if key not in reps:
            reps[key] = m
    cols = list(reps.items())
    a = [[key[v] for key, _ in cols] for v in range(g.n)]
    res = solve_packing_lp(a, [1] * g.n, [1] * len(cols))
    return cols, res


def max_fractional_tiling(g: Graph, f: Graph, cap: int | None = DEFAULT_CAP) -> FractionalTiling:
    """Maximum-weight fractional ``f``-tiling of ``g`` by exact simplex.

    Homomorphisms with identical load vectors give identical LP columns, so
    one representative (the lexicographically first) stands for each.
    """
    if f.n == 0:
        raise PreconditionError("tile graph must be nonempty")
    cols, res = _solve(g, f, cap)
    weights = {m: x for (_, m), x in zip(cols, res.x) if x}
    return FractionalTiling(f, g, weights)


def min_fractional_cover(g: Graph, f: Graph, cap: int | None = DEFAULT_CAP) -> FractionalCover:
    """Minimum fractional ``f``-cover, read from the optimal dual of the tiling LP.

    The constraint for a homomorphism counts each target vertex with the
    number of tile vertices mapped onto it.
    """
    if f.n == 0:
        raise PreconditionError("tile graph must be nonempty")
    _, res = _solve(g, f, cap)
    return FractionalCover(f, g, list(res.y))


def compose_tilings(outer: FractionalTiling, inner: FractionalTiling) -> FractionalTiling:
    """Push a perfect tiling of ``inner.f`` in ``B`` through a tiling of ``B`` in ``G``."""
    if inner.g != outer.f:
        raise PreconditionError("inner host must be the outer tile graph")
    if not inner.is_perfect():
        raise PreconditionError("inner tiling must be perfect")
    out: dict[Map, Fraction] = {}
    for om, ow in outer.weights.items():
        for im, iw in inner.weights.items():
            m = tuple(om[x] for x in im)
            out[m] = out.get(m, Fraction(0)) + ow * iw
    return FractionalTiling(inner.f, outer.g, out)


# -- bounded-degree covers -------------------------------------------------

@dataclass
class BoundedCover:
    homs: list[Map]
    covered: int
    max_multiplicity: int
    max_union_degree: int
    matching_degree: int

    def to_dict(self) -> dict:
        return {"images": [list(m) for m in self.homs], "covered": self.covered,
                "maxMultiplicity": self.max_multiplicity, "maxUnionDegree": self.max_union_degree,
                "matchingDegree": self.matching_degree}


def _lifts(m: Map, f: int, cap: int) -> list[tuple[tuple[int, int], ...]]:
    """Injective lifts of ``m`` into the ``f``-blow-up: vertex ``x`` goes to ``(m[x], i)``."""
    groups: dict[int, list[int]] = {}
    for x, v in enumerate(m):
        groups.setdefault(v, []).append(x)
    per = []
    for v, xs in sorted(groups.items()):
        per.append([(xs, perm) for perm in itertools.permutations(range(f), len(xs))])
    out = []
    for combo in itertools.product(*per):
        lift = [None] * len(m)
        for xs, perm in combo:
            for x, i in zip(xs, perm):
                lift[x] = (m[x], i)
        out.append(tuple(lift))
        if len(out) > cap:
            raise CappedError(f"more than {cap} lifts", cap=cap)
    return out


def _extract_cover(nverts: int, edges: list[frozenset[int]], support: list[int], bound: int,
                   budget: int = 200_000) -> list[int] | None:
    """Edge cover with maximum degree ``<= bound``, pruned from the LP support."""
    chosen = list(support)
    deg = [0] * nverts
    for e in chosen:
        for v in edges[e]:
            deg[v] += 1
    if any(d == 0 for d in deg):
        return None
    # drop redundant edges, hottest first
    order = sorted(chosen, key=lambda e: (-max(deg[v] for v in edges[e]), e))
    kept = set(chosen)
    for e in order:
        if all(deg[v] >= 2 for v in edges[e]):
            kept.discard(e)
            for v in edges[e]:
                deg[v] -= 1
    if max(deg) <= bound:
        return sorted(kept)
    # exhaustive repair over all hyperedges
    by_vertex: list[list[int]] = [[] for _ in range(nverts)]
    for i, e in enumerate(edges):
        for v in e:
            by_vertex[v].append(i)
    deg = [0] * nverts
    pick: list[int] = []
    steps = 0

    def rec() -> bool:
        nonlocal steps
        steps += 1
        if steps > budget:
            return False
        v = next((u for u in range(nverts) if deg[u] == 0), None)
        if v is None:
            return True
        for i in by_vertex[v]:
            if all(deg[u] < bound for u in edges[i]):
                pick.append(i)
                for u in edges[i]:
                    deg[u] += 1
                if rec():
                    return True
                pick.pop()
                for u in edges[i]:
                    deg[u] -= 1
        return False

    return sorted(pick) if rec() else None


def bounded_degree_cover(r: Graph, f: Graph, tiling: FractionalTiling, rho: Fraction | int = 0,
                         lift_cap: int = 20_000) -> BoundedCover:
    """Homomorphic images of ``f`` covering most of ``r`` with bounded multiplicity.

    The tiling is lifted to the ``v(f)``-blow-up, where it becomes a
    fractional perfect matching of the hypergraph of lifted copies.  A
    basic optimal matching is re-solved there, an edge cover of maximum
    degree at most ``v(f)^2 + 1`` is extracted from its support, and the
    cover is projected back.  A deficient tiling is first completed by
    adding universal vertices and re-solving.
    """
    rho = Fraction(rho)
    fn = f.n
    if not tiling.is_valid():
        raise PreconditionError("tiling is not a valid fractional tiling")
    if tiling.weight < (1 - rho) * r.n:
        raise PreconditionError("tiling is not (1-rho)-perfect")
    if fn > 1 and rho >= Fraction(1, fn ** 6):
        raise PreconditionError("rho must be below 1/v(f)^6")
    bound = fn ** 4
    if fn == 1:
        homs = [(v,) for v in range(r.n)]
        return BoundedCover(homs, r.n, 1, 0, 1)
    host = r
    base = tiling
    extra = 0
    if not tiling.is_perfect():
        rho_p = Fraction(math.ceil(rho * r.n), r.n)
        extra = int(rho_p * r.n) * (fn - 1)
        es = set(r.edges)
        for a in range(r.n, r.n + extra):
            es.update((v, a) for v in range(a))
        host = Graph.from_edges(r.n + extra, es)
        base = max_fractional_tiling(host, f)
        if not base.is_perfect():
            raise CoverFailed("completed host has no perfect fractional tiling", multiplicity=-1)
    # hypergraph of lifted copies in the fn-blow-up
    index = {(v, i): v * fn + i for v in range(host.n) for i in range(fn)}
    edges: list[frozenset[int]] = []
    origin: list[Map] = []
    seen: dict[frozenset[int], int] = {}
    for m in base.support():
        for lift in _lifts(m, fn, lift_cap):
            key = frozenset(index[p] for p in lift)
            if key not in seen:
                seen[key] = len(edges)
                edges.append(key)
                origin.append(m)
    nverts = host.n * fn
    a = [[1 if u in e else 0 for e in edges] for u in range(nverts)]
    res = solve_packing_lp(a, [1] * nverts, [1] * len(edges))
    if res.value * fn != nverts:
        raise CoverFailed("lifted hypergraph has no perfect fractional matching", multiplicity=-1)
    support = [i for i, x in enumerate(res.x) if x]
    cover = _extract_cover(nverts, edges, support, fn * fn + 1)
    if cover is None:
        raise CoverFailed(f"no cover of maximum degree {fn * fn + 1} found", multiplicity=-1)
    mdeg = [0] * nverts
    for i in cover:
        for u in edges[i]:
            mdeg[u] += 1
    homs = sorted({origin[i] for i in cover if all(v < r.n for v in origin[i])})
    # distinct images as subgraphs
    images = {}
    for m in homs:
        key = (frozenset(m), frozenset(tuple(sorted((m[u], m[v]))) for u, v in f.edges))
        images.setdefault(key, m)
    homs = sorted(images.values())
    mult = [0] * r.n
    union_edges = set()
    covered = set()
    for m in homs:
        for v in set(m):
            mult[v] += 1
        covered.update(m)
        union_edges.update(tuple(sorted((m[u], m[v]))) for u, v in f.edges)
    udeg = [0] * r.n
    for u, v in union_edges:
        udeg[u] += 1
        udeg[v] += 1
    result = BoundedCover(homs, len(covered), max(mult, default=0), max(udeg, default=0), max(mdeg, default=0))
    if result.max_multiplicity > bound or result.max_union_degree > bound:
        raise CoverFailed(f"degree bound {bound} violated", multiplicity=result.max_multiplicity)
    if result.covered < (1 - rho * fn ** 6) * r.n:
        raise CoverFailed("cover misses too many vertices", multiplicity=result.max_multiplicity)
    return result
