"""Seeded instance generators, shrinking, and named invariant suites."""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .errors import PreconditionError, RejectedError
from .graph import (Graph, TiledGuest, blow_up, bottle_graph, chromatic_profile, complete_bipartite,
                    complete_graph, complete_multipartite, cycle_graph, disjoint_union, empty_graph,
                    is_fcr, path_graph, petersen_graph)


@dataclass(frozen=True)
class InstanceSpec:
    generator: str
    n: int = 8
    seed: int = 0
    params: dict = field(default_factory=dict)
    min_degree: int | None = None
    retries: int = 50


def _er(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def _threshold(n: int, d: int, rng: random.Random) -> Graph:
    """Random graph pushed up to minimum degree ``d`` by adding random edges at deficient vertices."""
    if d >= n:
        raise PreconditionError(f"minimum degree {d} impossible on {n} vertices")
    edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3}
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    for v in sorted(range(n), key=lambda _: rng.random()):
        while deg[v] < d:
            w = rng.choice([u for u in range(n) if u != v and (min(u, v), max(u, v)) not in edges])
            edges.add((min(w, v), max(w, v)))
            deg[v] += 1
            deg[w] += 1
    return Graph.from_edges(n, edges)


def gen_graph(spec: InstanceSpec) -> Graph:
    """Graph from a named generator; ``min_degree`` is enforced by rejection."""
    rng = random.Random(spec.seed)
    p = spec.params
    for _ in range(max(spec.retries, 1)):
        if spec.generator == "er":
            g = _er(spec.n, float(p.get("p", 0.5)), rng)
        elif spec.generator == "multipartite":
            g = complete_multipartite(p["sizes"])
        elif spec.generator == "blowup":
            g = blow_up(p["reduced"], p.get("sizes", 2))
        elif spec.generator == "cliques":
            g = disjoint_union([complete_graph(p.get("size", 3))] * p.get("count", 2))
        elif spec.generator == "threshold":
            g = _threshold(spec.n, p.get("d", spec.min_degree or 0), rng)
        else:
            raise PreconditionError(f"unknown generator {spec.generator!r}")
        if spec.min_degree is None or g.min_degree >= spec.min_degree:
            return g
        if spec.generator in ("multipartite", "blowup", "cliques"):
            break
    raise RejectedError(f"{spec.generator} produced no graph with min degree {spec.min_degree}")


_TILE_RE = re.compile(r"^(K|C|P|E)(\d+)$|^K(\d+),(\d+)$|^B\((\d+),(\d+),(\d+)\)$")


def tile_from_name(name: str) -> Graph:
    """``K5``, ``C7``, ``P4``, ``E3`` (empty), ``K2,4`` or ``B(3,1,2)`` (bottle)."""
    m = _TILE_RE.match(name.strip())
    if not m:
        raise PreconditionError(f"unknown tile name {name!r}")
    if m.group(1):
        kind, n = m.group(1), int(m.group(2))
        return {"K": complete_graph, "C": cycle_graph, "P": path_graph, "E": empty_graph}[kind](n)
    if m.group(3):
        return complete_bipartite(int(m.group(3)), int(m.group(4)))
    return bottle_graph(int(m.group(5)), int(m.group(6)), int(m.group(7)))


def gen_guest(counts: dict[str, int] | Iterable[tuple[str, int]], max_tile: int | None = None,
              seed: int | None = None) -> TiledGuest:
    """Tiling from catalogue names with counts; ``seed`` shuffles the tile order."""
    items = list(counts.items()) if isinstance(counts, dict) else list(counts)
    tiles = []
    for name, count in items:
        g = tile_from_name(name)
        if max_tile is not None and g.n > max_tile:
            raise PreconditionError(f"tile {name} has {g.n} vertices, above the bound {max_tile}")
        tiles.extend([g] * count)
    if seed is not None:
        random.Random(seed).shuffle(tiles)
    return TiledGuest(tuple(tiles))


def graph_catalogue() -> list[tuple[str, Graph]]:
    """Paths, cycles, cliques, wheels, complete bipartite graphs, small bottles and a few unions."""
    out = []
    out += [(f"P{n}", path_graph(n)) for n in range(2, 8)]
    out += [(f"C{n}", cycle_graph(n)) for n in range(3, 10)]
    out += [(f"K{n}", complete_graph(n)) for n in range(2, 7)]
    out += [(f"K{a},{b}", complete_bipartite(a, b)) for a in range(1, 5) for b in range(a, 5)]
    out += [(f"B({k},{a},{b})", bottle_graph(k, a, b)) for k, a, b in
            [(3, 1, 2), (3, 1, 3), (3, 2, 3), (4, 1, 2), (2, 1, 2), (2, 2, 3), (3, 1, 1), (2, 1, 3)]]
    out += [(f"W{n}", wheel_graph(n)) for n in range(3, 9)]
    out += [(f"C{n}", cycle_graph(n)) for n in range(10, 13)]
    out += [("K7", complete_graph(7)), ("Petersen", petersen_graph())]
    out += [(f"C{a}+C{b}", disjoint_union([cycle_graph(a), cycle_graph(b)])) for a, b in [(3, 4), (4, 5), (5, 5)]]
    out += [("K3+K2", disjoint_union([complete_graph(3), complete_graph(2)]))]
    return out


def wheel_graph(n: int) -> Graph:
    """Cycle on ``n`` vertices plus a hub joined to all of them."""
    c = cycle_graph(n)
    return Graph.from_edges(n + 1, list(c.edges) + [(v, n) for v in range(n)])


def shrink(g: Graph, fails: Callable[[Graph], bool]) -> Graph:
    """Smaller failing instance: drop vertices while it still fails, then edges."""
    if not fails(g):
        return g
    changed = True
    while changed:
        changed = False
        for v in range(g.n):
            h = g.remove_vertices([v])
            if fails(h):
                g, changed = h, True
                break
    changed = True
    while changed:
        changed = False
        for e in g.sorted_edges():
            h = g.remove_edges([e])
            if fails(h):
                g, changed = h, True
                break
    return g


@dataclass
class SuiteResult:
    name: str
    anchor: str
    passed: int = 0
    failed: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, **info) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 5:
                self.failures.append(info)

    def to_dict(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "passed": self.passed, "failed": self.failed,
                "failures": self.failures}


SUITES: dict[str, tuple[str, Callable[[SuiteResult, random.Random, int], None]]] = {}


def suite(name: str, anchor: str):
    def wrap(fn):
        SUITES[name] = (anchor, fn)
        return fn
    return wrap


@suite("bottle", "critical chromatic number of bottle graphs")
def _bottle_suite(res: SuiteResult, rng: random.Random, budget: int) -> None:
    for k in range(2, 5):
        for b in range(1, 5):
            for a in range(1, b + 1):
                if math.gcd(a, b) == 1:
                    crit = chromatic_profile(bottle_graph(k, a, b)).crit
                    res.record(crit == k - 1 + Fraction(a, b), k=k, a=a, b=b, crit=str(crit))


@suite("duality", "fractional tiling and cover LP duality")
def _duality_suite(res: SuiteResult, rng: random.Random, budget: int) -> None:
    from .fractional import max_fractional_tiling, min_fractional_cover
    for _ in range(min(budget, 30)):
        g = _er(rng.randint(3, 7), rng.uniform(0.4, 0.9), rng)
        for f in (complete_graph(2), complete_graph(3)):
            t = max_fractional_tiling(g, f)
            c = min_fractional_cover(g, f)
            res.record(t.is_valid() and c.violated() is None and c.size * f.n == t.weight,
                       graph=g.to_text(), tile=f.n)


@suite("reachability", "at most k reachability classes per tight component")
def _reach_suite(res: SuiteResult, rng: random.Random, budget: int) -> None:
    from .cliques import clique_hypergraph, decompose
    for _ in range(min(budget, 100)):
        g = _er(rng.randint(3, 9), rng.uniform(0.3, 0.9), rng)
        for k in (2, 3, 4):
            dec = decompose(clique_hypergraph(g, k))
            res.record(all(len(r) <= k for r in dec.reach), graph=g.to_text(), k=k)


@suite("flexi-roundtrip", "constructed certificates re-certify")
def _flexi_suite(res: SuiteResult, rng: random.Random, budget: int) -> None:
    from .flexi import FlexiCertificate, certify_flexi, flexi_sum, isolated_certificate
    for k in range(1, 4):
        for w in range(1, 3):
            for kind in ("proper", "topological"):
                c = isolated_certificate(k, w, kind)
                r = certify_flexi(c.guest, kind, k, w, 0)
                res.record(c.is_valid() and isinstance(r, FlexiCertificate), k=k, w=w, kind=kind)
                s = flexi_sum(c, c)
                res.record(s.is_valid(), k=k, w=w, kind=kind, op="sum")


@suite("fcr", "divisibility class agrees with the chromatic profile")
def _fcr_suite(res: SuiteResult, rng: random.Random, budget: int) -> None:
    for name, g in graph_catalogue():
        p = chromatic_profile(g)
        expect = p.gcd_chi == 1 and (p.chi >= 3 or p.gcd_c == 1) and p.chi >= 2
        res.record(is_fcr(g) == expect, graph=name)


@suite("partition", "balanced partition deviation bound")
def _partition_suite(res: SuiteResult, rng: random.Random, budget: int) -> None:
    from .allocation import balanced_partition, partition_deviation
    for _ in range(min(budget, 10)):
        xs = [[rng.randint(0, 3) for _ in range(3)] for _ in range(400)]
        s = rng.choice([2, 4])
        parts = balanced_partition(xs, s, seed=rng.randint(0, 10 ** 6))
        n = sum(map(sum, xs))
        res.record(partition_deviation(xs, parts) <= Fraction(n, s * s), s=s)


@suite("subset-sum", "bitset subset sums agree with enumeration")
def _subset_suite(res: SuiteResult, rng: random.Random, budget: int) -> None:
    from itertools import combinations
    from .oracles import subset_sum_dp
    for _ in range(min(budget, 50)):
        xs = [rng.randint(0, 6) for _ in range(rng.randint(0, 8))]
        sums = {sum(c) for r in range(len(xs) + 1) for c in combinations(xs, r)}
        lo = rng.randint(0, 10)
        hi = lo + rng.randint(0, 5)
        res.record(subset_sum_dp(xs, lo, hi) == all(x in sums for x in range(lo, hi + 1)), xs=xs, lo=lo, hi=hi)


def run_suite(name: str, seed: int = 0, budget: int = 100) -> SuiteResult:
    if name not in SUITES:
        raise PreconditionError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    anchor, fn = SUITES[name]
    res = SuiteResult(name, anchor)
    fn(res, random.Random(seed), budget)
    return res
