"""Checks that a host graph is a tiling framework, plus the degree and density conditions that imply it.

A host is a ``(chi, rho; t, l)``-framework when it has a ``(1 - rho)``-perfect
fractional tiling by the bottle graph of ``chi`` (space), a spanning union
of at most ``t`` tight clique components forming at most ``l`` loose
components (divisibility), and every vertex is linked (linkage).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cliques import (CliqueHypergraph, Connectivity, backstop_components, clique_hypergraph,
                      decompose, linkage_table, loose_count, tl_connectivity)
from .errors import UncoverableError
from .fractional import DEFAULT_CAP, max_fractional_tiling
from .graph import Graph, bottle_for_chi, bottle_parameters

EXHAUSTIVE_LIMIT = 100_000
DENSITY_EXACT_LIMIT = 20
BOTTLE_LIMIT = 12


@dataclass
class FrameworkReport:
    chi: Fraction
    rho: Fraction
    t: int
    l: int
    weight: Fraction
    perfect: bool
    f1: bool
    f2: bool
    connectivity: Connectivity | None
    f3: bool
    linkage: dict[int, tuple | None] = field(default_factory=dict)
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.f1 and self.f2 and self.f3

    def to_dict(self) -> dict:
        return {
            "chi": str(self.chi), "rho": str(self.rho), "t": self.t, "l": self.l, "ok": self.ok,
            "f1": {"ok": self.f1, "weight": str(self.weight), "perfect": self.perfect},
            "f2": {"ok": self.f2, **(self.connectivity.to_dict() if self.connectivity else {}), "note": self.note},
            "f3": {"ok": self.f3, "unlinked": [v for v, w in sorted(self.linkage.items()) if w is None],
                   "witnesses": {str(v): [list(e) for e in w] for v, w in sorted(self.linkage.items()) if w}},
        }


def check_framework(g: Graph, chi: Fraction | int, rho: Fraction | int, t: int, l: int,
                    cap: int | None = DEFAULT_CAP) -> FrameworkReport:
    chi, rho = Fraction(chi), Fraction(rho)
    k = math.ceil(chi)
    tiling = max_fractional_tiling(g, bottle_for_chi(chi), cap=cap)
    f1 = tiling.weight >= (1 - rho) * g.n
    j = clique_hypergraph(g, k)
    note = ""
    try:
        conn = tl_connectivity(j, t, l)
        f2 = conn.ok
    except UncoverableError as exc:
        conn, f2, note = None, False, str(exc)
    table = linkage_table(j)
    f3 = all(w is not None for w in table.values())
    return FrameworkReport(chi, rho, t, l, tiling.weight, tiling.is_perfect(), f1, f2, conn, f3, table, note)


# -- robustness ------------------------------------------------------------

@dataclass
class RobustVerdict:
    status: str  # PASS or FAIL
    mode: str  # exhaustive or sampled
    tested: int
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.status == "PASS"

    def label(self) -> str:
        if self.status == "FAIL":
            return "FAIL(counterexample)"
        return "PASS(exhaustive)" if self.mode == "exhaustive" else f"PASS(sampled,{self.tested})"

    def to_dict(self) -> dict:
        return {"status": self.status, "mode": self.mode, "tested": self.tested, "label": self.label(),
                "counterexample": self.counterexample}


def _edge_loads(g: Graph, chi: Fraction, cap) -> dict[tuple[int, int], Fraction]:
    tiling = max_fractional_tiling(g, bottle_for_chi(chi), cap=cap)
    f = tiling.f
    out: dict[tuple[int, int], Fraction] = {}
    for m, w in tiling.weights.items():
        for a, b in f.edges:
            e = (min(m[a], m[b]), max(m[a], m[b]))
            out[e] = out.get(e, Fraction(0)) + w
    return out


def _adversarial_edges(g: Graph, chi: Fraction, budget: int, cap) -> Graph:
    """Delete heavily loaded edges while every vertex loses at most ``budget`` of its degree."""
    loads = _edge_loads(g, chi, cap)
    lost = [0] * g.n
    gone = []
    for e in sorted(loads, key=lambda e: (-loads[e], e)):
        u, v = e
        if lost[u] < budget and lost[v] < budget:
            gone.append(e)
            lost[u] += 1
            lost[v] += 1
    return g.remove_edges(gone)


def check_robust(g: Graph, mu: Fraction | int, chi: Fraction | int, rho: Fraction | int, t: int, l: int,
                 seed: int = 0, samples: int = 200, cap: int | None = DEFAULT_CAP,
                 edge_slack: Fraction | int | None = None) -> RobustVerdict:
    """Check the framework property on approximations of ``g``.

    Every deletion of at most ``floor(mu n)`` vertices is tried when there
    are at most 10^5 of them, otherwise a seeded sample.  With
    ``edge_slack = d`` each of those is also tried after deleting edges
    (per-vertex degree loss at most ``floor(d n)``), choosing the edges the
    fractional tiling loads most; this part is a heuristic adversary.
    """
    mu, chi = Fraction(mu), Fraction(chi)
    n = g.n
    budget = math.floor(mu * n)
    edge_budget = math.floor(Fraction(edge_slack) * n) if edge_slack is not None else 0
    deletions: list[tuple[int, ...]]
    total = sum(math.comb(n, r) for r in range(budget + 1))
    if total <= EXHAUSTIVE_LIMIT:
        mode = "exhaustive"
        deletions = [c for r in range(budget + 1) for c in itertools.combinations(range(n), r)]
    else:
        mode = "sampled"
        rng = random.Random(seed)
        deletions = [()] + [tuple(sorted(rng.sample(range(n), budget))) for _ in range(samples)]
    tested = 0
    for gone in deletions:
        sub = g.remove_vertices(gone)
        variants = [("vertices", sub)]
        if edge_budget and sub.m:
            variants.append(("edges", _adversarial_edges(sub, chi, edge_budget, cap)))
        for how, h in variants:
            tested += 1
            rep = check_framework(h, chi, rho, t, l, cap=cap)
            if not rep.ok:
                return RobustVerdict("FAIL", mode, tested, {
                    "removed": list(gone), "edgeDeletion": how == "edges",
                    "removedEdges": [list(e) for e in sorted(sub.edges - h.edges)],
                    "report": rep.to_dict()})
    return RobustVerdict("PASS", mode, tested)


# -- degree conditions -----------------------------------------------------

@dataclass
class DegreeVerdict:
    status: str  # PASS, FAIL or HYPOTHESIS_FAIL
    chi: Fraction
    t: int
    l: int
    hypothesis: bool
    report: FrameworkReport | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return {"status": self.status, "chi": str(self.chi), "t": self.t, "l": self.l,
                "hypothesis": self.hypothesis, "note": self.note,
                "report": self.report.to_dict() if self.report else None}


def _bottle_order(chi: Fraction) -> int:
    k, a, b = bottle_parameters(chi)
    return a + (k - 1) * b


def degree_budgets(chi: Fraction, mu: Fraction) -> tuple[int, int]:
    """Component budgets implied by the minimum-degree condition."""
    k = math.ceil(chi)
    t = math.floor(Fraction(k) ** (4 * k) / (chi + 1 - k + mu / 2) ** k)
    return t, (t if k == 2 else 1)


def check_degree_framework(g: Graph, chi: Fraction | int, mu: Fraction | int, rho: Fraction | int = 0,
                           cap: int | None = DEFAULT_CAP) -> DegreeVerdict:
    """Check ``delta(g) >= (1 - 1/chi + mu) n`` and then the framework property it implies.

    The conclusion is checked at ``chi + mu/4`` unless that crosses the next
    integer or its bottle graph is too large to enumerate; ``chi`` itself is
    used then, which asks for no more than the conclusion does.
    """
    chi, mu = Fraction(chi), Fraction(mu)
    n = g.n
    t, l = degree_budgets(chi, mu)
    hyp = g.min_degree >= (1 - 1 / chi + mu) * n
    if not hyp:
        return DegreeVerdict("HYPOTHESIS_FAIL", chi, t, l, False,
                             note=f"min degree {g.min_degree} < {(1 - 1 / chi + mu) * n}")
    target = chi + mu / 4
    note = ""
    if math.ceil(target) != math.ceil(chi) or _bottle_order(target) > max(_bottle_order(chi), BOTTLE_LIMIT):
        target = chi
        note = "checked at chi: the bottle for chi + mu/4 is out of desk range"
    rep = check_framework(g, target, rho, t, l, cap=cap)
    return DegreeVerdict("PASS" if rep.ok else "FAIL", target, t, l, True, rep, note)


def degree_alpha(chi: Fraction) -> Fraction:
    return 1 - Fraction(math.ceil(chi) - 1) / chi


def check_strong_degree_sequence(g: Graph, chi: Fraction | int, mu: Fraction | int) -> bool:
    """``d_i >= (1 - 1/chi - alpha) n + chi alpha i + mu n`` for ``i <= n/chi`` on ascending degrees."""
    chi, mu = Fraction(chi), Fraction(mu)
    n = g.n
    alpha = degree_alpha(chi)
    degs = sorted(g.degrees())
    last = math.floor(n / chi)
    for i in range(1, last + 1):
        if degs[i - 1] < (1 - 1 / chi - alpha) * n + chi * alpha * i + mu * n:
            return False
    return True


# -- uniform density -------------------------------------------------------

@dataclass
class DensityVerdict:
    ok: bool
    mode: str
    min_degree_ok: bool
    worst_set: list[int] | None
    worst_margin: Fraction

    def to_dict(self) -> dict:
        return {"ok": self.ok, "mode": self.mode, "minDegreeOk": self.min_degree_ok,
                "worstSet": self.worst_set, "worstMargin": str(self.worst_margin)}


def _all_subset_edges(g: Graph) -> np.ndarray:
    """``e(U)`` for every bitmask ``U``."""
    n = g.n
    out = np.zeros(1 << n, dtype=np.int32)
    nbmask = [sum(1 << u for u in g.adj[v]) for v in range(n)]
    bytes_pop = np.array([bin(i).count("1") for i in range(256)], dtype=np.int32)
    for v in range(n):
        lo = np.arange(1 << v, dtype=np.int64)
        inter = lo & nbmask[v]
        pop = np.zeros_like(out[: 1 << v])
        for shift in range(0, max(v, 1), 8):
            pop += bytes_pop[(inter >> shift) & 0xFF]
        out[1 << v: 1 << (v + 1)] = out[: 1 << v] + pop
    return out


def _margin(e_u: int, size: int, n: int, rho: Fraction, d: Fraction) -> Fraction:
    return e_u - (d * size * size / 2 - rho * n * n)


def check_uniform_density(g: Graph, rho: Fraction | int, d: Fraction | int, mu: Fraction | int,
                          seed: int = 0, samples: int = 20_000) -> DensityVerdict:
    """``e(U) >= d|U|^2/2 - rho n^2`` for all ``U`` and ``delta >= mu n``.

    Exhaustive for ``n <= 20`` (per subset size only the sparsest set
    matters); otherwise seeded random sets plus greedy low-degree sets.
    """
    rho, d, mu = Fraction(rho), Fraction(d), Fraction(mu)
    n = g.n
    deg_ok = g.min_degree >= mu * n if n else True
    if n <= DENSITY_EXACT_LIMIT:
        e = _all_subset_edges(g)
        masks = np.arange(1 << n, dtype=np.int64)
        sizes = np.zeros(1 << n, dtype=np.int32)
        for v in range(n):
            sizes += ((masks >> v) & 1).astype(np.int32)
        worst, worst_set = None, None
        for size in range(n + 1):
            sel = np.nonzero(sizes == size)[0]
            i = sel[np.argmin(e[sel])]
            m = _margin(int(e[i]), size, n, rho, d)
            if worst is None or m < worst:
                worst, worst_set = m, [v for v in range(n) if (int(i) >> v) & 1]
        return DensityVerdict(worst >= 0 and deg_ok, "exhaustive", deg_ok, worst_set, worst)
    rng = random.Random(seed)
    cands: list[list[int]] = [list(range(n))]
    order = sorted(range(n), key=lambda v: (g.degree(v), v))
    for size in range(1, n + 1):
        cands.append(order[:size])
    for _ in range(samples):
        size = rng.randint(1, n)
        cands.append(rng.sample(range(n), size))
    worst, worst_set = None, None
    for u in cands:
        us = set(u)
        e_u = sum(1 for a, b in g.edges if a in us and b in us)
        m = _margin(e_u, len(u), n, rho, d)
        if worst is None or m < worst:
            worst, worst_set = m, sorted(u)
    return DensityVerdict(worst >= 0 and deg_ok, "sampled", deg_ok, worst_set, worst)


# -- backstop --------------------------------------------------------------

@dataclass
class BackstopResult:
    t: int
    l: int
    components: list[int]
    edges: list[tuple[int, ...]]

    def to_dict(self) -> dict:
        return {"t": self.t, "l": self.l, "components": self.components, "edges": [list(e) for e in self.edges]}


def backstop_reduce(j: CliqueHypergraph) -> BackstopResult:
    """Spanning union of tight components with loose components merged greedily."""
    dec = decompose(j)
    chosen = backstop_components(j, dec)
    edges = sorted(e for ci in chosen for e in dec.tight[ci])
    return BackstopResult(len(chosen), loose_count(dec, chosen), chosen, edges)
