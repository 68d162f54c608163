"""Allocations of tiled guests to a reduced graph, and exact repairs of their loads.

An allocation maps every tile homomorphically into the reduced graph ``R``;
its load vector counts guest vertices per vertex of ``R``.  Repairs change
an allocation so that the loads move by a prescribed integer vector.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cliques import ComponentDecomposition, KSet
from .errors import (AllocationFailed, InsufficientReservoir, MissingWitness,
                     PartitionFailed, PreconditionError)
from .flexi import FlexiCertificate
from .flows import Flow, weights_to_flow
from .graph import (Graph, TiledGuest, blow_up, bottle_parameters, chromatic_number,
                    component_options, guest_profile)

__all__ = [
    "AllocationVector", "IncidenceMatrix", "BlowupHost", "SurjectivityWitness", "Flow",
    "apply_incidence", "naive_loads", "check_surjective", "build_surjective", "weights_to_flow",
    "flow_repair", "allocate_tight", "balanced_partition", "partition_deviation",
    "allocate_to_blowup", "BlowupEmbedding", "central_allocation",
]

Image = tuple[int, ...]
Slot = tuple[KSet, int]


@dataclass
class AllocationVector:
    """Tile index -> image tuple (the homomorphism, vertex-ordered)."""

    guest: TiledGuest
    target: Graph
    images: dict[int, Image] = field(default_factory=dict)

    def copy(self) -> "AllocationVector":
        return AllocationVector(self.guest, self.target, dict(self.images))

    def problems(self) -> list[str]:
        out = []
        for ti, img in self.images.items():
            tile = self.guest.tiles[ti]
            if len(img) != tile.n:
                out.append(f"tile {ti} image has wrong length")
                continue
            for u, v in tile.edges:
                if not self.target.has_edge(img[u], img[v]):
                    out.append(f"tile {ti} edge {u}-{v} is not preserved")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def counts(self) -> Counter:
        """Multiplicities of homomorphism classes keyed by (tile graph, image)."""
        out: Counter = Counter()
        for ti, img in self.images.items():
            tile = self.guest.tiles[ti]
            out[(tile.n, tuple(tile.sorted_edges()), img)] += 1
        return out

    def to_dict(self) -> list[dict]:
        return [{"tile": ti, "images": list(img)} for ti, img in sorted(self.images.items())]


@dataclass
class IncidenceMatrix:
    """Rows are target vertices, columns homomorphism classes; entry ``|theta^-1(v)|``."""

    n: int
    columns: list[tuple]  # (tile order, tile edges, image)
    matrix: np.ndarray

    @classmethod
    def for_classes(cls, n: int, columns: Sequence[tuple]) -> "IncidenceMatrix":
        mat = np.zeros((n, len(columns)), dtype=np.int64)
        for j, (_, _, img) in enumerate(columns):
            for v in img:
                mat[v, j] += 1
        return cls(n, list(columns), mat)

    @classmethod
    def for_allocation(cls, u: AllocationVector) -> "IncidenceMatrix":
        return cls.for_classes(u.target.n, sorted(u.counts()))

    def vector(self, u: AllocationVector) -> np.ndarray:
        counts = u.counts()
        index = {c: j for j, c in enumerate(self.columns)}
        vec = np.zeros(len(self.columns), dtype=np.int64)
        for key, mult in counts.items():
            if key not in index:
                raise PreconditionError("allocation uses a class missing from the matrix")
            vec[index[key]] = mult
        return vec


def apply_incidence(a: IncidenceMatrix, u: AllocationVector) -> list[int]:
    """Load vector ``A u`` over target vertices."""
    if a.n != u.target.n:
        raise PreconditionError("matrix rows differ from target order")
    return [int(x) for x in a.matrix @ a.vector(u)] if a.columns else [0] * a.n


def naive_loads(u: AllocationVector) -> list[int]:
    """Per-tile summation of loads, independent of the matrix route."""
    out = [0] * u.target.n
    for img in u.images.values():
        for v in img:
            out[v] += 1
    return out


def _loads(u: AllocationVector) -> list[int]:
    return apply_incidence(IncidenceMatrix.for_allocation(u), u)


# -- surjectivity ----------------------------------------------------------

@dataclass
class SurjectivityWitness:
    """Reserved tiles per slot ``(edge, vertex)``; every reserved image lies inside its edge."""

    s: int
    slots: dict[Slot, list[int]]

    def mass(self, u: AllocationVector, slot: Slot) -> int:
        _, v = slot
        return sum(u.images[ti].count(v) for ti in self.slots.get(slot, []))

    def to_dict(self) -> dict:
        return {"s": self.s, "slots": [{"edge": list(e), "vertex": v, "tiles": ts}
                                       for (e, v), ts in sorted(self.slots.items())]}


def _slot_order(edges: Sequence[KSet]) -> list[Slot]:
    return [(tuple(e), v) for e in sorted(edges) for v in e]


def _witness_problems(u: AllocationVector, edges: Sequence[KSet], s, wit: SurjectivityWitness) -> list[str]:
    out = []
    seen: set[int] = set()
    for slot in _slot_order(edges):
        e, v = slot
        for ti in wit.slots.get(slot, []):
            if ti in seen:
                out.append(f"tile {ti} reserved twice")
            seen.add(ti)
            if ti not in u.images or not set(u.images[ti]) <= set(e):
                out.append(f"tile {ti} in slot {slot} leaves the edge")
        if wit.mass(u, slot) < s:
            out.append(f"slot {slot} has mass {wit.mass(u, slot)} < {s}")
    return out


def check_surjective(u: AllocationVector, edges: Sequence[KSet], s, witness: SurjectivityWitness | None = None
                     ) -> tuple[bool, SurjectivityWitness | None]:
    """Decide ``(s, T)``-surjectivity by validating ``witness`` or by greedy slot filling.

    A greedy failure is not a proof that no decomposition exists.
    """
    if witness is not None:
        return not _witness_problems(u, edges, s, witness), witness
    slots: dict[Slot, list[int]] = {}
    free = sorted(u.images)
    for slot in _slot_order(edges):
        e, v = slot
        es = set(e)
        cands = [ti for ti in free if set(u.images[ti]) <= es and v in u.images[ti]]
        cands.sort(key=lambda ti: (-u.images[ti].count(v), ti))
        got, mass = [], 0
        for ti in cands:
            if mass >= s:
                break
            got.append(ti)
            mass += u.images[ti].count(v)
        if mass < s:
            return False, None
        slots[slot] = sorted(got)
        taken = set(got)
        free = [ti for ti in free if ti not in taken]
    return True, SurjectivityWitness(s, slots)


def _map_onto(tile: Graph, edge: KSet, heavy: int) -> Image:
    """Homomorphism of ``tile`` onto the clique ``edge`` sending its largest colour class to ``heavy``."""
    k = len(edge)
    opts = component_options(tile, k, "proper")
    if not opts.ords:
        raise PreconditionError(f"tile is not {k}-colourable")
    best = max(opts.ords, key=lambda o: (o[0], o))
    col = opts.witness(best)
    others = [x for x in edge if x != heavy]
    target = {1: heavy, **{c: others[c - 2] for c in range(2, k + 1)}}
    return tuple(target[c] for c in col)


def build_surjective(h: TiledGuest, r: Graph, edges: Sequence[KSet], s: int
                     ) -> tuple[AllocationVector, SurjectivityWitness]:
    """Greedy ``(s, T)``-surjective allocation: each slot ``(e, v)`` takes fresh tiles until ``v`` holds ``s``."""
    if not edges:
        raise PreconditionError("tight component has no edges")
    for e in edges:
        if any(not r.has_edge(a, b) for i, a in enumerate(e) for b in e[i + 1:]):
            raise PreconditionError(f"{e} is not a clique of the reduced graph")
    u = AllocationVector(h, r)
    slots: dict[Slot, list[int]] = {}
    pool = list(range(len(h.tiles)))
    deficit = 0
    for slot in _slot_order(edges):
        e, v = slot
        got, mass = [], 0
        while mass < s and pool:
            ti = pool.pop(0)
            img = _map_onto(h.tiles[ti], e, v)
            u.images[ti] = img
            got.append(ti)
            mass += img.count(v)
        if mass < s:
            deficit += s - mass
        slots[slot] = got
    if deficit:
        raise PreconditionError(f"guest too small: slots short by {deficit} vertices", deficit=deficit)
    first = tuple(sorted(edges)[0])
    for ti in pool:
        u.images[ti] = _map_onto(h.tiles[ti], first, first[0])
    return u, SurjectivityWitness(s, slots)


# -- flow repair -----------------------------------------------------------

def _reach_graph(dec: ComponentDecomposition, comp: int, cls: Sequence[int]) -> tuple[Graph, dict, list[int]]:
    verts = sorted(cls)
    pos = {v: i for i, v in enumerate(verts)}
    pairs = {key: wit for key, wit in dec.reach_edges[comp].items() if key[0] in pos and key[1] in pos}
    g = Graph.from_edges(len(verts), [(pos[x], pos[y]) for x, y in pairs])
    return g, pairs, verts


def flow_repair(u: AllocationVector, witness: SurjectivityWitness, dec: ComponentDecomposition, comp: int,
                cls: Sequence[int], b: Sequence[int], s: int
                ) -> tuple[AllocationVector, SurjectivityWitness]:
    """Allocation ``w`` with ``A(u - w) = b`` for ``b`` supported on one reachability class.

    Each unit of ``b`` travels along a flow in the reachability graph.  An
    edge ``x x'`` of that graph comes with cliques ``e, f`` where ``e - f =
    {x}`` and ``f - e = {x'}``; a reserved tile inside ``e`` can send some
    vertices from ``x`` to ``x'`` because ``x'`` is adjacent to all of
    ``e - {x}``.  Reserved tiles are consumed lowest index first and the
    returned witness keeps the untouched ones.
    """
    r = u.target
    n_r = r.n
    if len(b) != n_r:
        raise PreconditionError("demand length differs from reduced graph order")
    if sum(b) != 0:
        raise PreconditionError("demand must sum to zero")
    cset = set(cls)
    if any(b[v] for v in range(n_r) if v not in cset):
        raise PreconditionError("demand is not supported on the reachability class")
    if max((abs(x) for x in b), default=0) > s:
        raise PreconditionError(f"demand exceeds the bound s={s}")
    w_max = u.guest.max_tile
    if n_r * (n_r * s + w_max) > Fraction(witness.s, 2):
        raise PreconditionError(f"r(rs+w) = {n_r * (n_r * s + w_max)} exceeds s'/2 = {Fraction(witness.s, 2)}")
    out = u.copy()
    slots = {k: list(v) for k, v in witness.slots.items()}
    if not any(b):
        return out, SurjectivityWitness(witness.s // 2, slots)
    g, pairs, verts = _reach_graph(dec, comp, cls)
    # gain at v is -b(v): flow inflow equals gain
    flow = weights_to_flow(g, [-b[v] for v in verts])
    used: set[int] = set()
    for pu, pv, amount in flow.positive_edges():
        x, y = verts[pu], verts[pv]
        key = (min(x, y), max(x, y))
        e, f = pairs[key]
        if x not in e:
            e, f = f, e
        slot = (tuple(e), x)
        left = amount
        for ti in list(slots.get(slot, [])):
            if not left:
                break
            img = list(out.images[ti])
            for i, c in enumerate(img):
                if c == x and left:
                    img[i] = y
                    left -= 1
            out.images[ti] = tuple(img)
            slots[slot].remove(ti)
            used.add(ti)
        if left:
            raise InsufficientReservoir(f"slot {slot} ran out with {left} vertices still to move",
                                        slot=[list(e), x], remaining=left)
    half = witness.s // 2
    return out, SurjectivityWitness(half, slots)


def allocate_tight(u1: AllocationVector, wit1: SurjectivityWitness, cert: FlexiCertificate, tile_offset: int,
                   dec: ComponentDecomposition, comp: int, e0: KSet, c: Sequence[int], s: int
                   ) -> tuple[AllocationVector, SurjectivityWitness]:
    """Allocation ``w`` with ``A(u - w) = c`` where ``u = u1 + u2`` and ``u2`` maps the flexi part onto ``e0``.

    ``u1`` allocates the guest's tiles ``0..tile_offset-1``; the certificate's
    tiles follow and are coloured by its central colouring (colour ``i`` to
    ``e0[i-1]``).  The demand is split per reachability class: inside each
    class it is zero-sum after moving the class total to one vertex of
    ``e0``; those totals are absorbed by recolouring the flexi part.
    """
    r = u1.target
    if sum(c) != 0:
        raise PreconditionError("demand must sum to zero")
    if len(c) != r.n:
        raise PreconditionError("demand length differs from reduced graph order")
    tight_verts = dec.tight_vertices(comp)
    if any(c[v] for v in range(r.n) if v not in tight_verts):
        raise PreconditionError("demand is not supported on the tight component")
    if max((abs(x) for x in c), default=0) > s:
        raise PreconditionError(f"demand exceeds the bound s={s}")
    if cert.p != 0:
        raise PreconditionError("exact repair needs an exact flexi certificate")
    if cert.k != len(e0) or tuple(sorted(e0)) not in {tuple(e) for e in dec.tight[comp]}:
        raise PreconditionError("e0 must be an edge of the tight component with k vertices")
    classes = dec.reach[comp]
    k = len(e0)
    if len(classes) > k:
        raise PreconditionError(f"{len(classes)} reachability classes exceed k={k}")
    w_max = max(u1.guest.max_tile, cert.guest.max_tile)
    if r.n * (r.n * r.n * s + w_max) > Fraction(wit1.s, 2 ** k):
        raise PreconditionError("r(r^2 s + w) exceeds s'/2^k")
    demand_e0 = [0] * k
    parts = []
    for cls in classes:
        total = sum(c[v] for v in cls)
        anchor = next((i for i, x in enumerate(e0) if x in set(cls)), None)
        if anchor is None:
            if total:
                raise PreconditionError("a reachability class with nonzero total misses e0")
            anchor_v = None
        else:
            anchor_v = e0[anchor]
            demand_e0[anchor] += total
        bj = [c[v] if v in set(cls) else 0 for v in range(r.n)]
        if anchor_v is not None:
            bj[anchor_v] -= total
        parts.append((cls, bj))
    cur, wit = u1.copy(), wit1
    for cls, bj in parts:
        bound = max((abs(x) for x in bj), default=0)
        cur, wit = flow_repair(cur, wit, dec, comp, cls, bj, max(bound, 1))
    d = tuple(demand_e0)
    recol = cert.witnesses.get(d)
    if recol is None:
        raise MissingWitness(f"flexi certificate has no witness for demand {d}", demand=list(d))
    # combined guest: u1 tiles then certificate tiles
    guest = u1.guest + cert.guest
    w = AllocationVector(guest, r, dict(cur.images))
    u = AllocationVector(guest, r, dict(u1.images))
    offs = cert.guest.offsets
    for j, tile in enumerate(cert.guest.tiles):
        seg_c = cert.central.assignment[offs[j]:offs[j] + tile.n]
        seg_w = recol.assignment[offs[j]:offs[j] + tile.n]
        u.images[tile_offset + j] = tuple(e0[x - 1] for x in seg_c)
        w.images[tile_offset + j] = tuple(e0[x - 1] for x in seg_w)
    return w, wit


def central_allocation(u1: AllocationVector, cert: FlexiCertificate, tile_offset: int, e0: KSet) -> AllocationVector:
    """``u1 + u2`` with the flexi part mapped by its central colouring onto ``e0``."""
    guest = u1.guest + cert.guest
    u = AllocationVector(guest, u1.target, dict(u1.images))
    offs = cert.guest.offsets
    for j, tile in enumerate(cert.guest.tiles):
        seg = cert.central.assignment[offs[j]:offs[j] + tile.n]
        u.images[tile_offset + j] = tuple(e0[x - 1] for x in seg)
    return u


# -- balanced partition ----------------------------------------------------

def partition_deviation(xs: Sequence[Sequence[int]], parts: Sequence[Sequence[int]]) -> Fraction:
    """Max-norm distance of each part's sum from the average ``x / s``."""
    if not xs:
        return Fraction(0)
    dim = len(xs[0])
    total = [sum(x[j] for x in xs) for j in range(dim)]
    s = len(parts)
    worst = Fraction(0)
    for part in parts:
        for j in range(dim):
            dev = abs(Fraction(sum(xs[i][j] for i in part)) - Fraction(total[j], s))
            worst = max(worst, dev)
    return worst


def _greedy_balance(xs, s, order) -> list[list[int]]:
    dim = len(xs[0])
    total = [sum(x[j] for x in xs) for j in range(dim)]
    sums = [[0] * dim for _ in range(s)]
    parts: list[list[int]] = [[] for _ in range(s)]
    for i in order:
        x = xs[i]
        # the part whose worst relative overshoot stays smallest
        best = min(range(s), key=lambda q: (max(s * (sums[q][j] + x[j]) - total[j] for j in range(dim)), q))
        parts[best].append(i)
        for j in range(dim):
            sums[best][j] += x[j]
    return parts


def balanced_partition(xs: Sequence[Sequence[int]], s: int, seed: int = 0, retries: int = 32,
                       xi: Fraction | None = None) -> list[list[int]]:
    """Split indices of ``xs`` into ``s`` parts, each summing to ``x/s`` within ``n/s^2`` in max-norm.

    Seeded random assignments are tried first; a greedy balancing pass over
    the vectors in decreasing size is the fallback.
    """
    if s < 1:
        raise PreconditionError("need at least one part")
    if not xs:
        return [[] for _ in range(s)]
    n = sum(sum(x) for x in xs)
    if any(min(x) < 0 for x in xs):
        raise PreconditionError("vectors must be nonnegative")
    if xi is not None and any(max(x) > xi * n for x in xs):
        raise PreconditionError("a vector exceeds xi * n")
    bound = Fraction(n, s * s)
    rng = random.Random(seed)
    best_dev = None
    idx = list(range(len(xs)))
    for _ in range(retries):
        rng.shuffle(idx)
        parts = [sorted(idx[q::s]) for q in range(s)]
        dev = partition_deviation(xs, parts)
        if best_dev is None or dev < best_dev:
            best_dev = dev
        if dev <= bound:
            return parts
    order = sorted(range(len(xs)), key=lambda i: (-sum(xs[i]), i))
    parts = [sorted(p) for p in _greedy_balance(xs, s, order)]
    dev = partition_deviation(xs, parts)
    if dev <= bound:
        return parts
    if dev < best_dev:
        best_dev = dev
    raise PartitionFailed(f"best deviation {best_dev} exceeds n/s^2 = {bound}", deviation=str(best_dev))


# -- blow-up embedding -----------------------------------------------------

@dataclass(frozen=True)
class BlowupHost:
    reduced: Graph
    cluster_sizes: tuple[int, ...]

    @classmethod
    def uniform(cls, reduced: Graph, m: int) -> "BlowupHost":
        return cls(reduced, tuple([m] * reduced.n))

    @property
    def starts(self) -> list[int]:
        out = [0]
        for size in self.cluster_sizes:
            out.append(out[-1] + size)
        return out

    def graph(self) -> Graph:
        return blow_up(self.reduced, list(self.cluster_sizes))


def _bottle_copies(r: Graph, chi: Fraction) -> list[list[list[int]]]:
    """Parts of each bottle copy in ``r``, small part first; error unless ``r`` is a union of bottles."""
    k, a, b = bottle_parameters(chi)
    want = sorted([a] + [b] * (k - 1))
    copies = []
    for comp in r.components():
        cs = set(comp)
        # in a complete multipartite graph, parts are the classes of equal non-neighbourhood
        groups: dict[frozenset, list[int]] = {}
        for v in comp:
            groups.setdefault(frozenset(cs - r.adj[v]), []).append(v)
        parts = sorted(groups.values(), key=lambda p: (len(p), p))
        if sorted(len(p) for p in parts) != want:
            raise PreconditionError("reduced graph is not a union of bottle copies")
        for i, p in enumerate(parts):
            for q in parts[i + 1:]:
                if any(not r.has_edge(x, y) for x in p for y in q):
                    raise PreconditionError("reduced graph is not a union of bottle copies")
            if any(r.has_edge(x, y) for x in p for y in p if x < y):
                raise PreconditionError("reduced graph is not a union of bottle copies")
        if a == b:
            copies.append(parts)
        else:
            small = next(p for p in parts if len(p) == a)
            copies.append([small] + [p for p in parts if p is not small])
    return copies


@dataclass
class BlowupEmbedding:
    allocation: AllocationVector
    vertex_map: tuple[int, ...]
    route: str

    def to_dict(self) -> dict:
        return {"route": self.route, "map": list(self.vertex_map), "allocation": self.allocation.to_dict()}


def _tile_options(tile: Graph, k: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every achievable class-size vector of a proper ``k``-colouring with a witness."""
    opts = component_options(tile, k, "proper")
    return [(o, opts.witness(o)) for o in opts.ords]


def _paper_route(tiles, k, caps, n_copies, seed):
    """Recolour towards the bottle proportions, split evenly across copies, check capacities."""
    n = sum(t.n for t in tiles)
    small_share = Fraction(caps[0], sum(caps))
    options = [_tile_options(t, k) for t in tiles]
    # start from colourings with the smallest first class, then raise it towards the target
    choice = [min(range(len(o)), key=lambda i: (o[i][0][0], [-x for x in o[i][0]])) for o in options]
    target = small_share * n
    first = sum(options[i][choice[i]][0][0] for i in range(len(tiles)))
    for i in range(len(tiles)):
        if first >= target:
            break
        cur = options[i][choice[i]][0]
        better = [j for j, (o, _) in enumerate(options[i]) if o[0] > cur[0] and first + o[0] - cur[0] <= target + tiles[i].n]
        if better:
            j = min(better, key=lambda j: (abs(first + options[i][j][0][0] - cur[0] - target), j))
            first += options[i][j][0][0] - cur[0]
            choice[i] = j
    # balance classes 2..k by permuting the remaining colours per tile
    totals = [0] * k
    final = []
    for i in sorted(range(len(tiles)), key=lambda i: -tiles[i].n):
        o, col = options[i][choice[i]]
        rest = sorted(range(1, k), key=lambda c: -o[c])
        slots = sorted(range(1, k), key=lambda c: totals[c])
        perm = {0: 0}
        for src, dst in zip(rest, slots):
            perm[src] = dst
        vec = [0] * k
        for c in range(k):
            vec[perm[c]] = o[c]
        for c in range(k):
            totals[c] += vec[c]
        final.append((i, tuple(vec), tuple(perm[x - 1] + 1 for x in col)))
    final.sort()
    vecs = [v for _, v, _ in final]
    parts = balanced_partition(vecs, n_copies, seed=seed)
    parts = _repair_capacities(vecs, [list(p) for p in parts], caps)
    if parts is None:
        return None
    return [(parts_index, cols) for parts_index, cols in
            ((q, [(i, final[i][2]) for i in parts[q]]) for q in range(n_copies))]


def _repair_capacities(vecs, parts, caps, max_moves: int = 10_000):
    """Move single tiles out of over-full copies into copies with room; ``None`` if stuck."""
    k = len(caps)
    sums = [[sum(vecs[i][c] for i in part) for c in range(k)] for part in parts]

    def excess(q):
        return sum(max(0, sums[q][c] - caps[c]) for c in range(k))

    for _ in range(max_moves):
        bad = [q for q in range(len(parts)) if excess(q)]
        if not bad:
            return [sorted(p) for p in parts]
        q = bad[0]
        moved = False
        for i in sorted(parts[q], key=lambda i: -sum(vecs[i])):
            for r in sorted(range(len(parts)), key=lambda r: sum(sums[r])):
                if r == q:
                    continue
                if any(sums[r][c] + vecs[i][c] > caps[c] for c in range(k)):
                    continue
                before = excess(q)
                for c in range(k):
                    sums[q][c] -= vecs[i][c]
                if excess(q) < before:
                    parts[q].remove(i)
                    parts[r].append(i)
                    for c in range(k):
                        sums[r][c] += vecs[i][c]
                    moved = True
                    break
                for c in range(k):
                    sums[q][c] += vecs[i][c]
            if moved:
                break
        if not moved:
            return None
    return None


def _greedy_route(tiles, k, caps, n_copies):
    """Largest tiles first, each into the copy and colouring whose sorted relative slacks are lexicographically largest."""
    options = [_tile_options(t, k) for t in tiles]
    load = [[0] * k for _ in range(n_copies)]
    out = [[] for _ in range(n_copies)]
    for i in sorted(range(len(tiles)), key=lambda i: (-tiles[i].n, i)):
        best = None
        for q in range(n_copies):
            for o, col in options[i]:
                if any(load[q][c] + o[c] > caps[c] for c in range(k)):
                    continue
                slack = sorted(Fraction(caps[c] - load[q][c] - o[c], caps[c]) for c in range(k))
                key = (slack, -q)
                if best is None or key > best[0]:
                    best = (key, q, o, col)
        if best is None:
            return None
        _, q, o, col = best
        for c in range(k):
            load[q][c] += o[c]
        out[q].append((i, col))
    return list(enumerate(out))


def allocate_to_blowup(h: TiledGuest, host: BlowupHost, chi: Fraction | int, rho: Fraction | int = 0,
                       seed: int = 0) -> BlowupEmbedding:
    """Embed ``h`` into the blow-up of a union of bottle graphs with crit ``chi``.

    Each tile is properly coloured with ``ceil(chi)`` colours, the colourings
    are adjusted so the first class carries the bottle's small-part share,
    tiles are split across copies by :func:`balanced_partition` and colour
    class ``i`` goes to part ``i`` of its copy.  If the capacities fail, a
    greedy best-fit placement is tried before giving up.
    """
    chi = Fraction(chi)
    k, a, b = bottle_parameters(chi)
    sizes = set(host.cluster_sizes)
    if len(sizes) != 1:
        raise PreconditionError("clusters must have uniform size")
    m = sizes.pop()
    copies = _bottle_copies(host.reduced, chi)
    host_n = sum(host.cluster_sizes)
    if h.n > (1 - Fraction(rho)) * host_n:
        raise PreconditionError(f"guest order {h.n} exceeds (1-rho) times host order {host_n}")
    if h.n == 0:
        return BlowupEmbedding(AllocationVector(h, host.reduced), (), "empty")
    prof = guest_profile(h)
    if prof.crit > chi:
        raise PreconditionError(f"crit(H) = {prof.crit} exceeds chi = {chi}")
    if any(chromatic_number(t) > k for t in h.tiles):
        raise PreconditionError(f"a tile needs more than {k} colours")
    caps = [a * m] + [b * m] * (k - 1)
    route = "balanced"
    plan = _paper_route(list(h.tiles), k, caps, len(copies), seed)
    if plan is None:
        route = "greedy"
        plan = _greedy_route(list(h.tiles), k, caps, len(copies))
    if plan is None:
        raise AllocationFailed("no placement respects the cluster capacities")
    # spread each colour class over the clusters of its part
    alloc = AllocationVector(h, host.reduced)
    starts = host.starts
    fill = [0] * host.reduced.n
    vmap = [-1] * h.n
    offs = h.offsets
    for q, assigned in plan:
        parts = copies[q]
        for ti, col in assigned:
            img = []
            for local, c in enumerate(col):
                part = parts[c - 1]
                cluster = next((x for x in part if fill[x] < m), None)
                if cluster is None:
                    raise AllocationFailed(f"part {c} of copy {q} overflowed")
                img.append(cluster)
                vmap[offs[ti] + local] = starts[cluster] + fill[cluster]
                fill[cluster] += 1
            alloc.images[ti] = tuple(img)
    if alloc.problems():
        raise AllocationFailed("constructed allocation is not a homomorphism")
    return BlowupEmbedding(alloc, tuple(vmap), route)
