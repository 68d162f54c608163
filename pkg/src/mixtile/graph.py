"""Graphs, tiled guests, colourings and chromatic invariants."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

from .errors import ParseError, PreconditionError
from .ordspace import ComponentOptions, SumsetDP, _components

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A finite simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError("negative vertex count")
        clean = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise PreconditionError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"edge {e} out of range for n={self.n}")
            clean.add(_norm(u, v))
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset(_norm(int(u), int(v)) for u, v in edges))

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nb: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    @property
    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def components(self) -> list[list[int]]:
        return _components(self.n, self.adj)

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled to ``0..len(vertices)-1`` in the given order."""
        idx = {v: i for i, v in enumerate(vertices)}
        es = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        return Graph.from_edges(len(vertices), es)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def remove_vertices(self, gone: Iterable[int]) -> "Graph":
        gone = set(gone)
        return self.induced([v for v in range(self.n) if v not in gone])

    def remove_edges(self, gone: Iterable[Edge]) -> "Graph":
        drop = {_norm(*e) for e in gone}
        return Graph(self.n, frozenset(e for e in self.edges if e not in drop))

    def complement(self) -> "Graph":
        es = [(u, v) for u, v in itertools.combinations(range(self.n), 2) if v not in self.adj[u]]
        return Graph.from_edges(self.n, es)

    def canonical_key(self) -> tuple:
        """Exact isomorphism-invariant key; exhaustive, so only for small graphs."""
        best = None
        for perm in itertools.permutations(range(self.n)):
            key = tuple(sorted(_norm(perm[u], perm[v]) for u, v in self.edges))
            if best is None or key < best:
                best = key
        return (self.n, best or ())

    def to_text(self) -> str:
        lines = [f"n {self.n}"] + [f"e {u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# -- constructors ---------------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise PreconditionError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    parts = []
    start = 0
    for s in sizes:
        parts.append(range(start, start + s))
        start += s
    es = []
    for a, b in itertools.combinations(parts, 2):
        es.extend((u, v) for u in a for v in b)
    return Graph.from_edges(start, es)


def complete_bipartite(a: int, b: int) -> Graph:
    return complete_multipartite([a, b])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def disjoint_union(graphs: Iterable[Graph]) -> Graph:
    es = []
    off = 0
    for g in graphs:
        es.extend((u + off, v + off) for u, v in g.edges)
        off += g.n
    return Graph.from_edges(off, es)


def blow_up(r: Graph, sizes: Sequence[int] | int) -> Graph:
    """Replace vertex ``i`` of ``r`` by an independent set of ``sizes[i]`` vertices."""
    if isinstance(sizes, int):
        sizes = [sizes] * r.n
    starts = list(itertools.accumulate([0] + list(sizes)))
    es = []
    for u, v in r.edges:
        es.extend((a, b) for a in range(starts[u], starts[u + 1]) for b in range(starts[v], starts[v + 1]))
    return Graph.from_edges(starts[-1], es)


def bottle_graph(k: int, a: int, b: int) -> Graph:
    """Complete ``k``-partite graph with one part of size ``a`` and ``k-1`` parts of size ``b``."""
    if k < 2:
        raise PreconditionError("bottle graphs need k >= 2")
    if not 1 <= a <= b:
        raise PreconditionError(f"need 1 <= a <= b, got a={a}, b={b}")
    if math.gcd(a, b) != 1:
        raise PreconditionError(f"a={a} and b={b} are not coprime")
    return complete_multipartite([a] + [b] * (k - 1))


def bottle_parameters(chi: Fraction) -> tuple[int, int, int]:
    """Part count and part sizes ``(k, a, b)`` of the bottle graph with crit ``chi``.

    ``chi = (k-1) + a/b`` with ``a <= b`` coprime; an integer ``chi`` gives
    ``a = b = 1``, i.e. the complete graph on ``chi`` vertices.
    """
    chi = Fraction(chi)
    if chi <= 1:
        raise PreconditionError("chi must exceed 1")
    k = math.ceil(chi)
    frac = chi - (k - 1)
    return k, frac.numerator, frac.denominator


def bottle_for_chi(chi: Fraction) -> Graph:
    k, a, b = bottle_parameters(chi)
    return bottle_graph(k, a, b)


# -- file formats ---------------------------------------------------------

def _parse_block(lines: list[tuple[int, str]]) -> Graph:
    n = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, text in lines:
        parts = text.split()
        if parts[0] == "n":
            if len(parts) != 2 or not parts[1].lstrip("-").isdigit() or int(parts[1]) < 0:
                raise ParseError(f"malformed header {text!r}", lineno)
            if n is not None:
                raise ParseError("duplicate header", lineno)
            n = int(parts[1])
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge before header", lineno)
            if len(parts) != 3 or not all(p.lstrip("-").isdigit() for p in parts[1:]):
                raise ParseError(f"malformed edge line {text!r}", lineno)
            u, v = int(parts[1]), int(parts[2])
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex index out of range in {text!r}", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            e = _norm(u, v)
            if e in seen:
                raise ParseError(f"duplicate edge {u} {v}", lineno)
            seen.add(e)
            edges.append(e)
        else:
            raise ParseError(f"unrecognised line {text!r}", lineno)
    if n is None:
        raise ParseError("missing 'n <count>' header")
    return Graph.from_edges(n, edges)


def _content_lines(text: str | bytes) -> list[tuple[int, str]]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append((i, line))
    return out


def parse_graph(text: str | bytes) -> Graph:
    """Parse the ``n``/``e`` edge-list format."""
    lines = _content_lines(text)
    for lineno, line in lines:
        if line.split()[0] == "tile":
            raise ParseError("'tile' line in a plain graph file", lineno)
    return _parse_block(lines)


def parse_guest(text: str | bytes) -> "TiledGuest":
    """Parse a guest file: ``tile`` lines open blocks with tile-local indices.

    A file with no ``tile`` line is read as a single-tile guest.
    """
    lines = _content_lines(text)
    if not any(line.split()[0] == "tile" for _, line in lines):
        return TiledGuest((_parse_block(lines),))
    if lines[0][1].split()[0] != "tile":
        raise ParseError("content before the first 'tile' line", lines[0][0])
    blocks: list[list[tuple[int, str]]] = []
    for lineno, line in lines:
        parts = line.split()
        if parts[0] == "tile":
            if len(parts) > 2 or (len(parts) == 2 and not parts[1].isdigit()):
                raise ParseError(f"malformed tile line {line!r}", lineno)
            blocks.append([])
            if len(parts) == 2:
                # "tile <count>" repeats the following block
                blocks[-1].append((lineno, f"__repeat {parts[1]}"))
        else:
            blocks[-1].append((lineno, line))
    tiles: list[Graph] = []
    for block in blocks:
        reps = 1
        if block and block[0][1].startswith("__repeat"):
            reps = int(block[0][1].split()[1])
            block = block[1:]
        g = _parse_block(block)
        tiles.extend([g] * reps)
    return TiledGuest(tuple(tiles))


def guest_to_text(h: "TiledGuest") -> str:
    out = []
    for t in h.tiles:
        out.append("tile")
        out.append(t.to_text().rstrip("\n"))
    return "\n".join(out) + "\n"


# -- tiled guests ---------------------------------------------------------

@dataclass(frozen=True)
class TiledGuest:
    """A guest graph given as an ordered list of vertex-disjoint tiles."""

    tiles: tuple[Graph, ...]

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))

    @classmethod
    def of(cls, tiles: Iterable[Graph]) -> "TiledGuest":
        return cls(tuple(tiles))

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate([0] + [t.n for t in self.tiles]))[:-1]

    @property
    def n(self) -> int:
        return sum(t.n for t in self.tiles)

    @property
    def max_tile(self) -> int:
        return max((t.n for t in self.tiles), default=0)

    def __len__(self) -> int:
        return len(self.tiles)

    @cached_property
    def graph(self) -> Graph:
        return disjoint_union(self.tiles)

    def tile_vertices(self, i: int) -> range:
        return range(self.offsets[i], self.offsets[i] + self.tiles[i].n)

    def sub(self, indices: Iterable[int]) -> "TiledGuest":
        return TiledGuest(tuple(self.tiles[i] for i in indices))

    def __add__(self, other: "TiledGuest") -> "TiledGuest":
        return TiledGuest(self.tiles + other.tiles)

    def components(self) -> list[tuple[int, list[int]]]:
        """Connected components as ``(tile index, global vertex list)``."""
        out = []
        for i, t in enumerate(self.tiles):
            off = self.offsets[i]
            for comp in t.components():
                out.append((i, [off + v for v in comp]))
        return out


# -- colourings -----------------------------------------------------------

@dataclass(frozen=True)
class Colouring:
    """Vertex colours in ``1..k``; ``assignment[v]`` is the colour of ``v``."""

    assignment: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if any(not 1 <= c <= self.k for c in self.assignment):
            raise PreconditionError("colour out of range")

    @property
    def ord(self) -> tuple[int, ...]:
        counts = [0] * self.k
        for c in self.assignment:
            counts[c - 1] += 1
        return tuple(counts)

    def is_proper(self, g: Graph) -> bool:
        return all(self.assignment[u] != self.assignment[v] for u, v in g.edges)

    def is_topological(self, g: Graph) -> bool:
        return all(self.assignment[u] == self.assignment[v] for u, v in g.edges)

    def permuted(self, perm: dict[int, int] | Sequence[int]) -> "Colouring":
        """Recolour ``c`` as ``perm[c]`` (dict) or ``perm[c-1]`` (sequence, 1-based values)."""
        if isinstance(perm, dict):
            return Colouring(tuple(perm.get(c, c) for c in self.assignment), self.k)
        return Colouring(tuple(perm[c - 1] for c in self.assignment), self.k)


def enumerate_proper_colourings(g: Graph, k: int) -> Iterator[Colouring]:
    """All proper ``k``-colourings in lexicographic order of assignment vectors."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    n = g.n
    col = [0] * n
    adj = g.adj

    def rec(v: int) -> Iterator[Colouring]:
        if v == n:
            yield Colouring(tuple(col), k)
            return
        for c in range(1, k + 1):
            if all(col[u] != c for u in adj[v] if u < v):
                col[v] = c
                yield from rec(v + 1)
        col[v] = 0

    yield from rec(0)


def _colourable(g: Graph, k: int) -> bool:
    """Backtracking test with highest-degree-first branching and symmetry breaking."""
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    col = {}

    def rec(i: int, used: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        banned = {col[u] for u in g.adj[v] if u in col}
        for c in range(1, min(used + 1, k) + 1):
            if c not in banned:
                col[v] = c
                if rec(i + 1, max(used, c)):
                    return True
                del col[v]
        return False

    return rec(0, 0)


def chromatic_number(g: Graph) -> int:
    if g.n == 0:
        return 0
    best = 1
    for comp in g.components():
        sub = g.induced(comp)
        k = max(best, 1)
        while not _colourable(sub, k):
            k += 1
        best = max(best, k)
    return best


class _Infinity:
    """Sentinel for gcd over an empty set."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()


@dataclass(frozen=True)
class ChromaticProfile:
    chi: int
    alpha: Fraction
    crit: Fraction
    d_set: frozenset[int]
    gcd_chi: int | _Infinity
    gcd_c: int
    max_degree: int | None = None
    max_tile: int | None = None
    tile_count: int | None = None

    def to_dict(self) -> dict:
        out = {
            "chi": self.chi,
            "alpha": str(self.alpha),
            "crit": str(self.crit),
            "dSet": sorted(self.d_set),
            "gcdChi": str(self.gcd_chi) if self.gcd_chi is INFINITY else self.gcd_chi,
            "gcdC": self.gcd_c,
        }
        if self.max_degree is not None:
            out.update(maxDegree=self.max_degree, maxTile=self.max_tile, tileCount=self.tile_count)
        return out


def crit_from(chi: int, alpha: Fraction) -> Fraction:
    """Critical chromatic number from the chromatic number and ``alpha``."""
    if chi <= 1:
        return Fraction(chi)
    return (chi - 1) + alpha / (Fraction(1, chi - 1) * (1 - alpha))


def _profile_from_vectors(chi: int, n: int, vectors: Iterable[tuple[int, ...]], orders: list[int]) -> ChromaticProfile:
    vectors = list(vectors)
    alpha = Fraction(min(min(v) for v in vectors), n)
    if chi >= 2:
        d_set = frozenset(abs(v[0] - v[1]) for v in vectors)
    else:
        d_set = frozenset({n})  # only one class; the second is empty
    nz = [d for d in d_set if d]
    gcd_chi = reduce(math.gcd, nz) if nz else INFINITY
    return ChromaticProfile(
        chi=chi,
        alpha=alpha,
        crit=crit_from(chi, alpha),
        d_set=d_set,
        gcd_chi=gcd_chi,
        gcd_c=reduce(math.gcd, orders),
    )


_OPTIONS_CACHE: dict[tuple, ComponentOptions] = {}


def component_options(g: Graph, k: int, kind: str = "proper") -> ComponentOptions:
    """Cached :class:`ComponentOptions` for ``g`` (keyed by its exact edge set)."""
    key = (g.n, tuple(g.sorted_edges()), k, kind)
    opts = _OPTIONS_CACHE.get(key)
    if opts is None:
        if len(_OPTIONS_CACHE) > 4096:
            _OPTIONS_CACHE.clear()
        opts = ComponentOptions(g.n, g.edges, k, kind)
        _OPTIONS_CACHE[key] = opts
    return opts


def guest_sumset(h: TiledGuest, k: int, kind: str = "proper") -> tuple[SumsetDP, list[tuple[list[int], ComponentOptions]]]:
    """Sumset DP over the connected components of ``h``."""
    parts = []
    for _, comp in h.components():
        sub = h.graph.induced(comp)
        parts.append((comp, component_options(sub, k, kind)))
    dp = SumsetDP([opts.ords for _, opts in parts], k)
    return dp, parts


def chromatic_profile(f: Graph) -> ChromaticProfile:
    if f.n == 0:
        raise PreconditionError("empty graph has no chromatic profile")
    return guest_profile(TiledGuest((f,)), _extras=False)


def guest_profile(h: TiledGuest, _extras: bool = True) -> ChromaticProfile:
    """Profile of the disjoint union of the tiles, plus degree and tile statistics."""
    if h.n == 0:
        raise PreconditionError("empty guest")
    g = h.graph
    chi = chromatic_number(g)
    dp, _ = guest_sumset(h, chi, "proper")
    comps = g.components()
    prof = _profile_from_vectors(chi, g.n, dp.vectors(), [len(c) for c in comps])
    if not _extras:
        return prof
    return ChromaticProfile(**{**prof.__dict__, "max_degree": g.max_degree,
                               "max_tile": h.max_tile, "tile_count": len(h)})


def is_fcr(f: Graph) -> bool:
    p = chromatic_profile(f)
    if p.chi == 2:
        return p.gcd_chi == 1 and p.gcd_c == 1
    return p.chi >= 3 and p.gcd_chi == 1


def difference_set_topological(f: Graph) -> frozenset[int]:
    """Class-size differences over topological 2-colourings (components monochromatic)."""
    opts = component_options(f, 2, "topological")
    return frozenset(abs(a - b) for a, b in opts.ords)
