"""Flexi-chromatic certificates and the constructions that produce them.

A tiled guest ``W`` is ``(k, s, p)``-flexi (proper or topological) with
central colouring ``phi`` when every demand vector ``d`` (integer, summing
to zero, max-norm at most ``s``) has a colouring ``phi'`` of the same kind
with ``||ord(phi) - ord(phi') - d||_inf <= p``.  Certificates store one
witness per demand vector.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (ConstructionFailed, MissingWitness, PreconditionError,
                     UndecidedError)
from .flows import weights_to_flow
from .graph import (Colouring, Graph, TiledGuest, chromatic_number, chromatic_profile,
                    component_options, complete_graph, guest_profile, guest_sumset, is_fcr)
from .oracles import subset_sum_dp

KINDS = ("proper", "topological")
DEFAULT_BUDGET = 10_000_000

Vec = tuple[int, ...]


def demand_vectors(k: int, s: int) -> list[Vec]:
    """Integer vectors of length ``k`` summing to zero with max-norm at most ``s``."""
    if k == 1:
        return [(0,)]
    out = []
    for head in itertools.product(range(-s, s + 1), repeat=k - 1):
        last = -sum(head)
        if -s <= last <= s:
            out.append(head + (last,))
    out.sort(key=lambda d: (max(map(abs, d)), d))
    return out


def _sub(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def _norm(v: Sequence[int]) -> int:
    return max((abs(x) for x in v), default=0)


def _kind_ok(col: Colouring, g: Graph, kind: str) -> bool:
    return col.is_proper(g) if kind == "proper" else col.is_topological(g)


@dataclass
class FlexiCertificate:
    guest: TiledGuest
    kind: str
    k: int
    s: int
    p: int
    central: Colouring
    witnesses: dict[Vec, Colouring] = field(default_factory=dict)

    def residual(self, demand: Vec) -> Vec:
        return _sub(_sub(self.central.ord, self.witnesses[demand].ord), demand)

    def problems(self) -> list[str]:
        """Independent validation of every stored witness; empty when sound."""
        g = self.guest.graph
        out = []
        if len(self.central.assignment) != g.n:
            return ["central colouring has wrong length"]
        if not _kind_ok(self.central, g, self.kind):
            out.append("central colouring has the wrong kind")
        for d in demand_vectors(self.k, self.s):
            wit = self.witnesses.get(d)
            if wit is None:
                out.append(f"no witness for demand {d}")
                continue
            if not _kind_ok(wit, g, self.kind):
                out.append(f"witness for {d} has the wrong kind")
            if _norm(self.residual(d)) > self.p:
                out.append(f"witness for {d} misses by {self.residual(d)}")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def to_dict(self, elide: bool = False) -> dict:
        out = {
            "kind": self.kind, "k": self.k, "s": self.s, "p": self.p,
            "order": self.guest.n, "tiles": len(self.guest),
            "central": list(self.central.assignment), "centralOrd": list(self.central.ord),
        }
        if not elide:
            out["witnesses"] = [{"demand": list(d), "colouring": list(c.assignment), "ord": list(c.ord)}
                                for d, c in sorted(self.witnesses.items())]
        return out


@dataclass
class Refutation:
    kind: str
    k: int
    s: int
    p: int
    failures: dict[Vec, Vec]  # candidate central ord -> demand with no witness
    exhaustive: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind, "k": self.k, "s": self.s, "p": self.p, "exhaustive": self.exhaustive,
                "note": self.note,
                "failures": [{"centralOrd": list(c), "demand": list(d)} for c, d in sorted(self.failures.items())]}


def _shifted(arr: np.ndarray, off: Sequence[int]) -> np.ndarray:
    """``out[i] = arr[i - off]`` with zero fill."""
    out = np.zeros_like(arr)
    src, dst = [], []
    for size, o in zip(arr.shape, off):
        if abs(o) >= size:
            return out
        if o >= 0:
            src.append(slice(0, size - o))
            dst.append(slice(o, size))
        else:
            src.append(slice(-o, size))
            dst.append(slice(0, size + o))
    out[tuple(dst)] = arr[tuple(src)]
    return out


class _Space:
    """Achievable ord vectors of a guest with witness assembly."""

    def __init__(self, w: TiledGuest, k: int, kind: str):
        self.w, self.k, self.kind = w, k, kind
        self.dp, self.parts = guest_sumset(w, k, kind)

    def colouring(self, vec: Vec) -> Colouring:
        choice = self.dp.decompose(vec)
        col = [1] * self.w.n
        for (comp, opts), ci in zip(self.parts, choice):
            local = opts.witness(opts.ords[ci])
            for i, v in enumerate(comp):
                col[v] = local[i]
        return Colouring(tuple(col), self.k)


def certify_flexi(w: TiledGuest, kind: str, k: int, s: int, p: int = 0, budget: int = DEFAULT_BUDGET,
                  central: Colouring | Vec | None = None) -> FlexiCertificate | Refutation:
    """Certify or refute that ``w`` is ``(k, s, p)``-flexi of the given kind.

    Achievable class-size vectors are computed exactly (per-component DP and
    a sumset over components), so a candidate central colouring is judged by
    its ord vector alone.  Candidates are tried up to colour permutation, most
    balanced first; ``central`` restricts the search to one vector.
    """
    if kind not in KINDS:
        raise PreconditionError(f"unknown kind {kind!r}")
    if k < 1 or s < 0 or p < 0:
        raise PreconditionError("need k >= 1, s >= 0, p >= 0")
    demands = demand_vectors(k, s)
    slack = demand_vectors(k, p)
    try:
        space = _Space(w, k, kind)
    except ValueError:
        return Refutation(kind, k, s, p, {}, True, "no colouring of this kind exists")
    except MemoryError as exc:
        raise UndecidedError(str(exc), budget=budget) from exc
    dp = space.dp
    dims = dp.dims
    # pad by p so targets just outside the reachable box are still judged
    padded = np.pad(dp.final, p)
    dil = np.zeros_like(padded)
    for e in slack:
        dil |= _shifted(padded, e[:dims])
    base = np.array(dp._bases[-1]) - p
    shape = np.array(dil.shape)
    dem = np.array(demands, dtype=np.int64)

    if central is not None:
        cvec = tuple(central.ord) if isinstance(central, Colouring) else tuple(central)
        candidates = [cvec]
    else:
        canon = {tuple(sorted(v, reverse=True)) for v in dp.vectors()}
        candidates = sorted(canon, key=lambda v: (max(v) - min(v), v))
    cost = 0
    failures: dict[Vec, Vec] = {}
    for cvec in candidates:
        cost += len(demands) * len(slack)
        if cost > budget:
            raise UndecidedError(f"budget of {budget} evaluations exhausted", budget=budget)
        if not dp.contains(cvec):
            failures[cvec] = demands[0]
            continue
        tgt = np.array(cvec[:dims], dtype=np.int64) - dem[:, :dims] - base
        inside = np.all((tgt >= 0) & (tgt < shape), axis=1)
        ok = inside.copy()
        if inside.any():
            idx = tuple(tgt[inside].T)
            ok[inside] = dil[idx]
        if ok.all():
            return _build_certificate(space, kind, k, s, p, cvec, central, demands, slack)
        failures[cvec] = demands[int(np.argmin(ok))]
    return Refutation(kind, k, s, p, failures, True)


def _build_certificate(space: _Space, kind, k, s, p, cvec, central, demands, slack) -> FlexiCertificate:
    dp = space.dp
    if isinstance(central, Colouring):
        ccol = central
    else:
        ccol = space.colouring(cvec)
    witnesses = {}
    for d in demands:
        t = _sub(cvec, d)
        for e in slack:
            v = _sub(t, e)
            if dp.contains(v):
                witnesses[d] = space.colouring(v)
                break
        else:
            raise AssertionError(f"dilated table claimed a witness for {d}")
    return FlexiCertificate(space.w, kind, k, s, p, ccol, witnesses)


def recertify(cert: FlexiCertificate, budget: int = DEFAULT_BUDGET) -> FlexiCertificate:
    """Re-run certification at the certificate's own central colouring."""
    res = certify_flexi(cert.guest, cert.kind, cert.k, cert.s, cert.p, budget=budget, central=cert.central)
    if not isinstance(res, FlexiCertificate):
        raise ConstructionFailed("constructed certificate does not re-certify",
                                 demand=list(next(iter(res.failures.values()), ())))
    return res


def flexi_sum(c1: FlexiCertificate, c2: FlexiCertificate) -> FlexiCertificate:
    """Certificate for the union: resolve a demand on the first part, absorb the slack on the second."""
    if c1.k != c2.k or c1.kind != c2.kind:
        raise PreconditionError("certificates must share k and kind")
    if c2.s < c1.p:
        raise PreconditionError(f"second radius {c2.s} is below first slack {c1.p}")
    guest = c1.guest + c2.guest
    central = Colouring(c1.central.assignment + c2.central.assignment, c1.k)
    witnesses = {}
    for d in demand_vectors(c1.k, c1.s):
        w1 = c1.witnesses.get(d)
        if w1 is None:
            raise MissingWitness(f"first certificate lacks demand {d}", demand=list(d))
        rest = tuple(-x for x in _sub(_sub(c1.central.ord, w1.ord), d))
        w2 = c2.witnesses.get(rest)
        if w2 is None:
            raise MissingWitness(f"second certificate lacks demand {rest}", demand=list(rest))
        witnesses[d] = Colouring(w1.assignment + w2.assignment, c1.k)
    return FlexiCertificate(guest, c1.kind, c1.k, c1.s, c2.p, central, witnesses)


# -- wildcard assembly -----------------------------------------------------

@dataclass
class WildcardPart:
    """A subtiling with a base colouring and shift witnesses.

    ``shifts[y]`` keeps classes ``1..k-2`` and moves ``y`` (up to the
    slack) vertices from class ``k-1`` to class ``k``.
    """

    guest: TiledGuest
    theta: Colouring
    shifts: dict[int, Colouring]


def _pair_permutation(k: int, i: int, j: int) -> list[int]:
    """Colour map (1-based, as a list indexed by old colour - 1): k-1 -> i, k -> j."""
    rest = [c for c in range(1, k + 1) if c not in (i, j)]
    perm = rest + [i, j]
    return perm


def build_wildcards(parts: Sequence[WildcardPart], k: int, w: int, p: int, kind: str = "proper",
                    radius: int | None = None) -> FlexiCertificate:
    """Assemble parts with shift witnesses into one certificate of radius ``w // k``.

    Part ``q`` of the first ``k(k-1)`` parts is dedicated to the ordered
    colour pair ``(i, j)``: its base colouring is permuted so that classes
    ``k-1, k`` become ``i, j``.  A demand is split into pairwise transfers by
    a flow on the complete graph over the colours, and a transfer of ``y``
    from ``i`` to ``j`` uses the permuted shift witness for ``y``.  Since
    that flow moves each unit along a single edge, any radius up to ``w`` is
    realisable; ``radius`` overrides the default.
    """
    if kind not in KINDS:
        raise PreconditionError(f"unknown kind {kind!r}")
    if p >= w:
        raise PreconditionError(f"slack p={p} must be below w={w}")
    if k < 2:
        raise PreconditionError("need at least two colours")
    pairs = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1) if i != j]
    if len(parts) < len(pairs):
        raise PreconditionError(f"need at least {len(pairs)} parts, got {len(parts)}")
    radius = w // k if radius is None else radius
    if radius > w:
        raise PreconditionError("radius cannot exceed the shift range")
    for q, part in enumerate(parts):
        g = part.guest.graph
        base = part.theta.ord
        if part.theta.k != k or not _kind_ok(part.theta, g, kind):
            raise PreconditionError(f"part {q} base colouring is invalid")
        for y in range(1, w + 1):
            sh = part.shifts.get(y)
            if sh is None:
                raise MissingWitness(f"part {q} has no shift witness for y={y}", part=q, y=y)
            o = sh.ord
            if not _kind_ok(sh, g, kind) or o[: k - 2] != base[: k - 2] or abs(o[k - 1] - base[k - 1] - y) > p:
                raise PreconditionError(f"part {q} shift witness for y={y} is invalid")
    perms = {}
    for q, part in enumerate(parts):
        if q < len(pairs):
            perms[q] = _pair_permutation(k, *pairs[q])
        else:
            perms[q] = list(range(1, k + 1))
    centrals = [parts[q].theta.permuted(perms[q]) for q in range(len(parts))]
    guest = TiledGuest(tuple(t for part in parts for t in part.guest.tiles))
    central = Colouring(tuple(c for col in centrals for c in col.assignment), k)
    kk = complete_graph(k)
    pair_index = {pr: q for q, pr in enumerate(pairs)}
    witnesses = {}
    for d in demand_vectors(k, radius):
        flow = weights_to_flow(kk, list(d))
        cols = list(centrals)
        for u, v, x in flow.positive_edges():
            # inflow x at v: class v+1 shrinks by x, class u+1 grows by x
            q = pair_index[(v + 1, u + 1)]
            cols[q] = parts[q].shifts[x].permuted(perms[q])
        witnesses[d] = Colouring(tuple(c for col in cols for c in col.assignment), k)
    cert = FlexiCertificate(guest, kind, k, radius, k * p, central, witnesses)
    problems = cert.problems()
    if problems:
        raise ConstructionFailed("assembled certificate is unsound: " + problems[0])
    return cert


def isolated_certificate(k: int, w: int, kind: str = "proper") -> FlexiCertificate:
    """``k*w`` isolated vertices with the balanced central colouring."""
    guest = TiledGuest(tuple(Graph(1) for _ in range(k * w)))
    central = Colouring(tuple(1 + v // w for v in range(k * w)), k)
    witnesses = {}
    for d in demand_vectors(k, w):
        sizes = [w - x for x in d]
        col = [c + 1 for c, size in enumerate(sizes) for _ in range(size)]
        witnesses[d] = Colouring(tuple(col), k)
    return FlexiCertificate(guest, kind, k, w, 0, central, witnesses)


def shift_part(guest: TiledGuest, k: int, w: int, kind: str = "proper") -> WildcardPart:
    """Find a base colouring with exact shift witnesses for every ``y <= w`` by search."""
    space = _Space(guest, k, kind)
    dp = space.dp
    step = np.zeros(k, dtype=int)
    step[k - 2] -= 1
    step[k - 1] += 1
    for c in sorted(dp.vectors(), key=lambda v: (-(v[k - 2] - v[k - 1]), v)):
        if all(dp.contains(tuple(np.array(c) + y * step)) for y in range(1, w + 1)):
            theta = space.colouring(c)
            shifts = {y: space.colouring(tuple(int(x) for x in np.array(c) + y * step)) for y in range(1, w + 1)}
            return WildcardPart(guest, theta, shifts)
    raise ConstructionFailed(f"no colouring admits shifts up to {w}")


# -- subset sums and intervals ---------------------------------------------

def _prime_set(x: int) -> frozenset[int]:
    out = set()
    d = 2
    while d * d <= x:
        while x % d == 0:
            out.add(d)
            x //= d
        d += 1
    if x > 1:
        out.add(x)
    return frozenset(out)


def sumset_bits(xs: Sequence[int]) -> int:
    bits = 1
    for x in xs:
        bits |= bits << x
    return bits


def longest_run(bits: int) -> tuple[int, int]:
    """Start and length (``hi - lo``) of the longest run of set bits."""
    best = (0, -1)
    z = 0
    while bits >> z:
        if not (bits >> z) & 1:
            z += 1
            continue
        end = z
        while (bits >> (end + 1)) & 1:
            end += 1
        if end - z > best[1]:
            best = (z, end - z)
        z = end + 1
    return best


def subset_with_sum(xs: Sequence[int], target: int) -> list[int] | None:
    """Indices of a subset of ``xs`` summing to ``target``."""
    if target < 0:
        return None
    first: dict[int, int] = {0: -1}
    for i, x in enumerate(xs):
        for tot in sorted(first, reverse=True):
            if tot + x not in first:
                first[tot + x] = i
    if target not in first:
        return None
    out = []
    cur = target
    limit = len(xs)
    while cur:
        # earliest index reaching cur must be below the previously used one
        i = first[cur]
        assert i < limit
        out.append(i)
        cur -= xs[i]
        limit = i
    return sorted(out)


@dataclass
class IntervalResult:
    xs: list[int]
    z: int
    length: int
    blocks: list[list[int]]

    def to_dict(self) -> dict:
        return {"x": self.xs, "z": self.z, "length": self.length, "blocks": self.blocks}


def transversal_blocks(sets: Sequence[Sequence[int]], mode: str) -> tuple[list[int], list[list[int]]]:
    """Choose one element per set following the block construction; no size checks.

    Mixed mode builds blocks from three pairwise distinct picks extended by
    a chain whose common prime divisors shrink to nothing, so each block's
    differences have gcd 1.  Identical mode uses blocks of ``|A| + 1``
    copies of the common set.
    """
    sets = [sorted(set(a)) for a in sets]
    xs: list[int] = [0] * len(sets)
    blocks: list[list[int]] = []
    if mode == "identical":
        a = sets[0] if sets else []
        size = len(a) + 1
        i = 0
        while i + size <= len(sets):
            idx = list(range(i, i + size))
            xs[i] = max(a)
            for off, val in enumerate(a, start=1):
                xs[i + off] = val
            blocks.append(idx)
            i += size
        for j in range(i, len(sets)):
            xs[j] = max(sets[j])
        return xs, blocks
    if mode != "mixed":
        raise PreconditionError(f"unknown mode {mode!r}")
    i = 0
    n = len(sets)
    while i + 3 <= n:
        a1, a2, a3 = sets[i], sets[i + 1], sets[i + 2]
        triple = None
        for want_pos in (True, False):
            for x1, x2, x3 in itertools.product(a1, a2, a3):
                if len({x1, x2, x3}) == 3 and (not want_pos or (x2 > 0 and x3 > 0)):
                    triple = (x1, x2, x3)
                    break
            if triple:
                break
        if triple is None:
            # at most two distinct values available: take both values
            x1 = max(a1)
            x2 = max(a2)
            x3 = next((v for v in a3 if v != x1), max(a3))
            xs[i:i + 3] = [x1, x2, x3]
            blocks.append([i, i + 1, i + 2])
            i += 3
            continue
        picks = list(triple)
        j = i + 3
        common = _prime_set(picks[2]) if picks[2] > 0 else None
        while common and j < n:
            best = None
            for x in sets[j]:
                if x == 0:
                    continue
                ps = _prime_set(x)
                if not common <= ps:
                    key = (len(common & ps), -x)
                    if best is None or key < best[0]:
                        best = (key, x, ps)
            if best is None:
                best = ((0, 0), max(sets[j]), frozenset())
            picks.append(best[1])
            common = common & best[2]
            j += 1
        if common:
            # ran out of sets before the chain closed; leave them as leftovers
            break
        xs[i:j] = picks
        blocks.append(list(range(i, j)))
        i = j
    for j in range(i, n):
        xs[j] = max(sets[j])
    return xs, blocks


def interval_multiset(sets: Sequence[Sequence[int]], w: int, mode: str = "mixed",
                      check_sizes: bool = True) -> IntervalResult:
    """Pick ``x_i`` in ``A_i`` so that the subset sums contain an interval of length ``w``."""
    if not sets:
        raise PreconditionError("need at least one set")
    for idx, a in enumerate(sets):
        if not a:
            raise PreconditionError(f"set {idx} is empty")
        if any(x < 0 or x > w for x in a):
            raise PreconditionError(f"set {idx} is not inside [0, {w}]")
        if math.gcd(*a) != 1:
            raise PreconditionError(f"set {idx} has gcd {math.gcd(*a)}")
    s = len(sets)
    if mode == "identical":
        if any(sorted(set(a)) != sorted(set(sets[0])) for a in sets):
            raise PreconditionError("identical mode needs equal sets")
        if check_sizes and s < 10 * w:
            raise PreconditionError(f"identical mode needs s >= 10w = {10 * w}")
    elif mode == "mixed":
        if check_sizes and s < 10 * w * math.log(w) if w > 1 else False:
            raise PreconditionError(f"mixed mode needs s >= 10 w log w = {10 * w * math.log(w):.1f}")
    else:
        raise PreconditionError(f"unknown mode {mode!r}")
    xs, blocks = transversal_blocks(sets, mode)
    z, length = longest_run(sumset_bits(xs))
    if length < w or not subset_sum_dp(xs, z, z + w):
        raise ConstructionFailed(f"longest interval has length {length} < {w}", length=length)
    return IntervalResult(xs, z, length, blocks)


# -- divisibility-driven wildcards -----------------------------------------

def _difference_colourings(tile: Graph, k: int, kind: str) -> dict[int, tuple[int, ...]]:
    """Signed difference ``|class k-1| - |class k|`` -> a ``k``-colouring of the tile.

    Proper colourings use ``chi(tile)`` colours (the first two become
    ``k-1`` and ``k``, the rest ``1, 2, ...``); topological colourings use
    two colours.
    """
    if kind == "proper":
        c = max(chromatic_number(tile), 1)
        opts = component_options(tile, c, "proper")
    else:
        c = 2
        opts = component_options(tile, 2, "topological")
    remap = {1: k - 1, 2: k}
    for extra in range(3, c + 1):
        remap[extra] = extra - 2
    out: dict[int, tuple[int, ...]] = {}
    for o in opts.ords:
        diff = o[0] - (o[1] if c >= 2 else 0)
        if diff not in out:
            local = opts.witness(o)
            out[diff] = tuple(remap[x] for x in local)
    return out


def _flip(col: Sequence[int], k: int) -> tuple[int, ...]:
    swap = {k - 1: k, k: k - 1}
    return tuple(swap.get(c, c) for c in col)


def _divisibility_group(h: TiledGuest, pool: list[int], k: int, reach: int, kind: str,
                        identical: bool) -> tuple[WildcardPart, list[int]]:
    """Consume tiles from ``pool`` until their difference choices reach an interval of length ``reach``."""
    taken: list[int] = []
    sets: list[list[int]] = []
    diff_cols: list[dict[int, tuple[int, ...]]] = []
    mode = "identical" if identical else "mixed"
    # the block construction is wasteful below its size thresholds, so a greedy
    # transversal (pick the value that lengthens the longest run most) races it
    greedy: list[int] = []
    gbits = 1
    while pool:
        ti = pool.pop(0)
        dc = _difference_colourings(h.tiles[ti], k, kind)
        taken.append(ti)
        diff_cols.append(dc)
        sets.append(sorted({abs(d) for d in dc}))
        pick = max(sets[-1], key=lambda x: (longest_run(gbits | (gbits << x))[1], x))
        greedy.append(pick)
        gbits |= gbits << pick
        xs, _ = transversal_blocks(sets, mode)
        z, length = longest_run(sumset_bits(xs))
        if length >= reach:
            break
        z, length = longest_run(gbits)
        if length >= reach:
            xs = list(greedy)
            break
    else:
        raise ConstructionFailed(f"tiles exhausted before reaching an interval of length {reach}")
    # base colouring of each tile: class k-1 minus class k equals x_i
    base = []
    for x, dc in zip(xs, diff_cols):
        col = dc.get(x)
        if col is None:
            col = _flip(dc[-x], k)
        base.append(col)

    def colouring_for(total: int) -> Colouring:
        chosen = set(subset_with_sum(xs, total))
        cols = [(_flip(c, k) if i in chosen else c) for i, c in enumerate(base)]
        return Colouring(tuple(c for col in cols for c in col), k)

    guest = h.sub(taken)
    theta = colouring_for(z)
    shifts = {y: colouring_for(z + y) for y in range(1, reach + 1)}
    return WildcardPart(guest, theta, shifts), taken


@dataclass
class WildcardFamily:
    proper: list[FlexiCertificate]
    topological: FlexiCertificate
    tiles: list[list[int]]  # tile indices of h used by each certificate (proper first)


def fcr_tiling_wildcards(h: TiledGuest, chi: Fraction | int, t: int, l: int, w: int, w_prime: int,
                         budget: int = DEFAULT_BUDGET) -> WildcardFamily:
    """Disjoint proper ``(k, kw)`` certificates and one topological ``(l, w)`` certificate.

    ``k = ceil(chi)``.  Each certificate is assembled from ``k(k-1)``
    groups; a group takes tiles until the chosen class differences have an
    interval of subset sums of the required length, and flipping the two
    last classes on a subset of its tiles realises every shift.
    """
    chi = Fraction(chi)
    k = math.ceil(chi)
    for i, tile in enumerate(h.tiles):
        if tile.n > w:
            raise PreconditionError(f"tile {i} has order {tile.n} > w={w}", tile=i)
        if tile.n and chromatic_number(tile) > k:
            raise PreconditionError(f"tile {i} needs more than {k} colours", tile=i)
        if not tile.n or not is_fcr(tile):
            raise PreconditionError(f"tile {i} is not in the required divisibility class", tile=i)
    if h.n < (t + l) * w_prime:
        raise PreconditionError(f"v(H)={h.n} < (t+l)w'={(t + l) * w_prime}")
    identical = len({(tile.n, tuple(tile.sorted_edges())) for tile in h.tiles}) == 1
    pool = list(range(len(h.tiles)))
    proper: list[FlexiCertificate] = []
    used: list[list[int]] = []

    def build(kk: int, reach: int, kind: str) -> tuple[FlexiCertificate, list[int]]:
        parts, taken = [], []
        for _ in range(kk * (kk - 1)):
            part, tk = _divisibility_group(h, pool, kk, reach, kind, identical)
            parts.append(part)
            taken.extend(tk)
        cert = build_wildcards(parts, kk, reach, 0, kind=kind, radius=reach)
        if cert.guest.n > w_prime:
            raise ConstructionFailed(f"certificate order {cert.guest.n} exceeds w'={w_prime}")
        return recertify(cert, budget), taken

    for _ in range(t):
        cert, taken = build(k, k * w, "proper")
        proper.append(cert)
        used.append(taken)
    if l == 1:
        ti = pool.pop(0)
        g1 = h.sub([ti])
        top = FlexiCertificate(g1, "topological", 1, w, 0, Colouring((1,) * g1.n, 1),
                               {(0,): Colouring((1,) * g1.n, 1)})
        top = recertify(top, budget)
        used.append([ti])
    else:
        top, taken = build(l, w, "topological")
        used.append(taken)
    return WildcardFamily(proper, top, used)


# -- low critical chromatic number and one extra colour ----------------------

def _greedy_split(values: Sequence[int], parts: int) -> list[list[int]]:
    """Sequential split of indices into ``parts`` runs with roughly equal value sums."""
    total = sum(values)
    target = Fraction(total, parts)
    out: list[list[int]] = [[] for _ in range(parts)]
    acc = 0
    q = 0
    for i, v in enumerate(values):
        out[q].append(i)
        acc += v
        if q < parts - 1 and acc >= target * (q + 1):
            q += 1
    return out


def low_crit_wildcard(h: TiledGuest, k: int, tau: Fraction | int, w: int,
                      budget: int = DEFAULT_BUDGET) -> FlexiCertificate:
    """Approximate ``(k, tau n / (2k^5), kw)`` certificate from a large class gap."""
    tau = Fraction(tau)
    n = h.n
    if n == 0:
        raise PreconditionError("empty guest")
    if h.max_tile > w:
        raise PreconditionError(f"a tile exceeds w={w}")
    prof = guest_profile(h)
    if not prof.crit < k - tau:
        raise PreconditionError(f"crit(H)={prof.crit} is not below k - tau = {k - tau}")
    # per tile: proper k-colouring with class k-1 as large and class k as small as possible
    cols, gaps = [], []
    for tile in h.tiles:
        opts = component_options(tile, k, "proper")
        best = max(opts.ords, key=lambda o: (o[k - 2] - o[k - 1], o))
        cols.append(opts.witness(best))
        gaps.append(best[k - 2] - best[k - 1])
    total = sum(gaps)
    if total < tau * n / k ** 2:
        raise ConstructionFailed(f"class gap {total} below tau n / k^2")
    shift_range = math.floor(tau * n / (2 * k ** 4))
    if shift_range <= w:
        raise ConstructionFailed(f"shift range {shift_range} must exceed the slack w={w}; guest too small")
    groups = _greedy_split(gaps, k * k)
    parts = []
    for grp in groups:
        if sum(gaps[i] for i in grp) < shift_range:
            raise ConstructionFailed("a part has too small a class gap")
        base = [cols[i] for i in grp]
        theta = Colouring(tuple(c for col in base for c in col), k)
        shifts = {}
        for y in range(1, shift_range + 1):
            flipped, acc = [], 0
            for pos, i in enumerate(grp):
                if acc >= y:
                    flipped.append(base[pos])
                else:
                    flipped.append(_flip(base[pos], k))
                    acc += gaps[i]
            shifts[y] = Colouring(tuple(c for col in flipped for c in col), k)
        parts.append(WildcardPart(h.sub(grp), theta, shifts))
    cert = build_wildcards(parts, k, shift_range, w)
    return recertify(cert, budget)


def kplus1_wildcard(h: TiledGuest, k: int, budget: int = DEFAULT_BUDGET) -> FlexiCertificate:
    """``(k+1, n/(k+1)^5)`` certificate from ``k``-colourable tiles and an empty extra class."""
    if h.n == 0 or not h.tiles:
        raise PreconditionError("empty guest")
    if chromatic_number(h.graph) > k:
        raise PreconditionError(f"guest is not {k}-colourable")
    kk = k + 1
    n = h.n
    shift_range = n // kk ** 4
    groups = _greedy_split([t.n for t in h.tiles], kk * kk)
    parts = []
    for grp in groups:
        sub = h.sub(grp)
        space = _Space(sub, k, "proper")
        vec = max(space.dp.vectors(), key=lambda v: (max(v), v))
        col = list(space.colouring(vec).assignment)
        big = max(range(1, k + 1), key=lambda c: (col.count(c), c))
        col = [k if c == big else big if c == k else c for c in col]
        theta = Colouring(tuple(col), kk)
        members = [v for v, c in enumerate(col) if c == k]
        if len(members) < shift_range:
            raise ConstructionFailed("largest class too small for the shift range")
        shifts = {}
        for y in range(1, shift_range + 1):
            moved = list(col)
            for v in members[:y]:
                moved[v] = kk
            shifts[y] = Colouring(tuple(moved), kk)
        parts.append(WildcardPart(sub, theta, shifts))
    if shift_range == 0:
        guest = TiledGuest(tuple(t for part in parts for t in part.guest.tiles))
        central = Colouring(tuple(c for part in parts for c in part.theta.assignment), kk)
        cert = FlexiCertificate(guest, "proper", kk, 0, 0, central, {tuple([0] * kk): central})
        return recertify(cert, budget)
    cert = build_wildcards(parts, kk, shift_range, 0)
    return recertify(cert, budget)


def max_degree_gives_wildcards(f: Graph) -> WildcardPart:
    """Shift witnesses from a smallest colour class grown greedily by non-neighbours.

    Needs ``chi(f) = k >= 3`` and ``alpha(f) < 1/(Delta+1)``; the returned
    part has shift witnesses for every ``y`` up to the number of vertices
    moved out of the most-used source class.
    """
    prof = chromatic_profile(f)
    k = prof.chi
    delta = f.max_degree
    if k < 3:
        raise PreconditionError("needs chromatic number at least 3")
    if not prof.alpha < Fraction(1, delta + 1):
        raise PreconditionError("alpha must be below 1/(Delta+1)")
    opts = component_options(f, k, "proper")
    target = min(opts.ords, key=lambda o: (o[k - 1], o))
    assert Fraction(target[k - 1], f.n) == prof.alpha
    col = list(opts.witness(target))
    klass = {v for v in range(f.n) if col[v] == k}
    moved_from: dict[int, list[int]] = {}
    for v in range(f.n):
        if v in klass:
            continue
        if not any(u in klass for u in f.adj[v]):
            moved_from.setdefault(col[v], []).append(v)
            klass.add(v)
    if not moved_from:
        raise ConstructionFailed("no vertex could join the smallest class")
    src = max(moved_from, key=lambda c: (len(moved_from[c]), -c))
    # rename src <-> k-1 so the shifts move class k-1 into class k
    ren = {src: k - 1, k - 1: src}
    base = [ren.get(c, c) for c in col]
    xs = moved_from[src]
    shifts = {}
    for y in range(1, len(xs) + 1):
        new = list(base)
        for v in xs[:y]:
            new[v] = k
        shifts[y] = Colouring(tuple(new), k)
    return WildcardPart(TiledGuest((f,)), Colouring(tuple(base), k), shifts)


def bipartite_isolated_bound(f: Graph) -> tuple[int, Fraction]:
    """Isolated-vertex count and the lower bound ``v(1 - (Delta+1) alpha)``."""
    prof = chromatic_profile(f)
    isolated = sum(1 for v in range(f.n) if not f.adj[v])
    return isolated, f.n * (1 - (f.max_degree + 1) * prof.alpha)
