import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mixtile.errors import ConstructionFailed, PreconditionError, UndecidedError
from mixtile.flexi import (FlexiCertificate, Refutation, build_wildcards, certify_flexi,
                           demand_vectors, fcr_tiling_wildcards, flexi_sum, interval_multiset,
                           isolated_certificate, kplus1_wildcard, longest_run, low_crit_wildcard,
                           max_degree_gives_wildcards, recertify, shift_part, subset_with_sum, sumset_bits)
from mixtile.graph import (Graph, TiledGuest, complete_bipartite, complete_graph, cycle_graph,
                           disjoint_union)

K1, K2 = Graph(1), complete_graph(2)


def ords_by_brute_force(h: TiledGuest, k: int, kind: str) -> set[tuple[int, ...]]:
    g = h.graph
    comps = g.components()
    out = set()
    for a in itertools.product(range(k), repeat=g.n):
        if kind == "proper" and any(a[u] == a[v] for u, v in g.edges):
            continue
        if kind == "topological" and any(len({a[v] for v in c}) > 1 for c in comps):
            continue
        out.add(tuple(a.count(i) for i in range(k)))
    return out


def flexi_by_brute_force(h: TiledGuest, kind: str, k: int, s: int, p: int) -> bool:
    ords = ords_by_brute_force(h, k, kind)
    slack = demand_vectors(k, p)
    for c in ords:
        if all(any(tuple(ci - di - ei for ci, di, ei in zip(c, d, e)) in ords for e in slack)
               for d in demand_vectors(k, s)):
            return True
    return False


@st.composite
def small_guests(draw):
    tiles = draw(st.lists(st.sampled_from([K1, K2, complete_graph(3), cycle_graph(4), Graph.from_edges(3, [(0, 1), (1, 2)])]),
                          min_size=1, max_size=4))
    n = sum(t.n for t in tiles)
    if n > 8:
        tiles = tiles[:2]
    return TiledGuest(tuple(tiles))


class TestDemands:
    def test_count(self):
        assert len(demand_vectors(2, 3)) == 7
        assert len(demand_vectors(3, 1)) == 7
        assert demand_vectors(1, 5) == [(0,)]

    def test_zero_sum_and_norm(self):
        for d in demand_vectors(4, 2):
            assert sum(d) == 0 and max(map(abs, d)) <= 2


class TestCertify:
    def test_four_isolated(self):
        cert = certify_flexi(TiledGuest((K1,) * 4), "proper", 2, 2)
        assert isinstance(cert, FlexiCertificate) and cert.central.ord == (2, 2)
        assert cert.is_valid()

    def test_single_edge_refuted(self):
        ref = certify_flexi(TiledGuest((K2,)), "proper", 2, 1)
        assert isinstance(ref, Refutation)
        assert ref.failures == {(1, 1): (-1, 1)}

    def test_topological_groups_components(self):
        cert = certify_flexi(TiledGuest((K2, K1, K1)), "topological", 2, 1)
        assert isinstance(cert, FlexiCertificate) and cert.central.ord == (2, 2)

    def test_long_cycle(self):
        cert = certify_flexi(TiledGuest((cycle_graph(60),)), "proper", 3, 2)
        assert isinstance(cert, FlexiCertificate) and cert.is_valid()

    def test_budget(self):
        with pytest.raises(UndecidedError):
            certify_flexi(TiledGuest((K1,) * 4), "proper", 2, 2, budget=3)

    def test_no_colouring(self):
        ref = certify_flexi(TiledGuest((complete_graph(3),)), "proper", 2, 0)
        assert isinstance(ref, Refutation)

    def test_bad_kind(self):
        with pytest.raises(PreconditionError):
            certify_flexi(TiledGuest((K1,)), "sideways", 2, 0)

    def test_slack_helps(self):
        h = TiledGuest((K2,) * 2)
        assert isinstance(certify_flexi(h, "proper", 2, 1, 0), Refutation)
        assert isinstance(certify_flexi(h, "proper", 2, 1, 1), FlexiCertificate)

    @settings(max_examples=60, deadline=None)
    @given(small_guests(), st.sampled_from(["proper", "topological"]), st.integers(2, 3),
           st.integers(0, 2), st.integers(0, 1))
    def test_matches_brute_force(self, h, kind, k, s, p):
        res = certify_flexi(h, kind, k, s, p)
        assert isinstance(res, FlexiCertificate) == flexi_by_brute_force(h, kind, k, s, p)
        if isinstance(res, FlexiCertificate):
            assert res.is_valid()

    def test_tampered_certificate_is_caught(self):
        cert = certify_flexi(TiledGuest((K1,) * 4), "proper", 2, 2)
        d = next(iter(cert.witnesses))
        cert.witnesses[d] = cert.central
        if d != (0, 0):
            assert not cert.is_valid()


class TestConstructions:
    @pytest.mark.parametrize("k", range(1, 5))
    @pytest.mark.parametrize("w", range(1, 4))
    @pytest.mark.parametrize("kind", ["proper", "topological"])
    def test_isolated(self, k, w, kind):
        c = isolated_certificate(k, w, kind)
        assert c.is_valid()
        assert isinstance(certify_flexi(c.guest, kind, k, w), FlexiCertificate)

    def test_sum(self):
        a = isolated_certificate(2, 2)
        s = flexi_sum(a, a)
        assert s.is_valid() and s.guest.n == 8

    def test_sum_radius_check(self):
        a = isolated_certificate(2, 1)
        b = FlexiCertificate(a.guest, "proper", 2, 0, 0, a.central, {(0, 0): a.central})
        wide = FlexiCertificate(a.guest, "proper", 2, 1, 1, a.central, dict(a.witnesses))
        with pytest.raises(PreconditionError):
            flexi_sum(wide, b)

    def test_build_wildcards_from_isolated_parts(self):
        parts = [shift_part(TiledGuest((K1, K1)), 3, 1) for _ in range(6)]
        cert = build_wildcards(parts, 3, 1, 0)
        assert cert.is_valid()
        assert isinstance(recertify(cert), FlexiCertificate)

    def test_build_wildcards_needs_parts(self):
        parts = [shift_part(TiledGuest((K1, K1)), 3, 1)] * 2
        with pytest.raises(PreconditionError):
            build_wildcards(parts, 3, 1, 0)

    def test_fcr_family(self):
        h = TiledGuest((cycle_graph(5),) * 200)
        fam = fcr_tiling_wildcards(h, 3, 1, 1, 5, 500)
        assert len(fam.proper) == 1 and fam.proper[0].is_valid()
        assert fam.proper[0].s == 15 and fam.proper[0].guest.n <= 500
        assert fam.topological.is_valid()
        used = [i for grp in fam.tiles for i in grp]
        assert len(used) == len(set(used))

    def test_fcr_rejects_wrong_class(self):
        with pytest.raises(PreconditionError, match="divisibility"):
            fcr_tiling_wildcards(TiledGuest((complete_bipartite(2, 4),) * 50), 2, 1, 1, 6, 100)

    def test_kplus1(self):
        cert = kplus1_wildcard(TiledGuest((K2,) * 100), 2)
        assert cert.is_valid() and cert.k == 3

    def test_kplus1_needs_colourable(self):
        with pytest.raises(PreconditionError):
            kplus1_wildcard(TiledGuest((complete_graph(3),) * 4), 2)

    def test_low_crit(self):
        h = TiledGuest((disjoint_union([K2, K1]),) * 160)
        cert = low_crit_wildcard(h, 3, Fraction(7, 5), 3)
        assert cert.is_valid() and (cert.k, cert.s) == (3, 1)

    def test_low_crit_small_guest(self):
        with pytest.raises(ConstructionFailed):
            low_crit_wildcard(TiledGuest((disjoint_union([K2, K1]),) * 10), 3, Fraction(7, 5), 3)

    def test_max_degree_part(self):
        # C_7 has alpha 1/7 < 1/3
        part = max_degree_gives_wildcards(cycle_graph(7))
        g = part.guest.graph
        assert part.theta.is_proper(g)
        for y, col in part.shifts.items():
            assert col.is_proper(g)
            assert col.ord[2] - part.theta.ord[2] == y


class TestIntervals:
    def test_bits(self):
        assert sumset_bits([1, 2]) == 0b1111
        assert longest_run(0b1110111) == (0, 2)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(0, 6), max_size=8), st.integers(0, 30))
    def test_subset_with_sum(self, xs, target):
        got = subset_with_sum(xs, target)
        reachable = any(sum(c) == target for r in range(len(xs) + 1) for c in itertools.combinations(xs, r))
        assert (got is not None) == reachable
        if got is not None:
            assert sum(xs[i] for i in got) == target and len(set(got)) == len(got)

    def test_identical(self):
        res = interval_multiset([[1]] * 30, 3, "identical")
        assert res.length >= 3

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 5), st.integers(0, 10 ** 6))
    def test_mixed_families(self, w, seed):
        rng = random.Random(seed)
        sets = []
        while len(sets) < 12 * w * w:
            a = sorted(set(rng.sample(range(0, w + 1), rng.randint(1, w + 1))))
            if a and math.gcd(*a) == 1:
                sets.append(a)
        res = interval_multiset(sets, w, "mixed")
        assert all(x in a for x, a in zip(res.xs, sets))
        bits = sumset_bits(res.xs)
        assert all((bits >> (res.z + i)) & 1 for i in range(w + 1))

    def test_gcd_rejected(self):
        with pytest.raises(PreconditionError):
            interval_multiset([[2, 4]] * 40, 4)
