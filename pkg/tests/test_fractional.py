import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from mixtile.errors import PreconditionError
from mixtile.flows import weights_to_flow
from mixtile.fractional import (FractionalTiling, bounded_degree_cover, compose_tilings, enumerate_homs,
                                max_fractional_tiling, min_fractional_cover)
from mixtile.graph import (Graph, bottle_for_chi, bottle_graph, chromatic_profile, complete_bipartite,
                           complete_graph, cycle_graph, disjoint_union, path_graph)
from mixtile.lp import solve_packing_lp

K2, K3 = complete_graph(2), complete_graph(3)


@st.composite
def graphs(draw, lo=2, hi=7, p_lo=0.3):
    n = draw(st.integers(lo, hi))
    p = draw(st.floats(p_lo, 1.0))
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def brute_homs(f: Graph, g: Graph) -> int:
    return sum(all(g.has_edge(m[u], m[v]) for u, v in f.edges)
               for m in itertools.product(range(g.n), repeat=f.n))


class TestSimplex:
    def test_small_lp(self):
        # max x+y, x+2y<=4, 3x+y<=6
        res = solve_packing_lp([[1, 2], [3, 1]], [4, 6], [1, 1])
        assert res.value == Fraction(14, 5)
        assert res.x == [Fraction(8, 5), Fraction(6, 5)]
        assert sum(y * b for y, b in zip(res.y, [4, 6])) == res.value

    def test_negative_rhs_rejected(self):
        with pytest.raises(PreconditionError):
            solve_packing_lp([[1]], [-1], [1])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10 ** 6))
    def test_agrees_with_scipy(self, m, n, seed):
        rng = np.random.default_rng(seed)
        a = rng.integers(0, 4, size=(m, n))
        a[:, a.sum(axis=0) == 0] = 1  # keep the LP bounded
        b = rng.integers(0, 5, size=m)
        c = rng.integers(0, 4, size=n)
        res = solve_packing_lp(a.tolist(), b.tolist(), c.tolist())
        ref = linprog(-c, A_ub=a, b_ub=b, bounds=[(0, None)] * n, method="highs")
        assert abs(float(res.value) + ref.fun) < 1e-7
        # dual feasibility and strong duality, exactly
        for j in range(n):
            assert sum(res.y[i] * int(a[i, j]) for i in range(m)) >= c[j]
        assert sum(y * int(bi) for y, bi in zip(res.y, b)) == res.value


class TestHomomorphisms:
    def test_edge_into_triangle(self):
        assert len(list(enumerate_homs(K2, K3))) == 6

    def test_triangle_into_c5(self):
        assert list(enumerate_homs(K3, cycle_graph(5))) == []

    def test_c4_into_triangle(self):
        # brute force over all 81 maps gives 18
        assert len(list(enumerate_homs(cycle_graph(4), K3))) == brute_homs(cycle_graph(4), K3) == 18

    @settings(max_examples=40, deadline=None)
    @given(graphs(1, 4), graphs(1, 5))
    def test_count_matches_brute(self, f, g):
        assert len(list(enumerate_homs(f, g))) == brute_homs(f, g)


class TestTilingAndCover:
    def test_c4_matching(self):
        t = max_fractional_tiling(cycle_graph(4), K2)
        assert t.weight == 4 and t.is_perfect()

    def test_c5_matching(self):
        assert max_fractional_tiling(cycle_graph(5), K2).weight == 5
        assert min_fractional_cover(cycle_graph(5), K2).size == Fraction(5, 2)

    def test_no_triangles(self):
        assert max_fractional_tiling(complete_bipartite(3, 3), K3).weight == 0
        assert min_fractional_cover(complete_bipartite(3, 3), K3).size == 0

    def test_triangle_cover(self):
        assert min_fractional_cover(K3, K3).size == 1

    @settings(max_examples=40, deadline=None)
    @given(graphs(2, 7), st.sampled_from([K2, K3, bottle_graph(3, 1, 2)]))
    def test_strong_duality(self, g, f):
        t = max_fractional_tiling(g, f)
        c = min_fractional_cover(g, f)
        assert t.is_valid() and c.violated() is None
        assert c.size * f.n == t.weight

    @settings(max_examples=25, deadline=None)
    @given(graphs(3, 8, 0.5), st.sampled_from([(Fraction(2), Fraction(5, 2)), (Fraction(5, 2), Fraction(3))]))
    def test_monotone_in_chi(self, g, pair):
        lo, hi = pair
        assert max_fractional_tiling(g, bottle_for_chi(lo)).weight >= max_fractional_tiling(g, bottle_for_chi(hi)).weight

    @settings(max_examples=30, deadline=None)
    @given(graphs(3, 8, 0.6), st.sampled_from([K2, K3]))
    def test_degree_condition_gives_perfect(self, g, f):
        crit = chromatic_profile(f).crit
        if g.min_degree >= (1 - 1 / crit) * g.n:
            t = max_fractional_tiling(g, f)
            assert t.is_perfect()
            # the cover meets n / v(f), the bound from the greedy clique argument
            assert min_fractional_cover(g, f).size >= Fraction(g.n, f.n)


class TestCompose:
    def test_identity(self):
        outer = max_fractional_tiling(cycle_graph(4), K2)
        inner = FractionalTiling(K2, K2, {(0, 1): Fraction(1)})
        assert compose_tilings(outer, inner).weights == outer.weights

    def test_weight_preserved(self):
        outer = max_fractional_tiling(complete_graph(4), K2)
        pair = disjoint_union([complete_graph(1)] * 2)
        inner = max_fractional_tiling(K2, pair)
        out = compose_tilings(outer, inner)
        assert out.weight == outer.weight and out.is_valid()

    def test_bottle_weight_transfers(self):
        g = complete_graph(7).remove_edges([(0, 1), (2, 3)])
        outer = max_fractional_tiling(g, bottle_graph(3, 1, 2))
        inner = max_fractional_tiling(bottle_graph(3, 1, 2), K2)
        assert inner.is_perfect()
        out = compose_tilings(outer, inner)
        assert out.is_valid() and out.weight >= outer.weight
        assert out.weight <= max_fractional_tiling(g, K2).weight

    def test_inner_must_be_perfect(self):
        p3 = path_graph(3)
        inner = max_fractional_tiling(p3, K2)
        assert not inner.is_perfect()
        with pytest.raises(PreconditionError):
            compose_tilings(max_fractional_tiling(cycle_graph(6), p3), inner)


class TestBoundedCover:
    def test_disjoint_copies(self):
        r = disjoint_union([K3] * 3)
        cov = bounded_degree_cover(r, K3, max_fractional_tiling(r, K3))
        assert len(cov.homs) == 3 and cov.max_multiplicity == 1

    def test_k4_matching(self):
        r = complete_graph(4)
        cov = bounded_degree_cover(r, K2, max_fractional_tiling(r, K2))
        assert cov.covered == 4 and cov.max_multiplicity <= 2 ** 4

    def test_c5_half_integral(self):
        r = cycle_graph(5)
        cov = bounded_degree_cover(r, K2, max_fractional_tiling(r, K2))
        assert cov.covered == 5
        assert cov.matching_degree <= 2 * 2 + 1

    @pytest.mark.parametrize("g", [path_graph(6), cycle_graph(7), complete_graph(5)])
    def test_bounds_hold(self, g):
        cov = bounded_degree_cover(g, K2, max_fractional_tiling(g, K2), rho=Fraction(1, 100))
        assert cov.max_multiplicity <= 16 and cov.max_union_degree <= 16


class TestFlows:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 9), st.integers(0, 10 ** 6))
    def test_flow_realises_weights(self, n, seed):
        rng = random.Random(seed)
        g = path_graph(n)
        g = Graph.from_edges(n, set(g.edges) | {e for e in itertools.combinations(range(n), 2) if rng.random() < 0.2})
        w = [rng.randint(-4, 4) for _ in range(n - 1)]
        w.append(-sum(w))
        f = weights_to_flow(g, w)
        assert f.is_antisymmetric()
        assert all(f.inflow(v) == w[v] for v in range(n))
        assert f.max_abs() <= sum(map(abs, w)) // 2

    def test_disconnected_rejected(self):
        with pytest.raises(PreconditionError):
            weights_to_flow(disjoint_union([K2, K2]), [1, 0, -1, 0])

    def test_unbalanced_rejected(self):
        with pytest.raises(PreconditionError):
            weights_to_flow(K2, [1, 0])
