import itertools
import random


from hypothesis import given, settings, strategies as st

from mixtile.graph import (Graph, TiledGuest, complete_bipartite, complete_graph, cycle_graph, disjoint_union,
                           path_graph)
from mixtile.oracles import (NONE, SOME, UNDECIDED, EmbeddingWitness, brute_embed, brute_perfect_tiling,
                             subset_sum_dp, subset_sums)

K2, K3 = complete_graph(2), complete_graph(3)


def injective_brute(h: Graph, g: Graph) -> bool:
    return any(all(g.has_edge(m[u], m[v]) for u, v in h.edges)
               for m in itertools.permutations(range(g.n), h.n))


@st.composite
def small_pair(draw):
    n = draw(st.integers(2, 6))
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    g = Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.6])
    tiles = draw(st.lists(st.sampled_from([Graph(1), K2, path_graph(3), K3]), min_size=1, max_size=3))
    return TiledGuest(tuple(tiles)), g


class TestEmbed:
    def test_matching_in_k33(self):
        r = brute_embed(TiledGuest((K2,) * 3), complete_bipartite(3, 3))
        assert r.status == SOME and r.witness.is_valid(TiledGuest((K2,) * 3), complete_bipartite(3, 3))

    def test_k4_not_in_bipartite(self):
        assert brute_embed(TiledGuest((complete_graph(4),)), complete_bipartite(3, 3)).status == NONE

    def test_triangle_tilings(self):
        assert brute_perfect_tiling(complete_graph(6), K3).status == SOME
        assert brute_perfect_tiling(cycle_graph(6), K3).status == NONE

    def test_budget(self):
        r = brute_embed(TiledGuest((complete_bipartite(2, 4),) * 2), complete_bipartite(3, 9), budget=5)
        assert r.status == UNDECIDED

    @settings(max_examples=60, deadline=None)
    @given(small_pair())
    def test_matches_permutation_search(self, pair):
        h, g = pair
        if h.n > g.n:
            assert brute_embed(h, g).status == NONE
            return
        res = brute_embed(h, g)
        assert (res.status == SOME) == injective_brute(h.graph, g)
        if res.status == SOME:
            assert res.witness.is_valid(h, g)

    def test_witness_problems(self):
        w = EmbeddingWitness((0, 0))
        assert "map is not injective" in w.problems(K2, K3)
        assert EmbeddingWitness((0,)).problems(K2, K3)


class TestSubsetSums:
    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.integers(0, 6), max_size=8), st.integers(0, 12), st.integers(0, 5))
    def test_against_enumeration(self, xs, lo, width):
        sums = {sum(c) for r in range(len(xs) + 1) for c in itertools.combinations(xs, r)}
        bits = subset_sums(xs)
        assert {i for i in range(bits.bit_length()) if bits >> i & 1} == sums
        assert subset_sum_dp(xs, lo, lo + width) == all(x in sums for x in range(lo, lo + width + 1))

    def test_empty_range(self):
        assert subset_sum_dp([], 3, 2)


def test_isolated_vertices_absorb_clique_sizes():
    # K_5 + K_7 has no perfect K_{2,4}-tiling, but one K_{2,4} and six isolated vertices fit
    host = disjoint_union([complete_graph(5), complete_graph(7)])
    k24 = complete_bipartite(2, 4)
    assert brute_embed(TiledGuest((k24, k24)), host).status == NONE
    assert brute_embed(TiledGuest((k24,) + (Graph(1),) * 6), host).status == SOME
