"""Exact Independent Set and Dominating Set: brute-force oracles against the decomposition DP."""

from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import complete, cycle, edgeless, path_graph, random_decomposition, random_graph, star
from oracles import alpha_enum, alpha_milp, cut_mim_enum, gamma_enum, gamma_milp
from vpgkit.decomposition import caterpillar, decompose
from vpgkit.errors import ClassBudgetExceeded, InstanceTooLarge
from vpgkit.graph import Cut, Graph, intersection_graph
from vpgkit.lab import gen_random_vpg, gen_split_graph_rep
from vpgkit.solvers import (
    DPStats,
    Kind,
    Solution,
    brute_force_ds,
    brute_force_is,
    enumerate_neighbor_classes,
    neighbor_classes,
    solve,
    solve_ds_bd,
    solve_is_bd,
    union_solution,
    verify_solution,
)


def spine(g: Graph):
    return caterpillar(list(g.vertices))


class TestSolution:
    def test_text_roundtrip(self):
        s = Solution(Kind.IS, frozenset({"b", "a"}))
        assert s.to_text() == "IS 2\na\nb\n"
        assert Solution.from_text(s.to_text()) == s

    def test_header_mismatch(self):
        with pytest.raises(ValueError):
            Solution.from_text("DS 3\na\n")

    def test_verify_sets_flag(self):
        g = path_graph(3)
        s = Solution(Kind.IS, frozenset({"v0", "v2"}))
        assert verify_solution(g, s) and s.verified

    def test_adjacent_pair_not_independent(self):
        assert not verify_solution(path_graph(2), Solution(Kind.IS, frozenset({"v0", "v1"})))

    def test_whole_vertex_set_dominates(self):
        g = random_graph(7, 0.3, 0)
        assert verify_solution(g, Solution(Kind.DS, frozenset(g.vertices)))

    def test_union(self):
        u = union_solution(Kind.IS, [Solution(Kind.IS, frozenset("a")), Solution(Kind.IS, frozenset("bc"))])
        assert u.vertices == frozenset("abc")


class TestBruteForce:
    @pytest.mark.parametrize("g, alpha", [(complete(3), 1), (edgeless(7), 7), (cycle(5), 2)])
    def test_is_examples(self, g, alpha):
        assert brute_force_is(g).value == alpha

    @pytest.mark.parametrize("g, gamma", [(complete(6), 1), (path_graph(4), 2), (star(5), 1)])
    def test_ds_examples(self, g, gamma):
        assert brute_force_ds(g).value == gamma

    def test_empty_graph(self):
        g = Graph([], [])
        assert brute_force_is(g).value == brute_force_ds(g).value == 0

    def test_limit(self):
        with pytest.raises(InstanceTooLarge):
            brute_force_is(edgeless(61))

    @given(st.integers(0, 10_000), st.integers(1, 12), st.sampled_from([0.2, 0.4, 0.7]))
    def test_match_enumeration(self, seed, n, p):
        g = random_graph(n, p, seed)
        a, d = brute_force_is(g), brute_force_ds(g)
        assert verify_solution(g, a) and verify_solution(g, d)
        assert a.value == alpha_enum(g) and d.value == gamma_enum(g)

    @given(st.integers(0, 10_000), st.integers(1, 10))
    def test_lexicographic_tie_break(self, seed, n):
        g = random_graph(n, 0.35, seed)
        masks = range(1 << n)
        for sol, ok, pick in ((brute_force_is(g), lambda m: all(not (g.adj[i] & m) for i in range(n) if m >> i & 1), max),
                              (brute_force_ds(g), None, min)):
            if ok is None:
                closed = [a | 1 << i for i, a in enumerate(g.adj)]

                def ok(m):
                    cov = 0
                    for i in range(n):
                        if m >> i & 1:
                            cov |= closed[i]
                    return cov == (1 << n) - 1
            feasible = [m for m in masks if ok(m)]
            size = pick(bin(m).count("1") for m in feasible)
            best = min(tuple(i for i in range(n) if m >> i & 1) for m in feasible if bin(m).count("1") == size)
            assert sorted(g.index[v] for v in sol.vertices) == list(best)

    @pytest.mark.parametrize("seed", range(10))
    def test_larger_instances_match_milp(self, seed):
        g = random_graph(35, 0.12, seed)
        assert brute_force_is(g).value == alpha_milp(g)
        assert brute_force_ds(g).value == gamma_milp(g)


class TestNeighborClasses:
    def test_no_crossing_edges(self):
        g = edgeless(4)
        assert len(enumerate_neighbor_classes(g, Cut.of(g, ["v0", "v1"]))) == 1

    def test_single_crossing_edge(self):
        g = path_graph(2)
        classes = enumerate_neighbor_classes(g, Cut.of(g, ["v0"]))
        assert {c.representative for c in classes} == {frozenset(), frozenset({"v0"})}

    def test_budget(self):
        m = 8
        vs = [f"a{i}" for i in range(m)] + [f"b{i}" for i in range(m)]
        g = Graph.from_edges(vs, [(f"a{i}", f"b{i}") for i in range(m)])
        with pytest.raises(ClassBudgetExceeded):
            enumerate_neighbor_classes(g, Cut.of(g, vs[:m]), budget=100)

    @given(st.integers(0, 10_000), st.integers(2, 14))
    def test_census_matches_all_subsets(self, seed, n):
        g = random_graph(n, 0.3, seed)
        rng = random.Random(seed)
        a = sum(1 << i for i in range(n) if rng.random() < 0.5)
        b = g.all_mask & ~a
        side = [i for i in range(n) if a >> i & 1]
        census = set()
        for k in range(len(side) + 1):
            for sub in combinations(side, k):
                sig = 0
                for i in sub:
                    sig |= g.adj[i]
                census.add(sig & b)
        classes = neighbor_classes(g, a, b)
        assert set(classes) == census
        for sig, rep in classes.items():
            got = 0
            for i in range(n):
                if rep >> i & 1:
                    got |= g.adj[i]
            assert rep & ~a == 0 and got & b == sig
        w = cut_mim_enum(g, a)
        assert len(classes) <= (bin(b).count("1") + 1) ** w


class TestDecompositionDP:
    def test_edgeless(self):
        g = edgeless(6)
        assert solve_is_bd(g, spine(g)).value == 6
        assert solve_ds_bd(g, spine(g)).value == 6

    @pytest.mark.parametrize("n", [1, 2, 5, 9])
    def test_complete(self, n):
        g = complete(n)
        assert solve_ds_bd(g, spine(g)).value == 1
        assert solve_is_bd(g, spine(g)).value == 1

    def test_split_graph_four_three(self):
        cs, ins = ["c0", "c1", "c2", "c3"], ["i0", "i1", "i2"]
        r = gen_split_graph_rep(cs, ins, [("c0", "i0"), ("c1", "i1"), ("c3", "i2"), ("c3", "i0")])
        g = intersection_graph(r)
        sol = solve_is_bd(g, decompose(r))
        assert sol.value >= len(ins) and sol.value == brute_force_is(g).value

    def test_empty_graph(self):
        g = Graph([], [])
        assert solve_is_bd(g, caterpillar([])).value == 0
        assert solve_ds_bd(g, caterpillar([])).value == 0

    def test_budget_exceeded(self):
        g = random_graph(16, 0.5, 1)
        with pytest.raises(ClassBudgetExceeded):
            solve_ds_bd(g, spine(g), budget=3)

    def test_stats(self):
        g = random_graph(10, 0.3, 2)
        stats = DPStats()
        solve_ds_bd(g, spine(g), stats=stats)
        assert stats.max_table >= 1 and stats.max_classes >= 1

    @given(st.integers(0, 10_000), st.integers(1, 13), st.sampled_from([0.15, 0.3, 0.5]), st.booleans())
    def test_match_oracles(self, seed, n, p, use_spine):
        g = random_graph(n, p, seed)
        vs = list(g.vertices)
        random.Random(seed).shuffle(vs)
        bd = caterpillar(vs) if use_spine else random_decomposition(vs, seed)
        a, d = solve(g, bd, Kind.IS), solve(g, bd, "DS")
        assert verify_solution(g, a) and verify_solution(g, d)
        assert a.value == brute_force_is(g).value
        assert d.value == brute_force_ds(g).value

    @pytest.mark.parametrize("seed", range(30))
    def test_on_representations(self, seed):
        r = gen_random_vpg(16, 2, 3, 2, 6, seed)
        g = intersection_graph(r)
        bd = decompose(r)
        assert solve_is_bd(g, bd).value == brute_force_is(g).value
        assert solve_ds_bd(g, bd).value == brute_force_ds(g).value

    @pytest.mark.parametrize("seed", range(20))
    def test_disconnected_is_additive(self, seed):
        g1, g2 = random_graph(7, 0.3, seed), random_graph(6, 0.4, seed + 100)
        vs = [f"a{v}" for v in g1.vertices] + [f"b{v}" for v in g2.vertices]
        es = [(f"a{g1.vertices[i]}", f"a{g1.vertices[j]}") for i, j in g1.edges()]
        es += [(f"b{g2.vertices[i]}", f"b{g2.vertices[j]}") for i, j in g2.edges()]
        g = Graph.from_edges(vs, es)
        bd = random_decomposition(vs, seed)
        assert solve_ds_bd(g, bd).value == solve_ds_bd(g1, spine(g1)).value + solve_ds_bd(g2, spine(g2)).value
        assert solve_is_bd(g, bd).value == solve_is_bd(g1, spine(g1)).value + solve_is_bd(g2, spine(g2)).value


@given(st.integers(0, 10_000))
def test_single_edge_addition(seed):
    g = random_graph(9, 0.3, seed)
    missing = [(i, j) for i in range(g.n) for j in range(i + 1, g.n) if not g.adj[i] >> j & 1]
    if not missing:
        return
    i, j = random.Random(seed).choice(missing)
    adj = list(g.adj)
    adj[i] |= 1 << j
    adj[j] |= 1 << i
    h = Graph(g.vertices, adj)
    assert brute_force_is(h).value <= brute_force_is(g).value
    assert brute_force_ds(g).value - 1 <= brute_force_ds(h).value <= brute_force_ds(g).value
