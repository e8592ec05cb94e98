"""Shifting schemes: column sets, windows, variant graphs and approximation ratios."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import path, rep, wide_instance
from vpgkit.errors import PreconditionError
from vpgkit.graph import intersection_graph
from vpgkit.lab import gen_random_vpg
from vpgkit.model import horizontal_part
from vpgkit.ptas import (
    ShiftConfigDS,
    ShiftConfigIS,
    Window,
    baker_ds,
    baker_is,
    build_windows,
    check_windows,
    compute_v_sets,
    compute_x_sets,
    overlap_total,
    parse_epsilon,
    run_baker_ds,
    run_baker_is,
    vd_sets,
    window_variants,
)
from vpgkit.solvers import brute_force_ds, brute_force_is, verify_solution


def instance(seed: int, n: int = 14, c: int = 2, cols: int = 14, bends: int = 2):
    return gen_random_vpg(n, bends, c, 2, cols, seed)


def mixed(seed: int, n: int, c: int):
    """Even seeds give a wide connected chain, odd seeds a scattered random instance."""
    return wide_instance(n, c, seed) if seed % 2 == 0 else instance(seed, n=n, c=c, cols=8 * c)


def x_sets_from_traces(r) -> dict[int, frozenset[str]]:
    acc: dict[int, set[str]] = {}
    for p in r.paths:
        tr = p.trace
        for a, b in zip(tr, tr[1:]):
            if a.y == b.y:
                acc.setdefault(min(a.x, b.x), set()).add(p.id)
    return {i: frozenset(v) for i, v in sorted(acc.items())}


class TestConfig:
    def test_parse_epsilon(self):
        assert parse_epsilon("1/3") == Fraction(1, 3)
        assert parse_epsilon(0.25) == Fraction(1, 4)
        for bad in ("0", "1", "3/2", -0.1):
            with pytest.raises(ValueError):
                parse_epsilon(bad)

    def test_is_half_c1(self):
        cfg = ShiftConfigIS(Fraction(1, 2), 1)
        assert (cfg.k, cfg.period) == (2, 2)

    @pytest.mark.parametrize("eps, k", [("1/3", 3), ("1/5", 5), ("2/5", 3), ("9/10", 2)])
    def test_is_k(self, eps, k):
        assert ShiftConfigIS(Fraction(eps), 2).k == k

    def test_ds_r(self):
        cfg = ShiftConfigDS(Fraction(1, 2), 1, 10, 0)
        assert cfg.k == 3 and cfg.r == 3

    @given(st.sampled_from(["1/2", "1/3", "1/5", "2/3", "7/8"]), st.integers(1, 5))
    def test_ds_k_exceeds_c(self, eps, c):
        cfg = ShiftConfigDS(Fraction(eps), c, 100)
        assert cfg.k > c and cfg.shifts == cfg.k + c
        for s in range(cfg.shifts):
            assert cfg.at_shift(s).r >= 1

    def test_ds_exact_threshold(self):
        assert ShiftConfigDS(Fraction(1, 2), 1, 4).exact
        assert not ShiftConfigDS(Fraction(1, 2), 1, 5).exact


class TestColumnSets:
    def test_vertical_path(self):
        r = rep(path("a", (4, 0), (4, 3)), path("b", (0, 1), (4, 1)))
        assert all("a" not in xs for xs in compute_x_sets(r).values())
        assert [j for j, vs in compute_v_sets(r).items() if "a" in vs] == [4]

    def test_horizontal_path(self):
        r = rep(path("a", (0, 0), (3, 0)))
        assert compute_x_sets(r) == {i: frozenset("a") for i in range(3)}
        assert compute_v_sets(r) == {j: frozenset("a") for j in range(4)}

    @given(st.integers(0, 10_000))
    def test_match_trace_recount(self, seed):
        r = instance(seed, n=12, c=3, cols=10, bends=3).normalized_origin()
        xs, vs = compute_x_sets(r), compute_v_sets(r)
        assert xs == x_sets_from_traces(r)
        for j, members in vs.items():
            assert members == {p.id for p in r.paths if any(q.x == j for q in p.trace)}
        for i, members in xs.items():
            assert members <= vs[i] and members <= vs[i + 1]
        c = max(1, r.max_horizontal)
        assert len(xs) <= (c + 1) * len(r) - 1

    @given(st.integers(0, 10_000), st.sampled_from(["1/2", "1/3", "1/5"]))
    def test_each_vertex_in_at_most_c_deletion_sets(self, seed, eps):
        r = instance(seed, c=3).normalized_origin()
        c = max(1, r.max_horizontal)
        deleted = vd_sets(compute_x_sets(r), ShiftConfigIS(Fraction(eps), c))
        for v in r.ids:
            assert sum(v in d for d in deleted) <= c


class TestWindows:
    def test_precondition(self):
        r = rep(path("a", (0, 0), (1, 0)))
        with pytest.raises(PreconditionError):
            build_windows(r, ShiftConfigDS(Fraction(1, 2), 1, 2))

    def test_fixed_layout(self):
        # a chain of unit segments spanning ten columns
        r = rep(*(path(f"h{i}", (i, 0), (i + 1, 0)) for i in range(9)))
        cfg = ShiftConfigDS(Fraction(1, 2), 1, 10, 0)
        wins = build_windows(r, cfg)
        assert len(wins) == cfg.r + 1 == 4
        assert wins[0].exterior_left is None and wins[-1].exterior_right is None
        assert wins[1].exterior_left == frozenset() and wins[1].exterior_right == frozenset({"h4"})
        check_windows(r, cfg, wins)

    @pytest.mark.parametrize("seed", range(40))
    def test_window_properties_on_every_shift(self, seed):
        r = mixed(seed, 20, 1 + seed % 3).normalized_origin()
        c = max(1, r.max_horizontal)
        base = ShiftConfigDS(Fraction(1, 2), c, r.column_count)
        if base.exact:
            pytest.skip("too few columns for windows")
        for s in range(base.shifts):
            cfg = base.at_shift(s)
            wins = build_windows(r, cfg)
            check_windows(r, cfg, wins)
            inner = set().union(*(w.interior for w in wins))
            assert inner == set(r.ids)
            for a, b in combinations(wins, 2):
                if b.index - a.index > 1:
                    assert not a.vertices & b.vertices
            for w in wins:
                assert w.exterior <= w.vertices and not (w.interior & w.exterior)
                assert w.is_boundary == (w.index in (0, len(wins) - 1))

    def test_check_detects_missing_cover(self):
        r = rep(*(path(f"h{i}", (i, 0), (i + 1, 0)) for i in range(9)))
        cfg = ShiftConfigDS(Fraction(1, 2), 1, 10, 0)
        wins = build_windows(r, cfg)
        broken = [Window(w.index, w.vertices, w.exterior_left, frozenset(w.vertices)) if w.index == 1 else w
                  for w in wins]
        broken[2] = Window(2, broken[2].vertices, broken[2].vertices, broken[2].exterior_right)
        with pytest.raises(AssertionError):
            check_windows(r, cfg, broken)


class TestVariants:
    def test_no_exterior(self):
        r = instance(3, n=8)
        g = intersection_graph(r)
        w = Window(1, frozenset(g.vertices), frozenset(), frozenset())
        vs = window_variants(g, w)
        assert set(vs) == {"I", "L", "R", "LR"} and all(h == g for h in vs.values())

    def test_singleton_exterior(self):
        r = instance(5, n=8)
        g = intersection_graph(r)
        v = g.vertices[0]
        w = Window(1, frozenset(g.vertices), frozenset({v}), frozenset())
        assert window_variants(g, w)["L"] == g.induced(g.vertices)

    def test_boundary_has_two_variants(self):
        g = intersection_graph(instance(2, n=6))
        w = Window(0, frozenset(g.vertices), None, frozenset(g.vertices[:2]))
        assert set(window_variants(g, w)) == {"I", "LR"}

    @pytest.mark.parametrize("seed", range(30))
    def test_lr_matches_reconstruction(self, seed):
        rng = random.Random(seed)
        g = intersection_graph(instance(seed, n=12))
        vs = rng.sample(list(g.vertices), 9)
        left, right = frozenset(vs[:3]), frozenset(vs[6:8])
        h = window_variants(g, Window(1, frozenset(vs), left, right))["LR"]
        expected = {frozenset((g.vertices[i], g.vertices[j])) for i, j in g.edges()
                    if g.vertices[i] in vs and g.vertices[j] in vs}
        expected |= {frozenset(p) for side in (left, right) for p in combinations(side, 2)}
        assert {frozenset((h.vertices[i], h.vertices[j])) for i, j in h.edges()} == expected


class TestBakerIS:
    def test_narrow_instance_is_exact(self):
        r = instance(1, n=10, c=1, cols=2)
        g = intersection_graph(r)
        assert baker_is(r, "1/2", c=4).value == brute_force_is(g).value

    def test_c_too_small(self):
        r = rep(path("a", (0, 0), (5, 0)))
        with pytest.raises(PreconditionError):
            baker_is(r, "1/2", c=2)

    @pytest.mark.parametrize("seed", range(30))
    @pytest.mark.parametrize("eps", ["1/2", "1/3", "1/5"])
    def test_ratio(self, seed, eps):
        r = mixed(seed, 16, 1 + seed % 3)
        g = intersection_graph(r)
        run = run_baker_is(r, eps)
        assert verify_solution(g, run.solution)
        assert run.solution.value >= (1 - Fraction(eps)) * brute_force_is(g).value
        assert run.within_budget

    def test_diagnostics_csv(self):
        run = run_baker_is(instance(0), "1/2")
        lines = run.diagnostics_csv().splitlines()
        assert lines[0] == "component,shift,parts,max_width,value"
        assert len(lines) == 1 + len(run.diagnostics)


class TestBakerDS:
    def test_narrow_instance_is_exact(self):
        r = instance(4, n=10, c=1, cols=3)
        g = intersection_graph(r)
        assert baker_ds(r, "1/2", c=1).value == brute_force_ds(g).value

    @pytest.mark.parametrize("seed", range(30))
    @pytest.mark.parametrize("eps", ["1/2", "1/3"])
    def test_ratio(self, seed, eps):
        r = mixed(seed, 14, 1 + seed % 3)
        g = intersection_graph(r)
        run = run_baker_ds(r, eps)
        assert verify_solution(g, run.solution)
        assert run.solution.value <= (1 + Fraction(eps)) * brute_force_ds(g).value
        assert run.within_budget

    @pytest.mark.parametrize("seed", range(25))
    def test_window_choice_bounded_by_optimum(self, seed):
        r = wide_instance(13, 1 + seed % 3, seed)
        g = intersection_graph(r)
        opt = brute_force_ds(g).vertices
        choices = []
        run_baker_ds(r, "1/2", trace=choices.append)
        assert choices
        for ch in choices:
            assert len(ch.solution) <= len(opt & ch.window.vertices)

    @pytest.mark.parametrize("seed", range(25))
    def test_overlap_accounting(self, seed):
        r = mixed(seed, 12, 1 + seed % 3).normalized_origin()
        g = intersection_graph(r)
        opt = brute_force_ds(g).vertices
        c = max(1, r.max_horizontal)
        assert overlap_total(r, "1/2", opt) <= 2 * c * len(opt)

    def test_disconnected_is_per_component(self):
        left = instance(7, n=8, c=1, cols=8)
        right = left.translated(0, 1000).with_paths(
            p.__class__(p.id + "x", p.points) for p in left.translated(0, 1000).paths)
        both = left.with_paths(left.paths + right.paths)
        single = baker_ds(left, "1/2", c=1).value
        assert baker_ds(both, "1/2", c=1).value == 2 * single


def test_horizontal_part_bounds_c():
    r = instance(11, c=2)
    assert max(horizontal_part(p).length for p in r.paths) <= 2
