import numpy as np
import pytest

from cutbal import oracle
from cutbal._util import rng_stream
from cutbal.graph import DiGraph
from cutbal.strength import (StrengthMap, compute_strengths,
                             decomposition_components, global_min_cut,
                             strength_sum_check)
from tests.conftest import random_digraph


def triangle():
    return DiGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])


def two_k4s_with_bridge():
    edges = [(i, j, 1.0) for i in range(4) for j in range(4) if i < j]
    edges += [(4 + i, 4 + j, 1.0) for i in range(4) for j in range(4) if i < j]
    edges.append((0, 4, 1.0))
    return DiGraph(8, edges)


class TestGlobalMinCut:
    def test_triangle(self):
        value, side = global_min_cut(triangle())
        assert value == 2.0 and 0 < len(side) < 3

    def test_unit_path(self):
        g = DiGraph(3, [(0, 1, 1.0), (1, 2, 1.0)])
        assert global_min_cut(g)[0] == 1.0

    def test_disconnected_returns_zero_and_separating_side(self):
        g = DiGraph(4, [(0, 1, 1.0), (2, 3, 1.0)])
        value, side = global_min_cut(g)
        assert value == 0.0
        ind = side.indicator()
        assert not np.any(ind[g.tails] != ind[g.heads])

    def test_matches_enumeration_on_random_graphs(self):
        for seed in range(15):
            g = random_digraph(rng_stream(seed, 11), 10, 20)
            value, side = global_min_cut(g)
            # enumerate undirected cut weights directly
            best = min(
                cut_out + cut_in
                for cut_out, cut_in in _all_cut_pairs(g))
            assert value == pytest.approx(best, abs=1e-9)
            ind = side.indicator()
            crossing = np.where(ind[g.tails] != ind[g.heads], g.weights, 0.0).sum()
            assert crossing == pytest.approx(value, abs=1e-9)


def _all_cut_pairs(g):
    from cutbal import kernels
    from cutbal._util import proper_masks

    for masks in proper_masks(g.n):
        out_w, in_w = kernels.cut_weights(g.tails, g.heads, g.weights, masks)
        yield from zip(out_w, in_w)


class TestComputeStrengths:
    def test_tree_all_ones(self):
        tree = DiGraph(5, [(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (3, 4, 1.0)])
        assert compute_strengths(tree).values.tolist() == [1.0] * 4

    def test_two_k4s_with_bridge(self):
        g = two_k4s_with_bridge()
        sm = compute_strengths(g)
        assert sm.values[-1] == 1.0          # the bridge
        assert np.all(sm.values[:-1] == 3.0)  # clique edges

    def test_exact_flag(self):
        assert compute_strengths(triangle()).exact

    def test_matches_brute_force_definition(self):
        for seed in range(25):
            rng = rng_stream(seed, 12)
            g = random_digraph(rng, int(rng.integers(3, 9)), int(rng.integers(3, 16)))
            sm = compute_strengths(g)
            for e in range(g.m):
                assert sm.values[e] == oracle.brute_strength(g, e)

    def test_strength_dominates_component_min_cut(self, rng):
        g = random_digraph(rng, 8, 16)
        value, _ = global_min_cut(g)
        sm = compute_strengths(g)
        assert np.all(sm.values >= value - 1e-12)

    def test_laminar_family_with_few_nontrivial_components(self):
        for seed in range(10):
            g = random_digraph(rng_stream(seed, 13), 8, 18)
            comps = decomposition_components(g)
            assert len(set(comps)) <= g.n - 1
            for a in comps:
                for b in comps:
                    assert a <= b or b <= a or not (a & b)


class TestStrengthSumCheck:
    def test_triangle(self):
        g = triangle()
        assert strength_sum_check(g, compute_strengths(g)) == pytest.approx(1.5)

    def test_tree_is_exactly_n_minus_one(self):
        tree = DiGraph(6, [(i, i + 1, 1.0) for i in range(5)])
        assert strength_sum_check(tree, compute_strengths(tree)) == pytest.approx(5.0)

    def test_k4(self):
        k4 = DiGraph(4, [(i, j, 1.0) for i in range(4) for j in range(4) if i < j])
        assert strength_sum_check(k4, compute_strengths(k4)) == pytest.approx(2.0)

    def test_bound_on_random_graphs(self):
        for seed in range(20):
            g = random_digraph(rng_stream(seed, 14), 7, 15)
            total = strength_sum_check(g, compute_strengths(g))
            assert total <= g.n - 1 + 1e-9

    def test_wrong_coverage_rejected(self):
        g = triangle()
        with pytest.raises(ValueError):
            strength_sum_check(g, StrengthMap(np.ones(2)))
