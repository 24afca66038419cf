import math

import numpy as np
import pytest

from cutbal import forall
from cutbal._util import TAG_SPARSIFY, rng_stream
from cutbal.generators import gen_eulerian
from cutbal.graph import CutSet, DiGraph, cut_weight
from cutbal.strength import compute_strengths
from tests.conftest import random_digraph


@pytest.fixture(scope="module")
def eulerian_with_strengths():
    g = gen_eulerian(12, 600, seed=5)
    return g, compute_strengths(g)


class TestParameters:
    def test_rejects_bad_arguments(self):
        g = DiGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
        with pytest.raises(ValueError):
            forall.sparsify(g, beta=0.5, eps=0.2)
        with pytest.raises(ValueError):
            forall.sparsify(g, beta=1.0, eps=1.2)
        with pytest.raises(ValueError):
            forall.sparsify(g, beta=1.0, eps=0.2, d=2.0)

    def test_rate_formula(self):
        assert forall.sampling_rate(10, 1.0, 0.5, 3.0) == \
            pytest.approx(3 * 3 * 2 * math.log(10) / 0.25)


class TestSparsify:
    def test_clamped_regime_returns_the_graph_unchanged(self):
        g = DiGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
        res = forall.sparsify(g, beta=1.0, eps=0.5, d=3.0, seed=9)
        assert res.h == g
        assert res.expected_edges == pytest.approx(3.0)

    def test_seed_determinism(self, eulerian_with_strengths):
        g, sm = eulerian_with_strengths
        a = forall.sample_with_strengths(g, sm, 1.0, 0.9, d=2.5, seed=4)
        b = forall.sample_with_strengths(g, sm, 1.0, 0.9, d=2.5, seed=4)
        c = forall.sample_with_strengths(g, sm, 1.0, 0.9, d=2.5, seed=5)
        assert a.h == b.h
        assert a.h != c.h

    def test_survivor_weights_are_inverse_probability(self, eulerian_with_strengths):
        g, sm = eulerian_with_strengths
        res = forall.sample_with_strengths(g, sm, 1.0, 0.9, d=2.5, seed=0)
        assert 0 < res.kept_edges < g.m
        _, p = forall.keep_probabilities(g, sm, 1.0, 0.9, 2.5)
        draws = rng_stream(0, TAG_SPARSIFY).random(g.m)
        keep = draws < p
        rebuilt = DiGraph.from_arrays(g.n, g.tails[keep], g.heads[keep],
                                      (g.weights / p)[keep])
        assert res.h == rebuilt
        assert res.expected_edges == pytest.approx(p.sum())

    def test_clamped_edges_always_survive_at_original_weight(self):
        # two dense blobs joined by a bridge: the bridge has strength 1 and
        # clamps, the blob edges sample at p < 1
        blob = [(i, j, 1.0) for i in range(6) for j in range(6) if i != j]
        blob += [(6 + i, 6 + j, 1.0) for i in range(6) for j in range(6) if i != j]
        blob *= 8
        g = DiGraph(12, blob + [(0, 6, 1.0)])
        sm = compute_strengths(g)
        _, p = forall.keep_probabilities(g, sm, 1.0, 0.9, 2.5)
        assert p[-1] == 1.0 and p[:-1].max() < 1.0
        for seed in range(20):
            res = forall.sample_with_strengths(g, sm, 1.0, 0.9, d=2.5, seed=seed)
            bridges = [(t, h, w) for t, h, w in res.h.edge_list() if (t, h) == (0, 6)]
            assert bridges == [(0, 6, 1.0)]

    def test_mean_cut_weight_is_unbiased(self, eulerian_with_strengths):
        g, sm = eulerian_with_strengths
        s = CutSet(range(0, 12, 2), 12)
        truth = cut_weight(g, s)
        total = 0.0
        runs = 1500
        for i in range(runs):
            total += cut_weight(forall.sample_with_strengths(
                g, sm, 1.0, 0.9, d=2.5, seed=i).h, s)
        assert abs(total / runs - truth) / truth < 0.03


class TestGuaranteedTolerance:
    def test_alpha_equals_beta(self):
        assert forall.guaranteed_tolerance(3.0, 3.0, 0.2) == pytest.approx(0.2)

    def test_four_beta_plus_three(self):
        for beta in (1.0, 2.0, 7.0):
            assert forall.guaranteed_tolerance(4 * beta + 3, beta, 0.2) == \
                pytest.approx(0.4)

    def test_unit_case(self):
        assert forall.guaranteed_tolerance(1.0, 1.0, 0.33) == pytest.approx(0.33)

    def test_rejects_sub_unit(self):
        with pytest.raises(ValueError):
            forall.guaranteed_tolerance(0.5, 1.0, 0.1)


class TestExpectedEdges:
    def test_fully_clamped_equals_m(self):
        g = DiGraph(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])
        assert forall.expected_edges(g, 1.0, 0.3) == pytest.approx(g.m)

    def test_rate_times_n_bound(self):
        for seed in range(8):
            g = random_digraph(rng_stream(seed, 21), 8, 25)
            value = forall.expected_edges(g, 2.0, 0.4, d=3.0)
            rho = forall.sampling_rate(8, 2.0, 0.4, 3.0)
            assert value <= rho * (g.n - 1) + 1e-9

    def test_realized_count_tracks_expectation(self, eulerian_with_strengths):
        g, sm = eulerian_with_strengths
        expected = forall.expected_edges(g, 1.0, 0.9, d=2.5, sm=sm)
        runs = 400
        counts = [forall.sample_with_strengths(g, sm, 1.0, 0.9, d=2.5, seed=i).kept_edges
                  for i in range(runs)]
        sigma = math.sqrt(sum(p * (1 - p) for p in
                              forall.keep_probabilities(g, sm, 1.0, 0.9, 2.5)[1]))
        assert abs(np.mean(counts) - expected) <= 3 * sigma / math.sqrt(runs) + 0.5
