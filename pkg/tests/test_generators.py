import math

import numpy as np
import pytest

from cutbal import oracle
from cutbal.generators import (connectivity_sample,
                               decode_estimates, edge_connectivities,
                               foreach_lb_layout, gamma_witness_cut,
                               gen_eulerian, gen_forall_lb_chain,
                               gen_foreach_lb, gen_gamma_counterexample,
                               gen_matching_family, gen_multiclass,
                               gen_skewed_clique)
from cutbal.graph import (cut_weight, is_eulerian,
                          is_strongly_connected, weight_classes)


class TestGenEulerian:
    @pytest.mark.parametrize("n,m", [(2, 6), (5, 5), (5, 6), (8, 20), (12, 40)])
    def test_structure(self, n, m):
        g = gen_eulerian(n, m, seed=3)
        assert g.m == m
        assert is_eulerian(g)
        assert is_strongly_connected(g)

    def test_balance_is_one(self):
        g = gen_eulerian(10, 30, seed=7)
        assert oracle.exact_graph_balance(g) == 1.0

    def test_determinism(self):
        assert gen_eulerian(9, 22, seed=5) == gen_eulerian(9, 22, seed=5)
        assert gen_eulerian(9, 22, seed=5) != gen_eulerian(9, 22, seed=6)

    def test_infeasible_rejected(self):
        with pytest.raises(ValueError):
            gen_eulerian(5, 4)
        with pytest.raises(ValueError):
            gen_eulerian(2, 5)


class TestGenMatchingFamily:
    def test_forward_edges_are_exactly_the_matching(self):
        n = 9
        g = gen_matching_family(n, seed=2)
        forward = [(t, h) for t, h, _ in g.edge_list() if t < n]
        assert sorted(forward) == [(i, n + i) for i in range(n)]

    def test_side_floor(self):
        with pytest.raises(ValueError):
            gen_matching_family(7)

    def test_in_degree_window_at_scale(self):
        # per-vertex back-degree concentrates in [3n/8, 5n/8] once n is large
        n = 256
        ok_seeds = 0
        for seed in range(10):
            g = gen_matching_family(n, seed=seed)
            back_heads = g.heads[n:]
            deg = np.bincount(back_heads, minlength=n)[:n]
            out_deg = np.bincount(g.tails[n:] - n, minlength=n)[:n]
            if (deg >= 3 * n / 8).all() and (deg <= 5 * n / 8).all() \
                    and (out_deg >= 3 * n / 8).all() and (out_deg <= 5 * n / 8).all():
                ok_seeds += 1
        assert ok_seeds >= 9


class TestGenForallLbChain:
    def test_structure_and_balance(self):
        beta, eps = 2.0, 0.5
        g = gen_forall_lb_chain(16, beta, eps, seed=4)
        k, t = 4, 4
        assert is_strongly_connected(g)
        assert g.m <= t * (k + k * k)
        assert oracle.exact_graph_balance(g) <= 8 * beta

    def test_matching_weights(self):
        g = gen_forall_lb_chain(16, 2.0, 0.5, seed=4)
        heavy = [w for _, _, w in g.edge_list() if w != 1.0]
        assert set(heavy) == {2.0} and len(heavy) == 12  # (t-1) * k forward edges

    def test_divisibility_rejected(self):
        with pytest.raises(ValueError):
            gen_forall_lb_chain(15, 2.0, 0.5)
        with pytest.raises(ValueError):
            gen_forall_lb_chain(16, 2.0, 0.3)


class TestForeachLbLayout:
    def test_exact_square(self):
        assert foreach_lb_layout(12, 4.0, 0.25) == (4, 3, 32)

    def test_divisor_fallback(self):
        assert foreach_lb_layout(20, 25.0, 0.1) == (10, 2, 100)
        assert foreach_lb_layout(10, 25.0, 0.1) == (5, 2, 25)

    def test_infeasible(self):
        with pytest.raises(ValueError):
            foreach_lb_layout(1, 4.0, 0.25)


class TestGenForeachLb:
    def test_exact_decode_everywhere(self):
        for seed in (0, 1, 2):
            g, queries, bits = gen_foreach_lb(12, 4.0, 0.25, seed=seed)
            est = [cut_weight(g, q.cut) for q in queries]
            assert (decode_estimates(queries, est) == bits).all()

    def test_single_bipartite_edge_leaves_each_decode_cut(self):
        g, queries, bits = gen_foreach_lb(20, 25.0, 0.1, seed=3)
        for q in queries:
            value = cut_weight(g, q.cut)
            assert value == q.base + 1.0 + bits[q.bit_index]

    def test_strongly_connected(self):
        g, _, _ = gen_foreach_lb(12, 4.0, 0.25, seed=1)
        assert is_strongly_connected(g)

    def test_simple_variant_values_differ_by_one(self):
        # two clusters joined by a unit cycle; each value is base+1 or base+2
        g, queries, bits = gen_foreach_lb(12, 36.0, 1.0, seed=1)
        values = np.array([cut_weight(g, q.cut) for q in queries])
        bases = np.array([q.base for q in queries])
        assert np.array_equal(values, bases + 1.0 + bits)
        assert any(v in (2.0, 3.0) for v in values)

    def test_bits_length_validated(self):
        with pytest.raises(ValueError):
            gen_foreach_lb(12, 4.0, 0.25, bits=[0, 1])

    def test_explicit_bits_are_encoded(self):
        _, _, n_bits = foreach_lb_layout(12, 4.0, 0.25)
        bits = [(i * 7) % 2 for i in range(n_bits)]
        g, queries, stored = gen_foreach_lb(12, 4.0, 0.25, bits=bits, seed=0)
        est = [cut_weight(g, q.cut) for q in queries]
        assert decode_estimates(queries, est).tolist() == bits

    def test_cycle_weight_class(self):
        g, _, _ = gen_foreach_lb(12, 4.0, 0.25, seed=0)
        indices = {v.index for v in weight_classes(g)}
        assert math.frexp(1 / 0.25)[1] in indices  # cycle weight 4 in class 3


class TestGammaCounterexample:
    def test_connectivities(self):
        g = gen_gamma_counterexample(16)
        gam = edge_connectivities(g)
        assert np.all(gam[:8] == 1.0)          # matching edges
        assert np.all(gam[8:] >= 7.0)          # back edges, n/2 - 1
        assert (1.0 / gam).sum() <= 2 * 16     # linear-size sampling budget

    def test_parity_rejected(self):
        with pytest.raises(ValueError):
            gen_gamma_counterexample(9)

    def test_witness_cut_shape(self):
        g = gen_gamma_counterexample(16)
        gam = edge_connectivities(g)
        h, _ = connectivity_sample(g, gam, math.log(16), seed=0)
        w = gamma_witness_cut(g, h)
        # matching edges survive at weight 1 inside the sample
        assert all(weight == 1.0 for t, _, weight in h.edge_list() if t < 8)
        assert len(w) >= 1


class TestOtherGenerators:
    def test_skewed_clique_balance_is_the_skew(self):
        g = gen_skewed_clique(10, 4.0)
        assert oracle.exact_graph_balance(g) == 4.0

    def test_multiclass_weight_spread(self):
        g = gen_multiclass(16, 4, 32, seed=1)
        views = weight_classes(g)
        assert [v.index for v in views] == [1, 2, 3, 4]
        assert all(v.edge_ids.size == 32 for v in views)
