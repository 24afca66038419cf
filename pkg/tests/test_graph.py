import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutbal.errors import ParseError
from cutbal.graph import (CutSet, DiGraph, cut_balance, cut_weight, is_eulerian,
                          is_strongly_connected, read_edge_list, weight_classes,
                          write_edge_list)


@st.composite
def digraphs(draw, max_n=7, max_m=14, min_w=1, max_w=4):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(0, max_m))
    edges = []
    for _ in range(m):
        t = draw(st.integers(0, n - 1))
        h = draw(st.integers(0, n - 2))
        if h >= t:
            h += 1
        edges.append((t, h, float(draw(st.integers(min_w, max_w)))))
    return DiGraph(n, edges)


class TestDiGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            DiGraph(3, [(1, 1, 1.0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            DiGraph(2, [(0, 2, 1.0)])

    def test_rejects_negative_weight(self):
        with pytest.raises(ValueError):
            DiGraph(2, [(0, 1, -0.5)])

    def test_immutable(self):
        g = DiGraph(2, [(0, 1, 1.0)])
        with pytest.raises(AttributeError):
            g.n = 5
        with pytest.raises(ValueError):
            g.weights[0] = 2.0

    def test_parallel_and_antiparallel_edges_kept(self):
        g = DiGraph(2, [(0, 1, 1.0), (0, 1, 2.0), (1, 0, 3.0)])
        assert g.m == 3

    def test_from_arrays_matches_list_form(self):
        rows = [(0, 1, 1.5), (1, 2, 2.0)]
        a = DiGraph(3, rows)
        b = DiGraph.from_arrays(3, [0, 1], [1, 2], [1.5, 2.0])
        assert a == b


class TestCutSet:
    def test_mask_small_universe(self):
        s = CutSet({0, 2}, 4)
        assert s.mask == 0b0101
        assert CutSet.from_mask(0b0101, 4) == s

    def test_complement(self):
        s = CutSet({0}, 3)
        assert set(s.complement()) == {1, 2}

    def test_rejects_out_of_universe(self):
        with pytest.raises(ValueError):
            CutSet({5}, 3)

    def test_large_universe_no_mask(self):
        s = CutSet({0, 70}, 100)
        assert 70 in s
        with pytest.raises(ValueError):
            s.mask


class TestCutWeight:
    def test_single_crossing_edge(self):
        g = DiGraph(3, [(0, 1, 2.0), (1, 0, 1.0), (1, 2, 3.0)])
        assert cut_weight(g, CutSet({0, 1}, 3), "out") == 3.0

    def test_full_set_is_zero_both_ways(self):
        g = DiGraph(3, [(0, 1, 2.0), (1, 2, 3.0)])
        s = CutSet({0, 1, 2}, 3)
        assert cut_weight(g, s, "out") == 0.0
        assert cut_weight(g, s, "in") == 0.0

    def test_universe_mismatch(self):
        g = DiGraph(3, [(0, 1, 1.0)])
        with pytest.raises(ValueError):
            cut_weight(g, CutSet({0}, 4))

    @settings(max_examples=60, deadline=None)
    @given(digraphs(), st.integers(0, 1 << 20))
    def test_out_equals_complement_in(self, g, pick):
        mask = 1 + pick % max(1, (1 << g.n) - 2)
        s = CutSet.from_mask(mask, g.n)
        assert cut_weight(g, s, "out") == cut_weight(g, s.complement(), "in")


class TestCutBalance:
    def test_directed_four_cycle_always_one(self):
        g = DiGraph(4, [(i, (i + 1) % 4, 1.0) for i in range(4)])
        for mask in range(1, 15):
            assert cut_balance(g, CutSet.from_mask(mask, 4)) == 1.0

    def test_two_cycle_ratio(self):
        g = DiGraph(2, [(0, 1, 2.0), (1, 0, 1.0)])
        assert cut_balance(g, CutSet({0}, 2)) == 2.0

    def test_one_sided_is_infinite(self):
        g = DiGraph(2, [(0, 1, 1.0)])
        assert cut_balance(g, CutSet({0}, 2)) == math.inf

    def test_zero_crossing_is_one(self):
        g = DiGraph(4, [(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)])
        assert cut_balance(g, CutSet({0, 1}, 4)) == 1.0

    def test_degenerate_cut_rejected(self):
        g = DiGraph(2, [(0, 1, 1.0)])
        with pytest.raises(ValueError):
            cut_balance(g, CutSet(set(), 2))
        with pytest.raises(ValueError):
            cut_balance(g, CutSet({0, 1}, 2))

    def test_eulerian_graphs_balance_one_everywhere(self):
        from cutbal.generators import gen_eulerian

        g = gen_eulerian(8, 20, seed=2)
        assert is_eulerian(g)
        for mask in range(1, (1 << 8) - 1):
            assert cut_balance(g, CutSet.from_mask(mask, 8)) == pytest.approx(1.0)


class TestStrongConnectivity:
    def test_cycle(self):
        assert is_strongly_connected(DiGraph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]))

    def test_single_edge(self):
        assert not is_strongly_connected(DiGraph(2, [(0, 1, 1.0)]))

    def test_bidirected_star(self):
        edges = []
        for leaf in range(1, 5):
            edges += [(0, leaf, 1.0), (leaf, 0, 1.0)]
        assert is_strongly_connected(DiGraph(5, edges))

    def test_zero_weight_edges_do_not_connect(self):
        assert not is_strongly_connected(DiGraph(2, [(0, 1, 1.0), (1, 0, 0.0)]))


class TestWeightClasses:
    def test_unit_weights_single_class(self):
        g = DiGraph(3, [(0, 1, 1.0), (1, 2, 1.0)])
        views = weight_classes(g)
        assert len(views) == 1 and views[0].index == 1

    def test_dyadic_boundaries(self):
        g = DiGraph(5, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0), (3, 4, 4.0)])
        views = weight_classes(g)
        assert [(v.index, v.edge_ids.tolist()) for v in views] == \
            [(1, [0]), (2, [1, 2]), (3, [3])]

    def test_fractional_weights_share_class(self):
        g = DiGraph(2, [(0, 1, 1.5), (1, 0, 1.9)])
        views = weight_classes(g)
        assert len(views) == 1 and views[0].index == 1

    def test_subunit_weight_rejected(self):
        with pytest.raises(ValueError):
            weight_classes(DiGraph(2, [(0, 1, 0.5)]))

    @settings(max_examples=40, deadline=None)
    @given(digraphs())
    def test_partition(self, g):
        views = weight_classes(g)
        seen = sorted(e for v in views for e in v.edge_ids.tolist())
        assert seen == list(range(g.m))
        for v in views:
            lo, hi = 2.0 ** (v.index - 1), 2.0 ** v.index
            assert np.all((v.weights >= lo) & (v.weights < hi))


class TestEdgeListIO:
    def test_parse_minimal(self):
        g = read_edge_list("3\n0 1 2.0\n")
        assert g.n == 3 and g.m == 1 and g.edge(0) == (0, 1, 2.0)

    def test_round_trip(self, rng):
        from tests.conftest import random_digraph

        g = random_digraph(rng, 6, 10)
        assert read_edge_list(write_edge_list(g)) == g

    def test_round_trip_fractional_weights(self):
        g = DiGraph(3, [(0, 1, 0.1), (1, 2, 1 / 3)])
        assert read_edge_list(write_edge_list(g)) == g

    def test_comments_and_blank_lines(self):
        g = read_edge_list("# header\n\n4\n# mid\n0 3 1.5\n")
        assert g.n == 4 and g.m == 1

    def test_negative_weight_is_parse_error_with_line(self):
        with pytest.raises(ParseError) as err:
            read_edge_list("2\n0 1 -3\n")
        assert err.value.lineno == 2

    def test_out_of_range_vertex(self):
        with pytest.raises(ParseError):
            read_edge_list("2\n0 2 1.0\n")

    def test_malformed_line(self):
        with pytest.raises(ParseError):
            read_edge_list("2\n0 1\n")

    def test_empty_input(self):
        with pytest.raises(ParseError):
            read_edge_list("# nothing\n")
