import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import fj_influence as fj
from fj_influence.errors import (
    DivergentLoop,
    NotAnIndexNode,
    UnitSelfLoop,
    WrongStubbornCount,
)
from fj_influence.sfg import SINK, src

from conftest import uniform_net


def residual_set(sfg, m):
    return {src(sfg.stubborn_agents[0]), src(sfg.stubborn_agents[1]), m, SINK}


class TestBuildSfg:
    def test_branch_count(self, bridged8):
        flow = fj.build_sfg(bridged8)
        n_edges = int((bridged8.weights > 0).sum())
        assert len(flow.gains) == n_edges + 2 + bridged8.n

    def test_ring4_structure(self, ring4):
        flow = fj.build_sfg(ring4)
        assert len(flow.gains) == 4 + 2 + 4
        assert flow.gains[(src(1), 1)] == pytest.approx(0.3)
        assert flow.gains[(src(3), 3)] == pytest.approx(0.2)
        assert flow.gains[(3, 2)] == pytest.approx(1.0)   # (1 - 0) * 1
        assert flow.gains[(2, 1)] == pytest.approx(0.7)   # (1 - 0.3) * 1
        assert flow.gains[(0, 3)] == pytest.approx(0.8)   # (1 - 0.2) * 1
        assert all(flow.gains[(v, SINK)] == pytest.approx(0.25) for v in range(4))

    def test_two_node_symmetric_gains(self, sym2):
        flow = fj.build_sfg(sym2)
        assert flow.gains == {
            (src(0), 0): 0.5,
            (src(1), 1): 0.5,
            (0, 1): 0.5,
            (1, 0): 0.5,
            (0, SINK): 0.5,
            (1, SINK): 0.5,
        }

    def test_incoming_gains_sum_to_one(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            net = fj.random_network(int(rng.integers(3, 10)), rng,
                                    self_loop_prob=0.4)
            flow = fj.build_sfg(net)
            for v in range(net.n):
                total = sum(g for (a, b), g in flow.gains.items() if b == v)
                assert total == pytest.approx(1.0, abs=1e-12)

    def test_wrong_stubborn_count(self, ring3):
        net = fj.Network(3, ring3.weights, np.array([0.5, 0.0, 0.0]))
        with pytest.raises(WrongStubbornCount):
            fj.build_sfg(net)


class TestFoldSelfLoops:
    def test_incoming_branch_rescaled(self):
        flow = fj.SignalFlowGraph(
            2, (0, 1),
            {(1, 1): 0.5, (0, 1): 0.3, (src(0), 0): 1.0, (src(1), 1): 0.2},
        )
        folded = fj.fold_self_loops(flow)
        assert folded.gains[(0, 1)] == pytest.approx(0.6)  # 0.3 / (1 - 0.5)
        assert folded.gains[(src(1), 1)] == pytest.approx(0.4)
        assert (1, 1) not in folded.gains
        assert folded.absorbed_self_loops == {1: 0.5}

    def test_identity_without_loops(self, sym2):
        flow = fj.build_sfg(sym2)
        assert fj.fold_self_loops(flow) is flow

    def test_unit_self_loop_rejected(self):
        flow = fj.SignalFlowGraph(1, (0, 0), {(0, 0): 1.0})
        with pytest.raises(UnitSelfLoop):
            fj.fold_self_loops(flow)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-0.95, 0.95), st.floats(0.05, 1.0))
    def test_scaling_rule(self, loop_gain, in_gain):
        flow = fj.SignalFlowGraph(2, (0, 1),
                                  {(0, 0): loop_gain, (1, 0): in_gain})
        folded = fj.fold_self_loops(flow)
        assert folded.gains[(1, 0)] == pytest.approx(in_gain / (1 - loop_gain))

    def test_self_looped_network_still_matches_matrix_route(self):
        # edges include a self-loop at node 1
        w = np.array([[0.0, 0.4, 0.6],
                      [0.3, 0.5, 0.2],
                      [1.0, 0.0, 0.0]])
        net = fj.Network(3, w, np.array([0.2, 0.0, 0.4]))
        flow = fj.build_sfg(net)
        assert flow.has_self_loops()
        c = fj.influence_centrality(net)
        for m in fj.eligible_index_nodes(net):
            r = fj.index_residue_reduce(flow, m)
            for agent in net.stubborn_agents:
                assert fj.reduced_gain(r, agent) == pytest.approx(
                    float(c[agent]), abs=1e-9)


class TestResidualPaths:
    def test_two_node_exhaustive_listing(self, sym2):
        flow = fj.build_sfg(sym2)
        res = residual_set(flow, 0)
        cases = {
            (src(0), 0): ([(src(0), 0)], 0.5),
            (src(1), 0): ([(src(1), 1, 0)], 0.25),
            (src(0), SINK): ([], 0.0),
            (src(1), SINK): ([(src(1), 1, SINK)], 0.25),
            (0, 0): ([(0, 1, 0)], 0.25),
            (0, SINK): ([(0, SINK), (0, 1, SINK)], 0.75),
        }
        for (frm, to), (paths, total) in cases.items():
            got_paths, got_total = fj.residual_paths(flow, frm, to, res)
            assert got_paths == [tuple(p) for p in paths]
            assert got_total == pytest.approx(total, abs=1e-12)

    def test_source_branch_straight_into_index_node(self, sym2):
        flow = fj.build_sfg(sym2)
        paths, total = fj.residual_paths(flow, src(0), 0, residual_set(flow, 0))
        assert paths == [(src(0), 0)]
        assert total == pytest.approx(0.5)

    def test_gain_sums_match_reduction_on_small_instances(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            net = fj.random_network(int(rng.integers(3, 7)), rng,
                                    self_loop_prob=0.3)
            flow = fj.build_sfg(net)
            for m in sorted(fj.eligible_index_nodes(net)):
                r = fj.index_residue_reduce(flow, m)
                res = residual_set(flow, m)
                folded = fj.fold_self_loops(flow)
                for (frm, to), expected in r.gains.items():
                    _, total = fj.residual_paths(folded, frm, to, res)
                    assert total == pytest.approx(expected, abs=1e-9)


class TestIndexResidueReduce:
    def test_reduced_graph_shape(self, bridged8):
        flow = fj.build_sfg(bridged8)
        r = fj.index_residue_reduce(flow, 0)
        assert set(r.gains) == {
            (src(3), 0), (src(5), 0), (src(3), SINK), (src(5), SINK),
            (0, 0), (0, SINK),
        }

    def test_star_self_return_gain(self):
        # hub 0 feeding 1 and 2, both returning: closed returns are the two
        # 2-hop round trips
        edges = [(0, 1), (1, 0), (0, 2), (2, 0)]
        net = uniform_net(3, edges, {1: 0.2, 2: 0.4})
        flow = fj.build_sfg(net)
        r = fj.index_residue_reduce(flow, 0)
        assert r.loop_gain == pytest.approx(0.8 * 0.5 + 0.6 * 0.5)  # = 0.7
        assert r.index_to_sink == pytest.approx((1 + 0.8 + 0.6) / 3)
        assert r.source_to_index(1) == pytest.approx(0.2 * 0.5)
        assert r.source_to_index(2) == pytest.approx(0.4 * 0.5)
        assert r.source_to_sink(1) == pytest.approx(0.2 / 3)
        assert r.source_to_sink(2) == pytest.approx(0.4 / 3)
        assert fj.reduced_gain(r, 1) == pytest.approx(1 / 3, abs=1e-12)
        assert fj.reduced_gain(r, 2) == pytest.approx(2 / 3, abs=1e-12)

    def test_two_node_values(self, sym2):
        flow = fj.build_sfg(sym2)
        r = fj.index_residue_reduce(flow, 0)
        assert r.source_to_index(0) == pytest.approx(0.5)
        assert r.source_to_index(1) == pytest.approx(0.25)
        assert r.source_to_sink(0) == 0.0
        assert r.source_to_sink(1) == pytest.approx(0.25)
        assert r.loop_gain == pytest.approx(0.25)
        assert r.index_to_sink == pytest.approx(0.75)

    def test_non_index_node_rejected(self, bridged8):
        flow = fj.build_sfg(bridged8)
        with pytest.raises(NotAnIndexNode):
            fj.index_residue_reduce(flow, 3)


class TestReducedGain:
    def test_reference_eight_node_network(self, bridged8):
        flow = fj.build_sfg(bridged8)
        for m in sorted(fj.eligible_index_nodes(bridged8)):
            r = fj.index_residue_reduce(flow, m)
            assert fj.reduced_gain(r, 3) == pytest.approx(71 / 308, abs=1e-9)
            assert fj.reduced_gain(r, 5) == pytest.approx(237 / 308, abs=1e-9)

    def test_symmetric_pair(self, sym2):
        flow = fj.build_sfg(sym2)
        r = fj.index_residue_reduce(flow, 1)
        assert fj.reduced_gain(r, 0) == pytest.approx(0.5, abs=1e-12)
        assert fj.reduced_gain(r, 1) == pytest.approx(0.5, abs=1e-12)

    def test_three_ring_matches_matrix_route(self, ring3):
        flow = fj.build_sfg(ring3)
        c = fj.influence_centrality(ring3)
        for m in range(3):
            r = fj.index_residue_reduce(flow, m)
            for agent in (0, 1):
                assert fj.reduced_gain(r, agent) == pytest.approx(
                    float(c[agent]), abs=1e-9)

    def test_divergent_loop_rejected(self):
        r = fj.ReducedSFG(0, (0, 1), {(0, 0): 1.0, (0, SINK): 0.5,
                                      (src(0), 0): 0.5, (src(1), 0): 0.5})
        with pytest.raises(DivergentLoop):
            fj.reduced_gain(r, 0)

    def test_matches_matrix_route_across_corpus(self):
        rng = np.random.default_rng(21)
        for _ in range(60):
            net = fj.random_network(int(rng.integers(3, 11)), rng,
                                    self_loop_prob=0.25)
            c = fj.influence_centrality(net)
            flow = fj.build_sfg(net)
            gains_per_m = []
            for m in sorted(fj.eligible_index_nodes(net)):
                r = fj.index_residue_reduce(flow, m)
                pair = [fj.reduced_gain(r, a) for a in net.stubborn_agents]
                gains_per_m.append(pair)
                for agent, gain in zip(net.stubborn_agents, pair):
                    assert gain == pytest.approx(float(c[agent]), abs=1e-9)
                assert pair[0] + pair[1] == pytest.approx(1.0, abs=1e-9)
            # choice of index node is immaterial
            for other in gains_per_m[1:]:
                assert abs(other[0] - gains_per_m[0][0]) <= 1e-12
                assert abs(other[1] - gains_per_m[0][1]) <= 1e-12


class TestSplitNode:
    def test_splitting_index_node_removes_cycles(self, bridged8):
        flow = fj.build_sfg(bridged8)
        assert not fj.graph_cycle_free(flow)
        for m in fj.eligible_index_nodes(bridged8):
            assert fj.graph_cycle_free(fj.split_node(flow, m))

    def test_splitting_non_index_node_keeps_cycles(self, bridged8):
        flow = fj.build_sfg(bridged8)
        assert not fj.graph_cycle_free(fj.split_node(flow, 3))

    def test_off_cycle_node_split_changes_nothing(self):
        flow = fj.SignalFlowGraph(
            3, (0, 1),
            {(0, 1): 0.5, (1, 0): 0.5, (1, 2): 0.5, (2, SINK): 1.0},
        )
        split = fj.split_node(flow, 2)
        assert not fj.graph_cycle_free(flow)
        assert not fj.graph_cycle_free(split)  # the 0-1 cycle is untouched
        assert (("out", 2), SINK) in split.gains
        assert (1, ("in", 2)) in split.gains

    def test_random_instances(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            net = fj.random_network(int(rng.integers(3, 9)), rng,
                                    self_loop_prob=0.3)
            flow = fj.build_sfg(net)
            for m in fj.eligible_index_nodes(net):
                assert fj.graph_cycle_free(fj.split_node(flow, m))
