import numpy as np
import pytest

import fj_influence as fj
from fj_influence.errors import NotAnIndexNode
from fj_influence.sfg import src

from conftest import uniform_net


class TestAssignLevels:
    def test_rewired_ring4_with_first_index_node(self, ring4_mod):
        flow = fj.build_sfg(ring4_mod)
        la = fj.assign_levels(flow, 0)
        assert la.level == {3: 1, 2: 2, 1: 3}
        assert la.q == 3
        # the source of agent 3 enters at level 1, so it is labeled first
        assert la.source_order == (3, 1)
        assert (la.s1, la.s2) == (1, 3)

    def test_index_node_choice_changes_membership_and_labels(self, ring4_mod):
        flow = fj.build_sfg(ring4_mod)
        la = fj.assign_levels(flow, 2)
        assert la.level == {1: 1, 0: 2, 3: 3}
        assert la.source_order == (1, 3)  # labels swap with this index node
        assert (la.s1, la.s2) == (1, 3)

    def test_directed_ring_layers_like_a_chain(self):
        n = 6
        net = uniform_net(n, [(i, (i + 1) % n) for i in range(n)],
                          {1: 0.5, 4: 0.5})
        la = fj.assign_levels(fj.build_sfg(net), 0)
        assert la.level == {k: k for k in range(1, n)}
        assert la.q == n - 1

    def test_level_conditions_hold_across_corpus(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            net = fj.random_network(int(rng.integers(3, 10)), rng,
                                    self_loop_prob=0.3)
            flow = fj.build_sfg(net)
            for m in fj.eligible_index_nodes(net):
                la = fj.assign_levels(flow, m)
                interior = [v for v in range(net.n) if v != m]
                assert sorted(la.level) == sorted(interior)
                assert la.q <= net.n - 1
                for j in interior:
                    preds = [u for u in interior
                             if u != j and net.weights[j, u] > 0]
                    assert all(la.level[u] < la.level[j] for u in preds)
                    if la.level[j] > 1:
                        assert any(la.level[u] == la.level[j] - 1 for u in preds)
                    else:
                        assert not preds

    def test_non_index_node_rejected(self, bridged8):
        with pytest.raises(NotAnIndexNode):
            fj.assign_levels(fj.build_sfg(bridged8), 5)

    def test_stubborn_index_node_gives_empty_first_region(self, sym2):
        la = fj.assign_levels(fj.build_sfg(sym2), 0)
        assert la.source_order == (0, 1)
        assert la.s1 == 0  # agent 0 sits at the index node itself
        assert la.region == {0: 1, 1: 3}


class TestHasDirectPath:
    def test_reference_cases(self, bridged8):
        flow = fj.build_sfg(bridged8)
        # with index node 0: node 4 is fed from agent 3's source off-index,
        # nodes 1 and 2 only through the index node
        assert fj.has_direct_path(flow, src(3), 4, 0)
        assert not fj.has_direct_path(flow, src(5), 4, 0)
        for j in (1, 2):
            assert not fj.has_direct_path(flow, src(3), j, 0)
            assert not fj.has_direct_path(flow, src(5), j, 0)

    def test_target_equal_to_index_node(self, bridged8):
        flow = fj.build_sfg(bridged8)
        assert not fj.has_direct_path(flow, src(3), 0, 0)

    def test_source_reaches_its_own_agent(self, bridged8):
        flow = fj.build_sfg(bridged8)
        assert fj.has_direct_path(flow, src(3), 3, 0)

    def test_plain_node_to_node_query(self, bridged8):
        flow = fj.build_sfg(bridged8)
        assert fj.has_direct_path(flow, 1, 4, 0)   # 1 -> 2 -> (3|4)
        assert not fj.has_direct_path(flow, 4, 1, 0)  # must wrap through 0


class TestClassifyRegion:
    def test_reference_regions(self, bridged8):
        la = fj.assign_levels(fj.build_sfg(bridged8), 0)
        assert (la.s1, la.s2) == (3, 5)
        assert fj.classify_region(la, 1) == 1
        assert fj.classify_region(la, 2) == 1
        assert fj.classify_region(la, 3) == 2
        assert fj.classify_region(la, 4) == 2
        for j in (5, 6, 7):
            assert fj.classify_region(la, j) == 3
        assert fj.classify_region(la, 0) == 1  # the index node itself

    def test_first_source_level_opens_region_two(self, ring4_mod):
        la = fj.assign_levels(fj.build_sfg(ring4_mod), 0)
        assert fj.classify_region(la, la.source_order[0]) == 2

    def test_region_one_nodes_have_no_source_paths(self):
        rng = np.random.default_rng(37)
        for _ in range(30):
            net = fj.random_network(int(rng.integers(4, 10)), rng,
                                    self_loop_prob=0.2)
            flow = fj.build_sfg(net)
            for m in fj.eligible_index_nodes(net):
                la = fj.assign_levels(flow, m)
                for j, region in la.region.items():
                    if j == m or region != 1:
                        continue
                    for agent in net.stubborn_agents:
                        assert not fj.has_direct_path(flow, src(agent), j, m)


class TestDirectPathGainSum:
    def test_first_level_node_without_self_loops(self, bridged8):
        flow = fj.build_sfg(bridged8)
        # node 1 sits in the first layer; all self-loop gains are zero
        assert fj.direct_path_gain_sum(flow, 0, 1) == pytest.approx(1.0, abs=1e-12)

    def test_sheltered_nodes_hit_the_closed_form(self):
        rng = np.random.default_rng(41)
        checked = 0
        for _ in range(40):
            net = fj.random_network(int(rng.integers(4, 10)), rng,
                                    self_loop_prob=0.4)
            flow = fj.build_sfg(net)
            beta = net.stubbornness
            for m in fj.eligible_index_nodes(net):
                g_mm = (1 - beta[m]) * net.weights[m, m]
                for j in range(net.n):
                    if j == m:
                        continue
                    g_jj = (1 - beta[j]) * net.weights[j, j]
                    expected = (1 - g_jj) / (1 - g_mm)
                    total = fj.direct_path_gain_sum(flow, m, j)
                    fed = any(fj.has_direct_path(flow, src(a), j, m)
                              for a in net.stubborn_agents)
                    if fed:
                        assert total < expected - 1e-12
                    else:
                        checked += 1
                        assert total == pytest.approx(expected, abs=1e-9)
        assert checked > 50  # the closed form actually got exercised

    def test_source_fed_node_falls_short(self, bridged8):
        flow = fj.build_sfg(bridged8)
        # node 4 is fed by agent 3's source off-index, so its sum leaks
        assert fj.direct_path_gain_sum(flow, 0, 4) < 1.0 - 1e-12

    def test_accepts_folded_input(self):
        w = np.array([[0.0, 0.4, 0.6],
                      [0.3, 0.5, 0.2],
                      [1.0, 0.0, 0.0]])
        net = fj.Network(3, w, np.array([0.2, 0.0, 0.4]))
        flow = fj.build_sfg(net)
        raw = fj.direct_path_gain_sum(flow, 0, 1)
        folded = fj.direct_path_gain_sum(fj.fold_self_loops(flow), 0, 1)
        assert raw == pytest.approx(folded, abs=1e-15)
