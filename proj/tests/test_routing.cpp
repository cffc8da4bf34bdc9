// SPDX-License-Identifier: Apache-2.0
#include "latsched/routing.hpp"
#include "latsched/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>

using namespace latsched;

namespace {

// Minimum over all a-b paths of the maximum edge weight, by thresholding:
// the smallest edge weight w such that a and b are connected using edges <= w.
double brute_minimax(const AncillaGraph& g, const std::vector<double>& w, AncillaId a, AncillaId b) {
    if (a == b) return 0.0;
    std::vector<double> levels(w);
    std::sort(levels.begin(), levels.end());
    for (double t : levels) {
        std::vector<AncillaId> parent(g.num_nodes);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<AncillaId(AncillaId)> find = [&](AncillaId x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            if (w[e] <= t) parent[find(g.edges[e].first)] = find(g.edges[e].second);
        }
        if (find(a) == find(b)) return t;
    }
    return 1e300;
}

std::vector<double> random_weights(SimRng& rng, std::size_t n, int levels = 0) {
    std::vector<double> w(n);
    for (auto& x : w) x = levels > 0 ? static_cast<double>(rng.uniform_index(levels)) / levels : rng.uniform();
    return w;
}

double path_bottleneck(const TreePath& p, const std::vector<double>& w) {
    double m = 0.0;
    for (auto e : p.edges) m = std::max(m, w[e]);
    return m;
}

void expect_valid_path(const AncillaGraph& g, const TreePath& p, AncillaId a, AncillaId b) {
    ASSERT_FALSE(p.nodes.empty());
    EXPECT_EQ(p.nodes.front(), a);
    EXPECT_EQ(p.nodes.back(), b);
    ASSERT_EQ(p.edges.size() + 1, p.nodes.size());
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const auto [u, v] = g.edges[p.edges[i]];
        EXPECT_TRUE((u == p.nodes[i] && v == p.nodes[i + 1]) || (v == p.nodes[i] && u == p.nodes[i + 1]));
    }
}

}  // namespace

TEST(Activity, WindowArithmetic) {
    ActivityTracker t(3, 100);
    std::vector<char> busy(3);
    for (std::int64_t c = 0; c < 100; ++c) {
        busy = {static_cast<char>(c % 2 == 0), 0, 1};
        t.record(c, busy);
    }
    EXPECT_DOUBLE_EQ(t.activity(0), 0.5);
    EXPECT_DOUBLE_EQ(t.activity(1), 0.0);
    EXPECT_DOUBLE_EQ(t.activity(2), 1.0);
    // The window slides: 100 idle cycles clear everything.
    for (std::int64_t c = 100; c < 200; ++c) t.record(c, std::vector<char>(3, 0));
    EXPECT_DOUBLE_EQ(t.activity(2), 0.0);
}

TEST(Activity, SkippedCyclesCountIdleAndDoubleRecordThrows) {
    ActivityTracker t(1, 10);
    t.record(0, std::vector<char>{1});
    t.record(5, std::vector<char>{1});
    EXPECT_DOUBLE_EQ(t.activity(0), 0.2);
    t.record(20, std::vector<char>{0});
    EXPECT_DOUBLE_EQ(t.activity(0), 0.0);
    EXPECT_THROW(t.record(20, std::vector<char>{0}), std::logic_error);
}

TEST(Graph, EdgeWeightsAreMaxOfEndpoints) {
    const auto g = AncillaGraph::grid(2, 2);
    const std::vector<double> act{0.1, 0.7, 0.3, 0.0};
    const auto w = edge_weights(g, act);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        EXPECT_DOUBLE_EQ(w[e], std::max(act[g.edges[e].first], act[g.edges[e].second]));
    }
}

TEST(Graph, FromFabricMatchesFabricEdges) {
    const Fabric f = build_star_grid(5);
    const auto g = AncillaGraph::from(f);
    EXPECT_EQ(g.num_nodes, f.num_ancilla());
    EXPECT_EQ(g.edges, f.ancilla_edges());
}

TEST(Mst, UniformWeights) {
    const auto g = AncillaGraph::grid(4, 4);
    const auto s = compute_mst(g, std::vector<double>(g.edges.size(), 0.25));
    EXPECT_EQ(s.tree.edge_ids().size(), 15u);
    EXPECT_DOUBLE_EQ(s.tree.total_weight(), 15 * 0.25);
}

TEST(Mst, ThreeByThreeMatchesExhaustiveEnumeration) {
    const auto g = AncillaGraph::grid(3, 3);
    ASSERT_EQ(g.edges.size(), 12u);
    SimRng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto w = random_weights(rng, g.edges.size(), trial % 2 ? 4 : 0);
        double best = 1e300;
        for (unsigned mask = 0; mask < (1u << 12); ++mask) {
            if (__builtin_popcount(mask) != 8) continue;
            std::vector<AncillaId> parent(9);
            std::iota(parent.begin(), parent.end(), 0);
            std::function<AncillaId(AncillaId)> find = [&](AncillaId x) {
                return parent[x] == x ? x : parent[x] = find(parent[x]);
            };
            bool acyclic = true;
            double total = 0.0;
            for (unsigned e = 0; e < 12; ++e) {
                if (!(mask >> e & 1u)) continue;
                const auto ra = find(g.edges[e].first), rb = find(g.edges[e].second);
                if (ra == rb) {
                    acyclic = false;
                    break;
                }
                parent[ra] = rb;
                total += w[e];
            }
            if (acyclic) best = std::min(best, total);
        }
        EXPECT_NEAR(compute_mst(g, w).tree.total_weight(), best, 1e-12);
    }
}

TEST(Mst, DisconnectedGraphThrows) {
    AncillaGraph g;
    g.num_nodes = 3;
    g.edges = {{0, 1}};
    EXPECT_THROW(compute_mst(g, {0.0}), std::invalid_argument);
}

TEST(Mst, HotEdgeAvoided) {
    // 2x2 ring: one hot edge must not be in the tree.
    const auto g = AncillaGraph::grid(2, 2);
    std::vector<double> w(g.edges.size(), 0.1);
    w[0] = 1.0;
    const auto s = compute_mst(g, w);
    EXPECT_FALSE(s.tree.contains(0));
    const auto [a, b] = g.edges[0];
    EXPECT_DOUBLE_EQ(s.tree.bottleneck(a, b), 0.1);
}

TEST(Minimax, TreePathIsBottleneckOptimal) {
    SimRng rng(17);
    for (int side : {2, 3, 4}) {
        const auto g = AncillaGraph::grid(side, side);
        for (int trial = 0; trial < 30; ++trial) {
            const auto w = random_weights(rng, g.edges.size(), trial % 3 == 0 ? 3 : 0);
            const auto s = compute_mst(g, w);
            for (AncillaId a = 0; a < g.num_nodes; ++a) {
                for (AncillaId b = 0; b < g.num_nodes; ++b) {
                    const auto p = minimax_path(s, a, b);
                    expect_valid_path(g, p, a, b);
                    ASSERT_DOUBLE_EQ(path_bottleneck(p, w), brute_minimax(g, w, a, b));
                    ASSERT_DOUBLE_EQ(s.tree.bottleneck(a, b), brute_minimax(g, w, a, b));
                }
            }
        }
    }
}

TEST(Minimax, SameNodeIsTrivial) {
    const auto g = AncillaGraph::grid(3, 3);
    const auto s = compute_mst(g, std::vector<double>(g.edges.size(), 0.0));
    const auto p = minimax_path(s, 4, 4);
    EXPECT_EQ(p.nodes, (std::vector<AncillaId>{4}));
    EXPECT_TRUE(p.edges.empty());
}

TEST(ShortestMinimax, KeepsBottleneckAndIsShortest) {
    SimRng rng(23);
    const auto g = AncillaGraph::grid(5, 5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto w = random_weights(rng, g.edges.size(), 3);
        const auto s = compute_mst(g, w);
        for (AncillaId a = 0; a < g.num_nodes; a += 3) {
            for (AncillaId b = 0; b < g.num_nodes; ++b) {
                const auto p = shortest_minimax_path(s, a, b);
                expect_valid_path(g, p, a, b);
                EXPECT_DOUBLE_EQ(path_bottleneck(p, w), brute_minimax(g, w, a, b));
                EXPECT_LE(p.nodes.size(), minimax_path(s, a, b).nodes.size());
            }
        }
    }
}

TEST(ShortestMinimax, UniformWeightsGiveManhattanPaths) {
    const auto g = AncillaGraph::grid(5, 5);
    const auto s = compute_mst(g, std::vector<double>(g.edges.size(), 0.0));
    for (AncillaId a = 0; a < 25; ++a) {
        for (AncillaId b = 0; b < 25; ++b) {
            const int manhattan = std::abs(static_cast<int>(a / 5) - static_cast<int>(b / 5)) +
                                  std::abs(static_cast<int>(a % 5) - static_cast<int>(b % 5));
            EXPECT_EQ(shortest_minimax_path(s, a, b).edges.size(), static_cast<std::size_t>(manhattan));
        }
    }
}

TEST(Incremental, NonTreeIncreaseKeepsTree) {
    const auto g = AncillaGraph::grid(3, 3);
    SimRng rng(3);
    const auto s = compute_mst(g, random_weights(rng, g.edges.size()));
    std::uint32_t e = 0;
    while (s.tree.contains(e)) ++e;
    const auto u = incremental_update(s, g, e, s.tree.weights()[e] + 1.0);
    EXPECT_EQ(u.tree.edge_ids(), s.tree.edge_ids());
}

TEST(Incremental, TreeEdgeIncreaseMatchesRecompute) {
    const auto g = AncillaGraph::grid(4, 4);
    SimRng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto w = random_weights(rng, g.edges.size());
        const auto s = compute_mst(g, w);
        const auto e = s.tree.edge_ids()[rng.uniform_index(s.tree.edge_ids().size())];
        w[e] += rng.uniform();
        const auto u = incremental_update(s, g, e, w[e]);
        EXPECT_NEAR(u.tree.total_weight(), compute_mst(g, w).tree.total_weight(), 1e-12);
    }
}

TEST(Incremental, ChainedUpdatesKeepBottlenecks) {
    const auto g = AncillaGraph::grid(5, 5);
    SimRng rng(31);
    auto w = random_weights(rng, g.edges.size());
    auto s = compute_mst(g, w);
    for (int step = 0; step < 200; ++step) {
        const auto e = static_cast<std::uint32_t>(rng.uniform_index(g.edges.size()));
        w[e] = rng.uniform();
        s = incremental_update(s, g, e, w[e]);
        ASSERT_EQ(s.tree.edge_ids().size(), g.num_nodes - 1);
        ASSERT_NEAR(s.tree.total_weight(), compute_mst(g, w).tree.total_weight(), 1e-12);
    }
    for (int pair = 0; pair < 100; ++pair) {
        const auto a = static_cast<AncillaId>(rng.uniform_index(g.num_nodes));
        const auto b = static_cast<AncillaId>(rng.uniform_index(g.num_nodes));
        EXPECT_DOUBLE_EQ(s.tree.bottleneck(a, b), brute_minimax(g, w, a, b));
    }
}

TEST(Pipeline, StalenessSchedule) {
    const auto g = AncillaGraph::grid(3, 3);
    MstPipeline pipe(g, 25, 50);
    std::vector<double> act(9, 0.0);
    for (std::int64_t c = 0; c <= 80; ++c) {
        act[c % 9] = static_cast<double>(c) / 100.0;
        pipe.tick(c, act);
        const auto& s = pipe.query(c);
        EXPECT_LE(s.as_of_cycle, c);
        EXPECT_LE(s.ready_at_cycle, c);
        EXPECT_LE(pipe.in_flight(c), 2u);  // ceil(50 / 25)
        if (c == 49) EXPECT_EQ(&s, &pipe.query(0));  // still the bootstrap tree
        if (c == 50 || c == 60 || c == 74) EXPECT_EQ(s.as_of_cycle, 0);
        if (c == 75) EXPECT_EQ(s.as_of_cycle, 25);
    }
    EXPECT_EQ(pipe.computations_started(), 4u);
}

TEST(Pipeline, IncrementalModeMatchesFull) {
    const auto g = AncillaGraph::grid(4, 4);
    MstPipeline full(g, 5, 3, MstMode::Full);
    MstPipeline inc(g, 5, 3, MstMode::Incremental);
    SimRng rng(4);
    std::vector<double> act(16);
    for (std::int64_t c = 0; c < 200; ++c) {
        for (auto& a : act) a = static_cast<double>(rng.uniform_index(5)) / 5.0;
        full.tick(c, act);
        inc.tick(c, act);
        EXPECT_NEAR(full.query(c).tree.total_weight(), inc.query(c).tree.total_weight(), 1e-12);
        EXPECT_EQ(full.query(c).as_of_cycle, inc.query(c).as_of_cycle);
    }
}

namespace {

using R = TileRole;

Fabric pair_with_shared_ancilla() { return Fabric::from_roles(1, 3, {R::Data, R::Ancilla, R::Data}, {0, 1}); }

}  // namespace

TEST(SelectBestPath, CostTable) {
    const Fabric f = pair_with_shared_ancilla();
    const auto g = AncillaGraph::from(f);
    const auto s = compute_mst(g, {});
    const std::vector<double> idle(f.num_ancilla(), 0.0);
    using O = EdgeOrientation;
    // Control shows Z and target shows X on the shared ancilla.
    auto c = select_best_path(f, 0, 1, O::VerticalZ, O::HorizontalZ, s, idle);
    ASSERT_TRUE(c);
    EXPECT_DOUBLE_EQ(c->expected_completion, 2.0);
    EXPECT_EQ(c->path, (std::vector<AncillaId>{0}));
    // One wrong edge.
    c = select_best_path(f, 0, 1, O::VerticalZ, O::VerticalZ, s, idle);
    EXPECT_DOUBLE_EQ(c->expected_completion, 5.0);
    EXPECT_TRUE(c->rotate_target);
    EXPECT_FALSE(c->rotate_control);
    // Both wrong: 3 + 3 + 2.
    c = select_best_path(f, 0, 1, O::HorizontalZ, O::VerticalZ, s, idle);
    EXPECT_DOUBLE_EQ(c->expected_completion, 8.0);
    EXPECT_TRUE(c->rotate_control && c->rotate_target);
}

TEST(SelectBestPath, RotationBeatsBusyCorrectPath) {
    // Row 0: a0 a1 a2 a3 / Row 1: q0 a4 q1 a5
    const Fabric f = build_star_grid(2);
    const auto g = AncillaGraph::from(f);
    const auto s = compute_mst(g, std::vector<double>(g.edges.size(), 0.0));
    std::vector<double> ef(f.num_ancilla(), 0.0);
    auto idle = select_best_path(f, 0, 1, EdgeOrientation::HorizontalZ, EdgeOrientation::HorizontalZ, s, ef);
    ASSERT_TRUE(idle);
    EXPECT_DOUBLE_EQ(idle->expected_completion, 2.0);
    EXPECT_EQ(idle->control_ancilla, *f.neighbor_ancilla(f.data_position(0), Side::Top));

    ef[idle->control_ancilla] = 10.0;  // the only Z-edge ancilla of the control is busy
    auto busy = select_best_path(f, 0, 1, EdgeOrientation::HorizontalZ, EdgeOrientation::HorizontalZ, s, ef);
    ASSERT_TRUE(busy);
    EXPECT_TRUE(busy->rotate_control);
    EXPECT_FALSE(busy->rotate_target);
    EXPECT_DOUBLE_EQ(busy->expected_completion, 5.0);
    EXPECT_EQ(busy->control_ancilla, *f.neighbor_ancilla(f.data_position(0), Side::Right));
}

TEST(SelectBestPath, PathsStayOnAncillas) {
    const auto [f, plan] = compress(build_star_grid(16), 0.5, 2);
    const auto g = AncillaGraph::from(f);
    SimRng rng(6);
    const auto s = compute_mst(g, random_weights(rng, g.edges.size()));
    std::vector<double> ef(f.num_ancilla());
    for (auto& x : ef) x = static_cast<double>(rng.uniform_index(6));
    for (QubitId a = 0; a < 16; ++a) {
        for (QubitId b = 0; b < 16; ++b) {
            if (a == b) continue;
            const auto c = select_best_path(f, a, b, EdgeOrientation::HorizontalZ, EdgeOrientation::VerticalZ, s, ef);
            ASSERT_TRUE(c);
            EXPECT_TRUE(f.side_of(a, c->path.front()).has_value());
            EXPECT_TRUE(f.side_of(b, c->path.back()).has_value());
            for (std::size_t i = 0; i < c->path.size(); ++i) {
                EXPECT_EQ(f.tile(f.ancilla_position(c->path[i])).role, TileRole::Ancilla);
                if (i > 0) EXPECT_TRUE(f.adjacent(c->path[i - 1], c->path[i]));
            }
        }
    }
}
