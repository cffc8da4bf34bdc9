// SPDX-License-Identifier: Apache-2.0
#include "latsched/fabric.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace latsched;

namespace {

std::size_t count_role(const Fabric& f, TileRole role) {
    std::size_t n = 0;
    for (int r = 0; r < f.rows(); ++r) {
        for (int c = 0; c < f.cols(); ++c) n += f.tile({r, c}).role == role;
    }
    return n;
}

void expect_well_formed(const Fabric& f, std::size_t n) {
    EXPECT_EQ(f.num_data(), n);
    EXPECT_EQ(count_role(f, TileRole::Data), n);
    EXPECT_EQ(count_role(f, TileRole::Ancilla), f.num_ancilla());
    EXPECT_EQ(count_role(f, TileRole::Data) + count_role(f, TileRole::Ancilla) + count_role(f, TileRole::Absent),
              static_cast<std::size_t>(f.rows() * f.cols()));
    for (QubitId q = 0; q < n; ++q) {
        const Tile& t = f.tile(f.data_position(q));
        EXPECT_EQ(t.role, TileRole::Data);
        EXPECT_EQ(t.index, q);
    }
    EXPECT_TRUE(f.ancilla_connected());
    EXPECT_NO_THROW(f.validate());
}

}  // namespace

TEST(Fabric, FourQubitGrid) {
    const Fabric f = build_star_grid(4);
    EXPECT_EQ(f.rows(), 4);
    EXPECT_EQ(f.cols(), 4);
    EXPECT_EQ(f.num_data(), 4u);
    EXPECT_EQ(f.num_ancilla(), 12u);
    expect_well_formed(f, 4);
}

TEST(Fabric, SingleBlock) {
    const Fabric f = build_star_grid(1);
    EXPECT_EQ(f.rows(), 2);
    EXPECT_EQ(f.cols(), 2);
    EXPECT_EQ(f.num_ancilla(), 3u);
    EXPECT_EQ(f.data_position(0), (Position{1, 0}));
}

TEST(Fabric, ThreeToOneAndRowMajorBlocks) {
    for (std::size_t n = 1; n <= 100; ++n) {
        const Fabric f = build_star_grid(n);
        expect_well_formed(f, n);
        EXPECT_EQ(f.num_ancilla(), 3 * n) << n;
        const auto bc = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
        EXPECT_EQ(f.block_cols(), bc);
        for (QubitId q = 0; q < n; ++q) {
            const Position p = f.data_position(q);
            EXPECT_EQ(p.row, static_cast<int>(2 * (q / bc) + 1));
            EXPECT_EQ(p.col, static_cast<int>(2 * (q % bc)));
        }
    }
}

TEST(Fabric, EveryDataTileHasZEdgeAncilla) {
    for (std::size_t n = 1; n <= 100; ++n) {
        const Fabric f = build_star_grid(n);
        for (QubitId q = 0; q < n; ++q) {
            EXPECT_FALSE(f.edge_ancillas(q, EdgeOrientation::HorizontalZ, EdgeType::Z).empty()) << n << ":" << q;
            EXPECT_TRUE(f.neighbor_ancilla(f.data_position(q), Side::Top).has_value());
        }
    }
}

TEST(Fabric, EdgeTypes) {
    EXPECT_EQ(edge_type(EdgeOrientation::HorizontalZ, Side::Top), EdgeType::Z);
    EXPECT_EQ(edge_type(EdgeOrientation::HorizontalZ, Side::Bottom), EdgeType::Z);
    EXPECT_EQ(edge_type(EdgeOrientation::HorizontalZ, Side::Left), EdgeType::X);
    EXPECT_EQ(edge_type(EdgeOrientation::VerticalZ, Side::Right), EdgeType::Z);
    EXPECT_EQ(edge_type(EdgeOrientation::VerticalZ, Side::Top), EdgeType::X);
}

TEST(Fabric, FromRolesAdjacency) {
    using R = TileRole;
    const Fabric f = Fabric::from_roles(1, 3, {R::Data, R::Ancilla, R::Data}, {0, 1});
    EXPECT_EQ(f.num_ancilla(), 1u);
    EXPECT_EQ(f.side_of(0, 0), Side::Right);
    EXPECT_EQ(f.side_of(1, 0), Side::Left);
    EXPECT_TRUE(f.ancilla_edges().empty());
    EXPECT_EQ(f.edge_ancillas(0, EdgeOrientation::VerticalZ, EdgeType::Z), (std::vector<AncillaId>{0}));
    EXPECT_TRUE(f.edge_ancillas(0, EdgeOrientation::HorizontalZ, EdgeType::Z).empty());
}

TEST(Compress, ZeroFractionUnchanged) {
    const Fabric f = build_star_grid(9);
    const auto [g, plan] = compress(f, 0.0, 5);
    EXPECT_TRUE(plan.compressed_set.empty());
    EXPECT_EQ(g.num_ancilla(), 27u);
    EXPECT_EQ(g.rows(), f.rows());
    EXPECT_EQ(g.cols(), f.cols());
    EXPECT_EQ(g.num_compressed(), 0u);
}

TEST(Compress, FullFractionKeepsOneAncillaPerBlockPlusColumn) {
    for (std::size_t n : {4u, 9u, 18u, 27u, 34u}) {
        const auto [g, plan] = compress(build_star_grid(n), 1.0, 3);
        expect_well_formed(g, n);
        EXPECT_EQ(plan.compressed_set.size(), n);
        EXPECT_EQ(g.num_compressed(), n);
        for (QubitId q = 0; q < n; ++q) {
            EXPECT_TRUE(g.is_compressed(q));
            // The ancilla directly above the data tile survives.
            EXPECT_TRUE(g.neighbor_ancilla(g.data_position(q), Side::Top).has_value());
        }
        // Strictly fewer ancillas than 3:1, and the rightmost column is all ancilla.
        EXPECT_LT(g.num_ancilla(), 3 * n);
        for (int r = 0; r < g.rows(); ++r) EXPECT_EQ(g.tile({r, g.cols() - 1}).role, TileRole::Ancilla) << r;
    }
}

TEST(Compress, CountSeedAndConnectivity) {
    for (std::size_t n : {5u, 18u, 27u}) {
        for (double frac : {0.25, 0.5, 0.75}) {
            for (std::uint64_t seed : {1u, 2u, 99u}) {
                const auto [g, plan] = compress(build_star_grid(n), frac, seed);
                EXPECT_EQ(plan.compressed_set.size(), static_cast<std::size_t>(std::llround(frac * n)));
                EXPECT_TRUE(std::is_sorted(plan.compressed_set.begin(), plan.compressed_set.end()));
                expect_well_formed(g, n);
                const auto again = compress(build_star_grid(n), frac, seed);
                EXPECT_EQ(again.second.compressed_set, plan.compressed_set);
                EXPECT_EQ(again.first.num_ancilla(), g.num_ancilla());
            }
        }
    }
}

TEST(Compress, IdempotentWhenFullyCompressed) {
    const auto [g, plan] = compress(build_star_grid(12), 1.0, 7);
    const auto [h, plan2] = compress(g, 1.0, 8);
    EXPECT_EQ(plan2.compressed_set, plan.compressed_set);
    EXPECT_EQ(h.rows(), g.rows());
    EXPECT_EQ(h.cols(), g.cols());
    EXPECT_EQ(h.num_ancilla(), g.num_ancilla());
    for (QubitId q = 0; q < 12; ++q) EXPECT_EQ(h.data_position(q), g.data_position(q));
}

TEST(Compress, RejectsBadFraction) {
    EXPECT_ANY_THROW(compress(build_star_grid(4), -0.1, 1));
    EXPECT_ANY_THROW(compress(build_star_grid(4), 1.5, 1));
}

TEST(RotateEdges, SwapsAndTakesThreeCycles) {
    const Fabric f = build_star_grid(4);
    const auto fx = rotate_edges(f, 0, EdgeOrientation::HorizontalZ);
    EXPECT_EQ(fx.duration_cycles, 3);
    EXPECT_EQ(fx.ancilla_needed, 1);
    EXPECT_EQ(fx.orientation_after, EdgeOrientation::VerticalZ);
    EXPECT_EQ(edge_type(fx.orientation_after, Side::Left), EdgeType::Z);
    const auto back = rotate_edges(f, 0, fx.orientation_after);
    EXPECT_EQ(back.orientation_after, EdgeOrientation::HorizontalZ);
}

TEST(RotateEdges, NoAncillaIsALayoutBug) {
    using R = TileRole;
    const Fabric f = Fabric::from_roles(1, 2, {R::Data, R::Absent}, {0});
    EXPECT_THROW(rotate_edges(f, 0, EdgeOrientation::HorizontalZ), std::logic_error);
}

TEST(Fabric, StarPrepTile) {
    const Fabric f = build_star_grid(4);
    for (QubitId q = 0; q < 4; ++q) {
        const auto a = f.star_prep_tile(q);
        ASSERT_TRUE(a.has_value());
        const Position d = f.data_position(q);
        EXPECT_EQ(f.ancilla_position(*a), (Position{d.row - 1, d.col + 1}));
    }
}

TEST(Fabric, JsonDump) {
    const Fabric f = build_star_grid(2);
    std::vector<EdgeOrientation> o(2, EdgeOrientation::HorizontalZ);
    const std::string j = f.to_json(o);
    EXPECT_NE(j.find("\"rows\""), std::string::npos);
    EXPECT_NE(j.find("\"compressed\""), std::string::npos);
}
