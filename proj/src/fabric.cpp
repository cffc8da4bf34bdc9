// SPDX-License-Identifier: Apache-2.0
#include "latsched/fabric.hpp"

#include "latsched/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace latsched {

EdgeType edge_type(EdgeOrientation orientation, Side side) {
    const bool horizontal = side == Side::Top || side == Side::Bottom;
    const bool z = orientation == EdgeOrientation::HorizontalZ ? horizontal : !horizontal;
    return z ? EdgeType::Z : EdgeType::X;
}

Position Position::step(Side side) const {
    switch (side) {
        case Side::Top: return {row - 1, col};
        case Side::Right: return {row, col + 1};
        case Side::Bottom: return {row + 1, col};
        case Side::Left: return {row, col - 1};
    }
    return *this;
}

Fabric Fabric::from_roles(int rows, int cols, const std::vector<TileRole>& roles,
                          const std::vector<QubitId>& data_qubits) {
    if (rows <= 0 || cols <= 0 || roles.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw std::invalid_argument("role grid does not match dimensions");
    }
    Fabric f;
    f.rows_ = rows;
    f.cols_ = cols;
    f.tiles_.resize(roles.size());

    const auto num_data = static_cast<std::size_t>(std::count(roles.begin(), roles.end(), TileRole::Data));
    if (data_qubits.size() != num_data) throw std::invalid_argument("data qubit list does not match data tiles");
    f.data_pos_.assign(num_data, Position{-1, -1});

    std::size_t next_data = 0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const auto i = static_cast<std::size_t>(r * cols + c);
            Tile& t = f.tiles_[i];
            t.role = roles[i];
            if (t.role == TileRole::Data) {
                const QubitId q = data_qubits[next_data++];
                if (q >= num_data || f.data_pos_[q].row >= 0) {
                    throw std::invalid_argument("data qubits must be a permutation of 0..n-1");
                }
                t.index = q;
                f.data_pos_[q] = {r, c};
            } else if (t.role == TileRole::Ancilla) {
                t.index = static_cast<AncillaId>(f.ancilla_pos_.size());
                f.ancilla_pos_.push_back({r, c});
            }
        }
    }

    f.adjacency_.assign(f.ancilla_pos_.size(), {});
    for (AncillaId a = 0; a < f.ancilla_pos_.size(); ++a) {
        for (Side s : kAllSides) {
            if (auto b = f.neighbor_ancilla(f.ancilla_pos_[a], s)) f.adjacency_[a].push_back(*b);
        }
        std::sort(f.adjacency_[a].begin(), f.adjacency_[a].end());
        for (AncillaId b : f.adjacency_[a]) {
            if (a < b) f.edges_.emplace_back(a, b);
        }
    }
    return f;
}

std::optional<AncillaId> Fabric::ancilla_at(Position p) const {
    if (!in_bounds(p)) return std::nullopt;
    const Tile& t = tile(p);
    if (t.role != TileRole::Ancilla) return std::nullopt;
    return t.index;
}

std::optional<AncillaId> Fabric::neighbor_ancilla(Position p, Side side) const { return ancilla_at(p.step(side)); }

std::vector<AncillaId> Fabric::edge_ancillas(QubitId q, EdgeOrientation o, EdgeType type) const {
    std::vector<AncillaId> out;
    const Position p = data_position(q);
    for (Side s : kAllSides) {
        if (edge_type(o, s) != type) continue;
        if (auto a = neighbor_ancilla(p, s)) out.push_back(*a);
    }
    return out;
}

bool Fabric::adjacent(AncillaId a, AncillaId b) const {
    const auto& adj = adjacency_.at(a);
    return std::binary_search(adj.begin(), adj.end(), b);
}

std::optional<Side> Fabric::side_of(QubitId q, AncillaId a) const {
    const Position p = data_position(q);
    for (Side s : kAllSides) {
        if (neighbor_ancilla(p, s) == a) return s;
    }
    return std::nullopt;
}

bool Fabric::ancilla_connected() const {
    if (ancilla_pos_.empty()) return false;
    std::vector<char> seen(ancilla_pos_.size(), 0);
    std::vector<AncillaId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const AncillaId a = stack.back();
        stack.pop_back();
        for (AncillaId b : adjacency_[a]) {
            if (!seen[b]) {
                seen[b] = 1;
                ++count;
                stack.push_back(b);
            }
        }
    }
    return count == ancilla_pos_.size();
}

void Fabric::validate() const {
    if (!ancilla_connected()) throw std::logic_error("ancilla subgraph is disconnected");
    for (QubitId q = 0; q < data_pos_.size(); ++q) {
        bool any = false;
        for (Side s : kAllSides) any = any || neighbor_ancilla(data_pos_[q], s).has_value();
        if (!any) throw std::logic_error("data qubit " + std::to_string(q) + " has no adjacent ancilla");
    }
}

std::size_t Fabric::num_compressed() const {
    return static_cast<std::size_t>(std::count(compressed_.begin(), compressed_.end(), true));
}

std::optional<AncillaId> Fabric::star_prep_tile(QubitId q) const {
    const Position p = data_position(q);
    if (!is_compressed(q)) {
        if (auto a = ancilla_at({p.row - 1, p.col + 1})) return a;
    }
    if (auto a = neighbor_ancilla(p, Side::Top)) return a;
    for (Side s : kAllSides) {
        if (auto a = neighbor_ancilla(p, s)) return a;
    }
    return std::nullopt;
}

std::string Fabric::to_json(std::span<const EdgeOrientation> orientations) const {
    nlohmann::json grid = nlohmann::json::array();
    for (int r = 0; r < rows_; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < cols_; ++c) {
            const Tile& t = tile({r, c});
            switch (t.role) {
                case TileRole::Data: row.push_back("D" + std::to_string(t.index)); break;
                case TileRole::Ancilla: row.push_back("A" + std::to_string(t.index)); break;
                case TileRole::Absent: row.push_back("."); break;
            }
        }
        grid.push_back(std::move(row));
    }
    nlohmann::json orient = nlohmann::json::array();
    for (QubitId q = 0; q < data_pos_.size(); ++q) {
        const EdgeOrientation o = q < orientations.size() ? orientations[q] : EdgeOrientation::HorizontalZ;
        orient.push_back(o == EdgeOrientation::HorizontalZ ? "horizontal_z" : "vertical_z");
    }
    nlohmann::json j;
    j["rows"] = rows_;
    j["cols"] = cols_;
    j["tiles"] = std::move(grid);
    j["orientation"] = std::move(orient);
    j["compressed"] = num_compressed();
    return j.dump();
}

// Layout for a given compressed set. With nothing compressed this is the
// plain block grid; otherwise block rows are packed (a compressed block is one
// column wide), strips are padded with ancillas to a common width and a full
// ancilla column is appended on the right.
Fabric build_star_layout(std::size_t n, const std::vector<bool>& compressed) {
    const auto block_cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const std::size_t block_rows = (n + block_cols - 1) / block_cols;
    const bool any = std::find(compressed.begin(), compressed.end(), true) != compressed.end();

    std::vector<std::size_t> row_width(block_rows, 0);
    for (std::size_t q = 0; q < n; ++q) row_width[q / block_cols] += compressed[q] ? 1 : 2;

    const int rows = static_cast<int>(2 * block_rows);
    int cols = 0;
    std::size_t strip_width = 0;
    if (any) {
        strip_width = *std::max_element(row_width.begin(), row_width.end());
        cols = static_cast<int>(strip_width + 1);
    } else {
        cols = static_cast<int>(2 * block_cols);
    }

    std::vector<TileRole> roles(static_cast<std::size_t>(rows * cols), TileRole::Absent);
    auto at = [&](std::size_t r, std::size_t c) -> TileRole& { return roles[r * static_cast<std::size_t>(cols) + c]; };

    for (std::size_t br = 0; br < block_rows; ++br) {
        const std::size_t top = 2 * br;
        const std::size_t bottom = top + 1;
        std::size_t x = 0;
        for (std::size_t q = br * block_cols; q < std::min(n, (br + 1) * block_cols); ++q) {
            at(top, x) = TileRole::Ancilla;
            at(bottom, x) = TileRole::Data;
            if (!compressed[q]) {
                at(top, x + 1) = TileRole::Ancilla;
                at(bottom, x + 1) = TileRole::Ancilla;
                x += 2;
            } else {
                x += 1;
            }
        }
        if (any) {
            for (std::size_t c = x; c < strip_width; ++c) at(top, c) = TileRole::Ancilla;
            at(top, strip_width) = TileRole::Ancilla;
            at(bottom, strip_width) = TileRole::Ancilla;
        }
    }

    std::vector<QubitId> order(n);
    std::iota(order.begin(), order.end(), QubitId{0});
    Fabric f = Fabric::from_roles(rows, cols, roles, order);
    f.block_cols_ = block_cols;
    f.compressed_ = compressed;
    return f;
}

Fabric build_star_grid(std::size_t num_qubits) {
    if (num_qubits == 0) throw std::invalid_argument("fabric needs at least one qubit");
    return build_star_layout(num_qubits, std::vector<bool>(num_qubits, false));
}

std::pair<Fabric, CompressionPlan> compress(const Fabric& fabric, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("compression fraction must be in [0,1]");
    const std::size_t n = fabric.num_data();
    const auto target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));

    std::vector<bool> compressed(n, false);
    std::vector<QubitId> free;
    for (QubitId q = 0; q < n; ++q) {
        compressed[q] = fabric.is_compressed(q);
        if (!compressed[q]) free.push_back(q);
    }
    // Partial Fisher-Yates over the uncompressed qubits.
    SimRng rng(seed);
    std::size_t count = n - free.size();
    for (std::size_t i = 0; count < target && i < free.size(); ++i, ++count) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(free.size() - i));
        std::swap(free[i], free[j]);
        compressed[free[i]] = true;
    }

    CompressionPlan plan{fraction, seed, {}};
    for (QubitId q = 0; q < n; ++q) {
        if (compressed[q]) plan.compressed_set.push_back(q);
    }
    if (plan.compressed_set.size() == fabric.num_compressed()) return {fabric, plan};

    Fabric out = build_star_layout(n, compressed);
    out.validate();
    return {std::move(out), std::move(plan)};
}

EdgeRotationEffect rotate_edges(const Fabric& fabric, QubitId q, EdgeOrientation current) {
    const Position p = fabric.data_position(q);
    for (Side s : kAllSides) {
        if (fabric.neighbor_ancilla(p, s)) return {3, 1, swapped(current)};
    }
    throw std::logic_error("edge rotation on data qubit " + std::to_string(q) + " without adjacent ancilla");
}

}  // namespace latsched
