// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "latsched/circuit.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace latsched {

using AncillaId = std::uint32_t;

enum class TileRole : std::uint8_t { Data, Ancilla, Absent };
enum class Side : std::uint8_t { Top, Right, Bottom, Left };
enum class EdgeType : std::uint8_t { X, Z };

inline constexpr std::array<Side, 4> kAllSides{Side::Top, Side::Right, Side::Bottom, Side::Left};

/// Boundary assignment of a data tile. Opposite sides always carry the same
/// label, so the whole state is which pair is Z.
enum class EdgeOrientation : std::uint8_t {
    HorizontalZ,  // top/bottom are Z edges, left/right are X edges (default)
    VerticalZ,
};

EdgeType edge_type(EdgeOrientation orientation, Side side);
inline EdgeOrientation swapped(EdgeOrientation o) {
    return o == EdgeOrientation::HorizontalZ ? EdgeOrientation::VerticalZ : EdgeOrientation::HorizontalZ;
}

struct Position {
    int row = 0;
    int col = 0;

    Position step(Side side) const;
    bool operator==(const Position&) const = default;
};

struct Tile {
    TileRole role = TileRole::Absent;
    std::uint32_t index = 0;  // program qubit for Data, ancilla id for Ancilla
};

/// 2D grid of surface-code tiles. Ancilla ids are assigned in row-major
/// order; ancilla edges are 4-adjacent ancilla pairs ordered by (lower id,
/// higher id), which is also their tie-break order for spanning trees.
class Fabric {
  public:
    /// Builds a fabric from a row-major role grid. data_qubits lists the
    /// program qubit for each Data tile in row-major order of appearance.
    static Fabric from_roles(int rows, int cols, const std::vector<TileRole>& roles,
                             const std::vector<QubitId>& data_qubits);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool in_bounds(Position p) const { return p.row >= 0 && p.col >= 0 && p.row < rows_ && p.col < cols_; }
    const Tile& tile(Position p) const { return tiles_[static_cast<std::size_t>(p.row * cols_ + p.col)]; }

    std::size_t num_data() const { return data_pos_.size(); }
    std::size_t num_ancilla() const { return ancilla_pos_.size(); }
    Position data_position(QubitId q) const { return data_pos_.at(q); }
    Position ancilla_position(AncillaId a) const { return ancilla_pos_.at(a); }

    std::optional<AncillaId> ancilla_at(Position p) const;
    std::optional<AncillaId> neighbor_ancilla(Position p, Side side) const;
    /// Ancillas adjacent to data qubit q through edges of the given type.
    std::vector<AncillaId> edge_ancillas(QubitId q, EdgeOrientation o, EdgeType type) const;
    bool adjacent(AncillaId a, AncillaId b) const;
    /// Side of data qubit q that ancilla a touches, if adjacent.
    std::optional<Side> side_of(QubitId q, AncillaId a) const;

    const std::vector<std::vector<AncillaId>>& ancilla_adjacency() const { return adjacency_; }
    const std::vector<std::pair<AncillaId, AncillaId>>& ancilla_edges() const { return edges_; }

    bool ancilla_connected() const;
    /// Throws std::logic_error if the ancilla subgraph is disconnected or a
    /// data tile has no adjacent ancilla.
    void validate() const;

    /// STAR block bookkeeping (set by build_star_grid / compress).
    std::size_t block_cols() const { return block_cols_; }
    bool is_compressed(QubitId q) const { return !compressed_.empty() && compressed_.at(q); }
    std::size_t num_compressed() const;

    /// The tile the static baselines prepare |m_theta> on: the up-right
    /// diagonal of the data tile (the STAR block's resource tile).
    std::optional<AncillaId> star_prep_tile(QubitId q) const;

    /// JSON layout dump: tile roles and data orientations.
    std::string to_json(std::span<const EdgeOrientation> orientations) const;

  private:
    friend Fabric build_star_layout(std::size_t, const std::vector<bool>&);

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Tile> tiles_;
    std::vector<Position> data_pos_;
    std::vector<Position> ancilla_pos_;
    std::vector<std::vector<AncillaId>> adjacency_;
    std::vector<std::pair<AncillaId, AncillaId>> edges_;
    std::size_t block_cols_ = 0;
    std::vector<bool> compressed_;
};

/// Near-square grid of 2x2 STAR blocks (data bottom-left, three ancillas),
/// program qubit i in block i (row-major). Unused block slots of the last
/// block row are Absent.
Fabric build_star_grid(std::size_t num_qubits);

struct CompressionPlan {
    double fraction = 0.0;
    std::uint64_t seed = 0;
    std::vector<QubitId> compressed_set;  // sorted
};

/// Replaces round(fraction * n) randomly chosen 2x2 blocks by 2x1 blocks
/// (ancilla above data). Compressed block rows are packed left to right, the
/// ancilla strip above each block row is extended to a common width, and a
/// full ancilla column is kept at the right edge so the ancilla subgraph
/// stays connected. Already-compressed qubits stay compressed.
std::pair<Fabric, CompressionPlan> compress(const Fabric& fabric, double fraction, std::uint64_t seed);

struct EdgeRotationEffect {
    int duration_cycles = 3;
    int ancilla_needed = 1;
    EdgeOrientation orientation_after = EdgeOrientation::HorizontalZ;
};

/// Cost and result of an edge-rotation on data qubit q. Throws
/// std::logic_error if q has no adjacent ancilla.
EdgeRotationEffect rotate_edges(const Fabric& fabric, QubitId q, EdgeOrientation current);

}  // namespace latsched
