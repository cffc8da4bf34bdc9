// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "latsched/fabric.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace latsched {

/// Per-ancilla sliding window of busy bits over the last `window` cycles.
class ActivityTracker {
  public:
    ActivityTracker(std::size_t num_ancilla, int window);

    /// Records one cycle. Cycles must be strictly increasing; recording the
    /// same cycle twice throws std::logic_error.
    void record(std::int64_t cycle, std::span<const char> busy);
    double activity(AncillaId a) const { return static_cast<double>(count_[a]) / window_; }
    std::vector<double> activities() const;
    int window() const { return window_; }
    std::optional<std::int64_t> last_cycle() const { return last_; }

  private:
    int window_;
    std::size_t slot_ = 0;
    std::vector<std::vector<char>> ring_;  // ring_[slot][ancilla]
    std::vector<int> count_;
    std::optional<std::int64_t> last_;
};

/// Ancilla graph of a fabric: nodes are ancilla ids, edge ids index
/// fabric.ancilla_edges().
struct AncillaGraph {
    std::size_t num_nodes = 0;
    std::vector<std::pair<AncillaId, AncillaId>> edges;

    static AncillaGraph from(const Fabric& fabric);
    /// Rectangular grid of rows x cols ancillas (row-major ids).
    static AncillaGraph grid(int rows, int cols);
};

/// weight(u,v) = max(activity(u), activity(v)).
std::vector<double> edge_weights(const AncillaGraph& g, std::span<const double> activity);

struct TreePath {
    std::vector<AncillaId> nodes;      // from a to b inclusive
    std::vector<std::uint32_t> edges;  // edge ids along the path
};

/// Rooted spanning tree with parent/depth arrays for path queries.
class SpanningTree {
  public:
    SpanningTree() = default;
    SpanningTree(const AncillaGraph& g, std::vector<std::uint32_t> edge_ids, std::vector<double> weights);

    const AncillaGraph* graph() const { return graph_; }
    const std::vector<std::uint32_t>& edge_ids() const { return edge_ids_; }
    const std::vector<double>& weights() const { return weights_; }
    bool contains(std::uint32_t edge_id) const { return in_tree_[edge_id] != 0; }
    double total_weight() const;
    TreePath path(AncillaId a, AncillaId b) const;
    /// Max edge weight along the tree path (0 for a == b).
    double bottleneck(AncillaId a, AncillaId b) const;

  private:
    const AncillaGraph* graph_ = nullptr;
    std::vector<std::uint32_t> edge_ids_;
    std::vector<double> weights_;  // per graph edge
    std::vector<char> in_tree_;
    std::vector<AncillaId> parent_;
    std::vector<std::uint32_t> parent_edge_;
    std::vector<std::uint32_t> depth_;
};

struct MstSnapshot {
    SpanningTree tree;
    std::int64_t as_of_cycle = 0;
    std::int64_t ready_at_cycle = 0;
};

/// Kruskal; equal weights are ordered by edge id. Throws std::invalid_argument
/// on a disconnected graph. The graph must outlive the snapshot.
MstSnapshot compute_mst(const AncillaGraph& g, std::vector<double> weights, std::int64_t as_of = 0,
                        std::int64_t ready_at = 0);

/// Applies one edge-weight change to a minimum spanning tree:
/// a non-tree edge that drops below the heaviest edge of its tree cycle
/// replaces that edge; a tree edge that grows is swapped for the lightest
/// edge across the cut if that one is lighter. Other changes keep the tree.
MstSnapshot incremental_update(const MstSnapshot& snapshot, const AncillaGraph& g, std::uint32_t edge_id,
                               double new_weight);

/// The tree path between a and b (a single node, no edges, when a == b).
TreePath minimax_path(const MstSnapshot& snapshot, AncillaId a, AncillaId b);

/// Fewest-hop path from a to b using only graph edges no heavier than the
/// tree-path bottleneck, so it is still a minimax path. With uniform weights
/// this is plain shortest-path routing. BFS visits neighbours by ascending id.
TreePath shortest_minimax_path(const MstSnapshot& snapshot, AncillaId a, AncillaId b);

enum class MstMode { Full, Incremental };

/// Starts an MST computation every k cycles on the current activity; a
/// computation started at cycle s becomes usable at s + tau. Before the first
/// one is ready a uniform-weight tree is served.
class MstPipeline {
  public:
    MstPipeline(const AncillaGraph& g, int k, int tau, MstMode mode = MstMode::Full);

    /// Called once per cycle, in increasing order, with the activity as of
    /// that cycle.
    void tick(std::int64_t cycle, std::span<const double> activity);
    const MstSnapshot& query(std::int64_t cycle) const;
    std::size_t in_flight(std::int64_t cycle) const;
    std::size_t computations_started() const { return started_; }

  private:
    const AncillaGraph* graph_;
    int k_;
    int tau_;
    MstMode mode_;
    MstSnapshot bootstrap_;
    std::deque<MstSnapshot> snapshots_;  // ordered by ready time
    std::optional<MstSnapshot> last_started_;
    std::size_t started_ = 0;
};

struct PathChoice {
    AncillaId control_ancilla = 0;
    AncillaId target_ancilla = 0;
    std::vector<AncillaId> path;  // control_ancilla ... target_ancilla
    bool rotate_control = false;
    bool rotate_target = false;
    double expected_completion = 0.0;
};

/// Tries every (control neighbour, target neighbour) ancilla pair in side
/// order Top, Right, Bottom, Left. The control must present its Z edge and
/// the target its X edge, otherwise an edge rotation (3 cycles) is charged.
/// Completion = 3 r_C + 3 r_T + 2 + max over path ancillas of expected_free.
/// Ties keep the first pair found. Returns nullopt if either qubit has no
/// adjacent ancilla.
std::optional<PathChoice> select_best_path(const Fabric& fabric, QubitId control, QubitId target,
                                           EdgeOrientation control_orientation,
                                           EdgeOrientation target_orientation, const MstSnapshot& snapshot,
                                           std::span<const double> expected_free);

}  // namespace latsched
