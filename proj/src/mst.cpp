// SPDX-License-Identifier: Apache-2.0
#include "latsched/routing.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace latsched {

AncillaGraph AncillaGraph::from(const Fabric& fabric) {
    return AncillaGraph{fabric.num_ancilla(), fabric.ancilla_edges()};
}

AncillaGraph AncillaGraph::grid(int rows, int cols) {
    AncillaGraph g;
    g.num_nodes = static_cast<std::size_t>(rows * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const auto id = static_cast<AncillaId>(r * cols + c);
            if (c + 1 < cols) g.edges.emplace_back(id, id + 1);
            if (r + 1 < rows) g.edges.emplace_back(id, static_cast<AncillaId>(id + cols));
        }
    }
    return g;
}

std::vector<double> edge_weights(const AncillaGraph& g, std::span<const double> activity) {
    std::vector<double> w(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        w[e] = std::max(activity[g.edges[e].first], activity[g.edges[e].second]);
    }
    return w;
}

namespace {

struct Dsu {
    std::vector<std::uint32_t> parent;
    explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

constexpr std::uint32_t kNoEdge = ~std::uint32_t{0};

// Strict weight order with edge id as tie-break.
bool lighter(const std::vector<double>& w, std::uint32_t a, std::uint32_t b) {
    return w[a] != w[b] ? w[a] < w[b] : a < b;
}

}  // namespace

SpanningTree::SpanningTree(const AncillaGraph& g, std::vector<std::uint32_t> edge_ids, std::vector<double> weights)
    : graph_(&g), edge_ids_(std::move(edge_ids)), weights_(std::move(weights)) {
    const std::size_t n = g.num_nodes;
    in_tree_.assign(g.edges.size(), 0);
    std::vector<std::vector<std::pair<AncillaId, std::uint32_t>>> adj(n);
    for (std::uint32_t e : edge_ids_) {
        in_tree_[e] = 1;
        adj[g.edges[e].first].emplace_back(g.edges[e].second, e);
        adj[g.edges[e].second].emplace_back(g.edges[e].first, e);
    }
    parent_.assign(n, 0);
    parent_edge_.assign(n, kNoEdge);
    depth_.assign(n, ~std::uint32_t{0});
    if (n == 0) return;
    std::vector<AncillaId> order{0};
    depth_[0] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const AncillaId u = order[i];
        for (const auto& [v, e] : adj[u]) {
            if (depth_[v] != ~std::uint32_t{0}) continue;
            depth_[v] = depth_[u] + 1;
            parent_[v] = u;
            parent_edge_[v] = e;
            order.push_back(v);
        }
    }
    if (order.size() != n || edge_ids_.size() + 1 != n) throw std::logic_error("edge set is not a spanning tree");
}

double SpanningTree::total_weight() const {
    double total = 0.0;
    for (std::uint32_t e : edge_ids_) total += weights_[e];
    return total;
}

TreePath SpanningTree::path(AncillaId a, AncillaId b) const {
    std::vector<AncillaId> up_a{a};
    std::vector<AncillaId> up_b{b};
    std::vector<std::uint32_t> edges_a;
    std::vector<std::uint32_t> edges_b;
    AncillaId x = a;
    AncillaId y = b;
    while (depth_[x] > depth_[y]) {
        edges_a.push_back(parent_edge_[x]);
        x = parent_[x];
        up_a.push_back(x);
    }
    while (depth_[y] > depth_[x]) {
        edges_b.push_back(parent_edge_[y]);
        y = parent_[y];
        up_b.push_back(y);
    }
    while (x != y) {
        edges_a.push_back(parent_edge_[x]);
        x = parent_[x];
        up_a.push_back(x);
        edges_b.push_back(parent_edge_[y]);
        y = parent_[y];
        up_b.push_back(y);
    }
    TreePath p;
    p.nodes = std::move(up_a);
    p.nodes.insert(p.nodes.end(), up_b.rbegin() + 1, up_b.rend());
    p.edges = std::move(edges_a);
    p.edges.insert(p.edges.end(), edges_b.rbegin(), edges_b.rend());
    return p;
}

double SpanningTree::bottleneck(AncillaId a, AncillaId b) const {
    double best = 0.0;
    for (std::uint32_t e : path(a, b).edges) best = std::max(best, weights_[e]);
    return best;
}

MstSnapshot compute_mst(const AncillaGraph& g, std::vector<double> weights, std::int64_t as_of,
                        std::int64_t ready_at) {
    if (weights.size() != g.edges.size()) throw std::invalid_argument("weight vector size mismatch");
    std::vector<std::uint32_t> order(g.edges.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return lighter(weights, a, b); });
    Dsu dsu(g.num_nodes);
    std::vector<std::uint32_t> chosen;
    chosen.reserve(g.num_nodes);
    for (std::uint32_t e : order) {
        if (dsu.unite(g.edges[e].first, g.edges[e].second)) chosen.push_back(e);
    }
    if (g.num_nodes == 0 || chosen.size() + 1 != g.num_nodes) {
        throw std::invalid_argument("ancilla graph is disconnected");
    }
    std::sort(chosen.begin(), chosen.end());
    return MstSnapshot{SpanningTree(g, std::move(chosen), std::move(weights)), as_of, ready_at};
}

MstSnapshot incremental_update(const MstSnapshot& snapshot, const AncillaGraph& g, std::uint32_t edge_id,
                               double new_weight) {
    if (edge_id >= g.edges.size()) throw std::out_of_range("edge id out of range");
    const SpanningTree& tree = snapshot.tree;
    std::vector<double> w = tree.weights();
    const double old = w[edge_id];
    w[edge_id] = new_weight;
    std::vector<std::uint32_t> edges = tree.edge_ids();
    std::uint32_t drop = kNoEdge;
    std::uint32_t add = kNoEdge;

    if (tree.contains(edge_id) && new_weight > old) {
        // Cut the edge and reconnect with the lightest edge across the cut.
        const std::size_t n = g.num_nodes;
        std::vector<std::vector<AncillaId>> adj(n);
        for (std::uint32_t e : edges) {
            if (e == edge_id) continue;
            adj[g.edges[e].first].push_back(g.edges[e].second);
            adj[g.edges[e].second].push_back(g.edges[e].first);
        }
        std::vector<char> side(n, 0);
        std::vector<AncillaId> stack{g.edges[edge_id].first};
        side[stack.back()] = 1;
        while (!stack.empty()) {
            const AncillaId u = stack.back();
            stack.pop_back();
            for (AncillaId v : adj[u]) {
                if (!side[v]) {
                    side[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        std::uint32_t best = edge_id;
        for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
            if (side[g.edges[e].first] != side[g.edges[e].second] && lighter(w, e, best)) best = e;
        }
        if (best != edge_id && w[best] < new_weight) {
            drop = edge_id;
            add = best;
        }
    } else if (!tree.contains(edge_id) && new_weight < old) {
        // Insert the edge and drop the heaviest edge of the cycle it closes.
        const TreePath p = tree.path(g.edges[edge_id].first, g.edges[edge_id].second);
        std::uint32_t worst = kNoEdge;
        for (std::uint32_t e : p.edges) {
            if (worst == kNoEdge || lighter(w, worst, e)) worst = e;
        }
        if (worst != kNoEdge && w[worst] > new_weight) {
            drop = worst;
            add = edge_id;
        }
    }
    if (drop != kNoEdge) {
        std::erase(edges, drop);
        edges.insert(std::lower_bound(edges.begin(), edges.end(), add), add);
    }
    return MstSnapshot{SpanningTree(g, std::move(edges), std::move(w)), snapshot.as_of_cycle, snapshot.ready_at_cycle};
}

TreePath minimax_path(const MstSnapshot& snapshot, AncillaId a, AncillaId b) { return snapshot.tree.path(a, b); }

TreePath shortest_minimax_path(const MstSnapshot& snapshot, AncillaId a, AncillaId b) {
    const SpanningTree& tree = snapshot.tree;
    const AncillaGraph& g = *tree.graph();
    const double limit = tree.bottleneck(a, b);
    const auto& w = tree.weights();
    std::vector<std::vector<std::pair<AncillaId, std::uint32_t>>> adj(g.num_nodes);
    for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
        if (w[e] > limit) continue;
        adj[g.edges[e].first].emplace_back(g.edges[e].second, e);
        adj[g.edges[e].second].emplace_back(g.edges[e].first, e);
    }
    for (auto& l : adj) std::sort(l.begin(), l.end());
    std::vector<std::uint32_t> via(g.num_nodes, kNoEdge);
    std::vector<AncillaId> prev(g.num_nodes, a);
    std::vector<char> seen(g.num_nodes, 0);
    std::vector<AncillaId> frontier{a};
    seen[a] = 1;
    for (std::size_t i = 0; i < frontier.size() && !seen[b]; ++i) {
        const AncillaId u = frontier[i];
        for (const auto& [v, e] : adj[u]) {
            if (seen[v]) continue;
            seen[v] = 1;
            prev[v] = u;
            via[v] = e;
            frontier.push_back(v);
        }
    }
    TreePath p;
    for (AncillaId x = b; x != a; x = prev[x]) {
        p.nodes.push_back(x);
        p.edges.push_back(via[x]);
    }
    p.nodes.push_back(a);
    std::reverse(p.nodes.begin(), p.nodes.end());
    std::reverse(p.edges.begin(), p.edges.end());
    return p;
}

MstPipeline::MstPipeline(const AncillaGraph& g, int k, int tau, MstMode mode)
    : graph_(&g), k_(k), tau_(tau), mode_(mode),
      bootstrap_(compute_mst(g, std::vector<double>(g.edges.size(), 0.0), 0, 0)) {
    if (k <= 0 || tau < 0) throw std::invalid_argument("MST period must be positive and latency non-negative");
}

void MstPipeline::tick(std::int64_t cycle, std::span<const double> activity) {
    if (cycle % k_ == 0) {
        std::vector<double> w = edge_weights(*graph_, activity);
        MstSnapshot snap;
        if (mode_ == MstMode::Full) {
            snap = compute_mst(*graph_, std::move(w), cycle, cycle + tau_);
        } else {
            snap = last_started_ ? *last_started_ : bootstrap_;
            for (std::uint32_t e = 0; e < w.size(); ++e) {
                if (snap.tree.weights()[e] != w[e]) snap = incremental_update(snap, *graph_, e, w[e]);
            }
            snap.as_of_cycle = cycle;
            snap.ready_at_cycle = cycle + tau_;
        }
        if (mode_ == MstMode::Incremental) last_started_ = snap;
        snapshots_.push_back(std::move(snap));
        ++started_;
    }
    while (snapshots_.size() >= 2 && snapshots_[1].ready_at_cycle <= cycle) snapshots_.pop_front();
}

const MstSnapshot& MstPipeline::query(std::int64_t cycle) const {
    const MstSnapshot* best = &bootstrap_;
    for (const auto& s : snapshots_) {
        if (s.ready_at_cycle <= cycle) best = &s;
    }
    return *best;
}

std::size_t MstPipeline::in_flight(std::int64_t cycle) const {
    return static_cast<std::size_t>(std::count_if(snapshots_.begin(), snapshots_.end(),
                                                  [cycle](const MstSnapshot& s) { return s.ready_at_cycle > cycle; }));
}

}  // namespace latsched
